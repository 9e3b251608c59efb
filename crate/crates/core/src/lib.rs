//! Computational finite model theory for multidimensional exact classes.
//!
//! The crate is `no_std` (it needs `alloc`). It covers
//!
//! * [`logic`]: many-sorted signatures, a first-order formula AST with a
//!   counting quantifier, a small textual DSL, and builders for derived
//!   formulas (size bounds, exact-count formulas, literal types);
//! * [`structures`]: finite structures and the constructions on them
//!   (disjoint unions, reducts, constant expansions, induced substructures);
//! * [`eval`]: satisfaction, exact solution counting and bounded-rank
//!   Hintikka codes;
//! * [`symmetry`]: automorphism groups, tuple orbits, homogeneous
//!   substructures and atomic homogeneity;
//! * [`families`]: generators for the indexed classes and their chains;
//! * [`geometry`]: point counts for finite approximations of Lie geometries,
//!   `d*` vectors with exact `sqrt(q)` arithmetic, and envelopes;
//! * [`mec`]: partition discovery, exact polynomial fitting, partition
//!   combination, small-structure patching and falsification.
#![no_std]

extern crate alloc;

pub mod eval;
pub mod families;
pub mod geometry;
pub mod linalg;
pub mod logic;
pub mod mec;
pub mod poly;
pub mod structures;
pub mod symmetry;
mod util;

pub use eval::{ranked_type, satisfies, solution_count, solution_set, RankedType, SolutionCount, TypeInterner};
pub use families::{FamilyKind, FamilySpec};
pub use logic::{parse_formula, Formula, Node, Signature, Term};
pub use structures::{FiniteStructure, StructureBuilder};
