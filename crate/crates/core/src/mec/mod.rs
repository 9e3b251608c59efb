//! The exact-class checker.
//!
//! A [`PointedGrid`] samples `C(m)`, the pairs `(M, a)` of a family member
//! and an `m`-tuple of parameters. [`empirical_partition`] groups the pairs
//! by ranked type until the count of `phi(M, a)` depends only on `M` inside
//! each group; [`fit_measuring_polynomial`] turns each group's counts into
//! an exact polynomial; [`project`] and [`combine_partitions`] rebuild a
//! partition for `phi(x1..xn; y)` from partitions for fewer objects;
//! [`patch_small_structures`] handles finitely many exceptions; and
//! [`falsify_weak_mec`] hunts for one structure with too many distinct
//! counts. [`polynomial_exact_report`] runs the whole pipeline.

mod combine;
mod falsify;
mod fit;
mod grid;
mod partition;
mod report;

pub use combine::{combine_partitions, project, Projection};
pub use falsify::{falsify_weak_mec, FalsificationWitness, FalsifyBudget, FalsifyOutcome};
pub use fit::{basis_values, fit_measuring_polynomial, observations, split_holdout, Basis, BasisFormula, BasisKind, FitConfig, MeasuringPolynomial, Observation};
pub use grid::{count_grid, GridPoint, PointedGrid, Sampling, MAX_GRID_POINTS};
pub use partition::{
    empirical_partition, empirical_partition_with_counts, literal_type_partition, partition_by_formulas, patch_small_structures,
    verify_definitions, verify_soundness, Counterexample, DefinablePartitionResult, Exceptions, NoPartition, Part, PartLabel,
    PartitionOptions,
};
pub use report::{polynomial_exact_report, polynomial_exact_report_with_counts, FormulaOutcome, FormulaReport, MecConfig, MecReport, PartReport, Verdict};

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::eval::EvalError;
use crate::families::FamilyError;
use crate::geometry::GeometryError;
use crate::logic::LogicError;
use crate::structures::Element;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MecError {
    #[error("{0}")]
    Precondition(&'static str),
    #[error("grid has {0} points, over the limit")]
    GridTooLarge(u128),
    #[error("structures in a grid must share one signature")]
    SignatureMismatch,
    #[error("formula has parameter sorts {found:?}, the grid has {expected:?}")]
    ParamSorts { expected: Vec<usize>, found: Vec<usize> },
    #[error("solution count does not fit in 64 bits")]
    CountOverflow,
    #[error("{0}")]
    NoPartition(Box<NoPartition>),
    #[error("counts are not a function of the structure inside part {part}: {counterexample}")]
    NotMeasuring { part: usize, counterexample: Counterexample },
    #[error("grid point {point} lies in {parts} parts")]
    NotAPartition { point: usize, parts: usize },
    #[error("grid point {0} is in no part")]
    Uncovered(usize),
    #[error("defining formula of part {part} disagrees with membership at grid point {point}")]
    NotExtensional { part: usize, point: usize },
    #[error("partitions were computed on different grids")]
    GridMismatch,
    #[error("combined count {found} differs from the direct count {expected} at grid point {point}")]
    ProjectionMismatch { point: usize, expected: u64, found: u64 },
    #[error("no observations to fit")]
    NoObservations,
    #[error("basis point {0} has two different counts")]
    NotAFunction(usize),
    #[error("basis points have {found} coordinates, expected {expected}")]
    BasisArity { expected: usize, found: usize },
    #[error("no exact polynomial up to total degree {max_degree}; observation {witness} breaks the fit")]
    NoExactFit { max_degree: u32, witness: usize },
    #[error("fit is underdetermined at total degree {degree} ({rank} independent rows, {unknowns} monomials)")]
    Underdetermined { degree: u32, rank: usize, unknowns: usize },
    #[error("basis {0} needs a family")]
    NeedsFamily(&'static str),
    #[error("basis parameters {params:?} are not elements of the structure with index {label:?}")]
    BasisParams { label: Vec<u64>, params: Vec<Element> },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<NoPartition> for MecError {
    fn from(e: NoPartition) -> Self {
        MecError::NoPartition(Box::new(e))
    }
}
