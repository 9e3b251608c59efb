//! Finite many-sorted structures.
//!
//! Elements of each sort are the ids `0..size`; a tuple of a relation or an
//! argument list of a function is a slice of such ids, one per position of
//! the symbol's profile. Symmetry code that needs a single index space uses
//! global ids: `offset(sort) + id`.

mod builder;
mod constructions;

pub use builder::{StructureBuilder, Violation};
pub use constructions::{
    block_signature, disjoint_union, expand_with_constants, induced_substructure, lift_to_union, reduct,
    Embedding, StructureError,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::logic::{LogicError, Signature, SortId};
use crate::util::BitSet;

pub type Element = u32;

/// Above this many cells a relation keeps only its sorted tuple list.
const DENSE_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    radices: Vec<usize>,
    /// Tuples concatenated, sorted lexicographically, no duplicates.
    tuples: Vec<Element>,
    len: usize,
    dense: Option<BitSet>,
}

fn mixed_index(radices: &[usize], t: &[Element]) -> usize {
    t.iter().zip(radices).fold(0, |acc, (&x, &r)| acc * r + x as usize)
}

impl RelationTable {
    fn new(radices: Vec<usize>, mut rows: Vec<Vec<Element>>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        let len = rows.len();
        let cells = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r));
        let dense = cells.filter(|&c| c <= DENSE_LIMIT).map(|c| {
            let mut bits = BitSet::new(c);
            for row in &rows {
                bits.set(mixed_index(&radices, row));
            }
            bits
        });
        RelationTable { radices, tuples: rows.concat(), len, dense }
    }

    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sizes of the argument sorts.
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// Row-major bitset over all argument tuples, when small enough.
    pub fn dense(&self) -> Option<&BitSet> {
        self.dense.as_ref()
    }

    pub fn contains(&self, t: &[Element]) -> bool {
        match &self.dense {
            Some(bits) => bits.get(mixed_index(&self.radices, t)),
            None => {
                let a = self.arity();
                let (mut lo, mut hi) = (0, self.len);
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    match self.tuples[mid * a..(mid + 1) * a].cmp(t) {
                        core::cmp::Ordering::Less => lo = mid + 1,
                        core::cmp::Ordering::Greater => hi = mid,
                        core::cmp::Ordering::Equal => return true,
                    }
                }
                false
            }
        }
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = &[Element]> + '_ {
        let a = self.arity();
        (0..self.len).map(move |i| &self.tuples[i * a..(i + 1) * a])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    radices: Vec<usize>,
    /// Values indexed by the mixed-radix code of the argument tuple.
    values: Vec<Element>,
}

impl FunctionTable {
    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    #[inline]
    pub fn apply(&self, args: &[Element]) -> Element {
        self.values[mixed_index(&self.radices, args)]
    }

    /// All values, indexed like [`crate::util::Odometer`] enumerates the
    /// argument tuples.
    pub fn values(&self) -> &[Element] {
        &self.values
    }
}

/// A finite structure over a many-sorted signature. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    sig: Signature,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    relations: Vec<RelationTable>,
    functions: Vec<FunctionTable>,
    constants: Vec<Element>,
}

impl FiniteStructure {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self, sort: SortId) -> usize {
        self.sizes[sort]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of elements over all sorts.
    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn offset(&self, sort: SortId) -> usize {
        self.offsets[sort]
    }

    pub fn global(&self, sort: SortId, e: Element) -> usize {
        self.offsets[sort] + e as usize
    }

    /// Inverse of [`FiniteStructure::global`].
    pub fn local(&self, g: usize) -> (SortId, Element) {
        let sort = (0..self.sizes.len())
            .find(|&s| g >= self.offsets[s] && g < self.offsets[s] + self.sizes[s])
            .expect("global id out of range");
        (sort, (g - self.offsets[sort]) as Element)
    }

    pub fn relation(&self, r: usize) -> &RelationTable {
        &self.relations[r]
    }

    pub fn function(&self, f: usize) -> &FunctionTable {
        &self.functions[f]
    }

    pub fn constant(&self, c: usize) -> Element {
        self.constants[c]
    }

    #[inline]
    pub fn holds(&self, r: usize, t: &[Element]) -> bool {
        self.relations[r].contains(t)
    }

    #[inline]
    pub fn apply(&self, f: usize, args: &[Element]) -> Element {
        self.functions[f].apply(args)
    }

    /// The same structure with a renamed-but-isomorphic signature (same
    /// symbol order and profiles). Used to move between a signature and its
    /// block copy inside a disjoint union.
    pub fn with_signature(&self, sig: Signature) -> Result<FiniteStructure, LogicError> {
        let same_shape = sig.sorts().len() == self.sig.sorts().len()
            && sig.relations().iter().zip(self.sig.relations()).all(|(a, b)| a.profile == b.profile)
            && sig.functions().iter().zip(self.sig.functions()).all(|(a, b)| a.args == b.args && a.result == b.result)
            && sig.constants().iter().zip(self.sig.constants()).all(|(a, b)| a.sort == b.sort)
            && sig.relations().len() == self.sig.relations().len()
            && sig.functions().len() == self.sig.functions().len()
            && sig.constants().len() == self.sig.constants().len();
        if !same_shape {
            return Err(LogicError::Precondition("signatures differ in shape"));
        }
        Ok(FiniteStructure { sig, ..self.clone() })
    }

    /// Sort sizes as `name=size` pairs.
    pub fn summary(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        for (i, name) in self.sig.sorts().iter().enumerate() {
            let _ = write!(s, "{}{}={}", if i > 0 { " " } else { "" }, name, self.sizes[i]);
        }
        s
    }
}

/// A structure together with a parameter tuple of declared sorts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedStructure {
    pub structure: FiniteStructure,
    pub params: Vec<(SortId, Element)>,
}

impl PointedStructure {
    pub fn new(structure: FiniteStructure, params: Vec<(SortId, Element)>) -> Result<Self, Violation> {
        for &(s, e) in &params {
            if s >= structure.sizes.len() || e as usize >= structure.sizes[s] {
                return Err(Violation::ElementOutOfRange { symbol: String::from("parameter"), sort: s, element: e });
            }
        }
        Ok(PointedStructure { structure, params })
    }

    pub fn elements(&self) -> Vec<Element> {
        self.params.iter().map(|&(_, e)| e).collect()
    }
}
