use alloc::vec::Vec;
use core::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MecError;
use crate::eval::Evaluator;
use crate::families::{self, FamilySpec};
use crate::logic::{Formula, Signature, SortId};
use crate::structures::{Element, FiniteStructure};
use crate::util::Odometer;

/// Largest number of pointed structures in one grid.
pub const MAX_GRID_POINTS: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridPoint {
    /// Position of `M` in the grid's structure list.
    pub structure: usize,
    pub params: Vec<Element>,
}

/// Per-structure cap on parameter tuples, drawn with a seeded generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub cap: usize,
    pub seed: u64,
}

/// A finite sample of `C(m)`. Points are grouped by structure, in structure
/// order, with parameter tuples in odometer order (last coordinate fastest).
#[derive(Clone, Debug)]
pub struct PointedGrid {
    /// The family the structures come from, if any.
    pub spec: Option<FamilySpec>,
    /// One index vector per structure; the family index when there is a
    /// family.
    pub labels: Vec<Vec<u64>>,
    pub structures: Vec<FiniteStructure>,
    pub param_sorts: Vec<SortId>,
    pub points: Vec<GridPoint>,
    pub sampling: Option<Sampling>,
    starts: Vec<usize>,
}

impl PointedGrid {
    /// Every parameter tuple in every member at `indices`.
    pub fn new(spec: &FamilySpec, indices: &[Vec<u64>], param_sorts: &[SortId]) -> Result<Self, MecError> {
        Self::build(spec, indices, param_sorts, None)
    }

    /// At most `cap` parameter tuples per member, chosen uniformly without
    /// replacement from a generator seeded with `seed`.
    pub fn sampled(spec: &FamilySpec, indices: &[Vec<u64>], param_sorts: &[SortId], cap: usize, seed: u64) -> Result<Self, MecError> {
        Self::build(spec, indices, param_sorts, Some(Sampling { cap, seed }))
    }

    fn build(spec: &FamilySpec, indices: &[Vec<u64>], param_sorts: &[SortId], sampling: Option<Sampling>) -> Result<Self, MecError> {
        let structures = indices.iter().map(|i| families::generate(spec, i)).collect::<Result<Vec<_>, _>>()?;
        let mut g = Self::assemble(indices.to_vec(), structures, param_sorts, sampling)?;
        g.spec = Some(spec.clone());
        Ok(g)
    }

    /// A grid over arbitrary structures sharing one signature.
    pub fn from_structures(labels: Vec<Vec<u64>>, structures: Vec<FiniteStructure>, param_sorts: &[SortId]) -> Result<Self, MecError> {
        if labels.len() != structures.len() {
            return Err(MecError::Precondition("one label per structure"));
        }
        Self::assemble(labels, structures, param_sorts, None)
    }

    fn assemble(
        labels: Vec<Vec<u64>>,
        structures: Vec<FiniteStructure>,
        param_sorts: &[SortId],
        sampling: Option<Sampling>,
    ) -> Result<Self, MecError> {
        if let Some(first) = structures.first() {
            if structures.iter().any(|m| m.signature() != first.signature()) {
                return Err(MecError::SignatureMismatch);
            }
            if param_sorts.iter().any(|&s| s >= first.signature().sorts().len()) {
                return Err(MecError::Precondition("parameter sort not in the signature"));
            }
        }
        let total: u128 = structures
            .iter()
            .map(|m| {
                let all = param_sorts.iter().fold(1u128, |acc, &s| acc.saturating_mul(m.size(s) as u128));
                sampling.map_or(all, |s| all.min(s.cap as u128))
            })
            .sum();
        if total > MAX_GRID_POINTS {
            return Err(MecError::GridTooLarge(total));
        }
        let mut rng = sampling.map(|s| ChaCha8Rng::seed_from_u64(s.seed));
        let mut points = Vec::with_capacity(total as usize);
        let mut starts = Vec::with_capacity(structures.len() + 1);
        for (k, m) in structures.iter().enumerate() {
            starts.push(points.len());
            let radices: Vec<usize> = param_sorts.iter().map(|&s| m.size(s)).collect();
            let all: usize = radices.iter().product();
            match (&mut rng, sampling) {
                (Some(rng), Some(s)) if all > s.cap => {
                    let mut chosen = rand::seq::index::sample(rng, all, s.cap).into_vec();
                    chosen.sort_unstable();
                    for mut code in chosen {
                        let mut params = alloc::vec![0; radices.len()];
                        for (slot, &r) in params.iter_mut().zip(&radices).rev() {
                            *slot = (code % r) as Element;
                            code /= r;
                        }
                        points.push(GridPoint { structure: k, params });
                    }
                }
                _ => {
                    let mut odo = Odometer::new(radices);
                    while let Some(t) = odo.next_tuple() {
                        points.push(GridPoint { structure: k, params: t.to_vec() });
                    }
                }
            }
        }
        starts.push(points.len());
        Ok(PointedGrid { spec: None, labels, structures, param_sorts: param_sorts.to_vec(), points, sampling, starts })
    }

    /// The same structures with every tuple of the given parameter sorts.
    pub fn with_params(&self, param_sorts: &[SortId]) -> Result<Self, MecError> {
        let mut g = Self::assemble(self.labels.clone(), self.structures.clone(), param_sorts, None)?;
        g.spec = self.spec.clone();
        Ok(g)
    }

    pub fn arity(&self) -> usize {
        self.param_sorts.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn signature(&self) -> Option<&Signature> {
        self.structures.first().map(FiniteStructure::signature)
    }

    /// Point indices belonging to structure `k`.
    pub fn points_of(&self, k: usize) -> Range<usize> {
        self.starts[k]..self.starts[k + 1]
    }

    pub fn structure_of(&self, point: usize) -> &FiniteStructure {
        &self.structures[self.points[point].structure]
    }

    /// Whether two grids list the same structures.
    pub fn same_structures(&self, other: &PointedGrid) -> bool {
        self.labels == other.labels && self.structures.len() == other.structures.len()
    }

    pub(crate) fn check_formula(&self, phi: &Formula) -> Result<(), MecError> {
        if phi.param_sorts() != self.param_sorts {
            return Err(MecError::ParamSorts { expected: self.param_sorts.clone(), found: phi.param_sorts() });
        }
        Ok(())
    }
}

/// `|phi(M, a)|` at every grid point.
pub fn count_grid(grid: &PointedGrid, phi: &Formula) -> Result<Vec<u64>, MecError> {
    grid.check_formula(phi)?;
    let mut out = Vec::with_capacity(grid.len());
    for (k, m) in grid.structures.iter().enumerate() {
        let mut ev = Evaluator::new(m, phi)?;
        for p in grid.points_of(k) {
            out.push(ev.count(&grid.points[p].params)?.to_u64().ok_or(MecError::CountOverflow)?);
        }
    }
    Ok(out)
}
