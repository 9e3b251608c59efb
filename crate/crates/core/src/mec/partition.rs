use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use super::grid::{count_grid, PointedGrid};
use super::MecError;
use crate::eval::{ranked_type_formula, satisfies, Evaluator, RankedType, TypeCache, TypeInterner};
use crate::logic::{build_at_most_sentence, build_exact_count_formula, enumerate_literal_types_sorted, Formula, Node};
use crate::structures::{Element, FiniteStructure};

/// What identifies a part across structures.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartLabel {
    /// A ranked-type code in the result's interner.
    Type(RankedType),
    /// The `i`-th supplied defining formula (literal types among them).
    Designated(usize),
    /// Small structures with exactly this many solutions.
    Exception(u64),
    /// One outer part per inner part, from the projection step.
    Combined(Vec<usize>),
}

impl fmt::Display for PartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartLabel::Type(t) => write!(f, "type_r{}_{}", t.rank, t.id),
            PartLabel::Designated(i) => write!(f, "def{i}"),
            PartLabel::Exception(i) => write!(f, "gamma_{i}"),
            PartLabel::Combined(js) => {
                let js: Vec<alloc::string::String> = js.iter().map(|j| format!("{j}")).collect();
                write!(f, "combined({})", js.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub label: PartLabel,
    /// `psi(; y)`, when emitted.
    pub formula: Option<Formula>,
    /// Grid point indices, ascending.
    pub members: Vec<usize>,
    /// Observed measuring function: structure position to count.
    pub measure: BTreeMap<usize, u64>,
}

/// The size bound below which structures were re-partitioned by count.
#[derive(Clone, Debug)]
pub struct Exceptions {
    pub q: usize,
    pub sigma: Formula,
}

#[derive(Clone, Debug)]
pub struct DefinablePartitionResult {
    pub phi: Formula,
    pub rank: usize,
    pub parts: Vec<Part>,
    pub exceptions: Option<Exceptions>,
    /// Part of each grid point, `None` when the point was left out.
    pub assignment: Vec<Option<usize>>,
    /// Codes for [`PartLabel::Type`] labels.
    pub interner: TypeInterner,
}

impl DefinablePartitionResult {
    /// The part whose ranked type `params` has in `m`, for type partitions.
    pub fn classify(&mut self, m: &FiniteStructure, params: &[Element]) -> Option<usize> {
        let sorts = self.phi.param_sorts();
        let tuple: Vec<_> = sorts.into_iter().zip(params.iter().copied()).collect();
        let t = TypeCache::new(m).ranked_type(&mut self.interner, &tuple, self.rank);
        self.parts.iter().position(|p| p.label == PartLabel::Type(t))
    }

    pub(crate) fn from_groups(phi: &Formula, rank: usize, grid_len: usize, groups: Vec<(PartLabel, Option<Formula>, Vec<usize>)>, grid: &PointedGrid, counts: &[u64]) -> Self {
        let mut assignment = vec![None; grid_len];
        let parts = groups
            .into_iter()
            .enumerate()
            .map(|(i, (label, formula, members))| {
                let mut measure = BTreeMap::new();
                for &p in &members {
                    assignment[p] = Some(i);
                    measure.insert(grid.points[p].structure, counts[p]);
                }
                Part { label, formula, members, measure }
            })
            .collect();
        DefinablePartitionResult { phi: phi.clone(), rank, parts, exceptions: None, assignment, interner: TypeInterner::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOptions {
    pub max_rank: usize,
    /// Reject partitions with more parts than this.
    pub max_parts: Option<usize>,
    /// Attach Hintikka formulas to the parts.
    pub emit_formulas: bool,
    /// Leave out structures whose first sort has fewer elements; see
    /// [`patch_small_structures`].
    pub min_size: usize,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions { max_rank: 2, max_parts: None, emit_formulas: false, min_size: 0 }
    }
}

/// Two pointed structures over the same `M` that a candidate partition puts
/// together although their counts differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub rank: usize,
    pub structure: usize,
    pub a: Vec<Element>,
    pub b: Vec<Element>,
    pub count_a: u64,
    pub count_b: u64,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "structure {}: {:?} has {} solutions, {:?} has {} (rank {})",
            self.structure, self.a, self.count_a, self.b, self.count_b, self.rank
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoPartition {
    pub max_rank: usize,
    /// From the lowest rank at which types failed to determine the count.
    pub counterexample: Option<Counterexample>,
    /// Part counts at each rank at which the counts were consistent but the
    /// partition was rejected (unstable or too many parts).
    pub rejected: Vec<(usize, usize)>,
}

impl fmt::Display for NoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no partition by ranked type up to rank {}", self.max_rank)?;
        if let Some(c) = &self.counterexample {
            write!(f, "; {c}")?;
        }
        Ok(())
    }
}

/// See [`empirical_partition_with_counts`].
pub fn empirical_partition(grid: &PointedGrid, phi: &Formula, opts: &PartitionOptions) -> Result<DefinablePartitionResult, MecError> {
    let counts = count_grid(grid, phi)?;
    empirical_partition_with_counts(grid, phi, &counts, opts)
}

/// The least rank `r <= max_rank` at which grouping by rank-`r` type makes
/// the count a function of `M` in every group, with the same number of
/// groups realised in the two largest structures.
pub fn empirical_partition_with_counts(
    grid: &PointedGrid,
    phi: &Formula,
    counts: &[u64],
    opts: &PartitionOptions,
) -> Result<DefinablePartitionResult, MecError> {
    grid.check_formula(phi)?;
    if counts.len() != grid.len() {
        return Err(MecError::GridMismatch);
    }
    let included: Vec<usize> = (0..grid.structures.len()).filter(|&k| grid.structures[k].size(0) >= opts.min_size).collect();
    let mut by_size = included.clone();
    by_size.sort_by_key(|&k| grid.structures[k].total_size());
    let mut interner = TypeInterner::new();
    let mut caches: Vec<TypeCache> = grid.structures.iter().map(TypeCache::new).collect();
    let mut failure = NoPartition { max_rank: opts.max_rank, counterexample: None, rejected: Vec::new() };
    for rank in 0..=opts.max_rank {
        let mut codes = vec![None; grid.len()];
        let mut seen: HashMap<(u32, usize), usize> = HashMap::new();
        let mut conflict = None;
        'scan: for &k in &included {
            for p in grid.points_of(k) {
                let tuple: Vec<_> = grid.param_sorts.iter().copied().zip(grid.points[p].params.iter().copied()).collect();
                let id = caches[k].ranked_type(&mut interner, &tuple, rank).id;
                codes[p] = Some(id);
                let first = *seen.entry((id, k)).or_insert(p);
                if counts[first] != counts[p] {
                    conflict = Some(Counterexample {
                        rank,
                        structure: k,
                        a: grid.points[first].params.clone(),
                        b: grid.points[p].params.clone(),
                        count_a: counts[first],
                        count_b: counts[p],
                    });
                    break 'scan;
                }
            }
        }
        if let Some(c) = conflict {
            failure.counterexample.get_or_insert(c);
            continue;
        }
        let realised = |k: usize| seen.keys().filter(|&&(_, s)| s == k).count();
        let mut order: Vec<u32> = Vec::new();
        for id in codes.iter().flatten() {
            if !order.contains(id) {
                order.push(*id);
            }
        }
        let stable = match by_size.as_slice() {
            [.., a, b] => realised(*a) == realised(*b),
            _ => true,
        };
        if !stable || opts.max_parts.is_some_and(|t| order.len() > t) {
            failure.rejected.push((rank, order.len()));
            continue;
        }
        let sig = grid.signature().ok_or(MecError::Precondition("empty grid"))?;
        let groups = order
            .iter()
            .map(|&id| {
                let t = RankedType { rank, id };
                let formula = opts.emit_formulas.then(|| ranked_type_formula(t, &interner, sig));
                let members = (0..grid.len()).filter(|&p| codes[p] == Some(id)).collect();
                (PartLabel::Type(t), formula, members)
            })
            .collect();
        let mut result = DefinablePartitionResult::from_groups(phi, rank, grid.len(), groups, grid, counts);
        result.interner = interner;
        return Ok(result);
    }
    Err(failure.into())
}

/// Partition by supplied parameter-only formulas, which must cut the grid
/// into disjoint pieces; fails unless the count is a function of `M` on
/// each piece. Empty pieces are dropped.
pub fn partition_by_formulas(
    grid: &PointedGrid,
    phi: &Formula,
    counts: &[u64],
    defs: &[Formula],
) -> Result<DefinablePartitionResult, MecError> {
    grid.check_formula(phi)?;
    for d in defs {
        if !d.objects.is_empty() {
            return Err(MecError::Precondition("defining formulas take parameters only"));
        }
        grid.check_formula(d)?;
    }
    let mut owner = vec![None; grid.len()];
    for (i, d) in defs.iter().enumerate() {
        for (k, m) in grid.structures.iter().enumerate() {
            let mut ev = Evaluator::new(m, d)?;
            for p in grid.points_of(k) {
                if ev.satisfies(&grid.points[p].params)? {
                    if owner[p].is_some() {
                        return Err(MecError::NotAPartition { point: p, parts: 2 });
                    }
                    owner[p] = Some(i);
                }
            }
        }
    }
    if let Some(p) = owner.iter().position(Option::is_none) {
        return Err(MecError::NotAPartition { point: p, parts: 0 });
    }
    let groups: Vec<_> = defs
        .iter()
        .enumerate()
        .map(|(i, d)| (PartLabel::Designated(i), Some(d.clone()), (0..grid.len()).filter(|&p| owner[p] == Some(i)).collect::<Vec<_>>()))
        .filter(|(_, _, members)| !members.is_empty())
        .collect();
    let result = DefinablePartitionResult::from_groups(phi, 0, grid.len(), groups, grid, counts);
    check_measuring(grid, &result, counts)?;
    Ok(result)
}

/// Partition by the complete literal types of the parameters (relational
/// signatures only).
pub fn literal_type_partition(grid: &PointedGrid, phi: &Formula, counts: &[u64]) -> Result<DefinablePartitionResult, MecError> {
    let sig = grid.signature().ok_or(MecError::Precondition("empty grid"))?;
    let defs: Vec<Formula> = enumerate_literal_types_sorted(sig, &grid.param_sorts)?
        .iter()
        .enumerate()
        .map(|(i, t)| t.to_formula(&format!("lit{i}")))
        .collect();
    partition_by_formulas(grid, phi, counts, &defs)
}

fn check_measuring(grid: &PointedGrid, result: &DefinablePartitionResult, counts: &[u64]) -> Result<(), MecError> {
    for (i, part) in result.parts.iter().enumerate() {
        for &p in &part.members {
            let k = grid.points[p].structure;
            let expected = part.measure[&k];
            if counts[p] != expected {
                let first = *part.members.iter().find(|&&q| grid.points[q].structure == k && counts[q] == expected).expect("measured");
                return Err(MecError::NotMeasuring {
                    part: i,
                    counterexample: Counterexample {
                        rank: result.rank,
                        structure: k,
                        a: grid.points[first].params.clone(),
                        b: grid.points[p].params.clone(),
                        count_a: expected,
                        count_b: counts[p],
                    },
                });
            }
        }
    }
    Ok(())
}

/// Every grid point is in exactly one part and counts agree with the
/// recorded measuring function.
pub fn verify_soundness(grid: &PointedGrid, result: &DefinablePartitionResult, counts: &[u64]) -> Result<(), MecError> {
    if result.assignment.len() != grid.len() || counts.len() != grid.len() {
        return Err(MecError::GridMismatch);
    }
    let mut seen = vec![0usize; grid.len()];
    for part in &result.parts {
        for &p in &part.members {
            seen[p] += 1;
        }
    }
    if let Some(p) = seen.iter().position(|&c| c != 1) {
        return Err(if seen[p] == 0 { MecError::Uncovered(p) } else { MecError::NotAPartition { point: p, parts: seen[p] } });
    }
    check_measuring(grid, result, counts)
}

/// Every emitted `psi` holds exactly at its part's points.
pub fn verify_definitions(grid: &PointedGrid, result: &DefinablePartitionResult) -> Result<(), MecError> {
    for (i, part) in result.parts.iter().enumerate() {
        let Some(psi) = &part.formula else { continue };
        for (k, m) in grid.structures.iter().enumerate() {
            let mut ev = Evaluator::new(m, psi)?;
            for p in grid.points_of(k) {
                let Some(owner) = result.assignment[p] else { continue };
                if ev.satisfies(&grid.points[p].params)? != (owner == i) {
                    return Err(MecError::NotExtensional { part: i, point: p });
                }
            }
        }
    }
    Ok(())
}

/// `f` conjoined with the sentence `sigma` (negated if asked).
fn with_sentence(f: &Formula, sigma: &Formula, negate: bool) -> Formula {
    let s = sigma.body.shifted(0, f.free_count());
    let s = if negate { Node::not(s) } else { s };
    Formula { body: Node::conj(vec![f.body.clone(), s]), ..f.clone() }
}

/// Structures satisfying `sigma_Q` (first sort of size at most `q`) get one
/// part per observed count `i`, defined by `exists!_i x. phi(x, y) & sigma_Q`;
/// every other part keeps its points in larger structures and is conjoined
/// with `!sigma_Q`.
pub fn patch_small_structures(
    grid: &PointedGrid,
    result: &DefinablePartitionResult,
    counts: &[u64],
    q: usize,
) -> Result<DefinablePartitionResult, MecError> {
    if q == 0 {
        return Err(MecError::Precondition("the size bound Q must be at least 1"));
    }
    if result.assignment.len() != grid.len() || counts.len() != grid.len() {
        return Err(MecError::GridMismatch);
    }
    let sig = grid.signature().ok_or(MecError::Precondition("empty grid"))?;
    let sigma = build_at_most_sentence(q, sig.sort_name(0), sig)?;
    let small: Vec<bool> = grid.structures.iter().map(|m| satisfies(m, &sigma, &[])).collect::<Result<_, _>>()?;
    let is_small = |p: usize| small[grid.points[p].structure];
    let mut groups: Vec<(PartLabel, Option<Formula>, Vec<usize>)> = Vec::new();
    for part in &result.parts {
        let members: Vec<usize> = part.members.iter().copied().filter(|&p| !is_small(p)).collect();
        if !members.is_empty() {
            groups.push((part.label.clone(), part.formula.as_ref().map(|f| with_sentence(f, &sigma, true)), members));
        }
    }
    if let Some(p) = (0..grid.len()).find(|&p| !is_small(p) && result.assignment[p].is_none()) {
        return Err(MecError::Uncovered(p));
    }
    let mut by_count: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for p in (0..grid.len()).filter(|&p| is_small(p)) {
        by_count.entry(counts[p]).or_default().push(p);
    }
    for (i, members) in by_count {
        let gamma = build_exact_count_formula(&result.phi, i as usize)?;
        groups.push((PartLabel::Exception(i), Some(with_sentence(&gamma, &sigma, false)), members));
    }
    let mut patched = DefinablePartitionResult::from_groups(&result.phi, result.rank, grid.len(), groups, grid, counts);
    patched.interner = result.interner.clone();
    patched.exceptions = Some(Exceptions { q, sigma });
    Ok(patched)
}
