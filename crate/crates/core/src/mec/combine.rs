use alloc::format;
use alloc::vec::Vec;

use super::grid::{count_grid, PointedGrid};
use super::partition::{empirical_partition, DefinablePartitionResult, PartLabel, PartitionOptions};
use super::MecError;
use crate::logic::{Formula, Node};

/// The pieces of one projection step, kept for inspection.
#[derive(Clone, Debug)]
pub struct Projection {
    /// Grid over `(x_n, y)`.
    pub inner_grid: PointedGrid,
    /// Partition for `phi(x1..x(n-1); x_n, y)`.
    pub inner: DefinablePartitionResult,
    /// Partition for each `gamma_i(x_n; y)`, the defining formula of inner
    /// part `i` with `x_n` turned into the object.
    pub outer: Vec<DefinablePartitionResult>,
    pub combined: DefinablePartitionResult,
}

/// One projection step for `phi(x1..xn; y)` with `n >= 2`.
pub fn project(grid: &PointedGrid, phi: &Formula, opts: &PartitionOptions) -> Result<Projection, MecError> {
    if phi.objects.len() < 2 {
        return Err(MecError::Precondition("projection needs at least two object variables"));
    }
    if grid.sampling.is_some() {
        return Err(MecError::Precondition("projection needs a full grid"));
    }
    let opts = PartitionOptions { emit_formulas: true, ..opts.clone() };
    let lowered = phi.last_object_as_param()?;
    let inner_grid = grid.with_params(&lowered.param_sorts())?;
    let inner = empirical_partition(&inner_grid, &lowered, &opts)?;
    let outer = inner
        .parts
        .iter()
        .map(|part| {
            let psi = part.formula.as_ref().expect("emitted");
            let gamma = psi.with_split(1)?;
            empirical_partition(grid, &gamma, &opts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let combined = combine_partitions(grid, phi, &inner_grid, &inner, &outer)?;
    Ok(Projection { inner_grid, inner, outer, combined })
}

/// Intersect the outer partitions and measure each intersection by
/// `h(M) = sum_i f_i(M) g_(i j_i)(M)`, where `f_i` measures inner part `i`
/// and `g_(i j)` measures part `j` of the partition for `gamma_i`. The result
/// is checked against direct counts of `phi` at every grid point.
pub fn combine_partitions(
    grid: &PointedGrid,
    phi: &Formula,
    inner_grid: &PointedGrid,
    inner: &DefinablePartitionResult,
    outer: &[DefinablePartitionResult],
) -> Result<DefinablePartitionResult, MecError> {
    let mut lowered_sorts = Vec::from([*phi.object_sorts().last().ok_or(MecError::Precondition("no object variables"))?]);
    lowered_sorts.extend(&grid.param_sorts);
    let consistent = inner_grid.same_structures(grid)
        && inner_grid.param_sorts == lowered_sorts
        && inner.assignment.len() == inner_grid.len()
        && outer.len() == inner.parts.len()
        && outer.iter().all(|o| o.assignment.len() == grid.len());
    if !consistent {
        return Err(MecError::GridMismatch);
    }
    let direct = count_grid(grid, phi)?;
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut measures = Vec::with_capacity(grid.len());
    for p in 0..grid.len() {
        let k = grid.points[p].structure;
        let mut choice = Vec::with_capacity(outer.len());
        let mut h: u64 = 0;
        for (i, o) in outer.iter().enumerate() {
            let j = o.assignment[p].ok_or(MecError::Uncovered(p))?;
            choice.push(j);
            let g = o.parts[j].measure[&k];
            let f = inner.parts[i].measure.get(&k).copied().unwrap_or(0);
            h = f.checked_mul(g).and_then(|t| h.checked_add(t)).ok_or(MecError::CountOverflow)?;
        }
        if h != direct[p] {
            return Err(MecError::ProjectionMismatch { point: p, expected: direct[p], found: h });
        }
        measures.push(h);
        match groups.iter_mut().find(|(c, _)| *c == choice) {
            Some((_, members)) => members.push(p),
            None => groups.push((choice, Vec::from([p]))),
        }
    }
    let params = grid.param_sorts.len();
    let groups = groups
        .into_iter()
        .map(|(choice, members)| {
            let bodies: Option<Vec<Node>> =
                choice.iter().enumerate().map(|(i, &j)| outer[i].parts[j].formula.as_ref().map(|f| f.body.clone())).collect();
            let formula = bodies.map(|b| {
                let decl = outer[0].parts[choice[0]].formula.as_ref().expect("present").params.clone();
                debug_assert_eq!(decl.len(), params);
                Formula::over_params(&format!("{}_part", phi.name), decl, Node::conj(b))
            });
            (PartLabel::Combined(choice), formula, members)
        })
        .collect();
    let rank = outer.iter().map(|o| o.rank).chain([inner.rank]).max().unwrap_or(0);
    Ok(DefinablePartitionResult::from_groups(phi, rank, grid.len(), groups, grid, &measures))
}
