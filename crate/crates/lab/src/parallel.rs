//! Grid counts spread over a thread pool. Results are collected in grid
//! order, so the output does not depend on scheduling.

use rayon::prelude::*;

use exactlab_core::eval::solution_count;
use exactlab_core::logic::Formula;
use exactlab_core::mec::{MecError, PointedGrid};
use exactlab_core::structures::{Element, FiniteStructure};

use crate::error::{semantic, LabError, Result};

pub fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(semantic)
}

/// `count_grid` on the pool.
pub fn count_grid(pool: &rayon::ThreadPool, grid: &PointedGrid, phi: &Formula) -> Result<Vec<u64>> {
    pool.install(|| {
        grid.points
            .par_iter()
            .map(|p| {
                let c = solution_count(&grid.structures[p.structure], phi, &p.params).map_err(semantic)?;
                c.to_u64().ok_or_else(|| semantic(MecError::CountOverflow))
            })
            .collect()
    })
}

/// `|phi(M, a)|` for every parameter tuple `a`, tuples in odometer order.
pub fn count_all(pool: &rayon::ThreadPool, m: &FiniteStructure, phi: &Formula) -> Result<Vec<(Vec<Element>, String)>> {
    let radices: Vec<usize> = phi.param_sorts().iter().map(|&s| m.size(s)).collect();
    let total = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)).filter(|&t| t <= 1 << 24);
    let total = total.ok_or_else(|| LabError::Semantic("too many parameter tuples".into()))?;
    pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|code| {
                let mut a = vec![0; radices.len()];
                let mut rest = code;
                for (slot, &r) in a.iter_mut().zip(&radices).rev() {
                    *slot = (rest % r) as Element;
                    rest /= r;
                }
                let c = solution_count(m, phi, &a).map_err(semantic)?;
                Ok((a, c.to_string()))
            })
            .collect()
    })
}
