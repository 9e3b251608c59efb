//! Exact linear systems over the rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent,
    /// Consistent but with free variables; `particular` sets them to zero.
    Underdetermined { particular: Vec<BigRational>, rank: usize },
}

/// Cost of a pivot: smaller numerators and denominators keep the
/// elimination from blowing up.
fn height(x: &BigRational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Gauss-Jordan elimination with full pivoting on `A x = b`.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // col_of[k] is the original column sitting at position k.
    let mut col_of: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best: Option<(usize, usize, u64)> = None;
        for (r, row) in m.iter().enumerate().skip(rank) {
            for (c, x) in row.iter().enumerate().take(cols).skip(rank) {
                if !x.is_zero() && best.is_none_or(|(_, _, h)| height(x) < h) {
                    best = Some((r, c, height(x)));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        m.swap(rank, pr);
        for row in m.iter_mut() {
            row.swap(rank, pc);
        }
        col_of.swap(rank, pc);
        let inv = m[rank][rank].recip();
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[rank].is_zero() {
                continue;
            }
            let f = row[rank].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &f * p;
            }
        }
        rank += 1;
    }
    if m.iter().skip(rank).any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (k, row) in m.iter().enumerate().take(rank) {
        x[col_of[k]] = row[cols].clone();
    }
    if rank == cols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined { particular: x, rank }
    }
}

pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let zeros = vec![BigRational::zero(); a.len()];
    match solve(a, &zeros) {
        Solution::Unique(x) => x.len(),
        Solution::Underdetermined { rank, .. } => rank,
        Solution::Inconsistent => unreachable!("homogeneous systems are consistent"),
    }
}

/// `A x`.
pub fn apply(a: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().zip(x).fold(BigRational::zero(), |acc, (p, q)| acc + p * q)).collect()
}

/// Largest absolute entry, for diagnostics.
pub fn max_abs(xs: &[BigRational]) -> BigRational {
    xs.iter().map(Signed::abs).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
}
