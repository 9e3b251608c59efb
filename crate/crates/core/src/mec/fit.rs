use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::grid::PointedGrid;
use super::partition::Part;
use super::MecError;
use crate::eval::solution_count;
use crate::geometry::envelope::dstar_of_member;
use crate::geometry::RadicalNumber;
use crate::linalg::{self, Solution};
use crate::logic::Formula;
use crate::poly::{monomials, Monomial, Polynomial};
use crate::structures::Element;

/// A designated basis formula `delta(x; y)` with its parameter tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFormula {
    pub formula: Formula,
    pub params: Vec<Element>,
}

/// What the variables `X1..Xs` of a measuring polynomial stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    /// The family index.
    FamilyIndex,
    /// The `d*` vector of the member.
    DStar,
    /// `|delta_i(M, a_i)|`.
    Formulas(Vec<BasisFormula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    FamilyIndex,
    DStar,
    Formulas,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::FamilyIndex => "index",
            BasisKind::DStar => "dstar",
            BasisKind::Formulas => "delta",
        }
    }
}

impl Basis {
    pub fn kind(&self) -> BasisKind {
        match self {
            Basis::FamilyIndex => BasisKind::FamilyIndex,
            Basis::DStar => BasisKind::DStar,
            Basis::Formulas(_) => BasisKind::Formulas,
        }
    }
}

/// Basis coordinates of every structure in the grid.
pub fn basis_values(grid: &PointedGrid, basis: &Basis) -> Result<Vec<Vec<RadicalNumber>>, MecError> {
    let int = |n: BigInt| RadicalNumber::rational(BigRational::from_integer(n));
    grid.labels
        .iter()
        .zip(&grid.structures)
        .map(|(label, m)| match basis {
            Basis::FamilyIndex => Ok(label.iter().map(|&i| int(i.into())).collect()),
            Basis::DStar => {
                let spec = grid.spec.as_ref().ok_or(MecError::NeedsFamily("dstar"))?;
                Ok(dstar_of_member(spec, label)?.iter().map(|d| d.value()).collect())
            }
            Basis::Formulas(deltas) => deltas
                .iter()
                .map(|d| {
                    let in_range = d.params.len() == d.formula.params.len()
                        && d.params.iter().zip(d.formula.param_sorts()).all(|(&e, s)| (e as usize) < m.size(s));
                    if !in_range {
                        return Err(MecError::BasisParams { label: label.clone(), params: d.params.clone() });
                    }
                    Ok(int(solution_count(m, &d.formula, &d.params)?.value.into()))
                })
                .collect(),
        })
        .collect()
}

/// One structure's contribution to a part: its basis point and count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub label: Vec<u64>,
    pub point: Vec<RadicalNumber>,
    pub count: u64,
}

/// The observations of `part`, one per structure it meets.
pub fn observations(grid: &PointedGrid, part: &Part, values: &[Vec<RadicalNumber>]) -> Vec<Observation> {
    part.measure
        .iter()
        .map(|(&k, &count)| Observation { label: grid.labels[k].clone(), point: values[k].clone(), count })
        .collect()
}

/// Keep the last `ceil(percent * len / 100)` observations for the holdout.
pub fn split_holdout(obs: &[Observation], percent: u32) -> (Vec<Observation>, Vec<Observation>) {
    let n = obs.len();
    let held = (n * percent.min(100) as usize).div_ceil(100);
    let (fit, hold) = obs.split_at(n - held);
    (fit.to_vec(), hold.to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitConfig {
    /// Largest exponent of any one variable.
    pub degree_cap: u32,
    /// Largest total degree tried; defaults to `degree_cap * s`.
    pub max_total_degree: Option<u32>,
    /// Largest number of candidate supports solved at one degree.
    pub support_budget: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { degree_cap: 4, max_total_degree: None, support_budget: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuringPolynomial {
    pub basis: BasisKind,
    pub polynomial: Polynomial,
    pub fit: Vec<Observation>,
    pub holdout: Vec<Observation>,
    /// Positions in `holdout` where the polynomial misses the count.
    pub holdout_failures: Vec<usize>,
}

impl MeasuringPolynomial {
    pub fn verified(&self) -> bool {
        self.holdout_failures.is_empty()
    }

    /// Re-evaluate at every fit and holdout point.
    pub fn check(&self) -> bool {
        self.fit.iter().chain(&self.holdout).all(|o| evaluates_to(&self.polynomial, o))
    }
}

fn value_at(p: &Polynomial, point: &[RadicalNumber]) -> Option<RadicalNumber> {
    p.eval_with(point, |c| RadicalNumber::rational(c.clone())).ok()
}

fn evaluates_to(p: &Polynomial, o: &Observation) -> bool {
    value_at(p, &o.point).and_then(|v| v.as_integer()) == Some(BigInt::from(o.count))
}

fn monomial_value(m: &Monomial, point: &[RadicalNumber]) -> RadicalNumber {
    let mut v = RadicalNumber::integer(1);
    for (x, &e) in point.iter().zip(m) {
        for _ in 0..e {
            v = v * x.clone();
        }
    }
    v
}

/// The rational system saying that `sum_j c_j m_j(point) = count` at every
/// observation, one row per radical component.
struct System {
    /// Radical components in use, one block of rows each.
    radicals: Vec<u64>,
    /// `values[o][j]`: monomial `j` at observation `o`.
    values: Vec<Vec<RadicalNumber>>,
    counts: Vec<BigRational>,
}

impl System {
    fn new(obs: &[Observation], monos: &[Monomial]) -> System {
        let values: Vec<Vec<RadicalNumber>> = obs.iter().map(|o| monos.iter().map(|m| monomial_value(m, &o.point)).collect()).collect();
        let mut radicals: Vec<u64> = vec![1];
        for row in &values {
            for v in row {
                for (r, _) in v.components() {
                    if !radicals.contains(&r) {
                        radicals.push(r);
                    }
                }
            }
        }
        radicals.sort_unstable();
        let counts = obs.iter().map(|o| BigRational::from_integer(o.count.into())).collect();
        System { radicals, values, counts }
    }

    /// Rows for the first `upto` observations restricted to `cols`.
    fn rows(&self, cols: &[usize], upto: usize) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (o, row) in self.values.iter().enumerate().take(upto) {
            for &r in &self.radicals {
                a.push(cols.iter().map(|&j| row[j].component(r)).collect());
                b.push(if r == 1 { self.counts[o].clone() } else { BigRational::zero() });
            }
        }
        (a, b)
    }

    fn solve(&self, cols: &[usize]) -> Solution {
        let (a, b) = self.rows(cols, self.values.len());
        linalg::solve(&a, &b)
    }
}

/// The next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact interpolation. For each total degree `D` in turn, solve over all
/// monomials of degree at most `D` (exponents at most `degree_cap`). A
/// unique solution is returned as is: its support is minimal because any
/// sparser fit would also solve the full system. An underdetermined system
/// triggers a search over supports by size, each size in lexicographic
/// order of the graded monomial list; the first support with a unique
/// solution wins.
pub fn fit_measuring_polynomial(
    fit: &[Observation],
    holdout: &[Observation],
    cfg: &FitConfig,
    basis: BasisKind,
) -> Result<MeasuringPolynomial, MecError> {
    let first = fit.first().ok_or(MecError::NoObservations)?;
    let nvars = first.point.len();
    if let Some(o) = fit.iter().chain(holdout).find(|o| o.point.len() != nvars) {
        return Err(MecError::BasisArity { expected: nvars, found: o.point.len() });
    }
    let mut distinct: HashMap<&[RadicalNumber], u64> = HashMap::new();
    let mut keep = Vec::new();
    for (i, o) in fit.iter().enumerate() {
        match distinct.get(o.point.as_slice()) {
            Some(&c) if c != o.count => return Err(MecError::NotAFunction(i)),
            Some(_) => {}
            None => {
                distinct.insert(&o.point, o.count);
                keep.push(i);
            }
        }
    }
    let fit: Vec<Observation> = keep.into_iter().map(|i| fit[i].clone()).collect();

    let max_total = cfg.max_total_degree.unwrap_or(cfg.degree_cap * nvars as u32);
    let mut last_underdetermined = None;
    for degree in 0..=max_total {
        let monos = monomials(nvars, cfg.degree_cap, degree);
        if degree > 0 && monos.len() == monomials(nvars, cfg.degree_cap, degree - 1).len() {
            continue;
        }
        let system = System::new(&fit, &monos);
        let all: Vec<usize> = (0..monos.len()).collect();
        let coefficients = match system.solve(&all) {
            Solution::Inconsistent => continue,
            Solution::Unique(x) => Some((all, x)),
            Solution::Underdetermined { rank, .. } => {
                let found = search_supports(&system, monos.len(), rank, cfg.support_budget);
                if found.is_none() {
                    last_underdetermined = Some(MecError::Underdetermined { degree, rank, unknowns: monos.len() });
                }
                found
            }
        };
        let Some((cols, x)) = coefficients else { break };
        let polynomial = Polynomial::from_terms(nvars, cols.iter().zip(x).map(|(&j, c)| (monos[j].clone(), c)));
        let holdout_failures = (0..holdout.len()).filter(|&i| !evaluates_to(&polynomial, &holdout[i])).collect();
        return Ok(MeasuringPolynomial { basis, polynomial, fit, holdout: holdout.to_vec(), holdout_failures });
    }
    if let Some(e) = last_underdetermined {
        return Err(e);
    }
    // Inconsistent at every degree: report the first observation that
    // breaks the richest system.
    let monos = monomials(nvars, cfg.degree_cap, max_total);
    let system = System::new(&fit, &monos);
    let all: Vec<usize> = (0..monos.len()).collect();
    let witness = (1..=fit.len())
        .find(|&k| {
            let (a, b) = system.rows(&all, k);
            linalg::solve(&a, &b) == Solution::Inconsistent
        })
        .map_or(fit.len().saturating_sub(1), |k| k - 1);
    Err(MecError::NoExactFit { max_degree: max_total, witness })
}

fn search_supports(system: &System, n: usize, rank: usize, budget: usize) -> Option<(Vec<usize>, Vec<BigRational>)> {
    let mut tried = 0;
    for size in 1..=rank.min(n) {
        let mut c: Vec<usize> = (0..size).collect();
        loop {
            tried += 1;
            if tried > budget {
                return None;
            }
            if let Solution::Unique(x) = system.solve(&c) {
                return Some((c, x));
            }
            if !next_combination(&mut c, n) {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DStarValue;
    use alloc::string::ToString;

    fn obs(point: &[i64], count: u64) -> Observation {
        Observation { label: Vec::new(), point: point.iter().map(|&x| RadicalNumber::integer(x)).collect(), count }
    }

    #[test]
    fn collinear_points() {
        let fit = [obs(&[2], 1), obs(&[3], 2), obs(&[4], 3)];
        let p = fit_measuring_polynomial(&fit, &[obs(&[9], 8)], &FitConfig::default(), BasisKind::FamilyIndex).unwrap();
        assert_eq!(p.polynomial.to_string(), "X - 1");
        assert!(p.verified() && p.check());
    }

    #[test]
    fn sparse_support_when_underdetermined() {
        // Two points, three linear unknowns: the first support that fits wins.
        let fit = [obs(&[2, 3], 6), obs(&[3, 4], 12)];
        let p = fit_measuring_polynomial(&fit, &[], &FitConfig::default(), BasisKind::FamilyIndex).unwrap();
        assert_eq!(p.polynomial.to_string(), "6*X1 - 6");
    }

    #[test]
    fn radical_points() {
        let point = |n: u32| DStarValue::power(3, n).value();
        let fit: Vec<Observation> =
            (1..=3).map(|n| Observation { label: vec![n as u64], point: vec![point(n)], count: 9u64.pow(n) }).collect();
        let hold = [Observation { label: vec![4], point: vec![point(4)], count: 9u64.pow(4) }];
        let p = fit_measuring_polynomial(&fit, &hold, &FitConfig::default(), BasisKind::DStar).unwrap();
        assert_eq!(p.polynomial.to_string(), "X^4");
        assert!(p.verified());
    }

    #[test]
    fn failures() {
        assert_eq!(fit_measuring_polynomial(&[], &[], &FitConfig::default(), BasisKind::FamilyIndex), Err(MecError::NoObservations));
        assert_eq!(
            fit_measuring_polynomial(&[obs(&[1], 1), obs(&[1], 2)], &[], &FitConfig::default(), BasisKind::FamilyIndex),
            Err(MecError::NotAFunction(1))
        );
        let cfg = FitConfig { degree_cap: 1, max_total_degree: Some(1), ..Default::default() };
        let fit = [obs(&[0], 0), obs(&[1], 1), obs(&[2], 4)];
        assert_eq!(fit_measuring_polynomial(&fit, &[], &cfg, BasisKind::FamilyIndex), Err(MecError::NoExactFit { max_degree: 1, witness: 2 }));
        let p = fit_measuring_polynomial(&fit[..2], &[obs(&[2], 4)], &cfg, BasisKind::FamilyIndex).unwrap();
        assert_eq!(p.holdout_failures, vec![0]);
    }

    #[test]
    fn holdout_split() {
        let all: Vec<Observation> = (0..10).map(|i| obs(&[i], i as u64)).collect();
        let (fit, hold) = split_holdout(&all, 25);
        assert_eq!((fit.len(), hold.len()), (7, 3));
        assert_eq!(split_holdout(&all, 0).1.len(), 0);
    }
}
