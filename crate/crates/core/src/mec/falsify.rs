use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::MecError;
use crate::eval::Evaluator;
use crate::families::{self, FamilyError, FamilySpec};
use crate::logic::Formula;
use crate::structures::Element;
use crate::util::Odometer;

/// One structure with more than `t` distinct solution counts, which no weak
/// mec with at most `t` parts can measure: parts are constant on counts
/// within a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalsificationWitness {
    pub index: Vec<u64>,
    pub t: usize,
    /// Each distinct count with the first parameter tuple realising it,
    /// counts ascending.
    pub counts: Vec<(u64, Vec<Element>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FalsifyOutcome {
    Witness(FalsificationWitness),
    /// No witness among the structures examined.
    NotFoundWithin { examined: usize, last_index: Option<Vec<u64>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FalsifyBudget {
    pub max_structures: usize,
    /// Largest `sum(index - min)` visited.
    pub max_level: u64,
    /// Largest number of `(a, x)` evaluations per structure.
    pub max_work: u128,
}

impl Default for FalsifyBudget {
    fn default() -> Self {
        FalsifyBudget { max_structures: 64, max_level: 16, max_work: 1 << 26 }
    }
}

/// Indices with `sum(index - min) == level`, lexicographically, inside the
/// schema box.
fn level_indices(spec: &FamilySpec, level: u64) -> Vec<Vec<u64>> {
    let k = spec.schema.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(spec: &FamilySpec, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let i = cur.len();
        if i == spec.schema.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let p = &spec.schema[i];
        let span = p.max - p.min;
        let range = if i + 1 == spec.schema.len() {
            if left > span {
                return;
            }
            left..=left
        } else {
            0..=left.min(span)
        };
        for d in range {
            cur.push(p.min + d);
            rec(spec, left - d, cur, out);
            cur.pop();
        }
    }
    if k > 0 {
        rec(spec, level, &mut cur, &mut out);
    }
    out
}

/// Walk the family by increasing index level and return the first member
/// with more than `t` distinct counts `|phi(M, a)|`.
pub fn falsify_weak_mec(spec: &FamilySpec, phi: &Formula, t: usize, budget: &FalsifyBudget) -> Result<FalsifyOutcome, MecError> {
    if phi.params.is_empty() {
        return Err(MecError::Precondition("falsification needs at least one parameter"));
    }
    let mut examined = 0;
    let mut last_index = None;
    for level in 0..=budget.max_level {
        for index in level_indices(spec, level) {
            if examined >= budget.max_structures {
                return Ok(FalsifyOutcome::NotFoundWithin { examined, last_index });
            }
            if spec.check_index(&index).is_err() {
                continue;
            }
            let m = match families::generate(spec, &index) {
                Ok(m) => m,
                Err(FamilyError::TooLarge(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            let vars = phi.object_sorts().into_iter().chain(phi.param_sorts());
            let work = vars.fold(1u128, |acc, s| acc.saturating_mul(m.size(s) as u128));
            if work > budget.max_work {
                continue;
            }
            examined += 1;
            last_index = Some(index.clone());
            let mut ev = Evaluator::new(&m, phi)?;
            let mut seen: BTreeMap<u64, Vec<Element>> = BTreeMap::new();
            let mut odo = Odometer::new(phi.param_sorts().iter().map(|&s| m.size(s)).collect());
            while let Some(a) = odo.next_tuple() {
                let c = ev.count(a)?.to_u64().ok_or(MecError::CountOverflow)?;
                seen.entry(c).or_insert_with(|| a.to_vec());
            }
            if seen.len() > t {
                return Ok(FalsifyOutcome::Witness(FalsificationWitness { index, t, counts: seen.into_iter().collect() }));
            }
        }
    }
    Ok(FalsifyOutcome::NotFoundWithin { examined, last_index })
}
