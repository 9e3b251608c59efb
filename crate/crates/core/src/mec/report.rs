use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::falsify::{falsify_weak_mec, FalsificationWitness, FalsifyBudget, FalsifyOutcome};
use super::fit::{basis_values, fit_measuring_polynomial, observations, Basis, BasisKind, FitConfig, MeasuringPolynomial, Observation};
use super::grid::{count_grid, PointedGrid};
use super::partition::{empirical_partition_with_counts, PartLabel, PartitionOptions};
use super::MecError;
use crate::families::FamilySpec;
use crate::logic::Formula;
use crate::structures::Element;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MecConfig {
    pub partition: PartitionOptions,
    pub fit: FitConfig,
    pub basis: Basis,
    /// Family indices kept out of the fit and used only for verification.
    pub holdout: Vec<Vec<u64>>,
    /// Part bound handed to the falsifier when no partition is found;
    /// defaults to `partition.max_parts`, else 4.
    pub falsify_t: Option<usize>,
    pub falsify_budget: FalsifyBudget,
}

impl Default for MecConfig {
    fn default() -> Self {
        MecConfig {
            partition: PartitionOptions::default(),
            fit: FitConfig::default(),
            basis: Basis::FamilyIndex,
            holdout: Vec::new(),
            falsify_t: None,
            falsify_budget: FalsifyBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartReport {
    pub label: PartLabel,
    pub formula: Option<Formula>,
    pub polynomial: Result<MeasuringPolynomial, MecError>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaOutcome {
    /// Every part has an exact polynomial confirmed on the holdout.
    PolynomialExact { rank: usize, parts: Vec<PartReport> },
    Falsified { reason: MecError, witness: FalsificationWitness },
    Inconclusive { reason: String, parts: Vec<PartReport> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    PolynomialExact,
    Falsified,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::PolynomialExact => "polynomial exact",
            Verdict::Falsified => "falsified",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaReport {
    pub formula: Formula,
    /// `(index, a, count)` for every training grid point.
    pub observations: Vec<(Vec<u64>, Vec<Element>, u64)>,
    pub outcome: FormulaOutcome,
}

impl FormulaReport {
    pub fn verdict(&self) -> Verdict {
        match self.outcome {
            FormulaOutcome::PolynomialExact { .. } => Verdict::PolynomialExact,
            FormulaOutcome::Falsified { .. } => Verdict::Falsified,
            FormulaOutcome::Inconclusive { .. } => Verdict::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MecReport {
    pub family: Option<FamilySpec>,
    pub basis: BasisKind,
    pub formulas: Vec<FormulaReport>,
    /// Falsified if any formula is; exact if all are.
    pub verdict: Verdict,
}

/// See [`polynomial_exact_report_with_counts`].
pub fn polynomial_exact_report(grid: &PointedGrid, formulas: &[Formula], config: &MecConfig) -> Result<MecReport, MecError> {
    let counts = formulas.iter().map(|phi| count_grid(grid, phi)).collect::<Result<Vec<_>, _>>()?;
    polynomial_exact_report_with_counts(grid, formulas, &counts, config)
}

/// Partition, fit and verify every formula; fall back to the falsifier when
/// no partition exists. `counts[i]` are the grid counts of `formulas[i]`.
/// Only setup problems (bad holdout indices, basis errors) are errors;
/// everything else is recorded in the report.
pub fn polynomial_exact_report_with_counts(
    grid: &PointedGrid,
    formulas: &[Formula],
    counts: &[Vec<u64>],
    config: &MecConfig,
) -> Result<MecReport, MecError> {
    let values = basis_values(grid, &config.basis)?;
    let holdout_grid = match (&grid.spec, config.holdout.is_empty()) {
        (_, true) => None,
        (Some(spec), false) => Some(PointedGrid::new(spec, &config.holdout, &grid.param_sorts)?),
        (None, false) => return Err(MecError::NeedsFamily("holdout")),
    };
    let holdout_values = holdout_grid.as_ref().map(|h| basis_values(h, &config.basis)).transpose()?;
    let mut reports = Vec::with_capacity(formulas.len());
    for (phi, counts) in formulas.iter().zip(counts) {
        let observed = grid
            .points
            .iter()
            .zip(counts)
            .map(|(p, &c)| (grid.labels[p.structure].clone(), p.params.clone(), c))
            .collect();
        let outcome = match empirical_partition_with_counts(grid, phi, counts, &config.partition) {
            Err(e @ MecError::NoPartition(_)) => falsify_outcome(grid, phi, e, config)?,
            Err(e) => FormulaOutcome::Inconclusive { reason: e.to_string(), parts: Vec::new() },
            Ok(mut result) => {
                let mut held: Vec<Vec<Observation>> = alloc::vec![Vec::new(); result.parts.len()];
                let mut problem = None;
                if let (Some(h), Some(hv)) = (&holdout_grid, &holdout_values) {
                    let hcounts = count_grid(h, phi)?;
                    for (k, m) in h.structures.iter().enumerate() {
                        for p in h.points_of(k) {
                            let Some(part) = result.classify(m, &h.points[p].params) else {
                                problem.get_or_insert_with(|| format!("holdout {:?} realises a type not seen in the fit", h.labels[k]));
                                continue;
                            };
                            let obs = &mut held[part];
                            match obs.iter().find(|o| o.label == h.labels[k]) {
                                Some(o) if o.count != hcounts[p] => {
                                    problem.get_or_insert_with(|| format!("holdout {:?}: part {part} has two counts", h.labels[k]));
                                }
                                Some(_) => {}
                                None => obs.push(Observation { label: h.labels[k].clone(), point: hv[k].clone(), count: hcounts[p] }),
                            }
                        }
                    }
                }
                let parts: Vec<PartReport> = result
                    .parts
                    .iter()
                    .zip(&held)
                    .map(|(part, hold)| PartReport {
                        label: part.label.clone(),
                        formula: part.formula.clone(),
                        polynomial: fit_measuring_polynomial(&observations(grid, part, &values), hold, &config.fit, config.basis.kind()),
                    })
                    .collect();
                for (i, p) in parts.iter().enumerate() {
                    match &p.polynomial {
                        Err(e) => {
                            problem.get_or_insert_with(|| format!("part {i}: {e}"));
                        }
                        Ok(mp) if !mp.verified() => {
                            problem.get_or_insert_with(|| format!("part {i}: holdout mismatch"));
                        }
                        Ok(_) => {}
                    }
                }
                match problem {
                    None => FormulaOutcome::PolynomialExact { rank: result.rank, parts },
                    Some(reason) => FormulaOutcome::Inconclusive { reason, parts },
                }
            }
        };
        reports.push(FormulaReport { formula: phi.clone(), observations: observed, outcome });
    }
    let verdicts: Vec<Verdict> = reports.iter().map(FormulaReport::verdict).collect();
    let verdict = if verdicts.contains(&Verdict::Falsified) {
        Verdict::Falsified
    } else if verdicts.iter().all(|&v| v == Verdict::PolynomialExact) {
        Verdict::PolynomialExact
    } else {
        Verdict::Inconclusive
    };
    Ok(MecReport { family: grid.spec.clone(), basis: config.basis.kind(), formulas: reports, verdict })
}

fn falsify_outcome(grid: &PointedGrid, phi: &Formula, reason: MecError, config: &MecConfig) -> Result<FormulaOutcome, MecError> {
    let Some(spec) = &grid.spec else {
        return Ok(FormulaOutcome::Inconclusive { reason: reason.to_string(), parts: Vec::new() });
    };
    if phi.params.is_empty() {
        return Ok(FormulaOutcome::Inconclusive { reason: reason.to_string(), parts: Vec::new() });
    }
    let t = config.falsify_t.or(config.partition.max_parts).unwrap_or(4);
    Ok(match falsify_weak_mec(spec, phi, t, &config.falsify_budget)? {
        FalsifyOutcome::Witness(witness) => FormulaOutcome::Falsified { reason, witness },
        FalsifyOutcome::NotFoundWithin { examined, .. } => FormulaOutcome::Inconclusive {
            reason: format!("{reason}; no structure with more than {t} counts among {examined} examined"),
            parts: Vec::new(),
        },
    })
}
