//! Experiment configuration files (TOML).
//!
//! ```toml
//! seed = 0
//! jobs = 4
//! formulas = ["phi(x; y) := I1(x, y) & !I2(x, y)"]
//!
//! [family]
//! kind = "NestedEquivalence"
//! fixed = { t = 3 }
//!
//! [grid]
//! ranges = { n1 = [1, 3], n2 = [1, 3], n3 = [1, 3] }
//!
//! [fit]
//! rank = 2
//! degree = 4
//! basis = "index"
//! holdout = [[4, 4, 4]]
//!
//! [output]
//! report = "nested.report"
//! observations = "nested.csv"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use exactlab_core::families::{index_grid, FamilyKind, FamilySpec};
use exactlab_core::logic::{parse_formula, Formula, SortId};
use exactlab_core::mec::{Basis, BasisFormula, FitConfig, MecConfig, PartitionOptions};

use crate::error::{parse, semantic, LabError, Result};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub jobs: usize,
    pub formulas: Vec<String>,
    pub family: FamilyConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub output: OutputConfig,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: String,
    #[serde(default)]
    pub fixed: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Explicit indices; used instead of `ranges` when present.
    pub indices: Option<Vec<Vec<u64>>>,
    /// Inclusive range per index coordinate; unlisted coordinates keep the
    /// schema range, capped at `cap` values.
    #[serde(default)]
    pub ranges: BTreeMap<String, [u64; 2]>,
    pub cap: Option<u64>,
    /// Parameter sorts by name; by default those of the first formula.
    pub params: Option<Vec<String>>,
    /// Parameter tuples per member, drawn with `seed`; all when absent.
    pub sample: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    pub rank: Option<usize>,
    pub degree: Option<u32>,
    pub basis: Option<String>,
    #[serde(default)]
    pub holdout: Vec<Vec<u64>>,
    pub max_parts: Option<usize>,
    pub min_size: Option<usize>,
    pub falsify_t: Option<usize>,
    #[serde(default)]
    pub delta: Vec<DeltaConfig>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaConfig {
    pub formula: String,
    #[serde(default)]
    pub params: Vec<u32>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub report: Option<PathBuf>,
    pub observations: Option<PathBuf>,
}

/// Command-line values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub rank: Option<usize>,
    pub degree: Option<u32>,
    pub basis: Option<String>,
    pub holdout: Option<Vec<Vec<u64>>>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

/// A configuration with every name resolved against the family.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub spec: FamilySpec,
    pub formulas: Vec<Formula>,
    pub indices: Vec<Vec<u64>>,
    pub param_sorts: Vec<SortId>,
    pub sample: Option<usize>,
    pub mec: MecConfig,
    pub jobs: usize,
    pub seed: u64,
    pub report: Option<PathBuf>,
    pub observations: Option<PathBuf>,
}

pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(LabError::io(path))?;
    toml::from_str(&text).map_err(|e| LabError::Parse(format!("{}: {e}", path.display())))
}

pub fn family_spec(kind: &str, fixed: &BTreeMap<String, u64>) -> Result<FamilySpec> {
    let kind = FamilyKind::from_name(kind).ok_or_else(|| {
        let names: Vec<&str> = FamilyKind::ALL.iter().map(|k| k.name()).collect();
        LabError::Semantic(format!("unknown family `{kind}`; expected one of {}", names.join(", ")))
    })?;
    let fixed: Vec<(&str, u64)> = fixed.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    FamilySpec::new(kind, &fixed).map_err(semantic)
}

pub fn parse_basis(name: &str) -> Result<&'static str> {
    match name {
        "index" => Ok("index"),
        "dstar" => Ok("dstar"),
        "delta" => Ok("delta"),
        other => Err(LabError::Semantic(format!("unknown basis `{other}`; expected index, dstar or delta"))),
    }
}

impl ExperimentConfig {
    pub fn resolve(&self, o: &Overrides) -> Result<Experiment> {
        let spec = family_spec(&self.family.kind, &self.family.fixed)?;
        let sig = spec.signature().map_err(semantic)?;
        if self.formulas.is_empty() {
            return Err(LabError::Semantic("no formulas".into()));
        }
        let formulas = self.formulas.iter().map(|f| parse_formula(f, &sig).map_err(parse)).collect::<Result<Vec<_>>>()?;
        let param_sorts = match &self.grid.params {
            Some(names) => names
                .iter()
                .map(|n| sig.sort(n).ok_or_else(|| LabError::Semantic(format!("unknown sort `{n}`"))))
                .collect::<Result<Vec<_>>>()?,
            None => formulas[0].param_sorts(),
        };
        let indices = match &self.grid.indices {
            Some(ix) => {
                for i in ix {
                    spec.check_index(i).map_err(semantic)?;
                }
                ix.clone()
            }
            None => {
                let cap = self.grid.cap.unwrap_or(3);
                if cap == 0 {
                    return Err(LabError::Semantic("grid cap must be positive".into()));
                }
                let mut boxed = spec.clone();
                for (name, [lo, hi]) in &self.grid.ranges {
                    boxed = boxed.with_range(name, *lo, *hi).map_err(semantic)?;
                }
                index_grid(&boxed, cap)
            }
        };
        if indices.is_empty() {
            return Err(LabError::Semantic("the grid is empty".into()));
        }
        let fit = &self.fit;
        let basis_name = o.basis.as_deref().or(fit.basis.as_deref()).unwrap_or("index");
        let basis = match parse_basis(basis_name)? {
            "index" => Basis::FamilyIndex,
            "dstar" => Basis::DStar,
            _ => {
                if fit.delta.is_empty() {
                    return Err(LabError::Semantic("basis `delta` needs [[fit.delta]] entries".into()));
                }
                Basis::Formulas(
                    fit.delta
                        .iter()
                        .map(|d| Ok(BasisFormula { formula: parse_formula(&d.formula, &sig).map_err(parse)?, params: d.params.clone() }))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
        };
        let holdout = o.holdout.clone().unwrap_or_else(|| fit.holdout.clone());
        for h in &holdout {
            spec.check_index(h).map_err(semantic)?;
        }
        let mut partition = PartitionOptions { emit_formulas: true, ..Default::default() };
        if let Some(r) = o.rank.or(fit.rank) {
            partition.max_rank = r;
        }
        partition.max_parts = fit.max_parts;
        partition.min_size = fit.min_size.unwrap_or(0);
        let mut fit_config = FitConfig::default();
        if let Some(d) = o.degree.or(fit.degree) {
            fit_config.degree_cap = d;
        }
        let jobs = o.jobs.unwrap_or(self.jobs);
        if jobs == 0 {
            return Err(LabError::Semantic("jobs must be positive".into()));
        }
        Ok(Experiment {
            spec,
            formulas,
            indices,
            param_sorts,
            sample: self.grid.sample,
            mec: MecConfig { partition, fit: fit_config, basis, holdout, falsify_t: fit.falsify_t, ..Default::default() },
            jobs,
            seed: o.seed.unwrap_or(self.seed),
            report: self.output.report.clone(),
            observations: self.output.observations.clone(),
        })
    }
}
