//! Plain-text reports and CSV tables. Every writer is deterministic: the
//! same inputs give the same bytes.

use std::fmt::Write as _;

use exactlab_core::logic::{print_formula, Signature};
use exactlab_core::mec::{FormulaOutcome, MecReport, PartReport, PointedGrid};
use exactlab_core::poly::{rational, Polynomial};
use exactlab_core::structures::Element;

use crate::config::Experiment;
use crate::error::{semantic, Result};

/// A rational as `p/q`, always with the denominator.
pub fn ratio(c: &num_rational::BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn tuple(xs: &[Element]) -> String {
    join(xs, " ")
}

pub fn tuple_u64(xs: &[u64]) -> String {
    join(xs, ",")
}

pub fn mec_report(report: &MecReport, exp: &Experiment, grid: &PointedGrid, invocation: &str) -> String {
    let sig = exp.spec.signature().expect("resolved");
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "exactlab mec report").unwrap();
    writeln!(w, "invocation: {invocation}").unwrap();
    writeln!(w, "seed: {}", exp.seed).unwrap();
    let fixed: Vec<String> = exp.spec.fixed.iter().map(|(k, v)| format!(" {k}={v}")).collect();
    writeln!(w, "family: {}{}", exp.spec.kind.name(), fixed.concat()).unwrap();
    let names: Vec<&str> = exp.spec.schema.iter().map(|p| p.name.as_str()).collect();
    writeln!(w, "index: {}", names.join(" ")).unwrap();
    writeln!(w, "grid: {} structures, {} points", grid.structures.len(), grid.len()).unwrap();
    let sorts: Vec<&str> = grid.param_sorts.iter().map(|&s| sig.sort_name(s)).collect();
    writeln!(w, "parameter sorts: {}", if sorts.is_empty() { "none".to_string() } else { sorts.join(" ") }).unwrap();
    match grid.sampling {
        Some(s) => writeln!(w, "sampling: {} tuples per member", s.cap).unwrap(),
        None => writeln!(w, "sampling: all tuples").unwrap(),
    }
    writeln!(w, "basis: {}", report.basis.name()).unwrap();
    writeln!(w, "max rank: {}", exp.mec.partition.max_rank).unwrap();
    writeln!(w, "degree cap: {}", exp.mec.fit.degree_cap).unwrap();
    let holdout: Vec<String> = exp.mec.holdout.iter().map(|h| join(h, ",")).collect();
    writeln!(w, "holdout: {}", if holdout.is_empty() { "none".to_string() } else { holdout.join(" ") }).unwrap();
    writeln!(w, "verdict: {}", report.verdict.name()).unwrap();
    for (i, f) in report.formulas.iter().enumerate() {
        writeln!(w).unwrap();
        writeln!(w, "formula {}: {}", i + 1, print_formula(&f.formula, &sig)).unwrap();
        writeln!(w, "verdict: {}", f.verdict().name()).unwrap();
        match &f.outcome {
            FormulaOutcome::PolynomialExact { rank, parts } => {
                writeln!(w, "rank: {rank}").unwrap();
                write_parts(w, parts, &sig);
            }
            FormulaOutcome::Falsified { reason, witness } => {
                writeln!(w, "reason: {reason}").unwrap();
                writeln!(w, "witness index: {}", join(&witness.index, ",")).unwrap();
                writeln!(w, "part bound: {}", witness.t).unwrap();
                for (c, a) in &witness.counts {
                    writeln!(w, "  count {c} at ({})", tuple(a)).unwrap();
                }
            }
            FormulaOutcome::Inconclusive { reason, parts } => {
                writeln!(w, "reason: {reason}").unwrap();
                write_parts(w, parts, &sig);
            }
        }
    }
    out
}

fn monomial(nvars: usize, m: &[u32]) -> String {
    Polynomial::from_terms(nvars, [(m.to_vec(), rational(1))]).to_string()
}

fn write_parts(w: &mut String, parts: &[PartReport], sig: &Signature) {
    writeln!(w, "parts: {}", parts.len()).unwrap();
    for (i, p) in parts.iter().enumerate() {
        writeln!(w, "part {}: {}", i + 1, p.label).unwrap();
        if let Some(f) = &p.formula {
            writeln!(w, "  definition: {}", print_formula(f, sig)).unwrap();
        }
        match &p.polynomial {
            Ok(mp) => {
                let poly = &mp.polynomial;
                writeln!(w, "  polynomial: {poly}").unwrap();
                for (m, c) in poly.terms() {
                    writeln!(w, "  coefficient {}: {}", monomial(poly.nvars(), m), ratio(c)).unwrap();
                }
                writeln!(w, "  fit points: {}", mp.fit.len()).unwrap();
                writeln!(w, "  holdout points: {}", mp.holdout.len()).unwrap();
                let failures: Vec<String> = mp.holdout_failures.iter().map(|&k| join(&mp.holdout[k].label, ",")).collect();
                writeln!(w, "  holdout failures: {}", if failures.is_empty() { "none".to_string() } else { failures.join(" ") }).unwrap();
            }
            Err(e) => writeln!(w, "  polynomial: none ({e})").unwrap(),
        }
    }
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header).map_err(semantic)?;
    for r in rows {
        wtr.write_record(&r).map_err(semantic)?;
    }
    wtr.into_inner().map_err(semantic)
}

/// `formula, index, a, count` for every grid point of every formula.
pub fn observations_csv(report: &MecReport) -> Result<Vec<u8>> {
    let rows = report.formulas.iter().enumerate().flat_map(|(i, f)| {
        f.observations.iter().map(move |(index, a, c)| vec![(i + 1).to_string(), join(index, " "), tuple(a), c.to_string()])
    });
    csv_bytes(&["formula", "index", "a", "count"], rows)
}

pub fn orbits_csv(rows: impl IntoIterator<Item = (Vec<u32>, usize)>) -> Result<Vec<u8>> {
    csv_bytes(&["tuple", "orbit"], rows.into_iter().map(|(t, c)| vec![tuple(&t), c.to_string()]))
}

pub struct PointCountRow {
    pub kind: String,
    pub q: u64,
    pub dim: u64,
    pub alpha: Option<u32>,
    pub count: u128,
    pub method: &'static str,
}

pub fn pointcount_csv(rows: &[PointCountRow]) -> Result<Vec<u8>> {
    csv_bytes(
        &["kind", "q", "dim", "alpha", "count", "method"],
        rows.iter().map(|r| {
            vec![
                r.kind.clone(),
                r.q.to_string(),
                r.dim.to_string(),
                r.alpha.map(|a| a.to_string()).unwrap_or_default(),
                r.count.to_string(),
                r.method.to_string(),
            ]
        }),
    )
}

/// Read back `(index, count)` rows from an observations table, keeping the
/// rows whose parameter tuple is `a` (all rows when `a` is `None`).
pub fn read_observations(bytes: &[u8], formula: usize, a: Option<&[Element]>) -> Result<Vec<(Vec<u64>, u64)>> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(crate::error::parse)?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = || crate::error::LabError::Parse(format!("bad observation row `{}`", join(&rec.iter().collect::<Vec<_>>(), ",")));
        let f: usize = field(0).parse().map_err(|_| bad())?;
        if f != formula {
            continue;
        }
        let index = field(1).split_whitespace().map(|x| x.parse().map_err(|_| bad())).collect::<Result<Vec<u64>>>()?;
        let params = field(2).split_whitespace().map(|x| x.parse().map_err(|_| bad())).collect::<Result<Vec<Element>>>()?;
        let count: u64 = field(3).parse().map_err(|_| bad())?;
        if a.is_none_or(|a| a == params.as_slice()) {
            out.push((index, count));
        }
    }
    Ok(out)
}
