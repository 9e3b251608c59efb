use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use exactlab_core::eval::{solution_set, TypeCache, TypeInterner};
use exactlab_core::families::{self, chain, eventual_truth_check, FamilySpec};
use exactlab_core::geometry::{
    brute_force_point_count, build_envelope, orthogonal_zero_count, projective_point_count, EnvelopeExample, FormSign, GeometryKind,
};
use exactlab_core::logic::{parse_formula, Formula, SortId};
use exactlab_core::mec::{
    fit_measuring_polynomial, polynomial_exact_report_with_counts, split_holdout, BasisKind, FitConfig, Observation, PointedGrid, Verdict,
};
use exactlab_core::poly::rational;
use exactlab_core::geometry::RadicalNumber;
use exactlab_core::structures::{Element, FiniteStructure};
use exactlab_core::symmetry::{count_k_types, is_homogeneous_substructure, orbits_on_tuples};

use crate::config::{self, Overrides};
use crate::error::{parse, semantic, LabError, Result};
use crate::parallel;
use crate::report::{self, PointCountRow};
use crate::structfile::{read_structure_file, write_structure};

#[derive(Debug, Parser)]
#[command(name = "exactlab", version, about = "Finite model theory experiments on exact classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the solutions of a formula at one parameter tuple.
    Eval {
        structure: PathBuf,
        formula: String,
        /// Parameter elements, comma separated; a leading letter is ignored
        /// (`a3` is element 3).
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Also list the solutions.
        #[arg(long)]
        witnesses: bool,
    },
    /// Count the solutions at every parameter tuple.
    Count {
        structure: PathBuf,
        formula: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write `a,count` rows here instead of printing them.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of complete k-types (automorphism orbits on k-tuples), or of
    /// rank-r types with `--rank`.
    Types {
        structure: PathBuf,
        k: usize,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Orbits of the automorphism group on k-tuples.
    Orbits {
        structure: PathBuf,
        k: usize,
        /// CSV of every tuple with its orbit.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is the substructure on these elements homogeneous in the whole?
    /// Elements are `id` (first sort) or `SORT:id`.
    Homsub {
        structure: PathBuf,
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// Generate a family member.
    Gen {
        family: String,
        #[arg(required = true)]
        index: Vec<u64>,
        /// Fixed family parameters such as `t=3`.
        #[arg(long, value_parser = key_value)]
        fixed: Vec<(String, u64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a chain of members and check every embedding.
    Chain {
        family: String,
        /// Indices in increasing order, coordinates comma separated.
        #[arg(required = true)]
        indices: Vec<String>,
        #[arg(long, value_parser = key_value)]
        fixed: Vec<(String, u64)>,
    },
    /// Truth of a formula at a fixed first-stage tuple along a chain.
    Eventual {
        family: String,
        formula: String,
        #[arg(required = true)]
        indices: Vec<String>,
        #[arg(long, value_parser = key_value)]
        fixed: Vec<(String, u64)>,
        /// First-stage elements for the free variables, comma separated.
        #[arg(long, value_delimiter = ',')]
        at: Vec<Element>,
    },
    /// Envelope of a given dimension vector: `nested` or `pgroup`.
    Envelope {
        example: String,
        #[arg(required = true)]
        dims: Vec<u64>,
        /// The prime for `pgroup`.
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Write the structure here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Projective point count, or with ALPHA the vectors of an orthogonal
    /// or unitary space where the form takes that value.
    Pointcount {
        kind: String,
        q: u64,
        dim: u64,
        alpha: Option<u32>,
        /// Dimension of the anisotropic tail of an orthogonal form; by
        /// default 1 for odd and 2 for even dimension.
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, default_value = "plus")]
        sign: String,
        /// Count by enumerating vectors.
        #[arg(long)]
        brute: bool,
        /// Write a CSV row here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment configuration.
    Mec {
        config: PathBuf,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        basis: Option<String>,
        /// Holdout indices, coordinates comma separated.
        #[arg(long, num_args = 1..)]
        holdout: Option<Vec<String>>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the report and the observations CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit an exact polynomial in the index to an observations CSV.
    Fit {
        observations: PathBuf,
        /// Which formula of the table (1-based).
        #[arg(long, default_value_t = 1)]
        formula: usize,
        /// Keep only rows at this parameter tuple.
        #[arg(long, value_delimiter = ',')]
        params: Option<Vec<Element>>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value = "index")]
        basis: String,
        /// Percentage of the points kept back for verification.
        #[arg(long, default_value_t = 0)]
        holdout: u32,
    },
}

fn key_value(s: &str) -> std::result::Result<(String, u64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VALUE")?;
    Ok((k.trim().to_string(), v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?))
}

fn index_list(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| LabError::Parse(format!("bad index `{s}`")))).collect()
}

fn element(s: &str) -> Result<Element> {
    s.trim_start_matches(|c: char| c.is_ascii_alphabetic()).parse().map_err(|_| LabError::Parse(format!("bad element `{s}`")))
}

fn spec_of(family: &str, fixed: &[(String, u64)]) -> Result<FamilySpec> {
    config::family_spec(family, &fixed.iter().cloned().collect::<BTreeMap<_, _>>())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(LabError::io(dir))?;
    }
    std::fs::write(path, bytes).map_err(LabError::io(path))
}

fn yes(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn check_params(m: &FiniteStructure, phi: &Formula, a: &[Element]) -> Result<()> {
    let sorts = phi.param_sorts();
    if sorts.len() != a.len() {
        return Err(LabError::Semantic(format!("formula has {} parameters, {} given", sorts.len(), a.len())));
    }
    for (&e, s) in a.iter().zip(sorts) {
        if e as usize >= m.size(s) {
            return Err(LabError::Semantic(format!("element {e} is not in sort {}", m.signature().sort_name(s))));
        }
    }
    Ok(())
}

/// Run one command. `invocation` is recorded in reports.
pub fn run(cli: Cli, invocation: &str, out: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| LabError::Io { path: "<stdout>".into(), source: e };
    match cli.command {
        Command::Eval { structure, formula, params, witnesses } => {
            let m = read_structure_file(&structure)?;
            let phi = parse_formula(&formula, m.signature()).map_err(parse)?;
            let a = params.iter().map(|p| element(p)).collect::<Result<Vec<_>>>()?;
            check_params(&m, &phi, &a)?;
            let count = exactlab_core::solution_count(&m, &phi, &a).map_err(semantic)?;
            writeln!(out, "{count}").map_err(io)?;
            if witnesses {
                for s in solution_set(&m, &phi, &a).map_err(semantic)? {
                    writeln!(out, "({})", report::tuple(&s)).map_err(io)?;
                }
            }
        }
        Command::Count { structure, formula, jobs, out: path } => {
            let m = read_structure_file(&structure)?;
            let phi = parse_formula(&formula, m.signature()).map_err(parse)?;
            let pool = parallel::pool(jobs.max(1))?;
            let rows = parallel::count_all(&pool, &m, &phi)?;
            match path {
                Some(path) => {
                    let mut wtr = csv::Writer::from_writer(Vec::new());
                    wtr.write_record(["a", "count"]).map_err(semantic)?;
                    for (a, c) in &rows {
                        wtr.write_record([report::tuple(a), c.clone()]).map_err(semantic)?;
                    }
                    write_file(&path, &wtr.into_inner().map_err(semantic)?)?;
                }
                None => {
                    for (a, c) in &rows {
                        writeln!(out, "({}) {c}", report::tuple(a)).map_err(io)?;
                    }
                }
            }
        }
        Command::Types { structure, k, rank } => {
            let m = read_structure_file(&structure)?;
            let n = match rank {
                None => count_k_types(&m, k).map_err(semantic)?,
                Some(r) => ranked_type_count(&m, k, r)?,
            };
            writeln!(out, "{n}").map_err(io)?;
        }
        Command::Orbits { structure, k, out: path } => {
            let m = read_structure_file(&structure)?;
            let orbits = orbits_on_tuples(&m, k).map_err(semantic)?;
            writeln!(out, "{}", orbits.num_classes()).map_err(io)?;
            for (i, r) in orbits.representatives().iter().enumerate() {
                writeln!(out, "orbit {i}: ({})", report::tuple(r)).map_err(io)?;
            }
            if let Some(path) = path {
                write_file(&path, &report::orbits_csv(orbits.iter())?)?;
            }
        }
        Command::Homsub { structure, elements } => {
            let m = read_structure_file(&structure)?;
            let sig = m.signature();
            let mut subset = vec![Vec::new(); sig.sorts().len()];
            for e in &elements {
                let (sort, id) = match e.split_once(':') {
                    Some((s, id)) => (sig.sort(s).ok_or_else(|| LabError::Semantic(format!("unknown sort `{s}`")))?, element(id)?),
                    None => (0, element(e)?),
                };
                if id as usize >= m.size(sort) {
                    return Err(LabError::Semantic(format!("element {id} is not in sort {}", sig.sort_name(sort))));
                }
                subset[sort].push(id);
            }
            for s in &mut subset {
                s.sort_unstable();
                s.dedup();
            }
            let h = is_homogeneous_substructure(&m, &subset).map_err(semantic)?;
            writeln!(out, "{}", yes(h.holds)).map_err(io)?;
            if let Some(w) = h.witness {
                let show = |t: &[(SortId, Element)]| t.iter().map(|&(s, e)| format!("{}:{e}", sig.sort_name(s))).collect::<Vec<_>>().join(" ");
                writeln!(out, "left: {}", show(&w.left)).map_err(io)?;
                writeln!(out, "right: {}", show(&w.right)).map_err(io)?;
            }
        }
        Command::Gen { family, index, fixed, out: path } => {
            let spec = spec_of(&family, &fixed)?;
            let m = families::generate(&spec, &index).map_err(semantic)?;
            let text = write_structure(&m);
            match path {
                Some(path) => write_file(&path, text.as_bytes())?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
        }
        Command::Chain { family, indices, fixed } => {
            let spec = spec_of(&family, &fixed)?;
            let indices = indices.iter().map(|s| index_list(s)).collect::<Result<Vec<_>>>()?;
            let c = chain(&spec, &indices).map_err(semantic)?;
            for (i, m) in c.stages.iter().enumerate() {
                let sizes: Vec<String> = m.sizes().iter().map(|s| s.to_string()).collect();
                writeln!(out, "stage {i}: index {} sizes {}", report::tuple_u64(&c.indices[i]), sizes.join(" ")).map_err(io)?;
            }
            for i in 0..c.len().saturating_sub(1) {
                let ok = c.embedding(i, i + 1).is_substructure_map(&c.stages[i], &c.stages[i + 1]);
                writeln!(out, "embedding {i} -> {}: {}", i + 1, if ok { "substructure" } else { "not a substructure" }).map_err(io)?;
            }
        }
        Command::Eventual { family, formula, indices, fixed, at } => {
            let spec = spec_of(&family, &fixed)?;
            let sig = spec.signature().map_err(semantic)?;
            let chi = parse_formula(&formula, &sig).map_err(parse)?;
            let indices = indices.iter().map(|s| index_list(s)).collect::<Result<Vec<_>>>()?;
            let c = chain(&spec, &indices).map_err(semantic)?;
            let sorts: Vec<SortId> = chi.declared().map(|v| v.sort).collect();
            if sorts.len() != at.len() {
                return Err(LabError::Semantic(format!("formula has {} free variables, {} elements given", sorts.len(), at.len())));
            }
            let tuple: Vec<(SortId, Element)> = sorts.into_iter().zip(at).collect();
            let t = eventual_truth_check(&c, &chi, &tuple).map_err(semantic)?;
            let values: Vec<&str> = t.values.iter().map(|&v| if v { "1" } else { "0" }).collect();
            writeln!(out, "values: {}", values.join(" ")).map_err(io)?;
            writeln!(out, "stabilized: {}", yes(t.stabilized)).map_err(io)?;
            writeln!(out, "from stage: {}", t.q).map_err(io)?;
            writeln!(out, "value: {}", t.value).map_err(io)?;
        }
        Command::Envelope { example, dims, p, out: path } => {
            let ex = match example.as_str() {
                "nested" => EnvelopeExample::NestedEquivalence,
                "pgroup" => EnvelopeExample::PGroupPower { p },
                other => return Err(LabError::Semantic(format!("unknown envelope `{other}`; expected nested or pgroup"))),
            };
            let e = build_envelope(ex, &dims).map_err(semantic)?;
            writeln!(out, "family: {} index {}", e.spec.kind.name(), report::tuple_u64(&e.index)).map_err(io)?;
            writeln!(out, "size: {}", e.structure.total_size()).map_err(io)?;
            for (i, (kind, d)) in e.mu.entries.iter().enumerate() {
                let q = kind.q().map(|q| format!(" q={q}")).unwrap_or_default();
                writeln!(out, "mu {}: {}{q} dim {d}", i + 1, kind.name()).map_err(io)?;
            }
            let dstar: Vec<String> = e.dstar.iter().map(|d| d.to_string()).collect();
            writeln!(out, "dstar: {}", dstar.join(" ")).map_err(io)?;
            writeln!(out, "measured mu agrees: {}", yes(e.measured_mu() == e.mu)).map_err(io)?;
            if let Some(path) = path {
                write_file(&path, write_structure(&e.structure).as_bytes())?;
            }
        }
        Command::Pointcount { kind, q, dim, alpha, j, sign, brute, out: path } => {
            let row = pointcount(&kind, q, dim, alpha, j, &sign, brute)?;
            writeln!(out, "{}", row.count).map_err(io)?;
            if let Some(path) = path {
                write_file(&path, &report::pointcount_csv(&[row])?)?;
            }
        }
        Command::Mec { config: path, rank, degree, basis, holdout, jobs, seed, out: dir } => {
            let cfg = config::load(&path)?;
            let holdout = holdout.map(|hs| hs.iter().map(|h| index_list(h)).collect::<Result<Vec<_>>>()).transpose()?;
            let exp = cfg.resolve(&Overrides { rank, degree, basis, holdout, jobs, seed })?;
            let grid = match exp.sample {
                Some(cap) => PointedGrid::sampled(&exp.spec, &exp.indices, &exp.param_sorts, cap, exp.seed),
                None => PointedGrid::new(&exp.spec, &exp.indices, &exp.param_sorts),
            }
            .map_err(semantic)?;
            let pool = parallel::pool(exp.jobs)?;
            let counts = exp.formulas.iter().map(|phi| parallel::count_grid(&pool, &grid, phi)).collect::<Result<Vec<_>>>()?;
            let result = polynomial_exact_report_with_counts(&grid, &exp.formulas, &counts, &exp.mec).map_err(semantic)?;
            let text = report::mec_report(&result, &exp, &grid, invocation);
            let csv = report::observations_csv(&result)?;
            let base = path.parent().unwrap_or(Path::new(""));
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "mec".into());
            let (report_path, csv_path) = match dir {
                Some(d) => (Some(d.join(format!("{stem}.report"))), Some(d.join(format!("{stem}.csv")))),
                None => (exp.report.map(|p| base.join(p)), exp.observations.map(|p| base.join(p))),
            };
            match report_path {
                Some(p) => write_file(&p, text.as_bytes())?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            if let Some(p) = csv_path {
                write_file(&p, &csv)?;
            }
            writeln!(out, "verdict: {}", result.verdict.name()).map_err(io)?;
            match result.verdict {
                Verdict::PolynomialExact => {}
                Verdict::Inconclusive => return Err(LabError::Inconclusive("see the report".into())),
                Verdict::Falsified => return Err(LabError::Falsified("see the report".into())),
            }
        }
        Command::Fit { observations, formula, params, degree, basis, holdout } => {
            if config::parse_basis(&basis)? != "index" {
                return Err(LabError::Semantic("fit reads index coordinates only; use mec for other bases".into()));
            }
            let bytes = std::fs::read(&observations).map_err(LabError::io(&observations))?;
            let rows = report::read_observations(&bytes, formula, params.as_deref())?;
            let mut by_index: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            for (index, c) in rows {
                if let Some(old) = by_index.insert(index.clone(), c).filter(|&old| old != c) {
                    return Err(LabError::Semantic(format!(
                        "index {} has counts {old} and {c}; pick one parameter tuple with --params",
                        report::tuple_u64(&index)
                    )));
                }
            }
            let obs: Vec<Observation> = by_index
                .into_iter()
                .map(|(label, count)| Observation {
                    point: label.iter().map(|&i| RadicalNumber::rational(rational(i as i64))).collect(),
                    label,
                    count,
                })
                .collect();
            let (fit, hold) = split_holdout(&obs, holdout);
            let mut cfg = FitConfig::default();
            if let Some(d) = degree {
                cfg.degree_cap = d;
            }
            let mp = fit_measuring_polynomial(&fit, &hold, &cfg, BasisKind::FamilyIndex).map_err(semantic)?;
            writeln!(out, "{}", mp.polynomial).map_err(io)?;
            for (m, c) in mp.polynomial.terms() {
                let mono = exactlab_core::poly::Polynomial::from_terms(mp.polynomial.nvars(), [(m.clone(), rational(1))]);
                writeln!(out, "coefficient {mono}: {}", report::ratio(c)).map_err(io)?;
            }
            writeln!(out, "fit points: {}, holdout points: {}, holdout failures: {}", mp.fit.len(), mp.holdout.len(), mp.holdout_failures.len())
                .map_err(io)?;
            if !mp.verified() {
                return Err(LabError::Inconclusive("the polynomial misses holdout points".into()));
            }
        }
    }
    Ok(())
}

/// Distinct rank-`r` types of `k`-tuples of elements of any sort.
fn ranked_type_count(m: &FiniteStructure, k: usize, r: usize) -> Result<usize> {
    let n = m.total_size();
    let total = (n as u128).checked_pow(k as u32).filter(|&t| t <= 1 << 24);
    let total = total.ok_or_else(|| LabError::Semantic("too many tuples".into()))? as usize;
    let mut interner = TypeInterner::new();
    let mut cache = TypeCache::new(m);
    let mut seen = BTreeSet::new();
    let mut tuple = vec![(0, 0); k];
    for code in 0..total {
        let mut rest = code;
        for slot in tuple.iter_mut().rev() {
            *slot = m.local(rest % n);
            rest /= n;
        }
        let t: Vec<(SortId, Element)> = tuple.iter().map(|&(s, e)| (s, e)).collect();
        seen.insert(cache.ranked_type(&mut interner, &t, r));
    }
    Ok(seen.len())
}

fn pointcount(kind: &str, q: u64, dim: u64, alpha: Option<u32>, j: Option<usize>, sign: &str, brute: bool) -> Result<PointCountRow> {
    let sign = match sign {
        "plus" | "+" => FormSign::Plus,
        "minus" | "-" => FormSign::Minus,
        other => return Err(LabError::Semantic(format!("unknown sign `{other}`"))),
    };
    let geometry = match kind {
        "degenerate" => GeometryKind::Degenerate,
        "vector" => GeometryKind::PureVector { q },
        "polar" => GeometryKind::Polar { q },
        "symplectic" => GeometryKind::Symplectic { q },
        "unitary" => GeometryKind::Unitary { q },
        "orthogonal" => GeometryKind::Orthogonal { q, j: j.unwrap_or(if dim % 2 == 1 { 1 } else { 2 }), sign },
        other => {
            return Err(LabError::Semantic(format!(
                "unknown geometry `{other}`; expected degenerate, vector, polar, symplectic, unitary or orthogonal"
            )))
        }
    };
    let (count, method) = if brute {
        (brute_force_point_count(geometry, dim, alpha).map_err(semantic)?, "enumeration")
    } else if let (Some(a), GeometryKind::Orthogonal { j, sign, .. }) = (alpha, geometry) {
        (orthogonal_zero_count(q, dim, a, j, sign).map_err(semantic)?, "recurrence")
    } else if alpha.is_some() {
        (brute_force_point_count(geometry, dim, alpha).map_err(semantic)?, "enumeration")
    } else {
        let method = match geometry {
            GeometryKind::Unitary { .. } | GeometryKind::Orthogonal { .. } => "enumeration",
            _ => "closed form",
        };
        (projective_point_count(geometry, dim).map_err(semantic)?, method)
    };
    Ok(PointCountRow { kind: kind.to_string(), q, dim, alpha, count, method })
}
