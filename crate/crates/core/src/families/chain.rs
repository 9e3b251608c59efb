//! Chains of members joined by explicit embeddings.

use alloc::vec;
use alloc::vec::Vec;

use super::geometric::{projective_points, Space};
use super::{generate, FamilyError, FamilyKind, FamilySpec};
use crate::eval::satisfies;
use crate::logic::{Formula, SortId};
use crate::structures::{Element, Embedding, FiniteStructure};

/// Stages `M_0 < M_1 < ..` with `embeddings[i] : M_i -> M_(i+1)`.
#[derive(Clone, Debug)]
pub struct Chain {
    pub spec: FamilySpec,
    pub indices: Vec<Vec<u64>>,
    pub stages: Vec<FiniteStructure>,
    pub embeddings: Vec<Embedding>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// The composite embedding `M_from -> M_to` (`from <= to`).
    pub fn embedding(&self, from: usize, to: usize) -> Embedding {
        let mut e = Embedding::identity(&self.stages[from]);
        for step in &self.embeddings[from..to] {
            e = e.then(step);
        }
        e
    }

    /// The image of a first-stage tuple in stage `i`.
    pub fn lift(&self, tuple: &[(SortId, Element)], i: usize) -> Vec<Element> {
        let e = self.embedding(0, i);
        tuple.iter().map(|&(s, x)| e.apply(s, x)).collect()
    }
}

fn pow(b: u64, e: u64) -> u64 {
    b.pow(e as u32)
}

/// Mixed-radix digits with the first coordinate most significant.
fn digits(mut e: u64, radices: &[u64]) -> Vec<u64> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = e % r;
        e /= r;
    }
    out
}

fn number(ds: &[u64], radices: &[u64]) -> u64 {
    ds.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

/// Map each coordinate with `step` from one radix vector to another; the
/// extra target coordinates are zero.
fn coordinatewise(small: &[u64], big: &[u64], step: &dyn Fn(usize, u64) -> u64) -> Vec<Element> {
    let n: u64 = small.iter().product();
    (0..n)
        .map(|e| {
            let mut ds = digits(e, small);
            for (i, d) in ds.iter_mut().enumerate() {
                *d = step(i, *d);
            }
            ds.resize(big.len(), 0);
            number(&ds, big) as Element
        })
        .collect()
}

fn natural_embedding(spec: &FamilySpec, a: &[u64], b: &[u64]) -> Result<Embedding, FamilyError> {
    let bad = || FamilyError::NotMonotone(a.to_vec(), b.to_vec());
    if a.iter().zip(b).any(|(x, y)| x > y) || spec.size(a)? >= spec.size(b)? {
        return Err(bad());
    }
    let maps = match spec.kind {
        FamilyKind::PureSet | FamilyKind::LinearOrder => vec![(0..a[0] as Element).collect()],
        FamilyKind::CyclicGroup => {
            if b[0] % a[0] != 0 {
                return Err(bad());
            }
            let k = b[0] / a[0];
            vec![(0..a[0]).map(|e| (e * k) as Element).collect()]
        }
        FamilyKind::CyclicDirectSum => {
            if a.iter().zip(b).any(|(x, y)| y % x != 0) {
                return Err(bad());
            }
            vec![coordinatewise(a, b, &|i, d| d * (b[i] / a[i]))]
        }
        FamilyKind::NestedEquivalence => vec![coordinatewise(a, b, &|_, d| d)],
        FamilyKind::Homocyclic => {
            let p = spec.get("p")?;
            let k = pow(p, b[0] - a[0]);
            vec![coordinatewise(&vec![pow(p, a[0]); a[1] as usize], &vec![pow(p, b[0]); b[1] as usize], &|_, d| d * k)]
        }
        FamilyKind::PGroupPower => {
            let r = spec.get("p")?.pow(2);
            vec![coordinatewise(&vec![r; a[0] as usize], &vec![r; b[0] as usize], &|_, d| d)]
        }
        FamilyKind::VectorSpace | FamilyKind::SymplecticSpace | FamilyKind::OrthogonalSpace | FamilyKind::PolarPair => {
            let q = spec.get("q")?;
            let da = super::geometric::dimension(spec, a)? as usize;
            let db = super::geometric::dimension(spec, b)? as usize;
            let map = coordinatewise(&vec![q; da], &vec![q; db], &|_, d| d);
            if spec.kind == FamilyKind::PolarPair {
                vec![map.clone(), map]
            } else {
                vec![map]
            }
        }
        FamilyKind::ProjectiveSpace => {
            let q = spec.get("q")?;
            let (small, big) = (Space::new(q, a[0] as usize), Space::new(q, b[0] as usize));
            let targets = projective_points(&big);
            let map = projective_points(&small)
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w.resize(big.n, 0);
                    targets.iter().position(|t| *t == w).expect("padded point is normalized") as Element
                })
                .collect();
            vec![map]
        }
        FamilyKind::MultiplicativeMonoid => return Err(FamilyError::NoChain(spec.kind.name())),
    };
    Ok(Embedding { maps })
}

/// Build the members at `indices` and the natural embeddings between
/// consecutive ones.
pub fn chain(spec: &FamilySpec, indices: &[Vec<u64>]) -> Result<Chain, FamilyError> {
    let mut embeddings = Vec::new();
    for w in indices.windows(2) {
        spec.check_index(&w[0])?;
        spec.check_index(&w[1])?;
        embeddings.push(natural_embedding(spec, &w[0], &w[1])?);
    }
    let stages = indices.iter().map(|i| generate(spec, i)).collect::<Result<Vec<_>, _>>()?;
    Ok(Chain { spec: spec.clone(), indices: indices.to_vec(), stages, embeddings })
}

/// Truth values of `chi(c)` along a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualTruth {
    pub values: Vec<bool>,
    /// Whether the last two stages agree.
    pub stabilized: bool,
    /// First stage from which every value equals the last one.
    pub q: usize,
    pub value: bool,
}

/// Evaluate `chi` at the image of `c` (a first-stage tuple, one entry per
/// free variable of `chi`) in every stage.
pub fn eventual_truth_check(chain: &Chain, chi: &Formula, c: &[(SortId, Element)]) -> Result<EventualTruth, FamilyError> {
    let first = chain.stages.first().ok_or(FamilyError::NotEmbeddable)?;
    let sorts: Vec<SortId> = chi.declared().map(|v| v.sort).collect();
    if sorts.len() != c.len() || c.iter().zip(&sorts).any(|(&(s, e), &t)| s != t || e as usize >= first.size(s)) {
        return Err(FamilyError::NotEmbeddable);
    }
    let mut values = Vec::with_capacity(chain.len());
    for (i, m) in chain.stages.iter().enumerate() {
        values.push(satisfies(m, chi, &chain.lift(c, i))?);
    }
    let value = *values.last().expect("nonempty");
    let q = values.iter().rposition(|&v| v != value).map_or(0, |i| i + 1);
    let stabilized = values.len() < 2 || values[values.len() - 2] == value;
    Ok(EventualTruth { values, stabilized, q, value })
}
