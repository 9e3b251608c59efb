//! Indexed families of finite structures and chains of them.
//!
//! A [`FamilySpec`] fixes a kind and its fixed parameters (a prime `p`, a
//! field size `q`, a number of parts). [`generate`] builds the member at a
//! natural-number index. Element ids are canonical: tuples are numbered in
//! mixed radix with the first coordinate most significant.

mod chain;
mod geometric;

pub use chain::{chain, eventual_truth_check, Chain, EventualTruth};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::field::{is_prime, prime_power};
use crate::logic::Signature;
use crate::structures::{Element, FiniteStructure, StructureBuilder};
use crate::util::Odometer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FamilyKind {
    PureSet,
    LinearOrder,
    CyclicGroup,
    CyclicDirectSum,
    Homocyclic,
    MultiplicativeMonoid,
    NestedEquivalence,
    PGroupPower,
    VectorSpace,
    ProjectiveSpace,
    PolarPair,
    SymplecticSpace,
    OrthogonalSpace,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 13] = [
        FamilyKind::PureSet,
        FamilyKind::LinearOrder,
        FamilyKind::CyclicGroup,
        FamilyKind::CyclicDirectSum,
        FamilyKind::Homocyclic,
        FamilyKind::MultiplicativeMonoid,
        FamilyKind::NestedEquivalence,
        FamilyKind::PGroupPower,
        FamilyKind::VectorSpace,
        FamilyKind::ProjectiveSpace,
        FamilyKind::PolarPair,
        FamilyKind::SymplecticSpace,
        FamilyKind::OrthogonalSpace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::PureSet => "PureSet",
            FamilyKind::LinearOrder => "LinearOrder",
            FamilyKind::CyclicGroup => "CyclicGroup",
            FamilyKind::CyclicDirectSum => "CyclicDirectSum",
            FamilyKind::Homocyclic => "Homocyclic",
            FamilyKind::MultiplicativeMonoid => "MultiplicativeMonoid",
            FamilyKind::NestedEquivalence => "NestedEquivalence",
            FamilyKind::PGroupPower => "PGroupPower",
            FamilyKind::VectorSpace => "VectorSpace",
            FamilyKind::ProjectiveSpace => "ProjectiveSpace",
            FamilyKind::PolarPair => "PolarPair",
            FamilyKind::SymplecticSpace => "SymplecticSpace",
            FamilyKind::OrthogonalSpace => "OrthogonalSpace",
        }
    }

    pub fn from_name(name: &str) -> Option<FamilyKind> {
        FamilyKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name))
    }

    /// Names of the fixed parameters this kind requires.
    pub fn fixed_names(self) -> &'static [&'static str] {
        match self {
            FamilyKind::PureSet | FamilyKind::LinearOrder | FamilyKind::CyclicGroup => &[],
            FamilyKind::CyclicDirectSum => &["k"],
            FamilyKind::NestedEquivalence => &["t"],
            FamilyKind::Homocyclic | FamilyKind::MultiplicativeMonoid | FamilyKind::PGroupPower => &["p"],
            FamilyKind::VectorSpace | FamilyKind::ProjectiveSpace | FamilyKind::PolarPair | FamilyKind::SymplecticSpace => {
                &["q"]
            }
            FamilyKind::OrthogonalSpace => &["q", "j", "sign"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("missing fixed parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("unexpected fixed parameter `{0}`")]
    UnexpectedParameter(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("bad fixed parameter `{name}` = {value}: {reason}")]
    BadParameter { name: &'static str, value: u64, reason: &'static str },
    #[error("invalid index {index:?}: {reason}")]
    InvalidIndex { index: Vec<u64>, reason: String },
    #[error("structure with {0} elements or table cells exceeds the generation limit")]
    TooLarge(u128),
    #[error("indices are not increasing in the embedding order: {0:?} then {1:?}")]
    NotMonotone(Vec<u64>, Vec<u64>),
    #[error("{0} has no chain embeddings")]
    NoChain(&'static str),
    #[error("tuple does not lie in the first stage")]
    NotEmbeddable,
    #[error("formula does not evaluate: {0}")]
    Eval(#[from] crate::eval::EvalError),
}

/// One varying index coordinate with its inclusive range.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexParam {
    pub name: String,
    pub min: u64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub fixed: Vec<(String, u64)>,
    pub schema: Vec<IndexParam>,
}

/// Elements per structure.
pub const MAX_ELEMENTS: u128 = 1 << 16;
/// Cells per function table or relation bit table.
pub const MAX_CELLS: u128 = 1 << 26;

fn param(name: &str, min: u64, max: u64) -> IndexParam {
    IndexParam { name: name.to_string(), min, max }
}

impl FamilySpec {
    /// Validate the fixed parameters and attach the default index schema.
    pub fn new(kind: FamilyKind, fixed: &[(&str, u64)]) -> Result<FamilySpec, FamilyError> {
        for (name, _) in fixed {
            if !kind.fixed_names().contains(name) {
                return Err(FamilyError::UnexpectedParameter(name.to_string()));
            }
        }
        let mut spec = FamilySpec {
            kind,
            fixed: fixed.iter().map(|&(n, v)| (n.to_string(), v)).collect(),
            schema: Vec::new(),
        };
        for &name in kind.fixed_names() {
            spec.get(name)?;
        }
        let big = u64::MAX;
        spec.schema = match kind {
            FamilyKind::PureSet | FamilyKind::LinearOrder | FamilyKind::CyclicGroup => vec![param("n", 1, big)],
            FamilyKind::CyclicDirectSum => {
                let k = spec.get("k")?;
                if k == 0 {
                    return Err(FamilyError::BadParameter { name: "k", value: 0, reason: "need at least one part" });
                }
                (1..=k).map(|i| param(&format!("n{i}"), 1, big)).collect()
            }
            FamilyKind::NestedEquivalence => {
                let t = spec.get("t")?;
                if t == 0 {
                    return Err(FamilyError::BadParameter { name: "t", value: 0, reason: "need at least one level" });
                }
                (1..=t).map(|i| param(&format!("n{i}"), 1, big)).collect()
            }
            FamilyKind::Homocyclic => {
                spec.prime()?;
                vec![param("n", 1, big), param("m", 1, big)]
            }
            FamilyKind::MultiplicativeMonoid | FamilyKind::PGroupPower => {
                spec.prime()?;
                vec![param("n", 1, big)]
            }
            FamilyKind::VectorSpace | FamilyKind::ProjectiveSpace | FamilyKind::PolarPair => {
                spec.field()?;
                vec![param("n", 1, big)]
            }
            FamilyKind::SymplecticSpace => {
                spec.field()?;
                vec![param("n", 2, big)]
            }
            FamilyKind::OrthogonalSpace => {
                spec.field()?;
                let j = spec.get("j")?;
                if !(1..=2).contains(&j) {
                    return Err(FamilyError::BadParameter { name: "j", value: j, reason: "anisotropic part has dimension 1 or 2" });
                }
                let sign = spec.get("sign")?;
                if sign > 1 {
                    return Err(FamilyError::BadParameter { name: "sign", value: sign, reason: "0 is plus, 1 is minus" });
                }
                vec![param("i", 0, big)]
            }
        };
        Ok(spec)
    }

    pub fn pure_set() -> FamilySpec {
        FamilySpec::new(FamilyKind::PureSet, &[]).expect("no parameters")
    }

    pub fn linear_order() -> FamilySpec {
        FamilySpec::new(FamilyKind::LinearOrder, &[]).expect("no parameters")
    }

    pub fn nested_equivalence(t: u64) -> Result<FamilySpec, FamilyError> {
        FamilySpec::new(FamilyKind::NestedEquivalence, &[("t", t)])
    }

    pub fn pgroup_power(p: u64) -> Result<FamilySpec, FamilyError> {
        FamilySpec::new(FamilyKind::PGroupPower, &[("p", p)])
    }

    pub fn monoid(p: u64) -> Result<FamilySpec, FamilyError> {
        FamilySpec::new(FamilyKind::MultiplicativeMonoid, &[("p", p)])
    }

    pub fn get(&self, name: &'static str) -> Result<u64, FamilyError> {
        self.fixed.iter().find(|(n, _)| n == name).map(|&(_, v)| v).ok_or(FamilyError::MissingParameter(name))
    }

    fn prime(&self) -> Result<u64, FamilyError> {
        let p = self.get("p")?;
        if is_prime(p) { Ok(p) } else { Err(FamilyError::NotPrime(p)) }
    }

    fn field(&self) -> Result<u64, FamilyError> {
        let q = self.get("q")?;
        match prime_power(q) {
            Some(_) if q <= crate::geometry::field::MAX_FIELD => Ok(q),
            Some(_) => Err(FamilyError::BadParameter { name: "q", value: q, reason: "field too large" }),
            None => Err(FamilyError::NotPrimePower(q)),
        }
    }

    /// Restrict the range of one index coordinate.
    pub fn with_range(mut self, name: &str, min: u64, max: u64) -> Result<FamilySpec, FamilyError> {
        let Some(p) = self.schema.iter_mut().find(|p| p.name == name) else {
            return Err(FamilyError::InvalidIndex { index: Vec::new(), reason: format!("no index coordinate `{name}`") });
        };
        if min > max || min < p.min {
            return Err(FamilyError::InvalidIndex { index: vec![min, max], reason: format!("empty or widened range for `{name}`") });
        }
        p.min = min;
        p.max = max;
        Ok(self)
    }

    pub fn check_index(&self, index: &[u64]) -> Result<(), FamilyError> {
        let bad = |reason: String| FamilyError::InvalidIndex { index: index.to_vec(), reason };
        if index.len() != self.schema.len() {
            return Err(bad(format!("expected {} coordinates", self.schema.len())));
        }
        for (v, p) in index.iter().zip(&self.schema) {
            if *v < p.min || *v > p.max {
                return Err(bad(format!("`{}` must lie in {}..={}", p.name, p.min, p.max)));
            }
        }
        if self.kind == FamilyKind::SymplecticSpace && index[0] % 2 == 1 {
            return Err(bad("symplectic spaces have even dimension".to_string()));
        }
        Ok(())
    }

    /// The (index-independent) signature of every member.
    pub fn signature(&self) -> Result<Signature, FamilyError> {
        Ok(match self.kind {
            FamilyKind::PureSet => Signature::single_sorted("M"),
            FamilyKind::LinearOrder => {
                let mut s = Signature::single_sorted("M");
                s.add_relation("<", &[0, 0]).expect("fresh");
                s
            }
            FamilyKind::CyclicGroup | FamilyKind::PGroupPower => {
                let mut s = Signature::single_sorted("M");
                s.add_function("+", &[0, 0], 0).expect("fresh");
                s.add_constant("0", 0).expect("fresh");
                s
            }
            FamilyKind::Homocyclic => {
                let mut s = Signature::single_sorted("M");
                s.add_function("+", &[0, 0], 0).expect("fresh");
                s
            }
            FamilyKind::CyclicDirectSum => {
                let mut s = Signature::single_sorted("M");
                s.add_function("+", &[0, 0], 0).expect("fresh");
                for i in 1..=self.get("k")? {
                    s.add_relation(&format!("P{i}"), &[0]).expect("fresh");
                }
                s
            }
            FamilyKind::MultiplicativeMonoid => {
                let mut s = Signature::single_sorted("M");
                s.add_function("*", &[0, 0], 0).expect("fresh");
                s
            }
            FamilyKind::NestedEquivalence => {
                let mut s = Signature::single_sorted("M");
                for i in 1..self.get("t")? {
                    s.add_relation(&format!("I{i}"), &[0, 0]).expect("fresh");
                }
                s
            }
            _ => geometric::signature(self)?,
        })
    }

    /// Number of elements of the member at `index` (all sorts).
    pub fn size(&self, index: &[u64]) -> Result<u128, FamilyError> {
        self.check_index(index)?;
        let pow = |b: u64, e: u64| -> u128 { (b as u128).saturating_pow(e.min(u32::MAX as u64) as u32) };
        let prod = |xs: &[u64]| xs.iter().fold(1u128, |a, &x| a.saturating_mul(x as u128));
        Ok(match self.kind {
            FamilyKind::PureSet | FamilyKind::LinearOrder | FamilyKind::CyclicGroup => index[0] as u128,
            FamilyKind::CyclicDirectSum | FamilyKind::NestedEquivalence => prod(index),
            FamilyKind::Homocyclic => pow(self.get("p")?, index[0].saturating_mul(index[1])),
            FamilyKind::MultiplicativeMonoid => pow(self.get("p")?, index[0]),
            FamilyKind::PGroupPower => pow(self.get("p")?, 2 * index[0]),
            _ => geometric::size(self, index)?,
        })
    }
}

fn guard(cells: u128, limit: u128) -> Result<(), FamilyError> {
    if cells > limit { Err(FamilyError::TooLarge(cells)) } else { Ok(()) }
}

fn to_digits(mut e: u64, radices: &[u64]) -> Vec<u64> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = e % r;
        e /= r;
    }
    out
}

fn from_digits(ds: &[u64], radices: &[u64]) -> u64 {
    ds.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

/// A coordinatewise group `Z/r_1 x .. x Z/r_k`, with `+` as function 0.
fn product_group(sig: Signature, radices: &[u64]) -> Result<StructureBuilder, FamilyError> {
    let n: u64 = radices.iter().product();
    guard((n as u128) * (n as u128), MAX_CELLS)?;
    let digits: Vec<Vec<u64>> = (0..n).map(|e| to_digits(e, radices)).collect();
    let mut table = Vec::with_capacity((n * n) as usize);
    for a in &digits {
        for b in &digits {
            let s: Vec<u64> = a.iter().zip(b).zip(radices).map(|((x, y), r)| (x + y) % r).collect();
            table.push(from_digits(&s, radices) as Element);
        }
    }
    let mut b = StructureBuilder::new(sig, &[n as usize]);
    b.set_table(0, table);
    Ok(b)
}

/// The member of `spec` at `index`.
pub fn generate(spec: &FamilySpec, index: &[u64]) -> Result<FiniteStructure, FamilyError> {
    let size = spec.size(index)?;
    guard(size, MAX_ELEMENTS)?;
    let sig = spec.signature()?;
    let n = size as usize;
    let built = match spec.kind {
        FamilyKind::PureSet => StructureBuilder::new(sig, &[n]).build(),
        FamilyKind::LinearOrder => {
            let mut b = StructureBuilder::new(sig, &[n]);
            for i in 0..n as Element {
                for j in i + 1..n as Element {
                    b.add_tuple(0, &[i, j]);
                }
            }
            b.build()
        }
        FamilyKind::CyclicGroup | FamilyKind::PGroupPower => {
            let radices = if spec.kind == FamilyKind::CyclicGroup {
                vec![index[0]]
            } else {
                let p = spec.get("p")?;
                vec![p * p; index[0] as usize]
            };
            let mut b = product_group(sig, &radices)?;
            b.set_constant(0, 0);
            b.build()
        }
        FamilyKind::Homocyclic => {
            let pn = spec.get("p")?.pow(index[0] as u32);
            product_group(sig, &vec![pn; index[1] as usize])?.build()
        }
        FamilyKind::CyclicDirectSum => {
            let mut b = product_group(sig, index)?;
            for i in 0..index.len() {
                for e in 0..n as u64 {
                    let ds = to_digits(e, index);
                    if ds.iter().enumerate().all(|(j, &d)| j == i || d == 0) {
                        b.add_tuple(i, &[e as Element]);
                    }
                }
            }
            b.build()
        }
        FamilyKind::MultiplicativeMonoid => {
            guard((n as u128) * (n as u128), MAX_CELLS)?;
            let mut b = StructureBuilder::new(sig, &[n]);
            let m = n as u64;
            b.set_table(0, (0..m * m).map(|k| ((k / m) * (k % m) % m) as Element).collect());
            b.build()
        }
        FamilyKind::NestedEquivalence => {
            guard((n as u128) * (n as u128), MAX_CELLS)?;
            let mut b = StructureBuilder::new(sig, &[n]);
            let digits: Vec<Vec<u64>> = (0..n as u64).map(|e| to_digits(e, index)).collect();
            for level in 1..index.len() {
                for x in 0..n {
                    for y in 0..n {
                        if digits[x][..level] == digits[y][..level] {
                            b.add_tuple(level - 1, &[x as Element, y as Element]);
                        }
                    }
                }
            }
            b.build()
        }
        _ => return geometric::generate(spec, index, sig),
    };
    Ok(built.expect("generated tables are valid"))
}

/// Elements of `M` as coordinate tuples, for the kinds built from tuples.
pub fn coordinates(spec: &FamilySpec, index: &[u64], e: Element) -> Result<Vec<u64>, FamilyError> {
    spec.check_index(index)?;
    let radices: Vec<u64> = match spec.kind {
        FamilyKind::CyclicDirectSum | FamilyKind::NestedEquivalence => index.to_vec(),
        FamilyKind::Homocyclic => vec![spec.get("p")?.pow(index[0] as u32); index[1] as usize],
        FamilyKind::PGroupPower => vec![spec.get("p")?.pow(2); index[0] as usize],
        FamilyKind::VectorSpace | FamilyKind::SymplecticSpace => vec![spec.get("q")?; index[0] as usize],
        FamilyKind::OrthogonalSpace => vec![spec.get("q")?; (2 * index[0] + spec.get("j")?) as usize],
        _ => vec![spec.size(index)? as u64],
    };
    Ok(to_digits(e as u64, &radices))
}

/// All indices in the box given by the schema ranges, capped per
/// coordinate at `cap` values, in lexicographic order.
pub fn index_grid(spec: &FamilySpec, cap: u64) -> Vec<Vec<u64>> {
    let radices: Vec<usize> = spec.schema.iter().map(|p| (p.max - p.min).min(cap - 1) as usize + 1).collect();
    let mut odo = Odometer::new(radices);
    let mut out = Vec::new();
    while let Some(t) = odo.next_tuple() {
        let idx: Vec<u64> = t.iter().zip(&spec.schema).map(|(&d, p)| p.min + d as u64).collect();
        if spec.check_index(&idx).is_ok() {
            out.push(idx);
        }
    }
    out
}

#[cfg(test)]
mod tests;
