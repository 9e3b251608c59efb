//! Envelopes for the two worked examples, built as canonical (lowest id)
//! choices inside the family members. Algebraic closure holds by
//! construction: an envelope is a whole member of the family.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::counts::GeometryKind;
use super::radical::{DStarValue, RadicalNumber};
use super::GeometryError;
use crate::families::{self, FamilyKind, FamilySpec};
use crate::poly::Polynomial;
use crate::structures::{Element, FiniteStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EnvelopeExample {
    /// `t` nested equivalence relations, one degenerate geometry per level.
    NestedEquivalence,
    /// `(Z/p^2)^n`, whose socle `pM` is an `n`-dimensional vector space.
    PGroupPower { p: u64 },
}

/// A geometry and its dimension (its size, when degenerate) per designated
/// sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DimensionFunction {
    pub entries: Vec<(GeometryKind, u64)>,
}

impl DimensionFunction {
    pub fn dstar(&self) -> Vec<DStarValue> {
        self.entries
            .iter()
            .map(|&(kind, d)| match kind.q() {
                None => DStarValue::Degenerate(d),
                Some(q) => DStarValue::power(q, d as u32),
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Envelope {
    pub structure: FiniteStructure,
    pub mu: DimensionFunction,
    pub dstar: Vec<DStarValue>,
    pub spec: FamilySpec,
    pub index: Vec<u64>,
}

pub fn build_envelope(example: EnvelopeExample, dims: &[u64]) -> Result<Envelope, GeometryError> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(GeometryError::BadDimensions(dims.to_vec()));
    }
    let (spec, mu) = match example {
        EnvelopeExample::NestedEquivalence => (
            FamilySpec::nested_equivalence(dims.len() as u64)?,
            DimensionFunction { entries: dims.iter().map(|&d| (GeometryKind::Degenerate, d)).collect() },
        ),
        EnvelopeExample::PGroupPower { p } => {
            if dims.len() != 1 {
                return Err(GeometryError::BadDimensions(dims.to_vec()));
            }
            (FamilySpec::pgroup_power(p)?, DimensionFunction { entries: vec![(GeometryKind::PureVector { q: p }, dims[0])] })
        }
    };
    let structure = families::generate(&spec, dims)?;
    let dstar = mu.dstar();
    Ok(Envelope { structure, mu, dstar, spec, index: dims.to_vec() })
}

impl Envelope {
    /// The dimension function read off the structure itself: class counts
    /// per level for nested equivalences, `log_p |pM|` for the group.
    pub fn measured_mu(&self) -> DimensionFunction {
        let m = &self.structure;
        let n = m.size(0) as Element;
        let entries = match self.mu.entries[0].0 {
            GeometryKind::PureVector { q: p } => {
                let times_p = |x: Element| (1..p).fold(x, |acc, _| m.apply(0, &[acc, x]));
                let zero = m.constant(0);
                let socle = (0..n).filter(|&x| times_p(x) == zero).count() as u64;
                let mut d = 0;
                let mut size = 1;
                while size < socle {
                    size *= p;
                    d += 1;
                }
                vec![(GeometryKind::PureVector { q: p }, d)]
            }
            _ => {
                let levels = self.mu.entries.len();
                // Number of classes of I_j; level 0 is the single class of
                // the whole set and the last level has singletons.
                let classes = |level: usize| -> u64 {
                    if level == 0 {
                        1
                    } else if level == levels {
                        n as u64
                    } else {
                        (0..n).filter(|&x| (0..x).all(|y| !m.holds(level - 1, &[x, y]))).count() as u64
                    }
                };
                let counts: Vec<u64> = (0..=levels).map(classes).collect();
                counts.windows(2).map(|w| (GeometryKind::Degenerate, w[1] / w[0])).collect()
            }
        };
        DimensionFunction { entries }
    }
}

/// `d*` of a family member, for the families whose members are envelopes
/// of a known shape: pure sets and nested equivalences (degenerate), p-group
/// powers and vector spaces.
pub fn dstar_of_member(spec: &FamilySpec, index: &[u64]) -> Result<Vec<DStarValue>, GeometryError> {
    spec.check_index(index)?;
    Ok(match spec.kind {
        FamilyKind::PureSet | FamilyKind::NestedEquivalence => index.iter().map(|&n| DStarValue::Degenerate(n)).collect(),
        FamilyKind::PGroupPower => vec![DStarValue::power(spec.get("p")?, index[0] as u32)],
        FamilyKind::VectorSpace => vec![DStarValue::power(spec.get("q")?, index[0] as u32)],
        other => return Err(GeometryError::NoDStar(other.name())),
    })
}

/// `rho(d*)` computed exactly, and whether it is a natural number.
pub fn eval_poly_at_dstar(rho: &Polynomial, dstar: &[DStarValue]) -> Result<(RadicalNumber, bool), GeometryError> {
    let xs: Vec<RadicalNumber> = dstar.iter().map(DStarValue::value).collect();
    let v = rho.eval_with(&xs, |c: &BigRational| RadicalNumber::rational(c.clone()))?;
    let natural = v.is_natural();
    Ok((v, natural))
}

/// `rho(d*)` as an integer, if it is one.
pub fn eval_integer(rho: &Polynomial, dstar: &[DStarValue]) -> Result<Option<BigInt>, GeometryError> {
    Ok(eval_poly_at_dstar(rho, dstar)?.0.as_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::solution_count;

    #[test]
    fn worked_examples() {
        let e = build_envelope(EnvelopeExample::NestedEquivalence, &[3, 6, 1]).unwrap();
        assert_eq!(e.structure.size(0), 18);
        assert_eq!(e.dstar, vec![DStarValue::Degenerate(3), DStarValue::Degenerate(6), DStarValue::Degenerate(1)]);
        assert_eq!(e.measured_mu(), e.mu);
        let rho = Polynomial::parse("X2*X3 - X3", 3).unwrap();
        let (v, natural) = eval_poly_at_dstar(&rho, &e.dstar).unwrap();
        assert!(natural);
        assert_eq!(v.as_integer(), Some(BigInt::from(5)));
        let phi = parse_formula("phi(x; a) := I1(x, a) & !I2(x, a)", e.structure.signature()).unwrap();
        assert_eq!(solution_count(&e.structure, &phi, &[0]).unwrap().to_u64(), Some(5));

        let g = build_envelope(EnvelopeExample::PGroupPower { p: 3 }, &[2]).unwrap();
        assert_eq!(g.dstar, vec![DStarValue::Power { negative: false, q: 3, e: 2 }]);
        assert_eq!(g.dstar[0].value().as_integer(), Some(BigInt::from(3)));
        assert_eq!(g.measured_mu(), g.mu);
        let h = build_envelope(EnvelopeExample::PGroupPower { p: 2 }, &[1]).unwrap();
        assert_eq!(h.dstar, vec![DStarValue::Power { negative: true, q: 2, e: 1 }]);
    }

    #[test]
    fn evaluation_at_dstar() {
        let zero = Polynomial::zero(1);
        let d = [DStarValue::power(2, 3)];
        assert_eq!(eval_poly_at_dstar(&zero, &d).unwrap(), (RadicalNumber::zero(), true));
        let x = Polynomial::parse("X", 1).unwrap();
        let (v, natural) = eval_poly_at_dstar(&x, &d).unwrap();
        assert!(!natural);
        assert_eq!(v, RadicalNumber::term(BigRational::from_integer((-2).into()), 2));
        let sq = Polynomial::parse("X^2", 1).unwrap();
        for n in 1..=5 {
            assert_eq!(eval_integer(&sq, &[DStarValue::power(3, n)]).unwrap(), Some(BigInt::from(3u64.pow(n))));
        }
        assert!(matches!(eval_poly_at_dstar(&sq, &[]), Err(GeometryError::Poly(_))));
    }

    #[test]
    fn bad_dimensions() {
        assert_eq!(
            build_envelope(EnvelopeExample::NestedEquivalence, &[2, 0]).unwrap_err(),
            GeometryError::BadDimensions(vec![2, 0])
        );
        assert!(build_envelope(EnvelopeExample::PGroupPower { p: 2 }, &[1, 1]).is_err());
        assert!(matches!(build_envelope(EnvelopeExample::PGroupPower { p: 4 }, &[1]), Err(GeometryError::Family(_))));
    }
}
