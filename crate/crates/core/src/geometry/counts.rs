//! Point counts: closed forms, the orthogonal recurrence, and exhaustive
//! enumeration as the oracle for both.

use alloc::vec;
use alloc::vec::Vec;

use super::field::{prime_power, Gf};
use super::forms::{hermitian_norm, FormSign, OrthogonalForm};
use super::GeometryError;

/// The six kinds of classical geometry. `q` is the size of the field the
/// form takes values in; unitary spaces live over `F_(q^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GeometryKind {
    Degenerate,
    PureVector { q: u64 },
    Polar { q: u64 },
    Symplectic { q: u64 },
    Unitary { q: u64 },
    /// Tail dimension `j` (1 or 2) and its sign; see [`OrthogonalForm`].
    Orthogonal { q: u64, j: usize, sign: FormSign },
}

impl GeometryKind {
    pub fn q(&self) -> Option<u64> {
        match *self {
            GeometryKind::Degenerate => None,
            GeometryKind::PureVector { q }
            | GeometryKind::Polar { q }
            | GeometryKind::Symplectic { q }
            | GeometryKind::Unitary { q }
            | GeometryKind::Orthogonal { q, .. } => Some(q),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeometryKind::Degenerate => "degenerate",
            GeometryKind::PureVector { .. } => "vector",
            GeometryKind::Polar { .. } => "polar",
            GeometryKind::Symplectic { .. } => "symplectic",
            GeometryKind::Unitary { .. } => "unitary",
            GeometryKind::Orthogonal { .. } => "orthogonal",
        }
    }

    /// Order of the field the vectors are over.
    fn field_order(&self) -> Option<u64> {
        match *self {
            GeometryKind::Unitary { q } => Some(q * q),
            _ => self.q(),
        }
    }

    fn check(&self) -> Result<(), GeometryError> {
        match self.field_order() {
            Some(f) if prime_power(f).is_none() || Gf::new(f).is_none() => Err(GeometryError::BadField(f)),
            _ => Ok(()),
        }
    }
}

/// Largest number of vectors enumerated by the oracle.
pub const MAX_BRUTE_FORCE: u128 = 10_000_000;

fn pow(q: u64, d: u64) -> u128 {
    (q as u128).pow(d as u32)
}

/// Number of points of the projectivisation of the `linear_dim`
/// approximation (for degenerate geometries, the set size).
pub fn projective_point_count(kind: GeometryKind, linear_dim: u64) -> Result<u128, GeometryError> {
    if linear_dim == 0 {
        return Err(GeometryError::DimensionZero);
    }
    kind.check()?;
    Ok(match kind {
        GeometryKind::Degenerate => linear_dim as u128,
        GeometryKind::PureVector { q } | GeometryKind::Symplectic { q } => (pow(q, linear_dim) - 1) / (q as u128 - 1),
        GeometryKind::Polar { q } => 2 * ((pow(q, linear_dim) - 1) / (q as u128 - 1)),
        GeometryKind::Unitary { .. } | GeometryKind::Orthogonal { .. } => brute_force_point_count(kind, linear_dim, None)?,
    })
}

/// `n(dim, alpha)`: vectors `v` with `Q(v) = alpha` for the orthogonal form
/// with the given tail, from
/// `n(2i+j, a) = q^i n(j, a) + q^(j-1) (q^(2i) - q^i)` and oracle base cases.
/// Dimension 0 is the empty sum.
pub fn orthogonal_zero_count(q: u64, dim: u64, alpha: u32, j: usize, sign: FormSign) -> Result<u128, GeometryError> {
    let kind = GeometryKind::Orthogonal { q, j, sign };
    kind.check()?;
    let f = Gf::new(q).expect("checked");
    if alpha as u64 >= q {
        return Err(GeometryError::NotInField(alpha));
    }
    if dim == 0 {
        return Ok((alpha == 0) as u128);
    }
    let form = OrthogonalForm::new(&f, j, sign).ok_or(GeometryError::NoSuchForm)?;
    if dim < j as u64 || (dim - j as u64) % 2 == 1 {
        return Err(GeometryError::DimensionParity { dim, j });
    }
    let i = (dim - j as u64) / 2;
    let base = (0..q.pow(j as u32)).filter(|&e| form.tail(&f, &digits(e, q, j)) == alpha).count() as u128;
    Ok(pow(q, i) * base + pow(q, j as u64 - 1) * (pow(q, 2 * i) - pow(q, i)))
}

fn digits(mut e: u64, q: u64, n: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = (e % q) as u32;
        e /= q;
    }
    v
}

/// Exhaustive count. With no predicate: the projective points (nonzero
/// vectors up to scalars, both halves for polar spaces). With `Some(alpha)`:
/// the vectors whose form value is `alpha` (orthogonal and unitary only).
pub fn brute_force_point_count(kind: GeometryKind, linear_dim: u64, predicate: Option<u32>) -> Result<u128, GeometryError> {
    kind.check()?;
    let Some(fq) = kind.field_order() else {
        return match predicate {
            None => Ok(linear_dim as u128),
            Some(_) => Err(GeometryError::NoForm(kind.name())),
        };
    };
    let total = (fq as u128).checked_pow(linear_dim as u32).unwrap_or(u128::MAX);
    if total > MAX_BRUTE_FORCE {
        return Err(GeometryError::TooLarge(total));
    }
    let f = Gf::new(fq).expect("checked");
    let n = linear_dim as usize;
    let vectors = (0..total as u64).map(|e| digits(e, fq, n));
    match predicate {
        None => {
            // A nonzero vector is the representative of its point when its
            // first nonzero coordinate is 1.
            let points = vectors.filter(|v| v.iter().find(|&&x| x != 0) == Some(&1)).count() as u128;
            Ok(if matches!(kind, GeometryKind::Polar { .. }) { 2 * points } else { points })
        }
        Some(alpha) => {
            if alpha as u64 >= fq {
                return Err(GeometryError::NotInField(alpha));
            }
            let value: alloc::boxed::Box<dyn Fn(&[u32]) -> u32> = match kind {
                GeometryKind::Orthogonal { j, sign, .. } => {
                    if n == 0 {
                        return Ok((alpha == 0) as u128);
                    }
                    if n < j || (n - j) % 2 == 1 {
                        return Err(GeometryError::DimensionParity { dim: linear_dim, j });
                    }
                    let form = OrthogonalForm::new(&f, j, sign).ok_or(GeometryError::NoSuchForm)?;
                    let f = f.clone();
                    alloc::boxed::Box::new(move |v| form.eval(&f, v))
                }
                GeometryKind::Unitary { q } => {
                    let f = f.clone();
                    alloc::boxed::Box::new(move |v| hermitian_norm(&f, q, v))
                }
                _ => return Err(GeometryError::NoForm(kind.name())),
            };
            Ok(vectors.filter(|v| value(v) == alpha).count() as u128)
        }
    }
}
