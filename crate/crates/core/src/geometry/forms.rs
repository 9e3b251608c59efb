//! The standard forms fixed for each kind of geometry.
//!
//! Vectors are coordinate slices over [`Gf`]. Orthogonal spaces of dimension
//! `2i + j` put the `j` anisotropic (or tail) coordinates first and the `i`
//! hyperbolic pairs after them.

use super::field::Gf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FormSign {
    Plus,
    Minus,
}

impl FormSign {
    pub fn name(self) -> &'static str {
        match self {
            FormSign::Plus => "plus",
            FormSign::Minus => "minus",
        }
    }
}

/// `Q(v) = tail(v_0..v_j) + sum_k v_(j+2k) v_(j+2k+1)`, where the tail is
///
/// * `j = 1`, plus: `x^2`; minus: `e x^2` with `e` the least non-square
///   (odd `q` only);
/// * `j = 2`, plus: `xy`; minus: `x^2 + xy + b y^2` with `b` the least
///   element making `t^2 + t + b` irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrthogonalForm {
    pub j: usize,
    pub sign: FormSign,
    coefficient: u32,
}

impl OrthogonalForm {
    pub fn new(f: &Gf, j: usize, sign: FormSign) -> Option<OrthogonalForm> {
        let coefficient = match (j, sign) {
            (1, FormSign::Plus) => 1,
            (1, FormSign::Minus) => f.non_square()?,
            (2, FormSign::Plus) => 0,
            (2, FormSign::Minus) => f.elements().find(|&b| f.elements().all(|t| f.add(f.add(f.mul(t, t), t), b) != 0))?,
            _ => return None,
        };
        Some(OrthogonalForm { j, sign, coefficient })
    }

    /// The tail form on the first `j` coordinates.
    pub fn tail(&self, f: &Gf, v: &[u32]) -> u32 {
        match (self.j, self.sign) {
            (1, _) => f.mul(self.coefficient, f.mul(v[0], v[0])),
            (2, FormSign::Plus) => f.mul(v[0], v[1]),
            _ => {
                let xx = f.mul(v[0], v[0]);
                let xy = f.mul(v[0], v[1]);
                let yy = f.mul(self.coefficient, f.mul(v[1], v[1]));
                f.add(f.add(xx, xy), yy)
            }
        }
    }

    pub fn eval(&self, f: &Gf, v: &[u32]) -> u32 {
        let mut acc = self.tail(f, &v[..self.j]);
        for pair in v[self.j..].chunks(2) {
            acc = f.add(acc, f.mul(pair[0], pair[1]));
        }
        acc
    }
}

/// `sum_k x_(2k) y_(2k+1) - x_(2k+1) y_(2k)`.
pub fn symplectic(f: &Gf, x: &[u32], y: &[u32]) -> u32 {
    let mut acc = 0;
    for (a, b) in x.chunks(2).zip(y.chunks(2)) {
        acc = f.add(acc, f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])));
    }
    acc
}

/// `sum_k x_k y_k`.
pub fn dot(f: &Gf, x: &[u32], y: &[u32]) -> u32 {
    x.iter().zip(y).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

/// `sum_k x_k x_k^r` over `F_(r^2)`, where `f` has order `r^2`.
pub fn hermitian_norm(f: &Gf, r: u64, x: &[u32]) -> u32 {
    x.iter().fold(0, |acc, &a| f.add(acc, f.mul(a, f.pow(a, r))))
}
