//! Exact numbers `sum_r c_r sqrt(r)` and the `d*` values built from them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `q = s^2 r` with `r` square-free; returns `(s, r)`.
pub fn square_free_split(mut q: u64) -> (u64, u64) {
    let (mut s, mut r) = (1, 1);
    let mut d = 2;
    while d * d <= q {
        while q % (d * d) == 0 {
            q /= d * d;
            s *= d;
        }
        if q % d == 0 {
            q /= d;
            r *= d;
        }
        d += 1;
    }
    (s, r * q)
}

/// A finite sum of rational multiples of square roots of distinct
/// square-free integers. The key `1` holds the rational part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RadicalNumber {
    parts: BTreeMap<u64, BigRational>,
}

impl RadicalNumber {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: BigRational) -> Self {
        Self::term(c, 1)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `c * sqrt(q)` for any `q >= 1`.
    pub fn term(c: BigRational, q: u64) -> Self {
        let (s, r) = square_free_split(q);
        let mut parts = BTreeMap::new();
        let c = c * BigRational::from_integer(BigInt::from(s));
        if !c.is_zero() {
            parts.insert(r, c);
        }
        RadicalNumber { parts }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(r, c_r)` with `r` square-free, increasing.
    pub fn components(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.parts.iter().map(|(&r, c)| (r, c))
    }

    pub fn component(&self, r: u64) -> BigRational {
        self.parts.get(&r).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.parts.len() {
            0 => Some(BigRational::zero()),
            1 => self.parts.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(BigRational::is_integer).map(|c| c.to_integer())
    }

    /// Whether the value is an integer `>= 0`.
    pub fn is_natural(&self) -> bool {
        self.as_integer().is_some_and(|n| !n.is_negative())
    }

    fn add_part(&mut self, r: u64, c: BigRational) {
        let e = self.parts.entry(r).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.parts.remove(&r);
        }
    }
}

impl Add for RadicalNumber {
    type Output = RadicalNumber;

    fn add(mut self, other: RadicalNumber) -> RadicalNumber {
        for (r, c) in other.parts {
            self.add_part(r, c);
        }
        self
    }
}

impl Neg for RadicalNumber {
    type Output = RadicalNumber;

    fn neg(self) -> RadicalNumber {
        RadicalNumber { parts: self.parts.into_iter().map(|(r, c)| (r, -c)).collect() }
    }
}

impl Mul for RadicalNumber {
    type Output = RadicalNumber;

    fn mul(self, other: RadicalNumber) -> RadicalNumber {
        let mut out = RadicalNumber::zero();
        for (&a, x) in &self.parts {
            for (&b, y) in &other.parts {
                // sqrt(a) sqrt(b) = g sqrt(a/g * b/g) with g = gcd(a, b).
                let g = a.gcd(&b);
                let c = x * y * BigRational::from_integer(BigInt::from(g));
                out.add_part((a / g) * (b / g), c);
            }
        }
        out
    }
}

impl fmt::Display for RadicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let pieces: Vec<String> = self
            .parts
            .iter()
            .map(|(&r, c)| match (r, c.is_one()) {
                (1, _) => format!("{c}"),
                (_, true) => format!("sqrt({r})"),
                _ => format!("{c}*sqrt({r})"),
            })
            .collect();
        f.write_str(&pieces.join(" + "))
    }
}

/// One entry of `d*(E)`: a size for a degenerate geometry, otherwise
/// `(-sqrt(q))^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DStarValue {
    Degenerate(u64),
    Power { negative: bool, q: u64, e: u32 },
}

impl DStarValue {
    /// `(-sqrt(q))^d`.
    pub fn power(q: u64, d: u32) -> Self {
        DStarValue::Power { negative: d % 2 == 1, q, e: d }
    }

    pub fn value(&self) -> RadicalNumber {
        match *self {
            DStarValue::Degenerate(n) => RadicalNumber::rational(BigRational::from_integer(BigInt::from(n))),
            DStarValue::Power { negative, q, e } => {
                let whole = BigInt::from(q).pow(e / 2);
                let v = RadicalNumber::term(BigRational::from_integer(whole), if e % 2 == 1 { q } else { 1 });
                if negative { -v } else { v }
            }
        }
    }

    /// The square of the value, always a natural number.
    pub fn squared(&self) -> BigInt {
        match *self {
            DStarValue::Degenerate(n) => BigInt::from(n) * BigInt::from(n),
            DStarValue::Power { q, e, .. } => BigInt::from(q).pow(e),
        }
    }
}

impl fmt::Display for DStarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DStarValue::Degenerate(n) => write!(f, "{n}"),
            DStarValue::Power { negative, q, e } => {
                let base = if negative == (e % 2 == 1) { "-" } else { "" };
                write!(f, "({base}sqrt({q}))^{e}")
            }
        }
    }
}
