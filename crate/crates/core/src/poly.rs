//! Multivariate polynomials with rational coefficients.
//!
//! Variables are `X1..Xs` (plain `X` when there is one). Terms print in
//! decreasing total degree, so `X2*X3 - X3` reads as expected.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("cannot parse polynomial at byte {pos}: {msg}")]
    Parse { pos: usize, msg: &'static str },
}

/// Graded order: total degree, then earlier variables first.
fn graded(m: &Monomial) -> (u32, Reverse<Monomial>) {
    (m.iter().sum(), Reverse(m.clone()))
}

/// Every monomial in `nvars` variables with each exponent at most `cap` and
/// total degree at most `total`, in graded order.
pub fn monomials(nvars: usize, cap: u32, total: u32) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|m: Monomial| {
                (0..=cap).map(move |e| {
                    let mut n = m.clone();
                    n.push(e);
                    n
                })
            })
            .filter(|m| m.iter().sum::<u32>() <= total)
            .collect();
    }
    out.sort_by_key(graded);
    out
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    /// The variable `X(i+1)`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::from_terms(nvars, [(m, BigRational::one())])
    }

    /// Sum of the given terms; zero coefficients are dropped.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Evaluate in any ring, given how to embed a rational coefficient.
    pub fn eval_with<T>(&self, xs: &[T], lift: impl Fn(&BigRational) -> T) -> Result<T, PolyError>
    where
        T: Clone + Add<Output = T> + Mul<Output = T>,
    {
        if xs.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, found: xs.len() });
        }
        let mut acc = lift(&BigRational::zero());
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (x, &e) in xs.iter().zip(m) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn eval(&self, xs: &[BigRational]) -> Result<BigRational, PolyError> {
        self.eval_with(xs, Clone::clone)
    }

    /// Parse `2*X1^2 - X2*X3 + 1/2`. Names are `X` (one variable) or
    /// `X1`, `X2`, ...; `nvars` fixes the arity.
    pub fn parse(text: &str, nvars: usize) -> Result<Self, PolyError> {
        Parser { s: text.as_bytes(), pos: 0, nvars }.poly()
    }

    fn var_name(&self, i: usize) -> String {
        if self.nvars == 1 {
            "X".into()
        } else {
            format!("X{}", i + 1)
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn skip(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &'static str) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg })
    }

    fn number(&mut self) -> Option<BigInt> {
        self.skip();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        core::str::from_utf8(&self.s[start..self.pos]).ok().and_then(|t| t.parse().ok())
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        let mut p = Polynomial::zero(self.nvars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if !first => return Ok(p),
                Some(b'+') if !first => 1,
                Some(b'-') => -1,
                _ if first => 1,
                _ => return self.err("expected `+` or `-`"),
            };
            if !first || sign < 0 {
                self.pos += 1;
            }
            first = false;
            let (m, c) = self.term()?;
            p.add_term(m, c * rational(sign));
        }
    }

    fn term(&mut self) -> Result<(Monomial, BigRational), PolyError> {
        let mut m = vec![0; self.nvars];
        let mut c = BigRational::one();
        loop {
            match self.peek() {
                Some(b'X') => {
                    self.pos += 1;
                    let i = match self.number() {
                        Some(k) if self.nvars > 1 => usize::try_from(k).ok().filter(|&k| k >= 1 && k <= self.nvars),
                        None if self.nvars == 1 => Some(1),
                        _ => None,
                    };
                    let Some(i) = i else { return self.err("unknown variable") };
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        match self.number().and_then(|e| u32::try_from(e).ok()) {
                            Some(e) => e,
                            None => return self.err("expected an exponent"),
                        }
                    } else {
                        1
                    };
                    m[i - 1] += e;
                }
                Some(d) if d.is_ascii_digit() => {
                    let n = self.number().expect("digit");
                    let mut v = BigRational::from_integer(n);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        match self.number() {
                            Some(d) if !d.is_zero() => v /= BigRational::from_integer(d),
                            _ => return self.err("expected a nonzero denominator"),
                        }
                    }
                    c *= v;
                }
                _ => return self.err("expected a number or a variable"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((m, c));
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ms: Vec<&Monomial> = self.terms.keys().collect();
        // Highest degree first; within a degree, earlier variables first.
        ms.sort_by_key(|m| (Reverse(m.iter().sum::<u32>()), Reverse(*m)));
        for (k, m) in ms.into_iter().enumerate() {
            let c = &self.terms[m];
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.var_name(i) } else { format!("{}^{e}", self.var_name(i)) })
                .collect();
            let coef = a.to_string();
            match (vars.is_empty(), a.is_one()) {
                (true, _) => f.write_str(&coef)?,
                (false, true) => f.write_str(&vars.join("*"))?,
                (false, false) => write!(f, "{coef}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial arity");
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, other: &Polynomial) -> Polynomial {
        self + &(-other)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial arity");
        let mut p = Polynomial::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m = a.iter().zip(b).map(|(i, j)| i + j).collect();
                p.add_term(m, x * y);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        let p = Polynomial::parse("X2*X3 - X3", 3).unwrap();
        assert_eq!(p.to_string(), "X2*X3 - X3");
        assert_eq!(Polynomial::parse("X^2", 1).unwrap().to_string(), "X^2");
        assert_eq!(Polynomial::parse("-1/2*X + 3 - 1/2*X", 1).unwrap().to_string(), "-X + 3");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
        assert!(Polynomial::parse("X4", 3).is_err());
        assert!(Polynomial::parse("X +", 1).is_err());
        assert!(Polynomial::parse("1/0", 1).is_err());
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::parse("X2*X3 - X3", 3).unwrap();
        assert_eq!(p.eval(&[rational(3), rational(6), rational(1)]).unwrap(), rational(5));
        assert!(p.eval(&[rational(1)]).is_err());
    }

    #[test]
    fn graded_monomials() {
        let ms = monomials(2, 2, 2);
        assert_eq!(ms, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 4, 12).len(), 125);
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(((0u32..3, 0u32..3), -4i64..=4), 0..5).prop_map(|ts| {
            Polynomial::from_terms(2, ts.into_iter().map(|((a, b), c)| (vec![a, b], rational(c))))
        })
    }

    proptest! {
        #[test]
        fn ring_operations_commute_with_evaluation(p in arb_poly(), q in arb_poly(), x in -5i64..5, y in -5i64..5) {
            let pt = [rational(x), rational(y)];
            let (a, b) = (p.eval(&pt).unwrap(), q.eval(&pt).unwrap());
            prop_assert_eq!((&p + &q).eval(&pt).unwrap(), &a + &b);
            prop_assert_eq!((&p * &q).eval(&pt).unwrap(), &a * &b);
            prop_assert_eq!((&p - &q).eval(&pt).unwrap(), a - b);
        }

        #[test]
        fn display_round_trips(p in arb_poly()) {
            prop_assert_eq!(Polynomial::parse(&p.to_string(), 2).unwrap(), p);
        }
    }
}
