use alloc::vec;
use alloc::vec::Vec;

/// `Some((p, k))` with `q = p^k`, `p` prime, `k >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).find(|d| q % d == 0 || d * d > q).filter(|d| q % d == 0).unwrap_or(q);
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn is_prime(p: u64) -> bool {
    matches!(prime_power(p), Some((_, 1)))
}

/// Largest field handled by [`Gf`].
pub const MAX_FIELD: u64 = 1 << 10;

/// The field with `q` elements as addition and multiplication tables.
///
/// Element `e` stands for the polynomial whose base-`p` digits are `e`
/// (least significant digit = constant term), reduced modulo the
/// lexicographically first monic irreducible polynomial of degree `k`.
/// For prime `q` this is plain arithmetic mod `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf {
    q: u32,
    p: u32,
    k: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl Gf {
    pub fn new(q: u64) -> Option<Gf> {
        let (p, k) = prime_power(q)?;
        if q > MAX_FIELD {
            return None;
        }
        let (q, p) = (q as u32, p as u32);
        let digits = |mut e: u32| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = e % p;
                    e /= p;
                    d
                })
                .collect()
        };
        let number = |ds: &[u32]| ds.iter().rev().fold(0, |acc, &d| acc * p + d);
        let modulus = irreducible(p, k);
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = number(&s);
                // Schoolbook product, then reduce by the monic modulus.
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (k as usize..prod.len()).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(k as usize) {
                            let at = deg - k as usize + i;
                            prod[at] = (prod[at] + (p - c) * m) % p;
                        }
                        prod[deg] = 0;
                    }
                }
                mul[(a * q + b) as usize] = number(&prod[..k as usize]);
            }
        }
        Some(Gf { q, p, k, add, mul })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut r = 1;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    pub fn is_square(&self, a: u32) -> bool {
        (0..self.q).any(|b| self.mul(b, b) == a)
    }

    /// Least non-square, if any (none in characteristic 2).
    pub fn non_square(&self) -> Option<u32> {
        (1..self.q).find(|&a| !self.is_square(a))
    }

    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q
    }
}

/// Coefficients `m_0..m_k` (with `m_k = 1`) of the first monic irreducible
/// polynomial of degree `k` over `F_p`, ordering by the digit string.
fn irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut m: Vec<u32> = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        if m[0] != 0 && !has_factor(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Does the monic polynomial `m` have a monic factor of degree `1..=deg/2`?
fn has_factor(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f: Vec<u32> = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if remainder_is_zero(m, &f, p) {
                return true;
            }
        }
    }
    false
}

fn remainder_is_zero(m: &[u32], f: &[u32], p: u32) -> bool {
    let mut r = m.to_vec();
    let df = f.len() - 1;
    for deg in (df..r.len()).rev() {
        let c = r[deg];
        if c != 0 {
            for (i, &fi) in f.iter().enumerate() {
                let at = deg - df + i;
                r[at] = (r[at] + (p - c) * fi) % p;
            }
        }
    }
    r[..df].iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert!(is_prime(13) && !is_prime(9));
    }

    #[test]
    fn field_axioms() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25, 27] {
            let f = Gf::new(q).unwrap();
            let q = q as u32;
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn squares() {
        let f = Gf::new(3).unwrap();
        assert_eq!(f.non_square(), Some(2));
        assert_eq!(Gf::new(4).unwrap().non_square(), None);
        let f = Gf::new(9).unwrap();
        assert_eq!((1..9).filter(|&a| f.is_square(a)).count(), 4);
    }
}
