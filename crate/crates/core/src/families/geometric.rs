//! Finite approximations of the linear and projective geometries.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{guard, FamilyError, FamilyKind, FamilySpec, MAX_CELLS};
use crate::geometry::field::Gf;
use crate::geometry::forms::{dot, symplectic, FormSign, OrthogonalForm};
use crate::logic::{Signature, SortId};
use crate::structures::{Element, FiniteStructure, StructureBuilder};

/// `F_q^n` with vectors numbered in base `q`, first coordinate most
/// significant.
pub(crate) struct Space {
    pub f: Gf,
    pub q: u64,
    pub n: usize,
}

impl Space {
    pub fn new(q: u64, n: usize) -> Space {
        Space { f: Gf::new(q).expect("checked prime power"), q, n }
    }

    pub fn size(&self) -> u64 {
        self.q.pow(self.n as u32)
    }

    pub fn vector(&self, mut e: u64) -> Vec<u32> {
        let mut v = vec![0; self.n];
        for slot in v.iter_mut().rev() {
            *slot = (e % self.q) as u32;
            e /= self.q;
        }
        v
    }

    pub fn id(&self, v: &[u32]) -> u64 {
        v.iter().fold(0, |acc, &d| acc * self.q + d as u64)
    }

    pub fn vectors(&self) -> Vec<Vec<u32>> {
        (0..self.size()).map(|e| self.vector(e)).collect()
    }

    /// Scale so that the first nonzero coordinate is 1.
    pub fn normalize(&self, v: &[u32]) -> Vec<u32> {
        match v.iter().find(|&&x| x != 0) {
            None => v.to_vec(),
            Some(&lead) => {
                let inv = self.f.inv(lead).expect("nonzero");
                v.iter().map(|&x| self.f.mul(inv, x)).collect()
            }
        }
    }
}

pub(super) fn sign_of(spec: &FamilySpec) -> Result<FormSign, FamilyError> {
    Ok(if spec.get("sign")? == 0 { FormSign::Plus } else { FormSign::Minus })
}

/// `+`, `0` and one unary function per scalar on `sort`, with the given
/// suffix on every name.
fn add_linear(sig: &mut Signature, sort: SortId, q: u64, suffix: &str) {
    let plus = if suffix.is_empty() { "+".into() } else { format!("add{suffix}") };
    sig.add_function(&plus, &[sort, sort], sort).expect("fresh");
    sig.add_constant(&format!("0{suffix}"), sort).expect("fresh");
    for c in 0..q {
        sig.add_function(&format!("s{suffix}{c}"), &[sort], sort).expect("fresh");
    }
}

pub(super) fn signature(spec: &FamilySpec) -> Result<Signature, FamilyError> {
    let q = spec.get("q")?;
    let mut s = Signature::single_sorted(if spec.kind == FamilyKind::PolarPair { "V" } else { "M" });
    match spec.kind {
        FamilyKind::VectorSpace => add_linear(&mut s, 0, q, ""),
        FamilyKind::ProjectiveSpace => {
            s.add_relation("L", &[0, 0, 0]).expect("fresh");
        }
        FamilyKind::SymplecticSpace => {
            add_linear(&mut s, 0, q, "");
            for c in 0..q {
                s.add_relation(&format!("B{c}"), &[0, 0]).expect("fresh");
            }
        }
        FamilyKind::OrthogonalSpace => {
            let f = Gf::new(q).expect("checked prime power");
            OrthogonalForm::new(&f, spec.get("j")? as usize, sign_of(spec)?).ok_or(FamilyError::BadParameter {
                name: "sign",
                value: 1,
                reason: "no such form in characteristic 2",
            })?;
            add_linear(&mut s, 0, q, "");
            for c in 0..q {
                s.add_relation(&format!("Q{c}"), &[0]).expect("fresh");
            }
        }
        FamilyKind::PolarPair => {
            let w = s.add_sort("W").expect("fresh");
            add_linear(&mut s, 0, q, "V");
            add_linear(&mut s, w, q, "W");
            for c in 0..q {
                s.add_relation(&format!("B{c}"), &[0, w]).expect("fresh");
            }
        }
        _ => unreachable!("not a geometric kind"),
    }
    Ok(s)
}

/// Linear dimension of the member at `index`.
pub(super) fn dimension(spec: &FamilySpec, index: &[u64]) -> Result<u64, FamilyError> {
    Ok(if spec.kind == FamilyKind::OrthogonalSpace { 2 * index[0] + spec.get("j")? } else { index[0] })
}

pub(super) fn size(spec: &FamilySpec, index: &[u64]) -> Result<u128, FamilyError> {
    let q = spec.get("q")? as u128;
    let d = dimension(spec, index)?.min(u32::MAX as u64) as u32;
    let all = q.saturating_pow(d);
    Ok(match spec.kind {
        FamilyKind::ProjectiveSpace => (all - 1) / (q - 1),
        FamilyKind::PolarPair => all.saturating_mul(2),
        _ => all,
    })
}

/// Fill `+`, `0` and the scalar functions starting at function `first`.
fn fill_linear(b: &mut StructureBuilder, sp: &Space, vs: &[Vec<u32>], first: usize, zero: usize) -> Result<(), FamilyError> {
    let n = vs.len();
    guard((n as u128) * (n as u128), MAX_CELLS)?;
    let mut table = Vec::with_capacity(n * n);
    let mut sum = vec![0u32; sp.n];
    for a in vs {
        for c in vs {
            for (k, slot) in sum.iter_mut().enumerate() {
                *slot = sp.f.add(a[k], c[k]);
            }
            table.push(sp.id(&sum) as Element);
        }
    }
    b.set_table(first, table);
    b.set_constant(zero, 0);
    for s in 0..sp.q as u32 {
        let scaled = vs.iter().map(|v| {
            let w: Vec<u32> = v.iter().map(|&x| sp.f.mul(s, x)).collect();
            sp.id(&w) as Element
        });
        b.set_table(first + 1 + s as usize, scaled.collect());
    }
    Ok(())
}

pub(super) fn generate(spec: &FamilySpec, index: &[u64], sig: Signature) -> Result<FiniteStructure, FamilyError> {
    let q = spec.get("q")?;
    let sp = Space::new(q, dimension(spec, index)? as usize);
    let vs = sp.vectors();
    let n = vs.len();
    let built = match spec.kind {
        FamilyKind::VectorSpace => {
            let mut b = StructureBuilder::new(sig, &[n]);
            fill_linear(&mut b, &sp, &vs, 0, 0)?;
            b.build()
        }
        FamilyKind::SymplecticSpace => {
            let mut b = StructureBuilder::new(sig, &[n]);
            fill_linear(&mut b, &sp, &vs, 0, 0)?;
            for (x, v) in vs.iter().enumerate() {
                for (y, w) in vs.iter().enumerate() {
                    b.add_tuple(symplectic(&sp.f, v, w) as usize, &[x as Element, y as Element]);
                }
            }
            b.build()
        }
        FamilyKind::OrthogonalSpace => {
            let form = OrthogonalForm::new(&sp.f, spec.get("j")? as usize, sign_of(spec)?).expect("checked by signature");
            let mut b = StructureBuilder::new(sig, &[n]);
            fill_linear(&mut b, &sp, &vs, 0, 0)?;
            for (x, v) in vs.iter().enumerate() {
                b.add_tuple(form.eval(&sp.f, v) as usize, &[x as Element]);
            }
            b.build()
        }
        FamilyKind::PolarPair => {
            let mut b = StructureBuilder::new(sig, &[n, n]);
            let per_sort = 1 + q as usize;
            fill_linear(&mut b, &sp, &vs, 0, 0)?;
            fill_linear(&mut b, &sp, &vs, per_sort, 1)?;
            for (x, v) in vs.iter().enumerate() {
                for (y, w) in vs.iter().enumerate() {
                    b.add_tuple(dot(&sp.f, v, w) as usize, &[x as Element, y as Element]);
                }
            }
            b.build()
        }
        FamilyKind::ProjectiveSpace => {
            let points = projective_points(&sp);
            let p = points.len();
            guard((p as u128).pow(3), MAX_CELLS)?;
            let mut b = StructureBuilder::new(sig, &[p]);
            let id_of = |v: &[u32]| points.binary_search_by_key(&sp.id(v), |w| sp.id(w)).expect("normalized point");
            for (a, va) in points.iter().enumerate() {
                for (c, vc) in points.iter().enumerate() {
                    if a == c {
                        for x in 0..p {
                            for t in [[a, a, x], [a, x, a], [x, a, a]] {
                                b.add_tuple(0, &t.map(|e| e as Element));
                            }
                        }
                        continue;
                    }
                    // The line through a and c: a itself and every l*a + c.
                    let mut line = vec![a];
                    for l in sp.f.elements() {
                        let w: Vec<u32> = va.iter().zip(vc).map(|(&x, &y)| sp.f.add(sp.f.mul(l, x), y)).collect();
                        line.push(id_of(&sp.normalize(&w)));
                    }
                    for x in line {
                        b.add_tuple(0, &[a as Element, c as Element, x as Element]);
                    }
                }
            }
            b.build()
        }
        _ => unreachable!("not a geometric kind"),
    };
    Ok(built.expect("generated tables are valid"))
}

/// Normalized nonzero vectors, in increasing id order.
pub(crate) fn projective_points(sp: &Space) -> Vec<Vec<u32>> {
    sp.vectors().into_iter().filter(|v| v.iter().any(|&x| x != 0) && sp.normalize(v) == *v).collect()
}
