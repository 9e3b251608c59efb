//! Homogeneous substructures and atomic homogeneity.
//!
//! Both checks quantify over tuples of every length. They are decided by
//! induction on the length: if the condition holds for `k`-tuples then it
//! holds for `(k+1)`-tuples iff, for one representative `a` of each orbit of
//! `k`-tuples, the orbits of the stabiliser of `a` on the remaining points
//! are what they should be. Tuples with repeated entries carry no extra
//! information (their orbit is fixed by the repetition pattern and the
//! deduplicated tuple), so only distinct-entry tuples are visited. A branch
//! stops as soon as the relevant stabiliser fixes every remaining point, or
//! (for substructures) once the stabiliser in `Aut(M)` already preserves `N`.

use alloc::vec::Vec;

use hashbrown::HashMap;

use super::search::Refiner;
use super::{membership, SymmetryError};
use crate::eval::{TypeCache, TypeInterner};
use crate::logic::SortId;
use crate::structures::{induced_substructure, Element, FiniteStructure};
use crate::util::UnionFind;

/// Two tuples that should lie in one orbit but do not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub left: Vec<(SortId, Element)>,
    pub right: Vec<(SortId, Element)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneity {
    pub holds: bool,
    /// The first failure found, shortest tuples first within a branch.
    pub witness: Option<Witness>,
    /// Number of stabiliser computations performed.
    pub stabilizers: usize,
}

struct Stabilizers<'m> {
    refiner: Refiner<'m>,
    count: usize,
}

impl Stabilizers<'_> {
    /// Point orbits of the pointwise stabiliser of `prefix`, as a union-find,
    /// with its generators.
    fn orbits(&mut self, prefix: &[u32]) -> (UnionFind, Vec<Vec<u32>>) {
        self.count += 1;
        let mut start = self.refiner.initial.clone();
        for (i, &x) in prefix.iter().enumerate() {
            Refiner::individualize(&mut start, x as usize, usize::MAX - i);
        }
        let (gens, _, _) = self.refiner.group(&start);
        let mut uf = UnionFind::new(self.refiner.size());
        for g in &gens {
            for (x, &y) in g.iter().enumerate() {
                uf.union(x, y as usize);
            }
        }
        (uf, gens)
    }
}

/// Points in a non-trivial orbit. Extending the prefix by a fixed point
/// changes neither stabiliser, so those branches repeat their parent.
fn moved_points(uf: &mut UnionFind, n: usize) -> Vec<bool> {
    let mut size = alloc::vec![0usize; n];
    for x in 0..n {
        size[uf.find(x)] += 1;
    }
    (0..n).map(|x| size[uf.find(x)] > 1).collect()
}

fn locals(m: &FiniteStructure, t: &[u32]) -> Vec<(SortId, Element)> {
    t.iter().map(|&g| m.local(g as usize)).collect()
}

fn extended(prefix: &[u32], x: u32) -> Vec<u32> {
    let mut t = prefix.to_vec();
    t.push(x);
    t
}

/// Whether `N` (given per sort) is a homogeneous substructure of `M`: tuples
/// from `N` in one `Aut(M)`-orbit are always in one `Aut_{N}(M)`-orbit.
pub fn is_homogeneous_substructure(m: &FiniteStructure, subset: &[Vec<Element>]) -> Result<Homogeneity, SymmetryError> {
    induced_substructure(m, subset).map_err(SymmetryError::NotSubstructure)?;
    let inside = membership(m, subset);
    let points: Vec<u32> = (0..m.total_size() as u32).filter(|&x| inside[x as usize] == 1).collect();
    let mut g = Stabilizers { refiner: Refiner::new(m), count: 0 };
    let mut h = Stabilizers { refiner: Refiner::new(m), count: 0 };
    h.refiner.colour_by(&inside);
    let witness = substructure_rec(m, &points, &inside, &[], &mut g, &mut h);
    Ok(Homogeneity { holds: witness.is_none(), witness, stabilizers: g.count + h.count })
}

fn substructure_rec(
    m: &FiniteStructure,
    points: &[u32],
    inside: &[u64],
    prefix: &[u32],
    g: &mut Stabilizers<'_>,
    h: &mut Stabilizers<'_>,
) -> Option<Witness> {
    let rest: Vec<u32> = points.iter().copied().filter(|x| !prefix.contains(x)).collect();
    if rest.is_empty() {
        return None;
    }
    let (mut gu, gens) = g.orbits(prefix);
    // If the stabiliser of the prefix already maps N onto itself it is the
    // stabiliser in Aut_{N}(M) too, and so is every smaller one below.
    if gens.iter().all(|p| points.iter().all(|&x| inside[p[x as usize] as usize] == 1)) {
        return None;
    }
    let (mut hu, _) = h.orbits(prefix);
    for (i, &c) in rest.iter().enumerate() {
        for &d in &rest[i + 1..] {
            let same_g = gu.find(c as usize) == gu.find(d as usize);
            if same_g && hu.find(c as usize) != hu.find(d as usize) {
                return Some(Witness { left: locals(m, &extended(prefix, c)), right: locals(m, &extended(prefix, d)) });
            }
        }
    }
    // The stabiliser of the prefix in Aut_{N}(M) fixes N pointwise, and the
    // check above then made every Aut(M)-class trivial too.
    let mut roots: Vec<usize> = rest.iter().map(|&c| hu.find(c as usize)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() == rest.len() {
        return None;
    }
    let moved = moved_points(&mut gu, m.total_size());
    for &c in &rest {
        if hu.find(c as usize) != c as usize || !moved[c as usize] {
            continue;
        }
        if let Some(w) = substructure_rec(m, points, inside, &extended(prefix, c), g, h) {
            return Some(w);
        }
    }
    None
}

/// Whether tuples with equal atomic diagrams always lie in one
/// `Aut(M)`-orbit. Relational signatures only.
pub fn is_atomically_homogeneous(m: &FiniteStructure) -> Result<Homogeneity, SymmetryError> {
    if !m.signature().is_relational() {
        return Err(SymmetryError::NotRelational);
    }
    let mut g = Stabilizers { refiner: Refiner::new(m), count: 0 };
    let mut interner = TypeInterner::new();
    let mut cache = TypeCache::new(m);
    let witness = atomic_rec(m, &[], &mut g, &mut interner, &mut cache);
    Ok(Homogeneity { holds: witness.is_none(), witness, stabilizers: g.count })
}

fn atomic_rec(
    m: &FiniteStructure,
    prefix: &[u32],
    g: &mut Stabilizers<'_>,
    interner: &mut TypeInterner,
    cache: &mut TypeCache<'_>,
) -> Option<Witness> {
    let rest: Vec<u32> = (0..m.total_size() as u32).filter(|x| !prefix.contains(x)).collect();
    if rest.is_empty() {
        return None;
    }
    let (mut gu, _) = g.orbits(prefix);
    let mut first_of_type: HashMap<u32, u32> = HashMap::new();
    let mut singletons = true;
    for &c in &rest {
        let t = cache.ranked_type(interner, &locals(m, &extended(prefix, c)), 0).id;
        match first_of_type.get(&t) {
            None => {
                first_of_type.insert(t, c);
            }
            Some(&d) => {
                singletons = false;
                if gu.find(c as usize) != gu.find(d as usize) {
                    return Some(Witness { left: locals(m, &extended(prefix, d)), right: locals(m, &extended(prefix, c)) });
                }
            }
        }
    }
    // Each atomic class is now inside one orbit; if the classes are points
    // the same holds for every longer tuple.
    if singletons {
        return None;
    }
    let moved = moved_points(&mut gu, m.total_size());
    for &c in &rest {
        if gu.find(c as usize) != c as usize || !moved[c as usize] {
            continue;
        }
        if let Some(w) = atomic_rec(m, &extended(prefix, c), g, interner, cache) {
            return Some(w);
        }
    }
    None
}
