//! Automorphism groups, orbits on tuples, homogeneous substructures and
//! atomic homogeneity.
//!
//! Permutations act on *global* element ids (see
//! [`FiniteStructure::global`]); they always preserve sorts.

mod homogeneity;
mod search;

pub use homogeneity::{is_atomically_homogeneous, is_homogeneous_substructure, Homogeneity, Witness};

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use num_bigint::BigUint;

use crate::logic::SortId;
use crate::structures::{Element, FiniteStructure};
use crate::util::UnionFind;
use search::Refiner;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("signature has function symbols")]
    NotRelational,
    #[error("subset is not a substructure: {0}")]
    NotSubstructure(crate::structures::StructureError),
    #[error("{tuples} tuples exceed the orbit table limit")]
    TooLarge { tuples: u128 },
}

/// A permutation group given by generators, with its exact order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    sizes: Vec<usize>,
    generators: Vec<Vec<u32>>,
    base: Vec<u32>,
    order: BigUint,
}

impl AutGroup {
    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Base points of the stabiliser chain (global ids).
    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// A generator split into one permutation per sort.
    pub fn per_sort(&self, g: &[u32]) -> Vec<Vec<Element>> {
        let mut out = Vec::with_capacity(self.sizes.len());
        let mut offset = 0;
        for &s in &self.sizes {
            out.push((offset..offset + s).map(|x| g[x] - offset as u32).collect());
            offset += s;
        }
        out
    }

    /// Every group element, by closure. `None` once more than `limit` are
    /// found.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<u32>>> {
        let id: Vec<u32> = (0..self.degree() as u32).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(p) = queue.pop() {
            for g in &self.generators {
                let q: Vec<u32> = p.iter().map(|&x| g[x as usize]).collect();
                if seen.insert(q.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push(q);
                }
            }
        }
        let mut all: Vec<Vec<u32>> = seen.into_iter().collect();
        all.sort();
        Some(all)
    }

    /// Orbits on points, as a class id per global element (classes numbered
    /// by least member).
    pub fn point_orbits(&self) -> Vec<u32> {
        let n = self.degree();
        let mut uf = UnionFind::new(n);
        for g in &self.generators {
            for (x, &y) in g.iter().enumerate() {
                uf.union(x, y as usize);
            }
        }
        number_classes(&mut uf, n)
    }
}

fn number_classes(uf: &mut UnionFind, n: usize) -> Vec<u32> {
    let mut ids = vec![u32::MAX; n];
    let mut next = 0;
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let r = uf.find(x);
        if ids[r] == u32::MAX {
            ids[r] = next;
            next += 1;
        }
        out.push(ids[r]);
    }
    out
}

fn group_from(m: &FiniteStructure, refiner: &Refiner<'_>, start: &[u64]) -> AutGroup {
    let (generators, base, orbit_sizes) = refiner.group(start);
    let order = orbit_sizes.iter().fold(BigUint::from(1u32), |acc, &s| acc * BigUint::from(s));
    AutGroup { sizes: m.sizes().to_vec(), generators, base, order }
}

/// `Aut(M)`.
pub fn automorphisms(m: &FiniteStructure) -> AutGroup {
    let r = Refiner::new(m);
    group_from(m, &r, &r.initial)
}

/// Automorphisms fixing each listed point (global ids), in order.
pub fn pointwise_stabilizer(m: &FiniteStructure, points: &[u32]) -> AutGroup {
    let r = Refiner::new(m);
    let mut start = r.initial.clone();
    for (i, &x) in points.iter().enumerate() {
        Refiner::individualize(&mut start, x as usize, usize::MAX - i);
    }
    group_from(m, &r, &start)
}

/// `Aut_{N}(M)`: automorphisms mapping the subset onto itself. `subset[s]`
/// lists elements of sort `s`.
pub fn setwise_stabilizer(m: &FiniteStructure, subset: &[Vec<Element>]) -> AutGroup {
    let mut r = Refiner::new(m);
    r.colour_by(&membership(m, subset));
    group_from(m, &r, &r.initial)
}

fn membership(m: &FiniteStructure, subset: &[Vec<Element>]) -> Vec<u64> {
    let mut inside = vec![0u64; m.total_size()];
    for (s, elems) in subset.iter().enumerate() {
        for &e in elems {
            inside[m.global(s, e)] = 1;
        }
    }
    inside
}

/// Whether a permutation of global ids is an automorphism of `m`.
pub fn is_automorphism(m: &FiniteStructure, perm: &[u32]) -> bool {
    search::is_automorphism_global(m, perm)
}

/// Every automorphism, by filtering all sort-preserving permutations.
/// `None` above `max_size` elements. Used as an independent oracle.
pub fn brute_force_automorphisms(m: &FiniteStructure, max_size: usize) -> Option<Vec<Vec<u32>>> {
    let n = m.total_size();
    if n > max_size {
        return None;
    }
    let sort_of: Vec<SortId> = (0..n).map(|g| m.local(g).0).collect();
    let mut out = Vec::new();
    let mut perm = vec![0u32; n];
    let mut used = vec![false; n];
    fn rec(
        m: &FiniteStructure,
        x: usize,
        sort_of: &[SortId],
        perm: &mut Vec<u32>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if x == perm.len() {
            if search::is_automorphism_global(m, perm) {
                out.push(perm.clone());
            }
            return;
        }
        for y in 0..perm.len() {
            if !used[y] && sort_of[y] == sort_of[x] {
                used[y] = true;
                perm[x] = y as u32;
                rec(m, x + 1, sort_of, perm, used, out);
                used[y] = false;
            }
        }
    }
    rec(m, 0, &sort_of, &mut perm, &mut used, &mut out);
    Some(out)
}

/// Upper bound on `|M|^k` for orbit tables.
pub const MAX_ORBIT_TUPLES: u128 = 1 << 26;

/// Partition of `M^k` (global ids) into orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub k: usize,
    n: usize,
    class_of: Vec<u32>,
    representatives: Vec<Vec<u32>>,
}

impl OrbitPartition {
    pub fn num_classes(&self) -> usize {
        self.representatives.len()
    }

    /// Least tuple of each class, classes in order of their least tuple.
    pub fn representatives(&self) -> &[Vec<u32>] {
        &self.representatives
    }

    pub fn index(&self, tuple: &[u32]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.n + x as usize)
    }

    pub fn class_of(&self, tuple: &[u32]) -> usize {
        self.class_of[self.index(tuple)] as usize
    }

    /// `(tuple, class)` for every tuple, lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, usize)> + '_ {
        let (n, k) = (self.n, self.k);
        self.class_of.iter().enumerate().map(move |(i, &c)| {
            let mut t = vec![0u32; k];
            let mut rest = i;
            for slot in t.iter_mut().rev() {
                *slot = (rest % n) as u32;
                rest /= n;
            }
            (t, c as usize)
        })
    }
}

/// Orbits of `group` on `k`-tuples of a degree-`n` set.
pub fn orbits_under(group: &AutGroup, k: usize) -> Result<OrbitPartition, SymmetryError> {
    let n = group.degree();
    let total = (n as u128).pow(k as u32);
    if total > MAX_ORBIT_TUPLES {
        return Err(SymmetryError::TooLarge { tuples: total });
    }
    let total = total as usize;
    let mut uf = UnionFind::new(total);
    let pow: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    for g in group.generators() {
        for t in 0..total {
            let mut image = 0;
            for &p in &pow {
                image += g[t / p % n] as usize * p;
            }
            uf.union(t, image);
        }
    }
    let class_of = number_classes(&mut uf, total);
    let mut representatives = Vec::new();
    for (i, &c) in class_of.iter().enumerate() {
        if c as usize == representatives.len() {
            representatives.push(pow.iter().map(|&p| (i / p % n) as u32).collect());
        }
    }
    Ok(OrbitPartition { k, n, class_of, representatives })
}

/// The `Aut(M)`-orbits on `M^k`.
pub fn orbits_on_tuples(m: &FiniteStructure, k: usize) -> Result<OrbitPartition, SymmetryError> {
    orbits_under(&automorphisms(m), k)
}

/// Number of `Aut(M)`-orbits on `M^k`, i.e. of complete `k`-types.
pub fn count_k_types(m: &FiniteStructure, k: usize) -> Result<usize, SymmetryError> {
    Ok(orbits_on_tuples(m, k)?.num_classes())
}

/// Membership in the class of structures with at most `d` 4-types.
pub fn in_class_cld(m: &FiniteStructure, d: usize) -> Result<bool, SymmetryError> {
    Ok(count_k_types(m, 4)? <= d)
}

#[cfg(test)]
mod tests;
