//! Colour refinement and backtracking search for automorphisms.
//!
//! Colours are 64-bit hashes. Refinement is a function of isomorphism-
//! invariant data only, so a hash collision can make it coarser (weaker
//! pruning) but never wrong; every leaf is verified before it is returned.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::structures::FiniteStructure;
use crate::util::{Odometer, UnionFind};

pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn distinct(colours: &[u64]) -> usize {
    let mut v = colours.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn sorted(colours: &[u64]) -> Vec<u64> {
    let mut v = colours.to_vec();
    v.sort_unstable();
    v
}

/// Hyperedges of a structure over global ids: relation tuples and function
/// graphs `(args.., value)`.
pub(crate) struct Refiner<'m> {
    m: &'m FiniteStructure,
    n: usize,
    edges: Vec<(u64, Vec<u32>)>,
    incidence: Vec<Vec<(u32, u32)>>,
    /// Sort, constants and any caller-supplied colouring.
    pub(crate) initial: Vec<u64>,
}

impl<'m> Refiner<'m> {
    pub(crate) fn new(m: &'m FiniteStructure) -> Self {
        let sig = m.signature();
        let n = m.total_size();
        let mut edges = Vec::new();
        for (r, sym) in sig.relations().iter().enumerate() {
            for t in m.relation(r).tuples() {
                let g = t.iter().zip(&sym.profile).map(|(&e, &s)| m.global(s, e) as u32).collect();
                edges.push((mix(r as u64), g));
            }
        }
        for (f, sym) in sig.functions().iter().enumerate() {
            let mut odo = Odometer::new(sym.args.iter().map(|&s| m.size(s)).collect());
            while let Some(args) = odo.next_tuple() {
                let mut g: Vec<u32> = args.iter().zip(&sym.args).map(|(&e, &s)| m.global(s, e) as u32).collect();
                g.push(m.global(sym.result, m.apply(f, args)) as u32);
                edges.push((mix(!(f as u64)), g));
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for (i, (_, members)) in edges.iter().enumerate() {
            for (p, &x) in members.iter().enumerate() {
                incidence[x as usize].push((i as u32, p as u32));
            }
        }
        let mut initial: Vec<u64> = (0..n).map(|g| mix(m.local(g).0 as u64)).collect();
        for (c, sym) in sig.constants().iter().enumerate() {
            let g = m.global(sym.sort, m.constant(c));
            initial[g] = mix(initial[g] ^ mix(0xC0 + c as u64));
        }
        Refiner { m, n, edges, incidence, initial }
    }

    pub(crate) fn size(&self) -> usize {
        self.n
    }

    /// Add a caller colouring (e.g. membership in a subset).
    pub(crate) fn colour_by(&mut self, extra: &[u64]) {
        for (c, &e) in self.initial.iter_mut().zip(extra) {
            *c = mix(*c ^ mix(e));
        }
    }

    /// Iterate to the coarsest equitable-ish colouring refining `colours`.
    pub(crate) fn refine(&self, colours: &mut Vec<u64>) {
        let mut classes = distinct(colours);
        loop {
            let next: Vec<u64> = (0..self.n)
                .map(|x| {
                    let mut acc = 0u64;
                    for &(e, p) in &self.incidence[x] {
                        let (kind, members) = &self.edges[e as usize];
                        let mut h = mix(kind ^ ((p as u64) << 40));
                        for &y in members {
                            h = mix(h ^ colours[y as usize]);
                        }
                        acc = acc.wrapping_add(mix(h));
                    }
                    mix(colours[x] ^ mix(acc))
                })
                .collect();
            let c = distinct(&next);
            *colours = next;
            if c == classes || c == self.n {
                return;
            }
            classes = c;
        }
    }

    pub(crate) fn individualize(colours: &mut [u64], x: usize, depth: usize) {
        colours[x] = mix(colours[x] ^ mix(0xA11CE ^ depth as u64));
    }

    /// Does `perm` (on global ids) preserve sorts, the initial colouring and
    /// every table?
    pub(crate) fn verify(&self, perm: &[u32]) -> bool {
        (0..self.n).all(|x| self.initial[x] == self.initial[perm[x] as usize]) && is_automorphism_global(self.m, perm)
    }

    /// An automorphism mapping the individualized points of `src` onto
    /// those of `dst`, if there is one.
    pub(crate) fn search(&self, mut src: Vec<u64>, mut dst: Vec<u64>, depth: usize) -> Option<Vec<u32>> {
        self.refine(&mut src);
        self.refine(&mut dst);
        if sorted(&src) != sorted(&dst) {
            return None;
        }
        let Some(x) = first_nonsingleton(&src) else {
            let pos: HashMap<u64, u32> = dst.iter().enumerate().map(|(y, &c)| (c, y as u32)).collect();
            let perm: Vec<u32> = src.iter().map(|c| pos[c]).collect();
            return self.verify(&perm).then_some(perm);
        };
        for y in 0..self.n {
            if dst[y] != src[x] {
                continue;
            }
            let (mut s, mut d) = (src.clone(), dst.clone());
            Self::individualize(&mut s, x, depth);
            Self::individualize(&mut d, y, depth);
            if let Some(p) = self.search(s, d, depth + 1) {
                return Some(p);
            }
        }
        None
    }

    /// Generators, base and order of the group of colour-preserving
    /// automorphisms, via a stabiliser chain built bottom-up.
    pub(crate) fn group(&self, start: &[u64]) -> (Vec<Vec<u32>>, Vec<u32>, Vec<usize>) {
        let mut levels = Vec::new();
        let mut base = Vec::new();
        let mut col = start.to_vec();
        self.refine(&mut col);
        while let Some(x) = first_nonsingleton(&col) {
            levels.push(col.clone());
            base.push(x as u32);
            Self::individualize(&mut col, x, base.len() - 1);
            self.refine(&mut col);
        }
        let mut gens: Vec<Vec<u32>> = Vec::new();
        let mut orbit_sizes = vec![0; base.len()];
        for i in (0..base.len()).rev() {
            let b = base[i] as usize;
            let mut uf = UnionFind::new(self.n);
            for g in &gens {
                for (x, &y) in g.iter().enumerate() {
                    uf.union(x, y as usize);
                }
            }
            for y in 0..self.n {
                if levels[i][y] != levels[i][b] || uf.find(y) == uf.find(b) {
                    continue;
                }
                let (mut s, mut d) = (levels[i].clone(), levels[i].clone());
                Self::individualize(&mut s, b, i);
                Self::individualize(&mut d, y, i);
                if let Some(p) = self.search(s, d, i + 1) {
                    for (x, &z) in p.iter().enumerate() {
                        uf.union(x, z as usize);
                    }
                    gens.push(p);
                }
            }
            let root = uf.find(b);
            orbit_sizes[i] = (0..self.n).filter(|&y| uf.find(y) == root).count();
        }
        (gens, base, orbit_sizes)
    }
}

fn first_nonsingleton(colours: &[u64]) -> Option<usize> {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &c in colours {
        *counts.entry(c).or_default() += 1;
    }
    (0..colours.len()).find(|&x| counts[&colours[x]] > 1)
}

/// Whether a permutation of global ids is an automorphism.
pub(crate) fn is_automorphism_global(m: &FiniteStructure, perm: &[u32]) -> bool {
    let n = m.total_size();
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for (x, &y) in perm.iter().enumerate() {
        if y as usize >= n || seen[y as usize] || m.local(x).0 != m.local(y as usize).0 {
            return false;
        }
        seen[y as usize] = true;
    }
    let image = |s, e| m.local(perm[m.global(s, e)] as usize).1;
    let sig = m.signature();
    for (r, sym) in sig.relations().iter().enumerate() {
        let mut buf = vec![0; sym.arity()];
        for t in m.relation(r).tuples() {
            for ((b, &e), &s) in buf.iter_mut().zip(t).zip(&sym.profile) {
                *b = image(s, e);
            }
            if !m.holds(r, &buf) {
                return false;
            }
        }
    }
    for (f, sym) in sig.functions().iter().enumerate() {
        let mut odo = Odometer::new(sym.args.iter().map(|&s| m.size(s)).collect());
        let mut buf = vec![0; sym.arity()];
        while let Some(args) = odo.next_tuple() {
            for ((b, &e), &s) in buf.iter_mut().zip(args).zip(&sym.args) {
                *b = image(s, e);
            }
            if m.apply(f, &buf) != image(sym.result, m.apply(f, args)) {
                return false;
            }
        }
    }
    sig.constants().iter().enumerate().all(|(c, sym)| image(sym.sort, m.constant(c)) == m.constant(c))
}
