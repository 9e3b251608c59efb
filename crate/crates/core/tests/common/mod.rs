//! Oracles shared by the integration tests. Nothing here calls the engine
//! it is checking: automorphisms are found by trying every permutation,
//! field arithmetic is done by hand, counts come from plain loops.
#![allow(dead_code)]

use exactlab_core::logic::Signature;
use exactlab_core::structures::{Element, FiniteStructure, StructureBuilder};

pub fn pure(n: usize) -> FiniteStructure {
    StructureBuilder::new(Signature::single_sorted("M"), &[n]).build().unwrap()
}

pub fn graph(n: usize, edges: &[(u32, u32)], symmetric: bool) -> FiniteStructure {
    let mut sig = Signature::single_sorted("M");
    sig.add_relation("E", &[0, 0]).unwrap();
    let mut b = StructureBuilder::new(sig, &[n]);
    for &(x, y) in edges {
        b.add_tuple(0, &[x, y]);
        if symmetric {
            b.add_tuple(0, &[y, x]);
        }
    }
    b.build().unwrap()
}

pub fn cycle(n: u32) -> FiniteStructure {
    let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph(n as usize, &edges, true)
}

pub fn path(n: u32) -> FiniteStructure {
    let edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    graph(n as usize, &edges, true)
}

pub fn order(n: u32) -> FiniteStructure {
    let edges: Vec<(u32, u32)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    graph(n as usize, &edges, false)
}

/// An equivalence relation with the given class sizes.
pub fn equivalence(classes: &[u32]) -> FiniteStructure {
    let mut class_of = Vec::new();
    for (c, &k) in classes.iter().enumerate() {
        class_of.extend(std::iter::repeat(c).take(k as usize));
    }
    let n = class_of.len() as u32;
    let edges: Vec<(u32, u32)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| class_of[x as usize] == class_of[y as usize]).collect();
    graph(n as usize, &edges, false)
}

/// `Z/n` with `+` and the constant `0`.
pub fn cyclic(n: u32) -> FiniteStructure {
    let mut sig = Signature::single_sorted("M");
    sig.add_function("+", &[0, 0], 0).unwrap();
    sig.add_constant("0", 0).unwrap();
    let mut b = StructureBuilder::new(sig, &[n as usize]);
    for x in 0..n {
        for y in 0..n {
            b.set_value(0, &[x, y], (x + y) % n);
        }
    }
    b.set_constant(0, 0);
    b.build().unwrap()
}

/// A two-sorted incidence structure: points, lines and `I`.
pub fn incidence(points: usize, lines: &[&[u32]]) -> FiniteStructure {
    let mut sig = Signature::new();
    let p = sig.add_sort("P").unwrap();
    let l = sig.add_sort("L").unwrap();
    sig.add_relation("I", &[p, l]).unwrap();
    let mut b = StructureBuilder::new(sig, &[points, lines.len()]);
    for (j, line) in lines.iter().enumerate() {
        for &x in *line {
            b.add_tuple(0, &[x, j as u32]);
        }
    }
    b.build().unwrap()
}

/// Small structures of every shape the engine handles.
pub fn corpus() -> Vec<(&'static str, FiniteStructure)> {
    vec![
        ("set1", pure(1)),
        ("set4", pure(4)),
        ("set6", pure(6)),
        ("order3", order(3)),
        ("order5", order(5)),
        ("cycle4", cycle(4)),
        ("cycle5", cycle(5)),
        ("cycle6", cycle(6)),
        ("path3", path(3)),
        ("path5", path(5)),
        ("triangle_arrows", graph(3, &[(0, 1), (1, 2), (2, 0)], false)),
        ("two_pairs", equivalence(&[2, 2])),
        ("classes_3_2_2", equivalence(&[3, 2, 2])),
        ("z6", cyclic(6)),
        ("z7", cyclic(7)),
        ("triangle_incidence", incidence(3, &[&[0, 1], &[1, 2], &[0, 2]])),
        ("star_incidence", incidence(4, &[&[0, 1], &[0, 2], &[0, 3]])),
    ]
}

/// Whether a permutation of global ids preserves every symbol.
pub fn preserves(m: &FiniteStructure, perm: &[usize]) -> bool {
    let sig = m.signature();
    let g = |s: usize, e: Element| perm[m.global(s, e)];
    for (r, rel) in sig.relations().iter().enumerate() {
        let mut t = vec![0; rel.arity()];
        let total: usize = rel.profile.iter().map(|&s| m.size(s)).product();
        for code in 0..total {
            let mut rest = code;
            for (slot, &s) in t.iter_mut().zip(&rel.profile).rev() {
                *slot = (rest % m.size(s)) as Element;
                rest /= m.size(s);
            }
            let image: Vec<Element> = t.iter().zip(&rel.profile).map(|(&e, &s)| m.local(g(s, e)).1).collect();
            if m.holds(r, &t) != m.holds(r, &image) {
                return false;
            }
        }
    }
    for (f, fun) in sig.functions().iter().enumerate() {
        let mut t = vec![0; fun.arity()];
        let total: usize = fun.args.iter().map(|&s| m.size(s)).product();
        for code in 0..total {
            let mut rest = code;
            for (slot, &s) in t.iter_mut().zip(&fun.args).rev() {
                *slot = (rest % m.size(s)) as Element;
                rest /= m.size(s);
            }
            let image: Vec<Element> = t.iter().zip(&fun.args).map(|(&e, &s)| m.local(g(s, e)).1).collect();
            if g(fun.result, m.apply(f, &t)) != m.global(fun.result, m.apply(f, &image)) {
                return false;
            }
        }
    }
    sig.constants().iter().enumerate().all(|(c, k)| g(k.sort, m.constant(c)) == m.global(k.sort, m.constant(c)))
}

/// Every sort-preserving permutation that preserves the structure.
pub fn all_automorphisms(m: &FiniteStructure) -> Vec<Vec<usize>> {
    let n = m.total_size();
    let sort_of: Vec<usize> = (0..n).map(|g| m.local(g).0).collect();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over all n! orders.
    let mut c = vec![0; n];
    let mut visit = |p: &Vec<usize>| {
        if (0..n).all(|x| sort_of[p[x]] == sort_of[x]) && preserves(m, p) {
            out.push(p.clone());
        }
    };
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Orbit labels of all `k`-tuples of global ids, numbered by least member,
/// tuples in lexicographic order.
pub fn tuple_orbits(n: usize, group: &[Vec<usize>], k: usize) -> Vec<usize> {
    let total = n.pow(k as u32);
    let mut label = vec![usize::MAX; total];
    let mut next = 0;
    for t in 0..total {
        if label[t] != usize::MAX {
            continue;
        }
        let digits: Vec<usize> = (0..k).map(|i| t / n.pow((k - 1 - i) as u32) % n).collect();
        for g in group {
            let image = digits.iter().fold(0, |acc, &d| acc * n + g[d]);
            label[image] = next;
        }
        next += 1;
    }
    label
}

/// Arithmetic in `F_q` for `q` in {2, 3, 4, 5, 7}. `F_4` is `F_2[w]/(w^2+w+1)`
/// with `a + b w` encoded as `a + 2b`.
#[derive(Clone, Copy, Debug)]
pub struct Field {
    pub q: u32,
}

impl Field {
    pub fn new(q: u32) -> Self {
        assert!([2, 3, 4, 5, 7].contains(&q));
        Field { q }
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        if self.q == 4 {
            a ^ b
        } else {
            (a + b) % self.q
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        if self.q != 4 {
            return a * b % self.q;
        }
        let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
        // (a0 + a1 w)(b0 + b1 w) with w^2 = w + 1.
        let c0 = (a0 & b0) ^ (a1 & b1);
        let c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
        c0 | (c1 << 1)
    }

    pub fn neg(self, a: u32) -> u32 {
        if self.q == 4 {
            a
        } else {
            (self.q - a) % self.q
        }
    }

    pub fn all_vectors(self, d: usize) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..d {
            out = out.into_iter().flat_map(|v| (0..self.q).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    /// Classes of nonzero vectors under nonzero scalars.
    pub fn projective_points(self, d: usize) -> Vec<Vec<u32>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut reps = Vec::new();
        for v in self.all_vectors(d) {
            if v.iter().all(|&x| x == 0) || seen.contains(&v) {
                continue;
            }
            for s in 1..self.q {
                seen.insert(v.iter().map(|&x| self.mul(s, x)).collect::<Vec<_>>());
            }
            reps.push(v);
        }
        reps
    }

    pub fn symplectic(self, x: &[u32], y: &[u32]) -> u32 {
        let mut acc = 0;
        for (a, b) in x.chunks(2).zip(y.chunks(2)) {
            acc = self.add(acc, self.add(self.mul(a[0], b[1]), self.neg(self.mul(a[1], b[0]))));
        }
        acc
    }
}

/// Vectors `v` of `F_p^(2i+j)` with `Q(v) = alpha` for the standard form:
/// `i` hyperbolic pairs plus a tail that is `x^2` or `e x^2` (`j = 1`,
/// `e` a non-square) or `xy` or an anisotropic `x^2 + xy + b y^2` (`j = 2`).
pub fn orthogonal_count(p: u32, i: usize, j: usize, minus: bool, alpha: u32) -> u64 {
    let f = Field::new(p);
    let squares: Vec<u32> = (1..p).map(|x| x * x % p).collect();
    let non_square = (1..p).find(|x| !squares.contains(x));
    let anisotropic = (0..p).find(|&b| (0..p).all(|t| (t * t + t + b) % p != 0)).unwrap();
    let tail = |v: &[u32]| -> u32 {
        match (j, minus) {
            (0, _) => 0,
            (1, false) => f.mul(v[0], v[0]),
            (1, true) => f.mul(non_square.expect("odd p"), f.mul(v[0], v[0])),
            (2, false) => f.mul(v[0], v[1]),
            _ => (v[0] * v[0] + v[0] * v[1] + anisotropic * v[1] * v[1]) % p,
        }
    };
    f.all_vectors(2 * i + j)
        .iter()
        .filter(|v| v[j..].chunks(2).fold(tail(&v[..j]), |acc, pair| f.add(acc, f.mul(pair[0], pair[1]))) == alpha)
        .count() as u64
}
