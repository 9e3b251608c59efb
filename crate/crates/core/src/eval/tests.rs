use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::logic::{build_at_most_sentence, build_exact_count_formula, expand_counting, parse_formula, Signature};
use crate::structures::StructureBuilder;

fn order(n: usize) -> FiniteStructure {
    let mut sig = Signature::single_sorted("M");
    sig.add_relation("<", &[0, 0]).unwrap();
    let mut b = StructureBuilder::new(sig, &[n]);
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            b.add_tuple(0, &[i, j]);
        }
    }
    b.build().unwrap()
}

fn monoid(n: u32) -> FiniteStructure {
    let mut sig = Signature::single_sorted("M");
    sig.add_function("*", &[0, 0], 0).unwrap();
    let mut b = StructureBuilder::new(sig, &[n as usize]);
    b.set_table(0, (0..n * n).map(|k| (k / n) * (k % n) % n).collect());
    b.build().unwrap()
}

fn cyclic(n: u32) -> FiniteStructure {
    let mut sig = Signature::single_sorted("M");
    sig.add_function("+", &[0, 0], 0).unwrap();
    let mut b = StructureBuilder::new(sig, &[n as usize]);
    b.set_table(0, (0..n * n).map(|k| (k / n + k % n) % n).collect());
    b.build().unwrap()
}

fn pure(n: usize) -> FiniteStructure {
    StructureBuilder::new(Signature::single_sorted("M"), &[n]).build().unwrap()
}

fn nested222() -> FiniteStructure {
    let mut sig = Signature::single_sorted("M");
    sig.add_relation("I1", &[0, 0]).unwrap();
    sig.add_relation("I2", &[0, 0]).unwrap();
    let mut b = StructureBuilder::new(sig, &[8]);
    for x in 0..8u32 {
        for y in 0..8u32 {
            if x / 4 == y / 4 {
                b.add_tuple(0, &[x, y]);
            }
            if x / 2 == y / 2 {
                b.add_tuple(1, &[x, y]);
            }
        }
    }
    b.build().unwrap()
}

#[test]
fn satisfaction_examples() {
    let m5 = order(6);
    let lt = parse_formula("phi(x; y) := x < y", m5.signature()).unwrap();
    assert!(satisfies(&m5, &lt, &[1, 3]).unwrap());
    assert!(!satisfies(&m5, &lt, &[3, 1]).unwrap());

    let z8 = monoid(8);
    let div = parse_formula("phi(x; y) := exists z. x = z * y", z8.signature()).unwrap();
    assert!(satisfies(&z8, &div, &[4, 2]).unwrap());
    assert!(!satisfies(&z8, &div, &[2, 4]).unwrap());

    let set = pure(3);
    let s2 = build_at_most_sentence(2, "M", set.signature()).unwrap();
    let s3 = build_at_most_sentence(3, "M", set.signature()).unwrap();
    assert!(!satisfies(&set, &s2, &[]).unwrap());
    assert!(satisfies(&set, &s3, &[]).unwrap());
}

#[test]
fn assignment_errors() {
    let m = order(3);
    let lt = parse_formula("phi(x; y) := x < y", m.signature()).unwrap();
    assert_eq!(satisfies(&m, &lt, &[0]), Err(EvalError::Arity { expected: 2, found: 1 }));
    assert!(matches!(satisfies(&m, &lt, &[0, 7]), Err(EvalError::OutOfRange { element: 7, .. })));
}

#[test]
fn counting_examples() {
    let m5 = order(6);
    let lt = parse_formula("phi(x; y) := x < y", m5.signature()).unwrap();
    for i in 0..6u32 {
        assert_eq!(solution_count(&m5, &lt, &[i]).unwrap(), SolutionCount::from(i as u64));
    }
    for (p, n) in [(2u32, 3u32), (3, 2), (2, 4)] {
        let m = monoid(p.pow(n));
        let div = parse_formula("phi(x; y) := exists z. x = z * y", m.signature()).unwrap();
        for i in 0..=n {
            let a = p.pow(i) % p.pow(n);
            let expected = p.pow(n - i) as u64;
            assert_eq!(solution_count(&m, &div, &[a]).unwrap().to_u64(), Some(expected), "p={p} n={n} i={i}");
        }
    }
    let c6 = cyclic(6);
    let halves = parse_formula("phi(x; y) := x + x = y", c6.signature()).unwrap();
    assert_eq!(solution_count(&c6, &halves, &[0]).unwrap().to_u64(), Some(2));
    assert_eq!(solution_set(&c6, &halves, &[0]).unwrap(), vec![vec![0], vec![3]]);
    let never = parse_formula("phi(x;) := x != x", c6.signature()).unwrap();
    assert_eq!(solution_count(&c6, &never, &[]).unwrap().to_u64(), Some(0));
    assert!(solution_set(&c6, &never, &[]).unwrap().is_empty());
}

#[test]
fn solution_sets_in_id_order() {
    let m5 = order(6);
    let lt = parse_formula("phi(x; y) := x < y", m5.signature()).unwrap();
    assert_eq!(solution_set(&m5, &lt, &[2]).unwrap(), vec![vec![0], vec![1]]);
    let set = pure(3);
    let all = parse_formula("phi(x;) := x = x", set.signature()).unwrap();
    assert_eq!(solution_set(&set, &all, &[]).unwrap(), vec![vec![0], vec![1], vec![2]]);
}

#[test]
fn exact_count_formulas() {
    let m = order(4);
    let lt = parse_formula("phi(x; y) := x < y", m.signature()).unwrap();
    let psi0 = build_exact_count_formula(&lt, 0).unwrap();
    let expanded = expand_counting(&psi0);
    for a in 0..4 {
        assert_eq!(satisfies(&m, &psi0, &[a]).unwrap(), a == 0);
        assert_eq!(satisfies(&m, &expanded, &[a]).unwrap(), a == 0);
    }
    let taut = parse_formula("phi(x;) := x = x", m.signature()).unwrap();
    assert!(satisfies(&m, &build_exact_count_formula(&taut, 4).unwrap(), &[]).unwrap());
    let never = parse_formula("phi(x;) := x != x", m.signature()).unwrap();
    assert!(satisfies(&m, &build_exact_count_formula(&never, 0).unwrap(), &[]).unwrap());
}

#[test]
fn empty_sorts_are_vacuous() {
    let mut sig = Signature::single_sorted("A");
    sig.add_sort("B").unwrap();
    let m = StructureBuilder::new(sig, &[2, 0]).build().unwrap();
    let ex = parse_formula("phi(x:A;) := exists z:B. z = z", m.signature()).unwrap();
    let all = parse_formula("phi(x:A;) := forall z:B. z != z", m.signature()).unwrap();
    assert!(!satisfies(&m, &ex, &[0]).unwrap());
    assert!(satisfies(&m, &all, &[0]).unwrap());
}

#[test]
fn bitset_shortcut_agrees() {
    let m = order(7);
    for text in [
        "phi(x;) := exists z. x < z",
        "phi(x;) := exists z. z < x",
        "phi(x;) := forall z. x < z | x = z",
        "phi(x;) := forall z. z < x",
    ] {
        let phi = parse_formula(text, m.signature()).unwrap();
        let slow = parse_formula(&text.replace(". ", ". x = x & "), m.signature()).unwrap();
        for a in 0..7 {
            assert_eq!(satisfies(&m, &phi, &[a]).unwrap(), satisfies(&m, &slow, &[a]).unwrap(), "{text} at {a}");
        }
    }
}

fn ids(m: &FiniteStructure, tuples: &[Vec<(SortId, Element)>], r: usize, i: &mut TypeInterner) -> Vec<u32> {
    let mut cache = TypeCache::new(m);
    tuples.iter().map(|t| cache.ranked_type(i, t, r).id).collect()
}

#[test]
fn ranked_type_examples() {
    let mut interner = TypeInterner::new();
    let set = pure(4);
    let singles: Vec<Vec<(SortId, Element)>> = (0..4).map(|e| vec![(0, e)]).collect();
    let codes = ids(&set, &singles, 0, &mut interner);
    assert!(codes.iter().all(|&c| c == codes[0]));

    let m3 = order(3);
    let singles: Vec<Vec<(SortId, Element)>> = (0..3).map(|e| vec![(0, e)]).collect();
    let mut codes = ids(&m3, &singles, 1, &mut interner);
    codes.dedup();
    assert_eq!(codes.len(), 3);

    let n = nested222();
    let same_i2 = vec![(0, 0), (0, 1)];
    let diff_i1 = vec![(0, 0), (0, 4)];
    let c = ids(&n, &[same_i2, diff_i1], 0, &mut interner);
    assert_ne!(c[0], c[1]);
}

#[test]
fn codes_are_shared_across_structures() {
    let mut interner = TypeInterner::new();
    let a = ranked_type(&order(5), &[(0, 0)], 2, &mut interner);
    let b = ranked_type(&order(6), &[(0, 0)], 2, &mut interner);
    let c = ranked_type(&order(6), &[(0, 5)], 2, &mut interner);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn hintikka_formulas_define_their_class() {
    let mut interner = TypeInterner::new();
    // The rank-1 type of the minimum, checked on M_2..M_6.
    let t = ranked_type(&order(4), &[(0, 0)], 1, &mut interner);
    let phi = ranked_type_formula(t, &interner, order(4).signature());
    for n in 2..=6 {
        let m = order(n);
        for e in 0..n as u32 {
            assert_eq!(satisfies(&m, &phi, &[e]).unwrap(), e == 0, "n={n} e={e}");
        }
    }
    // Rank 0 on pure-set pairs and singletons.
    let set = pure(3);
    let pair = ranked_type(&set, &[(0, 0), (0, 1)], 0, &mut interner);
    let phi = ranked_type_formula(pair, &interner, set.signature());
    assert_eq!(phi.display(set.signature()).to_string(), "type_r0_".to_string() + &alloc::format!("{}(; y1, y2) := y1 != y2", pair.id));
    let single = ranked_type(&set, &[(0, 2)], 0, &mut interner);
    let phi = ranked_type_formula(single, &interner, set.signature());
    assert!(phi.display(set.signature()).to_string().ends_with(":= y1 = y1"));
}

#[test]
fn hintikka_formulas_with_functions() {
    let mut interner = TypeInterner::new();
    let c6 = cyclic(6);
    for r in 0..=1 {
        for a in 0..6u32 {
            let t = ranked_type(&c6, &[(0, a)], r, &mut interner);
            let phi = ranked_type_formula(t, &interner, c6.signature());
            let mut cache = TypeCache::new(&c6);
            for b in 0..6u32 {
                let same = cache.ranked_type(&mut interner, &[(0, b)], r) == t;
                assert_eq!(satisfies(&c6, &phi, &[b]).unwrap(), same, "r={r} a={a} b={b}");
            }
        }
    }
}

#[test]
fn rank_refines() {
    let mut interner = TypeInterner::new();
    let m = nested222();
    let pairs: Vec<Vec<(SortId, Element)>> =
        (0..8).flat_map(|a| (0..8).map(move |b| vec![(0, a), (0, b)])).collect();
    let r0 = ids(&m, &pairs, 0, &mut interner);
    let r1 = ids(&m, &pairs, 1, &mut interner);
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            if r1[i] == r1[j] {
                assert_eq!(r0[i], r0[j]);
            }
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    /// A random binary relation on `n` points plus a unary function.
    fn arb_structure() -> impl Strategy<Value = FiniteStructure> {
        (1usize..=4).prop_flat_map(|n| {
            (Just(n), proptest::collection::vec(any::<bool>(), n * n), proptest::collection::vec(0..n as u32, n))
        })
        .prop_map(|(n, bits, f)| {
            let mut sig = Signature::single_sorted("M");
            sig.add_relation("E", &[0, 0]).unwrap();
            sig.add_function("f", &[0], 0).unwrap();
            let mut b = StructureBuilder::new(sig, &[n]);
            for (k, &bit) in bits.iter().enumerate() {
                if bit {
                    b.add_tuple(0, &[(k / n) as u32, (k % n) as u32]);
                }
            }
            b.set_table(0, f);
            b.build().unwrap()
        })
    }

    const CORPUS: &[&str] = &[
        "phi(x; y) := E(x, y)",
        "phi(x; y) := exists z. E(x, z) & E(z, y)",
        "phi(x, w; y) := E(x, w) -> f(w) = y",
        "phi(x, w; ) := forall z. E(z, x) | !E(z, w)",
        "phi(x, w, u; y) := E(x, w) & E(w, u) & u != y",
        "phi(x; y) := exists! 2 z. E(z, x) | f(z) = y",
        "phi(x; y) := forall z. exists v. E(z, v) & (E(v, x) | f(v) = y)",
    ];

    /// Direct recursive evaluation with no compilation, memo or bitsets.
    fn naive_term(m: &FiniteStructure, t: &Term, env: &[Element]) -> Element {
        match t {
            Term::Var(v) => env[*v],
            Term::Const(c) => m.constant(*c),
            Term::App(f, args) => {
                let vals: Vec<Element> = args.iter().map(|a| naive_term(m, a, env)).collect();
                m.apply(*f, &vals)
            }
        }
    }

    fn naive(m: &FiniteStructure, n: &Node, env: &mut Vec<Element>) -> bool {
        match n {
            Node::True => true,
            Node::False => false,
            Node::Eq(a, b) => naive_term(m, a, env) == naive_term(m, b, env),
            Node::Rel(r, args) => {
                let vals: Vec<Element> = args.iter().map(|a| naive_term(m, a, env)).collect();
                m.relation(*r).tuples().any(|t| t == vals.as_slice())
            }
            Node::Not(a) => !naive(m, a, env),
            Node::And(ms) => ms.iter().all(|a| naive(m, a, env)),
            Node::Or(ms) => ms.iter().any(|a| naive(m, a, env)),
            Node::Implies(a, b) => !naive(m, a, env) || naive(m, b, env),
            Node::Exists(s, b) | Node::Forall(s, b) => {
                let mut hits = 0;
                for e in 0..m.size(*s) as Element {
                    env.push(e);
                    hits += naive(m, b, env) as usize;
                    env.pop();
                }
                if matches!(n, Node::Exists(..)) { hits > 0 } else { hits == m.size(*s) }
            }
            Node::CountExactly { count, sorts, body } => {
                let mut odo = Odometer::new(sorts.iter().map(|&s| m.size(s)).collect());
                let mut hits = 0;
                while let Some(t) = odo.next_tuple() {
                    let t = t.to_vec();
                    let d = env.len();
                    env.extend(t);
                    hits += naive(m, body, env) as usize;
                    env.truncate(d);
                }
                hits == *count
            }
        }
    }

    proptest! {
        #[test]
        fn counts_match_naive_enumeration(m in arb_structure()) {
            for text in CORPUS {
                let phi = parse_formula(text, m.signature()).unwrap();
                let n = m.size(0);
                let params = phi.param_sorts().len();
                let objs = phi.object_sorts().len();
                let mut podo = Odometer::new(vec![n; params]);
                while let Some(a) = podo.next_tuple() {
                    let a = a.to_vec();
                    let mut expected = 0u64;
                    let mut oodo = Odometer::new(vec![n; objs]);
                    while let Some(b) = oodo.next_tuple() {
                        let mut env = b.to_vec();
                        env.extend(&a);
                        expected += naive(&m, &phi.body, &mut env) as u64;
                    }
                    prop_assert_eq!(solution_count(&m, &phi, &a).unwrap().to_u64(), Some(expected), "{}", text);
                }
            }
        }

        #[test]
        fn counting_expansion_agrees(m in arb_structure(), i in 0usize..=6) {
            for text in CORPUS {
                let phi = parse_formula(text, m.signature()).unwrap();
                let psi = build_exact_count_formula(&phi, i).unwrap();
                let flat = expand_counting(&psi);
                let mut odo = Odometer::new(vec![m.size(0); psi.param_sorts().len()]);
                while let Some(a) = odo.next_tuple() {
                    let a = a.to_vec();
                    let direct = solution_count(&m, &phi, &a).unwrap().to_u64() == Some(i as u64);
                    prop_assert_eq!(satisfies(&m, &psi, &a).unwrap(), direct);
                    // The expansion nests i copies of the block; keep it small.
                    if i * phi.object_sorts().len() <= 6 {
                        prop_assert_eq!(satisfies(&m, &flat, &a).unwrap(), direct);
                    }
                }
            }
        }

        #[test]
        fn hintikka_formulas_are_exact(m in arb_structure(), r in 0usize..=1) {
            let mut interner = TypeInterner::new();
            let mut cache = TypeCache::new(&m);
            let n = m.size(0) as Element;
            let codes: Vec<RankedType> = (0..n).map(|a| cache.ranked_type(&mut interner, &[(0, a)], r)).collect();
            for &t in &codes {
                let phi = ranked_type_formula(t, &interner, m.signature());
                for b in 0..n {
                    prop_assert_eq!(satisfies(&m, &phi, &[b]).unwrap(), codes[b as usize] == t);
                }
            }
        }
    }
}
