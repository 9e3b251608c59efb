mod common;

use proptest::prelude::*;

use exactlab_core::eval::{satisfies, solution_count};
use exactlab_core::families::{self, chain, FamilySpec};
use exactlab_core::geometry::{build_envelope, EnvelopeExample};
use exactlab_core::logic::{enumerate_literal_types, parse_formula, print_formula, Formula, Node, Signature, Term, VarDecl};
use exactlab_core::mec::{count_grid, empirical_partition, falsify_weak_mec, verify_definitions, verify_soundness};
use exactlab_core::mec::{FalsifyBudget, FalsifyOutcome, PartitionOptions, PointedGrid};
use exactlab_core::structures::{disjoint_union, lift_to_union, reduct, Element, FiniteStructure, StructureBuilder};
use exactlab_core::symmetry::{automorphisms, is_homogeneous_substructure};

fn sig() -> Signature {
    let mut sig = Signature::single_sorted("M");
    sig.add_relation("E", &[0, 0]).unwrap();
    sig.add_relation("<", &[0, 0]).unwrap();
    sig.add_function("s", &[0], 0).unwrap();
    sig.add_function("+", &[0, 0], 0).unwrap();
    sig.add_constant("c", 0).unwrap();
    sig
}

fn term(env: usize) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![(0..env).prop_map(Term::Var), Just(Term::Const(0))];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![inner.clone().prop_map(|t| Term::App(0, vec![t])), (inner.clone(), inner).prop_map(|(a, b)| Term::App(1, vec![a, b]))]
    })
    .boxed()
}

fn node(env: usize, fuel: u32) -> BoxedStrategy<Node> {
    let atom = prop_oneof![
        (term(env), term(env)).prop_map(|(a, b)| Node::Eq(a, b)),
        (0..2usize, term(env), term(env)).prop_map(|(r, a, b)| Node::Rel(r, vec![a, b])),
    ];
    if fuel == 0 {
        return atom.boxed();
    }
    let sub = node(env, fuel - 1);
    let deeper = node(env + 1, fuel - 1);
    let deeper2 = node(env + 2, fuel - 1);
    prop_oneof![
        atom,
        sub.clone().prop_map(|a| Node::Not(Box::new(a))),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| Node::And(vec![a, b])),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| Node::Or(vec![a, b])),
        (sub.clone(), sub).prop_map(|(a, b)| Node::Implies(Box::new(a), Box::new(b))),
        deeper.clone().prop_map(|b| Node::Exists(0, Box::new(b))),
        deeper.prop_map(|b| Node::Forall(0, Box::new(b))),
        (0..3usize, deeper2).prop_map(|(count, b)| Node::CountExactly { count, sorts: vec![0, 0], body: Box::new(b) }),
    ]
    .boxed()
}

fn formula() -> impl Strategy<Value = Formula> {
    node(2, 3).prop_map(|body| Formula::new("f", vec![VarDecl::new("x", 0)], vec![VarDecl::new("y", 0)], body))
}

fn arb_graph(max: usize) -> impl Strategy<Value = FiniteStructure> {
    (1..=max).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| graph_from(n, &bits)))
}

fn graph_from(n: usize, bits: &[bool]) -> FiniteStructure {
    let edges: Vec<(u32, u32)> =
        (0..n * n).filter(|&i| bits[i]).map(|i| ((i / n) as u32, (i % n) as u32)).collect();
    common::graph(n, &edges, false)
}

/// A graph with a second relation `F` on top.
fn two_relations(n: usize, e: &[bool], f: &[bool]) -> FiniteStructure {
    let mut sig = Signature::single_sorted("M");
    sig.add_relation("E", &[0, 0]).unwrap();
    sig.add_relation("F", &[0, 0]).unwrap();
    let mut b = StructureBuilder::new(sig, &[n]);
    for i in 0..n * n {
        let t = [(i / n) as u32, (i % n) as u32];
        if e[i] {
            b.add_tuple(0, &t);
        }
        if f[i] {
            b.add_tuple(1, &t);
        }
    }
    b.build().unwrap()
}

const GRAPH_CORPUS: [&str; 5] = [
    "f(x; y) := E(x, y)",
    "f(x; y) := exists z. E(x, z) & E(z, y)",
    "f(x; y) := !E(y, x) & x != y",
    "f(x; y) := forall z. E(z, x) -> E(z, y)",
    "f(x1, x2; y) := E(x1, x2) & E(x2, y)",
];

fn count(m: &FiniteStructure, phi: &Formula, a: &[Element]) -> u64 {
    solution_count(m, phi, a).unwrap().to_u64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(f in formula()) {
        let sig = sig();
        let printed = print_formula(&f, &sig);
        let back = parse_formula(&printed, &sig).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(&back, &f, "{}", printed);
    }

    #[test]
    fn literal_types_partition_pairs(m in arb_graph(4)) {
        let types: Vec<Formula> =
            enumerate_literal_types(m.signature(), 2).unwrap().iter().map(|t| t.to_formula("t")).collect();
        let n = m.size(0) as u32;
        for a in 0..n {
            for b in 0..n {
                let hits = types.iter().filter(|t| satisfies(&m, t, &[a, b]).unwrap()).count();
                prop_assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn union_counts_multiply(g in arb_graph(4), h in arb_graph(4)) {
        let gsig = g.signature().clone();
        let u = disjoint_union(&[g.clone(), h.clone()]).unwrap();
        prop_assert_eq!(u.total_size(), g.total_size() + h.total_size());
        let chi = parse_formula("chi(x;) := exists z. E(x, z)", &gsig).unwrap();
        let theta = parse_formula("theta(x;) := !E(x, x)", &gsig).unwrap();
        let left = lift_to_union(&chi, &gsig, 1, u.signature()).unwrap();
        let right = lift_to_union(&theta, &gsig, 2, u.signature()).unwrap();
        let both = Formula::new(
            "both",
            vec![left.objects[0].clone(), VarDecl::new("x2", right.objects[0].sort)],
            vec![],
            Node::conj(vec![left.body.shifted(1, 1), right.body.shifted(0, 1)]),
        );
        prop_assert_eq!(count(&u, &both, &[]), count(&g, &chi, &[]) * count(&h, &theta, &[]));
    }

    #[test]
    fn reducts_keep_truth(n in 1usize..5, bits in proptest::collection::vec(any::<bool>(), 32)) {
        let m = two_relations(n, &bits[..n * n], &bits[16..16 + n * n]);
        let r = reduct(&m, &common::graph(1, &[], false).signature().clone()).unwrap();
        for text in GRAPH_CORPUS {
            let phi = parse_formula(text, r.signature()).unwrap();
            let wide = phi.translate(r.signature(), m.signature()).unwrap();
            for y in 0..n as u32 {
                prop_assert_eq!(count(&r, &phi, &[y]), count(&m, &wide, &[y]));
            }
        }
    }

    #[test]
    fn automorphisms_preserve_counts(m in arb_graph(5)) {
        let g = automorphisms(&m);
        for text in GRAPH_CORPUS {
            let phi = parse_formula(text, m.signature()).unwrap();
            for sigma in g.generators() {
                for y in 0..m.size(0) as u32 {
                    prop_assert_eq!(count(&m, &phi, &[y]), count(&m, &phi, &[sigma[y as usize]]));
                }
            }
        }
    }

    #[test]
    fn nested_partitions_are_sound(
        labels in proptest::collection::btree_set((1u64..=3, 1u64..=3, 1u64..=3), 4..10),
        which in 0usize..4,
    ) {
        let spec = FamilySpec::nested_equivalence(3).unwrap();
        let labels: Vec<Vec<u64>> = labels.into_iter().map(|(a, b, c)| vec![a, b, c]).collect();
        let grid = PointedGrid::new(&spec, &labels, &[0]).unwrap();
        let text = ["f(x; y) := I1(x, y)", "f(x; y) := !I2(x, y)", "f(x; y) := I1(x, y) & x != y", "f(x1, x2; y) := I2(x1, x2) & I1(x2, y)"][which];
        let phi = parse_formula(text, &spec.signature().unwrap()).unwrap();
        let opts = PartitionOptions { emit_formulas: true, ..Default::default() };
        let r = empirical_partition(&grid, &phi, &opts).unwrap();
        verify_soundness(&grid, &r, &count_grid(&grid, &phi).unwrap()).unwrap();
        verify_definitions(&grid, &r).unwrap();
    }

    #[test]
    fn falsification_witnesses_are_real(t in 1usize..5) {
        let spec = FamilySpec::linear_order();
        let phi = parse_formula("f(x; y) := x < y | x = y", &spec.signature().unwrap()).unwrap();
        let FalsifyOutcome::Witness(w) = falsify_weak_mec(&spec, &phi, t, &FalsifyBudget::default()).unwrap() else {
            return Err(TestCaseError::fail("no witness"));
        };
        prop_assert!(w.counts.len() > t);
        let m = families::generate(&spec, &w.index).unwrap();
        for (c, a) in &w.counts {
            prop_assert_eq!(count(&m, &phi, a), *c);
        }
    }

    #[test]
    fn envelopes_nest_homogeneously(small in proptest::collection::vec(1u64..=2, 3), grow in proptest::collection::vec(0u64..=1, 3)) {
        prop_assume!(grow.contains(&1));
        let large: Vec<u64> = small.iter().zip(&grow).map(|(a, b)| a + b).collect();
        let e = build_envelope(EnvelopeExample::NestedEquivalence, &small).unwrap();
        let f = build_envelope(EnvelopeExample::NestedEquivalence, &large).unwrap();
        let c = chain(&e.spec, &[e.index.clone(), f.index.clone()]).unwrap();
        prop_assert!(c.embedding(0, 1).is_substructure_map(&e.structure, &f.structure));
        let image: Vec<Element> = (0..e.structure.size(0) as u32).map(|x| c.embedding(0, 1).apply(0, x)).collect();
        prop_assert!(is_homogeneous_substructure(&f.structure, &[image]).unwrap().holds);
    }
}
