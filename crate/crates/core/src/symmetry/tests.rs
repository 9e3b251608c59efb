use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::eval::TypeCache;
use crate::eval::TypeInterner;
use crate::logic::Signature;
use crate::structures::StructureBuilder;
use crate::util::Odometer;

fn pure(n: usize) -> FiniteStructure {
    StructureBuilder::new(Signature::single_sorted("M"), &[n]).build().unwrap()
}

fn graph(n: usize, edges: &[(u32, u32)], symmetric: bool) -> FiniteStructure {
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

fn order(n: usize) -> FiniteStructure {
    let edges: Vec<(u32, u32)> = (0..n as u32).flat_map(|i| (i + 1..n as u32).map(move |j| (i, j))).collect();
    graph(n, &edges, false)
}

/// One equivalence relation with classes {0,1} and {2,3}.
fn two_pairs() -> FiniteStructure {
    let edges: Vec<(u32, u32)> =
        (0..4u32).flat_map(|x| (0..4u32).filter(move |y| x / 2 == y / 2).map(move |y| (x, y))).collect();
    graph(4, &edges, false)
}

fn order_of(m: &FiniteStructure) -> u64 {
    u64::try_from(automorphisms(m).order()).unwrap()
}

#[test]
fn group_orders() {
    assert_eq!(order_of(&pure(4)), 24);
    assert_eq!(order_of(&order(3)), 1);
    assert_eq!(order_of(&two_pairs()), 8);
    assert_eq!(order_of(&graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], true)), 8);
    assert_eq!(order_of(&pure(9)), 362_880);
}

#[test]
fn groups_match_brute_force() {
    let cases =
        [pure(5), order(4), two_pairs(), graph(5, &[(0, 1), (1, 2), (3, 4)], true), graph(6, &[(0, 1), (1, 2), (2, 0)], false)];
    for m in &cases {
        let g = automorphisms(m);
        let all = brute_force_automorphisms(m, 7).unwrap();
        assert_eq!(g.order(), &BigUint::from(all.len()));
        assert_eq!(g.elements(10_000).unwrap(), all);
        assert!(g.generators().iter().all(|p| is_automorphism(m, p)));
    }
}

#[test]
fn per_sort_generators() {
    let mut sig = Signature::single_sorted("A");
    sig.add_sort("B").unwrap();
    let m = StructureBuilder::new(sig, &[2, 3]).build().unwrap();
    let g = automorphisms(&m);
    assert_eq!(g.order(), &BigUint::from(12u32));
    for p in g.generators() {
        let split = g.per_sort(p);
        assert_eq!(split[0].len(), 2);
        assert_eq!(split[1].len(), 3);
    }
}

#[test]
fn tuple_orbits() {
    assert_eq!(orbits_on_tuples(&pure(5), 2).unwrap().num_classes(), 2);
    assert_eq!(orbits_on_tuples(&pure(5), 4).unwrap().num_classes(), 15);
    assert_eq!(orbits_on_tuples(&pure(2), 4).unwrap().num_classes(), 8);
    let p = orbits_on_tuples(&pure(3), 2).unwrap();
    assert_eq!(p.representatives(), &[vec![0, 0], vec![0, 1]]);
    assert_eq!(p.class_of(&[2, 1]), 1);
    assert_eq!(p.iter().count(), 9);
}

#[test]
fn type_counts() {
    assert_eq!(count_k_types(&pure(6), 4).unwrap(), 15);
    assert_eq!(count_k_types(&order(3), 4).unwrap(), 81);
    assert_eq!(count_k_types(&order(3), 1).unwrap(), 3);
    assert!(in_class_cld(&pure(6), 15).unwrap());
    assert!(!in_class_cld(&pure(6), 14).unwrap());
    assert!(!in_class_cld(&order(4), 100).unwrap());
}

#[test]
fn homogeneous_substructures() {
    let set = pure(5);
    assert!(is_homogeneous_substructure(&set, &[vec![0, 3]]).unwrap().holds);
    let m = two_pairs();
    let r = is_homogeneous_substructure(&m, &[vec![0, 1, 2]]).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness, Some(Witness { left: vec![(0, 0)], right: vec![(0, 2)] }));
    assert!(is_homogeneous_substructure(&m, &[vec![0, 1]]).unwrap().holds);
}

#[test]
fn atomic_homogeneity() {
    assert!(is_atomically_homogeneous(&pure(4)).unwrap().holds);
    let path = graph(3, &[(0, 1), (1, 2)], true);
    let r = is_atomically_homogeneous(&path).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness, Some(Witness { left: vec![(0, 0)], right: vec![(0, 1)] }));
    assert!(is_atomically_homogeneous(&graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], true)).unwrap().holds);
    let mut sig = Signature::single_sorted("M");
    sig.add_function("s", &[0], 0).unwrap();
    let mut b = StructureBuilder::new(sig, &[2]);
    b.set_table(0, vec![1, 0]);
    assert_eq!(is_atomically_homogeneous(&b.build().unwrap()), Err(SymmetryError::NotRelational));
}

/// Orbit equivalence of tuples by applying every group element.
fn same_orbit(group: &[Vec<u32>], a: &[u32], b: &[u32]) -> bool {
    group.iter().any(|g| a.iter().map(|&x| g[x as usize]).eq(b.iter().copied()))
}

fn homogeneous_by_brute_force(m: &FiniteStructure, subset: &[u32]) -> bool {
    let all = brute_force_automorphisms(m, 7).unwrap();
    let stab: Vec<Vec<u32>> = all
        .iter()
        .filter(|g| subset.iter().all(|x| subset.contains(&g[*x as usize])))
        .cloned()
        .collect();
    for k in 1..=subset.len() + 2 {
        let mut odo = Odometer::new(vec![subset.len(); k]);
        let tuples: Vec<Vec<u32>> = core::iter::from_fn(|| odo.next_tuple().map(<[u32]>::to_vec))
            .map(|t| t.iter().map(|&i| subset[i as usize]).collect())
            .collect();
        for a in &tuples {
            for b in &tuples {
                if same_orbit(&all, a, b) && !same_orbit(&stab, a, b) {
                    return false;
                }
            }
        }
    }
    true
}

fn atomic_by_brute_force(m: &FiniteStructure) -> bool {
    let all = brute_force_automorphisms(m, 7).unwrap();
    let n = m.total_size();
    let mut interner = TypeInterner::new();
    let mut cache = TypeCache::new(m);
    for k in 1..=n {
        let mut odo = Odometer::new(vec![n; k]);
        let tuples: Vec<Vec<u32>> = core::iter::from_fn(|| odo.next_tuple().map(<[u32]>::to_vec)).collect();
        let codes: Vec<u32> = tuples
            .iter()
            .map(|t| {
                let loc: Vec<_> = t.iter().map(|&g| m.local(g as usize)).collect();
                cache.ranked_type(&mut interner, &loc, 0).id
            })
            .collect();
        for i in 0..tuples.len() {
            for j in i + 1..tuples.len() {
                if codes[i] == codes[j] && !same_orbit(&all, &tuples[i], &tuples[j]) {
                    return false;
                }
            }
        }
    }
    true
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_graph(max: usize) -> impl Strategy<Value = FiniteStructure> {
        (1usize..=max).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges: Vec<(u32, u32)> = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(k, _)| ((k / n) as u32, (k % n) as u32))
                .collect();
            graph(n, &edges, false)
        }))
    }

    /// A unary function plus a constant, so refinement sees both.
    fn arb_unary(max: usize) -> impl Strategy<Value = FiniteStructure> {
        (1usize..=max).prop_flat_map(|n| (proptest::collection::vec(0..n as u32, n), 0..n as u32)).prop_map(|(f, c)| {
            let mut sig = Signature::single_sorted("M");
            sig.add_function("f", &[0], 0).unwrap();
            sig.add_constant("c", 0).unwrap();
            let mut b = StructureBuilder::new(sig, &[f.len()]);
            b.set_table(0, f);
            b.set_constant(0, c);
            b.build().unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn group_order_matches_brute_force(m in arb_graph(6)) {
            let all = brute_force_automorphisms(&m, 7).unwrap();
            let g = automorphisms(&m);
            prop_assert_eq!(g.order(), &BigUint::from(all.len()));
            prop_assert!(g.generators().iter().all(|p| is_automorphism(&m, p)));
        }

        #[test]
        fn function_structures_match_brute_force(m in arb_unary(6)) {
            let all = brute_force_automorphisms(&m, 7).unwrap();
            let g = automorphisms(&m);
            prop_assert_eq!(g.order(), &BigUint::from(all.len()));
        }

        #[test]
        fn orbits_are_closed_and_exact(m in arb_graph(5)) {
            let all = brute_force_automorphisms(&m, 7).unwrap();
            let p = orbits_on_tuples(&m, 2).unwrap();
            for (a, ca) in p.iter() {
                for (b, cb) in p.iter() {
                    prop_assert_eq!(ca == cb, same_orbit(&all, &a, &b));
                }
            }
        }

        #[test]
        fn homogeneity_matches_brute_force(m in arb_graph(5), mask in 1u32..32) {
            let n = m.total_size() as u32;
            let subset: Vec<u32> = (0..n).filter(|x| mask >> x & 1 == 1).collect();
            prop_assume!(!subset.is_empty());
            let fast = is_homogeneous_substructure(&m, &[subset.clone()]).unwrap();
            prop_assert_eq!(fast.holds, homogeneous_by_brute_force(&m, &subset));
            if let Some(w) = fast.witness {
                let all = brute_force_automorphisms(&m, 7).unwrap();
                let l: Vec<u32> = w.left.iter().map(|&(_, e)| e).collect();
                let r: Vec<u32> = w.right.iter().map(|&(_, e)| e).collect();
                prop_assert!(same_orbit(&all, &l, &r));
            }
        }

        #[test]
        fn atomic_homogeneity_matches_brute_force(m in arb_graph(4)) {
            prop_assert_eq!(is_atomically_homogeneous(&m).unwrap().holds, atomic_by_brute_force(&m));
        }

        #[test]
        fn orbits_refine_ranked_types(m in arb_graph(5)) {
            let n = m.total_size();
            let p = orbits_on_tuples(&m, 1).unwrap();
            let mut interner = TypeInterner::new();
            let mut cache = TypeCache::new(&m);
            for r in 0..=n {
                let codes: Vec<u32> = (0..n as u32).map(|e| cache.ranked_type(&mut interner, &[(0, e)], r).id).collect();
                for a in 0..n as u32 {
                    for b in 0..n as u32 {
                        let same_orbit = p.class_of(&[a]) == p.class_of(&[b]);
                        if same_orbit {
                            prop_assert_eq!(codes[a as usize], codes[b as usize]);
                        }
                        if r == n {
                            prop_assert_eq!(same_orbit, codes[a as usize] == codes[b as usize]);
                        }
                    }
                }
            }
        }
    }
}

