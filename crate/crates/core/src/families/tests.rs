use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::eval::{solution_count, solution_set};
use crate::logic::parse_formula;
use crate::symmetry::{automorphisms, is_homogeneous_substructure};

fn count(m: &FiniteStructure, text: &str, params: &[Element]) -> u64 {
    let phi = parse_formula(text, m.signature()).unwrap();
    solution_count(m, &phi, params).unwrap().to_u64().unwrap()
}

#[test]
fn nested_equivalence_example() {
    let spec = FamilySpec::nested_equivalence(3).unwrap();
    let m = generate(&spec, &[3, 6, 1]).unwrap();
    assert_eq!(m.total_size(), 18);
    assert_eq!(m.signature().relations().len(), 2);
    assert_eq!(count(&m, "r(x, y;) := I2(x, y) & !I1(x, y)", &[]), 0);
    assert_eq!(count(&m, "c(x;) := forall y. I1(x, y) -> I1(y, x)", &[]), 18);
    assert_eq!(count(&m, "k(x; a) := I1(x, a)", &[0]), 6);
    assert_eq!(count(&m, "k(x; a) := I1(x, a) & !I2(x, a)", &[0]), 5);
}

#[test]
fn pgroup_power_example() {
    let m = generate(&FamilySpec::pgroup_power(3).unwrap(), &[2]).unwrap();
    assert_eq!(m.total_size(), 81);
    assert_eq!(count(&m, "t(x;) := x + x + x = 0", &[]), 9);
}

#[test]
fn cyclic_direct_sum_axes() {
    let spec = FamilySpec::new(FamilyKind::CyclicDirectSum, &[("k", 2)]).unwrap();
    let m = generate(&spec, &[2, 3]).unwrap();
    let p1 = parse_formula("p(x;) := P1(x)", m.signature()).unwrap();
    let sols = solution_set(&m, &p1, &[]).unwrap();
    assert_eq!(sols.len(), 2);
    for s in sols {
        assert_eq!(coordinates(&spec, &[2, 3], s[0]).unwrap()[1], 0);
    }
    assert_eq!(count(&m, "p(x;) := P2(x)", &[]), 3);
}

#[test]
fn linear_order_example() {
    let m = generate(&FamilySpec::linear_order(), &[6]).unwrap();
    for i in 0..6 {
        assert_eq!(count(&m, "phi(x; y) := x < y", &[i]), i as u64);
    }
}

#[test]
fn size_laws() {
    let cases: Vec<(FamilySpec, Vec<u64>, u128)> = vec![
        (FamilySpec::nested_equivalence(2).unwrap(), vec![4, 3], 12),
        (FamilySpec::pgroup_power(2).unwrap(), vec![3], 64),
        (FamilySpec::new(FamilyKind::Homocyclic, &[("p", 3)]).unwrap(), vec![2, 2], 81),
        (FamilySpec::new(FamilyKind::CyclicDirectSum, &[("k", 3)]).unwrap(), vec![2, 2, 3], 12),
        (FamilySpec::new(FamilyKind::VectorSpace, &[("q", 4)]).unwrap(), vec![2], 16),
        (FamilySpec::new(FamilyKind::ProjectiveSpace, &[("q", 3)]).unwrap(), vec![3], 13),
        (FamilySpec::new(FamilyKind::PolarPair, &[("q", 2)]).unwrap(), vec![2], 8),
        (FamilySpec::new(FamilyKind::SymplecticSpace, &[("q", 3)]).unwrap(), vec![2], 9),
        (FamilySpec::new(FamilyKind::OrthogonalSpace, &[("q", 2), ("j", 1), ("sign", 0)]).unwrap(), vec![1], 8),
    ];
    for (spec, index, size) in cases {
        let m = generate(&spec, &index).unwrap();
        assert_eq!(m.total_size() as u128, size, "{:?}", spec.kind);
        assert_eq!(spec.size(&index).unwrap(), size);
    }
}

#[test]
fn parameter_errors() {
    assert_eq!(FamilySpec::pgroup_power(4), Err(FamilyError::NotPrime(4)));
    assert_eq!(FamilySpec::new(FamilyKind::VectorSpace, &[("q", 6)]), Err(FamilyError::NotPrimePower(6)));
    assert_eq!(FamilySpec::new(FamilyKind::VectorSpace, &[]), Err(FamilyError::MissingParameter("q")));
    assert!(matches!(FamilySpec::new(FamilyKind::PureSet, &[("p", 2)]), Err(FamilyError::UnexpectedParameter(_))));
    let spec = FamilySpec::new(FamilyKind::SymplecticSpace, &[("q", 2)]).unwrap();
    assert!(matches!(generate(&spec, &[3]), Err(FamilyError::InvalidIndex { .. })));
    assert!(matches!(generate(&FamilySpec::pure_set(), &[0]), Err(FamilyError::InvalidIndex { .. })));
    assert!(matches!(generate(&FamilySpec::pure_set(), &[1, 2]), Err(FamilyError::InvalidIndex { .. })));
    assert!(matches!(generate(&FamilySpec::pure_set(), &[1 << 20]), Err(FamilyError::TooLarge(_))));
    let orth = FamilySpec::new(FamilyKind::OrthogonalSpace, &[("q", 2), ("j", 1), ("sign", 1)]).unwrap();
    assert!(matches!(generate(&orth, &[1]), Err(FamilyError::BadParameter { .. })));
}

#[test]
fn monoid_divisibility_counts() {
    for p in [2u64, 3] {
        let spec = FamilySpec::monoid(p).unwrap();
        for n in 1..=4u32 {
            let m = generate(&spec, &[n as u64]).unwrap();
            for i in 0..=n {
                let a = (p.pow(i) % p.pow(n)) as Element;
                assert_eq!(count(&m, "phi(x; y) := exists z. x = z * y", &[a]), p.pow(n - i), "p={p} n={n} i={i}");
            }
        }
    }
}

#[test]
fn scalar_classes_in_pgroup_powers() {
    // a ~ b iff a = r b for a nonzero scalar r: every nonzero a with pa = 0
    // has exactly p - 1 associates.
    for p in [2u64, 3] {
        let m = generate(&FamilySpec::pgroup_power(p).unwrap(), &[2]).unwrap();
        let f = m.signature().function("+").unwrap();
        let times = |r: u64, a: Element| (1..r).fold(a, |acc, _| m.apply(f, &[acc, a]));
        let n = m.total_size() as Element;
        for a in 0..n {
            if a == 0 || times(p, a) != 0 {
                continue;
            }
            let mut class: Vec<Element> = (1..p).map(|r| times(r, a)).collect();
            class.sort_unstable();
            class.dedup();
            assert_eq!(class.len() as u64, p - 1);
        }
    }
}

#[test]
fn projective_lines() {
    let spec = FamilySpec::new(FamilyKind::ProjectiveSpace, &[("q", 2)]).unwrap();
    let m = generate(&spec, &[3]).unwrap();
    // Fano plane: 7 lines of 3 points.
    assert_eq!(count(&m, "l(x; a, b) := L(a, b, x)", &[0, 1]), 3);
    assert_eq!(count(&m, "l(a, b, c;) := L(a, b, c) & a != b & b != c & a != c", &[]), 42);
    assert_eq!(u64::try_from(automorphisms(&m).order()).unwrap(), 168);
}

#[test]
fn geometric_forms() {
    let spec = FamilySpec::new(FamilyKind::OrthogonalSpace, &[("q", 2), ("j", 1), ("sign", 0)]).unwrap();
    let m = generate(&spec, &[1]).unwrap();
    assert_eq!(count(&m, "z(x;) := Q0(x)", &[]), 4);
    let spec = FamilySpec::new(FamilyKind::SymplecticSpace, &[("q", 3)]).unwrap();
    let m = generate(&spec, &[2]).unwrap();
    assert_eq!(count(&m, "z(x;) := B0(x, x)", &[]), 9);
    let spec = FamilySpec::new(FamilyKind::PolarPair, &[("q", 2)]).unwrap();
    let m = generate(&spec, &[2]).unwrap();
    assert_eq!(count(&m, "z(w:W; v:V) := B1(v, w)", &[1]), 2);
    let spec = FamilySpec::new(FamilyKind::VectorSpace, &[("q", 3)]).unwrap();
    let m = generate(&spec, &[2]).unwrap();
    assert_eq!(count(&m, "z(x;) := s2(x) + x = 0", &[]), 9);
}

#[test]
fn chains_embed() {
    let nested = FamilySpec::nested_equivalence(3).unwrap();
    let c = chain(&nested, &[vec![1, 1, 1], vec![2, 2, 2], vec![3, 3, 3]]).unwrap();
    assert_eq!(c.len(), 3);
    let pg = chain(&FamilySpec::pgroup_power(2).unwrap(), &[vec![1], vec![2], vec![3]]).unwrap();
    let orders: Vec<usize> = pg.stages.iter().map(FiniteStructure::total_size).collect();
    assert_eq!(orders, vec![4, 16, 64]);
    let specs: Vec<(FamilySpec, Vec<Vec<u64>>)> = vec![
        (FamilySpec::pure_set(), vec![vec![1], vec![2], vec![3]]),
        (FamilySpec::linear_order(), vec![vec![2], vec![5]]),
        (FamilySpec::new(FamilyKind::CyclicGroup, &[]).unwrap(), vec![vec![3], vec![6], vec![12]]),
        (FamilySpec::new(FamilyKind::CyclicDirectSum, &[("k", 2)]).unwrap(), vec![vec![2, 3], vec![4, 3]]),
        (FamilySpec::new(FamilyKind::Homocyclic, &[("p", 2)]).unwrap(), vec![vec![1, 1], vec![2, 2]]),
        (FamilySpec::new(FamilyKind::VectorSpace, &[("q", 3)]).unwrap(), vec![vec![1], vec![2]]),
        (FamilySpec::new(FamilyKind::ProjectiveSpace, &[("q", 2)]).unwrap(), vec![vec![2], vec![3], vec![4]]),
        (FamilySpec::new(FamilyKind::PolarPair, &[("q", 2)]).unwrap(), vec![vec![1], vec![2]]),
        (FamilySpec::new(FamilyKind::SymplecticSpace, &[("q", 2)]).unwrap(), vec![vec![2], vec![4]]),
        (FamilySpec::new(FamilyKind::OrthogonalSpace, &[("q", 3), ("j", 2), ("sign", 1)]).unwrap(), vec![vec![0], vec![1]]),
        (nested, vec![vec![1, 2, 1], vec![2, 2, 3]]),
    ];
    for (spec, indices) in specs {
        let c = chain(&spec, &indices).unwrap();
        for (i, e) in c.embeddings.iter().enumerate() {
            assert!(e.is_substructure_map(&c.stages[i], &c.stages[i + 1]), "{:?} {i}", spec.kind);
        }
    }
}

#[test]
fn chain_errors() {
    assert!(matches!(chain(&FamilySpec::pure_set(), &[vec![3], vec![2]]), Err(FamilyError::NotMonotone(..))));
    assert!(matches!(chain(&FamilySpec::pure_set(), &[vec![3], vec![3]]), Err(FamilyError::NotMonotone(..))));
    let cyc = FamilySpec::new(FamilyKind::CyclicGroup, &[]).unwrap();
    assert!(matches!(chain(&cyc, &[vec![2], vec![3]]), Err(FamilyError::NotMonotone(..))));
    assert!(matches!(chain(&FamilySpec::monoid(2).unwrap(), &[vec![1], vec![2]]), Err(FamilyError::NoChain(_))));
}

#[test]
fn designated_chains_are_homogeneous() {
    let nested = chain(&FamilySpec::nested_equivalence(3).unwrap(), &[vec![1, 1, 1], vec![2, 2, 2], vec![3, 3, 3]]).unwrap();
    let pg = chain(&FamilySpec::pgroup_power(2).unwrap(), &[vec![1], vec![2], vec![3]]).unwrap();
    for c in [nested, pg] {
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                let image = c.embedding(i, j).maps;
                assert!(is_homogeneous_substructure(&c.stages[j], &image).unwrap().holds, "{i} in {j}");
            }
        }
    }
}

#[test]
fn eventual_truth() {
    let sets = chain(&FamilySpec::pure_set(), &(1..=6).map(|n| vec![n]).collect::<Vec<_>>()).unwrap();
    let sig = sets.stages[0].signature().clone();
    let chi = parse_formula("chi(; c) := exists y. y != c", &sig).unwrap();
    let r = eventual_truth_check(&sets, &chi, &[(0, 0)]).unwrap();
    assert_eq!((r.stabilized, r.q, r.value), (true, 1, true));
    let never = parse_formula("chi(; c) := c != c", &sig).unwrap();
    let r = eventual_truth_check(&sets, &never, &[(0, 0)]).unwrap();
    assert_eq!((r.stabilized, r.q, r.value), (true, 0, false));
    assert_eq!(eventual_truth_check(&sets, &chi, &[(0, 1)]), Err(FamilyError::NotEmbeddable));

    let spec = FamilySpec::nested_equivalence(3).unwrap();
    let nested = chain(&spec, &(1..=4).map(|i| vec![i, i, i]).collect::<Vec<_>>()).unwrap();
    let chi = parse_formula("chi(; c) := exists y. I1(y, c) & !I2(y, c)", nested.stages[0].signature()).unwrap();
    let r = eventual_truth_check(&nested, &chi, &[(0, 0)]).unwrap();
    assert_eq!(r.values, vec![false, true, true, true]);
    assert_eq!((r.stabilized, r.q, r.value), (true, 1, true));
}

#[test]
fn index_grids() {
    let spec = FamilySpec::nested_equivalence(2).unwrap().with_range("n1", 1, 3).unwrap().with_range("n2", 2, 3).unwrap();
    assert_eq!(index_grid(&spec, 10).len(), 6);
    assert_eq!(index_grid(&spec, 1), vec![vec![1, 2]]);
    let sym = FamilySpec::new(FamilyKind::SymplecticSpace, &[("q", 2)]).unwrap().with_range("n", 2, 6).unwrap();
    assert_eq!(index_grid(&sym, 10), vec![vec![2], vec![4], vec![6]]);
    assert_eq!(FamilyKind::from_name("pgrouppower"), Some(FamilyKind::PGroupPower));
}
