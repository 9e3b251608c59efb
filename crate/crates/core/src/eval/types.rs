//! Bounded-rank Hintikka codes.
//!
//! The rank-0 code of a tuple is the isomorphism type of the substructure it
//! generates (with the tuple and the constants marked), written out in the
//! order in which a fixed closure procedure discovers the elements. The
//! rank-`r+1` code pairs the rank-0 code with the *set* of rank-`r` codes of
//! all one-element extensions. Codes are interned, so equal codes get equal
//! ids across every structure that shares an interner.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::logic::{Formula, Node, Signature, SortId, Term, VarDecl};
use crate::structures::{Element, FiniteStructure};
use crate::util::Odometer;

/// How a generated element was first reached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Position(u32),
    Const(u32),
    App(u32, Vec<u32>),
}

/// Quantifier-free type of a tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomicCode {
    /// Sort of each tuple position.
    pub sorts: Vec<SortId>,
    /// Index into `universe` of each tuple position, then of each constant.
    pub marks: Vec<u32>,
    /// The generated substructure, in discovery order.
    pub universe: Vec<(SortId, Origin)>,
    /// Per relation, the tuples (over universe indices) that hold.
    pub relations: Vec<Vec<Vec<u32>>>,
    /// Per function, its values on universe tuples in odometer order of the
    /// per-sort index lists.
    pub functions: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeCode {
    Atomic(AtomicCode),
    /// Rank-0 id plus the sorted, deduplicated child ids.
    Extension { base: u32, children: Vec<u32> },
}

/// A ranked type: an interned code id and its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankedType {
    pub rank: usize,
    pub id: u32,
}

/// Hash-consing table for codes. Share one per run to compare types across
/// structures in O(1).
#[derive(Clone, Debug, Default)]
pub struct TypeInterner {
    map: HashMap<TypeCode, u32>,
    codes: Vec<(TypeCode, usize, Vec<SortId>)>,
}

impl TypeInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    fn intern(&mut self, code: TypeCode, rank: usize, sorts: Vec<SortId>) -> u32 {
        if let Some(&id) = self.map.get(&code) {
            return id;
        }
        let id = self.codes.len() as u32;
        self.map.insert(code.clone(), id);
        self.codes.push((code, rank, sorts));
        id
    }

    pub fn code(&self, id: u32) -> &TypeCode {
        &self.codes[id as usize].0
    }

    pub fn rank(&self, id: u32) -> usize {
        self.codes[id as usize].1
    }

    /// Sorts of the tuple the code describes.
    pub fn sorts(&self, id: u32) -> &[SortId] {
        &self.codes[id as usize].2
    }
}

/// Per-structure memo of ranked codes.
pub struct TypeCache<'m> {
    m: &'m FiniteStructure,
    memo: HashMap<(usize, Vec<(SortId, Element)>), u32>,
}

impl<'m> TypeCache<'m> {
    pub fn new(m: &'m FiniteStructure) -> Self {
        TypeCache { m, memo: HashMap::new() }
    }

    pub fn structure(&self) -> &'m FiniteStructure {
        self.m
    }

    pub fn ranked_type(&mut self, interner: &mut TypeInterner, tuple: &[(SortId, Element)], rank: usize) -> RankedType {
        RankedType { rank, id: self.code_id(interner, tuple, rank) }
    }

    fn code_id(&mut self, interner: &mut TypeInterner, tuple: &[(SortId, Element)], rank: usize) -> u32 {
        let key = (rank, tuple.to_vec());
        if let Some(&id) = self.memo.get(&key) {
            return id;
        }
        let sorts: Vec<SortId> = tuple.iter().map(|&(s, _)| s).collect();
        let id = if rank == 0 {
            interner.intern(TypeCode::Atomic(atomic_code(self.m, tuple)), 0, sorts)
        } else {
            let base = self.code_id(interner, tuple, 0);
            let mut ext = tuple.to_vec();
            ext.push((0, 0));
            let mut children = Vec::new();
            for s in 0..self.m.sizes().len() {
                for e in 0..self.m.size(s) as Element {
                    ext[tuple.len()] = (s, e);
                    children.push(self.code_id(interner, &ext, rank - 1));
                }
            }
            children.sort_unstable();
            children.dedup();
            interner.intern(TypeCode::Extension { base, children }, rank, sorts)
        };
        self.memo.insert(key, id);
        id
    }
}

/// Rank-`rank` code of `tuple` (sort, element pairs) in `m`.
pub fn ranked_type(
    m: &FiniteStructure,
    tuple: &[(SortId, Element)],
    rank: usize,
    interner: &mut TypeInterner,
) -> RankedType {
    TypeCache::new(m).ranked_type(interner, tuple, rank)
}

fn atomic_code(m: &FiniteStructure, tuple: &[(SortId, Element)]) -> AtomicCode {
    let sig = m.signature();
    let mut universe: Vec<(SortId, Origin)> = Vec::new();
    let mut elems: Vec<(SortId, Element)> = Vec::new();
    let mut index: HashMap<(SortId, Element), u32> = HashMap::new();
    let mut insert = |x: (SortId, Element), origin: Origin, universe: &mut Vec<(SortId, Origin)>, elems: &mut Vec<_>| {
        *index.entry(x).or_insert_with(|| {
            universe.push((x.0, origin));
            elems.push(x);
            (elems.len() - 1) as u32
        })
    };
    let mut marks = Vec::new();
    for (i, &x) in tuple.iter().enumerate() {
        marks.push(insert(x, Origin::Position(i as u32), &mut universe, &mut elems));
    }
    for (c, sym) in sig.constants().iter().enumerate() {
        marks.push(insert((sym.sort, m.constant(c)), Origin::Const(c as u32), &mut universe, &mut elems));
    }
    let by_sort = |elems: &[(SortId, Element)], s: SortId| -> Vec<u32> {
        (0..elems.len() as u32).filter(|&i| elems[i as usize].0 == s).collect()
    };
    // Close under the functions, one full pass at a time.
    loop {
        let before = elems.len();
        for (f, sym) in sig.functions().iter().enumerate() {
            let lists: Vec<Vec<u32>> = sym.args.iter().map(|&s| by_sort(&elems, s)).collect();
            let mut odo = Odometer::new(lists.iter().map(Vec::len).collect());
            let mut args = vec![0; sym.args.len()];
            while let Some(t) = odo.next_tuple() {
                let idx: Vec<u32> = t.iter().zip(&lists).map(|(&i, l)| l[i as usize]).collect();
                for (a, &j) in args.iter_mut().zip(&idx) {
                    *a = elems[j as usize].1;
                }
                let v = (sym.result, m.apply(f, &args));
                insert(v, Origin::App(f as u32, idx), &mut universe, &mut elems);
            }
        }
        if elems.len() == before {
            break;
        }
    }
    let mut functions = Vec::with_capacity(sig.functions().len());
    for (f, sym) in sig.functions().iter().enumerate() {
        let lists: Vec<Vec<u32>> = sym.args.iter().map(|&s| by_sort(&elems, s)).collect();
        let mut odo = Odometer::new(lists.iter().map(Vec::len).collect());
        let mut args = vec![0; sym.args.len()];
        let mut values = Vec::new();
        while let Some(t) = odo.next_tuple() {
            for ((a, &i), l) in args.iter_mut().zip(t).zip(&lists) {
                *a = elems[l[i as usize] as usize].1;
            }
            values.push(index[&(sym.result, m.apply(f, &args))]);
        }
        functions.push(values);
    }
    let mut relations = Vec::with_capacity(sig.relations().len());
    for (r, sym) in sig.relations().iter().enumerate() {
        let lists: Vec<Vec<u32>> = sym.profile.iter().map(|&s| by_sort(&elems, s)).collect();
        let mut odo = Odometer::new(lists.iter().map(Vec::len).collect());
        let mut args = vec![0; sym.profile.len()];
        let mut held = Vec::new();
        while let Some(t) = odo.next_tuple() {
            let idx: Vec<u32> = t.iter().zip(&lists).map(|(&i, l)| l[i as usize]).collect();
            for (a, &j) in args.iter_mut().zip(&idx) {
                *a = elems[j as usize].1;
            }
            if m.holds(r, &args) {
                held.push(idx);
            }
        }
        relations.push(held);
    }
    AtomicCode { sorts: tuple.iter().map(|&(s, _)| s).collect(), marks, universe, relations, functions }
}

fn origin_term(code: &AtomicCode, j: u32) -> Term {
    match &code.universe[j as usize].1 {
        Origin::Position(i) => Term::Var(*i as usize),
        Origin::Const(c) => Term::Const(*c as usize),
        Origin::App(f, args) => Term::App(*f as usize, args.iter().map(|&a| origin_term(code, a)).collect()),
    }
}

fn atomic_formula(code: &AtomicCode, sig: &Signature) -> Node {
    let k = code.sorts.len();
    let mut parts = Vec::new();
    for (p, &j) in code.marks.iter().enumerate() {
        let own = if p < k { Origin::Position(p as u32) } else { Origin::Const((p - k) as u32) };
        if code.universe[j as usize].1 != own {
            let t = if p < k { Term::Var(p) } else { Term::Const(p - k) };
            parts.push(Node::Eq(t, origin_term(code, j)));
        }
    }
    let u = code.universe.len() as u32;
    for a in 0..u {
        for b in a + 1..u {
            if code.universe[a as usize].0 == code.universe[b as usize].0 {
                parts.push(Node::neq(origin_term(code, a), origin_term(code, b)));
            }
        }
    }
    let by_sort = |s: SortId| -> Vec<u32> { (0..u).filter(|&i| code.universe[i as usize].0 == s).collect() };
    for (f, sym) in sig.functions().iter().enumerate() {
        let lists: Vec<Vec<u32>> = sym.args.iter().map(|&s| by_sort(s)).collect();
        let mut odo = Odometer::new(lists.iter().map(Vec::len).collect());
        let mut n = 0;
        while let Some(t) = odo.next_tuple() {
            let idx: Vec<u32> = t.iter().zip(&lists).map(|(&i, l)| l[i as usize]).collect();
            let v = code.functions[f][n];
            n += 1;
            if code.universe[v as usize].1 == Origin::App(f as u32, idx.clone()) {
                continue;
            }
            let app = Term::App(f, idx.iter().map(|&a| origin_term(code, a)).collect());
            parts.push(Node::Eq(app, origin_term(code, v)));
        }
    }
    for (r, sym) in sig.relations().iter().enumerate() {
        let lists: Vec<Vec<u32>> = sym.profile.iter().map(|&s| by_sort(s)).collect();
        let mut odo = Odometer::new(lists.iter().map(Vec::len).collect());
        while let Some(t) = odo.next_tuple() {
            let idx: Vec<u32> = t.iter().zip(&lists).map(|(&i, l)| l[i as usize]).collect();
            let atom = Node::Rel(r, idx.iter().map(|&a| origin_term(code, a)).collect());
            let holds = code.relations[r].binary_search(&idx).is_ok();
            parts.push(if holds { atom } else { Node::not(atom) });
        }
    }
    if parts.is_empty() && k > 0 {
        // Keep the variables visibly in the formula.
        return Node::Eq(Term::Var(0), Term::Var(0));
    }
    Node::conj(parts)
}

fn hintikka(id: u32, interner: &TypeInterner, sig: &Signature) -> Node {
    match interner.code(id) {
        TypeCode::Atomic(code) => atomic_formula(code, sig),
        TypeCode::Extension { base, children } => {
            let k = interner.sorts(id).len();
            let mut parts = vec![hintikka(*base, interner, sig)];
            let child_sort = |c: &u32| interner.sorts(*c)[k];
            for c in children {
                parts.push(Node::exists(child_sort(c), hintikka(*c, interner, sig)));
            }
            for s in 0..sig.sorts().len() {
                let of_sort: Vec<Node> =
                    children.iter().filter(|c| child_sort(c) == s).map(|c| hintikka(*c, interner, sig)).collect();
                parts.push(Node::forall(s, Node::disj(of_sort)));
            }
            Node::conj(parts)
        }
    }
}

/// The Hintikka formula of a code: a parameter-only formula `type(; y1..yk)`
/// true of exactly the tuples with this code.
pub fn ranked_type_formula(t: RankedType, interner: &TypeInterner, sig: &Signature) -> Formula {
    let params = interner
        .sorts(t.id)
        .iter()
        .enumerate()
        .map(|(i, &s)| VarDecl::new(&format!("y{}", i + 1), s))
        .collect();
    Formula::over_params(&format!("type_r{}_{}", t.rank, t.id), params, hintikka(t.id, interner, sig))
}
