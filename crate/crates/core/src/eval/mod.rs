//! Satisfaction and exact solution counting.
//!
//! Formulas are compiled into an arena where every quantifier node knows
//! which outer levels it reads. A quantifier that ignores some of the
//! enclosing variables is memoised on the values of the ones it does read,
//! which is what makes counting over large parameter grids affordable.

mod types;

pub use types::{ranked_type, ranked_type_formula, RankedType, TypeCache, TypeCode, TypeInterner};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
use num_bigint::BigUint;

use crate::logic::{Formula, Node, SortId, Term};
use crate::structures::{Element, FiniteStructure};
use crate::util::Odometer;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("value {element} for variable `{name}` is not an element of sort {sort}")]
    OutOfRange { name: String, sort: SortId, element: Element },
    #[error("formula does not fit the structure's signature: {0}")]
    Signature(&'static str),
}

/// `|phi(M^n, a)|`, exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionCount {
    pub value: BigUint,
}

impl SolutionCount {
    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.value).ok()
    }
}

impl From<u64> for SolutionCount {
    fn from(v: u64) -> Self {
        SolutionCount { value: BigUint::from(v) }
    }
}

impl fmt::Display for SolutionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Clone, Debug)]
enum CTerm {
    Var(usize),
    Elem(Element),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Quant {
    Exists,
    Forall,
}

#[derive(Clone, Debug)]
enum CNode {
    True,
    False,
    Eq(CTerm, CTerm),
    Rel(usize, Vec<CTerm>),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Implies(usize, usize),
    Quant { kind: Quant, sort: SortId, body: usize, depth: usize, reads: Vec<usize>, memo: bool },
    Count { count: usize, sorts: Vec<SortId>, body: usize, depth: usize, reads: Vec<usize>, memo: bool },
}

/// Memo entries above this are dropped wholesale.
const MEMO_LIMIT: usize = 1 << 22;

/// A formula compiled against one structure. Reusable across parameter
/// tuples; the memo persists between calls.
pub struct Evaluator<'m> {
    m: &'m FiniteStructure,
    nodes: Vec<CNode>,
    root: usize,
    object_sorts: Vec<SortId>,
    param_sorts: Vec<SortId>,
    names: Vec<String>,
    memo: HashMap<Vec<u32>, bool>,
    key: Vec<u32>,
}

impl<'m> Evaluator<'m> {
    pub fn new(m: &'m FiniteStructure, phi: &Formula) -> Result<Self, EvalError> {
        let sig = m.signature();
        let mut ev = Evaluator {
            m,
            nodes: Vec::new(),
            root: 0,
            object_sorts: phi.object_sorts(),
            param_sorts: phi.param_sorts(),
            names: phi.declared().map(|v| v.name.clone()).collect(),
            memo: HashMap::new(),
            key: Vec::new(),
        };
        if phi.declared().any(|v| v.sort >= sig.sorts().len()) {
            return Err(EvalError::Signature("unknown sort"));
        }
        ev.root = ev.compile(&phi.body, phi.free_count())?;
        Ok(ev)
    }

    pub fn structure(&self) -> &'m FiniteStructure {
        self.m
    }

    fn term(&self, t: &Term, depth: usize) -> Result<CTerm, EvalError> {
        let sig = self.m.signature();
        Ok(match t {
            Term::Var(v) if *v < depth => CTerm::Var(*v),
            Term::Var(_) => return Err(EvalError::Signature("variable out of scope")),
            Term::Const(c) if *c < sig.constants().len() => CTerm::Elem(self.m.constant(*c)),
            Term::Const(_) => return Err(EvalError::Signature("unknown constant")),
            Term::App(f, args) => {
                if *f >= sig.functions().len() || sig.functions()[*f].arity() != args.len() {
                    return Err(EvalError::Signature("unknown function or wrong arity"));
                }
                CTerm::App(*f, args.iter().map(|a| self.term(a, depth)).collect::<Result<_, _>>()?)
            }
        })
    }

    fn push(&mut self, n: CNode) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn compile(&mut self, n: &Node, depth: usize) -> Result<usize, EvalError> {
        let sig = self.m.signature();
        let node = match n {
            Node::True => CNode::True,
            Node::False => CNode::False,
            Node::Eq(a, b) => CNode::Eq(self.term(a, depth)?, self.term(b, depth)?),
            Node::Rel(r, args) => {
                if *r >= sig.relations().len() || sig.relations()[*r].arity() != args.len() {
                    return Err(EvalError::Signature("unknown relation or wrong arity"));
                }
                CNode::Rel(*r, args.iter().map(|a| self.term(a, depth)).collect::<Result<_, _>>()?)
            }
            Node::Not(m) => CNode::Not(self.compile(m, depth)?),
            Node::And(ms) => CNode::And(ms.iter().map(|m| self.compile(m, depth)).collect::<Result<_, _>>()?),
            Node::Or(ms) => CNode::Or(ms.iter().map(|m| self.compile(m, depth)).collect::<Result<_, _>>()?),
            Node::Implies(a, b) => CNode::Implies(self.compile(a, depth)?, self.compile(b, depth)?),
            Node::Exists(s, b) | Node::Forall(s, b) => {
                if *s >= sig.sorts().len() {
                    return Err(EvalError::Signature("unknown sort"));
                }
                let body = self.compile(b, depth + 1)?;
                let reads = n.free_levels(depth);
                let kind = if matches!(n, Node::Exists(..)) { Quant::Exists } else { Quant::Forall };
                CNode::Quant { kind, sort: *s, body, depth, memo: reads.len() < depth, reads }
            }
            Node::CountExactly { count, sorts, body } => {
                if sorts.iter().any(|&s| s >= sig.sorts().len()) {
                    return Err(EvalError::Signature("unknown sort"));
                }
                let b = self.compile(body, depth + sorts.len())?;
                let reads = n.free_levels(depth);
                CNode::Count { count: *count, sorts: sorts.clone(), body: b, depth, memo: reads.len() < depth, reads }
            }
        };
        Ok(self.push(node))
    }

    fn check(&self, values: &[Element], sorts: &[SortId], first: usize) -> Result<(), EvalError> {
        if values.len() != sorts.len() {
            return Err(EvalError::Arity { expected: sorts.len(), found: values.len() });
        }
        for (i, (&e, &s)) in values.iter().zip(sorts).enumerate() {
            if e as usize >= self.m.size(s) {
                return Err(EvalError::OutOfRange { name: self.names[first + i].clone(), sort: s, element: e });
            }
        }
        Ok(())
    }

    /// Truth under an assignment of all free variables, objects first.
    pub fn satisfies(&mut self, assignment: &[Element]) -> Result<bool, EvalError> {
        let sorts: Vec<SortId> = self.object_sorts.iter().chain(&self.param_sorts).copied().collect();
        self.check(assignment, &sorts, 0)?;
        let mut env = assignment.to_vec();
        Ok(self.eval(self.root, &mut env))
    }

    fn for_each_solution(&mut self, params: &[Element], mut visit: impl FnMut(&[Element])) -> Result<(), EvalError> {
        let n = self.object_sorts.len();
        self.check(params, &self.param_sorts.clone(), n)?;
        let mut env: Vec<Element> = vec![0; n];
        env.extend_from_slice(params);
        let mut odo = Odometer::new(self.object_sorts.iter().map(|&s| self.m.size(s)).collect());
        while let Some(t) = odo.next_tuple() {
            env[..n].copy_from_slice(t);
            if self.eval(self.root, &mut env) {
                visit(t);
            }
        }
        Ok(())
    }

    pub fn count(&mut self, params: &[Element]) -> Result<SolutionCount, EvalError> {
        let mut c: u64 = 0;
        self.for_each_solution(params, |_| c += 1)?;
        Ok(SolutionCount::from(c))
    }

    pub fn solutions(&mut self, params: &[Element]) -> Result<Vec<Vec<Element>>, EvalError> {
        let mut out = Vec::new();
        self.for_each_solution(params, |t| out.push(t.to_vec()))?;
        Ok(out)
    }

    fn value(&self, t: &CTerm, env: &[Element]) -> Element {
        match t {
            CTerm::Var(v) => env[*v],
            CTerm::Elem(e) => *e,
            CTerm::App(f, args) => {
                let mut buf = [0 as Element; 8];
                if args.len() <= 8 {
                    for (slot, a) in buf.iter_mut().zip(args) {
                        *slot = self.value(a, env);
                    }
                    self.m.apply(*f, &buf[..args.len()])
                } else {
                    let vals: Vec<Element> = args.iter().map(|a| self.value(a, env)).collect();
                    self.m.apply(*f, &vals)
                }
            }
        }
    }

    fn rel(&self, r: usize, args: &[CTerm], env: &[Element]) -> bool {
        let mut buf = [0 as Element; 8];
        if args.len() <= 8 {
            for (slot, a) in buf.iter_mut().zip(args) {
                *slot = self.value(a, env);
            }
            self.m.holds(r, &buf[..args.len()])
        } else {
            let vals: Vec<Element> = args.iter().map(|a| self.value(a, env)).collect();
            self.m.holds(r, &vals)
        }
    }

    fn child(&self, id: usize, i: usize) -> usize {
        match &self.nodes[id] {
            CNode::And(ms) | CNode::Or(ms) => ms[i],
            _ => unreachable!(),
        }
    }

    fn eval(&mut self, id: usize, env: &mut Vec<Element>) -> bool {
        match &self.nodes[id] {
            CNode::True => true,
            CNode::False => false,
            CNode::Eq(a, b) => self.value(a, env) == self.value(b, env),
            CNode::Rel(r, args) => self.rel(*r, args, env),
            CNode::Not(m) => {
                let m = *m;
                !self.eval(m, env)
            }
            CNode::And(ms) => {
                let len = ms.len();
                (0..len).all(|i| {
                    let c = self.child(id, i);
                    self.eval(c, env)
                })
            }
            CNode::Or(ms) => {
                let len = ms.len();
                (0..len).any(|i| {
                    let c = self.child(id, i);
                    self.eval(c, env)
                })
            }
            CNode::Implies(a, b) => {
                let (a, b) = (*a, *b);
                !self.eval(a, env) || self.eval(b, env)
            }
            CNode::Quant { memo, .. } | CNode::Count { memo, .. } => {
                if !*memo {
                    return self.eval_quantifier(id, env);
                }
                let mut key = core::mem::take(&mut self.key);
                key.clear();
                key.push(id as u32);
                if let CNode::Quant { reads, .. } | CNode::Count { reads, .. } = &self.nodes[id] {
                    key.extend(reads.iter().map(|&l| env[l]));
                }
                if let Some(&v) = self.memo.get(key.as_slice()) {
                    self.key = key;
                    return v;
                }
                let v = self.eval_quantifier(id, env);
                if self.memo.len() >= MEMO_LIMIT {
                    self.memo.clear();
                }
                self.memo.insert(key.clone(), v);
                self.key = key;
                v
            }
        }
    }

    fn eval_quantifier(&mut self, id: usize, env: &mut Vec<Element>) -> bool {
        match &self.nodes[id] {
            &CNode::Quant { kind, sort, body, depth, .. } => {
                if let Some(v) = self.bitset_shortcut(kind, body, depth, env) {
                    return v;
                }
                let n = self.m.size(sort) as Element;
                env.truncate(depth);
                env.push(0);
                let target = kind == Quant::Exists;
                for e in 0..n {
                    env[depth] = e;
                    if self.eval(body, env) == target {
                        env.truncate(depth);
                        return target;
                    }
                }
                env.truncate(depth);
                !target
            }
            CNode::Count { count, sorts, body, depth, .. } => {
                let (count, body, depth, sorts) = (*count, *body, *depth, sorts.clone());
                env.truncate(depth);
                env.extend(sorts.iter().map(|_| 0));
                let mut odo = Odometer::new(sorts.iter().map(|&s| self.m.size(s)).collect());
                let mut seen = 0;
                while let Some(t) = odo.next_tuple() {
                    env[depth..].copy_from_slice(t);
                    if self.eval(body, env) {
                        seen += 1;
                        if seen > count {
                            break;
                        }
                    }
                }
                env.truncate(depth);
                seen == count
            }
            _ => unreachable!("not a quantifier"),
        }
    }

    /// `exists z. R(x, z)` and friends read straight off the relation's bitset.
    fn bitset_shortcut(&self, kind: Quant, body: usize, depth: usize, env: &[Element]) -> Option<bool> {
        let CNode::Rel(r, args) = &self.nodes[body] else { return None };
        if args.len() != 2 {
            return None;
        }
        let table = self.m.relation(*r);
        let bits = table.dense()?;
        let (n1, n2) = (table.radices()[0], table.radices()[1]);
        let fixed = |t: &CTerm| match t {
            CTerm::Var(v) if *v < depth => Some(env[*v] as usize),
            CTerm::Elem(e) => Some(*e as usize),
            _ => None,
        };
        let bound = |t: &CTerm| matches!(t, CTerm::Var(v) if *v == depth);
        let hits = if bound(&args[1]) {
            let x = fixed(&args[0])?;
            let start = x * n2;
            match kind {
                Quant::Exists => bits.any_in(start, start + n2),
                Quant::Forall => bits.ones_in(start, start + n2).count() == n2,
            }
        } else if bound(&args[0]) {
            let y = fixed(&args[1])?;
            match kind {
                Quant::Exists => (0..n1).any(|i| bits.get(i * n2 + y)),
                Quant::Forall => (0..n1).all(|i| bits.get(i * n2 + y)),
            }
        } else {
            return None;
        };
        Some(hits)
    }
}

/// Truth of `phi` under `assignment` (all free variables, objects first).
pub fn satisfies(m: &FiniteStructure, phi: &Formula, assignment: &[Element]) -> Result<bool, EvalError> {
    Evaluator::new(m, phi)?.satisfies(assignment)
}

/// `|{b in M^n : M |= phi(b, params)}|`.
pub fn solution_count(m: &FiniteStructure, phi: &Formula, params: &[Element]) -> Result<SolutionCount, EvalError> {
    Evaluator::new(m, phi)?.count(params)
}

/// The solutions themselves, in increasing lexicographic order of ids.
pub fn solution_set(m: &FiniteStructure, phi: &Formula, params: &[Element]) -> Result<Vec<Vec<Element>>, EvalError> {
    Evaluator::new(m, phi)?.solutions(params)
}

#[cfg(test)]
mod tests;
