use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::signature::{Signature, SortId};
use super::LogicError;

/// Terms. Variables are de Bruijn *levels*: the declared free variables are
/// `0..n+m` (objects first, then parameters) and a binder opened when `c`
/// variables are in scope binds level `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Const(usize),
    App(usize, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    True,
    False,
    Eq(Term, Term),
    Rel(usize, Vec<Term>),
    Not(Box<Node>),
    /// At least two conjuncts; use [`Node::conj`] to build.
    And(Vec<Node>),
    /// At least two disjuncts; use [`Node::disj`] to build.
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(SortId, Box<Node>),
    Forall(SortId, Box<Node>),
    /// `exists!_count` over a block of variables, one level per sort.
    CountExactly { count: usize, sorts: Vec<SortId>, body: Box<Node> },
}

impl Term {
    pub fn var(level: usize) -> Term {
        Term::Var(level)
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn shifted(&self, from: usize, by: usize) -> Term {
        match self {
            Term::Var(v) if *v >= from => Term::Var(v + by),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.shifted(from, by)).collect()),
            t => t.clone(),
        }
    }

    fn renamed(&self, map: &dyn Fn(usize) -> usize) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(*v)),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.renamed(map)).collect()),
            t => t.clone(),
        }
    }
}

impl Node {
    pub fn not(node: Node) -> Node {
        Node::Not(Box::new(node))
    }

    /// Conjunction, collapsing the empty and singleton cases.
    pub fn conj(mut parts: Vec<Node>) -> Node {
        match parts.len() {
            0 => Node::True,
            1 => parts.pop().unwrap(),
            _ => Node::And(parts),
        }
    }

    /// Disjunction, collapsing the empty and singleton cases.
    pub fn disj(mut parts: Vec<Node>) -> Node {
        match parts.len() {
            0 => Node::False,
            1 => parts.pop().unwrap(),
            _ => Node::Or(parts),
        }
    }

    pub fn implies(a: Node, b: Node) -> Node {
        Node::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(sort: SortId, body: Node) -> Node {
        Node::Exists(sort, Box::new(body))
    }

    pub fn forall(sort: SortId, body: Node) -> Node {
        Node::Forall(sort, Box::new(body))
    }

    pub fn neq(a: Term, b: Term) -> Node {
        Node::not(Node::Eq(a, b))
    }

    /// Levels occurring free in the node when it sits under `depth` variables.
    pub fn free_levels(&self, depth: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_free(depth, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_free(&self, depth: usize, out: &mut Vec<usize>) {
        let push_term = |t: &Term, out: &mut Vec<usize>| {
            let mut vs = Vec::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|&v| v < depth));
        };
        match self {
            Node::True | Node::False => {}
            Node::Eq(a, b) => {
                push_term(a, out);
                push_term(b, out);
            }
            Node::Rel(_, args) => args.iter().for_each(|a| push_term(a, out)),
            Node::Not(n) => n.collect_free(depth, out),
            Node::And(ns) | Node::Or(ns) => ns.iter().for_each(|n| n.collect_free(depth, out)),
            Node::Implies(a, b) => {
                a.collect_free(depth, out);
                b.collect_free(depth, out);
            }
            Node::Exists(_, b) | Node::Forall(_, b) => {
                let mut inner = Vec::new();
                b.collect_free(depth + 1, &mut inner);
                out.extend(inner.into_iter().filter(|&v| v < depth));
            }
            Node::CountExactly { sorts, body, .. } => {
                let mut inner = Vec::new();
                body.collect_free(depth + sorts.len(), &mut inner);
                out.extend(inner.into_iter().filter(|&v| v < depth));
            }
        }
    }

    /// All variable levels used anywhere (free or bound).
    pub fn max_level(&self, depth: usize) -> usize {
        match self {
            Node::True | Node::False | Node::Eq(..) | Node::Rel(..) => depth,
            Node::Not(n) => n.max_level(depth),
            Node::And(ns) | Node::Or(ns) => ns.iter().map(|n| n.max_level(depth)).max().unwrap_or(depth),
            Node::Implies(a, b) => a.max_level(depth).max(b.max_level(depth)),
            Node::Exists(_, b) | Node::Forall(_, b) => b.max_level(depth + 1),
            Node::CountExactly { sorts, body, .. } => body.max_level(depth + sorts.len()),
        }
    }

    /// Insert `by` fresh levels at `from`: every variable `>= from` moves up.
    /// Used to place a formula under extra binders.
    pub fn shifted(&self, from: usize, by: usize) -> Node {
        self.map_terms(&|t| t.shifted(from, by))
    }

    /// Apply `map` to every variable level, free and bound alike.
    pub fn renamed(&self, map: &dyn Fn(usize) -> usize) -> Node {
        self.map_terms(&|t| t.renamed(map))
    }

    fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Node {
        match self {
            Node::True => Node::True,
            Node::False => Node::False,
            Node::Eq(a, b) => Node::Eq(f(a), f(b)),
            Node::Rel(r, args) => Node::Rel(*r, args.iter().map(f).collect()),
            Node::Not(n) => Node::not(n.map_terms(f)),
            Node::And(ns) => Node::And(ns.iter().map(|n| n.map_terms(f)).collect()),
            Node::Or(ns) => Node::Or(ns.iter().map(|n| n.map_terms(f)).collect()),
            Node::Implies(a, b) => Node::implies(a.map_terms(f), b.map_terms(f)),
            Node::Exists(s, b) => Node::exists(*s, b.map_terms(f)),
            Node::Forall(s, b) => Node::forall(*s, b.map_terms(f)),
            Node::CountExactly { count, sorts, body } => {
                Node::CountExactly { count: *count, sorts: sorts.clone(), body: Box::new(body.map_terms(f)) }
            }
        }
    }

    /// Number of AST nodes (terms not counted).
    pub fn size(&self) -> usize {
        1 + match self {
            Node::Not(n) | Node::Exists(_, n) | Node::Forall(_, n) => n.size(),
            Node::And(ns) | Node::Or(ns) => ns.iter().map(Node::size).sum(),
            Node::Implies(a, b) => a.size() + b.size(),
            Node::CountExactly { body, .. } => body.size(),
            _ => 0,
        }
    }
}

/// A declared free variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub sort: SortId,
}

impl VarDecl {
    pub fn new(name: &str, sort: SortId) -> Self {
        VarDecl { name: name.into(), sort }
    }
}

/// A formula `phi(x; y)` with its object/parameter split.
///
/// Object variables occupy levels `0..n`, parameters `n..n+m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    pub name: String,
    pub objects: Vec<VarDecl>,
    pub params: Vec<VarDecl>,
    pub body: Node,
}

impl Formula {
    pub fn new(name: &str, objects: Vec<VarDecl>, params: Vec<VarDecl>, body: Node) -> Self {
        Formula { name: name.into(), objects, params, body }
    }

    /// A parameter-only formula `psi(;y)`.
    pub fn over_params(name: &str, params: Vec<VarDecl>, body: Node) -> Self {
        Self::new(name, Vec::new(), params, body)
    }

    pub fn free_count(&self) -> usize {
        self.objects.len() + self.params.len()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_count() == 0
    }

    pub fn object_sorts(&self) -> Vec<SortId> {
        self.objects.iter().map(|v| v.sort).collect()
    }

    pub fn param_sorts(&self) -> Vec<SortId> {
        self.params.iter().map(|v| v.sort).collect()
    }

    /// All declared variables in level order.
    pub fn declared(&self) -> impl Iterator<Item = &VarDecl> {
        self.objects.iter().chain(self.params.iter())
    }

    /// Re-split the same free variables so that the first `objects` of them
    /// are object variables. Levels do not change.
    pub fn with_split(&self, objects: usize) -> Result<Formula, LogicError> {
        let all: Vec<VarDecl> = self.declared().cloned().collect();
        if objects > all.len() {
            return Err(LogicError::BadSplit { requested: objects, available: all.len() });
        }
        let (o, p) = all.split_at(objects);
        Ok(Formula { name: self.name.clone(), objects: o.to_vec(), params: p.to_vec(), body: self.body.clone() })
    }

    /// Move the last object variable to the front of the parameters:
    /// `phi(x1..xn; y)` becomes `phi(x1..x(n-1); xn, y)`.
    pub fn last_object_as_param(&self) -> Result<Formula, LogicError> {
        if self.objects.len() < 2 {
            return Err(LogicError::BadSplit { requested: self.objects.len().saturating_sub(1), available: self.objects.len() });
        }
        self.with_split(self.objects.len() - 1)
    }

    /// Rebuild against another signature, mapping symbols and sorts by name.
    pub fn translate(&self, from: &Signature, to: &Signature) -> Result<Formula, LogicError> {
        let sort = |s: SortId| {
            to.sort(from.sort_name(s)).ok_or_else(|| LogicError::UnknownSort(from.sort_name(s).into()))
        };
        fn term(t: &Term, from: &Signature, to: &Signature) -> Result<Term, LogicError> {
            Ok(match t {
                Term::Var(v) => Term::Var(*v),
                Term::Const(c) => {
                    let name = &from.constants()[*c].name;
                    Term::Const(to.constant(name).ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?)
                }
                Term::App(f, args) => {
                    let name = &from.functions()[*f].name;
                    let g = to.function(name).ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?;
                    Term::App(g, args.iter().map(|a| term(a, from, to)).collect::<Result<_, _>>()?)
                }
            })
        }
        fn node(
            n: &Node,
            from: &Signature,
            to: &Signature,
            sort: &dyn Fn(SortId) -> Result<SortId, LogicError>,
        ) -> Result<Node, LogicError> {
            let rec = |m: &Node| node(m, from, to, sort);
            Ok(match n {
                Node::True => Node::True,
                Node::False => Node::False,
                Node::Eq(a, b) => Node::Eq(term(a, from, to)?, term(b, from, to)?),
                Node::Rel(r, args) => {
                    let name = &from.relations()[*r].name;
                    let s = to.relation(name).ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?;
                    Node::Rel(s, args.iter().map(|a| term(a, from, to)).collect::<Result<_, _>>()?)
                }
                Node::Not(m) => Node::not(rec(m)?),
                Node::And(ms) => Node::And(ms.iter().map(rec).collect::<Result<_, _>>()?),
                Node::Or(ms) => Node::Or(ms.iter().map(rec).collect::<Result<_, _>>()?),
                Node::Implies(a, b) => Node::implies(rec(a)?, rec(b)?),
                Node::Exists(s, b) => Node::exists(sort(*s)?, rec(b)?),
                Node::Forall(s, b) => Node::forall(sort(*s)?, rec(b)?),
                Node::CountExactly { count, sorts, body } => Node::CountExactly {
                    count: *count,
                    sorts: sorts.iter().map(|&s| sort(s)).collect::<Result<_, _>>()?,
                    body: alloc::boxed::Box::new(rec(body)?),
                },
            })
        }
        let decl = |v: &VarDecl| Ok::<_, LogicError>(VarDecl { name: v.name.clone(), sort: sort(v.sort)? });
        Ok(Formula {
            name: self.name.clone(),
            objects: self.objects.iter().map(decl).collect::<Result<_, _>>()?,
            params: self.params.iter().map(decl).collect::<Result<_, _>>()?,
            body: node(&self.body, from, to, &sort)?,
        })
    }

    /// Conjoin a parameter-only formula over the same parameters. `other`
    /// must have no objects and the same parameter sorts as `self`.
    pub fn and_params(&self, other: &Formula) -> Result<Formula, LogicError> {
        if !other.objects.is_empty() || other.param_sorts() != self.param_sorts() {
            return Err(LogicError::BadSplit { requested: other.params.len(), available: self.params.len() });
        }
        let n = self.objects.len();
        let shifted = other.body.renamed(&|v| v + n);
        Ok(Formula {
            name: self.name.clone(),
            objects: self.objects.clone(),
            params: self.params.clone(),
            body: Node::conj(vec![self.body.clone(), shifted]),
        })
    }
}
