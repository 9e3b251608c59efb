use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::formula::{Formula, Node, Term, VarDecl};
use super::signature::{Signature, SortId, Symbol};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    /// Punctuation and operators, including `exists!`.
    Op(&'static str),
    Eof,
}

const OPS: [&str; 18] =
    [":=", "->", "!=", "<=", ">=", "(", ")", ";", ",", ".", ":", "!", "&", "|", "=", "<", ">", "~"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            let word = &text[start..i];
            if word == "exists" && bytes.get(i) == Some(&b'!') && bytes.get(i + 1) != Some(&b'=') {
                i += 1;
                out.push((Tok::Op("exists!"), start));
            } else {
                out.push((Tok::Ident(word.to_string()), start));
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse()
                .map_err(|_| LogicError::Syntax { pos: start, msg: "number too large".into() })?;
            out.push((Tok::Nat(n), start));
            continue;
        }
        for op in ["+", "*"].into_iter().chain(OPS) {
            if text[i..].starts_with(op) {
                out.push((Tok::Op(op), i));
                i += op.len();
                continue 'outer;
            }
        }
        return Err(LogicError::Syntax { pos: i, msg: format!("unexpected character `{}`", c as char) });
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

#[derive(Clone, Debug)]
struct RawVar {
    name: String,
    sort: Option<String>,
    pos: usize,
}

#[derive(Clone, Debug)]
enum RawTerm {
    Name(String, usize),
    App(String, Vec<RawTerm>, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum QKind {
    Exists,
    Forall,
}

#[derive(Clone, Debug)]
enum RawNode {
    True,
    False,
    Eq(RawTerm, RawTerm, usize),
    Rel(String, Vec<RawTerm>, usize),
    Not(Box<RawNode>),
    And(Vec<RawNode>),
    Or(Vec<RawNode>),
    Implies(Box<RawNode>, Box<RawNode>),
    Quant(QKind, Vec<RawVar>, Box<RawNode>),
    Count(usize, Vec<RawVar>, Box<RawNode>),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
}

const INFIX_RELS: [&str; 5] = ["<", "<=", ">", ">=", "~"];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_op(&self, op: &str) -> bool {
        matches!(self.peek(), Tok::Op(o) if *o == op)
    }

    fn eat(&mut self, op: &str) -> bool {
        if self.is_op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LogicError> {
        Err(LogicError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, op: &str) -> Result<(), LogicError> {
        if self.eat(op) {
            Ok(())
        } else {
            self.err(format!("expected `{op}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), LogicError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(s) => Ok((s, pos)),
                _ => unreachable!(),
            },
            _ => self.err("expected an identifier"),
        }
    }

    fn var(&mut self) -> Result<RawVar, LogicError> {
        let (name, pos) = self.ident()?;
        if is_keyword(&name) {
            return Err(LogicError::Syntax { pos, msg: format!("`{name}` is a keyword") });
        }
        let sort = if self.eat(":") { Some(self.ident()?.0) } else { None };
        Ok(RawVar { name, sort, pos })
    }

    fn var_list(&mut self, stop: &str) -> Result<Vec<RawVar>, LogicError> {
        let mut vars = Vec::new();
        if self.is_op(stop) {
            return Ok(vars);
        }
        loop {
            vars.push(self.var()?);
            if !self.eat(",") {
                return Ok(vars);
            }
        }
    }

    fn decl(&mut self) -> Result<(String, Vec<RawVar>, Vec<RawVar>, RawNode), LogicError> {
        let (name, _) = self.ident()?;
        self.expect("(")?;
        let objects = self.var_list(";")?;
        let params = if self.eat(";") { self.var_list(")")? } else { Vec::new() };
        self.expect(")")?;
        self.expect(":=")?;
        let body = self.form()?;
        if *self.peek() != Tok::Eof {
            return self.err("trailing input");
        }
        Ok((name, objects, params, body))
    }

    fn form(&mut self) -> Result<RawNode, LogicError> {
        let lhs = self.disj()?;
        if self.eat("->") {
            let rhs = self.form()?;
            return Ok(RawNode::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<RawNode, LogicError> {
        let mut parts = alloc::vec![self.conj()?];
        while self.eat("|") {
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { RawNode::Or(parts) })
    }

    fn conj(&mut self) -> Result<RawNode, LogicError> {
        let mut parts = alloc::vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { RawNode::And(parts) })
    }

    fn binders(&mut self) -> Result<Vec<RawVar>, LogicError> {
        let mut vars = alloc::vec![self.var()?];
        loop {
            self.eat(",");
            if self.eat(".") {
                return Ok(vars);
            }
            vars.push(self.var()?);
        }
    }

    fn unary(&mut self) -> Result<RawNode, LogicError> {
        if self.eat("!") {
            return Ok(RawNode::Not(Box::new(self.unary()?)));
        }
        if self.eat("exists!") {
            let n = match *self.peek() {
                Tok::Nat(n) => n,
                _ => return self.err("expected a count after `exists!`"),
            };
            self.bump();
            let vars = self.binders()?;
            let body = self.form()?;
            return Ok(RawNode::Count(n, vars, Box::new(body)));
        }
        if let Tok::Ident(w) = self.peek() {
            let kind = match w.as_str() {
                "exists" => Some(QKind::Exists),
                "forall" => Some(QKind::Forall),
                "true" => {
                    self.bump();
                    return Ok(RawNode::True);
                }
                "false" => {
                    self.bump();
                    return Ok(RawNode::False);
                }
                _ => None,
            };
            if let Some(kind) = kind {
                self.bump();
                let vars = self.binders()?;
                let body = self.form()?;
                return Ok(RawNode::Quant(kind, vars, Box::new(body)));
            }
        }
        if self.is_op("(") {
            // Either a parenthesised formula or a parenthesised term that
            // starts an atom; try the term reading first.
            let save = self.at;
            if let Ok(t) = self.term() {
                if self.at_atom_operator() {
                    return self.finish_atom(t);
                }
            }
            self.at = save;
            self.expect("(")?;
            let f = self.form()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.atom()
    }

    fn at_atom_operator(&self) -> bool {
        match self.peek() {
            Tok::Op(o) => *o == "=" || *o == "!=" || INFIX_RELS.contains(o),
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<RawNode, LogicError> {
        if let Tok::Ident(name) = self.peek().clone() {
            if let Some(Symbol::Relation(_)) = self.sig.symbol(&name) {
                let pos = self.pos();
                self.bump();
                let args = if self.is_op("(") {
                    self.bump();
                    let args = self.terms()?;
                    self.expect(")")?;
                    args
                } else {
                    Vec::new()
                };
                return Ok(RawNode::Rel(name, args, pos));
            }
            if self.sig.symbol(&name).is_none() && matches!(self.toks.get(self.at + 1), Some((Tok::Op("("), _))) {
                return Err(LogicError::UnknownSymbolAt { name, pos: self.pos() });
            }
        }
        let t = self.term()?;
        self.finish_atom(t)
    }

    fn finish_atom(&mut self, lhs: RawTerm) -> Result<RawNode, LogicError> {
        let pos = self.pos();
        let op = match self.peek() {
            Tok::Op(o) if *o == "=" || *o == "!=" || INFIX_RELS.contains(o) => *o,
            _ => return self.err("expected `=` or an infix relation"),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(match op {
            "=" => RawNode::Eq(lhs, rhs, pos),
            "!=" => RawNode::Not(Box::new(RawNode::Eq(lhs, rhs, pos))),
            _ => RawNode::Rel(op.to_string(), alloc::vec![lhs, rhs], pos),
        })
    }

    fn terms(&mut self) -> Result<Vec<RawTerm>, LogicError> {
        let mut out = Vec::new();
        if self.is_op(")") {
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<RawTerm, LogicError> {
        let mut lhs = self.product()?;
        while self.is_op("+") {
            let pos = self.pos();
            self.bump();
            let rhs = self.product()?;
            lhs = RawTerm::App("+".into(), alloc::vec![lhs, rhs], pos);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<RawTerm, LogicError> {
        let mut lhs = self.primary()?;
        while self.is_op("*") {
            let pos = self.pos();
            self.bump();
            let rhs = self.primary()?;
            lhs = RawTerm::App("*".into(), alloc::vec![lhs, rhs], pos);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<RawTerm, LogicError> {
        if self.eat("(") {
            let t = self.term()?;
            self.expect(")")?;
            return Ok(t);
        }
        // Numerals name constants such as `0`.
        if let Tok::Nat(n) = *self.peek() {
            let pos = self.pos();
            self.bump();
            return Ok(RawTerm::Name(format!("{n}"), pos));
        }
        let (name, pos) = self.ident()?;
        if is_keyword(&name) {
            return Err(LogicError::Syntax { pos, msg: format!("unexpected keyword `{name}`") });
        }
        if self.is_op("(") {
            self.bump();
            let args = self.terms()?;
            self.expect(")")?;
            return Ok(RawTerm::App(name, args, pos));
        }
        Ok(RawTerm::Name(name, pos))
    }
}

fn is_keyword(w: &str) -> bool {
    matches!(w, "exists" | "forall" | "true" | "false")
}

/// Sort of a term during inference: known outright or the class of a
/// variable slot.
#[derive(Clone, Copy, Debug)]
enum TSort {
    Known(SortId),
    Slot(usize),
}

struct Resolver<'a> {
    sig: &'a Signature,
    /// Union-find over variable slots.
    parent: Vec<usize>,
    sort: Vec<Option<SortId>>,
    slot_names: Vec<String>,
    /// In-scope variables: (name, slot). The level of a variable is its
    /// index in this stack.
    scope: Vec<(String, usize)>,
}

impl<'a> Resolver<'a> {
    fn new_slot(&mut self, v: &RawVar) -> Result<usize, LogicError> {
        let id = self.parent.len();
        self.parent.push(id);
        let sort = match &v.sort {
            Some(s) => Some(self.sig.sort(s).ok_or_else(|| LogicError::UnknownSort(s.clone()))?),
            None => None,
        };
        self.sort.push(sort);
        self.slot_names.push(v.name.clone());
        Ok(id)
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn mismatch(&self, pos: usize, a: SortId, b: SortId) -> LogicError {
        LogicError::SortMismatch {
            pos,
            expected: self.sig.sort_name(a).to_string(),
            found: self.sig.sort_name(b).to_string(),
        }
    }

    fn unify(&mut self, a: TSort, b: TSort, pos: usize) -> Result<(), LogicError> {
        match (a, b) {
            (TSort::Known(x), TSort::Known(y)) => {
                if x != y {
                    return Err(self.mismatch(pos, x, y));
                }
            }
            (TSort::Known(x), TSort::Slot(s)) | (TSort::Slot(s), TSort::Known(x)) => {
                let r = self.find(s);
                match self.sort[r] {
                    Some(y) if y != x => return Err(self.mismatch(pos, x, y)),
                    _ => self.sort[r] = Some(x),
                }
            }
            (TSort::Slot(s), TSort::Slot(t)) => {
                let (r, q) = (self.find(s), self.find(t));
                if r != q {
                    match (self.sort[r], self.sort[q]) {
                        (Some(x), Some(y)) if x != y => return Err(self.mismatch(pos, x, y)),
                        (x, y) => {
                            self.parent[q] = r;
                            self.sort[r] = x.or(y);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn lookup(&self, name: &str) -> Option<(usize, usize)> {
        self.scope.iter().rposition(|(n, _)| n == name).map(|lvl| (lvl, self.scope[lvl].1))
    }

    fn term(&mut self, t: &RawTerm) -> Result<(Term, TSort), LogicError> {
        match t {
            RawTerm::Name(name, pos) => {
                if let Some((lvl, slot)) = self.lookup(name) {
                    return Ok((Term::Var(lvl), TSort::Slot(slot)));
                }
                match self.sig.symbol(name) {
                    Some(Symbol::Constant(c)) => Ok((Term::Const(c), TSort::Known(self.sig.constants()[c].sort))),
                    Some(Symbol::Function(f)) if self.sig.functions()[f].arity() == 0 => {
                        Ok((Term::App(f, Vec::new()), TSort::Known(self.sig.functions()[f].result)))
                    }
                    _ => Err(LogicError::UnknownSymbolAt { name: name.clone(), pos: *pos }),
                }
            }
            RawTerm::App(name, args, pos) => {
                let f = match self.sig.symbol(name) {
                    Some(Symbol::Function(f)) => f,
                    _ => return Err(LogicError::UnknownSymbolAt { name: name.clone(), pos: *pos }),
                };
                let sym = self.sig.functions()[f].clone();
                if sym.arity() != args.len() {
                    return Err(LogicError::Arity { name: name.clone(), expected: sym.arity(), found: args.len(), pos: *pos });
                }
                let mut out = Vec::with_capacity(args.len());
                for (a, &s) in args.iter().zip(&sym.args) {
                    let (t, ts) = self.term(a)?;
                    self.unify(TSort::Known(s), ts, raw_pos(a))?;
                    out.push(t);
                }
                Ok((Term::App(f, out), TSort::Known(sym.result)))
            }
        }
    }

    fn bind(&mut self, vars: &[RawVar]) -> Result<Vec<usize>, LogicError> {
        let mut slots = Vec::with_capacity(vars.len());
        for v in vars {
            let s = self.new_slot(v)?;
            self.scope.push((v.name.clone(), s));
            slots.push(s);
        }
        Ok(slots)
    }

    /// Binder sorts are written as slot ids here and fixed up afterwards.
    fn node(&mut self, n: &RawNode) -> Result<Node, LogicError> {
        Ok(match n {
            RawNode::True => Node::True,
            RawNode::False => Node::False,
            RawNode::Eq(a, b, pos) => {
                let (ta, sa) = self.term(a)?;
                let (tb, sb) = self.term(b)?;
                self.unify(sa, sb, *pos)?;
                Node::Eq(ta, tb)
            }
            RawNode::Rel(name, args, pos) => {
                let r = match self.sig.symbol(name) {
                    Some(Symbol::Relation(r)) => r,
                    _ => return Err(LogicError::UnknownSymbolAt { name: name.clone(), pos: *pos }),
                };
                let profile = self.sig.relations()[r].profile.clone();
                if profile.len() != args.len() {
                    return Err(LogicError::Arity { name: name.clone(), expected: profile.len(), found: args.len(), pos: *pos });
                }
                let mut out = Vec::with_capacity(args.len());
                for (a, &s) in args.iter().zip(&profile) {
                    let (t, ts) = self.term(a)?;
                    self.unify(TSort::Known(s), ts, raw_pos(a))?;
                    out.push(t);
                }
                Node::Rel(r, out)
            }
            RawNode::Not(m) => Node::not(self.node(m)?),
            RawNode::And(ms) => Node::And(ms.iter().map(|m| self.node(m)).collect::<Result<_, _>>()?),
            RawNode::Or(ms) => Node::Or(ms.iter().map(|m| self.node(m)).collect::<Result<_, _>>()?),
            RawNode::Implies(a, b) => Node::implies(self.node(a)?, self.node(b)?),
            RawNode::Quant(kind, vars, body) => {
                let slots = self.bind(vars)?;
                let mut inner = self.node(body)?;
                self.scope.truncate(self.scope.len() - vars.len());
                for &s in slots.iter().rev() {
                    inner = match kind {
                        QKind::Exists => Node::exists(s, inner),
                        QKind::Forall => Node::forall(s, inner),
                    };
                }
                inner
            }
            RawNode::Count(count, vars, body) => {
                let slots = self.bind(vars)?;
                let inner = self.node(body)?;
                self.scope.truncate(self.scope.len() - vars.len());
                Node::CountExactly { count: *count, sorts: slots, body: Box::new(inner) }
            }
        })
    }

    fn slot_sort(&mut self, slot: usize) -> Result<SortId, LogicError> {
        let r = self.find(slot);
        match self.sort[r] {
            Some(s) => Ok(s),
            None if self.sig.sorts().len() == 1 => Ok(0),
            None => Err(LogicError::UninferredSort(self.slot_names[slot].clone())),
        }
    }

    fn fix_sorts(&mut self, n: Node) -> Result<Node, LogicError> {
        Ok(match n {
            Node::Not(m) => Node::not(self.fix_sorts(*m)?),
            Node::And(ms) => Node::And(ms.into_iter().map(|m| self.fix_sorts(m)).collect::<Result<_, _>>()?),
            Node::Or(ms) => Node::Or(ms.into_iter().map(|m| self.fix_sorts(m)).collect::<Result<_, _>>()?),
            Node::Implies(a, b) => Node::implies(self.fix_sorts(*a)?, self.fix_sorts(*b)?),
            Node::Exists(s, b) => Node::exists(self.slot_sort(s)?, self.fix_sorts(*b)?),
            Node::Forall(s, b) => Node::forall(self.slot_sort(s)?, self.fix_sorts(*b)?),
            Node::CountExactly { count, sorts, body } => Node::CountExactly {
                count,
                sorts: sorts.into_iter().map(|s| self.slot_sort(s)).collect::<Result<_, _>>()?,
                body: Box::new(self.fix_sorts(*body)?),
            },
            atom => atom,
        })
    }
}

fn raw_pos(t: &RawTerm) -> usize {
    match t {
        RawTerm::Name(_, p) | RawTerm::App(_, _, p) => *p,
    }
}

/// Parse a declaration `name(objects; params) := body` against `sig`.
///
/// Variable sorts are inferred from their uses; annotate with `x:Sort` when
/// a variable is not used in a sorted position of a many-sorted signature.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, sig };
    let (name, objects, params, body) = p.decl()?;

    let mut r = Resolver { sig, parent: Vec::new(), sort: Vec::new(), slot_names: Vec::new(), scope: Vec::new() };
    let declared: Vec<RawVar> = objects.iter().chain(params.iter()).cloned().collect();
    for (i, v) in declared.iter().enumerate() {
        if declared[..i].iter().any(|w| w.name == v.name) {
            return Err(LogicError::DuplicateVariable(v.name.clone()));
        }
        if sig.symbol(&v.name).is_some() {
            return Err(LogicError::Syntax { pos: v.pos, msg: format!("`{}` is a symbol of the signature", v.name) });
        }
    }
    let free_slots = r.bind(&declared)?;
    let body = r.node(&body)?;
    let body = r.fix_sorts(body)?;
    let mut decls = Vec::with_capacity(declared.len());
    for (v, &s) in declared.iter().zip(&free_slots) {
        decls.push(VarDecl { name: v.name.clone(), sort: r.slot_sort(s)? });
    }
    let params = decls.split_off(objects.len());
    Ok(Formula { name, objects: decls, params, body })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_sig() -> Signature {
        let mut sig = Signature::single_sorted("M");
        sig.add_relation("<", &[0, 0]).unwrap();
        sig
    }

    fn monoid_sig() -> Signature {
        let mut sig = Signature::single_sorted("M");
        sig.add_function("*", &[0, 0], 0).unwrap();
        sig
    }

    #[test]
    fn infix_order_atom() {
        let f = parse_formula("phi(x; y) := x < y", &order_sig()).unwrap();
        assert_eq!(f.body, Node::Rel(0, alloc::vec![Term::Var(0), Term::Var(1)]));
        assert_eq!(f.objects.len(), 1);
        assert_eq!(f.params[0].name, "y");
    }

    #[test]
    fn divisibility_formula() {
        let f = parse_formula("phi(x; y) := exists z. x = z * y", &monoid_sig()).unwrap();
        let expect = Node::exists(0, Node::Eq(Term::Var(0), Term::App(0, alloc::vec![Term::Var(2), Term::Var(1)])));
        assert_eq!(f.body, expect);
    }

    #[test]
    fn tautology_without_params() {
        let f = parse_formula("phi(x;) := x = x", &Signature::single_sorted("M")).unwrap();
        assert!(f.params.is_empty());
        assert_eq!(f.body, Node::Eq(Term::Var(0), Term::Var(0)));
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = order_sig();
        let f = parse_formula("f(a, b, c;) := a < b & b < c | !a = c -> c < a -> true", &sig).unwrap();
        match f.body {
            Node::Implies(lhs, rhs) => {
                assert!(matches!(*lhs, Node::Or(ref v) if v.len() == 2));
                assert!(matches!(*rhs, Node::Implies(..)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counting_quantifier_binds_a_block() {
        let f = parse_formula("f(; y) := exists! 2 u v. u < v & v < y", &order_sig()).unwrap();
        match f.body {
            Node::CountExactly { count: 2, ref sorts, .. } => assert_eq!(sorts.len(), 2),
            ref other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parenthesised_terms_and_formulas() {
        let mut sig = monoid_sig();
        sig.add_function("+", &[0, 0], 0).unwrap();
        let a = parse_formula("f(x, y;) := (x + y) * x = y", &sig).unwrap();
        let b = parse_formula("f(x, y;) := ((x + y) * x = y)", &sig).unwrap();
        assert_eq!(a.body, b.body);
        let c = parse_formula("f(x, y;) := x + y * x = y", &sig).unwrap();
        assert_ne!(a.body, c.body);
    }

    #[test]
    fn errors_carry_positions() {
        let sig = order_sig();
        assert!(matches!(parse_formula("f(x;) := x < ", &sig), Err(LogicError::Syntax { pos: 13, .. })));
        assert!(matches!(
            parse_formula("f(x;) := R(x)", &sig),
            Err(LogicError::UnknownSymbolAt { pos: 9, .. })
        ));
        assert!(matches!(parse_formula("f(x; x) := x < x", &sig), Err(LogicError::DuplicateVariable(_))));
        assert!(matches!(parse_formula("f(x;) := x # x", &sig), Err(LogicError::Syntax { pos: 11, .. })));
    }

    #[test]
    fn sorts_are_inferred_and_checked() {
        let mut sig = Signature::new();
        let p = sig.add_sort("P").unwrap();
        let l = sig.add_sort("L").unwrap();
        sig.add_relation("I", &[p, l]).unwrap();
        let f = parse_formula("f(x; y) := exists z. I(x, z) & I(y, z)", &sig).unwrap();
        assert_eq!(f.objects[0].sort, p);
        assert_eq!(f.body, Node::exists(l, Node::And(alloc::vec![
            Node::Rel(0, alloc::vec![Term::Var(0), Term::Var(2)]),
            Node::Rel(0, alloc::vec![Term::Var(1), Term::Var(2)]),
        ])));
        assert!(matches!(parse_formula("f(x;) := I(x, x)", &sig), Err(LogicError::SortMismatch { .. })));
        assert!(matches!(parse_formula("f(x;) := x = x", &sig), Err(LogicError::UninferredSort(_))));
        assert!(parse_formula("f(x:L;) := x = x", &sig).is_ok());
    }
}
