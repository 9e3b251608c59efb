use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::formula::{Formula, Node, Term};
use super::signature::Signature;

const INFIX_RELS: [&str; 5] = ["<", "<=", ">", ">=", "~"];

/// Render a formula in the DSL. Bound variables are named after their level
/// (`v3`), with underscores appended on a clash, so printing is canonical and
/// `parse_formula(print_formula(f))` gives back `f`.
pub fn print_formula(f: &Formula, sig: &Signature) -> String {
    let annotate = sig.sorts().len() > 1;
    let decl = |vs: &[super::VarDecl]| {
        vs.iter()
            .map(|v| if annotate { format!("{}:{}", v.name, sig.sort_name(v.sort)) } else { v.name.clone() })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut p = Printer { sig, names: f.declared().map(|v| v.name.clone()).collect(), taken: Vec::new(), annotate };
    p.taken = p.names.clone();
    let mut out = format!("{}({}; {}) := ", f.name, decl(&f.objects), decl(&f.params));
    p.node(&f.body, &mut out);
    out
}

/// `Display` adapter pairing a formula with its signature.
pub struct FormulaDisplay<'a> {
    pub formula: &'a Formula,
    pub sig: &'a Signature,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self.formula, self.sig))
    }
}

impl Formula {
    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }
}

struct Printer<'a> {
    sig: &'a Signature,
    /// Name of each level currently in scope.
    names: Vec<String>,
    /// Free-variable names; bound names must avoid them.
    taken: Vec<String>,
    annotate: bool,
}

// Precedence: implies 1, or 2, and 3, prefix 4.
fn prec(n: &Node) -> u8 {
    match n {
        Node::Implies(..) => 1,
        Node::Or(_) => 2,
        Node::And(_) => 3,
        _ => 4,
    }
}

/// Whether printing `n` ends in a quantifier body, which would swallow
/// anything written after it.
fn open_ended(n: &Node) -> bool {
    match n {
        Node::Exists(..) | Node::Forall(..) | Node::CountExactly { .. } => true,
        Node::Not(m) => prec(m) == 4 && open_ended(m),
        Node::And(ms) | Node::Or(ms) => ms.last().is_some_and(open_ended),
        Node::Implies(_, b) => open_ended(b),
        _ => false,
    }
}

impl Printer<'_> {
    fn fresh(&self, level: usize) -> String {
        let mut name = format!("v{level}");
        while self.taken.contains(&name) || self.sig.symbol(&name).is_some() {
            name.push('_');
        }
        name
    }

    fn binder(&mut self, sort: usize, out: &mut String) {
        let name = self.fresh(self.names.len());
        out.push_str(&name);
        if self.annotate {
            out.push(':');
            out.push_str(self.sig.sort_name(sort));
        }
        self.names.push(name);
    }

    fn operand(&mut self, n: &Node, min: u8, last: bool, out: &mut String) {
        let wrap = prec(n) < min || (!last && open_ended(n));
        if wrap {
            out.push('(');
        }
        self.node(n, out);
        if wrap {
            out.push(')');
        }
    }

    fn node(&mut self, n: &Node, out: &mut String) {
        match n {
            Node::True => out.push_str("true"),
            Node::False => out.push_str("false"),
            Node::Eq(a, b) => {
                self.term(a, 0, out);
                out.push_str(" = ");
                self.term(b, 0, out);
            }
            Node::Not(m) if matches!(**m, Node::Eq(..)) => {
                let Node::Eq(a, b) = &**m else { unreachable!() };
                self.term(a, 0, out);
                out.push_str(" != ");
                self.term(b, 0, out);
            }
            Node::Rel(r, args) => {
                let name = &self.sig.relations()[*r].name;
                if args.len() == 2 && INFIX_RELS.contains(&name.as_str()) {
                    self.term(&args[0], 0, out);
                    out.push(' ');
                    out.push_str(name);
                    out.push(' ');
                    self.term(&args[1], 0, out);
                } else {
                    out.push_str(name);
                    if !args.is_empty() {
                        self.args(args, out);
                    }
                }
            }
            Node::Not(m) => {
                out.push('!');
                let wrap = prec(m) < 4;
                if wrap {
                    out.push('(');
                }
                self.node(m, out);
                if wrap {
                    out.push(')');
                }
            }
            Node::And(ms) | Node::Or(ms) => {
                let (sep, min) = if matches!(n, Node::And(_)) { (" & ", 4) } else { (" | ", 3) };
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    self.operand(m, min, i + 1 == ms.len(), out);
                }
            }
            Node::Implies(a, b) => {
                self.operand(a, 2, false, out);
                out.push_str(" -> ");
                self.operand(b, 1, true, out);
            }
            Node::Exists(s, b) | Node::Forall(s, b) => {
                out.push_str(if matches!(n, Node::Exists(..)) { "exists " } else { "forall " });
                self.binder(*s, out);
                out.push_str(". ");
                self.node(b, out);
                self.names.pop();
            }
            Node::CountExactly { count, sorts, body } => {
                out.push_str(&format!("exists! {count} "));
                for (i, &s) in sorts.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    self.binder(s, out);
                }
                out.push_str(". ");
                self.node(body, out);
                self.names.truncate(self.names.len() - sorts.len());
            }
        }
    }

    fn args(&mut self, args: &[Term], out: &mut String) {
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.term(a, 0, out);
        }
        out.push(')');
    }

    /// `min` is 0 at top level, 1 inside `+`'s right operand or `*`'s left,
    /// 2 inside `*`'s right operand.
    fn term(&mut self, t: &Term, min: u8, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&self.names[*v]),
            Term::Const(c) => out.push_str(&self.sig.constants()[*c].name),
            Term::App(f, args) => {
                let name = self.sig.functions()[*f].name.to_string();
                let level = match name.as_str() {
                    "+" if args.len() == 2 => 1,
                    "*" if args.len() == 2 => 2,
                    _ => {
                        out.push_str(&name);
                        self.args(args, out);
                        return;
                    }
                };
                let wrap = level <= min;
                if wrap {
                    out.push('(');
                }
                self.term(&args[0], level - 1, out);
                out.push_str(if level == 1 { " + " } else { " * " });
                self.term(&args[1], level, out);
                if wrap {
                    out.push(')');
                }
            }
        }
    }
}
