//! Signatures, formulas and the formula DSL.
//!
//! The DSL is small. A declaration names the object variables, then the
//! parameters, then the body:
//!
//! ```text
//! phi(x; y)   := exists z. x = z * y
//! psi(x:P; )  := forall v:L. B0(x, v) -> x = x
//! chi(; a, b) := exists! 2 x. x < a | x < b
//! ```
//!
//! Connectives are `!`, `&`, `|` and `->` (binding in that order, `->` to the
//! right). `t != u` abbreviates `!(t = u)`. Declared binary relations named
//! `<`, `<=`, `>`, `>=` or `~` and binary functions named `+` or `*` may be
//! written infix. A quantifier body extends as far right as possible.

mod builders;
mod formula;
mod literal_types;
mod parser;
mod printer;
mod signature;

pub use builders::{build_at_most_sentence, build_exact_count_formula, expand_counting};
pub use formula::{Formula, Node, Term, VarDecl};
pub use literal_types::{enumerate_literal_types, enumerate_literal_types_sorted, Literal, LiteralTypeFormula};
pub use parser::parse_formula;
pub use printer::{print_formula, FormulaDisplay};
pub use signature::{ConstantSymbol, FunctionSymbol, RelationSymbol, Signature, SortId, Symbol};

use alloc::string::String;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbolAt { name: String, pos: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown sort id {0}")]
    UnknownSortId(usize),
    #[error("sort mismatch at byte {pos}: expected {expected}, found {found}")]
    SortMismatch { pos: usize, expected: String, found: String },
    #[error("`{name}` takes {expected} arguments, got {found} (byte {pos})")]
    Arity { name: String, expected: usize, found: usize, pos: usize },
    #[error("cannot infer the sort of variable `{0}`")]
    UninferredSort(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("cannot make {requested} of {available} free variables objects")]
    BadSplit { requested: usize, available: usize },
    #[error("signature has function symbols")]
    NotRelational,
    #[error("{0}")]
    Precondition(&'static str),
}
