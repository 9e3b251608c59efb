use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::formula::{Formula, Node, Term, VarDecl};
use super::signature::{Signature, SortId};
use super::LogicError;
use crate::structures::{Element, StructureBuilder};

/// One signed atom over the positions `y1..ym` followed by the constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    /// `Eq` or `Rel` over `Term::Var(i)` (`i < m`) and `Term::Const(c)`.
    pub atom: Node,
}

/// A maximally consistent conjunction of literals in `y1..ym`: every atom
/// over the variables and constants occurs exactly once, with a sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiteralTypeFormula {
    pub vars: Vec<SortId>,
    /// Sorted.
    pub literals: Vec<Literal>,
}

impl LiteralTypeFormula {
    /// The conjunction as a parameter-only formula `type(; y1..ym)`.
    pub fn to_formula(&self, name: &str) -> Formula {
        let params = self.vars.iter().enumerate().map(|(i, &s)| VarDecl::new(&format!("y{}", i + 1), s)).collect();
        let parts = self
            .literals
            .iter()
            .map(|l| if l.positive { l.atom.clone() } else { Node::not(l.atom.clone()) })
            .collect();
        Formula::over_params(name, params, Node::conj(parts))
    }
}

const MAX_FREE_ATOMS: usize = 24;

/// Sort of each position: the `m` variables, then the constants.
fn positions(sig: &Signature, vars: &[SortId]) -> Vec<(Term, SortId)> {
    let mut out: Vec<(Term, SortId)> = vars.iter().enumerate().map(|(i, &s)| (Term::Var(i), s)).collect();
    out.extend(sig.constants().iter().enumerate().map(|(c, sym)| (Term::Const(c), sym.sort)));
    out
}

/// All literal types in `m` variables of sort 0 (see
/// [`enumerate_literal_types_sorted`] for other sorts).
pub fn enumerate_literal_types(sig: &Signature, m: usize) -> Result<Vec<LiteralTypeFormula>, LogicError> {
    if sig.sorts().is_empty() {
        return Err(LogicError::Precondition("signature has no sorts"));
    }
    enumerate_literal_types_sorted(sig, &vec![0; m])
}

/// All maximally consistent conjunctions of literals in variables of the
/// given sorts. Constants are treated as extra fixed positions. Each result
/// is checked by realising it in a small structure.
pub fn enumerate_literal_types_sorted(sig: &Signature, vars: &[SortId]) -> Result<Vec<LiteralTypeFormula>, LogicError> {
    if !sig.is_relational() {
        return Err(LogicError::NotRelational);
    }
    let pos = positions(sig, vars);
    let k = pos.len();
    let mut out = Vec::new();
    // Equality patterns: sort-respecting set partitions, as restricted
    // growth strings.
    let mut blocks: Vec<usize> = vec![0; k];
    let mut block_sorts: Vec<SortId> = Vec::new();
    let mut too_many = false;
    partitions(&pos, 0, &mut blocks, &mut block_sorts, &mut |blocks, _| {
        // Relation atoms up to the partition.
        let mut atoms: Vec<(Node, Vec<usize>)> = Vec::new();
        for (r, sym) in sig.relations().iter().enumerate() {
            let choices: Vec<Vec<usize>> =
                sym.profile.iter().map(|&s| (0..k).filter(|&p| pos[p].1 == s).collect()).collect();
            let mut odo = crate::util::Odometer::new(choices.iter().map(Vec::len).collect());
            while let Some(t) = odo.next_tuple() {
                let ps: Vec<usize> = t.iter().zip(&choices).map(|(&i, c)| c[i as usize]).collect();
                let key: Vec<usize> = ps.iter().map(|&p| blocks[p]).collect();
                let atom = Node::Rel(r, ps.iter().map(|&p| pos[p].0.clone()).collect());
                let mut full_key = vec![r];
                full_key.extend(key);
                atoms.push((atom, full_key));
            }
        }
        let mut keys: Vec<Vec<usize>> = atoms.iter().map(|(_, key)| key.clone()).collect();
        keys.sort();
        keys.dedup();
        if keys.len() > MAX_FREE_ATOMS {
            too_many = true;
            return;
        }
        let mut eqs = Vec::new();
        for p in 0..k {
            for q in p + 1..k {
                if pos[p].1 == pos[q].1 {
                    eqs.push(Literal { positive: blocks[p] == blocks[q], atom: Node::Eq(pos[p].0.clone(), pos[q].0.clone()) });
                }
            }
        }
        for signs in 0u64..(1u64 << keys.len()) {
            let mut lits = eqs.clone();
            for (atom, key) in &atoms {
                let idx = keys.binary_search(key).expect("key listed");
                lits.push(Literal { positive: signs >> idx & 1 == 1, atom: atom.clone() });
            }
            lits.sort();
            let candidate = LiteralTypeFormula { vars: vars.to_vec(), literals: lits };
            out.push(candidate);
        }
    });
    if too_many {
        return Err(LogicError::Precondition("too many atoms to enumerate literal types"));
    }
    if out.iter().any(|t| !realisable_by_blocks(sig, &pos, t)) {
        return Err(LogicError::Precondition("inconsistent literal type"));
    }
    Ok(out)
}

fn partitions(
    pos: &[(Term, SortId)],
    p: usize,
    blocks: &mut Vec<usize>,
    block_sorts: &mut Vec<SortId>,
    emit: &mut dyn FnMut(&[usize], &[SortId]),
) {
    if p == pos.len() {
        emit(blocks, block_sorts);
        return;
    }
    for b in 0..block_sorts.len() {
        if block_sorts[b] == pos[p].1 {
            blocks[p] = b;
            partitions(pos, p + 1, blocks, block_sorts, emit);
        }
    }
    blocks[p] = block_sorts.len();
    block_sorts.push(pos[p].1);
    partitions(pos, p + 1, blocks, block_sorts, emit);
    block_sorts.pop();
}

/// Build the structure whose elements are the blocks and check that the
/// positions, read as those blocks, satisfy every literal.
fn realisable(
    sig: &Signature,
    pos: &[(Term, SortId)],
    blocks: &[usize],
    block_sorts: &[SortId],
    t: &LiteralTypeFormula,
) -> bool {
    let mut sizes = vec![0usize; sig.sorts().len()];
    let mut local: Vec<Element> = Vec::new();
    for &s in block_sorts {
        local.push(sizes[s] as Element);
        sizes[s] += 1;
    }
    let value = |term: &Term| -> Element {
        let p = match term {
            Term::Var(i) => *i,
            Term::Const(c) => pos.len() - sig.constants().len() + c,
            Term::App(..) => unreachable!("relational signature"),
        };
        local[blocks[p]]
    };
    let mut b = StructureBuilder::new(sig.clone(), &sizes);
    for l in &t.literals {
        if let (true, Node::Rel(r, args)) = (l.positive, &l.atom) {
            let tuple: Vec<Element> = args.iter().map(value).collect();
            b.add_tuple(*r, &tuple);
        }
    }
    for (c, _) in sig.constants().iter().enumerate() {
        b.set_constant(c, value(&Term::Const(c)));
    }
    let Ok(m) = b.build() else { return false };
    t.literals.iter().all(|l| {
        let holds = match &l.atom {
            Node::Eq(a, b) => value(a) == value(b),
            Node::Rel(r, args) => m.holds(*r, &args.iter().map(value).collect::<Vec<_>>()),
            _ => false,
        };
        holds == l.positive
    })
}

fn realisable_by_blocks(sig: &Signature, pos: &[(Term, SortId)], t: &LiteralTypeFormula) -> bool {
    // Recover the equality pattern from the positive equations.
    let k = pos.len();
    let mut blocks: Vec<usize> = (0..k).collect();
    let index = |term: &Term| match term {
        Term::Var(i) => *i,
        Term::Const(c) => k - sig.constants().len() + c,
        Term::App(..) => unreachable!(),
    };
    for l in &t.literals {
        if let (true, Node::Eq(a, b)) = (l.positive, &l.atom) {
            let (i, j) = (index(a), index(b));
            let (lo, hi) = (blocks[i].min(blocks[j]), blocks[i].max(blocks[j]));
            for x in blocks.iter_mut() {
                if *x == hi {
                    *x = lo;
                }
            }
        }
    }
    let mut ids: Vec<usize> = blocks.clone();
    ids.sort_unstable();
    ids.dedup();
    let dense: Vec<usize> = blocks.iter().map(|b| ids.binary_search(b).unwrap()).collect();
    let block_sorts: Vec<SortId> = ids.iter().map(|&b| pos[b].1).collect();
    realisable(sig, pos, &dense, &block_sorts, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_equality_counts() {
        let sig = Signature::single_sorted("M");
        assert_eq!(enumerate_literal_types(&sig, 2).unwrap().len(), 2);
        assert_eq!(enumerate_literal_types(&sig, 3).unwrap().len(), 5);
        assert_eq!(enumerate_literal_types(&sig, 4).unwrap().len(), 15);
    }

    #[test]
    fn one_binary_relation() {
        let mut sig = Signature::single_sorted("M");
        sig.add_relation("E", &[0, 0]).unwrap();
        let one = enumerate_literal_types(&sig, 1).unwrap();
        assert_eq!(one.len(), 2);
        assert!(one.iter().all(|t| t.literals.len() == 1));
        // y1 = y2: one atom class; y1 != y2: four.
        assert_eq!(enumerate_literal_types(&sig, 2).unwrap().len(), 2 + 16);
    }

    #[test]
    fn constants_are_extra_positions() {
        let mut sig = Signature::single_sorted("M");
        sig.add_constant("c", 0).unwrap();
        // Partitions of {y1, c}.
        assert_eq!(enumerate_literal_types(&sig, 1).unwrap().len(), 2);
        let mut f = sig.clone();
        f.add_function("s", &[0], 0).unwrap();
        assert_eq!(enumerate_literal_types(&f, 1), Err(LogicError::NotRelational));
    }
}
