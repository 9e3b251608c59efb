use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use super::formula::{Formula, Node, Term};
use super::signature::Signature;
use super::LogicError;

/// `sigma_Q`: there are at most `q` elements of sort `sort`, written as
/// `exists x1 .. xq. forall y. y = x1 | .. | y = xq`.
pub fn build_at_most_sentence(q: usize, sort: &str, sig: &Signature) -> Result<Formula, LogicError> {
    if q == 0 {
        return Err(LogicError::Precondition("the size bound must be at least 1"));
    }
    let s = sig.sort(sort).ok_or_else(|| LogicError::UnknownSort(sort.into()))?;
    let cover = Node::disj((0..q).map(|i| Node::Eq(Term::Var(q), Term::Var(i))).collect());
    let mut body = Node::forall(s, cover);
    for _ in 0..q {
        body = Node::exists(s, body);
    }
    Ok(Formula::new(&format!("sigma_{q}"), Vec::new(), Vec::new(), body))
}

/// `psi_i(y) := exists!_i x. phi(x, y)`, a formula in the parameters of
/// `phi` alone. The counting quantifier stays native; see
/// [`expand_counting`] for the pure first-order version.
pub fn build_exact_count_formula(phi: &Formula, i: usize) -> Result<Formula, LogicError> {
    let n = phi.objects.len();
    if n == 0 {
        return Err(LogicError::Precondition("the formula needs at least one object variable"));
    }
    let m = phi.params.len();
    // Parameters move to the front; the objects become the bound block.
    let body = phi.body.renamed(&|v| {
        if v < n {
            v + m
        } else if v < n + m {
            v - n
        } else {
            v
        }
    });
    let node = Node::CountExactly { count: i, sorts: phi.object_sorts(), body: Box::new(body) };
    Ok(Formula::over_params(&format!("{}_count{}", phi.name, i), phi.params.clone(), node))
}

/// Replace every counting quantifier by first-order logic:
/// `exists!_i x. t(x)` becomes "there are `i` pairwise distinct witnesses and
/// every witness is one of them".
pub fn expand_counting(f: &Formula) -> Formula {
    Formula { body: expand_node(&f.body, f.free_count()), ..f.clone() }
}

fn expand_node(node: &Node, depth: usize) -> Node {
    match node {
        Node::True | Node::False | Node::Eq(..) | Node::Rel(..) => node.clone(),
        Node::Not(m) => Node::not(expand_node(m, depth)),
        Node::And(ms) => Node::And(ms.iter().map(|m| expand_node(m, depth)).collect()),
        Node::Or(ms) => Node::Or(ms.iter().map(|m| expand_node(m, depth)).collect()),
        Node::Implies(a, b) => Node::implies(expand_node(a, depth), expand_node(b, depth)),
        Node::Exists(s, b) => Node::exists(*s, expand_node(b, depth + 1)),
        Node::Forall(s, b) => Node::forall(*s, expand_node(b, depth + 1)),
        Node::CountExactly { count, sorts, body } => {
            let n = sorts.len();
            let i = *count;
            let d = depth;
            let theta = expand_node(body, d + n);
            // Copy j of the block lives at levels d + j*n .. d + (j+1)*n; the
            // closure block sits after all copies.
            let copy = |j: usize| {
                theta.renamed(&|v| {
                    if v < d {
                        v
                    } else if v < d + n {
                        v + j * n
                    } else {
                        v + (i - 1) * n
                    }
                })
            };
            let coord = |j: usize, c: usize| Term::Var(d + j * n + c);
            let mut parts: Vec<Node> = (0..i).map(copy).collect();
            for j in 0..i {
                for k in j + 1..i {
                    parts.push(Node::disj((0..n).map(|c| Node::neq(coord(j, c), coord(k, c))).collect()));
                }
            }
            let closure_theta = theta.renamed(&|v| if v < d { v } else { v + i * n });
            let one_of = Node::disj(
                (0..i).map(|j| Node::conj((0..n).map(|c| Node::Eq(coord(i, c), coord(j, c))).collect())).collect(),
            );
            let mut closure = Node::implies(closure_theta, one_of);
            for &s in sorts.iter().rev() {
                closure = Node::forall(s, closure);
            }
            parts.push(closure);
            let mut out = Node::conj(parts);
            for _ in 0..i {
                for &s in sorts.iter().rev() {
                    out = Node::exists(s, out);
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_one_shape() {
        let sig = Signature::single_sorted("M");
        let f = build_at_most_sentence(1, "M", &sig).unwrap();
        assert_eq!(f.body, Node::exists(0, Node::forall(0, Node::Eq(Term::Var(1), Term::Var(0)))));
        assert!(f.is_sentence());
        assert!(build_at_most_sentence(0, "M", &sig).is_err());
        assert!(matches!(build_at_most_sentence(2, "X", &sig), Err(LogicError::UnknownSort(_))));
    }

    #[test]
    fn count_formula_moves_params_first() {
        let mut sig = Signature::single_sorted("M");
        sig.add_relation("<", &[0, 0]).unwrap();
        let phi = super::super::parse_formula("phi(x; y) := x < y", &sig).unwrap();
        let psi = build_exact_count_formula(&phi, 0).unwrap();
        assert_eq!(psi.params.len(), 1);
        assert_eq!(
            psi.body,
            Node::CountExactly {
                count: 0,
                sorts: alloc::vec![0],
                body: Box::new(Node::Rel(0, alloc::vec![Term::Var(1), Term::Var(0)])),
            }
        );
        let expanded = expand_counting(&psi);
        assert!(expanded.body.size() > 1);
    }
}
