use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Element, FiniteStructure, StructureBuilder, Violation};
use crate::logic::{Formula, LogicError, Signature, SortId};
use crate::util::Odometer;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error(transparent)]
    Invalid(#[from] Violation),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("empty list of structures")]
    EmptyList,
    #[error("not a subsignature")]
    NotSubsignature,
    #[error("name `{0}` is already used")]
    NameCollision(String),
    #[error("element {element} is not in sort {sort}")]
    UnknownElement { sort: SortId, element: Element },
    #[error("subset not closed under `{symbol}`: {args:?} -> {value}")]
    NotClosed { symbol: String, args: Vec<Element>, value: Element },
    #[error("subset is empty in inhabited sort {0}")]
    EmptySort(SortId),
}

/// The copy of `sig` used for block `i` (1-based) of a disjoint union: every
/// sort and symbol gets the suffix `_i`.
pub fn block_signature(sig: &Signature, i: usize) -> Signature {
    let mut out = Signature::new();
    for s in sig.sorts() {
        out.add_sort(&format!("{s}_{i}")).expect("suffixing keeps names distinct");
    }
    for r in sig.relations() {
        out.add_relation(&format!("{}_{i}", r.name), &r.profile).expect("distinct");
    }
    for f in sig.functions() {
        out.add_function(&format!("{}_{i}", f.name), &f.args, f.result).expect("distinct");
    }
    for c in sig.constants() {
        out.add_constant(&format!("{}_{i}", c.name), c.sort).expect("distinct");
    }
    out
}

/// Formal disjoint union with one sort block per input: block `i` carries
/// the sorts and symbols of `ms[i-1]`, suffixed `_i`, interpreted as there.
pub fn disjoint_union(ms: &[FiniteStructure]) -> Result<FiniteStructure, StructureError> {
    if ms.is_empty() {
        return Err(StructureError::EmptyList);
    }
    let mut sig = Signature::new();
    let mut sizes = Vec::new();
    let mut sort_base = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        sort_base.push(sig.sorts().len());
        for (s, name) in m.signature().sorts().iter().enumerate() {
            sig.add_sort(&format!("{name}_{}", i + 1)).map_err(|_| StructureError::NameCollision(name.clone()))?;
            sizes.push(m.size(s));
        }
    }
    for (i, m) in ms.iter().enumerate() {
        let shift = |ss: &[SortId]| ss.iter().map(|&s| s + sort_base[i]).collect::<Vec<_>>();
        let ms_sig = m.signature();
        for r in ms_sig.relations() {
            sig.add_relation(&format!("{}_{}", r.name, i + 1), &shift(&r.profile))?;
        }
        for f in ms_sig.functions() {
            sig.add_function(&format!("{}_{}", f.name, i + 1), &shift(&f.args), f.result + sort_base[i])?;
        }
        for c in ms_sig.constants() {
            sig.add_constant(&format!("{}_{}", c.name, i + 1), c.sort + sort_base[i])?;
        }
    }
    let mut b = StructureBuilder::new(sig, &sizes);
    let (mut r0, mut f0, mut c0) = (0, 0, 0);
    for m in ms {
        let ms_sig = m.signature();
        for r in 0..ms_sig.relations().len() {
            for t in m.relation(r).tuples() {
                b.add_tuple(r0 + r, t);
            }
        }
        for f in 0..ms_sig.functions().len() {
            b.set_table(f0 + f, m.function(f).values().to_vec());
        }
        for c in 0..ms_sig.constants().len() {
            b.set_constant(c0 + c, m.constant(c));
        }
        r0 += ms_sig.relations().len();
        f0 += ms_sig.functions().len();
        c0 += ms_sig.constants().len();
    }
    Ok(b.build()?)
}

/// Move a formula over `ms[i-1]`'s signature into the union's signature.
pub fn lift_to_union(f: &Formula, sig: &Signature, i: usize, union: &Signature) -> Result<Formula, LogicError> {
    f.translate(&block_signature(sig, i), union)
}

/// Forget the symbols not in `sub`. Sorts are matched by name; sorts of `m`
/// missing from `sub` are dropped.
pub fn reduct(m: &FiniteStructure, sub: &Signature) -> Result<FiniteStructure, StructureError> {
    let full = m.signature();
    if !sub.is_subsignature_of(full) {
        return Err(StructureError::NotSubsignature);
    }
    let sizes: Vec<usize> = sub.sorts().iter().map(|s| m.size(full.sort(s).expect("subsignature"))).collect();
    let mut b = StructureBuilder::new(sub.clone(), &sizes);
    for (r, sym) in sub.relations().iter().enumerate() {
        let src = full.relation(&sym.name).expect("subsignature");
        for t in m.relation(src).tuples() {
            b.add_tuple(r, t);
        }
    }
    for (f, sym) in sub.functions().iter().enumerate() {
        let src = full.function(&sym.name).expect("subsignature");
        b.set_table(f, m.function(src).values().to_vec());
    }
    for (c, sym) in sub.constants().iter().enumerate() {
        b.set_constant(c, m.constant(full.constant(&sym.name).expect("subsignature")));
    }
    Ok(b.build()?)
}

/// Name elements by new constant symbols. Several names may denote the same
/// element.
pub fn expand_with_constants(
    m: &FiniteStructure,
    assignments: &[(&str, SortId, Element)],
) -> Result<FiniteStructure, StructureError> {
    let mut sig = m.signature().clone();
    for &(name, sort, e) in assignments {
        if sort >= m.sizes().len() || e as usize >= m.size(sort) {
            return Err(StructureError::UnknownElement { sort, element: e });
        }
        sig.add_constant(name, sort).map_err(|_| StructureError::NameCollision(name.to_string()))?;
    }
    let mut b = m.to_builder();
    let mut nb = StructureBuilder::new(sig, m.sizes());
    nb.relations = core::mem::take(&mut b.relations);
    nb.functions = core::mem::take(&mut b.functions);
    let old = m.signature().constants().len();
    for c in 0..old {
        nb.set_constant(c, m.constant(c));
    }
    for (k, &(_, _, e)) in assignments.iter().enumerate() {
        nb.set_constant(old + k, e);
    }
    Ok(nb.build()?)
}

/// An injective map from the elements of one structure into another, sort
/// by sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// `maps[sort][small id] = big id`.
    pub maps: Vec<Vec<Element>>,
}

impl Embedding {
    pub fn identity(m: &FiniteStructure) -> Self {
        Embedding { maps: m.sizes().iter().map(|&n| (0..n as Element).collect()).collect() }
    }

    pub fn apply(&self, sort: SortId, e: Element) -> Element {
        self.maps[sort][e as usize]
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Embedding) -> Embedding {
        Embedding {
            maps: self
                .maps
                .iter()
                .enumerate()
                .map(|(s, m)| m.iter().map(|&e| other.apply(s, e)).collect())
                .collect(),
        }
    }

    /// Whether this is an injective map `small -> big` that preserves and
    /// reflects every relation and commutes with functions and constants.
    /// The two structures must share the signature shape.
    pub fn is_substructure_map(&self, small: &FiniteStructure, big: &FiniteStructure) -> bool {
        let sig = small.signature();
        if self.maps.len() != small.sizes().len() || big.sizes().len() != small.sizes().len() {
            return false;
        }
        for (s, map) in self.maps.iter().enumerate() {
            if map.len() != small.size(s) || map.iter().any(|&e| e as usize >= big.size(s)) {
                return false;
            }
            let mut sorted = map.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != map.len() {
                return false;
            }
        }
        let image = |sorts: &[SortId], t: &[Element]| -> Vec<Element> {
            sorts.iter().zip(t).map(|(&s, &e)| self.apply(s, e)).collect()
        };
        for (r, sym) in sig.relations().iter().enumerate() {
            let mut odo = Odometer::new(sym.profile.iter().map(|&s| small.size(s)).collect());
            while let Some(t) = odo.next_tuple() {
                if small.holds(r, t) != big.holds(r, &image(&sym.profile, t)) {
                    return false;
                }
            }
        }
        for (f, sym) in sig.functions().iter().enumerate() {
            let mut odo = Odometer::new(sym.args.iter().map(|&s| small.size(s)).collect());
            while let Some(t) = odo.next_tuple() {
                if self.apply(sym.result, small.apply(f, t)) != big.apply(f, &image(&sym.args, t)) {
                    return false;
                }
            }
        }
        sig.constants()
            .iter()
            .enumerate()
            .all(|(c, sym)| self.apply(sym.sort, small.constant(c)) == big.constant(c))
    }
}

/// The substructure induced on `subset` (one element list per sort),
/// renumbered in increasing id order, with its inclusion map.
pub fn induced_substructure(
    m: &FiniteStructure,
    subset: &[Vec<Element>],
) -> Result<(FiniteStructure, Embedding), StructureError> {
    let sig = m.signature();
    let nsorts = m.sizes().len();
    if subset.len() != nsorts {
        return Err(Violation::SortCount { expected: nsorts, found: subset.len() }.into());
    }
    let mut maps: Vec<Vec<Element>> = subset.to_vec();
    let mut back: Vec<Vec<Option<Element>>> = m.sizes().iter().map(|&n| vec![None; n]).collect();
    for (s, map) in maps.iter_mut().enumerate() {
        map.sort_unstable();
        map.dedup();
        if map.is_empty() && m.size(s) > 0 {
            return Err(StructureError::EmptySort(s));
        }
        for (i, &e) in map.iter().enumerate() {
            if e as usize >= m.size(s) {
                return Err(StructureError::UnknownElement { sort: s, element: e });
            }
            back[s][e as usize] = Some(i as Element);
        }
    }
    let sizes: Vec<usize> = maps.iter().map(Vec::len).collect();
    let mut b = StructureBuilder::new(sig.clone(), &sizes);
    for (f, sym) in sig.functions().iter().enumerate() {
        let mut odo = Odometer::new(sym.args.iter().map(|&s| sizes[s]).collect());
        let mut values = Vec::new();
        while let Some(t) = odo.next_tuple() {
            let args: Vec<Element> = sym.args.iter().zip(t).map(|(&s, &e)| maps[s][e as usize]).collect();
            let value = m.apply(f, &args);
            match back[sym.result][value as usize] {
                Some(v) => values.push(v),
                None => return Err(StructureError::NotClosed { symbol: sym.name.clone(), args, value }),
            }
        }
        b.set_table(f, values);
    }
    for (c, sym) in sig.constants().iter().enumerate() {
        let e = m.constant(c);
        match back[sym.sort][e as usize] {
            Some(v) => {
                b.set_constant(c, v);
            }
            None => return Err(StructureError::NotClosed { symbol: sym.name.clone(), args: Vec::new(), value: e }),
        }
    }
    for (r, sym) in sig.relations().iter().enumerate() {
        for t in m.relation(r).tuples() {
            let img: Option<Vec<Element>> = sym.profile.iter().zip(t).map(|(&s, &e)| back[s][e as usize]).collect();
            if let Some(img) = img {
                b.add_tuple(r, &img);
            }
        }
    }
    Ok((b.build()?, Embedding { maps }))
}
