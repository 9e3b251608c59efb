use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::LogicError;

/// Index of a sort within a [`Signature`].
pub type SortId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationSymbol {
    pub name: String,
    /// Sort of each argument; the arity is its length.
    pub profile: Vec<SortId>,
}

impl RelationSymbol {
    pub fn arity(&self) -> usize {
        self.profile.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionSymbol {
    pub name: String,
    pub args: Vec<SortId>,
    pub result: SortId,
}

impl FunctionSymbol {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstantSymbol {
    pub name: String,
    pub sort: SortId,
}

/// A non-sort symbol resolved by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    Relation(usize),
    Function(usize),
    Constant(usize),
}

/// A finite many-sorted first-order signature.
///
/// Sort names live in their own namespace; relation, function and constant
/// names share one namespace and must be unique within it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    sorts: Vec<String>,
    relations: Vec<RelationSymbol>,
    functions: Vec<FunctionSymbol>,
    constants: Vec<ConstantSymbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// One sort called `name`, no symbols: the language of pure equality.
    pub fn single_sorted(name: &str) -> Self {
        let mut sig = Self::new();
        sig.add_sort(name).expect("fresh signature");
        sig
    }

    pub fn add_sort(&mut self, name: &str) -> Result<SortId, LogicError> {
        if self.sorts.iter().any(|s| s == name) {
            return Err(LogicError::DuplicateSymbol(name.to_string()));
        }
        self.sorts.push(name.to_string());
        Ok(self.sorts.len() - 1)
    }

    fn check_fresh(&self, name: &str) -> Result<(), LogicError> {
        if self.symbol(name).is_some() {
            return Err(LogicError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    fn check_sorts(&self, sorts: &[SortId]) -> Result<(), LogicError> {
        match sorts.iter().find(|&&s| s >= self.sorts.len()) {
            Some(&s) => Err(LogicError::UnknownSortId(s)),
            None => Ok(()),
        }
    }

    pub fn add_relation(&mut self, name: &str, profile: &[SortId]) -> Result<usize, LogicError> {
        self.check_fresh(name)?;
        self.check_sorts(profile)?;
        self.relations.push(RelationSymbol { name: name.to_string(), profile: profile.to_vec() });
        Ok(self.relations.len() - 1)
    }

    pub fn add_function(&mut self, name: &str, args: &[SortId], result: SortId) -> Result<usize, LogicError> {
        self.check_fresh(name)?;
        self.check_sorts(args)?;
        self.check_sorts(&[result])?;
        self.functions.push(FunctionSymbol { name: name.to_string(), args: args.to_vec(), result });
        Ok(self.functions.len() - 1)
    }

    pub fn add_constant(&mut self, name: &str, sort: SortId) -> Result<usize, LogicError> {
        self.check_fresh(name)?;
        self.check_sorts(&[sort])?;
        self.constants.push(ConstantSymbol { name: name.to_string(), sort });
        Ok(self.constants.len() - 1)
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn functions(&self) -> &[FunctionSymbol] {
        &self.functions
    }

    pub fn constants(&self) -> &[ConstantSymbol] {
        &self.constants
    }

    pub fn sort(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn sort_name(&self, sort: SortId) -> &str {
        &self.sorts[sort]
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        if let Some(i) = self.relations.iter().position(|r| r.name == name) {
            return Some(Symbol::Relation(i));
        }
        if let Some(i) = self.functions.iter().position(|f| f.name == name) {
            return Some(Symbol::Function(i));
        }
        self.constants.iter().position(|c| c.name == name).map(Symbol::Constant)
    }

    pub fn relation(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn function(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c.name == name)
    }

    /// No function symbols (constants are allowed).
    pub fn is_relational(&self) -> bool {
        self.functions.is_empty()
    }

    /// Whether every symbol of `self` occurs in `other` with the same profile
    /// (compared through sort names), and every sort of `self` is a sort of `other`.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        let map_sort = |s: SortId| other.sort(&self.sorts[s]);
        let map_all = |ss: &[SortId]| ss.iter().map(|&s| map_sort(s)).collect::<Option<Vec<_>>>();
        if self.sorts.iter().any(|s| other.sort(s).is_none()) {
            return false;
        }
        let rels = self.relations.iter().all(|r| match other.relation(&r.name) {
            Some(j) => map_all(&r.profile).as_deref() == Some(&other.relations[j].profile[..]),
            None => false,
        });
        let funs = self.functions.iter().all(|f| match other.function(&f.name) {
            Some(j) => {
                let g = &other.functions[j];
                map_all(&f.args).as_deref() == Some(&g.args[..]) && map_sort(f.result) == Some(g.result)
            }
            None => false,
        });
        let consts = self.constants.iter().all(|c| match other.constant(&c.name) {
            Some(j) => map_sort(c.sort) == Some(other.constants[j].sort),
            None => false,
        });
        rels && funs && consts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_across_symbol_kinds() {
        let mut sig = Signature::single_sorted("M");
        sig.add_relation("E", &[0, 0]).unwrap();
        assert!(matches!(sig.add_constant("E", 0), Err(LogicError::DuplicateSymbol(_))));
        assert!(matches!(sig.add_function("E", &[0], 0), Err(LogicError::DuplicateSymbol(_))));
        assert!(matches!(sig.add_relation("P", &[3]), Err(LogicError::UnknownSortId(3))));
    }

    #[test]
    fn subsignature_compares_profiles_by_sort_name() {
        let mut big = Signature::new();
        let a = big.add_sort("A").unwrap();
        let b = big.add_sort("B").unwrap();
        big.add_relation("R", &[a, b]).unwrap();
        big.add_constant("c", b).unwrap();

        let mut small = Signature::new();
        let b2 = small.add_sort("B").unwrap();
        let a2 = small.add_sort("A").unwrap();
        small.add_relation("R", &[a2, b2]).unwrap();
        assert!(small.is_subsignature_of(&big));

        let mut wrong = Signature::new();
        let a3 = wrong.add_sort("A").unwrap();
        let b3 = wrong.add_sort("B").unwrap();
        wrong.add_relation("R", &[b3, a3]).unwrap();
        assert!(!wrong.is_subsignature_of(&big));
    }
}
