use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Element, FiniteStructure, FunctionTable, RelationTable};
use crate::logic::{Signature, SortId};

/// The first broken invariant found while validating raw structure data.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("expected {expected} sort sizes, got {found}")]
    SortCount { expected: usize, found: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch: `{symbol}` takes {expected} arguments, tuple has {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("`{symbol}`: element {element} is not in sort {sort}")]
    ElementOutOfRange { symbol: String, sort: SortId, element: Element },
    #[error("function not total: `{symbol}` has no value at {args:?}")]
    FunctionNotTotal { symbol: String, args: Vec<Element> },
    #[error("function `{symbol}` given two values at {args:?}")]
    FunctionConflict { symbol: String, args: Vec<Element> },
    #[error("constant `{0}` is unassigned")]
    ConstantUnassigned(String),
}

/// Raw structure data, checked by [`StructureBuilder::validate`] and
/// frozen by [`StructureBuilder::build`].
#[derive(Clone, Debug)]
pub struct StructureBuilder {
    pub(super) sig: Signature,
    pub(super) sizes: Vec<usize>,
    pub(super) relations: Vec<Vec<Vec<Element>>>,
    pub(super) functions: Vec<Table>,
    /// Rows that could not be stored in a dense table; reported by `validate`.
    pub(super) bad_rows: Vec<Violation>,
    pub(super) constants: Vec<Option<Element>>,
}

/// Function values as given so far. Whole tables skip the `Option` layer,
/// which matters for large group tables.
#[derive(Clone, Debug)]
pub(super) enum Table {
    Empty(usize),
    Partial(Vec<Option<Element>>),
    Full(Vec<Element>),
}

impl Default for Table {
    fn default() -> Self {
        Table::Empty(0)
    }
}

impl Table {
    fn len(&self) -> usize {
        match self {
            Table::Empty(n) => *n,
            Table::Partial(v) => v.len(),
            Table::Full(v) => v.len(),
        }
    }

    fn get(&self, i: usize) -> Option<Element> {
        match self {
            Table::Empty(_) => None,
            Table::Partial(v) => v[i],
            Table::Full(v) => Some(v[i]),
        }
    }
}

fn radices(sizes: &[usize], sorts: &[SortId]) -> Vec<usize> {
    sorts.iter().map(|&s| sizes[s]).collect()
}

impl StructureBuilder {
    /// `sizes[s]` is the number of elements of sort `s`.
    pub fn new(sig: Signature, sizes: &[usize]) -> Self {
        let mut bad_rows = Vec::new();
        let mut sizes = sizes.to_vec();
        if sizes.len() != sig.sorts().len() {
            bad_rows.push(Violation::SortCount { expected: sig.sorts().len(), found: sizes.len() });
            sizes.resize(sig.sorts().len(), 0);
        }
        let functions = sig
            .functions()
            .iter()
            .map(|f| Table::Empty(radices(&sizes, &f.args).iter().product()))
            .collect();
        StructureBuilder {
            relations: vec![Vec::new(); sig.relations().len()],
            functions,
            bad_rows,
            constants: vec![None; sig.constants().len()],
            sig,
            sizes,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn add_tuple(&mut self, rel: usize, tuple: &[Element]) -> &mut Self {
        self.relations[rel].push(tuple.to_vec());
        self
    }

    pub fn add_tuple_named(&mut self, name: &str, tuple: &[Element]) -> Result<&mut Self, Violation> {
        let r = self.sig.relation(name).ok_or_else(|| Violation::UnknownSymbol(name.to_string()))?;
        Ok(self.add_tuple(r, tuple))
    }

    fn check_args(&self, symbol: &str, sorts: &[SortId], args: &[Element]) -> Result<(), Violation> {
        if sorts.len() != args.len() {
            return Err(Violation::ArityMismatch { symbol: symbol.to_string(), expected: sorts.len(), found: args.len() });
        }
        for (&s, &e) in sorts.iter().zip(args) {
            if e as usize >= self.sizes[s] {
                return Err(Violation::ElementOutOfRange { symbol: symbol.to_string(), sort: s, element: e });
            }
        }
        Ok(())
    }

    pub fn set_value(&mut self, f: usize, args: &[Element], value: Element) -> &mut Self {
        let sym = self.sig.functions()[f].clone();
        if let Err(v) = self.check_args(&sym.name, &sym.args, args) {
            self.bad_rows.push(v);
            return self;
        }
        let idx = super::mixed_index(&radices(&self.sizes, &sym.args), args);
        match self.functions[f].get(idx) {
            Some(old) if old != value => {
                self.bad_rows.push(Violation::FunctionConflict { symbol: sym.name.clone(), args: args.to_vec() })
            }
            Some(_) => {}
            None => {
                if let Table::Empty(n) = self.functions[f] {
                    self.functions[f] = Table::Partial(vec![None; n]);
                }
                if let Table::Partial(v) = &mut self.functions[f] {
                    v[idx] = Some(value);
                }
            }
        }
        self
    }

    pub fn set_value_named(&mut self, name: &str, args: &[Element], value: Element) -> Result<&mut Self, Violation> {
        let f = self.sig.function(name).ok_or_else(|| Violation::UnknownSymbol(name.to_string()))?;
        Ok(self.set_value(f, args, value))
    }

    /// Fill a whole table at once, in [`crate::util::Odometer`] order of the
    /// argument tuples.
    pub fn set_table(&mut self, f: usize, values: Vec<Element>) -> &mut Self {
        let expected = self.functions[f].len();
        if values.len() != expected {
            let name = self.sig.functions()[f].name.clone();
            self.bad_rows.push(Violation::ArityMismatch { symbol: name, expected, found: values.len() });
        } else {
            self.functions[f] = Table::Full(values);
        }
        self
    }

    pub fn set_constant(&mut self, c: usize, e: Element) -> &mut Self {
        self.constants[c] = Some(e);
        self
    }

    pub fn set_constant_named(&mut self, name: &str, e: Element) -> Result<&mut Self, Violation> {
        let c = self.sig.constant(name).ok_or_else(|| Violation::UnknownSymbol(name.to_string()))?;
        Ok(self.set_constant(c, e))
    }

    /// Report the first violated invariant, if any.
    pub fn validate(&self) -> Result<(), Violation> {
        if let Some(v) = self.bad_rows.first() {
            return Err(v.clone());
        }
        for (r, rows) in self.relations.iter().enumerate() {
            let sym = &self.sig.relations()[r];
            for row in rows {
                self.check_args(&sym.name, &sym.profile, row)?;
            }
        }
        for (f, table) in self.functions.iter().enumerate() {
            let sym = &self.sig.functions()[f];
            let rad = radices(&self.sizes, &sym.args);
            if let Table::Full(values) = table {
                if let Some(&v) = values.iter().find(|&&v| v as usize >= self.sizes[sym.result]) {
                    return Err(Violation::ElementOutOfRange { symbol: sym.name.clone(), sort: sym.result, element: v });
                }
                continue;
            }
            let mut odo = crate::util::Odometer::new(rad);
            let mut i = 0;
            while let Some(args) = odo.next_tuple() {
                match table.get(i) {
                    None => return Err(Violation::FunctionNotTotal { symbol: sym.name.clone(), args: args.to_vec() }),
                    Some(v) if v as usize >= self.sizes[sym.result] => {
                        return Err(Violation::ElementOutOfRange {
                            symbol: sym.name.clone(),
                            sort: sym.result,
                            element: v,
                        })
                    }
                    _ => {}
                }
                i += 1;
            }
        }
        for (c, value) in self.constants.iter().enumerate() {
            let sym = &self.sig.constants()[c];
            match value {
                None => return Err(Violation::ConstantUnassigned(sym.name.clone())),
                Some(e) if *e as usize >= self.sizes[sym.sort] => {
                    return Err(Violation::ElementOutOfRange { symbol: sym.name.clone(), sort: sym.sort, element: *e })
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn build(self) -> Result<FiniteStructure, Violation> {
        self.validate()?;
        let StructureBuilder { sig, sizes, relations, functions, constants, .. } = self;
        let relations = relations
            .into_iter()
            .zip(sig.relations())
            .map(|(rows, sym)| RelationTable::new(radices(&sizes, &sym.profile), rows))
            .collect();
        let functions = functions
            .into_iter()
            .zip(sig.functions())
            .map(|(vals, sym)| FunctionTable {
                radices: radices(&sizes, &sym.args),
                values: match vals {
                    Table::Full(v) => v,
                    Table::Partial(v) => v.into_iter().map(|x| x.expect("validated")).collect(),
                    Table::Empty(_) => Vec::new(),
                },
            })
            .collect();
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        Ok(FiniteStructure {
            sig,
            sizes,
            offsets,
            relations,
            functions,
            constants: constants.into_iter().map(|c| c.expect("validated")).collect(),
        })
    }
}

impl FiniteStructure {
    /// A builder pre-filled with this structure's data.
    pub fn to_builder(&self) -> StructureBuilder {
        let mut b = StructureBuilder::new(self.sig.clone(), &self.sizes);
        for (r, table) in self.relations.iter().enumerate() {
            b.relations[r] = table.tuples().map(<[Element]>::to_vec).collect();
        }
        for (f, table) in self.functions.iter().enumerate() {
            b.functions[f] = Table::Full(table.values.clone());
        }
        for (c, &e) in self.constants.iter().enumerate() {
            b.constants[c] = Some(e);
        }
        b
    }

    /// Re-check every invariant. Always succeeds for built structures.
    pub fn validate(&self) -> Result<(), Violation> {
        self.to_builder().validate()
    }
}
