//! The text format for finite structures.
//!
//! ```text
//! SIGNATURE
//! sort M
//! relation < M M
//! function + M M -> M
//! constant 0 M
//! SORTS
//! M=3
//! RELATIONS
//! <:
//! 0 1
//! FUNCTIONS
//! +:
//! 0 0 -> 0
//! CONSTANTS
//! 0=0
//! ```
//!
//! Sections come in this order. Inside RELATIONS and FUNCTIONS a line
//! ending in `:` starts the next symbol; the empty tuple is written `()`.
//! Blank lines and lines starting with `#` are ignored. The writer is
//! canonical: symbols in signature order, rows in lexicographic order.

use std::fmt::Write as _;
use std::path::Path;

use exactlab_core::logic::{Signature, SortId};
use exactlab_core::structures::{Element, FiniteStructure, StructureBuilder};

use crate::error::{LabError, Result};

const SECTIONS: [&str; 5] = ["SIGNATURE", "SORTS", "RELATIONS", "FUNCTIONS", "CONSTANTS"];

pub fn write_structure(m: &FiniteStructure) -> String {
    let sig = m.signature();
    let mut out = String::new();
    let sort = |s: SortId| sig.sort_name(s);
    out.push_str("SIGNATURE\n");
    for name in sig.sorts() {
        writeln!(out, "sort {name}").unwrap();
    }
    for r in sig.relations() {
        let profile: Vec<&str> = r.profile.iter().map(|&s| sort(s)).collect();
        writeln!(out, "relation {}", [&[r.name.as_str()][..], &profile].concat().join(" ")).unwrap();
    }
    for f in sig.functions() {
        let args: Vec<&str> = f.args.iter().map(|&s| sort(s)).collect();
        writeln!(out, "function {} -> {}", [&[f.name.as_str()][..], &args].concat().join(" "), sort(f.result)).unwrap();
    }
    for c in sig.constants() {
        writeln!(out, "constant {} {}", c.name, sort(c.sort)).unwrap();
    }
    out.push_str("SORTS\n");
    for (s, name) in sig.sorts().iter().enumerate() {
        writeln!(out, "{name}={}", m.size(s)).unwrap();
    }
    out.push_str("RELATIONS\n");
    for (r, rel) in sig.relations().iter().enumerate() {
        writeln!(out, "{}:", rel.name).unwrap();
        for t in m.relation(r).tuples() {
            out.push_str(&row(t));
            out.push('\n');
        }
    }
    out.push_str("FUNCTIONS\n");
    for (f, fun) in sig.functions().iter().enumerate() {
        writeln!(out, "{}:", fun.name).unwrap();
        let radices: Vec<usize> = fun.args.iter().map(|&s| m.size(s)).collect();
        for args in tuples(&radices) {
            let v = m.apply(f, &args);
            if args.is_empty() {
                writeln!(out, "-> {v}").unwrap();
            } else {
                writeln!(out, "{} -> {v}", row(&args)).unwrap();
            }
        }
    }
    out.push_str("CONSTANTS\n");
    for (c, k) in sig.constants().iter().enumerate() {
        writeln!(out, "{}={}", k.name, m.constant(c)).unwrap();
    }
    out
}

fn row(t: &[Element]) -> String {
    if t.is_empty() {
        return "()".to_string();
    }
    t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

/// All tuples over the given radices, last coordinate fastest.
fn tuples(radices: &[usize]) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        out = out.into_iter().flat_map(|t| (0..r as Element).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

pub fn read_structure_file(path: &Path) -> Result<FiniteStructure> {
    let text = std::fs::read_to_string(path).map_err(LabError::io(path))?;
    read_structure(&text).map_err(|e| match e {
        LabError::Parse(msg) => LabError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

struct Reader {
    sig: Signature,
    sizes: Vec<Option<usize>>,
    builder: Option<StructureBuilder>,
    current: Option<String>,
}

pub fn read_structure(text: &str) -> Result<FiniteStructure> {
    let mut r = Reader { sig: Signature::new(), sizes: Vec::new(), builder: None, current: None };
    let mut section: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |msg: String| LabError::Parse(format!("line {}: {msg}", i + 1));
        if let Some(s) = SECTIONS.iter().position(|&h| h == line) {
            if section.is_none() && s != 0 {
                return Err(fail("expected SIGNATURE".into()));
            }
            if section.is_some_and(|cur| cur >= s) {
                return Err(fail(format!("section {line} out of order")));
            }
            if s >= 2 && r.builder.is_none() {
                r.start_builder().map_err(fail)?;
            }
            section = Some(s);
            r.current = None;
            continue;
        }
        match section {
            None => return Err(fail("expected SIGNATURE".into())),
            Some(0) => r.signature_line(line),
            Some(1) => r.sort_line(line),
            Some(2) => r.relation_line(line),
            Some(3) => r.function_line(line),
            _ => r.constant_line(line),
        }
        .map_err(fail)?;
    }
    if r.builder.is_none() {
        r.start_builder().map_err(|m| LabError::Parse(m))?;
    }
    r.builder.unwrap().build().map_err(|v| LabError::Parse(format!("invalid structure: {v}")))
}

fn ids(words: &[&str]) -> std::result::Result<Vec<Element>, String> {
    if words == ["()"] {
        return Ok(Vec::new());
    }
    words.iter().map(|w| w.parse::<Element>().map_err(|_| format!("`{w}` is not an element id"))).collect()
}

impl Reader {
    fn sort_id(&self, name: &str) -> std::result::Result<SortId, String> {
        self.sig.sort(name).ok_or_else(|| format!("unknown sort `{name}`"))
    }

    fn sorts(&self, names: &[&str]) -> std::result::Result<Vec<SortId>, String> {
        names.iter().map(|n| self.sort_id(n)).collect()
    }

    fn signature_line(&mut self, line: &str) -> std::result::Result<(), String> {
        let words: Vec<&str> = line.split_whitespace().collect();
        let err = |e: exactlab_core::logic::LogicError| e.to_string();
        match words.as_slice() {
            ["sort", name] => {
                self.sig.add_sort(name).map_err(err)?;
                self.sizes.push(None);
            }
            ["relation", name, profile @ ..] => {
                let profile = self.sorts(profile)?;
                self.sig.add_relation(name, &profile).map_err(err)?;
            }
            ["function", name, rest @ ..] => {
                let Some((&result, args)) = rest.split_last().filter(|(_, a)| a.last() == Some(&"->")) else {
                    return Err("expected `function NAME SORT.. -> SORT`".into());
                };
                let args = self.sorts(&args[..args.len() - 1])?;
                let result = self.sort_id(result)?;
                self.sig.add_function(name, &args, result).map_err(err)?;
            }
            ["constant", name, sort] => {
                let sort = self.sort_id(sort)?;
                self.sig.add_constant(name, sort).map_err(err)?;
            }
            _ => return Err(format!("cannot read signature line `{line}`")),
        }
        Ok(())
    }

    fn sort_line(&mut self, line: &str) -> std::result::Result<(), String> {
        let (name, size) = line.split_once('=').ok_or("expected `SORT=SIZE`")?;
        let s = self.sort_id(name.trim())?;
        let size = size.trim().parse::<usize>().map_err(|_| format!("bad size `{}`", size.trim()))?;
        if self.sizes[s].replace(size).is_some() {
            return Err(format!("size of `{}` given twice", name.trim()));
        }
        Ok(())
    }

    fn start_builder(&mut self) -> std::result::Result<(), String> {
        let sizes = self
            .sizes
            .iter()
            .enumerate()
            .map(|(s, n)| n.ok_or_else(|| format!("no size for sort `{}`", self.sig.sort_name(s))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        self.builder = Some(StructureBuilder::new(self.sig.clone(), &sizes));
        Ok(())
    }

    fn header(&mut self, line: &str) -> bool {
        match line.strip_suffix(':') {
            Some(name) => {
                self.current = Some(name.trim().to_string());
                true
            }
            None => false,
        }
    }

    fn symbol(&self) -> std::result::Result<&str, String> {
        self.current.as_deref().ok_or_else(|| "row before any `NAME:` line".to_string())
    }

    fn relation_line(&mut self, line: &str) -> std::result::Result<(), String> {
        if self.header(line) {
            return self.sig.relation(self.symbol()?).map(|_| ()).ok_or_else(|| format!("`{}` is not a relation", self.symbol().unwrap()));
        }
        let t = ids(&line.split_whitespace().collect::<Vec<_>>())?;
        let name = self.symbol()?.to_string();
        self.builder.as_mut().unwrap().add_tuple_named(&name, &t).map_err(|v| v.to_string())?;
        Ok(())
    }

    fn function_line(&mut self, line: &str) -> std::result::Result<(), String> {
        if self.header(line) {
            return self.sig.function(self.symbol()?).map(|_| ()).ok_or_else(|| format!("`{}` is not a function", self.symbol().unwrap()));
        }
        let (args, value) = line.split_once("->").ok_or("expected `ARGS -> VALUE`")?;
        let args: Vec<&str> = args.split_whitespace().collect();
        let args = if args.is_empty() { Vec::new() } else { ids(&args)? };
        let value = ids(&[value.trim()])?;
        let [value] = value[..] else { return Err("expected one value".into()) };
        let name = self.symbol()?.to_string();
        self.builder.as_mut().unwrap().set_value_named(&name, &args, value).map_err(|v| v.to_string())?;
        Ok(())
    }

    fn constant_line(&mut self, line: &str) -> std::result::Result<(), String> {
        let (name, value) = line.split_once('=').ok_or("expected `NAME=ID`")?;
        let [value] = ids(&[value.trim()])?[..] else { return Err("expected one id".into()) };
        self.builder.as_mut().unwrap().set_constant_named(name.trim(), value).map_err(|v| v.to_string())?;
        Ok(())
    }
}
