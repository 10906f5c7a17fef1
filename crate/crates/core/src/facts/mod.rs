//! Translation of a chart and its data profile into ground facts.
//!
//! Encodings are named `e0`, `e1`, ... in source order. A misspelled
//! keyword produces a `raw_*` fact carrying the source text instead of the
//! canonical fact, so only the typo rules see it.

mod apply;

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::profile::DatasetProfile;
use crate::spec::{ChartSpec, MaxBins, Vocabulary};

pub use self::apply::apply_action_to_spec;

/// A ground term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    Int(i64),
    Sym(String),
    Str(String),
}

impl Const {
    pub fn sym(s: impl Into<String>) -> Const {
        Const::Sym(s.into())
    }

    pub fn str(s: impl Into<String>) -> Const {
        Const::Str(s.into())
    }

    /// The text of a symbol or string; integers in decimal.
    pub fn text(&self) -> String {
        match self {
            Const::Int(n) => n.to_string(),
            Const::Sym(s) | Const::Str(s) => s.clone(),
        }
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Int(n) => write!(f, "{n}"),
            Const::Sym(s) => f.write_str(s),
            Const::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// A ground atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub predicate: String,
    pub args: Vec<Const>,
}

impl Fact {
    pub fn new(predicate: impl Into<String>, args: Vec<Const>) -> Self {
        Fact {
            predicate: predicate.into(),
            args,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        f.write_str(".")
    }
}

/// A duplicate-free set of facts in insertion order, indexed by predicate.
#[derive(Debug, Clone, Default)]
pub struct FactBase {
    facts: Vec<Fact>,
    seen: HashSet<Fact>,
    index: HashMap<String, Vec<usize>>,
}

impl FactBase {
    pub fn new() -> Self {
        FactBase::default()
    }

    /// Adds a fact; returns false when it was already present.
    pub fn insert(&mut self, fact: Fact) -> bool {
        if self.seen.contains(&fact) {
            return false;
        }
        self.index
            .entry(fact.predicate.clone())
            .or_default()
            .push(self.facts.len());
        self.seen.insert(fact.clone());
        self.facts.push(fact);
        true
    }

    pub fn add(&mut self, predicate: &str, args: Vec<Const>) {
        self.insert(Fact::new(predicate, args));
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.seen.contains(fact)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    pub fn with_predicate<'a>(&'a self, predicate: &str) -> impl Iterator<Item = &'a Fact> + 'a {
        self.index
            .get(predicate)
            .map(|ix| ix.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(move |&i| &self.facts[i])
    }

    pub fn count(&self, predicate: &str) -> usize {
        self.index.get(predicate).map_or(0, Vec::len)
    }

    /// One fact per line in rule-file syntax.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.facts {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out
    }
}

impl PartialEq for FactBase {
    fn eq(&self, other: &Self) -> bool {
        self.seen == other.seen
    }
}

impl Eq for FactBase {}

impl FromIterator<Fact> for FactBase {
    fn from_iter<I: IntoIterator<Item = Fact>>(iter: I) -> Self {
        let mut fb = FactBase::new();
        for f in iter {
            fb.insert(f);
        }
        fb
    }
}

/// Identifier of the encoding at `index`.
pub fn encoding_id(index: usize) -> Const {
    Const::Sym(format!("e{index}"))
}

/// Builds the fact base of a chart.
///
/// With a profile, a field missing from the data yields `unknown_field`
/// and every known field gets `fieldtype`, `cardinality` and (when it holds
/// values <= 0) `has_nonpositive`. Without a profile, fields are taken on
/// trust and no data facts are emitted.
pub fn extract_facts(spec: &ChartSpec, profile: Option<&DatasetProfile>) -> FactBase {
    let mut fb = FactBase::new();
    match spec.mark.canonical {
        Some(m) => fb.add("mark", vec![Const::sym(m.as_str())]),
        None => fb.add("raw_mark", vec![Const::str(&spec.mark.raw)]),
    }

    let mut known_fields: Vec<&str> = Vec::new();
    for (i, enc) in spec.encodings.iter().enumerate() {
        let e = encoding_id(i);
        fb.add("encoding", vec![e.clone()]);
        match enc.channel.canonical {
            Some(c) => fb.add("channel", vec![e.clone(), Const::sym(c.as_str())]),
            None => fb.add("raw_channel", vec![e.clone(), Const::str(&enc.channel.raw)]),
        }
        if let Some(field) = &enc.field {
            let known = profile.map_or(true, |p| p.get(field).is_some());
            if known {
                fb.add("field", vec![e.clone(), Const::str(field)]);
                if !known_fields.contains(&field.as_str()) {
                    known_fields.push(field);
                }
            } else {
                fb.add("unknown_field", vec![e.clone(), Const::str(field)]);
            }
        }
        if let Some(t) = &enc.field_type {
            match t.canonical {
                Some(t) => fb.add("type", vec![e.clone(), Const::sym(t.as_str())]),
                None => fb.add("raw_type", vec![e.clone(), Const::str(&t.raw)]),
            }
        }
        if let Some(a) = &enc.aggregate {
            match a.canonical {
                Some(a) => fb.add("aggregate", vec![e.clone(), Const::sym(a.as_str())]),
                None => fb.add("raw_aggregate", vec![e.clone(), Const::str(&a.raw)]),
            }
        }
        if let Some(bin) = &enc.bin {
            match &bin.maxbins {
                None => fb.add("bin", vec![e.clone(), Const::sym("default")]),
                Some(MaxBins::Valid(n)) => fb.add("bin", vec![e.clone(), Const::Int(i64::from(*n))]),
                Some(MaxBins::Invalid(v)) => {
                    let text = match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    fb.add("raw_bin", vec![e.clone(), Const::Str(text)]);
                }
            }
        }
        if enc.scale.log {
            fb.add("log", vec![e.clone()]);
        }
        match enc.scale.zero {
            Some(true) => fb.add("zero", vec![e.clone()]),
            Some(false) => fb.add("no_zero", vec![e.clone()]),
            None => {}
        }
        if let Some(s) = &enc.stack {
            match s.canonical {
                Some(m) => fb.add("stack", vec![e.clone(), Const::sym(m.as_str())]),
                None => fb.add("raw_stack", vec![e.clone(), Const::Str(s.raw_text())]),
            }
        }
    }

    if let Some(profile) = profile {
        for name in known_fields {
            let fp = profile.get(name).expect("known fields resolve");
            let f = Const::str(name);
            fb.add("fieldtype", vec![f.clone(), Const::sym(fp.inferred_type.as_str())]);
            fb.add("cardinality", vec![f.clone(), Const::Int(fp.cardinality as i64)]);
            if fp.has_nonpositive {
                fb.add("has_nonpositive", vec![f]);
            }
        }
    }
    fb
}
