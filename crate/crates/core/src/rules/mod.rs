//! Declarative lint rules and their evaluation.
//!
//! A rule file holds helper rules (`continuous(E) :- ...`) and lint rules
//! whose head is `hard(<id>, Params...)`. Lint rules are annotated with a
//! category, a message and candidate fix templates:
//!
//! ```text
//! %@category I1
//! %@describe Use both binning and aggregation on the data at the same time is illegal
//! %@action REMOVE_BIN(C)
//! %@action REMOVE_AGGREGATE(C)
//! hard(bin_and_aggregate,C) :- bin(E,_), aggregate(E,_), channel(E,C).
//! ```

mod eval;
mod parser;

use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::RuleError;
use crate::facts::{extract_facts, Const};
use crate::fix::ActionKind;
use crate::profile::DatasetProfile;
use crate::spec::ChartSpec;

pub use self::eval::lint;
pub use self::parser::{parse_rules, CORE_PREDICATES};

/// Source text of the rule catalog shipped with the crate.
pub const DEFAULT_RULES: &str = include_str!("../../rules/default.lp");

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(Const),
    Wildcard,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
            Term::Wildcard => f.write_str("_"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(Term::to_string).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    /// Compares under the total order integers < symbols < strings.
    pub fn holds(self, a: &Const, b: &Const) -> bool {
        let ord = a.cmp(b);
        match self {
            CmpOp::Eq => ord.is_eq(),
            CmpOp::Ne => ord.is_ne(),
            CmpOp::Lt => ord.is_lt(),
            CmpOp::Le => ord.is_le(),
            CmpOp::Gt => ord.is_gt(),
            CmpOp::Ge => ord.is_ge(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
    Cmp(Term, CmpOp, Term),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "not {a}"),
            Literal::Cmp(l, op, r) => write!(f, "{l} {} {r}", op.symbol()),
        }
    }
}

/// A rule deriving an auxiliary relation used by lint rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelperRule {
    pub head: Atom,
    pub body: Vec<Literal>,
    pub line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    I1,
    I2,
    I3,
    I4,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::I1 => "I1",
            Category::I2 => "I2",
            Category::I3 => "I3",
            Category::I4 => "I4",
        }
    }

    pub fn from_name(s: &str) -> Option<Category> {
        match s {
            "I1" => Some(Category::I1),
            "I2" => Some(Category::I2),
            "I3" => Some(Category::I3),
            "I4" => Some(Category::I4),
            _ => None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Category {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// An argument of a fix template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateArg {
    /// A head parameter of the rule.
    Var(String),
    /// A keyword: a channel, mark, type, aggregate or stack offset.
    Const(String),
    /// `*`: every admissible value.
    Any,
    /// `~`: the column whose name is closest to the current field.
    Nearest,
}

impl fmt::Display for TemplateArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateArg::Var(v) | TemplateArg::Const(v) => f.write_str(v),
            TemplateArg::Any => f.write_str("*"),
            TemplateArg::Nearest => f.write_str("~"),
        }
    }
}

/// A parameterised fix, instantiated against a concrete violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTemplate {
    pub kind: ActionKind,
    pub args: Vec<TemplateArg>,
}

impl fmt::Display for ActionTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(TemplateArg::to_string).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintRule {
    pub id: String,
    pub category: Category,
    pub description: String,
    pub head_params: Vec<String>,
    pub body: Vec<Literal>,
    pub actions: Vec<ActionTemplate>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCatalog {
    pub version: Option<String>,
    pub rules: Vec<LintRule>,
    pub helpers: Vec<HelperRule>,
    /// Predicates declared by the rule file in addition to the core set.
    pub extensions: Vec<(String, usize)>,
    /// Helper predicates grouped into evaluation strata.
    pub(crate) strata: Vec<Vec<String>>,
}

impl RuleCatalog {
    pub fn rule(&self, id: &str) -> Option<&LintRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn strata(&self) -> &[Vec<String>] {
        &self.strata
    }
}

/// The shipped catalog, parsed once.
pub fn default_catalog() -> &'static RuleCatalog {
    static CATALOG: OnceLock<RuleCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| parse_rules(DEFAULT_RULES).expect("the default catalog is well-formed"))
}

/// A rule breach with the values bound to the rule's head parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub rule_id: String,
    pub category: Category,
    pub bindings: Vec<(String, Const)>,
    pub description: String,
}

impl Violation {
    pub fn binding(&self, param: &str) -> Option<&Const> {
        self.bindings.iter().find(|(p, _)| p == param).map(|(_, c)| c)
    }

    /// The channel key this violation is scoped to, if any.
    pub fn channel(&self) -> Option<String> {
        ["C", "S"]
            .iter()
            .find_map(|p| self.binding(p))
            .map(Const::text)
    }

    pub fn message(&self) -> String {
        render(&self.description, &self.bindings)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rule_id)?;
        if !self.bindings.is_empty() {
            let args: Vec<String> = self.bindings.iter().map(|(_, c)| c.to_string()).collect();
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let bindings: serde_json::Map<String, serde_json::Value> = self
            .bindings
            .iter()
            .map(|(k, c)| {
                let v = match c {
                    Const::Int(n) => serde_json::Value::from(*n),
                    other => serde_json::Value::String(other.text()),
                };
                (k.clone(), v)
            })
            .collect();
        let mut st = s.serialize_struct("Violation", 4)?;
        st.serialize_field("rule_id", &self.rule_id)?;
        st.serialize_field("category", &self.category)?;
        st.serialize_field("bindings", &bindings)?;
        st.serialize_field("message", &self.message())?;
        st.end()
    }
}

fn param_label(param: &str) -> &str {
    match param {
        "C" => "channel",
        "M" => "mark",
        "F" => "field",
        "S" => "value",
        other => other,
    }
}

fn render(description: &str, bindings: &[(String, Const)]) -> String {
    if bindings.is_empty() {
        return description.to_string();
    }
    let parts: Vec<String> = bindings
        .iter()
        .map(|(p, c)| format!("{} {}", param_label(p), c.text()))
        .collect();
    format!("{description} ({})", parts.join(", "))
}

/// The message of a violation with its bindings filled in.
pub fn explain(v: &Violation, catalog: &RuleCatalog) -> Result<String, RuleError> {
    let rule = catalog
        .rule(&v.rule_id)
        .ok_or_else(|| RuleError::UnknownRule(v.rule_id.clone()))?;
    Ok(render(&rule.description, &v.bindings))
}

/// Extracts facts from a chart and lints them.
pub fn lint_spec(
    spec: &ChartSpec,
    profile: Option<&DatasetProfile>,
    catalog: &RuleCatalog,
) -> Vec<Violation> {
    lint(&extract_facts(spec, profile), catalog)
}
