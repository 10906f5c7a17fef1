//! Request-level operations shared by the CLI and the HTTP service.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;
use vizlint_core::spec::SpecDiff;
use vizlint_core::{
    apply_action_to_spec, default_catalog, diff_specs, fix, lint_spec, parse_rules, parse_spec,
    serialize_spec, Action, ActionError, ChartSpec, ConfigError, DataError, DatasetProfile,
    FixConfig, FixPlan, RuleCatalog, RuleError, SpecError, Violation,
};

#[derive(Debug, Error)]
pub enum InputError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("{0}")]
    Io(String),
}

impl InputError {
    /// Line and column of a JSON syntax error in the spec.
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            InputError::Spec(SpecError::Json { line, column, .. }) => Some((*line, *column)),
            _ => None,
        }
    }
}

/// Everything a lint or fix call needs besides the chart.
pub struct Context<'a> {
    pub catalog: &'a RuleCatalog,
    pub config: FixConfig,
    pub profile: Option<DatasetProfile>,
}

impl Context<'static> {
    pub fn new(profile: Option<DatasetProfile>) -> Self {
        Context {
            catalog: default_catalog(),
            config: FixConfig::default(),
            profile,
        }
    }
}

/// Parses a rule file, or returns the shipped catalog.
pub fn load_catalog(text: Option<&str>) -> Result<RuleCatalog, InputError> {
    match text {
        Some(t) => Ok(parse_rules(t)?),
        None => Ok(default_catalog().clone()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportedViolation {
    pub rule_id: String,
    pub category: String,
    pub bindings: serde_json::Map<String, Value>,
    pub message: String,
    /// JSON Pointer to the offending part of the spec.
    pub spec_path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LintReport {
    pub spec_hash: String,
    pub violations: Vec<ReportedViolation>,
    pub timing_ms: f64,
}

/// SHA-256 of the canonical serialization, so formatting does not matter.
pub fn spec_hash(spec: &ChartSpec) -> String {
    hex::encode(Sha256::digest(serialize_spec(spec).as_bytes()))
}

fn pointer_segment(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// Where in the spec a violation points: the encoding it is bound to, the
/// mark for mark-level rules, or the encoding block otherwise.
pub fn spec_path(v: &Violation, spec: &ChartSpec) -> String {
    if let Some(key) = v.channel() {
        if spec.has_channel(&key) {
            return format!("/encoding/{}", pointer_segment(&key));
        }
    }
    if v.binding("M").is_some() || v.rule_id == "invalid_mark" || spec.encodings.is_empty() {
        return "/mark".into();
    }
    "/encoding".into()
}

fn report_violation(v: &Violation, spec: &ChartSpec) -> ReportedViolation {
    let ser = serde_json::to_value(v).expect("violations serialize");
    ReportedViolation {
        rule_id: v.rule_id.clone(),
        category: v.category.to_string(),
        bindings: ser["bindings"].as_object().cloned().unwrap_or_default(),
        message: v.message(),
        spec_path: spec_path(v, spec),
    }
}

pub fn lint_report(spec: &ChartSpec, ctx: &Context<'_>) -> LintReport {
    let start = Instant::now();
    let violations = lint_spec(spec, ctx.profile.as_ref(), ctx.catalog);
    LintReport {
        spec_hash: spec_hash(spec),
        violations: violations.iter().map(|v| report_violation(v, spec)).collect(),
        timing_ms: start.elapsed().as_secs_f64() * 1000.0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixResponse {
    pub plan: Value,
    pub revised_spec: Value,
    pub diff: SpecDiff,
    pub alternatives: Vec<Value>,
}

pub fn run_fix(spec: &ChartSpec, ctx: &Context<'_>) -> FixPlan {
    fix(spec, ctx.profile.as_ref(), ctx.catalog, &ctx.config)
}

pub fn fix_response(plan: &FixPlan) -> FixResponse {
    let revised: Value = serde_json::from_str(&serialize_spec(&plan.revised_spec))
        .expect("serialized specs are valid JSON");
    FixResponse {
        plan: plan.to_json(),
        revised_spec: revised,
        diff: plan.diff.clone(),
        alternatives: plan
            .alternatives
            .iter()
            .map(|c| {
                json!({
                    "violation": c.violation.to_string(),
                    "actions": c.actions,
                })
            })
            .collect(),
    }
}

/// Applies actions in order; the first inapplicable one is an error.
pub fn apply_actions(spec: &ChartSpec, actions: &[Action]) -> Result<(ChartSpec, SpecDiff), InputError> {
    let mut out = spec.clone();
    for a in actions {
        out = apply_action_to_spec(&out, a)?;
    }
    let diff = diff_specs(spec, &out);
    Ok((out, diff))
}

/// Parses a spec given either as JSON text or as a JSON value.
pub fn spec_from_value(v: &Value) -> Result<ChartSpec, InputError> {
    match v {
        Value::String(text) => Ok(parse_spec(text)?),
        other => Ok(parse_spec(&other.to_string())?),
    }
}
