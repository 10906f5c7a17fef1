//! Rule-based linting and optimizing repair of Vega-Lite chart
//! specifications.
//!
//! The pipeline: [`parse_spec`] reads a chart, [`profile_dataset`] summarises
//! its data, [`extract_facts`] turns both into ground facts, [`lint`]
//! evaluates the rule catalog over those facts, and [`fix`] picks the best
//! set of corrective edits by solving a small binary integer program.

pub mod error;
pub mod facts;
pub mod fix;
pub mod profile;
pub mod rules;
pub mod spec;

pub use error::{ActionError, ConfigError, DataError, DiffError, Infeasible, RuleError, SpecError};
pub use facts::{apply_action_to_spec, extract_facts, Const, Fact, FactBase};
pub use fix::{
    fix, instantiate_candidates, rank_alternatives, score_action, solve_bip, Action, ActionKind,
    ActionValue, BipProblem, BipSolution, CostTable, FixConfig, FixPlan, ScoredAction, Weights,
};
pub use profile::{profile_dataset, profile_file, profile_for_spec, DatasetProfile, FieldProfile, Table};
pub use rules::{default_catalog, explain, lint, lint_spec, parse_rules, LintRule, RuleCatalog, Violation};
pub use spec::{
    apply_diff, diff_specs, parse_spec, serialize_spec, Aggregate, Channel, ChartSpec, Encoding,
    FieldType, Mark, SpecDiff, StackMode,
};
