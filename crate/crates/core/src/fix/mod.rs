//! Optimizing repair.
//!
//! For each violation the rule's templates are instantiated into concrete
//! actions; each distinct action is simulated and scored; actions that also
//! solve other violations join those violations' candidate lists; and a
//! binary program picks one action per violation, with identical actions
//! forced to agree, maximizing the total score.

mod action;
mod bip;
mod candidates;
mod config;
mod score;

use serde_json::{json, Value};

use crate::facts::apply_action_to_spec;
use crate::profile::DatasetProfile;
use crate::rules::{lint_spec, RuleCatalog, Violation};
use crate::spec::{diff_specs, ChartSpec, SpecDiff};

pub use self::action::{Action, ActionKind, ActionValue};
pub use self::bip::{solve_bip, BipProblem, BipSolution, BipVar};
pub use self::candidates::instantiate_candidates;
pub use self::config::{CostTable, FixConfig, Weights, DEFAULT_CONFIG};
pub use self::score::{combine, reward_terms, score_action, ScoredAction};

use self::action::channel_rank;

/// Candidates of one violation after scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidates {
    pub violation: Violation,
    pub actions: Vec<ScoredAction>,
}

/// Adds every scored action to the candidate list of each other violation
/// it also solves. One pass suffices because the solved set of each action
/// is known up front.
pub fn expand_candidates(lists: &mut [Candidates]) {
    let all: Vec<ScoredAction> = lists
        .iter()
        .flat_map(|c| c.actions.iter().cloned())
        .collect();
    for a in &all {
        for list in lists.iter_mut() {
            if a.solves(&list.violation) && !list.actions.iter().any(|b| b.action == a.action) {
                list.actions.push(a.clone());
            }
        }
    }
}

/// Candidates of a violation by descending score; equal scores keep the
/// action order.
pub fn rank_alternatives(scored: &[ScoredAction]) -> Vec<ScoredAction> {
    let mut out = scored.to_vec();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.action.cmp(&b.action))
    });
    out
}

/// Builds the selection program from candidate lists: one group per list,
/// one equivalence class per distinct action.
pub fn build_problem(lists: &[Candidates]) -> (BipProblem, Vec<Action>) {
    let mut classes: Vec<Action> = Vec::new();
    let mut groups = Vec::with_capacity(lists.len());
    for list in lists {
        let vars = list
            .actions
            .iter()
            .map(|s| {
                let class = match classes.iter().position(|a| *a == s.action) {
                    Some(i) => i,
                    None => {
                        classes.push(s.action.clone());
                        classes.len() - 1
                    }
                };
                BipVar {
                    class,
                    score: s.score,
                }
            })
            .collect();
        groups.push(vars);
    }
    let problem = BipProblem {
        num_classes: classes.len(),
        groups,
    };
    (problem, classes)
}

/// Result of [`fix`].
#[derive(Debug, Clone, PartialEq)]
pub struct FixPlan {
    pub input_violations: Vec<Violation>,
    /// Chosen actions, without duplicates, in application order.
    pub selected: Vec<ScoredAction>,
    pub objective: f64,
    /// The action chosen for each violation that took part in the program.
    pub per_rule: Vec<(Violation, Action)>,
    /// Violations without any applicable candidate that solves them, or
    /// dropped because their candidates could not be chosen consistently.
    pub unfixable: Vec<Violation>,
    /// Scored candidates of every violation, best first.
    pub alternatives: Vec<Candidates>,
    /// Selected actions that failed when applied together.
    pub skipped: Vec<(Action, String)>,
    pub revised_spec: ChartSpec,
    pub residual_violations: Vec<Violation>,
    pub diff: SpecDiff,
}

impl FixPlan {
    fn identity(spec: &ChartSpec) -> FixPlan {
        FixPlan {
            input_violations: Vec::new(),
            selected: Vec::new(),
            objective: 0.0,
            per_rule: Vec::new(),
            unfixable: Vec::new(),
            alternatives: Vec::new(),
            skipped: Vec::new(),
            revised_spec: spec.clone(),
            residual_violations: Vec::new(),
            diff: SpecDiff::default(),
        }
    }

    pub fn actions(&self) -> Vec<Action> {
        self.selected.iter().map(|s| s.action.clone()).collect()
    }

    /// True when there were violations but nothing could be selected.
    pub fn is_unfixable(&self) -> bool {
        !self.input_violations.is_empty() && self.selected.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let ids = |vs: &[Violation]| -> Vec<String> { vs.iter().map(|v| v.to_string()).collect() };
        json!({
            "selected": self.selected.iter().map(|s| json!({
                "name": s.action.name(),
                "channel": s.action.channel,
                "value": s.action.value.as_ref().map(ActionValue::to_json),
                "label": s.action.to_string(),
                "score": s.score,
                "reward": s.reward,
                "cost": s.cost,
            })).collect::<Vec<_>>(),
            "objective": self.objective,
            "per_rule": self.per_rule.iter().map(|(v, a)| json!({
                "violation": v.to_string(),
                "action": a.to_string(),
            })).collect::<Vec<_>>(),
            "violations": ids(&self.input_violations),
            "unfixable": ids(&self.unfixable),
            "residuals": ids(&self.residual_violations),
            "diff": self.diff,
        })
    }
}

/// Order in which selected actions are applied: mark-level first, then by
/// target channel, then by operation.
fn application_order(a: &Action, b: &Action) -> std::cmp::Ordering {
    channel_rank(a.channel.as_deref())
        .cmp(&channel_rank(b.channel.as_deref()))
        .then_with(|| a.kind.cmp(&b.kind))
        .then_with(|| a.value.cmp(&b.value))
}

/// Scores the candidates of every violation and expands them across rules.
/// Returns the lists of fixable violations and the unfixable violations.
pub fn score_candidates(
    spec: &ChartSpec,
    profile: Option<&DatasetProfile>,
    violations: &[Violation],
    catalog: &RuleCatalog,
    config: &FixConfig,
) -> (Vec<Candidates>, Vec<Violation>) {
    let raw = instantiate_candidates(spec, profile, violations, catalog, config);
    let mut scored: Vec<(Action, Option<ScoredAction>)> = Vec::new();
    for (_, actions) in &raw {
        for a in actions {
            if !scored.iter().any(|(b, _)| b == a) {
                let s = score_action(spec, profile, a, violations, catalog, config).ok();
                scored.push((a.clone(), s));
            }
        }
    }
    let lookup = |a: &Action| -> Option<&ScoredAction> {
        scored
            .iter()
            .find(|(b, _)| b == a)
            .and_then(|(_, s)| s.as_ref())
    };
    let mut lists: Vec<Candidates> = raw
        .iter()
        .map(|(v, actions)| Candidates {
            violation: v.clone(),
            actions: actions
                .iter()
                .filter_map(|a| lookup(a))
                .filter(|s| s.solves(v))
                .cloned()
                .collect(),
        })
        .collect();
    expand_candidates(&mut lists);
    let (fixable, unfixable): (Vec<Candidates>, Vec<Candidates>) =
        lists.into_iter().partition(|c| !c.actions.is_empty());
    (fixable, unfixable.into_iter().map(|c| c.violation).collect())
}

fn single_pass(
    spec: &ChartSpec,
    profile: Option<&DatasetProfile>,
    catalog: &RuleCatalog,
    config: &FixConfig,
) -> FixPlan {
    let violations = lint_spec(spec, profile, catalog);
    if violations.is_empty() {
        return FixPlan::identity(spec);
    }
    let (mut lists, mut unfixable) = score_candidates(spec, profile, &violations, catalog, config);
    let alternatives: Vec<Candidates> = lists
        .iter()
        .map(|c| Candidates {
            violation: c.violation.clone(),
            actions: rank_alternatives(&c.actions),
        })
        .collect();

    let (solution, classes) = loop {
        let (problem, classes) = build_problem(&lists);
        match solve_bip(&problem) {
            Ok(s) => break (s, classes),
            Err(e) => {
                // Give up on the last group of the conflicting set and retry.
                let last = *e.groups.last().expect("infeasible sets are nonempty");
                unfixable.push(lists.remove(last).violation);
            }
        }
    };

    let per_rule: Vec<(Violation, Action)> = lists
        .iter()
        .zip(&solution.choice)
        .map(|(c, &i)| (c.violation.clone(), c.actions[i].action.clone()))
        .collect();
    let mut selected: Vec<ScoredAction> = Vec::new();
    for (class, chosen) in solution.classes.iter().enumerate() {
        if !chosen {
            continue;
        }
        let action = &classes[class];
        let scored = lists
            .iter()
            .flat_map(|c| c.actions.iter())
            .find(|s| s.action == *action)
            .expect("every class has a scored action");
        selected.push(scored.clone());
    }
    selected.sort_by(|a, b| application_order(&a.action, &b.action));

    let mut revised = spec.clone();
    let mut skipped = Vec::new();
    for s in &selected {
        match apply_action_to_spec(&revised, &s.action) {
            Ok(next) => revised = next,
            Err(e) => skipped.push((s.action.clone(), e.to_string())),
        }
    }
    let residual = lint_spec(&revised, profile, catalog);
    unfixable.sort_by_key(|v| violations.iter().position(|w| w == v));
    FixPlan {
        diff: diff_specs(spec, &revised),
        input_violations: violations,
        selected,
        objective: solution.objective,
        per_rule,
        unfixable,
        alternatives,
        skipped,
        revised_spec: revised,
        residual_violations: residual,
    }
}

/// Lints `spec` and selects the best set of corrective actions.
///
/// With `max_passes > 1` the fixer runs again on what remains after each
/// round, as long as violations remain and the previous round changed the
/// chart.
pub fn fix(
    spec: &ChartSpec,
    profile: Option<&DatasetProfile>,
    catalog: &RuleCatalog,
    config: &FixConfig,
) -> FixPlan {
    let mut plan = single_pass(spec, profile, catalog, config);
    for _ in 1..config.max_passes {
        if plan.residual_violations.is_empty() || plan.selected.is_empty() {
            break;
        }
        let next = single_pass(&plan.revised_spec, profile, catalog, config);
        if next.selected.is_empty() {
            break;
        }
        plan.selected.extend(next.selected);
        plan.objective += next.objective;
        plan.per_rule.extend(next.per_rule);
        plan.skipped.extend(next.skipped);
        plan.unfixable = next.unfixable;
        plan.revised_spec = next.revised_spec;
        plan.residual_violations = next.residual_violations;
    }
    plan.diff = diff_specs(spec, &plan.revised_spec);
    plan
}

/// Applies actions in order, stopping at the first that fails.
pub fn apply_actions(spec: &ChartSpec, actions: &[Action]) -> Result<ChartSpec, crate::error::ActionError> {
    actions
        .iter()
        .try_fold(spec.clone(), |s, a| apply_action_to_spec(&s, a))
}
