//! Reward, cost and score of a single candidate action.

use serde::Serialize;

use super::{Action, FixConfig};
use crate::error::ActionError;
use crate::facts::apply_action_to_spec;
use crate::profile::DatasetProfile;
use crate::rules::{lint_spec, RuleCatalog, Violation};
use crate::spec::ChartSpec;

/// Reward terms for moving from the violation set `before` to `after`:
/// `(reward_plus, reward_minus, reward)`.
///
/// `reward_plus` is the share of `before` that is gone from `after`,
/// `reward_minus` the share of `after` that is new (zero when `after` is
/// empty), and `reward = reward_plus - w * reward_minus`.
pub fn reward_terms<T: PartialEq>(before: &[T], after: &[T], w: f64) -> (f64, f64, f64) {
    let solved = before.iter().filter(|v| !after.contains(v)).count();
    let introduced = after.iter().filter(|v| !before.contains(v)).count();
    let plus = if before.is_empty() {
        0.0
    } else {
        solved as f64 / before.len() as f64
    };
    let minus = if after.is_empty() {
        0.0
    } else {
        introduced as f64 / after.len() as f64
    };
    (plus, minus, plus - w * minus)
}

/// `alpha * reward - beta * cost`.
pub fn combine(reward: f64, cost: f64, alpha: f64, beta: f64) -> f64 {
    alpha * reward - beta * cost
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredAction {
    #[serde(flatten)]
    pub action: Action,
    pub reward_plus: f64,
    pub reward_minus: f64,
    pub reward: f64,
    pub cost: f64,
    pub score: f64,
    #[serde(skip)]
    pub solved: Vec<Violation>,
    #[serde(skip)]
    pub introduced: Vec<Violation>,
}

impl ScoredAction {
    pub fn solves(&self, v: &Violation) -> bool {
        self.solved.contains(v)
    }
}

/// Simulates `action` on `spec` and scores the outcome against the
/// violations `before` it.
pub fn score_action(
    spec: &ChartSpec,
    profile: Option<&DatasetProfile>,
    action: &Action,
    before: &[Violation],
    catalog: &RuleCatalog,
    config: &FixConfig,
) -> Result<ScoredAction, ActionError> {
    let revised = apply_action_to_spec(spec, action)?;
    let after = lint_spec(&revised, profile, catalog);
    let (reward_plus, reward_minus, reward) = reward_terms(before, &after, config.weights.w);
    let cost = config.costs.get(action.kind);
    Ok(ScoredAction {
        action: action.clone(),
        reward_plus,
        reward_minus,
        reward,
        cost,
        score: combine(reward, cost, config.weights.alpha, config.weights.beta),
        solved: before.iter().filter(|v| !after.contains(v)).cloned().collect(),
        introduced: after.iter().filter(|v| !before.contains(v)).cloned().collect(),
    })
}
