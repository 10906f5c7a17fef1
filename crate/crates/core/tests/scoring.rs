mod common;

use proptest::prelude::*;
use vizlint_core::fix::{combine, reward_terms};
use vizlint_core::{
    default_catalog, lint_spec, score_action, Action, ActionKind, ActionValue, Channel, FixConfig,
};

const TOL: f64 = 1e-12;

#[test]
fn partial_fix_with_a_side_effect() {
    let (plus, minus, reward) = reward_terms(&["r1", "r2"], &["r2", "r3"], 0.05);
    assert_eq!(plus, 0.5);
    assert_eq!(minus, 0.5);
    assert!((reward - 0.475).abs() <= TOL);
}

#[test]
fn no_residuals_means_no_penalty() {
    assert_eq!(reward_terms(&["r1"], &[], 0.05), (1.0, 0.0, 1.0));
    assert_eq!(reward_terms(&["r1", "r2"], &[], 0.05), (1.0, 0.0, 1.0));
}

#[test]
fn nothing_solved() {
    let (plus, minus, reward) = reward_terms(&["r1"], &["r1", "r2", "r3"], 0.05);
    assert_eq!(plus, 0.0);
    assert!((minus - 2.0 / 3.0).abs() <= TOL);
    assert!((reward + 0.05 * 2.0 / 3.0).abs() <= TOL);
}

#[test]
fn score_is_weighted_difference() {
    assert!((combine(1.0, 0.5, 0.8, 0.2) - 0.7).abs() <= TOL);
    assert!((combine(0.475, 0.0, 0.8, 0.2) - 0.38).abs() <= TOL);
}

proptest! {
    #[test]
    fn reward_terms_match_set_arithmetic(
        before in prop::collection::btree_set(0u8..12, 1..8),
        after in prop::collection::btree_set(0u8..12, 0..8),
    ) {
        let b: Vec<u8> = before.iter().copied().collect();
        let a: Vec<u8> = after.iter().copied().collect();
        let (plus, minus, reward) = reward_terms(&b, &a, 0.05);
        let solved = before.difference(&after).count();
        let introduced = after.difference(&before).count();
        // Compare cross-multiplied integers so the check itself is exact.
        prop_assert!((plus * b.len() as f64 - solved as f64).abs() <= TOL);
        if a.is_empty() {
            prop_assert_eq!(minus, 0.0);
        } else {
            prop_assert!((minus * a.len() as f64 - introduced as f64).abs() <= TOL);
        }
        prop_assert!((0.0..=1.0).contains(&plus) && (0.0..=1.0).contains(&minus));
        prop_assert!((-0.05 - TOL..=1.0 + TOL).contains(&reward));
    }
}

#[test]
fn change_channel_on_the_negative_size_case() {
    let (spec, profile) = common::figure("fig1c");
    let cfg = FixConfig::default();
    let before = lint_spec(&spec, Some(&profile), default_catalog());
    let action = Action::with(ActionKind::ChangeChannel, "size", ActionValue::Channel(Channel::Color));
    let s = score_action(&spec, Some(&profile), &action, &before, default_catalog(), &cfg).unwrap();
    assert_eq!((s.reward_plus, s.reward_minus), (0.5, 0.0));
    let cost = 4.53 / 4.71;
    assert!((s.cost - cost).abs() <= TOL);
    assert!((s.score - (0.8 * 0.5 - 0.2 * cost)).abs() <= TOL);
}

#[test]
fn removing_count_from_y_introduces_field_or_count() {
    let (spec, profile) = common::figure("fig1d");
    let cfg = FixConfig::default();
    let before = lint_spec(&spec, Some(&profile), default_catalog());
    let action = Action::on(ActionKind::RemoveAggregate, "y");
    let s = score_action(&spec, Some(&profile), &action, &before, default_catalog(), &cfg).unwrap();
    assert_eq!(s.reward_plus, 1.0);
    assert!(s.reward_minus > 0.0);
    assert_eq!(s.introduced.len(), 1);
    assert_eq!(s.introduced[0].rule_id, "field_or_count");
}

#[test]
fn inapplicable_action_is_an_error_not_a_panic() {
    let (spec, profile) = common::figure("fig1a");
    let before = lint_spec(&spec, Some(&profile), default_catalog());
    let action = Action::on(ActionKind::RemoveLog, "color");
    assert!(score_action(&spec, Some(&profile), &action, &before, default_catalog(), &FixConfig::default()).is_err());
}

#[test]
fn default_scores_stay_within_bounds() {
    let cfg = FixConfig::default();
    let max_cost = cfg.costs.entries().map(|(_, c)| c).fold(0.0, f64::max);
    assert!((max_cost - 1.0).abs() <= TOL);
    let lo = combine(-0.05, 1.0, 0.8, 0.2);
    let hi = combine(1.0, 0.0, 0.8, 0.2);
    assert!((lo + 0.24).abs() <= TOL && (hi - 0.8).abs() <= TOL);
    for (_, spec, profile) in common::corpus() {
        let before = lint_spec(&spec, Some(&profile), default_catalog());
        let plan = vizlint_core::fix(&spec, Some(&profile), default_catalog(), &cfg);
        for c in &plan.alternatives {
            for s in &c.actions {
                assert!(s.score >= lo - TOL && s.score <= hi + TOL);
            }
        }
        assert!(!before.is_empty());
    }
}
