mod common;

use std::collections::HashSet;

use vizlint_core::rules::{Category, CORE_PREDICATES};
use vizlint_core::{default_catalog, explain, extract_facts, lint_spec, parse_rules};

#[test]
fn catalog_has_41_unique_rules() {
    let cat = default_catalog();
    assert_eq!(cat.len(), 41);
    let ids: HashSet<&str> = cat.rules.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids.len(), 41);
    for cat_id in [Category::I1, Category::I2, Category::I3, Category::I4] {
        assert!(cat.rules.iter().any(|r| r.category == cat_id));
    }
    assert!(cat.rules.iter().all(|r| (1..=5).contains(&r.actions.len())));
    assert!(cat.version.is_some());
}

#[test]
fn every_rule_fires_on_its_fixture_and_not_on_the_near_miss() {
    let cat = default_catalog();
    let cases = common::rule_cases();
    let covered: HashSet<&str> = cases.iter().map(|c| c.rule.as_str()).collect();
    for r in &cat.rules {
        assert!(covered.contains(r.id.as_str()), "no fixture for {}", r.id);
    }
    for c in &cases {
        let fires = lint_spec(&c.fires, Some(&c.profile), cat);
        assert!(
            fires.iter().any(|v| v.rule_id == c.rule),
            "{} did not fire: {fires:?}",
            c.rule
        );
        let near = lint_spec(&c.near_miss, Some(&c.profile), cat);
        assert!(
            !near.iter().any(|v| v.rule_id == c.rule),
            "{} fired on its near miss",
            c.rule
        );
    }
}

#[test]
fn violations_are_unique_and_fully_bound() {
    let cat = default_catalog();
    for c in common::rule_cases() {
        let vs = lint_spec(&c.fires, Some(&c.profile), cat);
        let mut seen = HashSet::new();
        for v in &vs {
            assert!(seen.insert((v.rule_id.clone(), v.bindings.clone())));
            let rule = cat.rule(&v.rule_id).unwrap();
            let params: Vec<&str> = v.bindings.iter().map(|(k, _)| k.as_str()).collect();
            assert_eq!(params, rule.head_params.iter().map(String::as_str).collect::<Vec<_>>());
            assert_eq!(v.category, rule.category);
            assert!(explain(v, cat).unwrap().starts_with(&rule.description));
        }
    }
}

#[test]
fn extracted_predicates_are_declared() {
    let cat = default_catalog();
    let mut declared: HashSet<(String, usize)> =
        CORE_PREDICATES.iter().map(|(p, a)| (p.to_string(), *a)).collect();
    declared.extend(cat.extensions.iter().cloned());
    for c in common::rule_cases() {
        for spec in [&c.fires, &c.near_miss] {
            for f in extract_facts(spec, Some(&c.profile)).iter() {
                assert!(declared.contains(&(f.predicate.clone(), f.args.len())), "{f}");
            }
        }
    }
}

#[test]
fn published_rule_form_parses() {
    let text = "%@category I1\n%@describe d\n%@action REMOVE_BIN(C)\n\
                hard(bin_and_aggregate,C) :- bin(E,_), aggregate(E,_), channel(E,C).\n";
    let cat = parse_rules(text).unwrap();
    assert_eq!(cat.rules[0].head_params, ["C"]);
    assert_eq!(cat.rules[0].body.len(), 3);
}
