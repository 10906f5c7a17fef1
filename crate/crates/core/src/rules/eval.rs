//! Bottom-up evaluation: helper relations stratum by stratum, then one join
//! per lint rule.

use std::collections::{BTreeSet, HashMap};

use super::{Atom, Literal, RuleCatalog, Term, Violation};
use crate::facts::{Const, Fact, FactBase};

/// Variable slots of one rule.
struct Slots(HashMap<String, usize>);

impl Slots {
    fn of(head: &[Term], body: &[Literal]) -> Slots {
        let mut map = HashMap::new();
        let mut add = |t: &Term| {
            if let Term::Var(v) = t {
                let n = map.len();
                map.entry(v.clone()).or_insert(n);
            }
        };
        for lit in body {
            match lit {
                Literal::Pos(a) | Literal::Neg(a) => a.args.iter().for_each(&mut add),
                Literal::Cmp(l, _, r) => {
                    add(l);
                    add(r);
                }
            }
        }
        head.iter().for_each(&mut add);
        Slots(map)
    }

    fn get(&self, v: &str) -> usize {
        self.0[v]
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

type Row = Vec<Option<Const>>;

fn value<'a>(t: &'a Term, row: &'a Row, slots: &Slots) -> Option<&'a Const> {
    match t {
        Term::Const(c) => Some(c),
        Term::Var(v) => row[slots.get(v)].as_ref(),
        Term::Wildcard => None,
    }
}

/// Extends `row` so that `atom` matches `fact`, or returns None.
fn unify(atom: &Atom, fact: &Fact, row: &Row, slots: &Slots) -> Option<Row> {
    if atom.args.len() != fact.args.len() {
        return None;
    }
    let mut out = row.clone();
    for (t, c) in atom.args.iter().zip(&fact.args) {
        match t {
            Term::Wildcard => {}
            Term::Const(k) => {
                if k != c {
                    return None;
                }
            }
            Term::Var(v) => {
                let slot = &mut out[slots.get(v)];
                match slot {
                    Some(bound) if bound != c => return None,
                    Some(_) => {}
                    None => *slot = Some(c.clone()),
                }
            }
        }
    }
    Some(out)
}

fn is_ready(lit: &Literal, row: &Row, slots: &Slots) -> bool {
    let bound = |t: &Term| match t {
        Term::Var(v) => row[slots.get(v)].is_some(),
        _ => true,
    };
    match lit {
        Literal::Pos(_) => false,
        Literal::Neg(a) => a.args.iter().all(bound),
        Literal::Cmp(l, _, r) => bound(l) && bound(r),
    }
}

fn filter_holds(lit: &Literal, row: &Row, slots: &Slots, db: &FactBase) -> bool {
    match lit {
        Literal::Cmp(l, op, r) => match (value(l, row, slots), value(r, row, slots)) {
            (Some(a), Some(b)) => op.holds(a, b),
            _ => false,
        },
        Literal::Neg(a) => !db
            .with_predicate(&a.predicate)
            .any(|f| unify(a, f, row, slots).is_some()),
        Literal::Pos(_) => unreachable!("positive literals are joined, not filtered"),
    }
}

/// All variable assignments satisfying `body` over `db`.
fn solve(body: &[Literal], slots: &Slots, db: &FactBase) -> Vec<Row> {
    let mut rows: Vec<Row> = vec![vec![None; slots.len()]];
    let mut pending: Vec<&Literal> = body
        .iter()
        .filter(|l| !matches!(l, Literal::Pos(_)))
        .collect();
    let apply_filters = |rows: Vec<Row>, pending: &mut Vec<&Literal>| -> Vec<Row> {
        let Some(sample) = rows.first() else {
            return rows;
        };
        let (ready, rest): (Vec<&Literal>, Vec<&Literal>) =
            pending.iter().partition(|l| is_ready(l, sample, slots));
        *pending = rest;
        rows.into_iter()
            .filter(|row| ready.iter().all(|l| filter_holds(l, row, slots, db)))
            .collect()
    };
    rows = apply_filters(rows, &mut pending);
    for lit in body {
        let Literal::Pos(atom) = lit else { continue };
        let mut next = Vec::new();
        for row in &rows {
            for fact in db.with_predicate(&atom.predicate) {
                if let Some(r) = unify(atom, fact, row, slots) {
                    next.push(r);
                }
            }
        }
        rows = apply_filters(next, &mut pending);
        if rows.is_empty() {
            return rows;
        }
    }
    debug_assert!(pending.is_empty(), "range restriction guarantees every filter runs");
    rows
}

fn instantiate(args: &[Term], row: &Row, slots: &Slots) -> Vec<Const> {
    args.iter()
        .map(|t| value(t, row, slots).cloned().expect("head variables are bound"))
        .collect()
}

/// Facts plus every helper relation the catalog derives from them.
pub(crate) fn saturate(facts: &FactBase, catalog: &RuleCatalog) -> FactBase {
    let mut db = facts.clone();
    for stratum in &catalog.strata {
        let rules: Vec<_> = catalog
            .helpers
            .iter()
            .filter(|h| stratum.contains(&h.head.predicate))
            .map(|h| (h, Slots::of(&h.head.args, &h.body)))
            .collect();
        loop {
            let mut derived = Vec::new();
            for (h, slots) in &rules {
                for row in solve(&h.body, slots, &db) {
                    derived.push(Fact::new(h.head.predicate.clone(), instantiate(&h.head.args, &row, slots)));
                }
            }
            let mut changed = false;
            for f in derived {
                changed |= db.insert(f);
            }
            if !changed {
                break;
            }
        }
    }
    db
}

/// Evaluates every lint rule of the catalog over `facts`.
///
/// Violations come out in catalog order, then by their bound values; each
/// distinct binding appears once.
pub fn lint(facts: &FactBase, catalog: &RuleCatalog) -> Vec<Violation> {
    let db = saturate(facts, catalog);
    let mut out = Vec::new();
    for rule in &catalog.rules {
        let head: Vec<Term> = rule.head_params.iter().map(|v| Term::Var(v.clone())).collect();
        let slots = Slots::of(&head, &rule.body);
        let tuples: BTreeSet<Vec<Const>> = solve(&rule.body, &slots, &db)
            .iter()
            .map(|row| instantiate(&head, row, &slots))
            .collect();
        for tuple in tuples {
            out.push(Violation {
                rule_id: rule.id.clone(),
                category: rule.category,
                bindings: rule.head_params.iter().cloned().zip(tuple).collect(),
                description: rule.description.clone(),
            });
        }
    }
    out
}
