//! Reference implementations used to check the engine.

#![allow(dead_code)]

pub mod random;

use std::collections::{BTreeSet, HashMap, HashSet};

use vizlint_core::rules::{Atom, Literal, Term};
use vizlint_core::{BipProblem, Const, FactBase, RuleCatalog, Violation};

/// Naive evaluator: for each rule, tries every assignment of its variables
/// over the active domain and tests each literal directly. Helper relations
/// are evaluated top-down by the same enumeration, which is sound because
/// the shipped helpers are not recursive.
pub struct NaiveLint<'a> {
    catalog: &'a RuleCatalog,
    facts: HashSet<(String, Vec<Const>)>,
    helper_preds: HashSet<String>,
    domain: Vec<Const>,
    memo: HashMap<(String, Vec<Const>), bool>,
}

fn vars_of_term(t: &Term, out: &mut Vec<String>) {
    if let Term::Var(v) = t {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
}

fn vars_of(lit: &Literal) -> Vec<String> {
    let mut out = Vec::new();
    match lit {
        Literal::Pos(a) | Literal::Neg(a) => a.args.iter().for_each(|t| vars_of_term(t, &mut out)),
        Literal::Cmp(l, _, r) => {
            vars_of_term(l, &mut out);
            vars_of_term(r, &mut out);
        }
    }
    out
}

fn collect_consts(lits: &[Literal], out: &mut BTreeSet<Const>) {
    for lit in lits {
        let terms: Vec<&Term> = match lit {
            Literal::Pos(a) | Literal::Neg(a) => a.args.iter().collect(),
            Literal::Cmp(l, _, r) => vec![l, r],
        };
        for t in terms {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        }
    }
}

impl<'a> NaiveLint<'a> {
    pub fn new(catalog: &'a RuleCatalog, facts: &FactBase) -> Self {
        let mut domain = BTreeSet::new();
        for f in facts.iter() {
            domain.extend(f.args.iter().cloned());
        }
        for r in &catalog.rules {
            collect_consts(&r.body, &mut domain);
        }
        for h in &catalog.helpers {
            collect_consts(&h.body, &mut domain);
            for t in &h.head.args {
                if let Term::Const(c) = t {
                    domain.insert(c.clone());
                }
            }
        }
        NaiveLint {
            catalog,
            facts: facts
                .iter()
                .map(|f| (f.predicate.clone(), f.args.clone()))
                .collect(),
            helper_preds: catalog.helpers.iter().map(|h| h.head.predicate.clone()).collect(),
            domain: domain.into_iter().collect(),
            memo: HashMap::new(),
        }
    }

    fn ground(t: &Term, env: &HashMap<String, Const>) -> Option<Const> {
        match t {
            Term::Const(c) => Some(c.clone()),
            Term::Var(v) => env.get(v).cloned(),
            Term::Wildcard => None,
        }
    }

    /// Whether some instantiation of the wildcards of `atom` holds.
    fn atom_holds(&mut self, atom: &Atom, env: &HashMap<String, Const>) -> bool {
        let slots: Vec<Option<Const>> = atom.args.iter().map(|t| Self::ground(t, env)).collect();
        let mut args = Vec::with_capacity(slots.len());
        self.some_completion(&atom.predicate, &slots, &mut args)
    }

    fn some_completion(&mut self, pred: &str, slots: &[Option<Const>], args: &mut Vec<Const>) -> bool {
        if args.len() == slots.len() {
            return self.holds(pred, args.clone());
        }
        match &slots[args.len()] {
            Some(c) => {
                args.push(c.clone());
                let r = self.some_completion(pred, slots, args);
                args.pop();
                r
            }
            None => {
                for k in 0..self.domain.len() {
                    args.push(self.domain[k].clone());
                    let r = self.some_completion(pred, slots, args);
                    args.pop();
                    if r {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn holds(&mut self, pred: &str, args: Vec<Const>) -> bool {
        if !self.helper_preds.contains(pred) {
            return self.facts.contains(&(pred.to_string(), args));
        }
        let key = (pred.to_string(), args);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // Guard against recursion through an unfinished query.
        self.memo.insert(key.clone(), false);
        let helpers: Vec<_> = self
            .catalog
            .helpers
            .iter()
            .filter(|h| h.head.predicate == pred)
            .cloned()
            .collect();
        let mut result = false;
        for h in helpers {
            let mut env = HashMap::new();
            let unified = h.head.args.iter().zip(&key.1).all(|(t, c)| match t {
                Term::Const(k) => k == c,
                Term::Wildcard => true,
                Term::Var(v) => match env.get(v) {
                    Some(prev) => prev == c,
                    None => {
                        env.insert(v.clone(), c.clone());
                        true
                    }
                },
            });
            if unified && !self.assignments(&h.body, env, true).is_empty() {
                result = true;
                break;
            }
        }
        self.memo.insert(key, result);
        result
    }

    fn literal_holds(&mut self, lit: &Literal, env: &HashMap<String, Const>) -> bool {
        match lit {
            Literal::Pos(a) => self.atom_holds(a, env),
            Literal::Neg(a) => !self.atom_holds(a, env),
            Literal::Cmp(l, op, r) => {
                let (l, r) = (Self::ground(l, env).unwrap(), Self::ground(r, env).unwrap());
                op.holds(&l, &r)
            }
        }
    }

    /// All satisfying assignments of the body's variables extending `env`.
    fn assignments(
        &mut self,
        body: &[Literal],
        env: HashMap<String, Const>,
        first_only: bool,
    ) -> Vec<HashMap<String, Const>> {
        let mut vars: Vec<String> = Vec::new();
        for lit in body {
            for v in vars_of(lit) {
                if !vars.contains(&v) && !env.contains_key(&v) {
                    vars.push(v);
                }
            }
        }
        // Literals become checkable at the level where their last variable
        // is bound.
        let mut due: Vec<Vec<&Literal>> = vec![Vec::new(); vars.len() + 1];
        for lit in body {
            let level = vars_of(lit)
                .iter()
                .filter_map(|v| vars.iter().position(|w| w == v))
                .map(|p| p + 1)
                .max()
                .unwrap_or(0);
            due[level].push(lit);
        }
        let mut out = Vec::new();
        let mut env = env;
        self.extend(&due, &vars, 0, &mut env, first_only, &mut out);
        out
    }

    fn extend(
        &mut self,
        due: &[Vec<&Literal>],
        vars: &[String],
        i: usize,
        env: &mut HashMap<String, Const>,
        first_only: bool,
        out: &mut Vec<HashMap<String, Const>>,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        for lit in &due[i] {
            if !self.literal_holds(lit, env) {
                return;
            }
        }
        if i == vars.len() {
            out.push(env.clone());
            return;
        }
        for k in 0..self.domain.len() {
            env.insert(vars[i].clone(), self.domain[k].clone());
            self.extend(due, vars, i + 1, env, first_only, out);
        }
        env.remove(&vars[i]);
    }

    /// Violations in catalog order, each rule's tuples sorted.
    pub fn run(&mut self) -> Vec<Violation> {
        let mut out = Vec::new();
        for rule in self.catalog.rules.clone() {
            let mut tuples: BTreeSet<Vec<Const>> = BTreeSet::new();
            for env in self.assignments(&rule.body, HashMap::new(), false) {
                tuples.insert(rule.head_params.iter().map(|p| env[p].clone()).collect());
            }
            for t in tuples {
                out.push(Violation {
                    rule_id: rule.id.clone(),
                    category: rule.category,
                    bindings: rule.head_params.iter().cloned().zip(t).collect(),
                    description: rule.description.clone(),
                });
            }
        }
        out
    }
}

/// Exhaustive optimum over all 2^n class assignments; `None` when no
/// assignment is feasible.
pub fn brute_force_bip(p: &BipProblem) -> Option<f64> {
    let n = p.num_classes;
    let mut best: Option<f64> = None;
    for mask in 0u64..(1u64 << n) {
        let classes: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if p.is_feasible(&classes) {
            let v = p.objective(&classes);
            if best.is_none_or(|b| v > b) {
                best = Some(v);
            }
        }
    }
    best
}
