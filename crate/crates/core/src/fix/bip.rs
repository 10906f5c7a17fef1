//! Exact branch and bound for the action-selection program:
//!
//! maximize the summed score of chosen variables, subject to exactly one
//! chosen variable per group, with all variables of an equivalence class
//! taking the same value.
//!
//! Choosing a class sets every one of its variables, so a feasible solution
//! is a set of classes covering each group exactly once. Groups linked by
//! shared classes form independent components that are solved separately.

use crate::error::Infeasible;

const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipVar {
    pub class: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BipProblem {
    /// Variables of each group, in preference order for tie-breaks.
    pub groups: Vec<Vec<BipVar>>,
    pub num_classes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipSolution {
    /// Index into `groups[g]` of the variable set to one.
    pub choice: Vec<usize>,
    /// Value of each equivalence class.
    pub classes: Vec<bool>,
    pub objective: f64,
}

impl BipProblem {
    /// Groups containing each class.
    fn class_groups(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (g, vars) in self.groups.iter().enumerate() {
            for v in vars {
                if !out[v.class].contains(&g) {
                    out[v.class].push(g);
                }
            }
        }
        out
    }

    /// Total score of the variables of a class.
    fn class_score(&self, class: usize) -> f64 {
        self.groups
            .iter()
            .flat_map(|vars| vars.iter())
            .filter(|v| v.class == class)
            .map(|v| v.score)
            .sum()
    }

    fn components(&self, class_groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let n = self.groups.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for gs in class_groups {
            for w in gs.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for g in 0..n {
            let r = find(&mut parent, g);
            match root_of[r] {
                Some(i) => comps[i].push(g),
                None => {
                    root_of[r] = Some(comps.len());
                    comps.push(vec![g]);
                }
            }
        }
        comps
    }

    /// Checks the exactly-one and equivalence constraints.
    pub fn is_feasible(&self, classes: &[bool]) -> bool {
        classes.len() == self.num_classes
            && self
                .groups
                .iter()
                .all(|vars| vars.iter().filter(|v| classes[v.class]).count() == 1)
    }

    /// Objective of a class assignment.
    pub fn objective(&self, classes: &[bool]) -> f64 {
        self.groups
            .iter()
            .flat_map(|vars| vars.iter())
            .filter(|v| classes[v.class])
            .map(|v| v.score)
            .sum()
    }
}

struct Search<'a> {
    problem: &'a BipProblem,
    class_groups: &'a [Vec<usize>],
    class_score: &'a [f64],
    component: &'a [usize],
    covered: Vec<bool>,
    choice: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl Search<'_> {
    fn compatible(&self, class: usize) -> bool {
        self.class_groups[class].iter().all(|g| !self.covered[*g])
    }

    fn bound(&self) -> f64 {
        self.component
            .iter()
            .filter(|g| !self.covered[**g])
            .map(|g| {
                self.problem.groups[*g]
                    .iter()
                    .filter(|v| self.compatible(v.class))
                    .map(|v| v.score)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum()
    }

    fn run(&mut self, value: f64) {
        let Some(&g) = self.component.iter().find(|g| !self.covered[**g]) else {
            if self.best.as_ref().is_none_or(|(b, _)| value > *b + EPS) {
                self.best = Some((value, self.choice.clone()));
            }
            return;
        };
        if let Some((b, _)) = &self.best {
            if value + self.bound() <= *b + EPS {
                return;
            }
        }
        for (i, var) in self.problem.groups[g].iter().enumerate() {
            if !self.compatible(var.class) {
                continue;
            }
            for &h in &self.class_groups[var.class] {
                self.covered[h] = true;
                self.choice[h] = self.problem.groups[h]
                    .iter()
                    .position(|v| v.class == var.class)
                    .expect("class occurs in its groups");
            }
            debug_assert_eq!(self.choice[g], i);
            self.run(value + self.class_score[var.class]);
            for &h in &self.class_groups[var.class] {
                self.covered[h] = false;
            }
        }
    }
}

/// Solves the program exactly. Among optimal solutions the one whose
/// per-group choice vector is lexicographically smallest is returned.
pub fn solve_bip(problem: &BipProblem) -> Result<BipSolution, Infeasible> {
    let class_groups = problem.class_groups();
    let class_score: Vec<f64> = (0..problem.num_classes).map(|c| problem.class_score(c)).collect();
    let n = problem.groups.len();
    let mut choice = vec![usize::MAX; n];
    let mut classes = vec![false; problem.num_classes];
    let mut objective = 0.0;
    let mut infeasible: Vec<usize> = Vec::new();

    for component in problem.components(&class_groups) {
        let mut search = Search {
            problem,
            class_groups: &class_groups,
            class_score: &class_score,
            component: &component,
            covered: vec![false; n],
            choice: vec![usize::MAX; n],
            best: None,
        };
        search.run(0.0);
        match search.best {
            Some((value, ch)) => {
                objective += value;
                for &g in &component {
                    choice[g] = ch[g];
                    classes[problem.groups[g][ch[g]].class] = true;
                }
            }
            None => infeasible.extend(component),
        }
    }
    if !infeasible.is_empty() {
        infeasible.sort_unstable();
        return Err(Infeasible { groups: infeasible });
    }
    Ok(BipSolution {
        choice,
        classes,
        objective,
    })
}
