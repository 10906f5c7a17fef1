//! Random inputs for the oracle comparisons.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use vizlint_core::fix::BipVar;
use vizlint_core::{BipProblem, Const, Fact};

fn sym(pool: &[&str], rng: &mut StdRng) -> Const {
    Const::sym(pool[rng.gen_range(0..pool.len())])
}

pub fn random_fact(rng: &mut StdRng) -> Fact {
    let enc = ["e0", "e1", "e2"];
    let channels = ["x", "y", "color", "size", "shape", "text", "row", "column", "detail"];
    let types = ["quantitative", "ordinal", "nominal", "temporal"];
    let aggs = ["count", "mean", "median", "min", "max", "sum"];
    let marks = ["point", "bar", "line", "area", "tick", "text", "rect"];
    let stacks = ["zero", "none", "normalize"];
    let fields = ["a", "b"];
    let field = |rng: &mut StdRng| Const::str(fields[rng.gen_range(0..fields.len())]);
    let raw = |rng: &mut StdRng| Const::str(["pnt", "colr"][rng.gen_range(0..2)]);
    let (p, args) = match rng.gen_range(0..21) {
        0 => ("mark", vec![sym(&marks, rng)]),
        1 => ("raw_mark", vec![raw(rng)]),
        2 | 3 => ("encoding", vec![sym(&enc, rng)]),
        4 | 5 => ("channel", vec![sym(&enc, rng), sym(&channels, rng)]),
        6 => ("raw_channel", vec![sym(&enc, rng), raw(rng)]),
        7 => ("field", vec![sym(&enc, rng), field(rng)]),
        8 => ("unknown_field", vec![sym(&enc, rng), field(rng)]),
        9 => ("type", vec![sym(&enc, rng), sym(&types, rng)]),
        10 => ("raw_type", vec![sym(&enc, rng), raw(rng)]),
        11 => ("aggregate", vec![sym(&enc, rng), sym(&aggs, rng)]),
        12 => ("raw_aggregate", vec![sym(&enc, rng), raw(rng)]),
        13 => ("bin", vec![sym(&enc, rng), Const::Int([5, 10][rng.gen_range(0..2)])]),
        14 => ("log", vec![sym(&enc, rng)]),
        15 => ("zero", vec![sym(&enc, rng)]),
        16 => ("stack", vec![sym(&enc, rng), sym(&stacks, rng)]),
        17 => ("fieldtype", vec![field(rng), sym(&types, rng)]),
        18 => ("cardinality", vec![field(rng), Const::Int([3, 25][rng.gen_range(0..2)])]),
        19 => ("has_nonpositive", vec![field(rng)]),
        _ => match rng.gen_range(0..3) {
            0 => ("no_zero", vec![sym(&enc, rng)]),
            1 => ("raw_bin", vec![sym(&enc, rng), raw(rng)]),
            _ => ("raw_stack", vec![sym(&enc, rng), raw(rng)]),
        },
    };
    Fact::new(p, args)
}

pub fn random_problem(rng: &mut StdRng, max_classes: usize) -> BipProblem {
    let num_classes = rng.gen_range(1..=max_classes);
    // A class keeps one score wherever it appears, as identical actions do.
    let scores: Vec<f64> = (0..num_classes).map(|_| rng.gen_range(-0.24..0.8)).collect();
    let num_groups = rng.gen_range(1..=6);
    let mut classes: Vec<usize> = (0..num_classes).collect();
    let groups = (0..num_groups)
        .map(|_| {
            classes.shuffle(rng);
            let k = rng.gen_range(1..=num_classes.min(4));
            classes[..k]
                .iter()
                .map(|&c| BipVar { class: c, score: scores[c] })
                .collect()
        })
        .collect();
    BipProblem { groups, num_classes }
}
