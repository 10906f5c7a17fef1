#![allow(dead_code)]

pub mod strategies;

use std::path::{Path, PathBuf};

use vizlint_core::{parse_spec, profile_file, profile_for_spec, ChartSpec, DatasetProfile};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn data(name: &str) -> DatasetProfile {
    profile_file(&fixtures().join("data").join(name)).expect("fixture data loads")
}

pub fn load(path: &Path) -> (ChartSpec, Option<DatasetProfile>) {
    let text = std::fs::read_to_string(path).expect("fixture exists");
    let spec = parse_spec(&text).expect("fixture parses");
    let profile = profile_for_spec(&spec, path.parent()).expect("fixture data loads");
    (spec, profile)
}

pub fn figure(name: &str) -> (ChartSpec, DatasetProfile) {
    let (spec, profile) = load(&fixtures().join("figures").join(format!("{name}.json")));
    (spec, profile.expect("figures reference bundled data"))
}

/// The repair corpus, sorted by file name.
pub fn corpus() -> Vec<(String, ChartSpec, DatasetProfile)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures().join("corpus"))
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let (spec, profile) = load(&p);
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, spec, profile.expect("corpus references bundled data"))
        })
        .collect()
}

pub struct RuleCase {
    pub rule: String,
    pub profile: DatasetProfile,
    pub fires: ChartSpec,
    pub near_miss: ChartSpec,
}

pub fn rule_cases() -> Vec<RuleCase> {
    let text = std::fs::read_to_string(fixtures().join("rules.json")).expect("rules.json");
    let cases: Vec<serde_json::Value> = serde_json::from_str(&text).expect("rules.json parses");
    cases
        .iter()
        .map(|c| RuleCase {
            rule: c["rule"].as_str().unwrap().to_string(),
            profile: data(c["data"].as_str().unwrap()),
            fires: parse_spec(c["fires"].as_str().unwrap()).unwrap(),
            near_miss: parse_spec(c["near_miss"].as_str().unwrap()).unwrap(),
        })
        .collect()
}
