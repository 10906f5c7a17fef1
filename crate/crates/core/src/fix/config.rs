use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use super::ActionKind;
use crate::error::ConfigError;

/// Configuration shipped with the crate.
pub const DEFAULT_CONFIG: &str = include_str!("../../config/default.json");

/// Objective weights: side-effect penalty `w`, reward weight `alpha`, cost
/// weight `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub w: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            w: 0.05,
            alpha: 0.8,
            beta: 0.2,
        }
    }
}

/// Per-action edit costs, normalized so the largest is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    costs: Vec<f64>,
}

impl CostTable {
    /// Normalizes raw costs by their maximum. Every action needs an entry.
    pub fn from_raw(raw: &BTreeMap<String, f64>) -> Result<CostTable, ConfigError> {
        for name in raw.keys() {
            if ActionKind::from_name(name).is_none() {
                return Err(ConfigError::Parse(format!("unknown action `{name}` in cost table")));
            }
        }
        let mut costs = Vec::with_capacity(ActionKind::ALL.len());
        for kind in ActionKind::ALL {
            let c = *raw
                .get(kind.name())
                .ok_or_else(|| ConfigError::MissingCost(kind.name().to_string()))?;
            if !c.is_finite() || c < 0.0 {
                return Err(ConfigError::BadCost(kind.name().to_string()));
            }
            costs.push(c);
        }
        let max = costs.iter().copied().fold(0.0, f64::max);
        if max > 0.0 {
            for c in &mut costs {
                *c /= max;
            }
        }
        Ok(CostTable { costs })
    }

    pub fn get(&self, kind: ActionKind) -> f64 {
        self.costs[kind as usize]
    }

    pub fn entries(&self) -> impl Iterator<Item = (ActionKind, f64)> + '_ {
        ActionKind::ALL.iter().map(|k| (*k, self.get(*k)))
    }
}

impl Default for CostTable {
    fn default() -> Self {
        FixConfig::default().costs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixConfig {
    pub weights: Weights,
    pub costs: CostTable,
    /// Bin count written by CORRECT_BIN.
    pub bin_default: u32,
    /// Number of lint/fix rounds; 1 runs the optimizer once.
    pub max_passes: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    w: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    #[allow(dead_code)]
    notes: Option<Value>,
    weights: Option<RawWeights>,
    costs: Option<BTreeMap<String, Value>>,
    bin_default: Option<u32>,
    max_passes: Option<u32>,
}

impl FixConfig {
    /// Reads a configuration; keys left out keep their default values. A
    /// cost table, when given, must be complete.
    pub fn from_json(text: &str) -> Result<FixConfig, ConfigError> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let mut cfg = FixConfig::default();
        FixConfig::merge(&mut cfg, raw)?;
        Ok(cfg)
    }

    fn builtin_defaults() -> FixConfig {
        let raw: RawConfig = serde_json::from_str(DEFAULT_CONFIG).expect("default config is valid JSON");
        let mut cfg = FixConfig {
            weights: Weights::default(),
            costs: CostTable {
                costs: vec![0.0; ActionKind::ALL.len()],
            },
            bin_default: 10,
            max_passes: 1,
        };
        FixConfig::merge(&mut cfg, raw).expect("default config is complete");
        cfg
    }

    fn merge(cfg: &mut FixConfig, raw: RawConfig) -> Result<(), ConfigError> {
        if let Some(w) = raw.weights {
            cfg.weights.w = w.w.unwrap_or(cfg.weights.w);
            cfg.weights.alpha = w.alpha.unwrap_or(cfg.weights.alpha);
            cfg.weights.beta = w.beta.unwrap_or(cfg.weights.beta);
        }
        if let Some(costs) = raw.costs {
            let mut parsed = BTreeMap::new();
            for (name, v) in costs {
                let c = v.as_f64().ok_or_else(|| ConfigError::BadCost(name.clone()))?;
                parsed.insert(name, c);
            }
            cfg.costs = CostTable::from_raw(&parsed)?;
        }
        if let Some(b) = raw.bin_default {
            if b == 0 {
                return Err(ConfigError::Parse("bin_default must be positive".into()));
            }
            cfg.bin_default = b;
        }
        if let Some(p) = raw.max_passes {
            if p == 0 {
                return Err(ConfigError::Parse("max_passes must be at least 1".into()));
            }
            cfg.max_passes = p;
        }
        Ok(())
    }
}

static DEFAULT_PARSED: std::sync::OnceLock<FixConfig> = std::sync::OnceLock::new();

impl Default for FixConfig {
    fn default() -> Self {
        DEFAULT_PARSED.get_or_init(FixConfig::builtin_defaults).clone()
    }
}
