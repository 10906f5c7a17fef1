//! `vizlint lint`, `vizlint fix` and `vizlint serve`.
//!
//! Exit codes: 0 when the chart is clean (or fully repaired), 1 when
//! violations remain, 2 on unreadable or malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use vizlint_core::{parse_spec, profile_file, profile_for_spec, serialize_spec, FixConfig, RuleCatalog};

use crate::engine::{fix_response, lint_report, load_catalog, run_fix, Context, InputError};

#[derive(Debug, Parser)]
#[command(name = "vizlint", version, about = "Lint and repair Vega-Lite chart specifications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report rule violations.
    Lint {
        spec: PathBuf,
        /// Dataset to profile; defaults to the spec's own data.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Rule file replacing the built-in catalog.
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Suggest, and optionally apply, the best set of fixes.
    Fix {
        spec: PathBuf,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Fixer configuration (weights, costs, passes).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the revised spec instead of only describing the plan.
        #[arg(long)]
        apply: bool,
        /// Where to write the revised spec; standard output by default.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the HTTP service (address from VIZLINT_ADDR).
    Serve {
        #[arg(long)]
        addr: Option<String>,
    },
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::Io(format!("{}: {e}", path.display())))
}

struct Loaded {
    spec: vizlint_core::ChartSpec,
    catalog: RuleCatalog,
    profile: Option<vizlint_core::DatasetProfile>,
}

fn load(spec: &Path, data: Option<&Path>, rules: Option<&Path>) -> Result<Loaded, InputError> {
    let parsed = parse_spec(&read(spec)?)?;
    let profile = match data {
        Some(d) => Some(profile_file(d)?),
        None => profile_for_spec(&parsed, spec.parent())?,
    };
    let rules_text = rules.map(read).transpose()?;
    Ok(Loaded {
        spec: parsed,
        catalog: load_catalog(rules_text.as_deref())?,
        profile,
    })
}

/// Runs a lint or fix command, writing to the given streams; returns the
/// exit code. `serve` is handled by the binary.
pub fn run(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let io = |e: std::io::Error| InputError::Io(e.to_string());
    match command {
        Command::Lint { spec, data, rules, format } => {
            let l = load(spec, data.as_deref(), rules.as_deref())?;
            let ctx = Context {
                catalog: &l.catalog,
                config: FixConfig::default(),
                profile: l.profile,
            };
            let report = lint_report(&l.spec, &ctx);
            match format {
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("reports serialize")).map_err(io)?
                }
                Format::Text => {
                    if report.violations.is_empty() {
                        writeln!(out, "no violations").map_err(io)?;
                    }
                    for v in &report.violations {
                        writeln!(out, "{} [{}] {}: {}", v.rule_id, v.category, v.spec_path, v.message).map_err(io)?;
                    }
                }
            }
            Ok(i32::from(!report.violations.is_empty()))
        }
        Command::Fix { spec, data, rules, config, apply, out: out_path, format } => {
            let l = load(spec, data.as_deref(), rules.as_deref())?;
            let config = match config {
                Some(p) => FixConfig::from_json(&read(p)?)?,
                None => FixConfig::default(),
            };
            let ctx = Context {
                catalog: &l.catalog,
                config,
                profile: l.profile,
            };
            let plan = run_fix(&l.spec, &ctx);
            // With --apply and no --out, standard output carries the spec
            // alone and the plan goes to standard error.
            let spec_to_stdout = *apply && out_path.is_none();
            let report: &mut dyn Write = if spec_to_stdout { err } else { out };
            match format {
                Format::Json => writeln!(
                    report,
                    "{}",
                    serde_json::to_string_pretty(&fix_response(&plan)).expect("responses serialize")
                )
                .map_err(io)?,
                Format::Text => {
                    if plan.input_violations.is_empty() {
                        writeln!(report, "no violations").map_err(io)?;
                    }
                    for s in &plan.selected {
                        writeln!(report, "{}  score {:.4}", s.action, s.score).map_err(io)?;
                    }
                    for d in &plan.diff.entries {
                        writeln!(report, "  {} {}", format!("{:?}", d.kind).to_lowercase(), d.path).map_err(io)?;
                    }
                    for v in &plan.residual_violations {
                        writeln!(report, "residual: {v}").map_err(io)?;
                    }
                }
            }
            if *apply {
                let text = serialize_spec(&plan.revised_spec);
                match out_path {
                    Some(p) => std::fs::write(p, text + "\n")
                        .map_err(|e| InputError::Io(format!("{}: {e}", p.display())))?,
                    None => writeln!(out, "{text}").map_err(io)?,
                }
            }
            Ok(i32::from(!plan.residual_violations.is_empty()))
        }
        Command::Serve { .. } => unreachable!("serve is run by the binary"),
    }
}
