//! Command-line runner: gallery listing, best-approximate-solution runs, and
//! diagnostic check suites, with CSV/JSON reports.
//!
//! Exit codes: 0 for Convergent runs (or a fully passing check suite), 2 for
//! Divergent (or a failing suite), 3 for Inconclusive, 1 for configuration,
//! computation, or I/O errors.

mod config;
mod report;

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use config::{parse_suite, ExperimentConfig, ReportFormat, SCHEDULE_MAX_ENV};
use finsec_core::{
    apply, builtin_gallery, check_graph_convergence, check_moving_target,
    check_mp_identities_over_schedule, check_projection_convergence, check_resolvent_consistency,
    run_best_approx, CoeffVector, DiagnosticsError, ResidualTable, SpectralModel, SuiteKind,
    Verdict,
};
use report::Report;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "finsec", version, about = "Finite-section pseudoinverse experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in model gallery.
    Gallery {
        /// Case-insensitive substring filter on the listing.
        filter: Option<String>,
    },
    /// Run the best-approximate-solution scheme described by a config file.
    Run {
        config: PathBuf,
        /// Override output.path from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override output.format from the config.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run a diagnostic suite described by a config file.
    Check {
        config: PathBuf,
        /// resolvent | graph | projection | moving-target | mp-identities | all
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Gallery { filter } => cmd_gallery(filter.as_deref()),
        Command::Run {
            config,
            out,
            format,
        } => cmd_run(&config, out, format.map(Into::into)),
        Command::Check {
            config,
            suite,
            out,
            format,
        } => cmd_check(&config, &suite, out, format.map(Into::into)),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}

fn cmd_gallery(filter: Option<&str>) -> Result<i32> {
    let needle = filter.map(str::to_lowercase);
    for entry in builtin_gallery() {
        let (kind, params) = match &entry.model {
            SpectralModel::Diagonal { rule, .. } => {
                use finsec_core::EigenvalueRule::*;
                let rule = match rule {
                    Linear => "rule=linear".to_string(),
                    Harmonic => "rule=harmonic".to_string(),
                    KernelGap => "rule=kernel-gap".to_string(),
                    Custom { prefix, tail } => format!("rule=custom prefix={prefix:?} tail={tail}"),
                };
                ("diagonal", rule)
            }
            SpectralModel::Jacobi {
                diagonal,
                offdiagonal,
                ..
            } => {
                use finsec_core::CoeffRule::*;
                let show = |r: &finsec_core::CoeffRule| match r {
                    Constant(c) => format!("{c}"),
                    Listed { prefix, tail } => format!("{prefix:?}+{tail}"),
                };
                (
                    "jacobi",
                    format!("diag={} offdiag={}", show(diagonal), show(offdiagonal)),
                )
            }
        };
        let line = format!(
            "{:<16} {:<9} {:<34} {}",
            entry.name,
            kind,
            params,
            entry.model.classification()
        );
        if let Some(needle) = &needle {
            if !line.to_lowercase().contains(needle) {
                continue;
            }
        }
        println!("{line}");
    }
    Ok(0)
}

fn load_config(
    path: &Path,
    out: Option<PathBuf>,
    format: Option<ReportFormat>,
) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let mut config = config::parse_config(&text).map_err(|e| anyhow!("{e}"))?;
    if let Ok(raw) = std::env::var(SCHEDULE_MAX_ENV) {
        let cap: usize = raw
            .parse()
            .map_err(|_| anyhow!("{SCHEDULE_MAX_ENV} must be a positive integer, got {raw:?}"))?;
        config.apply_schedule_cap(cap).map_err(|e| anyhow!("{e}"))?;
    }
    if let Some(out) = out {
        config.output_path = out;
    }
    if let Some(format) = format {
        config.output_format = format;
    }
    Ok(config)
}

fn write_report(report: &Report, config: &ExperimentConfig) -> Result<()> {
    let rendered = report.render(config.output_format);
    std::fs::write(&config.output_path, rendered)
        .with_context(|| format!("cannot write report to {}", config.output_path.display()))?;
    Ok(())
}

fn cmd_run(path: &Path, out: Option<PathBuf>, format: Option<ReportFormat>) -> Result<i32> {
    let config = load_config(path, out, format)?;
    let run = run_best_approx(&config.model, &config.data, &config.run)?;

    let mut report = Report::new("run", config.effective_metadata());
    report.add_run(&run);
    for &suite in &config.diagnostics {
        let table = run_suite(&config, suite)?;
        report.add_table(&table);
    }
    report.verdict = run.verdict.to_string();
    report.verdict_reason = run.verdict_reason.clone();
    write_report(&report, &config)?;

    println!(
        "verdict: {} ({}); report: {}",
        run.verdict,
        run.verdict_reason,
        config.output_path.display()
    );
    Ok(match run.verdict {
        Verdict::Convergent => 0,
        Verdict::Divergent => 2,
        Verdict::Inconclusive => 3,
    })
}

fn run_suite(config: &ExperimentConfig, suite: SuiteKind) -> Result<ResidualTable, DiagnosticsError> {
    let schedule = &config.run.schedule;
    match suite {
        SuiteKind::Resolvent => {
            check_resolvent_consistency(&config.model, &config.probes, schedule)
        }
        SuiteKind::Graph => check_graph_convergence(&config.model, &config.probes, schedule),
        SuiteKind::Projection => {
            check_projection_convergence(&config.model, &config.probes, schedule)
        }
        SuiteKind::MovingTarget => check_moving_target(
            &config.model,
            &config.data,
            config.perturbation_scale,
            schedule,
        ),
        SuiteKind::MpIdentities => {
            check_mp_identities_over_schedule(&config.model, schedule, &config.run.tolerance)
        }
    }
}

/// Pass rule per suite. Resolvent and graph residuals must fall below 1e-6 by
/// the final size; projection residuals below 1e-12; the structural
/// identities below 1e-9 times the size, row by row; the moving-target
/// residual must fall below the analytic envelope
/// `2 * scale * ||A e_1|| / n_final` (plus round-off headroom).
fn suite_threshold_met(
    config: &ExperimentConfig,
    suite: SuiteKind,
    table: &ResidualTable,
) -> Result<(bool, String)> {
    let summary = &table.summary;
    let outcome = match suite {
        SuiteKind::Resolvent | SuiteKind::Graph => {
            let ok = summary.max_final_residual <= 1e-6;
            (
                ok,
                format!(
                    "{}: max final residual {} vs 1e-6",
                    suite.name(),
                    report::fmt_f64(summary.max_final_residual)
                ),
            )
        }
        SuiteKind::Projection => {
            let ok = summary.max_final_residual <= 1e-12;
            (
                ok,
                format!(
                    "projection: max final residual {} vs 1e-12",
                    report::fmt_f64(summary.max_final_residual)
                ),
            )
        }
        SuiteKind::MovingTarget => {
            let n_final = table.rows.iter().map(|r| r.n).max().unwrap_or(1);
            let image_norm = apply(&config.model, &CoeffVector::basis(1))?.norm();
            let envelope = 2.0 * config.perturbation_scale * image_norm / n_final as f64 + 1e-12;
            let ok = summary.max_final_residual <= envelope;
            (
                ok,
                format!(
                    "moving-target: max final residual {} vs envelope {}",
                    report::fmt_f64(summary.max_final_residual),
                    report::fmt_f64(envelope)
                ),
            )
        }
        SuiteKind::MpIdentities => {
            let worst = table
                .rows
                .iter()
                .map(|r| r.residual / (1e-9 * r.n as f64))
                .fold(0.0f64, f64::max);
            (
                worst <= 1.0,
                format!("mp-identities: worst residual at {worst:.3} of the 1e-9*n budget"),
            )
        }
    };
    Ok(outcome)
}

fn cmd_check(
    path: &Path,
    suite_arg: &str,
    out: Option<PathBuf>,
    format: Option<ReportFormat>,
) -> Result<i32> {
    let config = load_config(path, out, format)?;
    let all = suite_arg == "all";
    let suites: Vec<SuiteKind> = if all {
        vec![
            SuiteKind::Resolvent,
            SuiteKind::Graph,
            SuiteKind::Projection,
            SuiteKind::MovingTarget,
            SuiteKind::MpIdentities,
        ]
    } else {
        vec![parse_suite(suite_arg).ok_or_else(|| {
            anyhow!("unknown suite {suite_arg:?} (expected resolvent, graph, projection, moving-target, mp-identities, or all)")
        })?]
    };

    let mut report = Report::new("check", config.effective_metadata());
    let mut all_met = true;
    let mut reasons = Vec::new();
    for suite in suites {
        match run_suite(&config, suite) {
            Ok(table) => {
                let (met, reason) = suite_threshold_met(&config, suite, &table)?;
                all_met &= met;
                reasons.push(reason);
                report.add_table(&table);
            }
            Err(DiagnosticsError::UnsupportedModel(message)) if all => {
                // `all` means every suite applicable to the model.
                reasons.push(format!("{}: skipped ({message})", suite.name()));
            }
            Err(err) => return Err(err.into()),
        }
    }

    report.verdict = if all_met { "Pass" } else { "Fail" }.to_string();
    report.verdict_reason = reasons.join("; ");
    write_report(&report, &config)?;
    println!(
        "check: {} ({}); report: {}",
        report.verdict,
        report.verdict_reason,
        config.output_path.display()
    );
    Ok(if all_met { 0 } else { 2 })
}
