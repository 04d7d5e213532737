//! `symcut`: cohomology characters, symplectic cuts and inequality checks
//! for equivariant bundles on the projective line.
//!
//! Exit codes: 0 when every selected check passes, 1 when at least one
//! fails, 2 on usage, parse or I/O errors.

mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use symcut_core::{
    equality_region, region_findings, region_rows, sweep_bundles, verifier::region_table, CheckId,
    CohomologyTable, EquivBundleCP1, GridSpec, IntRange, RegionFindings, RegionRow, SweepOptions,
    SweepReport,
};

use crate::config::{Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "symcut",
    version,
    about = "Equivariant cohomology of symplectic cuts of CP^1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the characters of H^0 and H^1 of a bundle.
    Cohomology {
        /// Bundle literal "rP:rQ[,rP:rQ...]".
        #[arg(allow_hyphen_values = true)]
        bundle: String,
    },
    /// Cut a bundle at level 0 and print the pieces with their cohomology.
    Cut {
        #[arg(allow_hyphen_values = true)]
        bundle: String,
    },
    /// Run checks on one bundle.
    Verify {
        #[arg(allow_hyphen_values = true)]
        bundle: String,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Run checks over a grid of line bundles or a JSON run config.
    Sweep {
        /// Inclusive r_P range "A..B".
        #[arg(long, allow_hyphen_values = true, requires = "rq_range")]
        rp_range: Option<String>,
        /// Inclusive r_Q range "A..B".
        #[arg(long, allow_hyphen_values = true, requires = "rp_range")]
        rq_range: Option<String>,
        /// JSON run config.
        #[arg(long, conflicts_with_all = ["rp_range", "rq_range"])]
        config: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Tabulate where the cut and Morse quotients vanish.
    EqualityRegion {
        #[arg(long, allow_hyphen_values = true)]
        rp_range: String,
        #[arg(long, allow_hyphen_values = true)]
        rq_range: String,
        /// text (default), json or md.
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// Comma list of gluing, mcut, morse, mv, simple, semicontinuity, oracle, all.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop after the first point with a failing check.
    #[arg(long)]
    fail_fast: bool,
}

fn parse_bundle(s: &str) -> Result<EquivBundleCP1> {
    s.parse().map_err(|e| anyhow!("{e}"))
}

fn parse_grid(rp: &str, rq: &str) -> Result<GridSpec> {
    let rp: IntRange = rp.parse().context("--rp-range")?;
    let rq: IntRange = rq.parse().context("--rq-range")?;
    Ok(GridSpec::new(rp, rq))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn render(report: &SweepReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
        Format::Md => report.to_markdown(),
    })
}

#[derive(Serialize)]
struct CutOutput {
    bundle: EquivBundleCP1,
    plus: EquivBundleCP1,
    minus: EquivBundleCP1,
    red_dims: (u64, u64),
    cohomology: CutTables,
}

#[derive(Serialize)]
struct CutTables {
    #[serde(rename = "M")]
    m: CohomologyTable,
    plus: CohomologyTable,
    minus: CohomologyTable,
    cut: CohomologyTable,
}

#[derive(Serialize)]
struct RegionOutput {
    rows: Vec<RegionRow>,
    findings: RegionFindings,
}

fn point_list(points: &[(i64, i64)]) -> String {
    if points.is_empty() {
        return "(none)".into();
    }
    points
        .iter()
        .map(|(p, q)| format!("({p}, {q})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn region_text(rows: &[RegionRow], findings: &RegionFindings, markdown: bool) -> String {
    let set = |pred: &dyn Fn(&RegionRow) -> bool| {
        point_list(
            &rows
                .iter()
                .filter(|r| pred(r))
                .map(|r| (r.r_p, r.r_q))
                .collect::<Vec<_>>(),
        )
    };
    let mut out = String::new();
    if markdown {
        out.push_str("# Equality region\n\n| r_P | r_Q | Q=0 | Q'=0 | claimed | Q' |\n|---|---|---|---|---|---|\n");
        for r in rows {
            let f = |b: Option<bool>| b.map_or("n/a", |b| if b { "yes" } else { "no" });
            let q = r
                .morse_quotient
                .as_ref()
                .map_or("-".into(), ToString::to_string);
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {q} |\n",
                r.r_p,
                r.r_q,
                f(r.mcut_quotient_zero),
                f(r.morse_quotient_zero),
                if r.claimed_equality { "yes" } else { "no" }
            ));
        }
        out.push('\n');
    } else {
        out.push_str(&region_table(rows));
        out.push('\n');
    }
    let bullet = if markdown { "- " } else { "" };
    out.push_str(&format!(
        "{bullet}Q = 0 (cut inequality): {}\n",
        set(&|r| r.mcut_quotient_zero == Some(true))
    ));
    out.push_str(&format!(
        "{bullet}Q' = 0 (Morse inequality): {}\n",
        set(&|r| r.morse_quotient_zero == Some(true))
    ));
    out.push_str(&format!(
        "{bullet}claimed equality region r_Q <= 0 <= r_P: {}\n",
        set(&|r| r.claimed_equality)
    ));
    out.push_str(&format!(
        "{bullet}claimed points with Q' != 0: {} of {}\n",
        findings.morse_nonzero_in_claimed.len(),
        findings.claimed_points
    ));
    out.push_str(&format!(
        "{bullet}points outside the claimed region with Q = 0: {}\n",
        point_list(&findings.mcut_zero_outside_claimed)
    ));
    out
}

/// `Ok(true)` when all checks pass.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Cohomology { bundle } => {
            let b = parse_bundle(&bundle)?;
            print!("{}", pretty(&b.cohomology()));
            Ok(true)
        }
        Command::Cut { bundle } => {
            let b = parse_bundle(&bundle)?;
            let cut = b.cut();
            let out = CutOutput {
                cohomology: CutTables {
                    m: b.cohomology(),
                    plus: cut.plus.cohomology(),
                    minus: cut.minus.cohomology(),
                    cut: cut.cohomology()?,
                },
                bundle: b,
                plus: cut.plus,
                minus: cut.minus,
                red_dims: cut.red_dims,
            };
            print!("{}", pretty(&out));
            Ok(true)
        }
        Command::Verify { bundle, report } => {
            let b = parse_bundle(&bundle)?;
            let checks = CheckId::parse_list(report.checks.as_deref().unwrap_or("all"))?;
            let opts = SweepOptions {
                fail_fast: report.fail_fast,
                parallel: false,
            };
            let r = sweep_bundles(&[b], &checks, opts);
            emit(
                &render(&r, report.format.unwrap_or_default())?,
                report.out.as_ref(),
            )?;
            Ok(r.all_passed())
        }
        Command::Sweep {
            rp_range,
            rq_range,
            config,
            report,
        } => {
            let (points, mut checks, mut fail_fast, mut out, mut format) =
                match (config, rp_range, rq_range) {
                    (Some(path), _, _) => {
                        let text = fs::read_to_string(&path)
                            .with_context(|| format!("reading {}", path.display()))?;
                        let cfg = RunConfig::from_json(&text)?;
                        let (out, format) = cfg
                            .output
                            .clone()
                            .map(|o| (o.path, o.format))
                            .unwrap_or_default();
                        (cfg.points(), cfg.checks.clone(), cfg.fail_fast, out, format)
                    }
                    (None, Some(rp), Some(rq)) => {
                        let grid = parse_grid(&rp, &rq)?;
                        (
                            grid.points(),
                            CheckId::ALL.to_vec(),
                            false,
                            None,
                            Format::Json,
                        )
                    }
                    _ => bail!("sweep needs --rp-range and --rq-range, or --config"),
                };
            if let Some(c) = report.checks.as_deref() {
                checks = CheckId::parse_list(c)?;
            }
            fail_fast |= report.fail_fast;
            if report.out.is_some() {
                out = report.out;
            }
            if let Some(f) = report.format {
                format = f;
            }
            let opts = SweepOptions {
                fail_fast,
                parallel: true,
            };
            let r = sweep_bundles(&points, &checks, opts);
            emit(&render(&r, format)?, out.as_ref())?;
            Ok(r.all_passed())
        }
        Command::EqualityRegion {
            rp_range,
            rq_range,
            format,
            out,
        } => {
            let grid = parse_grid(&rp_range, &rq_range)?;
            let report = equality_region(&grid);
            let rows = region_rows(&report);
            let findings = region_findings(&rows);
            let text = match format.as_str() {
                "text" => region_text(&rows, &findings, false),
                "md" => region_text(&rows, &findings, true),
                "json" => pretty(&RegionOutput { rows, findings }),
                other => bail!("unknown format {other:?} (expected text, json or md)"),
            };
            emit(&text, out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
