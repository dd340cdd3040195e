//! Command-line front end of `eqg-verify`.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on a
//! configuration or I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use eqg_core::exec::Parallelism;
use eqg_core::verify::{run_suite, Suite, VerificationReport, VerifyConfig};
use eqg_core::EqgError;

#[derive(Parser, Debug)]
#[command(name = "eqg-verify", version, about = "Numerically verify the elliptic dynamical quantum group identities")]
struct Cli {
    /// key=value file; command-line flags override its entries
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Modular parameter, Im τ > 0
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    tau: Option<String>,
    /// Numeric value of ħ
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    hbar: Option<String>,
    /// Truncation order of ħ-jets
    #[arg(long, value_name = "M")]
    jet_order: Option<String>,
    /// Truncation of dual-basis sums
    #[arg(long, value_name = "N")]
    trunc: Option<String>,
    #[arg(long, value_name = "default|strict")]
    tol_tier: Option<String>,
    #[arg(long, value_name = "S")]
    seed: Option<String>,
    /// Overrides every per-check sample count
    #[arg(long, value_name = "K")]
    samples: Option<String>,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Run sample sweeps on one thread
    #[arg(long)]
    sequential: bool,
    /// Suites: theta spaces rmatrix dybe rll det classical gauge lops halfcurrents currents all
    #[arg(value_name = "SUITE")]
    suites: Vec<String>,
}

fn configure(cli: &Cli) -> Result<(VerifyConfig, Vec<Suite>), EqgError> {
    let mut cfg = VerifyConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EqgError::Config(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_kv(&text)?;
    }
    let flags = [
        ("tau", &cli.tau),
        ("hbar", &cli.hbar),
        ("jet-order", &cli.jet_order),
        ("trunc", &cli.trunc),
        ("tol-tier", &cli.tol_tier),
        ("seed", &cli.seed),
        ("samples", &cli.samples),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(p) = &cli.report {
        cfg.report = Some(p.clone());
    }
    if cli.sequential {
        cfg.parallelism = Parallelism::Sequential;
    }
    cfg.validate()?;
    let suites = Suite::parse_list(&cli.suites)?;
    Ok((cfg, suites))
}

fn summarize(report: &VerificationReport, err: &mut dyn Write) {
    for c in &report.checks {
        let res = c.residual.map_or_else(|| "error".to_string(), |r| format!("{r:.3e}"));
        let _ =
            writeln!(err, "{} {:<44} {:>10} <= {:.1e}", if c.pass { "ok  " } else { "FAIL" }, c.name, res, c.tolerance);
    }
    let failed = report.failures().count();
    let _ = writeln!(err, "{} checks, {} failed, {:.1}s", report.checks.len(), failed, report.metadata.runtime_s);
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

/// Runs the verifier on `args` (program name first) and returns the exit
/// status. The JSON report goes to `out` unless `--report` is given.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let report = match configure(&cli).and_then(|(cfg, suites)| Ok((run_suite(&cfg, &suites)?, cfg))) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "eqg-verify: {e}");
            return EXIT_CONFIG;
        }
    };
    let (report, cfg) = report;
    summarize(&report, err);
    match &cfg.report {
        Some(path) => {
            if let Err(e) = report.write(path) {
                let _ = writeln!(err, "eqg-verify: {e}");
                return EXIT_CONFIG;
            }
        }
        None => {
            let _ = writeln!(out, "{}", report.to_json());
        }
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

#[cfg(test)]
mod tests;
