//! Verification suites: seeded sampling, residuals and a JSON report.
//!
//! Each suite returns a list of [`CheckRecord`]s. Evaluation errors never
//! abort a suite; they become failed records carrying the error text.

pub mod config;
pub mod oracle;
pub mod report;
pub mod sampling;
mod suites;

use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::error::{EqgError, Result};
use crate::exec::Parallelism;
use crate::rmatrix::HbarMode;
use crate::theta::ThetaEngine;

pub use config::{TolTier, Tolerances, VerifyConfig};
pub use report::{CheckRecord, Metadata, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Theta,
    Spaces,
    Rmatrix,
    Dybe,
    Rll,
    Det,
    Classical,
    Gauge,
    Lops,
    HalfCurrents,
    Currents,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Theta,
        Suite::Spaces,
        Suite::Rmatrix,
        Suite::Dybe,
        Suite::Rll,
        Suite::Det,
        Suite::Classical,
        Suite::Gauge,
        Suite::Lops,
        Suite::HalfCurrents,
        Suite::Currents,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theta => "theta",
            Suite::Spaces => "spaces",
            Suite::Rmatrix => "rmatrix",
            Suite::Dybe => "dybe",
            Suite::Rll => "rll",
            Suite::Det => "det",
            Suite::Classical => "classical",
            Suite::Gauge => "gauge",
            Suite::Lops => "lops",
            Suite::HalfCurrents => "halfcurrents",
            Suite::Currents => "currents",
        }
    }

    /// Expands names (including `all`) into suites, dropping repeats.
    pub fn parse_list<S: AsRef<str>>(names: &[S]) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for n in names {
            let add: Vec<Suite> = if n.as_ref() == "all" { Suite::ALL.to_vec() } else { vec![n.as_ref().parse()?] };
            for s in add {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = EqgError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| EqgError::Config(format!("unknown suite '{s}'")))
    }
}

/// Shared state of one verification run.
pub(crate) struct Ctx {
    pub cfg: VerifyConfig,
    pub engine: ThetaEngine,
    pub tol: Tolerances,
    pub par: Parallelism,
}

impl Ctx {
    fn new(cfg: &VerifyConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg: cfg.clone(), engine: cfg.engine()?, tol: cfg.tolerances(), par: cfg.parallelism })
    }

    pub fn samples(&self, default: usize) -> usize {
        self.cfg.samples.unwrap_or(default)
    }

    pub fn m(&self) -> usize {
        self.cfg.jet_order
    }

    pub fn numeric(&self) -> HbarMode {
        HbarMode::Numeric { hbar: self.cfg.hbar }
    }

    pub fn formal(&self) -> HbarMode {
        HbarMode::Formal { order: self.cfg.jet_order }
    }

    /// Runs `f` on `n` independently seeded samples of the named check.
    pub fn sweep<T, F>(&self, name: &str, n: usize, f: F) -> Vec<Result<T>>
    where
        T: Send,
        F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync + Send,
    {
        let stream = sampling::stream_id(name);
        let seed = self.cfg.seed;
        self.par.map_indexed(n, |i| f(&mut sampling::rng_for(seed, stream, i)))
    }
}

/// Largest residual of a sweep; the first error wins.
pub(crate) fn worst(results: &[Result<f64>]) -> Result<f64> {
    let mut w: f64 = 0.0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(v) if v.is_nan() => return Err(EqgError::Domain(format!("sample {i}: residual is NaN"))),
            Ok(v) => w = w.max(*v),
            Err(e) => return Err(EqgError::Domain(format!("sample {i}: {e}"))),
        }
    }
    Ok(w)
}

pub(crate) fn cval(z: Complex64) -> Value {
    Value::from(vec![z.re, z.im])
}

/// Record under construction.
pub(crate) struct Rec {
    name: String,
    anchor: &'static str,
    params: Map<String, Value>,
}

pub(crate) fn rec(name: impl Into<String>, anchor: &'static str) -> Rec {
    Rec { name: name.into(), anchor, params: Map::new() }
}

impl Rec {
    pub fn p(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn finish(mut self, residual: Result<f64>, tolerance: f64) -> CheckRecord {
        let (residual, pass) = match residual {
            Ok(r) if r.is_finite() => (Some(r), r <= tolerance),
            Ok(r) => {
                self.params.insert("error".into(), Value::from(format!("non-finite residual {r}")));
                (None, false)
            }
            Err(e) => {
                self.params.insert("error".into(), Value::from(e.to_string()));
                (None, false)
            }
        };
        CheckRecord {
            name: self.name,
            paper_anchor: self.anchor.to_string(),
            params: self.params,
            residual,
            tolerance,
            pass,
        }
    }
}

/// Runs one suite on a validated configuration.
pub fn run_single(cfg: &VerifyConfig, suite: Suite) -> Result<Vec<CheckRecord>> {
    let ctx = Ctx::new(cfg)?;
    Ok(suites::run(&ctx, suite))
}

/// Runs the suites in order and assembles the report.
pub fn run_suite(cfg: &VerifyConfig, suites: &[Suite]) -> Result<VerificationReport> {
    let start = Instant::now();
    let ctx = Ctx::new(cfg)?;
    let mut checks = Vec::new();
    for &s in suites {
        checks.extend(suites::run(&ctx, s));
    }
    let metadata = Metadata {
        tau: [cfg.tau.re, cfg.tau.im],
        hbar: [cfg.hbar.re, cfg.hbar.im],
        jet_order: cfg.jet_order,
        trunc: cfg.trunc,
        seed: cfg.seed,
        samples: cfg.samples,
        tol_tier: cfg.tol_tier.name().to_string(),
        suites: suites.iter().map(|s| s.name().to_string()).collect(),
        parallel: cfg.parallelism.is_parallel(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        runtime_s: start.elapsed().as_secs_f64(),
    };
    Ok(VerificationReport { metadata, checks })
}
