//! Verifier configuration: defaults, `key=value` files and overrides.

use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{EqgError, Result};
use crate::exec::Parallelism;
use crate::spaces::DEFAULT_DEPTH;
use crate::theta::{ThetaEngine, POLE_GUARD};

pub const DEFAULT_TAU: Complex64 = Complex64::new(0.3, 1.1);
pub const DEFAULT_HBAR: Complex64 = Complex64::new(0.07, 0.03);
pub const DEFAULT_JET_ORDER: usize = 3;
pub const DEFAULT_SEED: u64 = 20_240_611;
pub const MAX_JET_ORDER: usize = 10;
pub const MAX_TRUNC: usize = DEFAULT_DEPTH - 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TolTier {
    #[default]
    Default,
    /// Every tolerance divided by ten.
    Strict,
}

impl TolTier {
    pub fn name(self) -> &'static str {
        match self {
            TolTier::Default => "default",
            TolTier::Strict => "strict",
        }
    }
}

impl FromStr for TolTier {
    type Err = EqgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "default" => Ok(TolTier::Default),
            "strict" => Ok(TolTier::Strict),
            other => Err(EqgError::Config(format!("unknown tolerance tier '{other}' (expected default|strict)"))),
        }
    }
}

/// Tolerance tiers. Every check names its base tolerance through one of
/// these so that `strict` tightens all of them uniformly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    factor: f64,
}

impl Tolerances {
    pub fn new(tier: TolTier) -> Self {
        let factor = match tier {
            TolTier::Default => 1.0,
            TolTier::Strict => 0.1,
        };
        Self { factor }
    }

    pub fn theta(&self) -> f64 {
        1e-12 * self.factor
    }

    pub fn numeric(&self) -> f64 {
        1e-9 * self.factor
    }

    pub fn jet(&self) -> f64 {
        1e-8 * self.factor
    }

    /// A check-specific base tolerance under the active tier.
    pub fn scaled(&self, base: f64) -> f64 {
        base * self.factor
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub tau: Complex64,
    pub hbar: Complex64,
    pub jet_order: usize,
    pub trunc: usize,
    pub depth: usize,
    pub tol_tier: TolTier,
    pub seed: u64,
    /// Overrides every random-sample count when set.
    pub samples: Option<usize>,
    pub report: Option<PathBuf>,
    pub parallelism: Parallelism,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            tau: DEFAULT_TAU,
            hbar: DEFAULT_HBAR,
            jet_order: DEFAULT_JET_ORDER,
            trunc: crate::spaces::DEFAULT_TRUNC,
            depth: DEFAULT_DEPTH,
            tol_tier: TolTier::Default,
            seed: DEFAULT_SEED,
            samples: None,
            report: None,
            parallelism: Parallelism::default(),
        }
    }
}

/// Parses `RE,IM` (a bare real number is accepted too).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || EqgError::Config(format!("expected RE,IM but got '{s}'"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(bad()),
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| EqgError::Config(format!("{key}: expected a non-negative integer, got '{v}'")))
}

impl VerifyConfig {
    /// Sets one key. Keys match the command-line flags; `_` and `-` are
    /// interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "tau" => self.tau = parse_complex(value)?,
            "hbar" => self.hbar = parse_complex(value)?,
            "jet-order" => self.jet_order = parse_usize(&key, value)?,
            "trunc" => self.trunc = parse_usize(&key, value)?,
            "tol-tier" => self.tol_tier = value.parse()?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| EqgError::Config(format!("seed: expected an unsigned integer, got '{value}'")))?
            }
            "samples" => self.samples = Some(parse_usize(&key, value)?),
            "report" => self.report = Some(PathBuf::from(value)),
            _ => return Err(EqgError::Config(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// Applies a flat `key=value` document; `#` starts a comment.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| EqgError::Config(format!("line {}: expected key=value, got '{raw}'", n + 1)))?;
            self.set(k, v).map_err(|e| match e {
                EqgError::Config(m) => EqgError::Config(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_kv(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ThetaEngine::new(self.tau)?;
        if !(1..=MAX_JET_ORDER).contains(&self.jet_order) {
            return Err(EqgError::Config(format!("jet order must lie in 1..={MAX_JET_ORDER}, got {}", self.jet_order)));
        }
        if !(1..=MAX_TRUNC).contains(&self.trunc) {
            return Err(EqgError::Config(format!("truncation must lie in 1..={MAX_TRUNC}, got {}", self.trunc)));
        }
        let engine = ThetaEngine::new(self.tau)?;
        if engine.lattice_distance(self.hbar) < POLE_GUARD {
            return Err(EqgError::Config(format!("hbar = {} is on the lattice", self.hbar)));
        }
        if self.samples == Some(0) {
            return Err(EqgError::Config("samples must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances::new(self.tol_tier)
    }

    pub fn engine(&self) -> Result<ThetaEngine> {
        ThetaEngine::new(self.tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_keys() {
        let c = VerifyConfig::from_kv(
            "# demo\ntau = 0.1, 0.9\nhbar=0.05,0\njet_order=4\ntrunc=30\ntol-tier=strict\nseed=7\nsamples=3\n",
        )
        .unwrap();
        assert_eq!(c.tau, Complex64::new(0.1, 0.9));
        assert_eq!(c.jet_order, 4);
        assert_eq!(c.trunc, 30);
        assert_eq!(c.tol_tier, TolTier::Strict);
        assert_eq!(c.seed, 7);
        assert_eq!(c.samples, Some(3));
        assert!((c.tolerances().jet() - 1e-9).abs() < 1e-24);
    }

    #[test]
    fn rejects_garbage() {
        assert!(VerifyConfig::from_kv("tau").is_err());
        assert!(VerifyConfig::from_kv("colour=blue").is_err());
        assert!(VerifyConfig::from_kv("tau=0.3,-1").is_err());
        assert!(VerifyConfig::from_kv("hbar=1,0").is_err());
        assert!(VerifyConfig::from_kv("jet-order=0").is_err());
        assert!(VerifyConfig::from_kv("seed=-3").is_err());
    }
}
