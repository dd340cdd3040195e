//! The odd theta function θ(z|τ) normalized by θ'(0) = 1.
//!
//! θ(z) = Σ_{n≥0} (-1)^n q^{(n+½)²} sin((2n+1)πz) / N with q = e^{iπτ} and
//! N = Σ (-1)^n q^{(n+½)²}(2n+1)π. Zeros are exactly the lattice Z + τZ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{EqgError, Result};
use crate::jet::{series_div, HbarJet, PointGerm};

/// Hard cap on series terms.
pub const MAX_TERMS: usize = 64;
/// Relative size below which a series term is dropped.
pub const TERM_CUTOFF: f64 = 1e-18;
/// Distance to the lattice below which quotients report a pole.
pub const POLE_GUARD: f64 = 1e-6;
/// Largest Taylor order served internally (Laurent data needs more than germs).
pub const TAYLOR_CAP: usize = 160;

#[derive(Clone, Copy, Debug)]
pub struct ThetaEngine {
    tau: Complex64,
    nome: Complex64,
    max_derivative: usize,
    term_cutoff: usize,
    norm_const: Complex64,
    // (-1)^n q^{(n+1/2)^2} / N and (2n+1)π
    amp: [Complex64; MAX_TERMS],
    freq: [f64; MAX_TERMS],
}

impl ThetaEngine {
    pub fn new(tau: Complex64) -> Result<Self> {
        if tau.im.is_nan() || tau.im <= 0.0 || !tau.re.is_finite() {
            return Err(EqgError::Config(format!("tau must have positive imaginary part, got {tau}")));
        }
        let i_pi_tau = Complex64::new(0.0, PI) * tau;
        let mut amp = [Complex64::new(0.0, 0.0); MAX_TERMS];
        let mut freq = [0.0; MAX_TERMS];
        let mut norm = Complex64::new(0.0, 0.0);
        let mut biggest: f64 = 0.0;
        let mut used = MAX_TERMS;
        for n in 0..MAX_TERMS {
            let h = n as f64 + 0.5;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let a = (i_pi_tau * (h * h)).exp() * sign;
            let w = (2 * n + 1) as f64 * PI;
            let term = a * w;
            biggest = biggest.max(term.norm());
            amp[n] = a;
            freq[n] = w;
            norm += term;
            if n > 0 && term.norm() < TERM_CUTOFF * biggest {
                used = n + 1;
                break;
            }
        }
        for a in amp.iter_mut().take(used) {
            *a /= norm;
        }
        Ok(Self { tau, nome: i_pi_tau.exp(), max_derivative: 24, term_cutoff: used, norm_const: norm, amp, freq })
    }

    /// Limit on the derivative count accepted by [`Self::theta_germ`].
    pub fn with_max_derivative(mut self, m: usize) -> Self {
        self.max_derivative = m.min(TAYLOR_CAP);
        self
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn nome(&self) -> Complex64 {
        self.nome
    }

    pub fn norm_const(&self) -> Complex64 {
        self.norm_const
    }

    pub fn term_cutoff(&self) -> usize {
        self.term_cutoff
    }

    pub fn max_derivative(&self) -> usize {
        self.max_derivative
    }

    pub fn theta(&self, z: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut biggest: f64 = 0.0;
        for n in 0..self.term_cutoff {
            let t = self.amp[n] * (z * self.freq[n]).sin();
            let size = t.norm();
            biggest = biggest.max(size);
            sum += t;
            if n > 0 && size < TERM_CUTOFF * biggest {
                break;
            }
        }
        sum
    }

    /// Taylor coefficients θ^{(k)}(z)/k! for k = 0..=m.
    pub fn taylor(&self, z: Complex64, m: usize) -> Result<Vec<Complex64>> {
        if m > TAYLOR_CAP {
            return Err(EqgError::Config(format!("Taylor order {m} exceeds cap {TAYLOR_CAP}")));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
        let mut biggest: f64 = 0.0;
        let mut prev = f64::INFINITY;
        for n in 0..self.term_cutoff {
            let w = self.freq[n];
            let s = self.amp[n] * (z * w).sin();
            let c = self.amp[n] * (z * w).cos();
            // d^k/dz^k sin(wz) = w^k sin(wz + kπ/2)
            let mut p = 1.0;
            let mut size: f64 = 0.0;
            for (k, slot) in out.iter_mut().enumerate() {
                if k > 0 {
                    p *= w / k as f64;
                }
                let t = match k % 4 {
                    0 => s,
                    1 => c,
                    2 => -s,
                    _ => -c,
                } * p;
                size = size.max(t.norm());
                *slot += t;
            }
            biggest = biggest.max(size);
            if n > 0 && size < prev && size < TERM_CUTOFF * biggest {
                break;
            }
            prev = size;
        }
        Ok(out)
    }

    /// θ and its first m derivatives at z.
    pub fn theta_germ(&self, z: Complex64, m: usize) -> Result<PointGerm> {
        if m > self.max_derivative {
            return Err(EqgError::Config(format!(
                "derivative count {m} exceeds configured maximum {}",
                self.max_derivative
            )));
        }
        Ok(PointGerm::from_taylor(z, &self.taylor(z, m)?))
    }

    /// Distance from z to the nearest point of Z + τZ.
    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let b = (z.im / self.tau.im).round();
        let z1 = z - self.tau * b;
        let a = z1.re.round();
        let z2 = z1 - a;
        let mut best = f64::INFINITY;
        for i in -1..=1 {
            for j in -1..=1 {
                let d = (z2 - i as f64 - self.tau * j as f64).norm();
                best = best.min(d);
            }
        }
        best
    }

    /// Nearest lattice point as (n, m) with point n + mτ.
    pub fn nearest_lattice_point(&self, z: Complex64) -> (i64, i64) {
        let b = (z.im / self.tau.im).round();
        let a = (z - self.tau * b).re.round();
        let mut best = (f64::INFINITY, 0, 0);
        for i in -1..=1 {
            for j in -1..=1 {
                let n = a as i64 + i;
                let m = b as i64 + j;
                let d = (z - n as f64 - self.tau * m as f64).norm();
                if d < best.0 {
                    best = (d, n, m);
                }
            }
        }
        (best.1, best.2)
    }

    pub fn check_off_lattice(&self, z: Complex64, what: &str) -> Result<()> {
        let d = self.lattice_distance(z);
        if d < POLE_GUARD {
            return Err(EqgError::Pole { what: what.to_string(), dist: d });
        }
        Ok(())
    }

    /// Taylor coefficients of ρ = θ'/θ at z up to order m.
    pub fn rho_taylor(&self, z: Complex64, m: usize) -> Result<Vec<Complex64>> {
        self.check_off_lattice(z, "rho argument")?;
        let t = self.taylor(z, m + 1)?;
        let dt: Vec<Complex64> = (0..=m).map(|k| t[k + 1] * (k + 1) as f64).collect();
        Ok(series_div(&dt, &t, m + 1))
    }

    pub fn rho(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.rho_taylor(z, 0)?[0])
    }

    /// ρ and its first m derivatives at z.
    pub fn rho_germ(&self, z: Complex64, m: usize) -> Result<PointGerm> {
        if m > self.max_derivative {
            return Err(EqgError::Config(format!(
                "derivative count {m} exceeds configured maximum {}",
                self.max_derivative
            )));
        }
        Ok(PointGerm::from_taylor(z, &self.rho_taylor(z, m)?))
    }

    /// θ(base + steps·ħ) as a jet of the given order.
    pub fn theta_shifted(&self, base: Complex64, steps: i32, order: usize) -> Result<HbarJet> {
        let t = self.taylor(base, order)?;
        let mut p = 1.0;
        let coeffs = t
            .iter()
            .enumerate()
            .map(|(k, tk)| {
                if k > 0 {
                    p *= steps as f64;
                }
                tk * p
            })
            .collect();
        Ok(HbarJet::from_coeffs(coeffs))
    }

    /// θ(ħ)/ħ as a jet; it starts 1 + O(ħ²).
    pub fn theta_hbar_over_hbar(&self, order: usize) -> Result<HbarJet> {
        let t = self.taylor(Complex64::new(0.0, 0.0), order + 1)?;
        Ok(HbarJet::from_coeffs(t[1..].to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> ThetaEngine {
        ThetaEngine::new(Complex64::new(0.3, 1.1)).unwrap()
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(ThetaEngine::new(Complex64::new(0.0, -1.0)).is_err());
        assert!(ThetaEngine::new(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn zero_and_unit_slope() {
        let e = engine();
        assert!(e.theta(Complex64::new(0.0, 0.0)).norm() < 1e-16);
        let g = e.theta_germ(Complex64::new(0.0, 0.0), 1).unwrap();
        assert!(g.values[0].norm() < 1e-16);
        assert!((g.values[1] - 1.0).norm() < 1e-13);
    }

    #[test]
    fn even_derivatives_vanish_at_origin() {
        let g = engine().theta_germ(Complex64::new(0.0, 0.0), 7).unwrap();
        for k in [0, 2, 4, 6] {
            assert!(g.values[k].norm() < 1e-12, "k={k}: {}", g.values[k]);
        }
    }

    #[test]
    fn germ_matches_value() {
        let e = engine();
        let z = Complex64::new(0.37, 0.41);
        let g = e.theta_germ(z, 3).unwrap();
        assert!((g.values[0] - e.theta(z)).norm() < 1e-14);
    }

    #[test]
    fn germ_cap_is_enforced() {
        assert!(matches!(engine().theta_germ(Complex64::new(0.1, 0.0), 25), Err(EqgError::Config(_))));
    }

    #[test]
    fn rho_pole_guard() {
        let e = engine();
        assert!(matches!(e.rho(e.tau() + 1.0), Err(EqgError::Pole { .. })));
    }

    #[test]
    fn lattice_distance_basics() {
        let e = engine();
        let tau = e.tau();
        assert!(e.lattice_distance(tau * 3.0 - 2.0).abs() < 1e-12);
        assert!((e.lattice_distance(Complex64::new(0.2, 0.0)) - 0.2).abs() < 1e-12);
        assert_eq!(e.nearest_lattice_point(tau * 2.0 + 1.02), (1, 2));
    }

    #[test]
    fn shifted_theta_is_taylor_in_hbar() {
        let e = engine();
        let z = Complex64::new(0.21, 0.3);
        let j = e.theta_shifted(z, -2, 4).unwrap();
        let t = e.taylor(z, 4).unwrap();
        for (k, tk) in t.iter().enumerate() {
            assert!((j.coeff(k) - tk * (-2.0f64).powi(k as i32)).norm() < 1e-14);
        }
    }
}
