//! Independent reference computations used only by the verifier.
//!
//! Nothing here shares code paths with the quantities under test: theta
//! values come from the Jacobi product, Taylor data from Cauchy integrals
//! and derivatives from central differences.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::jet::HbarJet;
use crate::linalg::JetMatrix;
use crate::theta::ThetaEngine;

/// θ(z) = sin(πz)/π · Π_{n≥1} (1 - 2q^{2n}cos 2πz + q^{4n})/(1 - q^{2n})².
pub fn theta_product(tau: Complex64, z: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, PI) * tau).exp();
    let q2 = q * q;
    let c = (z * (2.0 * PI)).cos();
    let mut acc = (z * PI).sin() / PI;
    let mut p = q2;
    for _ in 0..400 {
        let num = Complex64::new(1.0, 0.0) - p * c * 2.0 + p * p;
        let den = (Complex64::new(1.0, 0.0) - p) * (Complex64::new(1.0, 0.0) - p);
        acc *= num / den;
        if p.norm() < 1e-20 {
            break;
        }
        p *= q2;
    }
    acc
}

/// Nodes and weights of the trapezoidal rule for (1/2πi)∮ f(z) dz over
/// the circle |z - center| = r.
pub fn circle_nodes(center: Complex64, r: f64, nodes: usize) -> Vec<(Complex64, Complex64)> {
    (0..nodes)
        .map(|j| {
            let e = Complex64::from_polar(r, 2.0 * PI * j as f64 / nodes as f64);
            // dz/(2πi) = e dφ/(2π)
            (center + e, e / nodes as f64)
        })
        .collect()
}

pub fn circle_integral<F: Fn(Complex64) -> Complex64>(center: Complex64, r: f64, nodes: usize, f: F) -> Complex64 {
    circle_nodes(center, r, nodes).into_iter().map(|(z, w)| f(z) * w).sum()
}

/// Taylor coefficients f^{(k)}(z0)/k!, k = 0..=kmax, by Cauchy's formula.
pub fn cauchy_taylor<F: Fn(Complex64) -> Complex64>(
    f: F,
    z0: Complex64,
    r: f64,
    nodes: usize,
    kmax: usize,
) -> Vec<Complex64> {
    let vals: Vec<(Complex64, Complex64)> = (0..nodes)
        .map(|j| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
            (e, f(z0 + e * r))
        })
        .collect();
    (0..=kmax)
        .map(|k| {
            let s: Complex64 = vals.iter().map(|(e, v)| v * e.powi(-(k as i32))).sum();
            s / (nodes as f64 * r.powi(k as i32))
        })
        .collect()
}

/// Central difference (f(z+h) - f(z-h))/(2h).
pub fn central_difference<F: Fn(Complex64) -> Complex64>(f: F, z: Complex64, h: f64) -> Complex64 {
    (f(z + h) - f(z - h)) / (2.0 * h)
}

/// K⁺ at z in π_ζ in closed form: diag(θ(x+ħ)/θ(x), θ(x-ħ)/θ(x)), x = z - ζ.
pub fn k_plus_closed(engine: &ThetaEngine, z: Complex64, zeta: Complex64, order: usize) -> Result<JetMatrix> {
    let x = z - zeta;
    let inv = engine.theta_shifted(x, 0, order)?.invert()?;
    let mut m = JetMatrix::zeros(2, order);
    m.set(0, 0, &engine.theta_shifted(x, 1, order)? * &inv);
    m.set(1, 1, &engine.theta_shifted(x, -1, order)? * &inv);
    Ok(m)
}

/// K⁻ at z in π_ζ in closed form: diag(θ(y)/θ(y-ħ), θ(y)/θ(y+ħ)), y = ζ - z.
pub fn k_minus_closed(engine: &ThetaEngine, z: Complex64, zeta: Complex64, order: usize) -> Result<JetMatrix> {
    let y = zeta - z;
    let t = engine.theta_shifted(y, 0, order)?;
    let mut m = JetMatrix::zeros(2, order);
    m.set(0, 0, &t * &engine.theta_shifted(y, -1, order)?.invert()?);
    m.set(1, 1, &t * &engine.theta_shifted(y, 1, order)?.invert()?);
    Ok(m)
}

/// Drops the ħ⁰ coefficient and lowers the order by one: X/ħ for X = O(ħ).
pub fn divide_by_hbar(j: &HbarJet) -> HbarJet {
    HbarJet::from_coeffs(j.coeffs()[1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_series() {
        let tau = Complex64::new(0.3, 1.1);
        let e = ThetaEngine::new(tau).unwrap();
        for z in [Complex64::new(0.37, 0.2), Complex64::new(-0.8, 0.9)] {
            let a = theta_product(tau, z);
            assert!((a - e.theta(z)).norm() < 1e-13 * a.norm().max(1.0));
        }
    }

    #[test]
    fn cauchy_recovers_exp() {
        let c = cauchy_taylor(|z| z.exp(), Complex64::new(0.0, 0.0), 0.5, 32, 4);
        let fact = [1.0, 1.0, 2.0, 6.0, 24.0];
        for k in 0..=4 {
            assert!((c[k] - 1.0 / fact[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn residue_of_inverse() {
        let r: Complex64 =
            circle_integral(Complex64::new(0.1, 0.0), 0.3, 64, |z| Complex64::new(1.0, 0.0) / (z - 0.15));
        assert!((r - 1.0).norm() < 1e-14);
    }
}
