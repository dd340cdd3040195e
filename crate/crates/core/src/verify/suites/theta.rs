//! Theta axioms, oracle agreement and jet-layer sanity checks.

use num_complex::Complex64;

use crate::error::Result;
use crate::jet::{DiffOpSymbol, HbarJet, PointGerm};
use crate::theta::ThetaEngine;
use crate::verify::oracle::{cauchy_taylor, central_difference, divide_by_hbar, theta_product};
use crate::verify::sampling::{draw, rectangle_point};
use crate::verify::{cval, rec, worst, CheckRecord, Ctx};

const ANCHOR: &str = "theta-axioms";
const POINTS: usize = 100;

fn taus(ctx: &Ctx) -> Vec<Complex64> {
    let mut t = vec![ctx.cfg.tau];
    for extra in [Complex64::new(0.0, 1.0), Complex64::new(-0.2, 0.8)] {
        if !t.contains(&extra) {
            t.push(extra);
        }
    }
    t
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Max over sampled z of a relative residual, for one τ.
fn sampled(
    ctx: &Ctx,
    e: &ThetaEngine,
    name: &str,
    f: impl Fn(&ThetaEngine, Complex64) -> Result<f64> + Sync + Send,
) -> Result<f64> {
    let n = ctx.samples(POINTS);
    let results = ctx.sweep(&format!("{name}@{}", e.tau()), n, |rng| {
        let z = draw(rng, |r| rectangle_point(r, e), |_| true)?;
        f(e, z)
    });
    worst(&results)
}

pub(super) fn run(ctx: &Ctx) -> Vec<CheckRecord> {
    let tol = ctx.tol;
    let mut out = Vec::new();
    for tau in taus(ctx) {
        let e = match ThetaEngine::new(tau) {
            Ok(e) => e,
            Err(err) => {
                out.push(rec("theta:engine", ANCHOR).p("tau", cval(tau)).finish(Err(err), 0.0));
                continue;
            }
        };
        let base = |name: &str| rec(name, ANCHOR).p("tau", cval(tau));
        let slope = e.theta_germ(Complex64::new(0.0, 0.0), 1).map(|g| (g.values[1] - 1.0).norm());
        out.push(base("theta:derivative_at_zero").finish(slope, tol.theta()));
        out.push(base("theta:zero_at_origin").finish(Ok(e.theta(Complex64::new(0.0, 0.0)).norm()), tol.theta()));
        let n = ctx.samples(POINTS);
        out.push(
            base("theta:oddness")
                .p("points", n)
                .finish(sampled(ctx, &e, "odd", |e, z| Ok(rel(e.theta(-z), -e.theta(z)))), tol.theta()),
        );
        out.push(
            base("theta:period_one")
                .p("points", n)
                .finish(sampled(ctx, &e, "p1", |e, z| Ok(rel(e.theta(z + 1.0), -e.theta(z)))), tol.theta()),
        );
        out.push(base("theta:period_tau").p("points", n).finish(
            sampled(ctx, &e, "ptau", |e, z| {
                let i_pi = Complex64::new(0.0, std::f64::consts::PI);
                let factor = -(-i_pi * e.tau() - i_pi * 2.0 * z).exp();
                Ok(rel(e.theta(z + e.tau()), factor * e.theta(z)))
            }),
            tol.theta(),
        ));
        out.push(
            base("theta:product_oracle")
                .p("points", n)
                .finish(sampled(ctx, &e, "prod", |e, z| Ok(rel(e.theta(z), theta_product(e.tau(), z)))), tol.theta()),
        );
    }

    let e = ctx.engine;
    let n = ctx.samples(20);
    out.push(rec("theta:germ_finite_difference", ANCHOR).p("points", n).p("step", 1e-5).finish(
        sampled(ctx, &e, "fd", |e, z| {
            let g = e.theta_germ(z, 4)?;
            let mut w: f64 = 0.0;
            for k in 1..=4 {
                let fd = central_difference(
                    |x| e.theta_germ(x, k - 1).map(|g| g.values[k - 1]).unwrap_or_default(),
                    z,
                    1e-5,
                );
                w = w.max(rel(g.values[k], fd));
            }
            Ok(w)
        }),
        tol.scaled(1e-7),
    ));
    out.push(
        rec("theta:rho_odd", ANCHOR)
            .finish(sampled(ctx, &e, "rho_odd", |e, z| Ok(rel(e.rho(-z)?, -e.rho(z)?))), tol.theta()),
    );
    out.push(
        rec("theta:rho_periodic", ANCHOR)
            .finish(sampled(ctx, &e, "rho_per", |e, z| Ok(rel(e.rho(z + 1.0)?, e.rho(z)?))), tol.theta()),
    );
    // ρ(z) - 1/z = O(z): no constant term
    let laurent = (|| -> Result<f64> {
        let mut w: f64 = 0.0;
        for r in [1e-2, 1e-3] {
            let z = Complex64::from_polar(r, 0.7);
            w = w.max((e.rho(z)? - 1.0 / z).norm() / r);
        }
        Ok(w)
    })();
    out.push(rec("theta:rho_laurent_bound", ANCHOR).p("radii", vec![1e-2, 1e-3]).finish(laurent, 10.0));
    let m = ctx.m();
    out.push(
        rec("theta:jet_argument", ANCHOR).p("order", m).p("oracle", "cauchy integral of the product formula").finish(
            sampled(ctx, &e, "jetarg", |e, z| {
                let a = 2;
                let jet = e.theta_shifted(z, a, m)?;
                let tau = e.tau();
                let c = cauchy_taylor(|h| theta_product(tau, z + h * a as f64), Complex64::new(0.0, 0.0), 0.5, 64, m);
                let scale = c.iter().map(|x| x.norm()).fold(1.0, f64::max);
                Ok((0..=m).map(|k| (jet.coeff(k) - c[k]).norm()).fold(0.0, f64::max) / scale)
            }),
            tol.theta(),
        ),
    );

    // jet layer
    let inv = HbarJet::hbar(m).exp().invert().map(|j| j.max_abs_diff(&(-HbarJet::hbar(m)).exp()));
    out.push(rec("jet:invert_exp", "jet-ring").p("order", m).finish(inv, tol.scaled(1e-13)));
    out.push(rec("jet:diffop_central_difference", "fd:repres").p("order", m).finish(
        sampled(ctx, &e, "sinh", |e, z| {
            // sinh(ħ∂)/(ħ∂) on θ' is the central difference of θ
            let t = e.taylor(z, m + 1)?;
            let d: Vec<Complex64> = (0..=m).map(|k| t[k + 1] * (k + 1) as f64).collect();
            let lhs = DiffOpSymbol::sinh_over_u(m).apply(&PointGerm::from_taylor(z, &d))?;
            let diff = &e.theta_shifted(z, 1, m + 1)? - &e.theta_shifted(z, -1, m + 1)?;
            let rhs = divide_by_hbar(&diff.scale(Complex64::new(0.5, 0.0)));
            Ok(lhs.max_abs_diff(&rhs) / rhs.max_abs().max(1.0))
        }),
        tol.theta(),
    ));
    out.push(rec("jet:diffop_reciprocal", "fd:repres").p("order", m).finish(
        sampled(ctx, &e, "recip", |e, z| {
            let g = DiffOpSymbol::two_over_one_plus_exp(1.0, m);
            let germ = e.theta_germ(z, m)?;
            let composed = g.compose(&g.reciprocal()?).apply(&germ)?;
            let direct = DiffOpSymbol::identity(m).apply(&germ)?;
            Ok(composed.max_abs_diff(&direct))
        }),
        tol.scaled(1e-12),
    ));
    out
}
