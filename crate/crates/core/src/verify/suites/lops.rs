//! RLL relation, quantum determinant and the L^± relations in the
//! evaluation representation.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::JetMatrix;
use crate::rep::{a_factor, a_factor_truncated, build_l_image, RepConfig, Sign};
use crate::rmatrix::{build_r, dynamical_apply, Arg, HbarMode, RVariant, WeightedOperator};
use crate::spaces::DualBasisPair;
use crate::theta::ThetaEngine;
use crate::verify::sampling::{annulus_point, clear_of_lattice, draw, rectangle_point};
use crate::verify::{cval, rec, worst, CheckRecord, Ctx};

/// R¹²(z₁₂, λ+ħh) L¹(z₁, λ) L²(z₂, λ+ħh⁽¹⁾) - L²(z₂, λ) L¹(z₁, λ+ħh⁽²⁾) R¹²(z₁₂, λ)
/// on aux ⊗ aux ⊗ quantum; h is the quantum weight.
pub(crate) fn rll_residual<A, B, R>(l1: A, l2: B, r: &R) -> Result<f64>
where
    A: Fn(i32) -> Result<WeightedOperator>,
    B: Fn(i32) -> Result<WeightedOperator>,
    R: Fn(i32) -> Result<WeightedOperator>,
{
    let lhs = dynamical_apply(r, 3, (0, 1), Some((2, 1)))?
        .mul(&dynamical_apply(&l1, 3, (0, 2), None)?)
        .mul(&dynamical_apply(&l2, 3, (1, 2), Some((0, 1)))?);
    let rhs = dynamical_apply(&l2, 3, (1, 2), None)?
        .mul(&dynamical_apply(&l1, 3, (0, 2), Some((1, 1)))?)
        .mul(&dynamical_apply(r, 3, (0, 1), None)?);
    Ok(lhs.matrix().max_abs_diff(rhs.matrix()))
}

fn fundamental<'a>(
    e: &'a ThetaEngine,
    mode: HbarMode,
    x: Complex64,
    lam: Complex64,
) -> impl Fn(i32) -> Result<WeightedOperator> + 'a {
    move |mu| build_r(e, mode, RVariant::Plus, Arg::at(x), Arg::new(lam, mu))
}

fn sample_rll(ctx: &Ctx, rng: &mut ChaCha8Rng, mode: HbarMode) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let e = &ctx.engine;
    let h = match mode {
        HbarMode::Numeric { hbar } => hbar,
        HbarMode::Formal { .. } => Complex64::new(0.0, 0.0),
    };
    draw(
        rng,
        |r| (rectangle_point(r, e), rectangle_point(r, e), rectangle_point(r, e), rectangle_point(r, e)),
        |&(z1, z2, u, l)| {
            let mut pts = vec![];
            for d in [z1 - z2, z1 - u, z2 - u] {
                pts.extend([d, d + h, d - h, d - h * 2.0]);
            }
            pts.extend([l, l + h, l - h, l + h * 2.0, l - h * 2.0]);
            clear_of_lattice(e, &pts)
        },
    )
}

pub(super) fn rll(ctx: &Ctx) -> Vec<CheckRecord> {
    let e = ctx.engine;
    let n = ctx.samples(50);
    let mut out = Vec::new();
    for (mode, label, tol) in [(ctx.numeric(), "numeric", ctx.tol.numeric()), (ctx.formal(), "jet", ctx.tol.jet())] {
        let name = format!("rll:{label}");
        let res = ctx.sweep(&name, n, |rng| {
            let (z1, z2, u, l) = sample_rll(ctx, rng, mode)?;
            let r = fundamental(&e, mode, z1 - z2, l);
            rll_residual(fundamental(&e, mode, z1 - u, l), fundamental(&e, mode, z2 - u, l), &r)
        });
        out.push(
            rec(name, "RLL")
                .p("samples", n)
                .p("L", "R+(z-u, lambda) on auxiliary x quantum")
                .p("argument_order", "(z, lambda)")
                .finish(worst(&res), tol),
        );
    }
    out
}

type M2 = [[Complex64; 2]; 2];

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Quantum-space block (ar, ac) of an aux ⊗ quantum operator at order 0.
fn block(m: &JetMatrix, ar: usize, ac: usize) -> M2 {
    let mut b = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m.get(ar * 2 + i, ac * 2 + j).coeff(0);
        }
    }
    b
}

/// d(z-ħ,λ)a(z,λ-ħ) - b(z-ħ,λ)c(z,λ-ħ)θ(λ+ħh+ħ)/θ(λ+ħh) for numeric ħ.
fn quantum_det<F>(e: &ThetaEngine, hbar: Complex64, lam: Complex64, l_at: F) -> Result<M2>
where
    F: Fn(i32, i32) -> Result<JetMatrix>,
{
    let shifted_z = l_at(-1, 0)?;
    let shifted_l = l_at(0, -1)?;
    let (a, c) = (block(&shifted_l, 0, 0), block(&shifted_l, 1, 0));
    let (b, d) = (block(&shifted_z, 0, 1), block(&shifted_z, 1, 1));
    let mut theta_fac = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (q, mu) in [(0usize, 1.0), (1, -1.0)] {
        let at = lam + hbar * mu;
        e.check_off_lattice(at, "lambda + hbar h")?;
        theta_fac[q][q] = e.theta(at + hbar) / e.theta(at);
    }
    let da = mul2(&d, &a);
    let bct = mul2(&mul2(&b, &c), &theta_fac);
    let mut out = da;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] -= bct[i][j];
        }
    }
    Ok(out)
}

pub(super) fn det(ctx: &Ctx) -> Vec<CheckRecord> {
    let e = ctx.engine;
    let h = ctx.cfg.hbar;
    let mode = ctx.numeric();
    let n = ctx.samples(50);
    let tol = ctx.tol.numeric();
    let mut out = Vec::new();

    let trivial = quantum_det(&e, h, Complex64::new(0.31, 0.42), |_, _| Ok(JetMatrix::identity(4, 0))).map(|d| {
        d.iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).norm()))
            .fold(0.0, f64::max)
    });
    out.push(rec("det:trivial_l", "Det=1").finish(trivial, tol));

    let res = ctx.sweep("det:fundamental", n, |rng| {
        let (z, _, u, l) = sample_rll(ctx, rng, mode)?;
        let d = quantum_det(&e, h, l, |zs, ls| {
            Ok(build_r(&e, mode, RVariant::Plus, Arg::new(z - u, zs), Arg::new(l, ls))?.into_matrix())
        })?;
        let off = d[0][1].norm().max(d[1][0].norm()).max((d[0][0] - d[1][1]).norm());
        let closed = e.theta(z - u - h) / e.theta(z - u);
        Ok((off, d[0][0], (d[0][0] - closed).norm()))
    });
    let off: Vec<Result<f64>> = res.iter().map(|r| r.as_ref().map(|v| v.0).map_err(Clone::clone)).collect();
    let scal: Vec<Result<f64>> = res.iter().map(|r| r.as_ref().map(|v| v.2).map_err(Clone::clone)).collect();
    let first = res.first().and_then(|r| r.as_ref().ok()).map(|v| cval(v.1)).unwrap_or(serde_json::Value::Null);
    out.push(
        rec("det:fundamental_offscalar", "Det=1")
            .p("samples", n)
            .p("scalar_first_sample", first)
            .finish(worst(&off), tol),
    );
    out.push(
        rec("det:fundamental_scalar", "Det=1").p("closed_form", "theta(z-u-hbar)/theta(z-u)").finish(worst(&scal), tol),
    );
    out
}

fn l_builder<'a>(
    e: &'a ThetaEngine,
    sign: Sign,
    lam: Complex64,
    zeta: Complex64,
    cfg: RepConfig,
) -> impl Fn(i32) -> Result<WeightedOperator> + 'a {
    move |mu| Ok(WeightedOperator::new(2, build_l_image(e, sign, Arg::new(lam, mu), zeta, &cfg)?.matrix))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Plus,
    Minus,
    Mixed,
}

/// Spectral points (ζ, ζ', w) with every kernel expansion inside its domain.
fn sample_lops(ctx: &Ctx, rng: &mut ChaCha8Rng, rel: Relation) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let e = &ctx.engine;
    let ((zr, zpr), wr) = match rel {
        Relation::Plus => (((0.3, 0.5), (0.3, 0.5)), (0.03, 0.15)),
        Relation::Minus => (((0.03, 0.15), (0.03, 0.15)), (0.3, 0.5)),
        Relation::Mixed => (((0.03, 0.12), (0.4, 0.55)), (0.2, 0.3)),
    };
    draw(
        rng,
        |r| {
            (
                annulus_point(r, zr.0, zr.1),
                annulus_point(r, zpr.0, zpr.1),
                annulus_point(r, wr.0, wr.1),
                rectangle_point(r, e),
            )
        },
        |&(z, zp, w, l)| {
            let margin = 0.05;
            let inside = match rel {
                Relation::Plus => w.norm() + margin < e.lattice_distance(z).min(e.lattice_distance(zp)),
                Relation::Minus => z.norm().max(zp.norm()) + margin < e.lattice_distance(w),
                Relation::Mixed => {
                    z.norm() + margin < e.lattice_distance(w) && w.norm() + margin < e.lattice_distance(zp)
                }
            };
            inside && clear_of_lattice(e, &[z - zp, z - w, zp - w, l])
        },
    )
}

fn lpm_residual(
    ctx: &Ctx,
    rel: Relation,
    s: i32,
    z: Complex64,
    zp: Complex64,
    w: Complex64,
    lam: Complex64,
) -> Result<f64> {
    let e = &ctx.engine;
    let mode = ctx.formal();
    let cfg = RepConfig::new(w, ctx.m()).with_trunc(ctx.cfg.trunc);
    let rb = |variant| move |mu: i32| build_r(e, mode, variant, Arg::at(z - zp), Arg::new(lam, mu));
    let (lhs, rhs) = match rel {
        Relation::Plus | Relation::Minus => {
            let (sign, variant) =
                if rel == Relation::Plus { (Sign::Plus, RVariant::Plus) } else { (Sign::Minus, RVariant::Minus) };
            let l1 = l_builder(e, sign, lam, z, cfg);
            let l2 = l_builder(e, sign, lam, zp, cfg);
            let r = rb(variant);
            // R(ζ-ζ',λ) L¹_{λ+ħh⁽²⁾}(ζ) L²_λ(ζ') = L²_{λ+ħh⁽¹⁾}(ζ') L¹_λ(ζ) R(ζ-ζ',λ+ħh)
            let lhs = dynamical_apply(r, 3, (0, 1), None)?
                .mul(&dynamical_apply(&l1, 3, (0, 2), Some((1, s)))?)
                .mul(&dynamical_apply(&l2, 3, (1, 2), None)?);
            let rhs = dynamical_apply(&l2, 3, (1, 2), Some((0, s)))?
                .mul(&dynamical_apply(&l1, 3, (0, 2), None)?)
                .mul(&dynamical_apply(r, 3, (0, 1), Some((2, s)))?);
            (lhs, rhs)
        }
        Relation::Mixed => {
            let lm = l_builder(e, Sign::Minus, lam, z, cfg);
            let lp = l_builder(e, Sign::Plus, lam, zp, cfg);
            let r = rb(RVariant::Minus);
            // L⁻¹_λ(ζ) R⁻(ζ-ζ',λ+ħh) L⁺²_λ(ζ') = L⁺²_{λ+ħh⁽¹⁾}(ζ') R⁻(ζ-ζ',λ) L⁻¹_{λ+ħh⁽²⁾}(ζ), K = 0
            let lhs = dynamical_apply(&lm, 3, (0, 2), None)?
                .mul(&dynamical_apply(r, 3, (0, 1), Some((2, s)))?)
                .mul(&dynamical_apply(&lp, 3, (1, 2), None)?);
            let rhs = dynamical_apply(&lp, 3, (1, 2), Some((0, s)))?
                .mul(&dynamical_apply(r, 3, (0, 1), None)?)
                .mul(&dynamical_apply(&lm, 3, (0, 2), Some((1, s)))?);
            (lhs, rhs)
        }
    };
    Ok(lhs.matrix().max_abs_diff(rhs.matrix()))
}

pub(super) fn lpm(ctx: &Ctx) -> Vec<CheckRecord> {
    let e = ctx.engine;
    let m = ctx.m();
    let n = ctx.samples(10);
    let tol = ctx.tol.jet();
    let mut out = Vec::new();
    let cases = [
        (Relation::Plus, 1, "lops:plus", "Lpm:Lpm"),
        (Relation::Minus, 1, "lops:minus", "Lpm:Lpm"),
        (Relation::Mixed, 1, "lops:mixed", "L+:L-"),
        (Relation::Plus, -1, "lops:plus:opposite_shift", "Lpm:Lpm"),
    ];
    for (rel, s, name, anchor) in cases {
        let res = ctx.sweep(name, n, |rng| {
            let (z, zp, w, l) = sample_lops(ctx, rng, rel)?;
            lpm_residual(ctx, rel, s, z, zp, w, l)
        });
        out.push(
            rec(name, anchor).p("samples", n).p("jet_order", m).p("shift_sign", s).p("K", 0).finish(worst(&res), tol),
        );
    }

    let ns = ctx.samples(10);
    let id = ctx.sweep("lops:order0", ns, |rng| {
        let (z, _, w, l) = sample_lops(ctx, rng, Relation::Plus)?;
        let (zm, _, wm, _) = sample_lops(ctx, rng, Relation::Minus)?;
        let mut worst_entry: f64 = 0.0;
        for (sign, zeta, at) in [(Sign::Plus, z, w), (Sign::Minus, zm, wm)] {
            let img = build_l_image(&e, sign, Arg::at(l), zeta, &RepConfig::new(at, m))?;
            let c0 = img.matrix.coefficient(0);
            for (k, v) in c0.iter().enumerate() {
                worst_entry = worst_entry.max((v - if k % 5 == 0 { 1.0 } else { 0.0 }).norm());
            }
        }
        Ok(worst_entry)
    });
    out.push(rec("lops:order0_identity", "chaat").finish(worst(&id), ctx.tol.theta()));

    for (sign, rel, name, anchor) in [
        (Sign::Plus, Relation::Plus, "lops:factorization:plus", "chaat"),
        (Sign::Minus, Relation::Minus, "lops:factorization:minus", "neila"),
    ] {
        let res = ctx.sweep(name, ns, |rng| {
            let (z, _, w, l) = sample_lops(ctx, rng, rel)?;
            let cfg = RepConfig::new(w, m);
            let img = build_l_image(&e, sign, Arg::at(l), z, &cfg)?;
            let (variant, a) = match sign {
                Sign::Plus => (RVariant::Plus, a_factor(&e, w, z, &cfg)?),
                Sign::Minus => (RVariant::Minus, a_factor(&e, z, w, &cfg)?),
            };
            let r = build_r(&e, ctx.formal(), variant, Arg::at(z - w), Arg::at(l))?;
            Ok(img.matrix.max_abs_diff(&r.matrix().scale_jet(&a)))
        });
        let form =
            if sign == Sign::Plus { "A(w, zeta) R+(zeta - w, lambda)" } else { "A(zeta, w) R-(zeta - w, lambda)" };
        out.push(rec(name, anchor).p("closed_form", form).finish(worst(&res), tol));
    }

    let pair = DualBasisPair::for_lambda(&e, Complex64::new(0.0, 0.0), ctx.cfg.trunc, ctx.cfg.depth);
    let a_res = ctx.sweep("lops:a_factor", ns, |rng| {
        let pair = pair.as_ref().map_err(Clone::clone)?;
        let (z, zp) = draw(
            rng,
            |r| (annulus_point(r, 0.05, 0.15), annulus_point(r, 0.4, 0.5)),
            |&(z, zp)| z.norm() + 0.05 < e.lattice_distance(zp) && clear_of_lattice(&e, &[zp - z]),
        )?;
        let cfg = RepConfig::new(z, m).with_trunc(ctx.cfg.trunc);
        let closed = a_factor(&e, z, zp, &cfg)?;
        let summed = a_factor_truncated(&e, z, zp, &cfg, pair)?;
        let kernel = pair.kernel_sum(zp, z, ctx.cfg.trunc)?;
        Ok([closed.max_abs_diff(&summed), (closed.coeff(1) - kernel * 0.5).norm(), (closed.coeff(0) - 1.0).norm()])
    });
    let pick = |i: usize| -> Vec<Result<f64>> {
        a_res.iter().map(|r| r.as_ref().map(|v| v[i]).map_err(Clone::clone)).collect()
    };
    out.push(
        rec("lops:a_factor_truncated_sum", "azz'").p("N", ctx.cfg.trunc).finish(worst(&pick(0)), ctx.tol.scaled(1e-7)),
    );
    out.push(rec("lops:a_factor_order1", "azz'").p("expected", "half the L0 kernel").finish(worst(&pick(1)), tol));
    out.push(rec("lops:a_factor_order0", "azz'").finish(worst(&pick(2)), ctx.tol.theta()));
    out
}
