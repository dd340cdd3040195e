//! Current relations in π_ζ and half-current exchange relations in the
//! two-point tensor representation.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::jet::{HbarJet, PointGerm};
use crate::linalg::JetMatrix;
use crate::rep::{
    current_field_image, current_field_truncated, half_current_continued, half_current_truncated, rep_generator_image,
    Field, Generator, HalfKind, RepConfig, Sign, TensorRep,
};
use crate::rmatrix::{Arg, HbarMode};
use crate::spaces::{green_kernel, DualBasisPair};
use crate::verify::oracle::{circle_nodes, divide_by_hbar, k_minus_closed, k_plus_closed};
use crate::verify::sampling::{annulus_point, clear_of_lattice, draw, rectangle_point};
use crate::verify::{rec, worst, CheckRecord, Ctx};

const SIGNS: [(Sign, &str); 2] = [(Sign::Plus, "+"), (Sign::Minus, "-")];

fn pick<const K: usize>(v: &[Result<[f64; K]>], i: usize) -> Vec<Result<f64>> {
    v.iter().map(|r| r.as_ref().map(|a| a[i]).map_err(Clone::clone)).collect()
}

/// Which reading of the second left-hand term of the exchange relation.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Reading {
    /// Both factors carry ε' and sit at w, as printed.
    Literal,
    /// First factor carries ε instead of ε'.
    Variant,
}

struct LemmaPoint {
    z: Complex64,
    w: Complex64,
    lam: Complex64,
}

fn lemma_residual(
    e: &crate::theta::ThetaEngine,
    tr: &TensorRep,
    kind: HalfKind,
    (eps, epsp): (Sign, Sign),
    p: &LemmaPoint,
    reading: Reading,
) -> Result<f64> {
    let m = tr.jet_order;
    let mode = HbarMode::Formal { order: m };
    let th = |a: Arg| mode.theta_at(e, a);
    let inv = |a: Arg| mode.theta_inv(e, a, "lemma denominator", false);
    let x = |s: Sign, shift: i32, at: Complex64| tr.half_current(e, kind, s, Arg::new(p.lam, shift), at);
    let (z, w, lam) = (p.z, p.w, p.lam);
    let ee = Complex64::new(eps.value() * epsp.value(), 0.0);
    let inv_zw = inv(Arg::at(z - w))?;
    let inv_wz = inv(Arg::at(w - z))?;
    let inv_ml = inv(Arg::at(-lam))?;
    // e: θ(-ħ) and shifts (+ħ, -ħ); f: θ(ħ) and shifts (-ħ, +ħ)
    let (hs, first, second) = match kind {
        HalfKind::E => (-1, 1, -1),
        HalfKind::F => (1, -1, 1),
    };
    let th_h = th(Arg::new(Complex64::new(0.0, 0.0), hs))?;
    let c1 = &th(Arg::new(z - w, hs))? * &inv_zw;
    let c3 = &th(Arg::new(z - w, -hs))? * &inv_zw;
    let c2 = (&(&th(Arg::at(w - z - lam))? * &th_h) * &(&inv_wz * &inv_ml)).scale(ee);
    let c4 = (&(&th(Arg::at(z - w - lam))? * &th_h) * &(&inv_zw * &inv_ml)).scale(ee);
    let second_lhs = match reading {
        Reading::Literal => x(epsp, first, w)?.mul(&x(epsp, second, w)?),
        Reading::Variant => x(eps, first, w)?.mul(&x(epsp, second, w)?),
    };
    let terms = [
        x(eps, first, z)?.mul(&x(epsp, second, w)?).scale_jet(&c1),
        second_lhs.scale_jet(&c2),
        x(epsp, first, w)?.mul(&x(eps, second, z)?).scale_jet(&c3),
        x(eps, first, z)?.mul(&x(eps, second, z)?).scale_jet(&c4),
    ];
    // terms reach 1e8 near the diagonal, so compare against the largest one
    let scale = terms.iter().map(JetMatrix::max_abs).fold(1.0, f64::max);
    Ok(terms[0].add(&terms[1]).max_abs_diff(&terms[2].add(&terms[3])) / scale)
}

fn sample_tensor(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<(Complex64, Complex64, LemmaPoint)> {
    let e = &ctx.engine;
    draw(
        rng,
        |r| {
            let z1 = annulus_point(r, 0.25, 0.35);
            let z2 = annulus_point(r, 0.05, 0.15);
            (z1, z2, LemmaPoint { z: rectangle_point(r, e), w: rectangle_point(r, e), lam: rectangle_point(r, e) })
        },
        |(z1, z2, p)| clear_of_lattice(e, &[z1 - z2, p.z - p.w, p.z - z1, p.z - z2, p.w - z1, p.w - z2, p.lam]),
    )
}

pub(super) fn half_currents(ctx: &Ctx) -> Vec<CheckRecord> {
    let e = ctx.engine;
    let m = ctx.m();
    let n = ctx.samples(20);
    let tol = ctx.tol.jet();
    let mut out = Vec::new();
    for (kind, kname, anchor) in [(HalfKind::E, "e", "eeps:eeps'"), (HalfKind::F, "f", "feps:feps'")] {
        for (eps, en) in SIGNS {
            for (epsp, epn) in SIGNS {
                let name = format!("halfcurrents:{kname}:{en}{epn}");
                let res = ctx.sweep(&name, n, |rng| {
                    let (z1, z2, p) = sample_tensor(ctx, rng)?;
                    let tr = TensorRep::new(&e, z1, z2, m)?;
                    Ok([
                        lemma_residual(&e, &tr, kind, (eps, epsp), &p, Reading::Literal)?,
                        lemma_residual(&e, &tr, kind, (eps, epsp), &p, Reading::Variant)?,
                    ])
                });
                let lit = worst(&pick(&res, 0));
                let var = worst(&pick(&res, 1));
                let (lv, vv) = (lit.as_ref().ok().copied(), var.as_ref().ok().copied());
                let vanishing = match (lv.is_some_and(|r| r <= tol), vv.is_some_and(|r| r <= tol)) {
                    (true, true) => "both",
                    (true, false) => "literal",
                    (false, true) => "variant",
                    (false, false) => "none",
                };
                let best = match (lit, var) {
                    (Ok(a), Ok(b)) => Ok(a.min(b)),
                    (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(a),
                    (Err(err), Err(_)) => Err(err),
                };
                out.push(
                    rec(name, anchor)
                        .p("samples", n)
                        .p("normalization", "largest term")
                        .p("literal_residual", lv)
                        .p("variant_residual", vv)
                        .p("vanishing_reading", vanishing)
                        .finish(best, tol),
                );
            }
        }
    }

    // the two truncated expansions are both pieces of ω_λ(z, ζ)
    let trunc = ctx.cfg.trunc;
    let split = ctx.sweep("halfcurrents:split", ctx.samples(5), |rng| {
        let (lam, zeta, zout, zin) = draw(
            rng,
            |r| {
                (
                    rectangle_point(r, &e),
                    annulus_point(r, 0.1, 0.2),
                    annulus_point(r, 0.45, 0.55),
                    annulus_point(r, 0.02, 0.06),
                )
            },
            |&(l, zeta, zo, zi)| clear_of_lattice(&e, &[l, zo - zeta, zi - zeta]),
        )?;
        let cfg = RepConfig::new(zeta, m).with_trunc(trunc);
        let pre = e.theta_hbar_over_hbar(m)?;
        let mut w: f64 = 0.0;
        for kind in [HalfKind::E, HalfKind::F] {
            let (r, c) = if kind == HalfKind::E { (0, 1) } else { (1, 0) };
            let scale = if kind == HalfKind::E { pre.clone() } else { HbarJet::one(m) };
            let plus = half_current_truncated(&e, kind, Sign::Plus, lam, zout, &cfg)?;
            let omega_out = scale.scale(green_kernel(&e, lam, zout, zeta)?);
            w = w.max(plus.entry(r, c).max_abs_diff(&omega_out));
            let minus = half_current_truncated(&e, kind, Sign::Minus, lam, zin, &cfg)?;
            let omega_in = scale.scale(-green_kernel(&e, lam, zin, zeta)?);
            w = w.max(minus.entry(r, c).max_abs_diff(&omega_in));
            let cont = half_current_continued(&e, kind, Sign::Minus, Arg::at(lam), zin, &cfg)?;
            w = w.max(cont.matrix.max_abs_diff(&minus.matrix));
        }
        Ok(w)
    });
    out.push(rec("halfcurrents:split", "split").p("N", trunc).finish(worst(&split), tol));

    let shape = ctx.sweep("halfcurrents:matrix_part", ctx.samples(5), |rng| {
        let (_, _, p) = sample_tensor(ctx, rng)?;
        let cfg = RepConfig::new(Complex64::new(0.05, 0.02), m);
        let mut w: f64 = 0.0;
        for (s, _) in SIGNS {
            w = w.max(half_current_continued(&e, HalfKind::E, s, Arg::at(p.lam), p.z, &cfg)?.upper_violation());
            w = w.max(half_current_continued(&e, HalfKind::F, s, Arg::at(p.lam), p.z, &cfg)?.lower_violation());
        }
        Ok(w)
    });
    out.push(rec("halfcurrents:matrix_part", "x+").finish(worst(&shape), 0.0));
    out
}

/// Laurent polynomial Σ_{k=-2}^{2} a_k z^k with random coefficients.
fn laurent_poly(rng: &mut ChaCha8Rng) -> [Complex64; 5] {
    std::array::from_fn(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

fn eval_poly(a: &[Complex64; 5], z: Complex64) -> Complex64 {
    a.iter().enumerate().map(|(i, c)| c * z.powi(i as i32 - 2)).sum()
}

fn diag_ratio(m: &JetMatrix, top_over_bottom: bool) -> Result<HbarJet> {
    let (a, b) = (m.get(0, 0), m.get(1, 1));
    if top_over_bottom {
        a.checked_div(b)
    } else {
        b.checked_div(a)
    }
}

pub(super) fn currents(ctx: &Ctx) -> Vec<CheckRecord> {
    let e = ctx.engine;
    let m = ctx.m();
    let n = ctx.samples(20);
    let mut out = Vec::new();
    let sample_pair = |rng: &mut ChaCha8Rng| -> Result<(Complex64, Complex64)> {
        draw(
            rng,
            |r| (rectangle_point(r, &e), annulus_point(r, 0.0, 0.3)),
            |&(z, zeta)| clear_of_lattice(&e, &[z - zeta]),
        )
    };

    let relk = ctx.sweep("currents:rel_k", n, |rng| {
        let (z, zeta) = sample_pair(rng)?;
        let cfg = RepConfig::new(zeta, m);
        let mut w: f64 = 0.0;
        for (big, small) in [(Field::KPlus, Field::SmallKPlus), (Field::KMinus, Field::SmallKMinus)] {
            let k = current_field_image(&e, big, Arg::at(z), &cfg)?.matrix;
            let prod = current_field_image(&e, small, Arg::at(z), &cfg)?
                .matrix
                .mul(&current_field_image(&e, small, Arg::new(z, -1), &cfg)?.matrix);
            w = w.max(k.max_abs_diff(&prod));
        }
        Ok(w)
    });
    out.push(rec("currents:rel_k", "rel-k").p("samples", n).finish(worst(&relk), ctx.tol.scaled(1e-10)));

    let closed = ctx.sweep("currents:k_closed", n, |rng| {
        let (z, zeta) = sample_pair(rng)?;
        let cfg = RepConfig::new(zeta, m);
        let kp = current_field_image(&e, Field::KPlus, Arg::at(z), &cfg)?.matrix;
        let km = current_field_image(&e, Field::KMinus, Arg::at(z), &cfg)?.matrix;
        let h = |x: Complex64, s: i32, num: bool| -> Result<HbarJet> {
            let t = e.theta_shifted(x, s, m)?;
            let base = e.theta_shifted(x, 0, m)?;
            if num {
                t.checked_div(&base)
            } else {
                base.checked_div(&t)
            }
        };
        let x = z - zeta;
        let ratios = [
            // K⁺(z) e K⁺(z)⁻¹ = θ(z-w+ħ)/θ(z-w-ħ) e, e supported at w = ζ
            (diag_ratio(&kp, true)?, h(x, 1, true)?.checked_div(&h(x, -1, true)?)?),
            // K⁻(z) e K⁻(z)⁻¹ = θ(w-z+ħ)/θ(w-z-ħ) e at K = 0
            (diag_ratio(&km, true)?, h(-x, 1, true)?.checked_div(&h(-x, -1, true)?)?),
            // K⁺(z) f K⁺(z)⁻¹ = θ(w-z+ħ)/θ(w-z-ħ) f
            (diag_ratio(&kp, false)?, h(-x, 1, true)?.checked_div(&h(-x, -1, true)?)?),
            // K⁻(z) f K⁻(z)⁻¹ = θ(z-w+ħ)/θ(z-w-ħ) f
            (diag_ratio(&km, false)?, h(x, 1, true)?.checked_div(&h(x, -1, true)?)?),
        ];
        let mut r = [0.0; 6];
        for (i, (a, b)) in ratios.iter().enumerate() {
            r[i] = a.max_abs_diff(b);
        }
        r[4] = kp.max_abs_diff(&k_plus_closed(&e, z, zeta, m)?);
        r[5] = km.max_abs_diff(&k_minus_closed(&e, z, zeta, m)?);
        Ok(r)
    });
    let tol = ctx.tol.numeric();
    for (i, (name, anchor)) in [
        ("currents:k_plus_e", "K+:e"),
        ("currents:k_minus_e", "K-:e"),
        ("currents:k_plus_f", "K-f"),
        ("currents:k_minus_f", "K-f"),
        ("currents:k_plus_closed_form", "rel-k"),
        ("currents:k_minus_closed_form", "rel-k"),
    ]
    .into_iter()
    .enumerate()
    {
        out.push(rec(name, anchor).p("samples", n).finish(worst(&pick(&closed, i)), tol));
    }

    // h^± closed forms against their defining truncated sums
    let trunc = ctx.cfg.trunc;
    let pair = DualBasisPair::for_lambda(&e, Complex64::new(0.0, 0.0), trunc, ctx.cfg.depth);
    let hs = ctx.sweep("currents:h_truncated", ctx.samples(5), |rng| {
        let pair = pair.as_ref().map_err(Clone::clone)?;
        let (small, large) = draw(
            rng,
            |r| (annulus_point(r, 0.05, 0.15), annulus_point(r, 0.4, 0.5)),
            |&(s, l)| s.norm() + 0.05 < e.lattice_distance(l) && clear_of_lattice(&e, &[l - s]),
        )?;
        let mut w: f64 = 0.0;
        for (field, zeta, z) in [(Field::HPlus, small, large), (Field::HMinus, large, small)] {
            let cfg = RepConfig::new(zeta, m).with_trunc(trunc);
            let a = current_field_image(&e, field, Arg::at(z), &cfg)?.matrix;
            let b = current_field_truncated(&e, field, z, &cfg, pair)?.matrix;
            w = w.max(a.max_abs_diff(&b));
        }
        Ok(w)
    });
    out.push(rec("currents:h_truncated_sum", "x+").p("N", trunc).finish(worst(&hs), ctx.tol.jet()));

    out.push(smeared_e_f(ctx));

    // generators and trivially commuting diagonal currents
    let gens = (|| -> Result<f64> {
        let zeta = Complex64::new(0.11, -0.07);
        let cfg = RepConfig::new(zeta, m);
        let one = PointGerm::constant(zeta, Complex64::new(1.0, 0.0), m);
        let k = rep_generator_image(&e, Generator::K, &cfg)?.matrix.max_abs();
        let h = rep_generator_image(&e, Generator::HO(&one), &cfg)?.matrix;
        let hd = h.get(0, 0).max_abs_diff(&HbarJet::one(m)).max(h.get(1, 1).max_abs_diff(&-HbarJet::one(m)));
        let eimg = rep_generator_image(&e, Generator::E(&one), &cfg)?;
        let pre = eimg.entry(0, 1);
        let lead = (pre.coeff(0) - 1.0).norm().max(pre.coeff(1).norm());
        Ok(k.max(hd).max(lead).max(eimg.upper_violation()))
    })();
    out.push(rec("currents:generator_images", "fd:repres").finish(gens, ctx.tol.theta()));
    let commute = ctx.sweep("currents:kk", ctx.samples(5), |rng| {
        let (z, zeta) = sample_pair(rng)?;
        let (w, _) = sample_pair(rng)?;
        let cfg = RepConfig::new(zeta, m);
        let kp = current_field_image(&e, Field::KPlus, Arg::at(z), &cfg)?.matrix;
        let km = current_field_image(&e, Field::KMinus, Arg::at(w), &cfg)?.matrix;
        Ok(kp.mul(&km).max_abs_diff(&km.mul(&kp)))
    });
    out.push(rec("currents:k_plus_k_minus_commute", "K+K-").p("K", 0).finish(worst(&commute), ctx.tol.theta()));

    let coproduct = ctx.sweep("currents:coproduct", ctx.samples(5), |rng| {
        let (z1, z2, p) = sample_tensor(ctx, rng)?;
        let tr = TensorRep::new(&e, z1, z2, m)?;
        let (a, b) = (Complex64::new(0.3, -0.2), Complex64::new(-0.5, 0.1));
        let de = tr.e_smeared(&e, a, b)?;
        let mut want = JetMatrix::zeros(4, m);
        // ε(ζ1) E12⊗1 + ε(ζ2) 1⊗E12 at order 0
        want.set(0, 2, HbarJet::constant(a, m));
        want.set(1, 3, HbarJet::constant(a, m));
        want.set(0, 1, HbarJet::constant(b, m));
        want.set(2, 3, HbarJet::constant(b, m));
        let c0 = de.coefficient(0);
        let w0 = want.coefficient(0);
        let order0 = c0.iter().zip(&w0).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        let dk = tr.k_image(&e, Field::KPlus, Arg::at(p.z))?;
        let k1 = current_field_image(&e, Field::KPlus, Arg::at(p.z), &RepConfig::new(z1, m))?.matrix;
        let k2 = current_field_image(&e, Field::KPlus, Arg::at(p.z), &RepConfig::new(z2, m))?.matrix;
        Ok(order0.max(dk.max_abs_diff(&k1.kron(&k2))))
    });
    out.push(rec("currents:coproduct_images", "Delta:e:ell").finish(worst(&coproduct), ctx.tol.theta()));
    out
}

/// [π(e[ε]), π(f[ε'])] = (θ(ħ)/ħ) εε'(ζ) h̄ against
/// (1/ħ)(∮_{|z|=R} εε' K⁺ - ∮_{|z|=r} εε' K⁻⁻¹), with r < |ζ| < R.
fn smeared_e_f(ctx: &Ctx) -> CheckRecord {
    const OUTER: f64 = 0.45;
    const INNER: f64 = 0.05;
    const NODES: usize = 64;
    let e = ctx.engine;
    let m = ctx.m();
    let n = ctx.samples(10);
    let res = ctx.sweep("currents:e_f", n, |rng| {
        let zeta = annulus_point(rng, 0.12, 0.2);
        let (a, b) = (laurent_poly(rng), laurent_poly(rng));
        let cfg = RepConfig::new(zeta, m + 1);
        let mut acc = [HbarJet::zero(m + 1), HbarJet::zero(m + 1)];
        for (radius, plus) in [(OUTER, true), (INNER, false)] {
            for (z, wt) in circle_nodes(Complex64::new(0.0, 0.0), radius, NODES) {
                let k = if plus {
                    current_field_image(&e, Field::KPlus, Arg::at(z), &cfg)?.matrix
                } else {
                    let km = current_field_image(&e, Field::KMinus, Arg::at(z), &cfg)?.matrix;
                    let mut inv = JetMatrix::zeros(2, m + 1);
                    inv.set(0, 0, km.get(0, 0).invert()?);
                    inv.set(1, 1, km.get(1, 1).invert()?);
                    inv
                };
                let s = eval_poly(&a, z) * eval_poly(&b, z) * wt * if plus { 1.0 } else { -1.0 };
                for (i, slot) in acc.iter_mut().enumerate() {
                    *slot = &*slot + &k.get(i, i).scale(s);
                }
            }
        }
        let lead = acc[0].coeff(0).norm().max(acc[1].coeff(0).norm());
        let pre = e.theta_hbar_over_hbar(m)?.scale(eval_poly(&a, zeta) * eval_poly(&b, zeta));
        let top = divide_by_hbar(&acc[0]).max_abs_diff(&pre);
        let bottom = divide_by_hbar(&acc[1]).max_abs_diff(&-pre);
        Ok(lead.max(top).max(bottom))
    });
    rec("currents:e_f_smeared", "e-f-ell")
        .p("samples", n)
        .p("outer_radius", OUTER)
        .p("inner_radius", INNER)
        .p("nodes", NODES)
        .p("K", 0)
        .finish(worst(&res), ctx.tol.jet())
}
