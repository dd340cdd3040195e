//! Dual bases, pairings and expansion kernels.

use num_complex::Complex64;

use crate::error::Result;
use crate::spaces::{green_kernel, DualBasisPair, RawFamily};
use crate::verify::oracle::circle_integral;
use crate::verify::sampling::{annulus_point, clear_of_lattice, draw, rectangle_point};
use crate::verify::{cval, rec, worst, CheckRecord, Ctx};

const DECAY_STEPS: [usize; 4] = [10, 20, 30, 40];
/// Residuals below this are treated as converged when judging monotone decay.
const DECAY_FLOOR: f64 = 1e-13;

fn sample_lambda(ctx: &Ctx, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Complex64> {
    let e = &ctx.engine;
    draw(rng, |r| rectangle_point(r, e), |l| clear_of_lattice(e, &[*l]))
}

pub(super) fn run(ctx: &Ctx) -> Vec<CheckRecord> {
    let e = ctx.engine;
    let n = ctx.cfg.trunc;
    let depth = ctx.cfg.depth;
    let tol = ctx.tol;
    let mut out = Vec::new();
    let samples = ctx.samples(5);

    let pairing = ctx.sweep("spaces:pairing", samples, |rng| {
        let lam = sample_lambda(ctx, rng)?;
        DualBasisPair::for_lambda(&e, lam, n, depth)?.pairing_residual()
    });
    out.push(
        rec("spaces:pairing", "residue-pairing")
            .p("N", n)
            .p("samples", samples)
            .finish(worst(&pairing), tol.scaled(1e-10)),
    );

    let l0 = DualBasisPair::for_lambda(&e, Complex64::new(0.0, 0.0), n, depth);
    out.push(
        rec("spaces:pairing_l0", "residue-pairing")
            .p("N", n)
            .finish(l0.as_ref().map_err(Clone::clone).and_then(|p| p.pairing_residual()), tol.scaled(1e-10)),
    );

    let g00 = ctx.sweep("spaces:gram_leading", samples, |rng| {
        let lam = sample_lambda(ctx, rng)?;
        let p = DualBasisPair::new(&e, RawFamily::generic(&e, lam)?, n.min(4), depth)?;
        Ok((p.gram()[(0, 0)] - e.theta(lam)).norm())
    });
    out.push(rec("spaces:gram_leading", "ei:la").finish(worst(&g00), tol.scaled(1e-10)));

    // kernel sums at |w| = 0.15, |z| = 0.45
    let kernel = ctx.sweep("spaces:kernel_sum", samples, |rng| {
        let lam = sample_lambda(ctx, rng)?;
        let (z, w) = draw(
            rng,
            |r| (annulus_point(r, 0.45, 0.45), annulus_point(r, 0.15, 0.15)),
            |(z, w)| clear_of_lattice(&e, &[z - w]),
        )?;
        let pair = DualBasisPair::for_lambda(&e, lam, n, depth)?;
        let exact = green_kernel(&e, lam, z, w)?;
        let res: Result<Vec<f64>> = DECAY_STEPS
            .iter()
            .filter(|&&k| k <= n)
            .map(|&k| Ok((pair.kernel_sum(z, w, k)? - exact).norm()))
            .chain(std::iter::once(Ok((pair.kernel_sum(z, w, n)? - exact).norm())))
            .collect();
        res
    });
    let final_res: Vec<Result<f64>> =
        kernel.iter().map(|r| r.as_ref().map(|v| *v.last().unwrap()).map_err(Clone::clone)).collect();
    out.push(
        rec("spaces:kernel_sum", "x+")
            .p("N", n)
            .p("abs_z", 0.45)
            .p("abs_w", 0.15)
            .p("samples", samples)
            .finish(worst(&final_res), tol.jet()),
    );
    let steps: Vec<usize> = DECAY_STEPS.iter().copied().filter(|&k| k <= n).collect();
    let decay = (|| -> Result<(f64, Vec<f64>)> {
        let mut mean = vec![0.0; steps.len()];
        for r in &kernel {
            let v = r.as_ref().map_err(Clone::clone)?;
            for (i, m) in mean.iter_mut().enumerate() {
                *m += v[i] / kernel.len() as f64;
            }
        }
        let mut growth: f64 = 0.0;
        for w in mean.windows(2) {
            let (a, b) = (w[0].max(DECAY_FLOOR), w[1].max(DECAY_FLOOR));
            growth = growth.max((b - a).max(0.0));
        }
        Ok((growth, mean))
    })();
    let (growth, means) = match decay {
        Ok((g, m)) => (Ok(g), m),
        Err(err) => (Err(err), vec![]),
    };
    out.push(
        rec("spaces:kernel_decay", "x+")
            .p("N_values", steps.clone())
            .p("mean_residuals", means)
            .p("floor", DECAY_FLOOR)
            .finish(growth, 0.0),
    );

    // λ = 0: kernel is ρ(z - w) plus a measured constant
    let l0_kernel = (|| -> Result<(f64, Complex64)> {
        let p = l0.as_ref().map_err(Clone::clone)?;
        let c0 = p.kernel_constant().unwrap_or_default();
        let res = ctx.sweep("spaces:kernel_l0", samples, |rng| {
            let (z, w) = draw(
                rng,
                |r| (annulus_point(r, 0.4, 0.5), annulus_point(r, 0.05, 0.2)),
                |(z, w)| clear_of_lattice(&e, &[z - w]),
            )?;
            Ok((p.kernel_sum(z, w, n)? - e.rho(z - w)? - c0).norm())
        });
        Ok((worst(&res)?, c0))
    })();
    let (res, c0) = match l0_kernel {
        Ok((r, c)) => (Ok(r), c),
        Err(err) => (Err(err), Complex64::new(f64::NAN, 0.0)),
    };
    let c0v = if c0.re.is_nan() { serde_json::Value::Null } else { cval(c0) };
    out.push(rec("spaces:kernel_l0", "x+").p("c0", c0v).finish(res, tol.jet()));

    let residue = ctx.sweep("spaces:green_residue", samples, |rng| {
        let lam = sample_lambda(ctx, rng)?;
        let w = rectangle_point(rng, &e);
        let r = circle_integral(w, 0.1, 64, |z| green_kernel(&e, lam, z, w).unwrap_or_default());
        Ok((r - 1.0).norm())
    });
    out.push(
        rec("spaces:green_residue", "class-r")
            .p("radius", 0.1)
            .p("nodes", 64)
            .finish(worst(&residue), tol.scaled(1e-10)),
    );

    let periodic = ctx.sweep("spaces:green_periodic", samples, |rng| {
        let lam = sample_lambda(ctx, rng)?;
        let (z, w) =
            draw(rng, |r| (rectangle_point(r, &e), rectangle_point(r, &e)), |(z, w)| clear_of_lattice(&e, &[z - w]))?;
        let a = green_kernel(&e, lam, z + 1.0, w)?;
        let b = green_kernel(&e, lam, z, w)?;
        Ok((a - b).norm() / b.norm().max(1.0))
    });
    out.push(rec("spaces:green_periodic", "class-r").finish(worst(&periodic), tol.theta()));
    out
}
