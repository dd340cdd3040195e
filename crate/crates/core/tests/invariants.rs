use eqg_core::exec::Parallelism;
use eqg_core::rmatrix::{build_r, Arg, HbarMode, RVariant};
use eqg_core::spaces::{residue_pairing, DualBasisPair, LaurentSeries};
use eqg_core::verify::oracle::theta_product;
use eqg_core::verify::{run_suite, Suite, VerifyConfig};
use eqg_core::{c64, Complex64, DiffOpSymbol, HbarJet, PointGerm, ThetaEngine};
use proptest::prelude::*;

const TAU: Complex64 = Complex64::new(0.3, 1.1);

fn cplx(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| c64(a, b))
}

fn jet(order: usize) -> impl Strategy<Value = HbarJet> {
    prop::collection::vec(cplx(2.0), order + 1).prop_map(HbarJet::from_coeffs)
}

fn close(a: &HbarJet, b: &HbarJet, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_ring_axioms(a in jet(4), b in jet(4), c in jet(4)) {
        prop_assert!(close(&(&a * &b), &(&b * &a), 1e-14));
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-13));
        prop_assert!(close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), 1e-13));
        prop_assert_eq!(&a * &HbarJet::one(4), a.clone());
    }

    #[test]
    fn jet_inverse(a in jet(5)) {
        prop_assume!(a.coeff(0).norm() > 0.3);
        let inv = a.invert().unwrap();
        prop_assert!(close(&(&a * &inv), &HbarJet::one(5), 1e-10));
    }

    #[test]
    fn jet_order_mismatch_is_an_error(a in jet(2), b in jet(3)) {
        prop_assert!(a.checked_mul(&b).is_err());
        prop_assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn diffop_is_linear(d1 in prop::collection::vec(cplx(1.0), 5),
                        d2 in prop::collection::vec(cplx(1.0), 5),
                        s in cplx(1.0)) {
        let base = c64(0.1, 0.2);
        let (g1, g2) = (PointGerm::new(base, d1), PointGerm::new(base, d2));
        let op = DiffOpSymbol::tanh_half_over_u(4);
        let lhs = op.apply(&g1.scale(s).add(&g2)).unwrap();
        let rhs = &op.apply(&g1).unwrap().scale(s) + &op.apply(&g2).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-13));
    }

    #[test]
    fn diffop_composition_is_symbol_product(s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let a = DiffOpSymbol::shift(s, 6).compose(&DiffOpSymbol::shift(t, 6));
        let b = DiffOpSymbol::shift(s + t, 6);
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn theta_quasi_periodicity(z in cplx(0.5)) {
        let e = ThetaEngine::new(TAU).unwrap();
        let t = e.theta(z);
        prop_assert!((e.theta(z + 1.0) + t).norm() <= 1e-12 * (1.0 + t.norm()));
        let factor = -(-std::f64::consts::PI * Complex64::i() * (TAU + 2.0 * z)).exp();
        let want = factor * t;
        prop_assert!((e.theta(z + TAU) - want).norm() <= 1e-11 * (1.0 + want.norm()));
        prop_assert!((e.theta(-z) + t).norm() <= 1e-14 * (1.0 + t.norm()));
    }

    #[test]
    fn theta_matches_product(z in cplx(0.5)) {
        let e = ThetaEngine::new(TAU).unwrap();
        let (a, b) = (e.theta(z), theta_product(TAU, z));
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
    }

    #[test]
    fn r_matrix_has_weight_zero(z in cplx(0.45), lam in cplx(0.45)) {
        let e = ThetaEngine::new(TAU).unwrap();
        prop_assume!(e.lattice_distance(lam) > 0.05 && e.lattice_distance(z) > 0.05);
        for variant in [RVariant::Plus, RVariant::Minus, RVariant::Bar] {
            for mode in [HbarMode::Numeric { hbar: c64(0.07, 0.03) }, HbarMode::Formal { order: 3 }] {
                let r = build_r(&e, mode, variant, Arg::at(z), Arg::at(lam)).unwrap();
                prop_assert_eq!(r.weight_violation(), 0.0);
                prop_assert_eq!(r.six_term_violation(), 0.0);
            }
        }
    }
}

#[test]
fn dual_bases_are_biorthogonal() {
    let e = ThetaEngine::new(TAU).unwrap();
    for lam in [c64(0.21, 0.13), c64(-0.33, 0.4), Complex64::new(0.0, 0.0)] {
        let pair = DualBasisPair::for_lambda(&e, lam, 20, 64).unwrap();
        let p = pair.pairing_matrix().unwrap();
        for i in 0..pair.len() {
            for j in 0..pair.len() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - want).norm() < 1e-10, "λ={lam} ({i},{j}): {}", p[(i, j)]);
            }
        }
    }
}

#[test]
fn residue_pairing_of_monomials() {
    let a = LaurentSeries::monomial(-3, c64(2.0, 1.0));
    let b = LaurentSeries::monomial(2, c64(0.5, 0.0));
    assert!((residue_pairing(&a, &b).unwrap() - c64(1.0, 0.5)).norm() < 1e-15);
    assert_eq!(residue_pairing(&a, &LaurentSeries::monomial(1, c64(1.0, 0.0))).unwrap(), c64(0.0, 0.0));
}

#[test]
fn reports_do_not_depend_on_the_scheduler() {
    let mut cfg = VerifyConfig { samples: Some(4), ..VerifyConfig::default() };
    let suites = [Suite::Theta, Suite::Dybe, Suite::Rll];
    let par = run_suite(&cfg, &suites).unwrap();
    cfg.parallelism = Parallelism::Sequential;
    let seq = run_suite(&cfg, &suites).unwrap();
    assert_eq!(par.checks.len(), seq.checks.len());
    for (a, b) in par.checks.iter().zip(&seq.checks) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.residual, b.residual, "{}", a.name);
    }
}

#[test]
fn seed_changes_samples() {
    let a = run_suite(&VerifyConfig { samples: Some(3), ..VerifyConfig::default() }, &[Suite::Dybe]).unwrap();
    let b = run_suite(&VerifyConfig { samples: Some(3), seed: 1, ..VerifyConfig::default() }, &[Suite::Dybe]).unwrap();
    let r = |rep: &eqg_core::verify::VerificationReport| rep.find("dybe:minus:numeric").unwrap().residual;
    assert_ne!(r(&a), r(&b));
}
