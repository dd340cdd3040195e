//! Dynamical R-matrices, weight-graded operators and the gauge function φ.
//!
//! Basis convention on ℂ²: index 0 is v₁, index 1 is v₋₁, so h̄ = diag(1, -1).
//! Tensor products are big-endian: slot 0 is the most significant bit.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{EqgError, Result};
use crate::jet::HbarJet;
use crate::linalg::JetMatrix;
use crate::spaces::green_kernel;
use crate::theta::{ThetaEngine, POLE_GUARD};

/// How ħ is represented: a number, or a formal variable truncated at `order`.
///
/// Numeric mode works with order-0 jets, so every builder has one code path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HbarMode {
    Numeric { hbar: Complex64 },
    Formal { order: usize },
}

/// A point `base + steps·ħ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arg {
    pub base: Complex64,
    pub steps: i32,
}

impl Arg {
    pub fn new(base: Complex64, steps: i32) -> Self {
        Self { base, steps }
    }

    pub fn at(base: Complex64) -> Self {
        Self { base, steps: 0 }
    }

    pub fn shifted(self, steps: i32) -> Self {
        Self { base: self.base, steps: self.steps + steps }
    }

    pub fn plus(self, other: Arg) -> Self {
        Self { base: self.base + other.base, steps: self.steps + other.steps }
    }

    pub fn minus(self, other: Arg) -> Self {
        self.plus(-other)
    }
}

impl std::ops::Neg for Arg {
    type Output = Arg;

    fn neg(self) -> Arg {
        Arg { base: -self.base, steps: -self.steps }
    }
}

impl HbarMode {
    pub fn order(&self) -> usize {
        match self {
            HbarMode::Numeric { .. } => 0,
            HbarMode::Formal { order } => *order,
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, HbarMode::Formal { .. })
    }

    /// ħ as a jet (a number in numeric mode).
    pub fn hbar(&self) -> HbarJet {
        match *self {
            HbarMode::Numeric { hbar } => HbarJet::constant(hbar, 0),
            HbarMode::Formal { order } => HbarJet::hbar(order),
        }
    }

    pub fn constant(&self, c: Complex64) -> HbarJet {
        HbarJet::constant(c, self.order())
    }

    pub fn one(&self) -> HbarJet {
        HbarJet::one(self.order())
    }

    /// Numeric location of the point, ħ set to its numeric value or to 0.
    pub fn locate(&self, a: Arg) -> Complex64 {
        match *self {
            HbarMode::Numeric { hbar } => a.base + hbar * a.steps as f64,
            HbarMode::Formal { .. } => a.base,
        }
    }

    pub fn theta_at(&self, engine: &ThetaEngine, a: Arg) -> Result<HbarJet> {
        match *self {
            HbarMode::Numeric { .. } => Ok(HbarJet::constant(engine.theta(self.locate(a)), 0)),
            HbarMode::Formal { order } => engine.theta_shifted(a.base, a.steps, order),
        }
    }

    /// 1/θ(a), with a typed error if a is (formally) on the lattice.
    pub fn theta_inv(&self, engine: &ThetaEngine, a: Arg, what: &str, dynamical: bool) -> Result<HbarJet> {
        let d = engine.lattice_distance(self.locate(a));
        if d < POLE_GUARD {
            let what = what.to_string();
            return Err(if dynamical {
                EqgError::DynamicalPole { what, dist: d }
            } else {
                EqgError::Pole { what, dist: d }
            });
        }
        self.theta_at(engine, a)?.invert()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RVariant {
    Plus,
    Minus,
    Bar,
}

impl RVariant {
    pub fn name(&self) -> &'static str {
        match self {
            RVariant::Plus => "plus",
            RVariant::Minus => "minus",
            RVariant::Bar => "bar",
        }
    }
}

/// Operator on (ℂ²)^{⊗n}; basis vectors are h̄^{(k)} eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedOperator {
    slots: usize,
    mat: JetMatrix,
}

/// h̄-eigenvalue of slot `k` on basis vector `idx` of an `slots`-fold product.
pub fn slot_weight(idx: usize, slot: usize, slots: usize) -> i32 {
    if (idx >> (slots - 1 - slot)) & 1 == 0 {
        1
    } else {
        -1
    }
}

impl WeightedOperator {
    pub fn new(slots: usize, mat: JetMatrix) -> Self {
        assert_eq!(mat.dim(), 1 << slots, "matrix size does not match slot count");
        Self { slots, mat }
    }

    pub fn identity(slots: usize, order: usize) -> Self {
        Self::new(slots, JetMatrix::identity(1 << slots, order))
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn dim(&self) -> usize {
        1 << self.slots
    }

    pub fn matrix(&self) -> &JetMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> JetMatrix {
        self.mat
    }

    pub fn weight(&self, idx: usize, slot: usize) -> i32 {
        slot_weight(idx, slot, self.slots)
    }

    pub fn total_weight(&self, idx: usize) -> i32 {
        (0..self.slots).map(|k| self.weight(idx, k)).sum()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.slots, rhs.slots);
        Self::new(self.slots, self.mat.mul(&rhs.mat))
    }

    /// Largest entry that moves total weight; zero for weight-zero operators,
    /// i.e. those commuting with Σ_k h̄^{(k)}.
    pub fn weight_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if self.total_weight(r) != self.total_weight(c) {
                    worst = worst.max(self.mat.get(r, c).max_abs());
                }
            }
        }
        worst
    }

    /// Entries outside the six-vertex pattern of a 4×4 R-matrix.
    pub fn six_term_violation(&self) -> f64 {
        assert_eq!(self.slots, 2);
        let allowed = [(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)];
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                if !allowed.contains(&(r, c)) {
                    worst = worst.max(self.mat.get(r, c).max_abs());
                }
            }
        }
        worst
    }
}

/// R(z, λ) of the given variant as a 4×4 weighted operator.
pub fn build_r(
    engine: &ThetaEngine,
    mode: HbarMode,
    variant: RVariant,
    z: Arg,
    lambda: Arg,
) -> Result<WeightedOperator> {
    let th = |a: Arg| mode.theta_at(engine, a);
    let hb = Arg::new(Complex64::new(0.0, 0.0), 1);
    let inv_lam = mode.theta_inv(engine, lambda, "lambda", true)?;
    let (den, sign) = match variant {
        RVariant::Plus | RVariant::Bar => (z.shifted(1), 1.0),
        RVariant::Minus => (z.shifted(-1), -1.0),
    };
    let inv_den = mode.theta_inv(engine, den, "spectral denominator", false)?;
    let ratio = &th(z)? * &inv_den;
    let lam_pm = &(&th(lambda.shifted(1))? * &th(lambda.shifted(-1))?) * &(&inv_lam * &inv_lam);
    let th_h = th(hb)?;
    let off = &(&th_h * &inv_den) * &inv_lam;
    let e12 = (&th(z.plus(lambda))? * &off).scale(Complex64::new(sign, 0.0));
    let e21 = (&th(z.minus(lambda))? * &off).scale(Complex64::new(-sign, 0.0));
    let (d11, d22) = match variant {
        RVariant::Plus => (&ratio * &lam_pm, ratio.clone()),
        RVariant::Minus => (ratio.clone(), &ratio * &lam_pm),
        RVariant::Bar => {
            (&ratio * &(&th(lambda.shifted(-1))? * &inv_lam), &ratio * &(&th(lambda.shifted(1))? * &inv_lam))
        }
    };
    let order = mode.order();
    let mut m = JetMatrix::zeros(4, order);
    m.set(0, 0, HbarJet::one(order));
    m.set(3, 3, HbarJet::one(order));
    m.set(1, 1, d11);
    m.set(2, 2, d22);
    // E_{1,-1} ⊗ E_{-1,1} sends v₋₁⊗v₁ (index 2) to v₁⊗v₋₁ (index 1)
    m.set(1, 2, e12);
    m.set(2, 1, e21);
    Ok(WeightedOperator::new(2, m))
}

/// Embeds a two-slot operator into slots (i, j) of an n-fold product.
///
/// With `shift = Some((k, s))` the operator applied to a basis vector whose
/// slot k has weight μ is `builder(s·μ)`, i.e. the dynamical parameter is
/// moved by s·ħμ sector by sector. Slot k is untouched, so input and output
/// weights of k agree.
pub fn dynamical_apply<F>(
    builder: F,
    slots: usize,
    pair: (usize, usize),
    shift: Option<(usize, i32)>,
) -> Result<WeightedOperator>
where
    F: Fn(i32) -> Result<WeightedOperator>,
{
    let (i, j) = pair;
    if i == j || i >= slots || j >= slots {
        return Err(EqgError::Config(format!("bad slot pair ({i}, {j}) for {slots} slots")));
    }
    if let Some((k, _)) = shift {
        if k == i || k == j || k >= slots {
            return Err(EqgError::Config(format!("shift slot {k} clashes with pair ({i}, {j})")));
        }
    }
    let dim = 1 << slots;
    let mut cache: BTreeMap<i32, WeightedOperator> = BTreeMap::new();
    let mut out: Option<JetMatrix> = None;
    let bit = |s: usize| slots - 1 - s;
    for col in 0..dim {
        let mu = shift.map_or(0, |(k, s)| s * slot_weight(col, k, slots));
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(mu) {
            e.insert(builder(mu)?);
        }
        let r = &cache[&mu];
        let m = out.get_or_insert_with(|| JetMatrix::zeros(dim, r.matrix().order()));
        let a = (col >> bit(i)) & 1;
        let b = (col >> bit(j)) & 1;
        let rest = col & !(1 << bit(i)) & !(1 << bit(j));
        for a2 in 0..2 {
            for b2 in 0..2 {
                let v = r.matrix().get(a2 * 2 + b2, a * 2 + b);
                if v.is_zero() {
                    continue;
                }
                let row = rest | (a2 << bit(i)) | (b2 << bit(j));
                m.add_to(row, col, v);
            }
        }
    }
    Ok(WeightedOperator::new(slots, out.expect("at least one column")))
}

/// (π_z ⊗ π_w) r_λ with π(K) = 0:
/// ½ρ(z-w) h̄⊗h̄ + ω_λ(z,w) E_{1,-1}⊗E_{-1,1} + ω_{-λ}(z,w) E_{-1,1}⊗E_{1,-1}.
pub fn classical_r_image(engine: &ThetaEngine, z: Complex64, w: Complex64, lambda: Complex64) -> Result<JetMatrix> {
    engine.check_off_lattice(lambda, "lambda")?;
    let half_rho = engine.rho(z - w)? * 0.5;
    let mut e = vec![Complex64::new(0.0, 0.0); 16];
    e[0] = half_rho;
    e[5] = -half_rho;
    e[10] = -half_rho;
    e[15] = half_rho;
    e[4 + 2] = green_kernel(engine, lambda, z, w)?;
    e[2 * 4 + 1] = green_kernel(engine, -lambda, z, w)?;
    Ok(JetMatrix::from_complex(4, 0, &e))
}

/// Distance to the lattice below which the φ quadrature path is rejected.
pub const PATH_GUARD: f64 = 0.02;
const QUAD_NODES: usize = 48;

/// Coefficients c_k of C(u) = 1/(1+e^{-u}) from the triangular system
/// Σ_{m≥0} c_{n-2m}/(2m+1)! = 1/(2(n+1)!), the ħ-expansion of
/// φ(λ-ħ)/φ(λ+ħ) = θ(λ)/θ(λ+ħ) with (log φ)' = C(ħ∂)ρ.
pub fn gauge_coefficients(order: usize) -> Vec<f64> {
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let mut c = vec![0.0; order + 1];
    for n in 0..=order {
        let mut acc = 1.0 / (2.0 * fact(n + 1));
        let mut m = 1;
        while 2 * m <= n {
            acc -= c[n - 2 * m] / fact(2 * m + 1);
            m += 1;
        }
        c[n] = acc;
    }
    c
}

/// Formal solution of the φ functional equation around λ.
#[derive(Clone, Debug)]
pub struct GaugeSolution {
    engine: ThetaEngine,
    lambda: Complex64,
    lambda0: Complex64,
    order: usize,
    coeffs: Vec<f64>,
    integral: Complex64,
    rho_lam: Vec<Complex64>,
    rho_lam0: Vec<Complex64>,
    sign: f64,
    offset: Complex64,
}

/// Default quadrature basepoint: the centre of the period cell.
pub fn default_basepoint(engine: &ThetaEngine) -> Complex64 {
    (engine.tau() + 1.0) * 0.5
}

/// Solves for log φ and (log φ)' as jets at λ, basepoint constant zero.
pub fn solve_phi(engine: &ThetaEngine, lambda: Complex64, order: usize) -> Result<GaugeSolution> {
    solve_phi_from(engine, lambda, default_basepoint(engine), order)
}

pub fn solve_phi_from(
    engine: &ThetaEngine,
    lambda: Complex64,
    lambda0: Complex64,
    order: usize,
) -> Result<GaugeSolution> {
    let d = engine.lattice_distance(lambda);
    if d < POLE_GUARD {
        return Err(EqgError::DynamicalPole { what: "lambda".into(), dist: d });
    }
    let probes = 256;
    for s in 0..=probes {
        let p = lambda0 + (lambda - lambda0) * (s as f64 / probes as f64);
        let d = engine.lattice_distance(p);
        if d < PATH_GUARD {
            return Err(EqgError::Path(format!(
                "segment from {lambda0} to {lambda} passes within {d:.3e} of the lattice"
            )));
        }
    }
    let rule = GaussLegendre::new(NonZeroUsize::new(QUAD_NODES).expect("nonzero"));
    let half = (lambda - lambda0) * 0.5;
    let mid = (lambda + lambda0) * 0.5;
    let mut integral = Complex64::new(0.0, 0.0);
    for &(x, wt) in rule.as_node_weight_pairs() {
        integral += engine.rho(mid + half * x)? * wt;
    }
    integral *= half;
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let to_derivs = |t: Vec<Complex64>| t.into_iter().enumerate().map(|(k, c)| c * fact(k)).collect::<Vec<_>>();
    let top = order.max(1);
    Ok(GaugeSolution {
        engine: *engine,
        lambda,
        lambda0,
        order,
        coeffs: gauge_coefficients(order),
        integral,
        rho_lam: to_derivs(engine.rho_taylor(lambda, top)?),
        rho_lam0: to_derivs(engine.rho_taylor(lambda0, top)?),
        sign: 1.0,
        offset: Complex64::new(0.0, 0.0),
    })
}

impl GaugeSolution {
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn basepoint(&self) -> Complex64 {
        self.lambda0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// c_k of (log φ)' = Σ c_k ħ^k ρ^{(k)}.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// The solution for φ^{-1}.
    pub fn inverted(&self) -> Self {
        let mut s = self.clone();
        s.sign = -s.sign;
        s.offset = -s.offset;
        s
    }

    /// The solution for e^c·φ.
    pub fn with_offset(&self, c: Complex64) -> Self {
        let mut s = self.clone();
        s.offset += c;
        s
    }

    /// (log φ)'(λ) as a jet.
    pub fn dlog_phi(&self) -> HbarJet {
        let c = (0..=self.order)
            .map(|k| self.rho_lam.get(k).copied().unwrap_or_default() * self.coeffs[k] * self.sign)
            .collect();
        HbarJet::from_coeffs(c)
    }

    /// log φ(λ + steps·ħ) as a jet.
    pub fn log_phi_at(&self, steps: i32) -> HbarJet {
        let m = self.order;
        let n = steps as f64;
        let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
        // t(j, k): ħ^k coefficient of ∂^j log φ at λ
        let t = |j: usize, k: usize| -> Complex64 {
            let c = self.coeffs[k];
            match (j, k) {
                (0, 0) => self.integral * c,
                (0, _) => (self.rho_lam[k - 1] - self.rho_lam0[k - 1]) * c,
                (_, 0) => self.rho_lam[j - 1] * c,
                _ => self.rho_lam[k - 1 + j] * c,
            }
        };
        let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
        for (p, slot) in out.iter_mut().enumerate() {
            for j in 0..=p {
                *slot += t(j, p - j) * (n.powi(j as i32) / fact(j));
            }
            *slot *= self.sign;
        }
        out[0] += self.offset;
        HbarJet::from_coeffs(out)
    }

    pub fn phi_at(&self, steps: i32) -> HbarJet {
        self.log_phi_at(steps).exp()
    }

    /// Largest coefficient of φ(λ-ħ)/φ(λ+ħ) - θ(λ)/θ(λ+ħ).
    pub fn functional_residual(&self) -> Result<f64> {
        let lhs = (&self.log_phi_at(-1) - &self.log_phi_at(1)).exp();
        let num = self.engine.theta_shifted(self.lambda, 0, self.order)?;
        let den = self.engine.theta_shifted(self.lambda, 1, self.order)?;
        let rhs = num.checked_div(&den)?;
        let rhs = if self.sign < 0.0 { rhs.invert()? } else { rhs };
        Ok(lhs.max_abs_diff(&rhs))
    }
}

/// φ(λ' + ħh^{(2)}) X φ(λ' + ħh^{(1)})^{-1} for a two-slot operator X at
/// λ' = λ + lam_steps·ħ. The left factor reads output weights of slot 1
/// (the second factor), the right one input weights of slot 0.
pub fn gauge_transform(op: &WeightedOperator, sol: &GaugeSolution, lam_steps: i32) -> Result<WeightedOperator> {
    if op.slots() != 2 {
        return Err(EqgError::Config("gauge transform acts on two-slot operators".into()));
    }
    if op.matrix().order() != sol.order() {
        return Err(EqgError::Config("gauge solution order does not match operator".into()));
    }
    let mut phi: BTreeMap<i32, HbarJet> = BTreeMap::new();
    for s in [-1, 1] {
        phi.insert(lam_steps + s, sol.phi_at(lam_steps + s));
    }
    let mut out = JetMatrix::zeros(4, sol.order());
    for r in 0..4 {
        for c in 0..4 {
            let v = op.matrix().get(r, c);
            if v.is_zero() {
                continue;
            }
            let left = &phi[&(lam_steps + slot_weight(r, 1, 2))];
            let right = phi[&(lam_steps + slot_weight(c, 0, 2))].invert()?;
            out.set(r, c, &(left * v) * &right);
        }
    }
    Ok(WeightedOperator::new(2, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::DiffOpSymbol;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn engine() -> ThetaEngine {
        ThetaEngine::new(c(0.3, 1.1)).unwrap()
    }

    #[test]
    fn gauge_coefficients_match_logistic() {
        let c = gauge_coefficients(6);
        let l = DiffOpSymbol::logistic(6);
        for (k, (a, b)) in l.coeffs().iter().zip(&c).enumerate() {
            assert!((a.re - b).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn formal_r_starts_at_identity() {
        let e = engine();
        for v in [RVariant::Plus, RVariant::Minus, RVariant::Bar] {
            let r = build_r(&e, HbarMode::Formal { order: 3 }, v, Arg::at(c(0.31, 0.2)), Arg::at(c(0.2, 0.4))).unwrap();
            let id = JetMatrix::identity(4, 3);
            let r0 = r.matrix().coefficient(0);
            let i0 = id.coefficient(0);
            for k in 0..16 {
                assert!((r0[k] - i0[k]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn lambda_on_lattice_is_dynamical_pole() {
        let e = engine();
        let r = build_r(
            &e,
            HbarMode::Numeric { hbar: c(0.07, 0.03) },
            RVariant::Plus,
            Arg::at(c(0.3, 0.1)),
            Arg::at(e.tau()),
        );
        assert!(matches!(r, Err(EqgError::DynamicalPole { .. })));
    }

    #[test]
    fn bad_slot_pairs_are_rejected() {
        let id = |_| Ok(WeightedOperator::identity(2, 0));
        assert!(dynamical_apply(id, 3, (0, 0), None).is_err());
        assert!(dynamical_apply(id, 3, (0, 1), Some((1, 1))).is_err());
    }

    #[test]
    fn embedding_identity_is_identity() {
        let id = |_| Ok(WeightedOperator::identity(2, 1));
        let m = dynamical_apply(id, 3, (0, 2), Some((1, 1))).unwrap();
        assert_eq!(m, WeightedOperator::identity(3, 1));
    }
}
