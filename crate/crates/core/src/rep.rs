//! The evaluation representation π_ζ on ℂ² at central charge K = 0.
//!
//! Images are 2×2 (or, for tensor products and L-operators, 4×4) matrices
//! of ħ-jets. Operator symbols g(ħ∂) act on theta-function kernels through
//! [`DiffOpSymbol::apply`]; nothing here ever builds a formal delta.
//!
//! Two kernels carry the currents: for x = z - ζ,
//! h⁺(z) = diag(g₊(-u)ρ(x), -g₋(-u)ρ(x)) with g_± = 2/(1+e^{±u}), and for
//! y = ζ - z, h⁻(z) = diag((1-e^{-v})/v ρ(y), -(e^v-1)/v ρ(y)).

use num_complex::Complex64;

use crate::error::{EqgError, Result};
use crate::jet::{DiffOpSymbol, HbarJet, PointGerm};
use crate::linalg::JetMatrix;
use crate::rmatrix::{Arg, HbarMode};
use crate::spaces::{DualBasisPair, RawFamily, DEFAULT_DEPTH, DEFAULT_TRUNC};
use crate::theta::ThetaEngine;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Evaluation point and truncation data for π_ζ. K is fixed to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepConfig {
    pub zeta: Complex64,
    pub jet_order: usize,
    pub trunc_n: usize,
    pub depth: usize,
}

impl RepConfig {
    pub fn new(zeta: Complex64, jet_order: usize) -> Self {
        Self { zeta, jet_order, trunc_n: DEFAULT_TRUNC, depth: DEFAULT_DEPTH }
    }

    pub fn with_zeta(self, zeta: Complex64) -> Self {
        Self { zeta, ..self }
    }

    pub fn with_trunc(self, n: usize) -> Self {
        Self { trunc_n: n, ..self }
    }

    /// η = ħ/2.
    pub fn eta(&self) -> HbarJet {
        HbarJet::hbar(self.jet_order).scale(Complex64::new(0.5, 0.0))
    }

    pub fn k_central(&self) -> i32 {
        0
    }

    fn mode(&self) -> HbarMode {
        HbarMode::Formal { order: self.jet_order }
    }
}

/// A 2×2 jet matrix image. `derivation` marks Id ⊗ ∂_ζ, the image of D.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentImage {
    pub matrix: JetMatrix,
    pub derivation: bool,
}

impl CurrentImage {
    fn plain(matrix: JetMatrix) -> Self {
        Self { matrix, derivation: false }
    }

    pub fn entry(&self, r: usize, c: usize) -> &HbarJet {
        self.matrix.get(r, c)
    }

    /// Largest entry on or below the diagonal (zero for e-type images).
    pub fn upper_violation(&self) -> f64 {
        [(0, 0), (1, 0), (1, 1)].iter().map(|&(r, c)| self.entry(r, c).max_abs()).fold(0.0, f64::max)
    }

    /// Largest entry on or above the diagonal (zero for f-type images).
    pub fn lower_violation(&self) -> f64 {
        [(0, 0), (0, 1), (1, 1)].iter().map(|&(r, c)| self.entry(r, c).max_abs()).fold(0.0, f64::max)
    }

    /// Largest off-diagonal entry (zero for h- and K-type images).
    pub fn diagonal_violation(&self) -> f64 {
        self.entry(0, 1).max_abs().max(self.entry(1, 0).max_abs())
    }
}

fn diag(a: HbarJet, b: HbarJet) -> JetMatrix {
    let mut m = JetMatrix::zeros(2, a.order());
    m.set(0, 0, a);
    m.set(1, 1, b);
    m
}

fn e12(v: HbarJet) -> JetMatrix {
    JetMatrix::unit(2, 0, 1, v)
}

fn e21(v: HbarJet) -> JetMatrix {
    JetMatrix::unit(2, 1, 0, v)
}

/// Generators of the current algebra with their smearing data given as
/// germs at ζ (value and derivatives of r, λ or ε).
#[derive(Clone, Copy, Debug)]
pub enum Generator<'a> {
    K,
    D,
    /// h[r], r ∈ O.
    HO(&'a PointGerm),
    /// h[λ], λ ∈ L₀.
    HL(&'a PointGerm),
    E(&'a PointGerm),
    F(&'a PointGerm),
}

/// π_ζ of a generator.
pub fn rep_generator_image(engine: &ThetaEngine, gen: Generator<'_>, cfg: &RepConfig) -> Result<CurrentImage> {
    let m = cfg.jet_order;
    let img = match gen {
        Generator::K => CurrentImage::plain(JetMatrix::zeros(2, m)),
        Generator::D => CurrentImage { matrix: JetMatrix::identity(2, m), derivation: true },
        Generator::HO(r) => {
            let top = DiffOpSymbol::two_over_one_plus_exp(1.0, m).apply(r)?;
            let bot = DiffOpSymbol::two_over_one_plus_exp(-1.0, m).apply(r)?;
            CurrentImage::plain(diag(top, -bot))
        }
        Generator::HL(l) => {
            let top = DiffOpSymbol::one_minus_exp_neg_over_u(m).apply(l)?;
            let bot = DiffOpSymbol::exp_minus_one_over_u(m).apply(l)?;
            CurrentImage::plain(diag(top, -bot))
        }
        Generator::E(eps) => {
            let v = first_value(eps)?;
            CurrentImage::plain(e12(engine.theta_hbar_over_hbar(m)?.scale(v)))
        }
        Generator::F(eps) => {
            let v = first_value(eps)?;
            CurrentImage::plain(e21(HbarJet::constant(v, m)))
        }
    };
    Ok(img)
}

fn first_value(g: &PointGerm) -> Result<Complex64> {
    g.values.first().copied().ok_or_else(|| EqgError::Config("empty germ".into()))
}

/// Current fields whose images are diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    HPlus,
    HMinus,
    KPlus,
    KMinus,
    SmallKPlus,
    SmallKMinus,
}

impl Field {
    fn is_plus(self) -> bool {
        matches!(self, Field::HPlus | Field::KPlus | Field::SmallKPlus)
    }
}

/// Symbols (top, bottom) acting on ρ in the kernel variable, and whether the
/// result is exponentiated after multiplying by ħ. A point z + sħ composes
/// with e^{su} in z, which is e^{-su} in y = ζ - z.
fn field_symbols(field: Field, steps: i32, m: usize) -> (DiffOpSymbol, DiffOpSymbol, bool) {
    let s = steps as f64;
    match field {
        Field::HPlus | Field::KPlus | Field::SmallKPlus => {
            let top = DiffOpSymbol::two_over_one_plus_exp(1.0, m).reflect();
            let bot = DiffOpSymbol::two_over_one_plus_exp(-1.0, m).reflect().scale(-ONE);
            let pre = match field {
                Field::HPlus => DiffOpSymbol::identity(m),
                Field::KPlus => DiffOpSymbol::sinh_over_u(m),
                _ => DiffOpSymbol::exp_minus_one_over_u(m).scale(Complex64::new(0.5, 0.0)),
            }
            .compose(&DiffOpSymbol::shift(s, m));
            (pre.compose(&top), pre.compose(&bot), field != Field::HPlus)
        }
        Field::HMinus | Field::KMinus | Field::SmallKMinus => {
            let top = DiffOpSymbol::one_minus_exp_neg_over_u(m);
            let bot = DiffOpSymbol::exp_minus_one_over_u(m).scale(-ONE);
            let pre = match field {
                Field::SmallKMinus => DiffOpSymbol::logistic(m).reflect(),
                _ => DiffOpSymbol::identity(m),
            }
            .compose(&DiffOpSymbol::shift(-s, m));
            (pre.compose(&top), pre.compose(&bot), field != Field::HMinus)
        }
    }
}

/// Image of a current field at z + steps·ħ; closed-form ρ kernel.
pub fn current_field_image(engine: &ThetaEngine, field: Field, z: Arg, cfg: &RepConfig) -> Result<CurrentImage> {
    let m = cfg.jet_order;
    let x = if field.is_plus() { z.base - cfg.zeta } else { cfg.zeta - z.base };
    engine.check_off_lattice(x, "current argument at the evaluation point")?;
    let germ = engine.rho_germ(x, m)?;
    let (top, bot, exponentiate) = field_symbols(field, z.steps, m);
    let mut a = top.apply(&germ)?;
    let mut b = bot.apply(&germ)?;
    if exponentiate {
        a = a.shift_up().exp();
        b = b.shift_up().exp();
    }
    Ok(CurrentImage::plain(diag(a, b)))
}

/// h^± images from the defining truncated sums over the L₀ dual basis.
///
/// h⁺(z) = Σ_i π(h[eⁱ]) ẽ_{i;0}(z) needs |ζ| below the lattice distance of z;
/// h⁻(z) = Σ_i π(h[ẽ_{i;0}]) eⁱ(z) needs |z| below that of ζ.
pub fn current_field_truncated(
    engine: &ThetaEngine,
    field: Field,
    z: Complex64,
    cfg: &RepConfig,
    pair: &DualBasisPair,
) -> Result<CurrentImage> {
    let m = cfg.jet_order;
    let n = cfg.trunc_n.min(pair.len());
    if pair.family() != (RawFamily::Lattice { n: 0, m: 0 }) {
        return Err(EqgError::Config("h-currents expand over the L₀ dual basis".into()));
    }
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    match field {
        Field::HPlus => {
            if cfg.zeta.norm() >= engine.lattice_distance(z) {
                return Err(EqgError::Domain("h⁺ sum needs |ζ| < dist(z, Γ)".into()));
            }
            let dual = pair.dual_derivatives(z, n, 0)?;
            let gp = DiffOpSymbol::two_over_one_plus_exp(1.0, m);
            let gm = DiffOpSymbol::two_over_one_plus_exp(-1.0, m);
            let mut top = vec![ZERO; m + 1];
            let mut bot = vec![ZERO; m + 1];
            for (i, row) in dual.iter().enumerate() {
                for k in 0..=m.min(i) {
                    // ∂^k (ζ^i/i!) = ζ^{i-k}/(i-k)!
                    let d = cfg.zeta.powi((i - k) as i32) / fact(i - k) * row[0];
                    top[k] += gp.coeffs()[k] * d;
                    bot[k] -= gm.coeffs()[k] * d;
                }
            }
            Ok(CurrentImage::plain(diag(HbarJet::from_coeffs(top), HbarJet::from_coeffs(bot))))
        }
        Field::HMinus => {
            if z.norm() >= engine.lattice_distance(cfg.zeta) {
                return Err(EqgError::Domain("h⁻ sum needs |z| < dist(ζ, Γ)".into()));
            }
            let dual = pair.dual_derivatives(cfg.zeta, n, m)?;
            let sp = DiffOpSymbol::one_minus_exp_neg_over_u(m);
            let sm = DiffOpSymbol::exp_minus_one_over_u(m);
            let mut top = vec![ZERO; m + 1];
            let mut bot = vec![ZERO; m + 1];
            let mut zi = ONE;
            for (i, row) in dual.iter().enumerate() {
                if i > 0 {
                    zi = zi * z / i as f64;
                }
                for k in 0..=m {
                    top[k] += sp.coeffs()[k] * row[k] * zi;
                    bot[k] -= sm.coeffs()[k] * row[k] * zi;
                }
            }
            Ok(CurrentImage::plain(diag(HbarJet::from_coeffs(top), HbarJet::from_coeffs(bot))))
        }
        _ => Err(EqgError::Config("only h⁺ and h⁻ have truncated-sum images".into())),
    }
}

/// ω_μ(z, w) = θ(z - w + μ)/(θ(z - w)θ(μ)) as a jet, μ possibly ħ-shifted.
pub fn omega_jet(engine: &ThetaEngine, order: usize, mu: Arg, z: Complex64, w: Complex64) -> Result<HbarJet> {
    let mode = HbarMode::Formal { order };
    let num = mode.theta_at(engine, Arg::new(z - w + mu.base, mu.steps))?;
    let d1 = mode.theta_inv(engine, Arg::at(z - w), "z - w", false)?;
    let d2 = mode.theta_inv(engine, mu, "half-current subscript", true)?;
    Ok(&(&num * &d1) * &d2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfKind {
    E,
    F,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Closed form of x^±_μ(z) in π_ζ, continued past the convergence region.
///
/// The minus half-current expands Σ ẽ_{i;-μ}(ζ)eⁱ(z) = ω_{-μ}(ζ, z), which is
/// -ω_μ(z, ζ); hence the sign.
pub fn half_current_continued(
    engine: &ThetaEngine,
    x: HalfKind,
    sign: Sign,
    mu: Arg,
    z: Complex64,
    cfg: &RepConfig,
) -> Result<CurrentImage> {
    let m = cfg.jet_order;
    let w = omega_jet(engine, m, mu, z, cfg.zeta)?.scale(Complex64::new(sign.value(), 0.0));
    Ok(CurrentImage::plain(match x {
        HalfKind::E => e12(&engine.theta_hbar_over_hbar(m)? * &w),
        HalfKind::F => e21(w),
    }))
}

/// x^±_μ(z) in π_ζ, refusing points outside the expansion domain.
pub fn half_current_image(
    engine: &ThetaEngine,
    x: HalfKind,
    sign: Sign,
    mu: Arg,
    z: Complex64,
    cfg: &RepConfig,
) -> Result<CurrentImage> {
    let ok = match sign {
        Sign::Plus => cfg.zeta.norm() < engine.lattice_distance(z),
        Sign::Minus => z.norm() < engine.lattice_distance(cfg.zeta),
    };
    if !ok {
        return Err(EqgError::Domain(format!(
            "half-current {:?}{:?} at z = {z} outside its expansion domain around ζ = {}",
            x, sign, cfg.zeta
        )));
    }
    half_current_continued(engine, x, sign, mu, z, cfg)
}

/// Half-current from its defining truncated sum; numeric subscript only.
pub fn half_current_truncated(
    engine: &ThetaEngine,
    x: HalfKind,
    sign: Sign,
    mu: Complex64,
    z: Complex64,
    cfg: &RepConfig,
) -> Result<CurrentImage> {
    let n = cfg.trunc_n;
    let kernel = match sign {
        Sign::Plus => {
            let pair = DualBasisPair::for_lambda(engine, mu, n, cfg.depth)?;
            pair.kernel_sum(z, cfg.zeta, n)?
        }
        Sign::Minus => {
            let pair = DualBasisPair::for_lambda(engine, -mu, n, cfg.depth)?;
            pair.kernel_sum(cfg.zeta, z, n)?
        }
    };
    let m = cfg.jet_order;
    Ok(CurrentImage::plain(match x {
        HalfKind::E => e12(engine.theta_hbar_over_hbar(m)?.scale(kernel)),
        HalfKind::F => e21(HbarJet::constant(kernel, m)),
    }))
}

fn kron2(aux: &JetMatrix, quantum: &JetMatrix) -> JetMatrix {
    aux.kron(quantum)
}

fn aux_unit(r: usize, c: usize, order: usize) -> JetMatrix {
    JetMatrix::unit(2, r, c, HbarJet::one(order))
}

fn invert_diag(m: &JetMatrix) -> Result<JetMatrix> {
    Ok(diag(m.get(0, 0).invert()?, m.get(1, 1).invert()?))
}

/// L^±_λ(ζ) in π_w, as an operator on auxiliary ⊗ quantum.
#[derive(Clone, Debug)]
pub struct LOperatorImage {
    pub matrix: JetMatrix,
    /// The three triangular factors, in product order.
    pub factors: [JetMatrix; 3],
    pub lambda: Arg,
    pub zeta_spectral: Complex64,
    pub w_eval: Complex64,
}

/// f-type quantum matrix whose subscript is λ + ħ(h - 1), h read on the
/// input (column) weight.
fn f_sector_matrix(
    engine: &ThetaEngine,
    sign: Sign,
    lambda: Arg,
    zeta: Complex64,
    cfg: &RepConfig,
) -> Result<JetMatrix> {
    let m = cfg.jet_order;
    let mut q = JetMatrix::zeros(2, m);
    for col in 0..2 {
        let weight = if col == 0 { 1 } else { -1 };
        let img = half_current_image(engine, HalfKind::F, sign, lambda.shifted(weight - 1), zeta, cfg)?;
        for row in 0..2 {
            let v = img.entry(row, col);
            if !v.is_zero() {
                q.set(row, col, v.clone());
            }
        }
    }
    Ok(q)
}

/// Builds L^±_λ(ζ) as the product of its three triangular factors, with the
/// quantum space the evaluation representation at `cfg.zeta`.
pub fn build_l_image(
    engine: &ThetaEngine,
    sign: Sign,
    lambda: Arg,
    zeta: Complex64,
    cfg: &RepConfig,
) -> Result<LOperatorImage> {
    let m = cfg.jet_order;
    let id4 = JetMatrix::identity(4, m);
    let th_h = cfg.mode().theta_at(engine, Arg::new(ZERO, 1))?;
    let hbar = HbarJet::hbar(m);
    let (small_k, upper_sign) = match sign {
        Sign::Plus => (Field::SmallKPlus, Sign::Plus),
        Sign::Minus => (Field::SmallKMinus, Sign::Minus),
    };
    let k_shift = current_field_image(engine, small_k, Arg::new(zeta, -1), cfg)?.matrix;
    let k_here = invert_diag(&current_field_image(engine, small_k, Arg::at(zeta), cfg)?.matrix)?;
    let middle = kron2(&aux_unit(0, 0, m), &k_shift).add(&kron2(&aux_unit(1, 1, m), &k_here));
    let f_part = f_sector_matrix(engine, upper_sign, lambda, zeta, cfg)?.scale_jet(&th_h);
    let e_img = half_current_image(engine, HalfKind::E, upper_sign, -lambda, zeta, cfg)?;
    let e_part = e_img.matrix.scale_jet(&hbar);
    let upper = id4.add(&kron2(&aux_unit(0, 1, m), &f_part));
    let lower = id4.add(&kron2(&aux_unit(1, 0, m), &e_part));
    let factors = match sign {
        Sign::Plus => [upper, middle, lower],
        Sign::Minus => [lower, middle, upper],
    };
    let matrix = factors[0].mul(&factors[1]).mul(&factors[2]);
    Ok(LOperatorImage { matrix, factors, lambda, zeta_spectral: zeta, w_eval: cfg.zeta })
}

/// A(ζ, ζ') = exp of ħ tanh(u/2)/u applied in ζ to the L₀ kernel ρ(ζ' - ζ).
pub fn a_factor(engine: &ThetaEngine, zeta: Complex64, zeta_prime: Complex64, cfg: &RepConfig) -> Result<HbarJet> {
    if zeta.norm() >= engine.lattice_distance(zeta_prime) {
        return Err(EqgError::Domain("A(ζ, ζ') needs |ζ| < dist(ζ', Γ)".into()));
    }
    a_factor_continued(engine, zeta, zeta_prime, cfg)
}

/// Closed form of A without the domain check.
pub fn a_factor_continued(
    engine: &ThetaEngine,
    zeta: Complex64,
    zeta_prime: Complex64,
    cfg: &RepConfig,
) -> Result<HbarJet> {
    let m = cfg.jet_order;
    let germ = engine.rho_germ(zeta_prime - zeta, m)?;
    // ∂_ζ = -∂_x for x = ζ' - ζ
    let sym = DiffOpSymbol::tanh_half_over_u(m).reflect();
    Ok(sym.apply(&germ)?.shift_up().exp())
}

/// A(ζ, ζ') from the truncated double sum Σ_i (ħ tanh(u/2)/u eⁱ)(ζ) ẽ_{i;0}(ζ').
pub fn a_factor_truncated(
    engine: &ThetaEngine,
    zeta: Complex64,
    zeta_prime: Complex64,
    cfg: &RepConfig,
    pair: &DualBasisPair,
) -> Result<HbarJet> {
    if zeta.norm() >= engine.lattice_distance(zeta_prime) {
        return Err(EqgError::Domain("A(ζ, ζ') needs |ζ| < dist(ζ', Γ)".into()));
    }
    let m = cfg.jet_order;
    let n = cfg.trunc_n.min(pair.len());
    let t = DiffOpSymbol::tanh_half_over_u(m);
    let dual = pair.dual_derivatives(zeta_prime, n, 0)?;
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    let mut c = vec![ZERO; m + 1];
    for (i, row) in dual.iter().enumerate() {
        for (k, ck) in c.iter_mut().enumerate().take(m.min(i) + 1) {
            *ck += t.coeffs()[k] * zeta.powi((i - k) as i32) / fact(i - k) * row[0];
        }
    }
    Ok(HbarJet::from_coeffs(c).shift_up().exp())
}

/// Two-point representation (π_{ζ1} ⊗ π_{ζ2}) ∘ Δ at K = 0.
#[derive(Clone, Copy, Debug)]
pub struct TensorRep {
    pub zeta1: Complex64,
    pub zeta2: Complex64,
    pub jet_order: usize,
}

impl TensorRep {
    pub fn new(engine: &ThetaEngine, zeta1: Complex64, zeta2: Complex64, jet_order: usize) -> Result<Self> {
        if zeta2.norm() >= zeta1.norm() {
            return Err(EqgError::Domain("tensor representation needs |ζ2| < |ζ1|".into()));
        }
        engine.check_off_lattice(zeta1 - zeta2, "ζ1 - ζ2")?;
        Ok(Self { zeta1, zeta2, jet_order })
    }

    fn cfg(&self, zeta: Complex64) -> RepConfig {
        RepConfig::new(zeta, self.jet_order)
    }

    /// K⁺ of the second factor evaluated at ζ1.
    fn k_plus_2_at_1(&self, engine: &ThetaEngine) -> Result<JetMatrix> {
        Ok(current_field_image(engine, Field::KPlus, Arg::at(self.zeta1), &self.cfg(self.zeta2))?.matrix)
    }

    /// K⁻ of the first factor at ζ2, inverted.
    fn k_minus_1_at_2_inv(&self, engine: &ThetaEngine) -> Result<JetMatrix> {
        invert_diag(&current_field_image(engine, Field::KMinus, Arg::at(self.zeta2), &self.cfg(self.zeta1))?.matrix)
    }

    /// Δ(K^±(z)).
    pub fn k_image(&self, engine: &ThetaEngine, field: Field, z: Arg) -> Result<JetMatrix> {
        if !matches!(field, Field::KPlus | Field::KMinus) {
            return Err(EqgError::Config("coproduct image only for K^±".into()));
        }
        let a = current_field_image(engine, field, z, &self.cfg(self.zeta1))?.matrix;
        let b = current_field_image(engine, field, z, &self.cfg(self.zeta2))?.matrix;
        Ok(a.kron(&b))
    }

    /// Δ(e[ε]) given ε(ζ1), ε(ζ2).
    pub fn e_smeared(&self, engine: &ThetaEngine, eps1: Complex64, eps2: Complex64) -> Result<JetMatrix> {
        let m = self.jet_order;
        let pre = engine.theta_hbar_over_hbar(m)?;
        let a = e12(pre.scale(eps1)).kron(&self.k_plus_2_at_1(engine)?);
        let b = JetMatrix::identity(2, m).kron(&e12(pre.scale(eps2)));
        Ok(a.add(&b))
    }

    /// Δ(f[ε]) given ε(ζ1), ε(ζ2).
    pub fn f_smeared(&self, engine: &ThetaEngine, eps1: Complex64, eps2: Complex64) -> Result<JetMatrix> {
        let m = self.jet_order;
        let a = e21(HbarJet::constant(eps1, m)).kron(&JetMatrix::identity(2, m));
        let b = self.k_minus_1_at_2_inv(engine)?.kron(&e21(HbarJet::constant(eps2, m)));
        Ok(a.add(&b))
    }

    /// Half-current x^±_μ(z) of the tensor representation (closed forms).
    pub fn half_current(
        &self,
        engine: &ThetaEngine,
        x: HalfKind,
        sign: Sign,
        mu: Arg,
        z: Complex64,
    ) -> Result<JetMatrix> {
        let m = self.jet_order;
        let s = Complex64::new(sign.value(), 0.0);
        let w1 = omega_jet(engine, m, mu, z, self.zeta1)?.scale(s);
        let w2 = omega_jet(engine, m, mu, z, self.zeta2)?.scale(s);
        let id = JetMatrix::identity(2, m);
        Ok(match x {
            HalfKind::E => {
                let pre = engine.theta_hbar_over_hbar(m)?;
                let a = e12(&pre * &w1).kron(&self.k_plus_2_at_1(engine)?);
                let b = id.kron(&e12(&pre * &w2));
                a.add(&b)
            }
            HalfKind::F => {
                let a = e21(w1).kron(&id);
                let b = self.k_minus_1_at_2_inv(engine)?.kron(&e21(w2));
                a.add(&b)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn engine() -> ThetaEngine {
        ThetaEngine::new(c(0.3, 1.1)).unwrap()
    }

    #[test]
    fn k_maps_to_zero() {
        let e = engine();
        let cfg = RepConfig::new(c(0.1, 0.05), 3);
        let img = rep_generator_image(&e, Generator::K, &cfg).unwrap();
        assert_eq!(img.matrix.max_abs(), 0.0);
    }

    #[test]
    fn h_of_one_is_hbar_diag() {
        let e = engine();
        let cfg = RepConfig::new(c(0.1, 0.05), 3);
        let one = PointGerm::constant(cfg.zeta, c(1.0, 0.0), 3);
        let img = rep_generator_image(&e, Generator::HO(&one), &cfg).unwrap();
        assert_eq!(img.entry(0, 0), &HbarJet::one(3));
        assert_eq!(img.entry(1, 1), &-HbarJet::one(3));
    }

    #[test]
    fn e_image_prefactor_starts_one_plus_hbar_squared() {
        let e = engine();
        let cfg = RepConfig::new(c(0.1, 0.05), 3);
        let eps = PointGerm::constant(cfg.zeta, c(2.0, 0.0), 3);
        let img = rep_generator_image(&e, Generator::E(&eps), &cfg).unwrap();
        let v = img.entry(0, 1);
        assert!((v.coeff(0) - 2.0).norm() < 1e-13);
        assert!(v.coeff(1).norm() < 1e-13);
        assert_eq!(img.upper_violation(), 0.0);
    }

    #[test]
    fn k_plus_starts_at_identity() {
        let e = engine();
        let cfg = RepConfig::new(c(0.1, 0.05), 3);
        let k = current_field_image(&e, Field::KPlus, Arg::at(c(0.5, 0.3)), &cfg).unwrap();
        assert!((k.entry(0, 0).coeff(0) - 1.0).norm() < 1e-14);
        assert!((k.entry(1, 1).coeff(0) - 1.0).norm() < 1e-14);
    }

    #[test]
    fn half_current_domain_is_enforced() {
        let e = engine();
        let cfg = RepConfig::new(c(0.3, 0.0), 3);
        let r = half_current_image(&e, HalfKind::E, Sign::Plus, Arg::at(c(0.2, 0.3)), c(0.1, 0.0), &cfg);
        assert!(matches!(r, Err(EqgError::Domain(_))));
    }

    #[test]
    fn l_operator_triangular_factors() {
        let e = engine();
        let cfg = RepConfig::new(c(0.1, 0.05), 3);
        let l = build_l_image(&e, Sign::Plus, Arg::at(c(0.25, 0.35)), c(0.45, 0.2), &cfg).unwrap();
        // lower-left auxiliary block of the first factor vanishes
        for r in 2..4 {
            for col in 0..2 {
                assert!(l.factors[0].get(r, col).is_zero());
            }
        }
        let id = JetMatrix::identity(4, 3);
        let c0 = l.matrix.coefficient(0);
        let i0 = id.coefficient(0);
        for k in 0..16 {
            assert!((c0[k] - i0[k]).norm() < 1e-13);
        }
    }

    fn l_vs_r(sign: Sign, zeta: Complex64, w: Complex64) -> f64 {
        use crate::rmatrix::{build_r, RVariant};
        let e = engine();
        let cfg = RepConfig::new(w, 3);
        let lam = Arg::at(c(0.25, 0.35));
        let l = build_l_image(&e, sign, lam, zeta, &cfg).unwrap();
        let (variant, a) = match sign {
            Sign::Plus => (RVariant::Plus, a_factor(&e, w, zeta, &cfg).unwrap()),
            Sign::Minus => (RVariant::Minus, a_factor(&e, zeta, w, &cfg).unwrap()),
        };
        let r = build_r(&e, HbarMode::Formal { order: 3 }, variant, Arg::at(zeta - w), lam).unwrap();
        l.matrix.max_abs_diff(&r.matrix().scale_jet(&a))
    }

    #[test]
    fn l_plus_is_scaled_r_plus() {
        let d = l_vs_r(Sign::Plus, c(0.45, 0.2), c(0.1, 0.05));
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn l_minus_is_scaled_r_minus() {
        let d = l_vs_r(Sign::Minus, c(0.1, 0.05), c(0.45, 0.2));
        assert!(d < 1e-10, "{d}");
    }
}
