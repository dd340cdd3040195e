//! Truncated power series in ħ, point germs and operator symbols g(ħ∂).

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{EqgError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// Plain series helpers shared by jets and symbols. All of them truncate to
// the length of the output buffer.

pub(crate) fn series_mul(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Series quotient a/b; b[0] must be nonzero.
pub(crate) fn series_div(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let inv0 = b[0].inv();
    let mut out = vec![ZERO; len];
    for n in 0..len {
        let mut acc = a.get(n).copied().unwrap_or(ZERO);
        for k in 1..=n.min(b.len().saturating_sub(1)) {
            acc -= b[k] * out[n - k];
        }
        out[n] = acc * inv0;
    }
    out
}

pub(crate) fn series_exp(a: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    if len == 0 {
        return out;
    }
    out[0] = a.first().copied().unwrap_or(ZERO).exp();
    for n in 1..len {
        let mut acc = ZERO;
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            acc += a[k] * out[n - k] * k as f64;
        }
        out[n] = acc / n as f64;
    }
    out
}

/// A truncated power series c₀ + c₁ħ + … + c_Mħ^M.
///
/// The std operators panic when orders differ; use the `checked_*` methods
/// where mismatched orders are a recoverable condition.
#[derive(Clone, Debug, PartialEq)]
pub struct HbarJet {
    coeffs: Vec<Complex64>,
}

impl HbarJet {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// The formal variable itself (zero at order 0).
    pub fn hbar(order: usize) -> Self {
        let mut j = Self::zero(order);
        if order >= 1 {
            j.coeffs[1] = ONE;
        }
        j
    }

    /// Builds a jet from coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(EqgError::Config(format!("jet order mismatch: {} vs {}", self.order(), other.order())));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    /// Cauchy product truncated at the common order.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(Self { coeffs: series_mul(&self.coeffs, &other.coeffs, self.coeffs.len()) })
    }

    pub fn exp(&self) -> Self {
        Self { coeffs: series_exp(&self.coeffs, self.coeffs.len()) }
    }

    pub fn invert(&self) -> Result<Self> {
        if self.coeffs[0] == ZERO {
            return Err(EqgError::SingularJet);
        }
        let one = Self::one(self.order());
        Ok(Self { coeffs: series_div(&one.coeffs, &self.coeffs, self.coeffs.len()) })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        if other.coeffs[0] == ZERO {
            return Err(EqgError::SingularJet);
        }
        Ok(Self { coeffs: series_div(&self.coeffs, &other.coeffs, self.coeffs.len()) })
    }

    /// Multiplication by ħ; the top coefficient falls off.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = vec![ZERO; self.coeffs.len()];
        coeffs[1..].copy_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.order(), other.order(), "jet order mismatch");
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Value of the polynomial at a numeric ħ.
    pub fn eval(&self, hbar: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * hbar + c)
    }

    /// Same series at a different truncation order (zero-padded upward).
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }
}

impl Add for &HbarJet {
    type Output = HbarJet;
    fn add(self, rhs: &HbarJet) -> HbarJet {
        self.checked_add(rhs).expect("jet order mismatch")
    }
}

impl Add for HbarJet {
    type Output = HbarJet;
    fn add(self, rhs: HbarJet) -> HbarJet {
        &self + &rhs
    }
}

impl Sub for &HbarJet {
    type Output = HbarJet;
    fn sub(self, rhs: &HbarJet) -> HbarJet {
        self.checked_add(&-rhs).expect("jet order mismatch")
    }
}

impl Sub for HbarJet {
    type Output = HbarJet;
    fn sub(self, rhs: HbarJet) -> HbarJet {
        &self - &rhs
    }
}

impl Mul for &HbarJet {
    type Output = HbarJet;
    fn mul(self, rhs: &HbarJet) -> HbarJet {
        self.checked_mul(rhs).expect("jet order mismatch")
    }
}

impl Mul for HbarJet {
    type Output = HbarJet;
    fn mul(self, rhs: HbarJet) -> HbarJet {
        &self * &rhs
    }
}

impl Neg for &HbarJet {
    type Output = HbarJet;
    fn neg(self) -> HbarJet {
        self.scale(-ONE)
    }
}

impl Neg for HbarJet {
    type Output = HbarJet;
    fn neg(self) -> HbarJet {
        -&self
    }
}

/// Value and derivatives d₀…d_m of a function at `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointGerm {
    pub base: Complex64,
    pub values: Vec<Complex64>,
}

impl PointGerm {
    pub fn new(base: Complex64, values: Vec<Complex64>) -> Self {
        Self { base, values }
    }

    /// From Taylor coefficients t_k = f^{(k)}/k!.
    pub fn from_taylor(base: Complex64, taylor: &[Complex64]) -> Self {
        let mut fact = 1.0;
        let values = taylor
            .iter()
            .enumerate()
            .map(|(k, t)| {
                if k > 0 {
                    fact *= k as f64;
                }
                t * fact
            })
            .collect();
        Self { base, values }
    }

    pub fn constant(base: Complex64, c: Complex64, m: usize) -> Self {
        let mut values = vec![ZERO; m + 1];
        values[0] = c;
        Self { base, values }
    }

    /// Number of derivatives carried.
    pub fn depth(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { base: self.base, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.values.len().min(other.values.len());
        Self { base: self.base, values: (0..n).map(|k| self.values[k] + other.values[k]).collect() }
    }
}

/// An operator g(ħ∂) stored by the Taylor coefficients g₀…g_M of g at 0.
///
/// Composition of operators is the product of symbols, so everything here
/// is coefficient convolution.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOpSymbol {
    coeffs: Vec<Complex64>,
}

fn exp_series(s: f64, len: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let mut t = 1.0;
    for k in 0..len {
        if k > 0 {
            t *= s / k as f64;
        }
        out.push(Complex64::new(t, 0.0));
    }
    out
}

/// Coefficients of (e^{su} - 1)/u.
fn expm1_over_u(s: f64, len: usize) -> Vec<Complex64> {
    exp_series(s, len + 1)[1..].to_vec()
}

impl DiffOpSymbol {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a symbol needs at least one coefficient");
        Self { coeffs }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_coeffs(HbarJet::one(order).coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// e^{au}: translation by aħ.
    pub fn shift(a: f64, order: usize) -> Self {
        Self::from_coeffs(exp_series(a, order + 1))
    }

    /// 2/(1+e^{su}) for s = ±1.
    pub fn two_over_one_plus_exp(s: f64, order: usize) -> Self {
        let len = order + 1;
        let mut den = exp_series(s, len);
        den[0] += ONE;
        let two = vec![Complex64::new(2.0, 0.0)];
        Self::from_coeffs(series_div(&two, &den, len))
    }

    /// 1/(1+e^{-u}).
    pub fn logistic(order: usize) -> Self {
        let len = order + 1;
        let mut den = exp_series(-1.0, len);
        den[0] += ONE;
        Self::from_coeffs(series_div(&[ONE], &den, len))
    }

    /// (1 - e^{-u})/u.
    pub fn one_minus_exp_neg_over_u(order: usize) -> Self {
        let c = expm1_over_u(-1.0, order + 1);
        Self::from_coeffs(c.into_iter().map(|x| -x).collect())
    }

    /// (e^u - 1)/u.
    pub fn exp_minus_one_over_u(order: usize) -> Self {
        Self::from_coeffs(expm1_over_u(1.0, order + 1))
    }

    /// sinh(u)/u = (e^u - e^{-u})/(2u).
    pub fn sinh_over_u(order: usize) -> Self {
        let a = expm1_over_u(1.0, order + 1);
        let b = expm1_over_u(-1.0, order + 1);
        Self::from_coeffs(a.iter().zip(&b).map(|(x, y)| (x - y) * 0.5).collect())
    }

    /// tanh(u/2)/u = (e^u - 1)/(u(e^u + 1)).
    pub fn tanh_half_over_u(order: usize) -> Self {
        let len = order + 1;
        let num = expm1_over_u(1.0, len);
        let mut den = exp_series(1.0, len);
        den[0] += ONE;
        Self::from_coeffs(series_div(&num, &den, len))
    }

    /// Symbol of the composed operator (self ∘ other).
    pub fn compose(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        Self::from_coeffs(series_mul(&self.coeffs, &other.coeffs, len))
    }

    /// g(-u), the symbol seen after the change of variable x = c - ζ.
    pub fn reflect(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { *c }).collect())
    }

    /// 1/g as a symbol.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0] == ZERO {
            return Err(EqgError::SingularJet);
        }
        Ok(Self::from_coeffs(series_div(&[ONE], &self.coeffs, self.coeffs.len())))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        Self::from_coeffs((0..len).map(|k| self.coeffs[k] + other.coeffs[k]).collect())
    }

    /// (g(ħ∂)f)(base) = Σ_k g_k f^{(k)}(base) ħ^k.
    pub fn apply(&self, germ: &PointGerm) -> Result<HbarJet> {
        diffop_apply(self, germ)
    }
}

/// Truncated Cauchy product, failing on order mismatch.
pub fn jet_multiply(a: &HbarJet, b: &HbarJet) -> Result<HbarJet> {
    a.checked_mul(b)
}

pub fn jet_exponential(a: &HbarJet) -> HbarJet {
    a.exp()
}

pub fn jet_invert(a: &HbarJet) -> Result<HbarJet> {
    a.invert()
}

/// Evaluates g(ħ∂)f at the germ's base point as a jet of the symbol's order.
pub fn diffop_apply(op: &DiffOpSymbol, germ: &PointGerm) -> Result<HbarJet> {
    let m = op.order();
    if germ.depth() < m {
        return Err(EqgError::Config(format!("germ carries {} derivatives, symbol needs {}", germ.depth(), m)));
    }
    Ok(HbarJet::from_coeffs((0..=m).map(|k| op.coeffs[k] * germ.values[k]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hbar_squared_truncates() {
        let h = HbarJet::hbar(1);
        assert!((&h * &h).is_zero());
    }

    #[test]
    fn exp_of_hbar_is_taylor() {
        let e = HbarJet::hbar(3).exp();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (k, w) in want.iter().enumerate() {
            assert!((e.coeff(k) - c(*w)).norm() < 1e-15);
        }
    }

    #[test]
    fn geometric_inverse() {
        let a = HbarJet::from_coeffs(vec![c(1.0), c(1.0), c(0.0), c(0.0), c(0.0)]);
        let inv = a.invert().unwrap();
        for k in 0..5 {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((inv.coeff(k) - c(s)).norm() < 1e-15);
        }
    }

    #[test]
    fn invert_zero_is_singular() {
        assert_eq!(HbarJet::hbar(2).invert(), Err(EqgError::SingularJet));
    }

    #[test]
    fn order_mismatch_is_config_error() {
        let r = HbarJet::one(2).checked_mul(&HbarJet::one(3));
        assert!(matches!(r, Err(EqgError::Config(_))));
    }

    #[test]
    fn shift_symbol_on_linear_germ() {
        // f(z) = z at z = 1, translated by ħ
        let germ = PointGerm::new(c(1.0), vec![c(1.0), c(1.0), c(0.0), c(0.0)]);
        let j = DiffOpSymbol::shift(1.0, 3).apply(&germ).unwrap();
        assert_eq!(j.coeffs(), &[c(1.0), c(1.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn fermi_symbol_on_constant() {
        let germ = PointGerm::constant(c(0.3), c(1.0), 4);
        let j = DiffOpSymbol::two_over_one_plus_exp(1.0, 4).apply(&germ).unwrap();
        assert_eq!(j, HbarJet::one(4));
    }

    #[test]
    fn known_symbol_coefficients() {
        let l = DiffOpSymbol::logistic(3);
        let want = [0.5, 0.25, 0.0, -1.0 / 48.0];
        for (k, w) in want.iter().enumerate() {
            assert!((l.coeffs()[k] - c(*w)).norm() < 1e-15, "logistic {k}");
        }
        let t = DiffOpSymbol::tanh_half_over_u(4);
        let want = [0.5, 0.0, -1.0 / 24.0, 0.0, 1.0 / 240.0];
        for (k, w) in want.iter().enumerate() {
            assert!((t.coeffs()[k] - c(*w)).norm() < 1e-15, "tanh {k}");
        }
        let s = DiffOpSymbol::sinh_over_u(4);
        let want = [1.0, 0.0, 1.0 / 6.0, 0.0, 1.0 / 120.0];
        for (k, w) in want.iter().enumerate() {
            assert!((s.coeffs()[k] - c(*w)).norm() < 1e-15, "sinh {k}");
        }
    }

    #[test]
    fn short_germ_is_rejected() {
        let germ = PointGerm::constant(c(0.0), c(1.0), 1);
        assert!(matches!(DiffOpSymbol::identity(3).apply(&germ), Err(EqgError::Config(_))));
    }
}
