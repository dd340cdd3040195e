//! Laurent data at the origin, the residue pairing and dual bases.
//!
//! O = ℂ[[z]] carries the basis eⁱ = zⁱ/i!. For λ off the lattice, L_λ is
//! spanned by e_{i;λ} = (θ(λ+z)/θ(z))^{(i)}; for λ = n + mτ by
//! ρ^{(i)}·e^{-2iπmz}. The displayed families are not residue-dual to (eⁱ),
//! so [`DualBasisPair::dualize`] inverts the Gram matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{EqgError, Result};
use crate::jet::{series_div, series_mul};
use crate::theta::{ThetaEngine, POLE_GUARD};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Gram matrices with a larger condition number are rejected.
pub const MAX_GRAM_COND: f64 = 1e12;
/// Default number of basis functions.
pub const DEFAULT_TRUNC: usize = 40;
/// Default number of Laurent coefficients computed at the origin.
pub const DEFAULT_DEPTH: usize = 64;

/// A Laurent series Σ c_k z^k with k ≥ `min_exp`.
///
/// `precision = Some(p)` means every exponent ≥ p is unknown; asking for one
/// is a truncation error rather than a silent zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    min_exp: i32,
    coeffs: Vec<Complex64>,
    precision: Option<i32>,
}

impl LaurentSeries {
    /// A finite (exact) series.
    pub fn exact(min_exp: i32, coeffs: Vec<Complex64>) -> Self {
        Self { min_exp, coeffs, precision: None }
    }

    /// A series known up to O(z^{min_exp + coeffs.len()}).
    pub fn truncated(min_exp: i32, coeffs: Vec<Complex64>) -> Self {
        let p = min_exp + coeffs.len() as i32;
        Self { min_exp, coeffs, precision: Some(p) }
    }

    pub fn monomial(k: i32, c: Complex64) -> Self {
        Self::exact(k, vec![c])
    }

    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    pub fn precision(&self) -> Option<i32> {
        self.precision
    }

    /// Highest exponent stored.
    pub fn max_exp(&self) -> i32 {
        self.min_exp + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, k: i32) -> Result<Complex64> {
        if let Some(p) = self.precision {
            if k >= p {
                return Err(EqgError::Truncation(format!(
                    "coefficient of z^{k} requested from a series known to O(z^{p})"
                )));
            }
        }
        if k < self.min_exp {
            return Ok(ZERO);
        }
        Ok(self.coeffs.get((k - self.min_exp) as usize).copied().unwrap_or(ZERO))
    }

    pub fn residue(&self) -> Result<Complex64> {
        self.coeff(-1)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|x| x * c).collect(), precision: self.precision }
    }

    pub fn add(&self, other: &Self) -> Self {
        let min_exp = self.min_exp.min(other.min_exp);
        let precision = match (self.precision, other.precision) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let top = self.max_exp().max(other.max_exp());
        let top = precision.map_or(top, |p| top.min(p - 1));
        let coeffs = (min_exp..=top).map(|k| self.coeff(k).unwrap_or(ZERO) + other.coeff(k).unwrap_or(ZERO)).collect();
        Self { min_exp, coeffs, precision }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let min_exp = self.min_exp + other.min_exp;
        let mut precision = None;
        for p in
            [self.precision.map(|p| p + other.min_exp), other.precision.map(|p| p + self.min_exp)].into_iter().flatten()
        {
            precision = Some(precision.map_or(p, |q: i32| q.min(p)));
        }
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = precision.map_or(full, |p| ((p - min_exp).max(0) as usize).min(full));
        let coeffs = series_mul(&self.coeffs, &other.coeffs, len);
        Self { min_exp, coeffs, precision }
    }

    pub fn derivative(&self) -> Self {
        let coeffs: Vec<Complex64> =
            self.coeffs.iter().enumerate().map(|(i, c)| c * (self.min_exp + i as i32) as f64).collect();
        let precision = self.precision.map(|p| if p == 0 { 0 } else { p - 1 });
        if self.min_exp == 0 {
            // the constant term dies; the series now starts at z^0
            let coeffs = coeffs.into_iter().skip(1).collect();
            return Self { min_exp: 0, coeffs, precision };
        }
        Self { min_exp: self.min_exp - 1, coeffs, precision }
    }

    /// The retained partial sum at z.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.min_exp)
    }
}

/// ⟨f, g⟩ = res₀(fg dz).
pub fn residue_pairing(f: &LaurentSeries, g: &LaurentSeries) -> Result<Complex64> {
    // only the z^{-1} coefficient of the product is needed
    let need_f = -1 - g.min_exp;
    let need_g = -1 - f.min_exp;
    if let Some(p) = f.precision {
        if p <= need_f {
            return Err(EqgError::Truncation(format!(
                "pairing needs z^{need_f} of the left factor, known to O(z^{p})"
            )));
        }
    }
    if let Some(p) = g.precision {
        if p <= need_g {
            return Err(EqgError::Truncation(format!(
                "pairing needs z^{need_g} of the right factor, known to O(z^{p})"
            )));
        }
    }
    let mut acc = ZERO;
    for k in f.min_exp..=need_f.min(f.max_exp()) {
        acc += f.coeff(k)? * g.coeff(-1 - k)?;
    }
    Ok(acc)
}

/// Spanning family of L_λ before dualization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RawFamily {
    /// (θ(λ+z)/θ(z))^{(i)}, λ off the lattice.
    Generic { lambda: Complex64 },
    /// ρ^{(i)}·e^{-2iπmz} for λ = n + mτ.
    Lattice { n: i64, m: i64 },
}

impl RawFamily {
    /// Generic family; fails if λ is within the pole guard of the lattice.
    pub fn generic(engine: &ThetaEngine, lambda: Complex64) -> Result<Self> {
        engine.check_off_lattice(lambda, "lambda")?;
        Ok(RawFamily::Generic { lambda })
    }

    /// Picks the lattice branch when λ sits on Γ, the generic one otherwise.
    pub fn classify(engine: &ThetaEngine, lambda: Complex64) -> Self {
        if engine.lattice_distance(lambda) < POLE_GUARD {
            let (n, m) = engine.nearest_lattice_point(lambda);
            RawFamily::Lattice { n, m }
        } else {
            RawFamily::Generic { lambda }
        }
    }

    pub fn lambda(&self, engine: &ThetaEngine) -> Complex64 {
        match *self {
            RawFamily::Generic { lambda } => lambda,
            RawFamily::Lattice { n, m } => engine.tau() * m as f64 + n as f64,
        }
    }
}

/// Which space a basis function belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisFamily {
    /// eⁱ = zⁱ/i! in O.
    O,
    L(RawFamily),
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Laurent series at 0 of θ(λ+z)/θ(z), to `depth` coefficients.
fn generic_laurent(engine: &ThetaEngine, lambda: Complex64, depth: usize) -> Result<LaurentSeries> {
    let num = engine.taylor(lambda, depth)?;
    let t0 = engine.taylor(ZERO, depth + 1)?;
    // θ(z) = z·S(z); divide the simple zero out
    let s: Vec<Complex64> = t0[1..].to_vec();
    Ok(LaurentSeries::truncated(-1, series_div(&num, &s, depth)))
}

fn rho_laurent(engine: &ThetaEngine, depth: usize) -> Result<LaurentSeries> {
    let t0 = engine.taylor(ZERO, depth + 1)?;
    let s: Vec<Complex64> = t0[1..].to_vec();
    let dt: Vec<Complex64> = (0..depth).map(|k| t0[k + 1] * (k + 1) as f64).collect();
    Ok(LaurentSeries::truncated(-1, series_div(&dt, &s, depth)))
}

fn exp_laurent(a: Complex64, depth: usize) -> LaurentSeries {
    let mut c = Vec::with_capacity(depth);
    let mut t = Complex64::new(1.0, 0.0);
    for k in 0..depth {
        if k > 0 {
            t = t * a / k as f64;
        }
        c.push(t);
    }
    LaurentSeries::truncated(0, c)
}

fn two_pi_i_m(m: i64) -> Complex64 {
    Complex64::new(0.0, -2.0 * std::f64::consts::PI * m as f64)
}

/// Laurent expansions at 0 of the first `count` raw functions of a family.
fn raw_laurent_family(
    engine: &ThetaEngine,
    family: RawFamily,
    count: usize,
    depth: usize,
) -> Result<Vec<LaurentSeries>> {
    let mut out = Vec::with_capacity(count);
    match family {
        RawFamily::Generic { lambda } => {
            let mut f = generic_laurent(engine, lambda, depth)?;
            for _ in 0..count {
                let next = f.derivative();
                out.push(f);
                f = next;
            }
        }
        RawFamily::Lattice { m, .. } => {
            let mut r = rho_laurent(engine, depth)?;
            let ex = exp_laurent(two_pi_i_m(m), depth);
            for _ in 0..count {
                let next = r.derivative();
                out.push(if m == 0 { r } else { r.mul(&ex) });
                r = next;
            }
        }
    }
    Ok(out)
}

/// Laurent expansion at 0 of the i-th basis function of O or of L_λ.
pub fn laurent_of_basis(engine: &ThetaEngine, family: BasisFamily, i: usize, depth: usize) -> Result<LaurentSeries> {
    match family {
        BasisFamily::O => Ok(LaurentSeries::monomial(i as i32, Complex64::new(1.0 / factorial(i), 0.0))),
        BasisFamily::L(raw) => {
            if let RawFamily::Generic { lambda } = raw {
                engine.check_off_lattice(lambda, "lambda")?;
            }
            Ok(raw_laurent_family(engine, raw, i + 1, depth)?.pop().expect("nonempty"))
        }
    }
}

/// Values e_k^{(d)}(z) for k < count and d ≤ derivs, indexed [k][d].
fn raw_derivatives(
    engine: &ThetaEngine,
    family: RawFamily,
    z: Complex64,
    count: usize,
    derivs: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let top = count + derivs;
    match family {
        RawFamily::Generic { lambda } => {
            engine.check_off_lattice(z, "kernel argument")?;
            let num = engine.taylor(lambda + z, top)?;
            let den = engine.taylor(z, top)?;
            let t = series_div(&num, &den, top + 1);
            // f^{(j)}(z) = j!·t_j
            let d: Vec<Complex64> = t.iter().enumerate().map(|(j, c)| c * factorial(j)).collect();
            Ok((0..count).map(|k| (0..=derivs).map(|e| d[k + e]).collect()).collect())
        }
        RawFamily::Lattice { m, .. } => {
            let r = engine.rho_taylor(z, top)?;
            let rd: Vec<Complex64> = r.iter().enumerate().map(|(j, c)| c * factorial(j)).collect();
            let a = two_pi_i_m(m);
            let ez = (a * z).exp();
            Ok((0..count)
                .map(|k| {
                    (0..=derivs)
                        .map(|e| {
                            // Leibniz rule on ρ^{(k)}·e^{az}
                            let mut acc = ZERO;
                            let mut binom = 1.0;
                            for j in 0..=e {
                                if j > 0 {
                                    binom = binom * (e - j + 1) as f64 / j as f64;
                                }
                                acc += rd[k + j] * a.powi((e - j) as i32) * binom;
                            }
                            acc * ez
                        })
                        .collect()
                })
                .collect())
        }
    }
}

/// Truncated dual bases (eⁱ) of O and (ẽ_{i;λ}) of L_λ.
#[derive(Clone, Debug)]
pub struct DualBasisPair {
    engine: ThetaEngine,
    family: RawFamily,
    n: usize,
    depth: usize,
    gram: DMatrix<Complex64>,
    cond: f64,
    /// Column j expresses ẽ_j in the raw family: ẽ_j = Σ_k D_{kj} e_k.
    dual_coeffs: Option<DMatrix<Complex64>>,
    kernel_constant: Option<Complex64>,
}

impl DualBasisPair {
    /// Raw family plus Gram matrix G_{ij} = ⟨eⁱ, e_{j;λ}⟩; not yet dual.
    pub fn new(engine: &ThetaEngine, family: RawFamily, n: usize, depth: usize) -> Result<Self> {
        if n == 0 {
            return Err(EqgError::Config("truncation size must be positive".into()));
        }
        if depth < n + 2 {
            return Err(EqgError::Config(format!("Laurent depth {depth} too small for {n} functions")));
        }
        if let RawFamily::Generic { lambda } = family {
            engine.check_off_lattice(lambda, "lambda")?;
        }
        let raw = raw_laurent_family(engine, family, n, depth)?;
        let mut gram = DMatrix::from_element(n, n, ZERO);
        for i in 0..n {
            let ei = laurent_of_basis(engine, BasisFamily::O, i, depth)?;
            for (j, ej) in raw.iter().enumerate() {
                gram[(i, j)] = residue_pairing(&ei, ej)?;
            }
        }
        let sv = gram.clone().svd(false, false).singular_values;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        Ok(Self { engine: *engine, family, n, depth, gram, cond, dual_coeffs: None, kernel_constant: None })
    }

    /// Inverts the Gram matrix so that ⟨eⁱ, ẽ_j⟩ = δ_ij.
    pub fn dualize(mut self) -> Result<Self> {
        if self.cond.is_nan() || self.cond > MAX_GRAM_COND {
            return Err(EqgError::Dualization { cond: self.cond });
        }
        let inv = self.gram.clone().try_inverse().ok_or(EqgError::Dualization { cond: self.cond })?;
        self.dual_coeffs = Some(inv);
        if let RawFamily::Lattice { m: 0, .. } = self.family {
            if self.n >= 10 {
                // the L₀ kernel is ρ(z - w) up to an additive constant
                let z = Complex64::new(0.45, 0.1);
                let w = Complex64::new(0.15, 0.0);
                let sum = self.kernel_sum(z, w, self.n)?;
                self.kernel_constant = Some(sum - self.engine.rho(z - w)?);
            }
        }
        Ok(self)
    }

    /// Convenience: classify λ, build and dualize.
    pub fn for_lambda(engine: &ThetaEngine, lambda: Complex64, n: usize, depth: usize) -> Result<Self> {
        Self::new(engine, RawFamily::classify(engine, lambda), n, depth)?.dualize()
    }

    pub fn family(&self) -> RawFamily {
        self.family
    }

    pub fn lambda(&self) -> Complex64 {
        self.family.lambda(&self.engine)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn gram(&self) -> &DMatrix<Complex64> {
        &self.gram
    }

    pub fn cond(&self) -> f64 {
        self.cond
    }

    pub fn dual_coeffs(&self) -> Option<&DMatrix<Complex64>> {
        self.dual_coeffs.as_ref()
    }

    /// Measured additive constant of the L₀ kernel (λ = 0 branch only).
    pub fn kernel_constant(&self) -> Option<Complex64> {
        self.kernel_constant
    }

    fn coeffs(&self) -> Result<&DMatrix<Complex64>> {
        self.dual_coeffs.as_ref().ok_or_else(|| EqgError::Config("basis pair has not been dualized".into()))
    }

    /// Laurent expansion at 0 of ẽ_j.
    pub fn dual_laurent(&self, j: usize) -> Result<LaurentSeries> {
        let d = self.coeffs()?;
        let raw = raw_laurent_family(&self.engine, self.family, self.n, self.depth)?;
        let mut acc = LaurentSeries::exact(0, vec![ZERO]);
        for (k, ek) in raw.iter().enumerate() {
            if d[(k, j)] != ZERO {
                acc = acc.add(&ek.scale(d[(k, j)]));
            }
        }
        Ok(acc)
    }

    /// Matrix of ⟨eⁱ, ẽ_j⟩ recomputed from Laurent data.
    pub fn pairing_matrix(&self) -> Result<DMatrix<Complex64>> {
        let d = self.coeffs()?;
        let raw = raw_laurent_family(&self.engine, self.family, self.n, self.depth)?;
        let mut raw_pair = DMatrix::from_element(self.n, self.n, ZERO);
        for i in 0..self.n {
            let ei = laurent_of_basis(&self.engine, BasisFamily::O, i, self.depth)?;
            for (k, ek) in raw.iter().enumerate() {
                raw_pair[(i, k)] = residue_pairing(&ei, ek)?;
            }
        }
        Ok(raw_pair * d)
    }

    /// max |⟨eⁱ, ẽ_j⟩ - δ_ij|.
    pub fn pairing_residual(&self) -> Result<f64> {
        let p = self.pairing_matrix()?;
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - want).norm());
            }
        }
        Ok(worst)
    }

    /// ẽ_j^{(d)}(z) for j < count, d ≤ derivs, indexed [j][d].
    pub fn dual_derivatives(&self, z: Complex64, count: usize, derivs: usize) -> Result<Vec<Vec<Complex64>>> {
        let d = self.coeffs()?;
        let count = count.min(self.n);
        let raw = raw_derivatives(&self.engine, self.family, z, self.n, derivs)?;
        Ok((0..count)
            .map(|j| (0..=derivs).map(|e| (0..self.n).map(|k| d[(k, j)] * raw[k][e]).sum()).collect())
            .collect())
    }

    pub fn dual_value(&self, j: usize, z: Complex64) -> Result<Complex64> {
        if j >= self.n {
            return Err(EqgError::Config(format!("index {j} beyond truncation {}", self.n)));
        }
        Ok(self.dual_derivatives(z, j + 1, 0)?[j][0])
    }

    /// Σ_{i<N} eⁱ(w)·ẽ_i(z); see [`kernel_sum_oracle`].
    pub fn kernel_sum(&self, z: Complex64, w: Complex64, n: usize) -> Result<Complex64> {
        kernel_sum_oracle(self, z, w, n)
    }
}

/// ω_λ(z, w) = θ(z - w + λ)/(θ(z - w)θ(λ)).
pub fn green_kernel(engine: &ThetaEngine, lambda: Complex64, z: Complex64, w: Complex64) -> Result<Complex64> {
    engine.check_off_lattice(lambda, "lambda")?;
    engine.check_off_lattice(z - w, "z - w")?;
    Ok(engine.theta(z - w + lambda) / (engine.theta(z - w) * engine.theta(lambda)))
}

/// Truncated expansion Σ_{i<N} eⁱ(w)·ẽ_{i;λ}(z).
///
/// The series converges for |w| below the distance from z to the lattice;
/// outside that disc, or when the terms visibly grow, a domain error is
/// returned instead of a meaningless partial sum.
pub fn kernel_sum_oracle(pair: &DualBasisPair, z: Complex64, w: Complex64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Ok(ZERO);
    }
    if n > pair.len() {
        return Err(EqgError::Config(format!("N = {n} exceeds truncation {}", pair.len())));
    }
    let radius = pair.engine.lattice_distance(z);
    if w.norm() >= radius {
        return Err(EqgError::Domain(format!("|w| = {:.3} outside convergence radius {:.3} at z", w.norm(), radius)));
    }
    let dual = pair.dual_derivatives(z, n, 0)?;
    let mut sum = ZERO;
    let mut wi = Complex64::new(1.0, 0.0);
    let mut sizes = Vec::with_capacity(n);
    for (i, row) in dual.iter().enumerate() {
        if i > 0 {
            wi = wi * w / i as f64;
        }
        let t = wi * row[0];
        sizes.push(t.norm());
        sum += t;
    }
    if n >= 8 {
        let q = n / 4;
        let head = sizes[..q].iter().cloned().fold(0.0, f64::max);
        let tail = sizes[n - q..].iter().cloned().fold(0.0, f64::max);
        if tail > head {
            return Err(EqgError::Domain("partial sums grow; expansion diverges".into()));
        }
    }
    Ok(sum)
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
    fn monomial_pairing() {
        for i in 0..5 {
            for j in 0..5 {
                let a = LaurentSeries::monomial(i, c(1.0 / factorial(i as usize), 0.0));
                let b = LaurentSeries::monomial(-j - 1, c(factorial(j as usize), 0.0));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((residue_pairing(&a, &b).unwrap() - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn one_against_inverse_z() {
        let one = LaurentSeries::monomial(0, c(1.0, 0.0));
        let inv = LaurentSeries::monomial(-1, c(1.0, 0.0));
        assert_eq!(residue_pairing(&one, &inv).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn undetermined_residue_is_truncation() {
        let f = LaurentSeries::truncated(-1, vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let g = LaurentSeries::monomial(-3, c(1.0, 0.0));
        assert!(matches!(residue_pairing(&g, &f), Err(EqgError::Truncation(_))));
        assert!(matches!(f.coeff(1), Err(EqgError::Truncation(_))));
    }

    #[test]
    fn derivative_tracks_precision() {
        let f = LaurentSeries::truncated(-1, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let d = f.derivative();
        assert_eq!(d.min_exp(), -2);
        assert_eq!(d.precision(), Some(1));
        assert_eq!(d.coeff(-2).unwrap(), c(-1.0, 0.0));
        assert_eq!(d.coeff(0).unwrap(), c(3.0, 0.0));
    }

    #[test]
    fn basis_e0_of_o() {
        let e = engine();
        let s = laurent_of_basis(&e, BasisFamily::O, 0, 16).unwrap();
        assert_eq!(s.coeff(0).unwrap(), c(1.0, 0.0));
        assert_eq!(s.coeff(1).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn generic_branch_guards_lambda() {
        let e = engine();
        let r = laurent_of_basis(&e, BasisFamily::L(RawFamily::Generic { lambda: e.tau() }), 0, 16);
        assert!(matches!(r, Err(EqgError::Pole { .. })));
    }

    #[test]
    fn empty_kernel_sum() {
        let e = engine();
        let p = DualBasisPair::for_lambda(&e, c(0.3, 0.2), 10, 24).unwrap();
        assert_eq!(kernel_sum_oracle(&p, c(0.4, 0.0), c(0.1, 0.0), 0).unwrap(), ZERO);
    }

    #[test]
    fn divergent_point_is_domain_error() {
        let e = engine();
        let p = DualBasisPair::for_lambda(&e, c(0.3, 0.2), 10, 24).unwrap();
        let r = kernel_sum_oracle(&p, c(0.2, 0.0), c(0.3, 0.0), 10);
        assert!(matches!(r, Err(EqgError::Domain(_))));
    }

    #[test]
    fn undualized_pair_refuses_evaluation() {
        let e = engine();
        let p = DualBasisPair::new(&e, RawFamily::Generic { lambda: c(0.3, 0.2) }, 6, 16).unwrap();
        assert!(matches!(p.dual_value(0, c(0.4, 0.1)), Err(EqgError::Config(_))));
    }
}
