//! Dense square matrices with jet entries.

use num_complex::Complex64;

use crate::jet::HbarJet;

#[derive(Clone, Debug, PartialEq)]
pub struct JetMatrix {
    dim: usize,
    order: usize,
    data: Vec<HbarJet>,
}

impl JetMatrix {
    pub fn zeros(dim: usize, order: usize) -> Self {
        Self { dim, order, data: vec![HbarJet::zero(order); dim * dim] }
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        let mut m = Self::zeros(dim, order);
        for i in 0..dim {
            m.set(i, i, HbarJet::one(order));
        }
        m
    }

    /// Matrix with constant entries from a row-major complex array.
    pub fn from_complex(dim: usize, order: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        Self { dim, order, data: entries.iter().map(|c| HbarJet::constant(*c, order)).collect() }
    }

    /// Elementary matrix unit with a jet entry.
    pub fn unit(dim: usize, row: usize, col: usize, value: HbarJet) -> Self {
        let mut m = Self::zeros(dim, value.order());
        m.set(row, col, value);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, r: usize, c: usize) -> &HbarJet {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: HbarJet) {
        assert_eq!(v.order(), self.order, "jet order mismatch");
        self.data[r * self.dim + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &HbarJet) {
        let i = r * self.dim + c;
        self.data[i] = &self.data[i] + v;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n, self.order);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_to(i, j, &(a * b));
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self { dim: self.dim, order: self.order, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale_jet(&HbarJet::constant(Complex64::new(-1.0, 0.0), self.order)))
    }

    pub fn scale_jet(&self, s: &HbarJet) -> Self {
        Self { dim: self.dim, order: self.order, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Kronecker product; `self` is the leading (big-endian) factor.
    pub fn kron(&self, rhs: &Self) -> Self {
        let n = self.dim * rhs.dim;
        let mut out = Self::zeros(n, self.order);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.dim {
                    for l in 0..rhs.dim {
                        out.set(i * rhs.dim + k, j * rhs.dim + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Coefficient of ħ^k as a row-major complex matrix.
    pub fn coefficient(&self, k: usize) -> Vec<Complex64> {
        self.data.iter().map(|a| a.coeff(k)).collect()
    }

    /// Largest entry difference over all jet coefficients.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.data.iter().zip(&rhs.data).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(HbarJet::max_abs).fold(0.0, f64::max)
    }

    /// Largest difference per jet coefficient, index k holding ħ^k.
    pub fn coefficient_residuals(&self, rhs: &Self) -> Vec<f64> {
        (0..=self.order)
            .map(|k| self.data.iter().zip(&rhs.data).map(|(a, b)| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_of_units() {
        let a = JetMatrix::unit(2, 0, 1, HbarJet::one(1));
        let b = JetMatrix::unit(2, 1, 0, HbarJet::one(1));
        let k = a.kron(&b);
        assert_eq!(k.get(1, 2), &HbarJet::one(1));
        assert_eq!(k.max_abs(), 1.0);
    }

    #[test]
    fn identity_is_neutral() {
        let m = JetMatrix::from_complex(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let i = JetMatrix::identity(2, 2);
        assert_eq!(m.mul(&i), m);
        assert_eq!(i.mul(&m), m);
    }
}
