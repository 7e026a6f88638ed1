use num_complex::Complex64;

use super::MultiIndex;
use crate::linalg::{mul, trace_of_product, CMat, Coeff};

/// An element of the exterior algebra of the cotangent space at one point,
/// with scalar or matrix coefficients. Only present multi-indices are
/// stored, sorted by mask.
#[derive(Clone, Debug)]
pub struct PointForm<T> {
    dim: usize,
    terms: Vec<(MultiIndex, T)>,
}

pub type ScalarPointForm = PointForm<Complex64>;
pub type MatrixPointForm = PointForm<CMat>;

impl<T: Coeff> PointForm<T> {
    pub fn zero(dim: usize) -> Self {
        PointForm { dim, terms: Vec::new() }
    }

    /// Builds a form, summing repeated indices.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, T)>) -> Self {
        let mut f = PointForm::zero(dim);
        for (mi, t) in terms {
            f.add_term(mi, &t, Complex64::new(1.0, 0.0));
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(MultiIndex, T)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, mi: MultiIndex) -> Option<&T> {
        self.terms
            .binary_search_by_key(&mi, |(m, _)| *m)
            .ok()
            .map(|k| &self.terms[k].1)
    }

    /// `self[mi] += s * value`.
    pub fn add_term(&mut self, mi: MultiIndex, value: &T, s: Complex64) {
        debug_assert!(mi.mask() >> self.dim == 0, "index outside dimension");
        match self.terms.binary_search_by_key(&mi, |(m, _)| *m) {
            Ok(k) => self.terms[k].1.add_scaled(value, s),
            Err(k) => {
                let mut t = value.zero_like();
                t.add_scaled(value, s);
                self.terms.insert(k, (mi, t));
            }
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Self, s: Complex64) {
        for (mi, t) in &other.terms {
            self.add_term(*mi, t, s);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(1.0, 0.0));
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = PointForm::zero(self.dim);
        out.add_scaled(self, s);
        out
    }

    /// Homogeneous component of the given degree.
    pub fn part(&self, degree: usize) -> Self {
        PointForm {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .cloned()
                .collect(),
        }
    }

    /// Degrees with at least one stored term.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.iter().map(|(m, _)| m.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, (_, t)| m.max(t.max_abs()))
    }

    /// Coefficient of `dx_0 ∧ … ∧ dx_{dim-1}`.
    pub fn top(&self) -> Option<&T> {
        self.get(MultiIndex::top(self.dim))
    }

    /// General wedge with a coefficient product `mul(a, b)`.
    pub fn wedge_with<U, V, F>(&self, other: &PointForm<U>, mul: F) -> PointForm<V>
    where
        U: Coeff,
        V: Coeff,
        F: Fn(&T, &U) -> V,
    {
        assert_eq!(self.dim, other.dim, "wedge of forms in different dimensions");
        let mut out = PointForm::zero(self.dim);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                if let Some(sign) = ma.wedge_sign(*mb) {
                    out.add_term(ma.union(*mb), &mul(a, b), Complex64::new(sign, 0.0));
                }
            }
        }
        out
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> PointForm<U> {
        PointForm {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, t)| (*m, f(t))).collect(),
        }
    }

    /// Drops terms whose coefficient is exactly zero.
    pub fn pruned(mut self) -> Self {
        self.terms.retain(|(_, t)| t.max_abs() != 0.0);
        self
    }
}

impl ScalarPointForm {
    pub fn wedge(&self, other: &Self) -> Self {
        self.wedge_with(other, |a, b| a * b)
    }

    pub fn top_or_zero(&self) -> Complex64 {
        self.top().copied().unwrap_or_default()
    }

    pub fn constant(dim: usize, value: Complex64) -> Self {
        PointForm::from_terms(dim, [(MultiIndex::EMPTY, value)])
    }
}

impl MatrixPointForm {
    /// Matrix wedge: coefficients multiply as matrices, in order.
    pub fn wedge(&self, other: &Self) -> Self {
        self.wedge_with(other, mul)
    }

    /// Pointwise trace.
    pub fn trace(&self) -> ScalarPointForm {
        self.map(|m| m.trace())
    }

    /// `tr(self ∧ other)` without forming matrix products.
    pub fn trace_wedge(&self, other: &Self) -> ScalarPointForm {
        self.wedge_with(other, trace_of_product)
    }

    /// `g⁻¹ · self · g` coefficientwise.
    pub fn conjugated(&self, g: &CMat, g_inv: &CMat) -> Self {
        self.map(|m| mul(&mul(g_inv, m), g))
    }

    /// Multiplies every coefficient on the left by `a` and on the right by `b`.
    pub fn sandwich(&self, a: &CMat, b: &CMat) -> Self {
        self.map(|m| mul(&mul(a, m), b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dx(i: usize, dim: usize, v: f64) -> ScalarPointForm {
        PointForm::from_terms(dim, [(MultiIndex::single(i), Complex64::new(v, 0.0))])
    }

    #[test]
    fn alternation_and_graded_commutativity() {
        let x = dx(0, 2, 1.0);
        let y = dx(1, 2, 1.0);
        assert!(x.wedge(&x).pruned().is_empty());
        let xy = x.wedge(&y);
        let yx = y.wedge(&x);
        assert_eq!(xy.top_or_zero(), -yx.top_or_zero());
    }

    #[test]
    fn bilinearity() {
        let a = dx(0, 2, 2.0);
        let b = dx(1, 2, 3.0);
        assert_eq!(a.wedge(&b).top_or_zero(), Complex64::new(6.0, 0.0));
    }

    #[test]
    fn matrix_wedge_keeps_order() {
        let p = CMat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0].map(Complex64::from));
        let q = CMat::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0].map(Complex64::from));
        let a = MatrixPointForm::from_terms(2, [(MultiIndex::single(0), p.clone())]);
        let b = MatrixPointForm::from_terms(2, [(MultiIndex::single(1), q.clone())]);
        let ab = a.wedge(&b);
        assert_eq!(ab.top().unwrap(), &(&p * &q));
        let ba = b.wedge(&a);
        assert_eq!(ba.top().unwrap(), &(-(&q * &p)));
        // tr(a∧b) from the fused routine
        assert_eq!(a.trace_wedge(&b).top_or_zero(), ab.trace().top_or_zero());
    }
}
