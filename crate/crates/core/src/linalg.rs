//! Complex matrix alias and the coefficient trait shared by scalar and
//! matrix-valued forms.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coefficients that a differential form can carry: complex scalars or
/// square complex matrices.
pub trait Coeff: Clone + std::fmt::Debug {
    /// A zero of the same shape.
    fn zero_like(&self) -> Self;
    /// `self += s * other`.
    fn add_scaled(&mut self, other: &Self, s: Complex64);
    fn max_abs(&self) -> f64;
    /// Shape tag used for compatibility checks (matrix size, 0 for scalars).
    fn shape(&self) -> usize;
}

impl Coeff for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, other: &Self, s: Complex64) {
        *self += s * other;
    }
    fn max_abs(&self) -> f64 {
        self.norm()
    }
    fn shape(&self) -> usize {
        0
    }
}

impl Coeff for CMat {
    fn zero_like(&self) -> Self {
        CMat::zeros(self.nrows(), self.ncols())
    }
    fn add_scaled(&mut self, other: &Self, s: Complex64) {
        self.zip_apply(other, |a, b| *a += s * b);
    }
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
    fn shape(&self) -> usize {
        self.nrows()
    }
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Embeds a real matrix.
pub fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `a b`, skipping zero entries of `b`. The bundle matrices here (lifted
/// rotations, Clifford symbols) are mostly zeros.
pub fn mul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.nrows(), "matrix product of incompatible shapes");
    let zero = Complex64::new(0.0, 0.0);
    let rows = a.nrows();
    let mut out = CMat::zeros(rows, b.ncols());
    let (src, dst) = (a.as_slice(), out.as_mut_slice());
    for (j, bcol) in b.as_slice().chunks_exact(b.nrows()).enumerate() {
        let ocol = &mut dst[j * rows..(j + 1) * rows];
        for (k, &s) in bcol.iter().enumerate() {
            if s == zero {
                continue;
            }
            for (o, &x) in ocol.iter_mut().zip(&src[k * rows..(k + 1) * rows]) {
                *o += x * s;
            }
        }
    }
    out
}

/// `tr(a b)` without forming the product.
pub fn trace_of_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// Induced 1-norm (max column sum).
pub fn norm1(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `a⁻¹` and its 1-norm condition number, or `None` when singular.
pub fn inverse_with_condition(a: &CMat) -> Option<(CMat, f64)> {
    let inv = a.clone().try_inverse()?;
    let cond = norm1(a) * norm1(&inv);
    if cond.is_finite() {
        Some((inv, cond))
    } else {
        None
    }
}

/// Smallest eigenvalue of the Hermitian matrix `a* a`.
pub fn min_gram_eigenvalue(a: &CMat) -> f64 {
    let gram = a.adjoint() * a;
    gram.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |m, &x| m.min(x))
}

/// Determinant of a small real matrix.
pub fn det_real(m: &DMatrix<f64>) -> f64 {
    m.clone().determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_aware_product_matches_dense() {
        let a = CMat::from_fn(3, 4, |i, j| Complex64::new(i as f64 - j as f64, 0.5 * j as f64));
        let mut b = CMat::from_fn(4, 2, |i, j| Complex64::new((i * j) as f64, 1.0 - i as f64));
        b[(2, 1)] = Complex64::new(0.0, 0.0);
        assert_eq!(mul(&a, &b), &a * &b);
    }
}
