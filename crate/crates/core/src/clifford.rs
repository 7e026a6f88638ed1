//! The signature-graded exterior algebra `Λ(R^{2n}) ⊗ ℂ` with the Clifford
//! action `c(e) = e∧ − ι_e`, the involution `τ = iⁿ c(e₁)⋯c(e_{2n})`, and
//! the symbol `v_K = τc(ξ) + i c(η) : Λ₊ → Λ₋`.
//!
//! Basis vectors `e_I` are ordered lexicographically by their increasing
//! index lists, so for `n = 1` the order is `1, e₁, e₁e₂, e₂`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{GradingTag, MultiIndex};
use crate::linalg::{CMat, I};

pub type IMat = DMatrix<i64>;

/// Classification of a point by the value of `h(K, K)` and invertibility
/// of `v_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Regular,
    ZeroNoninvertible,
    /// `h = 0` yet `v_K` is invertible; only possible for `n = 1` where
    /// `ξ, η` form an oriented orthogonal frame of equal lengths.
    ZeroPlusFrame,
}

#[derive(Clone, Debug)]
pub struct CliffordModel {
    n: usize,
    basis: Vec<MultiIndex>,
    generators_int: Vec<IMat>,
    /// `c(e₁)⋯c(e_{2n})` before the phase `iⁿ`.
    volume_int: IMat,
    generators: Vec<CMat>,
    tau: CMat,
    p_plus: CMat,
    p_minus: CMat,
    /// Orthonormal bases of `Λ₊` and `Λ₋` as columns.
    u_plus: CMat,
    u_minus: CMat,
}

/// Number of indices of `set` strictly below `a`.
fn below(set: MultiIndex, a: usize) -> u32 {
    (set.mask() & ((1u16 << a) - 1)).count_ones()
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl CliffordModel {
    /// Builds the model for `1 ≤ n ≤ 4` (matrix size `4ⁿ ≤ 256`).
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::Config(format!("Clifford model needs 1 ≤ n ≤ 4, got {n}")));
        }
        let d = 2 * n;
        let mut basis: Vec<MultiIndex> = (0u16..(1 << d)).map(MultiIndex::from_mask).collect();
        basis.sort_by_key(|m| m.indices());
        let position = |m: MultiIndex| basis.iter().position(|b| *b == m).expect("basis element");
        let size = basis.len();

        let mut generators_int = Vec::with_capacity(d);
        for a in 0..d {
            let mut c = IMat::zeros(size, size);
            for (col, &e) in basis.iter().enumerate() {
                let s = sign(below(e, a));
                if e.contains(a) {
                    let target = MultiIndex::from_mask(e.mask() & !(1 << a));
                    c[(position(target), col)] -= s;
                } else {
                    let target = e.union(MultiIndex::single(a));
                    c[(position(target), col)] += s;
                }
            }
            generators_int.push(c);
        }
        let volume_int = generators_int.iter().fold(IMat::identity(size, size), |acc, c| acc * c);

        let to_c = |m: &IMat| m.map(|v| Complex64::new(v as f64, 0.0));
        let generators: Vec<CMat> = generators_int.iter().map(to_c).collect();
        let phase = I.powu(n as u32);
        let tau = to_c(&volume_int) * phase;
        let id = CMat::identity(size, size);
        let half = Complex64::new(0.5, 0.0);
        let p_plus = (&id + &tau) * half;
        let p_minus = (&id - &tau) * half;

        // τ e_I = β e_{Iᶜ}; pair each I with its complement once
        let full = MultiIndex::top(d);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut u_plus = CMat::zeros(size, size / 2);
        let mut u_minus = CMat::zeros(size, size / 2);
        let mut k = 0;
        for (col, &e) in basis.iter().enumerate() {
            let comp = position(MultiIndex::from_mask(full.mask() & !e.mask()));
            if comp < col {
                continue;
            }
            let beta = tau[(comp, col)];
            u_plus[(col, k)] = Complex64::new(r, 0.0);
            u_plus[(comp, k)] = beta * r;
            u_minus[(col, k)] = Complex64::new(r, 0.0);
            u_minus[(comp, k)] = -beta * r;
            k += 1;
        }
        Ok(CliffordModel {
            n,
            basis,
            generators_int,
            volume_int,
            generators,
            tau,
            p_plus,
            p_minus,
            u_plus,
            u_minus,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `4ⁿ`.
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn generators_int(&self) -> &[IMat] {
        &self.generators_int
    }

    pub fn volume_int(&self) -> &IMat {
        &self.volume_int
    }

    pub fn generator(&self, a: usize) -> &CMat {
        &self.generators[a]
    }

    pub fn tau(&self) -> &CMat {
        &self.tau
    }

    pub fn projector_plus(&self) -> &CMat {
        &self.p_plus
    }

    pub fn projector_minus(&self) -> &CMat {
        &self.p_minus
    }

    pub fn basis_plus(&self) -> &CMat {
        &self.u_plus
    }

    pub fn basis_minus(&self) -> &CMat {
        &self.u_minus
    }

    pub fn grading(&self) -> GradingTag {
        GradingTag::new(self.p_plus.clone(), self.p_minus.clone()).expect("τ is an involution")
    }

    fn check_vector(&self, v: &[f64]) -> Result<()> {
        if v.len() != 2 * self.n {
            return Err(Error::Config(format!(
                "vector of length {} for a model of dimension {}",
                v.len(),
                2 * self.n
            )));
        }
        Ok(())
    }

    /// `c(v) = Σ v_a c(e_a)`.
    pub fn clifford(&self, v: &[f64]) -> Result<CMat> {
        self.check_vector(v)?;
        let mut out = CMat::zeros(self.size(), self.size());
        for (c, &x) in self.generators.iter().zip(v) {
            if x != 0.0 {
                out += c * Complex64::new(x, 0.0);
            }
        }
        Ok(out)
    }

    /// The odd operator `τc(ξ) + i c(η)` on all of `Λ`. It is self-adjoint,
    /// so it equals `V = v_K + v_K*`.
    pub fn odd_operator(&self, xi: &[f64], eta: &[f64]) -> Result<CMat> {
        Ok(&self.tau * self.clifford(xi)? + self.clifford(eta)? * I)
    }

    /// `v_K : Λ₊ → Λ₋` in the orthonormal bases of the two halves.
    pub fn symbol(&self, xi: &[f64], eta: &[f64]) -> Result<CMat> {
        Ok(self.u_minus.adjoint() * self.odd_operator(xi, eta)? * &self.u_plus)
    }

    /// Extension of an endomorphism `M` of `R^{2n}` (`e_b ↦ Σ_a M_ab e_a`)
    /// to a derivation of `Λ`: `Σ M_ab e_a∧ ι_b`.
    pub fn derivation(&self, m: &CMat) -> CMat {
        let d = 2 * self.n;
        let size = self.size();
        let mut out = CMat::zeros(size, size);
        let position = |t: MultiIndex| self.basis.iter().position(|b| *b == t).expect("basis");
        for (col, &e) in self.basis.iter().enumerate() {
            for b in 0..d {
                if !e.contains(b) {
                    continue;
                }
                let removed = MultiIndex::from_mask(e.mask() & !(1 << b));
                let s_b = sign(below(e, b));
                for a in 0..d {
                    let coef = m[(a, b)];
                    if coef == Complex64::new(0.0, 0.0) || removed.contains(a) {
                        continue;
                    }
                    let s_a = sign(below(removed, a));
                    let target = removed.union(MultiIndex::single(a));
                    out[(position(target), col)] += coef * (s_a * s_b) as f64;
                }
            }
        }
        out
    }

    /// Restriction of an operator commuting with `τ` to `Λ₊` and `Λ₋`.
    pub fn split_even(&self, a: &CMat) -> (CMat, CMat) {
        (
            self.u_plus.adjoint() * a * &self.u_plus,
            self.u_minus.adjoint() * a * &self.u_minus,
        )
    }

    /// Classifies a point from the orthonormal-frame components of `ξ, η`.
    pub fn classify(&self, xi: &[f64], eta: &[f64]) -> Result<PointClass> {
        classify_point(self, xi, eta)
    }
}

/// `|ξ|² − |η|² + 2i⟨ξ, η⟩` in the metric `g`.
pub fn h_value(xi: &[f64], eta: &[f64], metric: &DMatrix<f64>) -> Complex64 {
    let x = nalgebra::DVector::from_column_slice(xi);
    let y = nalgebra::DVector::from_column_slice(eta);
    let g = |a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>| (a.transpose() * metric * b)[0];
    Complex64::new(g(&x, &x) - g(&y, &y), 2.0 * g(&x, &y))
}

/// Relative threshold below which `h` counts as zero.
pub const H_ZERO_TOL: f64 = 1e-12;
/// Threshold on the 2×2 orientation determinant for `n = 1` frames.
pub const FRAME_DET_TOL: f64 = 1e-12;

/// Near a zero of `h` the smallest singular value of `v_K` behaves like
/// `|h|/√(2S)` with `S = |ξ|² + |η|²`, so this cut matches `H_ZERO_TOL`.
fn singular_cut(scale: f64) -> f64 {
    H_ZERO_TOL / std::f64::consts::SQRT_2 * scale.sqrt()
}

/// Classifies `(ξ, η)` given in an orthonormal frame. A combination that
/// contradicts the zero-set classification is returned as an error.
pub fn classify_point(model: &CliffordModel, xi: &[f64], eta: &[f64]) -> Result<PointClass> {
    let scale: f64 = xi.iter().chain(eta).map(|v| v * v).sum();
    let v = model.symbol(xi, eta)?;
    let sigma_min = v.clone().singular_values().iter().fold(f64::INFINITY, |m, &s| m.min(s));
    let singular = scale == 0.0 || sigma_min <= singular_cut(scale);
    let h = h_value(xi, eta, &DMatrix::identity(xi.len(), xi.len()));
    let h_zero = h.norm() <= H_ZERO_TOL * scale;
    match (h_zero, singular) {
        (false, false) => Ok(PointClass::Regular),
        (true, true) => Ok(PointClass::ZeroNoninvertible),
        (false, true) => Err(Error::ZeroSetClassificationViolation(format!(
            "h = {h} is nonzero but v_K is singular (σ_min = {sigma_min:.3e})"
        ))),
        (true, false) => {
            if model.n() != 1 {
                return Err(Error::ZeroSetClassificationViolation(format!(
                    "h = 0 with invertible v_K in dimension {}",
                    2 * model.n()
                )));
            }
            let det = xi[0] * eta[1] - xi[1] * eta[0];
            if det > FRAME_DET_TOL * scale {
                Ok(PointClass::ZeroPlusFrame)
            } else {
                Err(Error::ZeroSetClassificationViolation(format!(
                    "h = 0 with invertible v_K but det(ξ, η) = {det:.3e}"
                )))
            }
        }
    }
}
