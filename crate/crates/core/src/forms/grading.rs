use num_complex::Complex64;

use super::{MatrixPointForm, ScalarPointForm};
use crate::error::{Error, Result};
use crate::linalg::{trace_of_product, CMat, Coeff};

/// A ℤ₂-grading given by complementary idempotents.
#[derive(Clone, Debug)]
pub struct GradingTag {
    plus: CMat,
    minus: CMat,
    /// Weight of each block in the supertrace.
    pub signs: [f64; 2],
}

impl GradingTag {
    const TOL: f64 = 1e-12;

    /// Validates `P₊ + P₋ = I`, `P±² = P±` and `P₊P₋ = 0`.
    pub fn new(plus: CMat, minus: CMat) -> Result<Self> {
        let n = plus.nrows();
        if plus.ncols() != n || minus.nrows() != n || minus.ncols() != n {
            return Err(Error::Config("grading projectors must be square of equal size".into()));
        }
        let id = CMat::identity(n, n);
        let checks = [
            ("P+ + P- = I", (&plus + &minus - &id).max_abs()),
            ("P+^2 = P+", (&plus * &plus - &plus).max_abs()),
            ("P-^2 = P-", (&minus * &minus - &minus).max_abs()),
            ("P+ P- = 0", (&plus * &minus).max_abs()),
        ];
        for (name, err) in checks {
            if err > Self::TOL {
                return Err(Error::Config(format!("grading tag: {name} fails by {err:.3e}")));
            }
        }
        Ok(GradingTag { plus, minus, signs: [1.0, -1.0] })
    }

    /// Block grading `E₊ ⊕ E₋` with the even block first.
    pub fn from_block_ranks(rank_plus: usize, rank_minus: usize) -> Self {
        let n = rank_plus + rank_minus;
        let mut plus = CMat::zeros(n, n);
        let mut minus = CMat::zeros(n, n);
        for i in 0..n {
            if i < rank_plus {
                plus[(i, i)] = Complex64::new(1.0, 0.0);
            } else {
                minus[(i, i)] = Complex64::new(1.0, 0.0);
            }
        }
        GradingTag { plus, minus, signs: [1.0, -1.0] }
    }

    pub fn dimension(&self) -> usize {
        self.plus.nrows()
    }

    pub fn plus(&self) -> &CMat {
        &self.plus
    }

    pub fn minus(&self) -> &CMat {
        &self.minus
    }

    pub fn rank_plus(&self) -> usize {
        self.plus.trace().re.round() as usize
    }

    pub fn rank_minus(&self) -> usize {
        self.minus.trace().re.round() as usize
    }

    /// `tr_s(A) = tr(P₊A) − tr(P₋A)` on a single matrix.
    pub fn supertrace_matrix(&self, a: &CMat) -> Result<Complex64> {
        if a.nrows() != self.dimension() || a.ncols() != self.dimension() {
            return Err(Error::Config(format!(
                "supertrace: matrix is {}x{}, grading has dimension {}",
                a.nrows(),
                a.ncols(),
                self.dimension()
            )));
        }
        Ok(trace_of_product(&self.plus, a) * self.signs[0]
            + trace_of_product(&self.minus, a) * self.signs[1])
    }

    /// Pointwise supertrace of a matrix form.
    pub fn supertrace(&self, a: &MatrixPointForm) -> Result<ScalarPointForm> {
        let mut out = ScalarPointForm::zero(a.dim());
        for (mi, m) in a.terms() {
            out.add_term(*mi, &self.supertrace_matrix(m)?, Complex64::new(1.0, 0.0));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::MultiIndex;

    #[test]
    fn supertrace_examples() {
        let g = GradingTag::from_block_ranks(3, 2);
        assert_eq!(g.supertrace_matrix(&CMat::identity(5, 5)).unwrap(), Complex64::new(1.0, 0.0));

        let mut odd = CMat::zeros(5, 5);
        odd[(0, 4)] = Complex64::new(2.0, 1.0);
        odd[(3, 1)] = Complex64::new(-1.0, 0.0);
        assert_eq!(g.supertrace_matrix(&odd).unwrap(), Complex64::new(0.0, 0.0));

        let mut diag = CMat::zeros(5, 5);
        for (i, v) in [1.0, 2.0, 3.0, 10.0, 20.0].iter().enumerate() {
            diag[(i, i)] = Complex64::new(*v, 0.0);
        }
        assert_eq!(g.supertrace_matrix(&diag).unwrap(), Complex64::new(6.0 - 30.0, 0.0));

        let form = MatrixPointForm::from_terms(2, [(MultiIndex::top(2), diag)]);
        assert_eq!(g.supertrace(&form).unwrap().top_or_zero(), Complex64::new(-24.0, 0.0));
        assert!(g.supertrace_matrix(&CMat::identity(4, 4)).is_err());
    }

    #[test]
    fn rejects_non_complementary_projectors() {
        let p = CMat::identity(2, 2);
        assert!(GradingTag::new(p.clone(), p).is_err());
    }
}
