use num_complex::Complex64;

use super::{MatrixPointForm, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::CMat;

/// `exp(Ω) = Σ_k Ω^{∧k}/k!` for a matrix form with no degree-0 part.
///
/// Every term of Ω has degree ≥ 2, so `Ω^{∧k}` vanishes once `2k` exceeds
/// the dimension and the series is a finite sum.
pub fn matrix_exp_form(omega: &MatrixPointForm, rank: usize) -> Result<MatrixPointForm> {
    for (mi, m) in omega.terms() {
        if mi.degree() == 0 {
            return Err(Error::Contract(
                "matrix_exp_form: degree-0 part must be split off by the caller".into(),
            ));
        }
        if mi.degree() % 2 == 1 {
            return Err(Error::Contract(format!(
                "matrix_exp_form: odd-degree term {mi:?} in an even form"
            )));
        }
        if m.nrows() != rank || m.ncols() != rank {
            return Err(Error::Config(format!(
                "matrix_exp_form: coefficient is {}x{}, expected rank {rank}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let dim = omega.dim();
    let mut result =
        MatrixPointForm::from_terms(dim, [(MultiIndex::EMPTY, CMat::identity(rank, rank))]);
    let mut power = omega.clone();
    let mut factorial = 1.0;
    let mut k = 1;
    while !power.is_empty() && 2 * k <= dim {
        factorial *= k as f64;
        result.add_scaled(&power, Complex64::new(1.0 / factorial, 0.0));
        power = power.wedge(omega);
        k += 1;
    }
    Ok(result)
}
