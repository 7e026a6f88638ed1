use std::f64::consts::PI;

use num_complex::Complex64;

use super::connection::Connection;
use crate::error::{Error, Result};
use crate::forms::{matrix_exp_form, GradingTag, MatrixPointForm, MultiIndex, PointForm, ScalarPointForm};
use crate::linalg::I;

/// `√−1/2π`.
pub fn chern_constant() -> Complex64 {
    I / (2.0 * PI)
}

/// `tr exp(cR)` or `tr_s exp(cR)` with `c = √−1/2π`.
pub fn chern_character_form(
    curvature: &MatrixPointForm,
    rank: usize,
    grading: Option<&GradingTag>,
) -> Result<ScalarPointForm> {
    let e = matrix_exp_form(&curvature.scaled(chern_constant()), rank)?;
    match grading {
        None => Ok(e.trace()),
        Some(g) => g.supertrace(&e),
    }
}

/// Chern character of a connection at one point.
pub fn chern_character(
    conn: &dyn Connection,
    chart: usize,
    x: &[f64],
    grading: Option<&GradingTag>,
) -> Result<ScalarPointForm> {
    let j = conn.jet(chart, x)?;
    chern_character_form(&j.curvature(), conn.rank(), grading)
}

/// Top-degree coefficient of `tr exp(cR)`: `cⁿ/n! · tr(R^{∧n})` where
/// `2n` is the dimension.
pub fn chern_top(curvature: &MatrixPointForm) -> Complex64 {
    let dim = curvature.dim();
    let n = dim / 2;
    if dim % 2 == 1 || curvature.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let mut power = curvature.clone();
    for _ in 1..n.saturating_sub(1) {
        power = power.wedge(curvature);
    }
    let tr = if n == 1 {
        power.trace().top_or_zero()
    } else {
        power.trace_wedge(curvature).top_or_zero()
    };
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    chern_constant().powu(n as u32) * tr / factorial
}

/// Top coefficient of `ch(R₊) − ch(R₋)`.
pub fn graded_chern_top(r_plus: &MatrixPointForm, r_minus: &MatrixPointForm) -> Complex64 {
    chern_top(r_plus) - chern_top(r_minus)
}

/// Pfaffian of a skew matrix of commuting 2-forms, by expansion along the
/// first row.
fn pfaffian(entries: &[Vec<ScalarPointForm>], idx: &[usize], dim: usize) -> ScalarPointForm {
    if idx.is_empty() {
        return PointForm::constant(dim, Complex64::new(1.0, 0.0));
    }
    let first = idx[0];
    let mut out = PointForm::zero(dim);
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = entries[first][idx[k]].wedge(&pfaffian(entries, &rest, dim));
        out.add_scaled(&term, Complex64::new(sign, 0.0));
    }
    out
}

/// `Pf(R/2π)` for a metric connection on an oriented real bundle, given its
/// curvature in an orthonormal frame.
pub fn euler_form(curvature: &MatrixPointForm, rank: usize) -> Result<ScalarPointForm> {
    const TOL: f64 = 1e-10;
    if rank % 2 == 1 {
        return Err(Error::Contract(format!("Euler form of odd rank {rank}")));
    }
    let dim = curvature.dim();
    let mut entries = vec![vec![PointForm::zero(dim); rank]; rank];
    for (mi, m) in curvature.terms() {
        if mi.degree() != 2 {
            return Err(Error::Contract(format!("curvature term of degree {}", mi.degree())));
        }
        for i in 0..rank {
            for j in 0..rank {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if (a + b).norm() > TOL || a.im.abs() > TOL {
                    return Err(Error::Contract(format!(
                        "curvature is not real skew at ({i}, {j}): {a}, {b}"
                    )));
                }
                entries[i][j].add_term(*mi, &Complex64::new(a.re / (2.0 * PI), 0.0), 1.0.into());
            }
        }
    }
    let idx: Vec<usize> = (0..rank).collect();
    Ok(pfaffian(&entries, &idx, dim).pruned())
}

/// The top-degree part of a pointwise form as a scalar.
pub fn top_part(f: &ScalarPointForm) -> Complex64 {
    f.get(MultiIndex::top(f.dim())).copied().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::connection::{FlatConnection, LeviCivita};
    use crate::geometry::ManifoldId;
    use crate::linalg::CMat;

    #[test]
    fn flat_bundles() {
        let flat = FlatConnection { dim: 2, rank: 3 };
        let ch = chern_character(&flat, 0, &[0.1, 0.2], None).unwrap();
        assert_eq!(ch.terms().len(), 1);
        assert_eq!(top_part(&ch), Complex64::new(0.0, 0.0));
        assert_eq!(ch.get(MultiIndex::EMPTY), Some(&Complex64::new(3.0, 0.0)));

        let graded = GradingTag::from_block_ranks(2, 2);
        let flat4 = FlatConnection { dim: 2, rank: 4 };
        let ch = chern_character(&flat4, 0, &[0.0, 0.0], Some(&graded)).unwrap();
        assert!(ch.max_abs() == 0.0);
    }

    #[test]
    fn top_shortcut_agrees_with_full_series() {
        let lc = LeviCivita { manifold: ManifoldId::S2xS2 };
        let r = lc.jet(1, &[0.3, -0.2, 0.8, 0.5]).unwrap().curvature();
        // a non-commuting perturbation so R∧R is not trivially diagonal
        let mut p = CMat::zeros(4, 4);
        p[(0, 2)] = Complex64::new(0.3, 0.1);
        p[(3, 1)] = Complex64::new(-0.2, 0.4);
        let r = r.plus(&PointForm::from_terms(4, [(MultiIndex::new(&[0, 2], 4).unwrap(), p)]));
        let full = top_part(&chern_character_form(&r, 4, None).unwrap());
        assert!((full - chern_top(&r)).norm() < 1e-14);
    }

    #[test]
    fn pfaffian_of_product_curvature() {
        let lc = LeviCivita { manifold: ManifoldId::S2xS2 };
        let x = [0.3, -0.2, 0.8, 0.5];
        let r = lc.jet(0, &x).unwrap().curvature();
        let e = euler_form(&r, 4).unwrap();
        let l1 = crate::geometry::manifold::sphere_lambda(x[0], x[1]);
        let l2 = crate::geometry::manifold::sphere_lambda(x[2], x[3]);
        let expect = (l1 * l1 / (2.0 * PI)) * (l2 * l2 / (2.0 * PI));
        assert!((top_part(&e).re - expect).abs() < 1e-14);
    }

    #[test]
    fn non_skew_curvature_rejected() {
        let m = CMat::identity(2, 2);
        let r = PointForm::from_terms(2, [(MultiIndex::top(2), m)]);
        assert!(matches!(euler_form(&r, 2), Err(Error::Contract(_))));
    }
}
