use num_complex::Complex64;

use super::chern::chern_constant;
use super::connection::ConnectionJet;
use super::deformed::{GradedConnection, GradedJet};
use crate::error::{Error, Result};
use crate::forms::{matrix_exp_form, MultiIndex, PointForm, ScalarPointForm};
use crate::geometry::{integrate_many, Atlas};
use crate::linalg::CMat;
use crate::numerics::{fine_derivative, gauss_legendre, FINE_STEP};

/// Coarse and fine node counts for the time integral.
pub const T_NODES: (usize, usize) = (8, 16);
/// Largest accepted change between the coarse and fine time rules.
pub const T_CONVERGENCE_TOL: f64 = 1e-8;

/// `∫₀¹ (t(1 − t))^{n−1} dt = (n−1)!²/(2n−1)!`.
pub fn beta_coefficient(n: usize) -> f64 {
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    fact(n - 1).powi(2) / fact(2 * n - 1)
}

/// `∫₀¹ tr[θ ∧ exp(cR_t)] dt` for one half, where `∇_t = ∇₀ + tθ`,
/// truncated to degree `dim − 1`.
fn half_transgression(j0: &ConnectionJet, j1: &ConnectionJet, rule: &[(f64, f64)]) -> Result<ScalarPointForm> {
    let dim = j0.dim();
    let theta = j1.omega.minus(&j0.omega);
    let dtheta = j1.domega.minus(&j0.domega);
    let c = chern_constant();
    let mut out = PointForm::zero(dim);
    for &(t, w) in rule {
        let mut omega_t = j0.omega.clone();
        omega_t.add_scaled(&theta, t.into());
        let mut r = j0.domega.clone();
        r.add_scaled(&dtheta, t.into());
        let r = r.plus(&omega_t.wedge(&omega_t));
        let e = matrix_exp_form(&r.scaled(c), j0.rank)?;
        out.add_scaled(&theta.wedge_with(&e, |a: &CMat, b: &CMat| (a * b).trace()), w.into());
    }
    Ok(out.part(dim - 1))
}

/// The transgression form `T = ∫₀¹ tr_s[θ ∧ exp(cR_t)] dt` at a point,
/// so that `ch(∇₁) − ch(∇₀) = c·dT` in top degree.
pub fn transgression_form(j0: &GradedJet, j1: &GradedJet, t_nodes: usize) -> Result<ScalarPointForm> {
    let rule = gauss_legendre(t_nodes, 0.0, 1.0);
    let plus = half_transgression(&j0.plus, &j1.plus, &rule)?;
    let minus = half_transgression(&j0.minus, &j1.minus, &rule)?;
    Ok(plus.minus(&minus))
}

/// `(−1)^k` such that `dx_k ∧ dx_{top∖k} = sign · dx_top`.
fn leading_sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Top coefficient of `dT` at a point, for the coarse and fine time rules,
/// by fourth-order differences of `T` with step [`FINE_STEP`].
pub fn transgression_derivative(
    c0: &dyn GradedConnection,
    c1: &dyn GradedConnection,
    chart: usize,
    x: &[f64],
) -> Result<[Complex64; 2]> {
    let dim = c0.dim();
    let mut err = None;
    let components = |y: &[f64]| -> Result<CMat> {
        let mut v = CMat::zeros(2 * dim, 1);
        let mut eval = || -> Result<()> {
            let j0 = c0.graded_jet(chart, y)?;
            let j1 = c1.graded_jet(chart, y)?;
            for (r, nodes) in [T_NODES.0, T_NODES.1].into_iter().enumerate() {
                let t = transgression_form(&j0, &j1, nodes)?;
                for k in 0..dim {
                    let omit = MultiIndex::from_mask(MultiIndex::top(dim).mask() & !(1 << k));
                    v[(r * dim + k, 0)] = t.get(omit).copied().unwrap_or_default();
                }
            }
            Ok(())
        };
        eval().map(|_| v)
    };
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for k in 0..dim {
        let d = fine_derivative(
            |y| {
                components(y).unwrap_or_else(|e| {
                    err.get_or_insert(e);
                    CMat::zeros(2 * dim, 1)
                })
            },
            x,
            k,
            FINE_STEP,
        );
        for (r, o) in out.iter_mut().enumerate() {
            *o += d[(r * dim + k, 0)] * leading_sign(k);
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `−c ∫ m·dT`, which equals `∫ m·ch(∇₀) − ∫ m·ch(∇₁)` for graded Chern
/// characters. `mask(chart, x)` weights the integrand; nodes with zero
/// weight are skipped. Fails if the 8- and 16-node time rules disagree by
/// more than [`T_CONVERGENCE_TOL`].
pub fn transgression_value<M>(
    c0: &dyn GradedConnection,
    c1: &dyn GradedConnection,
    atlas: &Atlas,
    mask: M,
) -> Result<Complex64>
where
    M: Fn(usize, &[f64]) -> f64,
{
    if c0.dim() != atlas.dim() || c1.dim() != atlas.dim() || c0.ranks() != c1.ranks() {
        return Err(Error::Config("transgression between incompatible connections".into()));
    }
    let c = chern_constant();
    let sums = integrate_many(atlas, 2, |chart, _node, x, acc| {
        let m = mask(chart, x);
        if m == 0.0 {
            return Ok(());
        }
        let d = transgression_derivative(c0, c1, chart, x)?;
        acc[0] = -c * d[0] * m;
        acc[1] = -c * d[1] * m;
        Ok(())
    })?;
    let gap = (sums[0] - sums[1]).norm();
    if gap > T_CONVERGENCE_TOL {
        return Err(Error::TransgressionNotConverged(gap));
    }
    Ok(sums[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::MatrixPointForm;

    fn one_form(dim: usize, coefs: &[CMat]) -> MatrixPointForm {
        PointForm::from_terms(dim, coefs.iter().enumerate().map(|(k, m)| (MultiIndex::single(k), m.clone())))
    }

    #[test]
    fn time_quadrature_matches_beta_oracle() {
        for n in 1..=4 {
            let rule = gauss_legendre(8, 0.0, 1.0);
            let q: f64 = rule.iter().map(|&(t, w)| w * (t * (1.0 - t)).powi(n as i32 - 1)).sum();
            assert!((q - beta_coefficient(n)).abs() < 1e-14);
        }
        assert!((beta_coefficient(2) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn pure_gauge_transgression_is_a_beta_multiple() {
        // ∇₁ = d + θ with θ = g⁻¹dg: dθ = −θ∧θ and R_t = (t² − t)θ∧θ
        let dim = 4;
        let coefs: Vec<CMat> = (0..dim)
            .map(|k| {
                CMat::from_fn(2, 2, |i, j| Complex64::new(0.1 * (i + 2 * j + k) as f64 - 0.2, 0.05 * k as f64))
            })
            .collect();
        let theta = one_form(dim, &coefs);
        let j0 = ConnectionJet::flat(dim, 2);
        let j1 = ConnectionJet { omega: theta.clone(), domega: theta.wedge(&theta).scaled((-1.0).into()), rank: 2 };
        let graded0 = GradedJet { plus: j0.clone(), minus: ConnectionJet::flat(dim, 2) };
        let graded1 = GradedJet { plus: j1, minus: ConnectionJet::flat(dim, 2) };
        let t = transgression_form(&graded0, &graded1, 8).unwrap();
        let cube = theta.wedge(&theta).wedge(&theta).trace();
        // c^{n−1}(−1)^{n−1}/(n−1)! · B(n, n) with n = 2
        let expect = cube.scaled(-chern_constant() * beta_coefficient(2));
        assert!(t.minus(&expect).max_abs() < 1e-15);
        assert!(t.degrees() == vec![3]);
    }
}
