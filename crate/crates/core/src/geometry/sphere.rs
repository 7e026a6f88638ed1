use nalgebra::DMatrix;
use num_complex::Complex64;

use super::manifold::ManifoldId;
use crate::error::{Error, Result};
use crate::forms::{MultiIndex, ScalarPointForm};
use crate::numerics::{gauss_legendre, pairwise_sum_c};

/// A coordinate sphere `|x − center| = radius` inside one chart,
/// parametrized by hyperspherical angles.
#[derive(Clone, Debug)]
pub struct BoundarySphere {
    pub chart: usize,
    pub center: Vec<f64>,
    pub radius: f64,
    /// Trapezoid nodes on the azimuthal angle; polar angles get half as many
    /// Gauss–Legendre nodes (at least 8).
    pub nodes: usize,
    orientation: f64,
}

/// Point on the unit sphere `S^m` and its angle derivatives.
fn hyperspherical(phi: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = phi.len();
    let mut u = vec![0.0; m + 1];
    let mut du = vec![vec![0.0; m + 1]; m];
    for j in 0..=m {
        let tail = if j < m { phi[j].cos() } else { 1.0 };
        let prod: f64 = phi[..j].iter().map(|p| p.sin()).product();
        u[j] = prod * tail;
        for k in 0..j {
            let others: f64 = phi[..j]
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, p)| p.sin())
                .product();
            du[k][j] = others * phi[k].cos() * tail;
        }
        if j < m {
            du[j][j] = -prod * phi[j].sin();
        }
    }
    (u, du)
}

impl BoundarySphere {
    /// Validates that the sphere stays inside the chart box and below the
    /// injectivity bound declared by the caller.
    pub fn new(
        manifold: ManifoldId,
        chart: usize,
        center: Vec<f64>,
        radius: f64,
        nodes: usize,
        injectivity_bound: f64,
    ) -> Result<Self> {
        let dim = manifold.dim();
        if center.len() != dim || chart >= manifold.chart_count() {
            return Err(Error::Config(format!("sphere center {center:?} in chart {chart}")));
        }
        if !(radius > 0.0) || radius >= injectivity_bound {
            return Err(Error::Config(format!(
                "sphere radius {radius} not in (0, {injectivity_bound})"
            )));
        }
        if nodes < 4 {
            return Err(Error::Config(format!("{nodes} sphere nodes")));
        }
        for (k, (&(lo, hi, periodic), c)) in manifold.chart_box().iter().zip(&center).enumerate() {
            if !periodic && (c - radius < lo || c + radius > hi) {
                return Err(Error::Config(format!(
                    "sphere leaves chart {chart} along axis {k}: [{}, {}] vs [{lo}, {hi}]",
                    c - radius,
                    c + radius
                )));
            }
        }
        // induced boundary orientation: outward normal first
        let probe: Vec<f64> = (0..dim - 1).map(|k| 0.7 + 0.1 * k as f64).collect();
        let (u, du) = hyperspherical(&probe);
        let mut frame = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            frame[(i, 0)] = u[i];
            for (k, col) in du.iter().enumerate() {
                frame[(i, k + 1)] = col[i];
            }
        }
        let orientation = frame.determinant().signum();
        Ok(BoundarySphere { chart, center, radius, nodes, orientation })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `(point, tangent columns ∂x/∂φ_k, weight)` triples.
    pub fn quadrature(&self) -> Vec<(Vec<f64>, Vec<Vec<f64>>, f64)> {
        let m = self.dim() - 1;
        let azimuth: Vec<(f64, f64)> = (0..self.nodes)
            .map(|k| {
                let h = std::f64::consts::TAU / self.nodes as f64;
                (k as f64 * h, h)
            })
            .collect();
        let polar = gauss_legendre((self.nodes / 2).max(8), 0.0, std::f64::consts::PI);
        let mut rules: Vec<&[(f64, f64)]> = vec![&polar; m - 1];
        rules.push(&azimuth);
        let mut out = Vec::new();
        let mut idx = vec![0usize; m];
        loop {
            let phi: Vec<f64> = idx.iter().zip(&rules).map(|(&i, r)| r[i].0).collect();
            let w: f64 = idx.iter().zip(&rules).map(|(&i, r)| r[i].1).product();
            let (u, du) = hyperspherical(&phi);
            let x = self.center.iter().zip(&u).map(|(c, v)| c + self.radius * v).collect();
            let t = du.iter().map(|col| col.iter().map(|v| self.radius * v).collect()).collect();
            out.push((x, t, w));
            let mut k = m;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < rules[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Pulls an `(dim − 1)`-form back to the sphere and integrates it with the
/// induced boundary orientation.
pub fn integrate_boundary_sphere<F>(omega: F, s: &BoundarySphere) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Result<ScalarPointForm>,
{
    let dim = s.dim();
    let m = dim - 1;
    let mut values = Vec::new();
    for (x, tangents, w) in s.quadrature() {
        let form = omega(&x)?;
        let mut pulled = Complex64::new(0.0, 0.0);
        for (mi, coef) in form.terms() {
            if mi.degree() != m {
                return Err(Error::Contract(format!(
                    "boundary integrand has a degree-{} part, expected {m}",
                    mi.degree()
                )));
            }
            let rows = mi.indices();
            let minor = DMatrix::from_fn(m, m, |r, c| tangents[c][rows[r]]);
            pulled += coef * minor.determinant();
        }
        values.push(pulled * w * s.orientation);
    }
    Ok(pairwise_sum_c(&values))
}

/// Convenience: the multi-index omitting one axis.
pub fn omit_axis(dim: usize, axis: usize) -> MultiIndex {
    MultiIndex::from_mask(MultiIndex::top(dim).mask() & !(1 << axis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::PointForm;

    fn dtheta(x: &[f64]) -> Result<ScalarPointForm> {
        let r2 = x[0] * x[0] + x[1] * x[1];
        Ok(PointForm::from_terms(
            2,
            [
                (MultiIndex::single(0), Complex64::from(-x[1] / r2)),
                (MultiIndex::single(1), Complex64::from(x[0] / r2)),
            ],
        ))
    }

    #[test]
    fn winding_form_on_unit_circle() {
        let s = BoundarySphere::new(ManifoldId::T2, 0, vec![0.0, 0.0], 1.0, 64, 2.0).unwrap();
        let v = integrate_boundary_sphere(dtheta, &s).unwrap();
        assert!((v.re - std::f64::consts::TAU).abs() < 1e-10);
    }

    #[test]
    fn three_sphere_volume() {
        // ι_r(dx0∧dx1∧dx2∧dx3)/r restricted to the sphere is its volume form
        let r = 0.6;
        let s = BoundarySphere::new(ManifoldId::S2xS2, 0, vec![0.1, 0.0, -0.2, 0.3], r, 32, 1.0)
            .unwrap();
        let c = s.center.clone();
        let vol = |x: &[f64]| -> Result<ScalarPointForm> {
            let y: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
            Ok(PointForm::from_terms(
                4,
                (0..4).map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    (omit_axis(4, k), Complex64::from(sign * y[k] / r))
                }),
            ))
        };
        let v = integrate_boundary_sphere(vol, &s).unwrap().re;
        let exact = 2.0 * std::f64::consts::PI.powi(2) * r.powi(3);
        assert!((v - exact).abs() / exact < 1e-5, "{v} vs {exact}");
    }

    #[test]
    fn exact_forms_integrate_to_zero() {
        // d(sin(x0)·x1)
        let s = BoundarySphere::new(ManifoldId::S2, 0, vec![0.2, -0.1], 0.5, 48, 1.0).unwrap();
        let df = |x: &[f64]| -> Result<ScalarPointForm> {
            Ok(PointForm::from_terms(
                2,
                [
                    (MultiIndex::single(0), Complex64::from(x[0].cos() * x[1])),
                    (MultiIndex::single(1), Complex64::from(x[0].sin())),
                ],
            ))
        };
        assert!(integrate_boundary_sphere(df, &s).unwrap().norm() < 1e-8);
    }

    #[test]
    fn sphere_leaving_chart_is_rejected() {
        assert!(BoundarySphere::new(ManifoldId::S2, 0, vec![1.6, 0.0], 0.5, 16, 1.0).is_err());
        assert!(BoundarySphere::new(ManifoldId::S2, 0, vec![0.0, 0.0], 1.2, 16, 1.0).is_err());
    }
}
