use num_complex::Complex64;

use super::chern::chern_constant;
use super::map::{BundleMap, MapJet};
use crate::error::{Error, Result};
use crate::forms::{MatrixPointForm, ScalarPointForm};
use crate::geometry::{integrate_boundary_sphere, BoundarySphere};
use crate::linalg::inverse_with_condition;

/// Largest distance from an integer accepted for a degree integral.
pub const INTEGRALITY_TOL: f64 = 0.05;

/// `tr((v⁻¹dv)^{∧(2n−1)})` from a jet of `v`.
pub fn degree_integrand(jet: &MapJet, n: usize) -> Result<ScalarPointForm> {
    let (vinv, _) = inverse_with_condition(&jet.value).ok_or(Error::NonIntegralDegree {
        value: f64::NAN,
        residual: f64::INFINITY,
    })?;
    let g: MatrixPointForm = jet.differential().map(|m| &vinv * m);
    let mut power = g.clone();
    for _ in 1..(2 * n - 1) {
        power = power.wedge(&g);
    }
    Ok(power.trace())
}

/// `(−1)^{n−1}·(−cⁿ(n−1)!/(2n−1)!)`, normalizing the integrand so that
/// `z ↦ zᵏ` has degree `k` for `n = 1`.
pub fn degree_normalization(n: usize) -> Complex64 {
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    -chern_constant().powu(n as u32) * (sign * fact(n - 1) / fact(2 * n - 1))
}

/// Normalized degree integral over a small sphere, before rounding.
pub fn degree_value(v: &dyn BundleMap, sphere: &BoundarySphere) -> Result<Complex64> {
    let dim = v.dim();
    if dim % 2 == 1 || sphere.dim() != dim {
        return Err(Error::Config(format!("degree of a map on a {dim}-manifold around a {}-ball", sphere.dim())));
    }
    let n = dim / 2;
    let integral = integrate_boundary_sphere(
        |x| degree_integrand(&v.jet(sphere.chart, x)?, n).map(|f| f.part(dim - 1)),
        sphere,
    )?;
    Ok(integral * degree_normalization(n))
}

/// Local degree of `v` at the zero enclosed by `sphere`.
pub fn degree_at_zero(v: &dyn BundleMap, sphere: &BoundarySphere) -> Result<i64> {
    let z = degree_value(v, sphere)?;
    let k = z.re.round();
    let residual = (z.re - k).abs().max(z.im.abs());
    if !(residual < INTEGRALITY_TOL) {
        return Err(Error::NonIntegralDegree { value: z.re, residual });
    }
    Ok(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::map::FnMap;
    use crate::geometry::ManifoldId;
    use crate::linalg::CMat;

    fn winding(k: i32) -> impl BundleMap {
        FnMap {
            dim: 2,
            rank_plus: 1,
            rank_minus: 1,
            f: move |_: usize, x: &[f64]| {
                let z = Complex64::new(x[0] - 0.1, x[1] + 0.2);
                CMat::from_element(1, 1, if k >= 0 { z.powi(k) } else { z.conj().powi(-k) })
            },
        }
    }

    #[test]
    fn winding_numbers() {
        let s = BoundarySphere::new(ManifoldId::S2, 0, vec![0.1, -0.2], 0.3, 64, 1.0).unwrap();
        for k in [-2, -1, 1, 3] {
            assert_eq!(degree_at_zero(&winding(k), &s).unwrap(), k as i64);
        }
    }

    #[test]
    fn quaternion_map_has_degree_one() {
        // x₀ + x₁i + x₂j + x₃k as a 2×2 complex matrix
        let q = FnMap {
            dim: 4,
            rank_plus: 2,
            rank_minus: 2,
            f: |_: usize, x: &[f64]| {
                CMat::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(x[0], x[1]),
                        Complex64::new(x[2], x[3]),
                        Complex64::new(-x[2], x[3]),
                        Complex64::new(x[0], -x[1]),
                    ],
                )
            },
        };
        let s = BoundarySphere::new(ManifoldId::S2xS2, 0, vec![0.0; 4], 0.5, 24, 1.0).unwrap();
        let d = degree_value(&q, &s).unwrap();
        assert!((d.norm() - 1.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn sphere_through_zero_is_rejected() {
        let s = BoundarySphere::new(ManifoldId::S2, 0, vec![0.1, 0.1], 0.3, 64, 1.0).unwrap();
        // the zero of `winding` at (0.1, −0.2) lies on this circle
        assert!(matches!(degree_at_zero(&winding(1), &s), Err(Error::NonIntegralDegree { .. })));
    }
}
