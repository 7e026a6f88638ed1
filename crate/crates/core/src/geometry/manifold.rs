//! The three scenario manifolds and their chart data.
//!
//! S² carries two stereographic charts: the north chart `z = (p₁ + ip₂)/(1 + p₃)`
//! and the south chart `z' = 1/z`, which is orientation compatible. Both see
//! the round metric as `λ²δ` with `λ = 2/(1 + r²)`. T² is one periodic chart
//! on the unit square with the flat metric. S²×S² uses the four product charts.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::numerics::{smoothstep5, smoothstep5_deriv};

/// Half-width of the S² chart parameter box.
pub const SPHERE_BOX: f64 = 1.75;
/// Polar angle at which the north partition weight starts to drop.
pub const POU_THETA0: f64 = std::f64::consts::FRAC_PI_3;
/// Polar angle beyond which the north partition weight is zero.
pub const POU_THETA1: f64 = 2.0 * std::f64::consts::FRAC_PI_3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldId {
    S2,
    T2,
    S2xS2,
}

impl ManifoldId {
    pub fn dim(self) -> usize {
        match self {
            ManifoldId::S2 | ManifoldId::T2 => 2,
            ManifoldId::S2xS2 => 4,
        }
    }

    pub fn chart_count(self) -> usize {
        match self {
            ManifoldId::S2 => 2,
            ManifoldId::T2 => 1,
            ManifoldId::S2xS2 => 4,
        }
    }

    /// Euler characteristic declared for the scenario manifold.
    pub fn declared_euler_characteristic(self) -> i64 {
        match self {
            ManifoldId::S2 => 2,
            ManifoldId::T2 => 0,
            ManifoldId::S2xS2 => 4,
        }
    }

    /// Per-axis `(lo, hi, periodic)` of a chart box.
    pub fn chart_box(self) -> Vec<(f64, f64, bool)> {
        match self {
            ManifoldId::T2 => vec![(0.0, 1.0, true); 2],
            ManifoldId::S2 => vec![(-SPHERE_BOX, SPHERE_BOX, false); 2],
            ManifoldId::S2xS2 => vec![(-SPHERE_BOX, SPHERE_BOX, false); 4],
        }
    }

    /// For S²×S²: the S² chart of each factor.
    pub fn factor_charts(self, chart: usize) -> [usize; 2] {
        [chart / 2, chart % 2]
    }

    pub fn partition_weight(self, chart: usize, x: &[f64]) -> f64 {
        match self {
            ManifoldId::T2 => 1.0,
            ManifoldId::S2 => sphere_pou(chart, x[0], x[1]),
            ManifoldId::S2xS2 => {
                let [c1, c2] = self.factor_charts(chart);
                sphere_pou(c1, x[0], x[1]) * sphere_pou(c2, x[2], x[3])
            }
        }
    }

    /// Coordinates of the same physical point in chart `to`, or `None` when
    /// the point lies outside that chart's domain.
    pub fn transition(self, from: usize, to: usize, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            ManifoldId::T2 => Some(x.iter().map(|v| v.rem_euclid(1.0)).collect()),
            ManifoldId::S2 => sphere_transition(from, to, x[0], x[1]).map(|(a, b)| vec![a, b]),
            ManifoldId::S2xS2 => {
                let [f1, f2] = self.factor_charts(from);
                let [t1, t2] = self.factor_charts(to);
                let (a, b) = sphere_transition(f1, t1, x[0], x[1])?;
                let (c, d) = sphere_transition(f2, t2, x[2], x[3])?;
                Some(vec![a, b, c, d])
            }
        }
    }

    /// Jacobian `∂x_to/∂x_from` of [`Self::transition`].
    pub fn transition_jacobian(self, from: usize, to: usize, x: &[f64]) -> Option<DMatrix<f64>> {
        match self {
            ManifoldId::T2 => Some(DMatrix::identity(2, 2)),
            ManifoldId::S2 => {
                let j = sphere_transition_jacobian(from, to, x[0], x[1])?;
                Some(DMatrix::from_row_slice(2, 2, &j))
            }
            ManifoldId::S2xS2 => {
                let [f1, f2] = self.factor_charts(from);
                let [t1, t2] = self.factor_charts(to);
                let a = sphere_transition_jacobian(f1, t1, x[0], x[1])?;
                let b = sphere_transition_jacobian(f2, t2, x[2], x[3])?;
                let mut m = DMatrix::zeros(4, 4);
                m.view_mut((0, 0), (2, 2)).copy_from_slice(&[a[0], a[2], a[1], a[3]]);
                m.view_mut((2, 2), (2, 2)).copy_from_slice(&[b[0], b[2], b[1], b[3]]);
                Some(m)
            }
        }
    }

    /// Scale factors of the conformal metric, one per axis
    /// (`g = diag(λ_k²)`); also the coordinate → orthonormal-frame factor.
    pub fn conformal_factors(self, x: &[f64]) -> Vec<f64> {
        match self {
            ManifoldId::T2 => vec![1.0, 1.0],
            ManifoldId::S2 => {
                let l = sphere_lambda(x[0], x[1]);
                vec![l, l]
            }
            ManifoldId::S2xS2 => {
                let l1 = sphere_lambda(x[0], x[1]);
                let l2 = sphere_lambda(x[2], x[3]);
                vec![l1, l1, l2, l2]
            }
        }
    }

    pub fn metric(self, x: &[f64]) -> DMatrix<f64> {
        let f = self.conformal_factors(x);
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            f.len(),
            f.iter().map(|l| l * l),
        ))
    }

    /// Embedded position (unit sphere in R³ per S² factor; the square for T²).
    pub fn embed(self, chart: usize, x: &[f64]) -> Vec<f64> {
        match self {
            ManifoldId::T2 => x.iter().map(|v| v.rem_euclid(1.0)).collect(),
            ManifoldId::S2 => sphere_embed(chart, x[0], x[1]).to_vec(),
            ManifoldId::S2xS2 => {
                let [c1, c2] = self.factor_charts(chart);
                let mut p = sphere_embed(c1, x[0], x[1]).to_vec();
                p.extend(sphere_embed(c2, x[2], x[3]));
                p
            }
        }
    }

    /// Chart coordinates of an embedded point, when the chart covers it.
    pub fn chart_coords(self, chart: usize, p: &[f64]) -> Option<Vec<f64>> {
        match self {
            ManifoldId::T2 => Some(p.to_vec()),
            ManifoldId::S2 => sphere_chart_coords(chart, p).map(|(a, b)| vec![a, b]),
            ManifoldId::S2xS2 => {
                let [c1, c2] = self.factor_charts(chart);
                let (a, b) = sphere_chart_coords(c1, &p[..3])?;
                let (c, d) = sphere_chart_coords(c2, &p[3..])?;
                Some(vec![a, b, c, d])
            }
        }
    }
}

pub fn sphere_lambda(x: f64, y: f64) -> f64 {
    2.0 / (1.0 + x * x + y * y)
}

/// Polar angle measured from the chart's own center.
fn chart_polar_angle(x: f64, y: f64) -> f64 {
    2.0 * (x * x + y * y).sqrt().atan()
}

/// Partition weight of an S² chart: `1 − s((θ − θ₀)/(θ₁ − θ₀))` in the polar
/// angle from the chart center. The two weights sum to one because the south
/// chart's polar angle is `π − θ` and the profile is antisymmetric.
pub fn sphere_pou(_chart: usize, x: f64, y: f64) -> f64 {
    let theta = chart_polar_angle(x, y);
    1.0 - smoothstep5((theta - POU_THETA0) / (POU_THETA1 - POU_THETA0))
}

/// Gradient of [`sphere_pou`] in chart coordinates.
pub fn sphere_pou_grad(x: f64, y: f64) -> [f64; 2] {
    let r = (x * x + y * y).sqrt();
    if r == 0.0 {
        return [0.0, 0.0];
    }
    let theta = 2.0 * r.atan();
    let w = POU_THETA1 - POU_THETA0;
    let dtheta_dr = 2.0 / (1.0 + r * r);
    let ds = -smoothstep5_deriv((theta - POU_THETA0) / w) / w * dtheta_dr;
    [ds * x / r, ds * y / r]
}

/// Both sphere transitions are the inversion `(x, y) ↦ (x, −y)/r²`.
pub fn sphere_transition(from: usize, to: usize, x: f64, y: f64) -> Option<(f64, f64)> {
    if from == to {
        return Some((x, y));
    }
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return None;
    }
    Some((x / r2, -y / r2))
}

/// Row-major 2×2 Jacobian of [`sphere_transition`].
pub fn sphere_transition_jacobian(from: usize, to: usize, x: f64, y: f64) -> Option<[f64; 4]> {
    if from == to {
        return Some([1.0, 0.0, 0.0, 1.0]);
    }
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return None;
    }
    let r4 = r2 * r2;
    Some([(y * y - x * x) / r4, -2.0 * x * y / r4, 2.0 * x * y / r4, (y * y - x * x) / r4])
}

pub fn sphere_embed(chart: usize, x: f64, y: f64) -> [f64; 3] {
    // the south chart is the north chart composed with z ↦ 1/z
    let (x, y) = if chart == 0 {
        (x, y)
    } else {
        let r2 = x * x + y * y;
        if r2 == 0.0 {
            return [0.0, 0.0, -1.0];
        }
        (x / r2, -y / r2)
    };
    let r2 = x * x + y * y;
    let d = 1.0 + r2;
    [2.0 * x / d, 2.0 * y / d, (1.0 - r2) / d]
}

pub fn sphere_chart_coords(chart: usize, p: &[f64]) -> Option<(f64, f64)> {
    let (p1, p2, p3) = (p[0], p[1], p[2]);
    if chart == 0 {
        (p3 > -1.0).then(|| (p1 / (1.0 + p3), p2 / (1.0 + p3)))
    } else {
        (p3 < 1.0).then(|| (p1 / (1.0 - p3), -p2 / (1.0 - p3)))
    }
}
