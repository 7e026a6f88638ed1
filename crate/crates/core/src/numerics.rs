//! Small numerical helpers shared by every module: deterministic summation,
//! smooth transition profiles, Gauss–Legendre rules and finite-difference
//! stencils.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::Coeff;

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// slice length, so results are reproducible for a fixed evaluation order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Complex variant of [`pairwise_sum`].
pub fn pairwise_sum_c(values: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_c(&values[..mid]) + pairwise_sum_c(&values[mid..])
}

/// Quintic smoothstep `6u^5 - 15u^4 + 10u^3`, clamped to `[0, 1]`.
/// C² across both ends.
pub fn smoothstep5(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        u * u * u * (u * (6.0 * u - 15.0) + 10.0)
    }
}

/// Derivative of [`smoothstep5`] with respect to `u`.
pub fn smoothstep5_deriv(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        30.0 * u * u * (u - 1.0) * (u - 1.0)
    }
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`, ordered by node.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).expect("n >= 1"));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut out: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect();
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out
}

/// Composite Gauss–Legendre rule over consecutive panels `breaks[i]..breaks[i+1]`.
pub fn composite_gauss_legendre(breaks: &[f64], per_panel: usize) -> Vec<(f64, f64)> {
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .flat_map(|w| gauss_legendre(per_panel, w[0], w[1]))
        .collect()
}

/// Centered finite-difference stencil order for first derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Stencil {
    Second,
    #[default]
    Fourth,
}

impl Stencil {
    pub fn order(self) -> u32 {
        match self {
            Stencil::Second => 2,
            Stencil::Fourth => 4,
        }
    }

    /// Fewest grid nodes per axis for which the stencil (including its
    /// one-sided boundary closures) is defined.
    pub fn min_nodes(self) -> usize {
        match self {
            Stencil::Second => 3,
            Stencil::Fourth => 5,
        }
    }

    /// `(index, weight)` pairs such that `f'(x_i) ≈ Σ weight·f[index] / h`.
    ///
    /// Periodic axes wrap; bounded axes fall back to one-sided closures of
    /// the same order near the ends.
    pub fn weights_at(self, i: usize, n: usize, periodic: bool) -> Vec<(usize, f64)> {
        let central: &[(isize, f64)] = match self {
            Stencil::Second => &[(-1, -0.5), (1, 0.5)],
            Stencil::Fourth => &[
                (-2, 1.0 / 12.0),
                (-1, -2.0 / 3.0),
                (1, 2.0 / 3.0),
                (2, -1.0 / 12.0),
            ],
        };
        let reach = match self {
            Stencil::Second => 1,
            Stencil::Fourth => 2,
        };
        let ii = i as isize;
        let nn = n as isize;
        if periodic {
            return central
                .iter()
                .map(|&(o, w)| ((ii + o).rem_euclid(nn) as usize, w))
                .collect();
        }
        if ii >= reach && ii < nn - reach {
            return central.iter().map(|&(o, w)| ((ii + o) as usize, w)).collect();
        }
        // one-sided closures; the right end mirrors the left with a sign flip
        let (from_left, k) = if ii < reach { (true, ii) } else { (false, nn - 1 - ii) };
        let closure: &[(isize, f64)] = match (self, k) {
            (Stencil::Second, _) => &[(0, -1.5), (1, 2.0), (2, -0.5)],
            (Stencil::Fourth, 0) => &[
                (0, -25.0 / 12.0),
                (1, 4.0),
                (2, -3.0),
                (3, 4.0 / 3.0),
                (4, -0.25),
            ],
            (Stencil::Fourth, _) => &[
                (-1, -0.25),
                (0, -5.0 / 6.0),
                (1, 1.5),
                (2, -0.5),
                (3, 1.0 / 12.0),
            ],
        };
        closure
            .iter()
            .map(|&(o, w)| {
                if from_left {
                    ((ii + o) as usize, w)
                } else {
                    ((ii - o) as usize, -w)
                }
            })
            .collect()
    }
}

/// Step used when differentiating point-evaluable fields.
pub const FINE_STEP: f64 = 1e-3;

/// Fourth-order centered derivative of a point-evaluable field along `axis`.
pub fn fine_derivative<T, F>(mut f: F, x: &[f64], axis: usize, h: f64) -> T
where
    F: FnMut(&[f64]) -> T,
    T: Coeff,
{
    let mut y = x.to_vec();
    let mut at = |delta: f64| {
        y[axis] = x[axis] + delta;
        f(&y)
    };
    let p1 = at(h);
    let m1 = at(-h);
    let p2 = at(2.0 * h);
    let m2 = at(-2.0 * h);
    let mut d = p1.zero_like();
    d.add_scaled(&p1, (2.0 / 3.0 / h).into());
    d.add_scaled(&m1, (-2.0 / 3.0 / h).into());
    d.add_scaled(&p2, (-1.0 / 12.0 / h).into());
    d.add_scaled(&m2, (1.0 / 12.0 / h).into());
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
    }

    #[test]
    fn smoothstep_is_c2_at_ends() {
        assert_eq!(smoothstep5(0.0), 0.0);
        assert_eq!(smoothstep5(1.0), 1.0);
        assert_eq!(smoothstep5(0.5), 0.5);
        assert!(smoothstep5_deriv(1e-6) < 1e-10);
        for k in 0..=10 {
            let u = k as f64 / 10.0;
            assert!((smoothstep5(u) + smoothstep5(1.0 - u) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(8, 0.0, 1.0);
        let s: f64 = rule.iter().map(|&(t, w)| w * t.powi(15)).sum();
        assert!((s - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn stencils_are_exact_on_low_degree_polynomials() {
        let n = 9;
        let h = 0.1;
        for stencil in [Stencil::Second, Stencil::Fourth] {
            let deg = stencil.order() as i32;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(deg)).collect();
            for i in 0..n {
                let d: f64 = stencil
                    .weights_at(i, n, false)
                    .iter()
                    .map(|&(j, w)| w * f[j])
                    .sum::<f64>()
                    / h;
                let exact = deg as f64 * (i as f64 * h).powi(deg - 1);
                assert!((d - exact).abs() < 1e-10, "{stencil:?} node {i}: {d} vs {exact}");
            }
        }
    }

    #[test]
    fn fine_derivative_of_sine() {
        let d: Complex64 = fine_derivative(|x: &[f64]| Complex64::from(x[0].sin()), &[0.3], 0, FINE_STEP);
        assert!((d.re - 0.3f64.cos()).abs() < 1e-12);
    }
}
