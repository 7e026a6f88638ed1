//! Tube integrals by explicit fiber quadrature, independent of the chart
//! grids, and the normal-bundle Euler identity on a zero component.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use super::check::CheckResult;
use super::tubes::{Locus, ZeroComponent};
use crate::bundle::{
    chern_character_form, euler_form, graded_chern_top, BlockConnection, Connection, DeformedConnection,
    FlatConnection, GradedConnection, GradedJet, TruncationField, TruncationProfile,
};
use crate::error::{Error, Result};
use crate::forms::{MultiIndex, ScalarPointForm};
use crate::geometry::{Atlas, ManifoldId};
use crate::linalg::CMat;
use crate::numerics::{composite_gauss_legendre, pairwise_sum_c};

use super::fields::{FiberCoordinate, PulledBackLine};

/// Radial Gauss–Legendre nodes per panel.
pub const RADIAL_NODES: usize = 6;
/// Trapezoid nodes in the fiber angle.
pub const ANGULAR_NODES: usize = 24;

/// Polar rule on the disk of radius `breaks.last()` with radial panels
/// split at `breaks`: offsets and weights (including the Jacobian `r`).
pub fn polar_disk_rule(breaks: &[f64], radial: usize, angular: usize) -> Vec<([f64; 2], f64)> {
    let rs = composite_gauss_legendre(breaks, radial);
    let h = TAU / angular as f64;
    let mut out = Vec::with_capacity(rs.len() * angular);
    for &(r, w) in &rs {
        for k in 0..angular {
            let phi = k as f64 * h;
            out.push(([r * phi.cos(), r * phi.sin()], w * r * h));
        }
    }
    out
}

/// Top coefficient of `ch(E₊) − ch(E₋)` for a connection at one point.
pub fn graded_top(conn: &dyn GradedConnection, chart: usize, x: &[f64]) -> Result<Complex64> {
    let (rp, rm) = conn.graded_curvature(chart, x)?;
    Ok(graded_chern_top(&rp, &rm))
}

/// Full graded Chern character form of a graded jet.
pub fn graded_form(jet: &GradedJet) -> Result<ScalarPointForm> {
    let (rp, rm) = jet.curvatures();
    let p = chern_character_form(&rp, jet.plus.rank, None)?;
    let m = chern_character_form(&rm, jet.minus.rank, None)?;
    Ok(p.minus(&m))
}

/// Integral of the top coefficient `f(chart, x)` over the tube of `comp`,
/// by a polar rule in the normal directions. For a slice the base factor is
/// integrated on a separate S² atlas of the given resolution.
pub fn localized_pairing<F>(
    manifold: ManifoldId,
    comp: &ZeroComponent,
    profile: TruncationProfile,
    base_resolution: usize,
    f: F,
) -> Result<Complex64>
where
    F: Fn(usize, &[f64]) -> Result<Complex64>,
{
    let rule = polar_disk_rule(&[0.0, profile.a, profile.b, comp.tube_radius], RADIAL_NODES, ANGULAR_NODES);
    let fiber = |chart: usize, base: &[f64]| -> Result<Complex64> {
        let mut values = Vec::with_capacity(rule.len());
        for (o, w) in &rule {
            let mut x = base.to_vec();
            x.push(comp.center[0] + o[0]);
            x.push(comp.center[1] + o[1]);
            values.push(f(chart, &x)? * *w);
        }
        Ok(pairwise_sum_c(&values))
    };
    match comp.locus {
        Locus::Point if manifold.dim() == 2 => fiber(comp.home, &[]),
        Locus::Point => Err(Error::Config(format!(
            "fiber quadrature around an isolated point needs a 2-manifold, got dimension {}",
            manifold.dim()
        ))),
        Locus::Slice => {
            let base = Atlas::new(ManifoldId::S2, base_resolution)?;
            let mut per_chart = Vec::new();
            for c in base.charts() {
                let chart = 2 * c.id + comp.home;
                let mut values = Vec::with_capacity(c.active_nodes().len());
                for &node in c.active_nodes() {
                    let b = c.grid.coords(node);
                    values.push(fiber(chart, &b)? * (c.partition_weight(node) * c.orientation * c.weight()));
                }
                per_chart.push(pairwise_sum_c(&values));
            }
            Ok(pairwise_sum_c(&per_chart))
        }
    }
}

/// `∫_X i*ch₂` and `∫_X e(N)·π_!(ch)` over a zero component `X ≅ S²` whose
/// tube is parametrized as `(base, fiber)` with the base on axes `0, 1` and
/// the fiber on axes `2, 3`.
pub struct NormalEulerParts {
    pub restricted: Complex64,
    pub euler_times_fiber: Complex64,
}

/// Computes both sides. `chart_of(base_chart)` picks the 4-dimensional
/// chart, `ch(chart, x)` is the graded Chern character form of the deformed
/// connection and `euler(chart, base)` the `dx∧dy` coefficient of the normal
/// Euler form. The fiber integral is skipped where the Euler form vanishes.
pub fn normal_euler_parts<C, Ch, E>(
    base_resolution: usize,
    breaks: &[f64],
    center: [f64; 2],
    chart_of: C,
    ch: Ch,
    euler: E,
) -> Result<NormalEulerParts>
where
    C: Fn(usize) -> usize,
    Ch: Fn(usize, &[f64]) -> Result<ScalarPointForm>,
    E: Fn(usize, &[f64]) -> Result<f64>,
{
    let base_axes = MultiIndex::from_mask(0b0011);
    let fiber_axes = MultiIndex::from_mask(0b1100);
    let rule = polar_disk_rule(breaks, RADIAL_NODES, ANGULAR_NODES);
    let base = Atlas::new(ManifoldId::S2, base_resolution)?;
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for c in base.charts() {
        let chart = chart_of(c.id);
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for &node in c.active_nodes() {
            let b = c.grid.coords(node);
            let w = c.partition_weight(node) * c.orientation * c.weight();
            let at = |o: [f64; 2]| [b[0], b[1], center[0] + o[0], center[1] + o[1]];
            let form = ch(chart, &at([0.0, 0.0]))?;
            l.push(form.get(base_axes).copied().unwrap_or_default() * w);
            let e = euler(chart, &b)?;
            if e == 0.0 {
                continue;
            }
            let mut u = Vec::with_capacity(rule.len());
            for (o, wf) in &rule {
                let f = ch(chart, &at(*o))?;
                u.push(f.get(fiber_axes).copied().unwrap_or_default() * *wf);
            }
            r.push(pairwise_sum_c(&u) * e * w);
        }
        left.push(pairwise_sum_c(&l));
        right.push(pairwise_sum_c(&r));
    }
    Ok(NormalEulerParts { restricted: pairwise_sum_c(&left), euler_times_fiber: pairwise_sum_c(&right) })
}

/// `ρ = s((|w| − a)/(b − a))` on the fiber coordinates `w = (x₂, x₃)`.
#[derive(Clone, Debug)]
pub struct FiberTruncation {
    pub profile: TruncationProfile,
}

impl TruncationField for FiberTruncation {
    fn eval(&self, _chart: usize, x: &[f64]) -> (f64, Vec<f64>) {
        let d = x[2].hypot(x[3]);
        let dr = self.profile.derivative(d);
        let mut g = vec![0.0; 4];
        if d > 0.0 && dr != 0.0 {
            g[2] = dr * x[2] / d;
            g[3] = dr * x[3] / d;
        }
        (self.profile.value(d), g)
    }
}

/// Euler form coefficient of a unitary line connection, realified.
fn line_euler_density(conn: &dyn Connection, chart: usize, x: &[f64]) -> Result<f64> {
    let f = conn.jet(chart, x)?.curvature();
    // u(1) ∋ ia acts on C = R² as the rotation generator a·J
    let real = f.part(2).map(|m| {
        let a = m[(0, 0)].im;
        CMat::from_row_slice(2, 2, &[0.0.into(), (-a).into(), a.into(), 0.0.into()])
    });
    Ok(euler_form(&real, 2)?.top_or_zero().re)
}

/// Normal-Euler identity on the zero section of the total space of `L^k`
/// over S²: `E₊` trivial, `E₋` the pullback of `L^k`, `v` the tautological
/// section. Both sides integrate over the zero section.
pub fn line_bundle_normal_euler(
    power: i32,
    base_resolution: usize,
    profile: TruncationProfile,
    tube_radius: f64,
    tolerance: f64,
) -> Result<CheckResult> {
    let start = std::time::Instant::now();
    let block = BlockConnection::new(
        Arc::new(FlatConnection { dim: 4, rank: 1 }),
        Arc::new(PulledBackLine { power }),
    )?;
    let deformed = DeformedConnection::new(block, Arc::new(FiberCoordinate), Arc::new(FiberTruncation { profile }))?;
    let line = crate::bundle::SphereLineConnection { power };
    let parts = normal_euler_parts(
        base_resolution,
        &[0.0, profile.a, profile.b, tube_radius],
        [0.0, 0.0],
        |c| c,
        |chart, x| graded_form(&deformed.graded_jet(chart, x)?),
        |chart, b| line_euler_density(&line, chart, b),
    )?;
    Ok(CheckResult::compare("normal_euler_identity", parts.restricted, parts.euler_times_fiber, tolerance)
        .with_note(format!("zero section of the total space of L^{power} over S²"))
        .timed(start.elapsed().as_secs_f64()))
}
