use std::sync::Arc;

use num_complex::Complex64;

use super::connection::{Connection, ConnectionJet};
use super::map::BundleMap;
use crate::error::{Error, Result};
use crate::forms::{GradingTag, MatrixPointForm, MultiIndex, PointForm, ScalarPointForm};
use crate::linalg::{inverse_with_condition, mul, CMat};
use crate::numerics::{smoothstep5, smoothstep5_deriv};

/// Condition number above which `v` counts as singular.
pub const SINGULAR_CONDITION: f64 = 1e8;

/// `ρ(t) = s((t − a)/(b − a))` with the quintic smoothstep `s`: zero for
/// `t ≤ a`, one for `t ≥ b`, C² throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationProfile {
    pub a: f64,
    pub b: f64,
}

impl TruncationProfile {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a < b) {
            return Err(Error::Config(format!("truncation radii must satisfy 0 < a < b, got ({a}, {b})")));
        }
        Ok(TruncationProfile { a, b })
    }

    pub fn value(&self, t: f64) -> f64 {
        smoothstep5((t - self.a) / (self.b - self.a))
    }

    pub fn derivative(&self, t: f64) -> f64 {
        smoothstep5_deriv((t - self.a) / (self.b - self.a)) / (self.b - self.a)
    }
}

/// `ρ` and its chart gradient at a point.
pub trait TruncationField: Send + Sync {
    fn eval(&self, chart: usize, x: &[f64]) -> (f64, Vec<f64>);
}

/// `ρ ≡ value`.
#[derive(Clone, Debug)]
pub struct ConstantTruncation {
    pub dim: usize,
    pub value: f64,
}

impl TruncationField for ConstantTruncation {
    fn eval(&self, _chart: usize, _x: &[f64]) -> (f64, Vec<f64>) {
        (self.value, vec![0.0; self.dim])
    }
}

/// Connection jets of both halves of a graded bundle `E₊ ⊕ E₋`.
#[derive(Clone, Debug)]
pub struct GradedJet {
    pub plus: ConnectionJet,
    pub minus: ConnectionJet,
}

impl GradedJet {
    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    pub fn curvatures(&self) -> (MatrixPointForm, MatrixPointForm) {
        (self.plus.curvature(), self.minus.curvature())
    }
}

/// A connection on `E₊ ⊕ E₋` preserving the grading.
pub trait GradedConnection: Send + Sync {
    fn dim(&self) -> usize;
    fn ranks(&self) -> (usize, usize);
    fn graded_jet(&self, chart: usize, x: &[f64]) -> Result<GradedJet>;

    /// Curvatures of both halves.
    fn graded_curvature(&self, chart: usize, x: &[f64]) -> Result<(MatrixPointForm, MatrixPointForm)> {
        Ok(self.graded_jet(chart, x)?.curvatures())
    }

    fn grading(&self) -> GradingTag {
        let (p, m) = self.ranks();
        GradingTag::from_block_ranks(p, m)
    }
}

/// `∇^{E₊} ⊕ ∇^{E₋}`.
#[derive(Clone)]
pub struct BlockConnection {
    pub plus: Arc<dyn Connection>,
    pub minus: Arc<dyn Connection>,
}

impl BlockConnection {
    pub fn new(plus: Arc<dyn Connection>, minus: Arc<dyn Connection>) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(Error::Config("graded halves live on different manifolds".into()));
        }
        Ok(BlockConnection { plus, minus })
    }
}

impl GradedConnection for BlockConnection {
    fn dim(&self) -> usize {
        self.plus.dim()
    }
    fn ranks(&self) -> (usize, usize) {
        (self.plus.rank(), self.minus.rank())
    }
    fn graded_jet(&self, chart: usize, x: &[f64]) -> Result<GradedJet> {
        Ok(GradedJet { plus: self.plus.jet(chart, x)?, minus: self.minus.jet(chart, x)? })
    }
    fn graded_curvature(&self, chart: usize, x: &[f64]) -> Result<(MatrixPointForm, MatrixPointForm)> {
        Ok((self.plus.jet_with_curvature(chart, x)?.1, self.minus.jet_with_curvature(chart, x)?.1))
    }
}

impl BlockConnection {
    /// Jets and curvatures of both halves in one call.
    pub fn graded_jet_with_curvature(&self, chart: usize, x: &[f64]) -> Result<(GradedJet, [MatrixPointForm; 2])> {
        let (plus, rp) = self.plus.jet_with_curvature(chart, x)?;
        let (minus, rm) = self.minus.jet_with_curvature(chart, x)?;
        Ok((GradedJet { plus, minus }, [rp, rm]))
    }
}

/// Every graded connection is also an ordinary connection on the direct sum.
pub struct AsConnection<G>(pub G);

impl<G: GradedConnection> Connection for AsConnection<G> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn rank(&self) -> usize {
        let (p, m) = self.0.ranks();
        p + m
    }
    fn jet(&self, chart: usize, x: &[f64]) -> Result<ConnectionJet> {
        let j = self.0.graded_jet(chart, x)?;
        Ok(j.plus.direct_sum(&j.minus))
    }
}

/// The pieces of `∇̃` that need `v`: `G = v⁻¹(dv + ω₋v)`, the pulled-back
/// connection, `A = G − ω₊`, and `v⁻¹R₋v`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub g: MatrixPointForm,
    pub a: MatrixPointForm,
    pub conjugated: MatrixPointForm,
    pub v: CMat,
    pub vinv: CMat,
}

/// Pieces of the deformed connection at one point.
#[derive(Clone, Debug)]
pub struct DeformedPoint {
    pub rho: f64,
    pub drho: ScalarPointForm,
    pub base: GradedJet,
    /// `R₊` and `R₋` of the block connection.
    pub base_curvature: [MatrixPointForm; 2],
    /// Absent where `ρ` and `dρ` vanish.
    pub pullback: Option<Pullback>,
}

impl DeformedPoint {
    /// `dA = v⁻¹R₋v − G∧G − dω₊`, from `dG + G∧G = v⁻¹R₋v`.
    pub fn da(&self) -> Option<MatrixPointForm> {
        let p = self.pullback.as_ref()?;
        Some(p.conjugated.minus(&p.g.wedge(&p.g)).minus(&self.base.plus.domega))
    }

    /// Jets of `∇̃`: the `E₊` block is `ω₊ + ρA`, the `E₋` block unchanged.
    pub fn jet(&self) -> GradedJet {
        let (Some(p), Some(da)) = (&self.pullback, self.da()) else { return self.base.clone() };
        let mut omega = self.base.plus.omega.clone();
        omega.add_scaled(&p.a, Complex64::new(self.rho, 0.0));
        let mut domega = self.base.plus.domega.clone();
        domega.add_scaled(&self.drho.wedge_with(&p.a, |s, m| m * *s), 1.0.into());
        domega.add_scaled(&da, Complex64::new(self.rho, 0.0));
        GradedJet {
            plus: ConnectionJet { omega, domega, rank: self.base.plus.rank },
            minus: self.base.minus.clone(),
        }
    }

    /// Curvatures of `∇̃` without differentiating `A`:
    /// `R̃₊ = (1 − ρ)R₊ + ρ·v⁻¹R₋v + (ρ² − ρ)A∧A + dρ∧A`.
    pub fn curvatures(&self) -> (MatrixPointForm, MatrixPointForm) {
        let [rp, rm] = &self.base_curvature;
        let Some(p) = &self.pullback else { return (rp.clone(), rm.clone()) };
        let rho = self.rho;
        let mut out = rp.scaled((1.0 - rho).into());
        out.add_scaled(&p.conjugated, rho.into());
        if rho != 0.0 && rho != 1.0 {
            out.add_scaled(&p.a.wedge(&p.a), (rho * rho - rho).into());
        }
        if !self.drho.is_empty() {
            out.add_scaled(&self.drho.wedge_with(&p.a, |s, m| m * *s), 1.0.into());
        }
        (out, rm.clone())
    }

    /// `‖R̃₊ − v⁻¹R₋v‖_max` with `R̃₊` assembled from the jet, meaningful
    /// where `ρ = 1`.
    pub fn conjugation_residual(&self) -> Option<f64> {
        let p = self.pullback.as_ref()?;
        Some(self.jet().plus.curvature().minus(&p.conjugated).max_abs())
    }
}

/// The connection `∇̃` obtained from `∇₊ ⊕ ∇₋` by adding
/// `ρ·v⁻¹(∇^{E₋}v − v∇^{E₊})` to the `E₊` block. Where `ρ = 1` the `E₊`
/// block is the pullback of `∇^{E₋}` through `v`.
#[derive(Clone)]
pub struct DeformedConnection {
    pub base: BlockConnection,
    pub map: Arc<dyn BundleMap>,
    pub truncation: Arc<dyn TruncationField>,
}

impl DeformedConnection {
    pub fn new(
        base: BlockConnection,
        map: Arc<dyn BundleMap>,
        truncation: Arc<dyn TruncationField>,
    ) -> Result<Self> {
        if map.ranks() != base.ranks() || map.dim() != base.dim() {
            return Err(Error::Config(format!(
                "bundle map of ranks {:?} on a bundle of ranks {:?}",
                map.ranks(),
                base.ranks()
            )));
        }
        Ok(DeformedConnection { base, map, truncation })
    }

    pub fn local(&self, chart: usize, x: &[f64]) -> Result<DeformedPoint> {
        let dim = self.base.dim();
        let (base, base_curvature) = self.base.graded_jet_with_curvature(chart, x)?;
        let (rho, grad) = self.truncation.eval(chart, x);
        let drho = PointForm::from_terms(
            dim,
            grad.iter()
                .enumerate()
                .filter(|(_, g)| **g != 0.0)
                .map(|(k, g)| (MultiIndex::single(k), Complex64::new(*g, 0.0))),
        );
        if rho == 0.0 && drho.is_empty() {
            return Ok(DeformedPoint { rho, drho, base, base_curvature, pullback: None });
        }
        let jet = self.map.jet(chart, x)?;
        let (vinv, condition) = inverse_with_condition(&jet.value)
            .ok_or(Error::TruncationTouchesZeroSet { chart, condition: f64::INFINITY })?;
        if condition > SINGULAR_CONDITION {
            return Err(Error::TruncationTouchesZeroSet { chart, condition });
        }
        let v = jet.value.clone();
        let mut g = jet.differential();
        g.add_scaled(&base.minus.omega.map(|m| mul(m, &v)), 1.0.into());
        let g = g.map(|m| mul(&vinv, m));
        let a = g.minus(&base.plus.omega);
        let conjugated = base_curvature[1].sandwich(&vinv, &v);
        let pullback = Some(Pullback { g, a, conjugated, v, vinv });
        Ok(DeformedPoint { rho, drho, base, base_curvature, pullback })
    }
}

impl GradedConnection for DeformedConnection {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn ranks(&self) -> (usize, usize) {
        self.base.ranks()
    }
    fn graded_jet(&self, chart: usize, x: &[f64]) -> Result<GradedJet> {
        Ok(self.local(chart, x)?.jet())
    }
    fn graded_curvature(&self, chart: usize, x: &[f64]) -> Result<(MatrixPointForm, MatrixPointForm)> {
        Ok(self.local(chart, x)?.curvatures())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::connection::{FlatConnection, SphereLineConnection};
    use crate::bundle::map::FnMap;
    use crate::linalg::Coeff;

    fn line_setup(rho: f64) -> DeformedConnection {
        let base = BlockConnection::new(
            Arc::new(FlatConnection { dim: 2, rank: 1 }),
            Arc::new(SphereLineConnection { power: 1 }),
        )
        .unwrap();
        let map = FnMap {
            dim: 2,
            rank_plus: 1,
            rank_minus: 1,
            f: |_: usize, x: &[f64]| {
                CMat::from_element(1, 1, Complex64::new(1.0 + x[0] * x[0], x[1]) / (1.0 + x[1] * x[1]).sqrt())
            },
        };
        DeformedConnection::new(base, Arc::new(map), Arc::new(ConstantTruncation { dim: 2, value: rho }))
            .unwrap()
    }

    #[test]
    fn zero_truncation_leaves_connection_unchanged() {
        let d = line_setup(0.0);
        let j = d.graded_jet(0, &[0.3, 0.4]).unwrap();
        let b = d.base.graded_jet(0, &[0.3, 0.4]).unwrap();
        assert!(j.plus.omega.minus(&b.plus.omega).max_abs() == 0.0);
        assert!(j.minus.omega.minus(&b.minus.omega).max_abs() == 0.0);
    }

    #[test]
    fn full_truncation_conjugates_curvature() {
        let d = line_setup(1.0);
        let p = d.local(0, &[0.3, 0.4]).unwrap();
        assert!(p.conjugation_residual().unwrap() < 1e-12);
    }

    /// Rank-2 halves with a non-abelian `E₋` connection and a non-normal `v`.
    fn matrix_setup(rho: f64) -> DeformedConnection {
        let minus = crate::bundle::connection::LeviCivita { manifold: crate::geometry::ManifoldId::S2 };
        let base = BlockConnection::new(Arc::new(FlatConnection { dim: 2, rank: 2 }), Arc::new(minus)).unwrap();
        let map = FnMap {
            dim: 2,
            rank_plus: 2,
            rank_minus: 2,
            f: |_: usize, x: &[f64]| {
                CMat::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(2.0 + x[0], 0.1),
                        Complex64::new(x[1] * x[0], 0.0),
                        Complex64::new(0.0, x[1]),
                        Complex64::new(1.0, -x[0] * x[0]),
                    ],
                )
            },
        };
        DeformedConnection::new(base, Arc::new(map), Arc::new(ConstantTruncation { dim: 2, value: rho })).unwrap()
    }

    #[test]
    fn matrix_valued_map_conjugates_curvature() {
        let p = matrix_setup(1.0).local(0, &[0.2, -0.5]).unwrap();
        assert!(p.conjugation_residual().unwrap() < 1e-9);
    }

    #[test]
    fn pullback_identity_matches_differentiated_a() {
        let d = matrix_setup(1.0);
        let x = [0.2, -0.5];
        let a_component = |y: &[f64], k: usize| {
            d.local(0, y).unwrap().pullback.unwrap().a.get(MultiIndex::single(k)).cloned().unwrap()
        };
        let h = 1e-3;
        let partial = |i: usize, k: usize| {
            crate::numerics::fine_derivative(|y: &[f64]| a_component(y, k), &x, i, h)
        };
        let numeric = partial(0, 1) - partial(1, 0);
        let da = d.local(0, &x).unwrap().da().unwrap();
        let top = da.top().unwrap();
        assert!((top - &numeric).max_abs() < 1e-8, "{top} vs {numeric}");
    }

    struct Ramp;

    impl TruncationField for Ramp {
        fn eval(&self, _chart: usize, x: &[f64]) -> (f64, Vec<f64>) {
            (0.3 + 0.2 * x[0] - 0.1 * x[1], vec![0.2, -0.1])
        }
    }

    #[test]
    fn closed_form_curvature_matches_jet_curvature() {
        let mut d = line_setup(0.0);
        d.truncation = Arc::new(Ramp);
        let p = d.local(1, &[0.3, -0.6]).unwrap();
        let (fast, _) = p.curvatures();
        let (slow, _) = p.jet().curvatures();
        assert!(fast.minus(&slow).max_abs() < 1e-12);
        assert!(fast.max_abs() > 1e-3);
    }

    #[test]
    fn singular_map_inside_truncation_is_an_error() {
        let base = BlockConnection::new(
            Arc::new(FlatConnection { dim: 2, rank: 1 }),
            Arc::new(FlatConnection { dim: 2, rank: 1 }),
        )
        .unwrap();
        let map = FnMap { dim: 2, rank_plus: 1, rank_minus: 1, f: |_: usize, _: &[f64]| CMat::zeros(1, 1) };
        let d = DeformedConnection::new(base, Arc::new(map), Arc::new(ConstantTruncation { dim: 2, value: 0.5 }))
            .unwrap();
        assert!(matches!(d.local(0, &[0.0, 0.0]), Err(Error::TruncationTouchesZeroSet { .. })));
    }

    #[test]
    fn profile_is_clamped_and_validated() {
        let p = TruncationProfile::new(0.4, 0.72).unwrap();
        assert_eq!(p.value(0.1), 0.0);
        assert_eq!(p.value(0.9), 1.0);
        assert!((p.value(0.56) - 0.5).abs() < 1e-12);
        assert!(p.derivative(0.3) == 0.0 && p.derivative(0.56) > 0.0);
        assert!(TruncationProfile::new(0.5, 0.5).is_err());
        let _ = CMat::zeros(1, 1).max_abs();
    }
}
