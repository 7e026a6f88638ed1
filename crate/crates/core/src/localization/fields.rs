//! Named analytic sections used by the built-in scenarios.

use num_complex::Complex64;

use crate::bundle::{BundleMap, Connection, ConnectionJet, FieldJet, MapJet, SphereLineConnection, VectorFieldPair};
use crate::error::Result;
use crate::forms::{MultiIndex, PointForm};
use crate::geometry::manifold::sphere_lambda;
use crate::geometry::ManifoldId;
use crate::linalg::CMat;

/// Orthonormal-frame components of the rotation field about the polar axis
/// in one S² chart, with their chart derivatives.
fn sphere_rotation(chart: usize, x: f64, y: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let l = sphere_lambda(x, y);
    let q = 1.0 + x * x + y * y;
    // ∂λ/∂x = −4x/q², ∂λ/∂y = −4y/q²
    let (lx, ly) = (-4.0 * x / (q * q), -4.0 * y / (q * q));
    // coordinate components: (−y, x) in the north chart, (y, −x) in the south
    let s = if chart == 0 { 1.0 } else { -1.0 };
    let v = [-s * y * l, s * x * l];
    let dv = [[-s * y * lx, s * (l + x * lx)], [-s * (l + y * ly), s * x * ly]];
    (v, dv)
}

/// The rotation field `ξ` with `η = 0`: on S² it vanishes at both poles, on
/// S²×S² it rotates the second factor and vanishes on `S² × {poles}`.
#[derive(Clone, Debug)]
pub struct RotationField {
    pub manifold: ManifoldId,
}

impl VectorFieldPair for RotationField {
    fn dim(&self) -> usize {
        self.manifold.dim()
    }

    fn components(&self, chart: usize, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let j = self.jet(chart, x);
        (j.xi, j.eta)
    }

    fn jet(&self, chart: usize, x: &[f64]) -> FieldJet {
        let d = self.dim();
        let (c, off) = match self.manifold {
            ManifoldId::S2xS2 => (self.manifold.factor_charts(chart)[1], 2),
            _ => (chart, 0),
        };
        let mut xi = vec![0.0; d];
        let mut dxi = vec![vec![0.0; d]; d];
        if self.manifold != ManifoldId::T2 {
            let (v, dv) = sphere_rotation(c, x[off], x[off + 1]);
            xi[off..off + 2].copy_from_slice(&v);
            for k in 0..2 {
                dxi[off + k][off..off + 2].copy_from_slice(&dv[k]);
            }
        }
        FieldJet { xi, eta: vec![0.0; d], dxi, deta: vec![vec![0.0; d]; d] }
    }
}

/// Constant `ξ, η` on the flat torus.
#[derive(Clone, Debug)]
pub struct ConstantFrame {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

impl VectorFieldPair for ConstantFrame {
    fn dim(&self) -> usize {
        self.xi.len()
    }
    fn components(&self, _chart: usize, _x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (self.xi.clone(), self.eta.clone())
    }
    fn jet(&self, _chart: usize, _x: &[f64]) -> FieldJet {
        let d = self.dim();
        FieldJet { xi: self.xi.clone(), eta: self.eta.clone(), dxi: vec![vec![0.0; d]; d], deta: vec![vec![0.0; d]; d] }
    }
}

/// Section of the degree-one line bundle over S², viewed as a map from the
/// trivial line: `1/√(1 + r²)` in the north frame and `z'/√(1 + |z'|²)` in
/// the south frame. Its only zero is the south pole.
#[derive(Clone, Debug, Default)]
pub struct LineSection;

impl BundleMap for LineSection {
    fn dim(&self) -> usize {
        2
    }
    fn ranks(&self) -> (usize, usize) {
        (1, 1)
    }
    fn value(&self, chart: usize, x: &[f64]) -> Result<CMat> {
        Ok(self.jet(chart, x)?.value)
    }
    fn jet(&self, chart: usize, x: &[f64]) -> Result<MapJet> {
        let q = 1.0 + x[0] * x[0] + x[1] * x[1];
        let s = q.sqrt();
        // ∂(q^{−1/2}) = −x_k q^{−3/2}
        let g = [-x[0] / (q * s), -x[1] / (q * s)];
        let one = |v: Complex64| CMat::from_element(1, 1, v);
        let (value, partials) = if chart == 0 {
            (Complex64::new(1.0 / s, 0.0), [Complex64::new(g[0], 0.0), Complex64::new(g[1], 0.0)])
        } else {
            let z = Complex64::new(x[0], x[1]);
            (z / s, [z * g[0] + 1.0 / s, z * g[1] + Complex64::new(0.0, 1.0 / s)])
        };
        Ok(MapJet { value: one(value), partials: partials.iter().map(|p| one(*p)).collect() })
    }
}

/// Pullback of the `k`-th power line bundle on S² to the total space of a
/// complex line over it, with coordinates `(x, y, w₀, w₁)` per base chart.
#[derive(Clone, Debug)]
pub struct PulledBackLine {
    pub power: i32,
}

impl Connection for PulledBackLine {
    fn dim(&self) -> usize {
        4
    }
    fn rank(&self) -> usize {
        1
    }
    fn jet(&self, chart: usize, x: &[f64]) -> Result<ConnectionJet> {
        let base = SphereLineConnection { power: self.power }.jet(chart, &x[..2])?;
        let lift = |f: &crate::forms::MatrixPointForm| {
            PointForm::from_terms(4, f.terms().iter().map(|(m, v)| (MultiIndex::from_mask(m.mask()), v.clone())))
        };
        Ok(ConnectionJet { omega: lift(&base.omega), domega: lift(&base.domega), rank: 1 })
    }
}

/// The tautological section `v = w₀ + iw₁` of the pulled-back line.
#[derive(Clone, Debug, Default)]
pub struct FiberCoordinate;

impl BundleMap for FiberCoordinate {
    fn dim(&self) -> usize {
        4
    }
    fn ranks(&self) -> (usize, usize) {
        (1, 1)
    }
    fn value(&self, _chart: usize, x: &[f64]) -> Result<CMat> {
        Ok(CMat::from_element(1, 1, Complex64::new(x[2], x[3])))
    }
    fn jet(&self, chart: usize, x: &[f64]) -> Result<MapJet> {
        let one = |v: Complex64| CMat::from_element(1, 1, v);
        Ok(MapJet {
            value: self.value(chart, x)?,
            partials: vec![
                one(0.0.into()),
                one(0.0.into()),
                one(Complex64::new(1.0, 0.0)),
                one(Complex64::new(0.0, 1.0)),
            ],
        })
    }
}
