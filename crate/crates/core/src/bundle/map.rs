use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::CliffordModel;
use crate::error::{Error, Result};
use crate::forms::{MatrixPointForm, MultiIndex, PointForm};
use crate::linalg::{CMat, Coeff, I};
use crate::numerics::{fine_derivative, FINE_STEP};

/// Value and first partial derivatives of a bundle map at a point.
#[derive(Clone, Debug)]
pub struct MapJet {
    pub value: CMat,
    /// `∂v/∂x_k` for every chart axis.
    pub partials: Vec<CMat>,
}

impl MapJet {
    /// `dv` as a matrix-valued 1-form.
    pub fn differential(&self) -> MatrixPointForm {
        PointForm::from_terms(
            self.partials.len(),
            self.partials.iter().enumerate().map(|(k, m)| (MultiIndex::single(k), m.clone())),
        )
    }
}

/// A section `v` of `Hom(E₊, E₋)` in the chart trivializations
/// (an `r₋ × r₊` matrix at each point).
pub trait BundleMap: Send + Sync {
    fn dim(&self) -> usize;
    /// `(r₊, r₋)`.
    fn ranks(&self) -> (usize, usize);
    fn value(&self, chart: usize, x: &[f64]) -> Result<CMat>;

    /// Defaults to fourth-order differences of [`Self::value`].
    fn jet(&self, chart: usize, x: &[f64]) -> Result<MapJet> {
        let value = self.value(chart, x)?;
        let mut err = None;
        let partials = (0..self.dim())
            .map(|k| {
                fine_derivative(
                    |y| {
                        self.value(chart, y).unwrap_or_else(|e| {
                            err = Some(e);
                            value.zero_like()
                        })
                    },
                    x,
                    k,
                    FINE_STEP,
                )
            })
            .collect();
        match err {
            Some(e) => Err(e),
            None => Ok(MapJet { value, partials }),
        }
    }
}

/// Bundle map given by a closure.
pub struct FnMap<F> {
    pub dim: usize,
    pub rank_plus: usize,
    pub rank_minus: usize,
    pub f: F,
}

impl<F> BundleMap for FnMap<F>
where
    F: Fn(usize, &[f64]) -> CMat + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn ranks(&self) -> (usize, usize) {
        (self.rank_plus, self.rank_minus)
    }
    fn value(&self, chart: usize, x: &[f64]) -> Result<CMat> {
        let v = (self.f)(chart, x);
        if v.nrows() != self.rank_minus || v.ncols() != self.rank_plus {
            return Err(Error::Config(format!(
                "bundle map value is {}x{}, expected {}x{}",
                v.nrows(),
                v.ncols(),
                self.rank_minus,
                self.rank_plus
            )));
        }
        Ok(v)
    }
}

/// Orthonormal-frame components of `ξ` and `η`, with their chart
/// derivatives.
#[derive(Clone, Debug)]
pub struct FieldJet {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    /// `∂ξ/∂x_k`, `∂η/∂x_k`.
    pub dxi: Vec<Vec<f64>>,
    pub deta: Vec<Vec<f64>>,
}

/// A pair of vector fields `K = ξ + √−1 η`, given in each chart's
/// orthonormal frame.
pub trait VectorFieldPair: Send + Sync {
    fn dim(&self) -> usize;
    fn components(&self, chart: usize, x: &[f64]) -> (Vec<f64>, Vec<f64>);

    /// Defaults to fourth-order differences of [`Self::components`].
    fn jet(&self, chart: usize, x: &[f64]) -> FieldJet {
        let (xi, eta) = self.components(chart, x);
        let d = self.dim();
        let mut dxi = Vec::with_capacity(d);
        let mut deta = Vec::with_capacity(d);
        for k in 0..d {
            let stacked = |y: &[f64]| {
                let (a, b) = self.components(chart, y);
                CMat::from_iterator(2 * d, 1, a.iter().chain(&b).map(|&v| Complex64::new(v, 0.0)))
            };
            let g = fine_derivative(stacked, x, k, FINE_STEP);
            dxi.push((0..d).map(|i| g[(i, 0)].re).collect());
            deta.push((d..2 * d).map(|i| g[(i, 0)].re).collect());
        }
        FieldJet { xi, eta, dxi, deta }
    }
}

/// `v_K = τc(ξ) + √−1 c(η)` restricted to `Λ₊ → Λ₋`.
pub struct SymbolMap {
    field: Arc<dyn VectorFieldPair>,
    /// Restricted `τc(e_a)` and `√−1 c(e_a)`.
    xi_blocks: Vec<CMat>,
    eta_blocks: Vec<CMat>,
}

impl SymbolMap {
    pub fn new(model: &CliffordModel, field: Arc<dyn VectorFieldPair>) -> Result<Self> {
        let d = 2 * model.n();
        if field.dim() != d {
            return Err(Error::Config(format!(
                "vector fields of dimension {} for a model of dimension {d}",
                field.dim()
            )));
        }
        let restrict = |m: &CMat| model.basis_minus().adjoint() * m * model.basis_plus();
        let xi_blocks = (0..d).map(|a| restrict(&(model.tau() * model.generator(a)))).collect();
        let eta_blocks = (0..d).map(|a| restrict(&(model.generator(a) * I))).collect();
        Ok(SymbolMap { field, xi_blocks, eta_blocks })
    }

    fn combine(&self, xi: &[f64], eta: &[f64]) -> CMat {
        let r = self.xi_blocks[0].nrows();
        let mut v = CMat::zeros(r, r);
        for (a, &s) in xi.iter().enumerate() {
            if s != 0.0 {
                v.add_scaled(&self.xi_blocks[a], s.into());
            }
        }
        for (a, &s) in eta.iter().enumerate() {
            if s != 0.0 {
                v.add_scaled(&self.eta_blocks[a], s.into());
            }
        }
        v
    }

    pub fn field(&self) -> &Arc<dyn VectorFieldPair> {
        &self.field
    }
}

impl BundleMap for SymbolMap {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn ranks(&self) -> (usize, usize) {
        let r = self.xi_blocks[0].nrows();
        (r, r)
    }
    fn value(&self, chart: usize, x: &[f64]) -> Result<CMat> {
        let (xi, eta) = self.field.components(chart, x);
        Ok(self.combine(&xi, &eta))
    }
    /// Linear in the fields, so derivatives pass through exactly.
    fn jet(&self, chart: usize, x: &[f64]) -> Result<MapJet> {
        let j = self.field.jet(chart, x);
        Ok(MapJet {
            value: self.combine(&j.xi, &j.eta),
            partials: j.dxi.iter().zip(&j.deta).map(|(a, b)| self.combine(a, b)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Linear;

    impl VectorFieldPair for Linear {
        fn dim(&self) -> usize {
            2
        }
        fn components(&self, _chart: usize, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
            (vec![x[0], 2.0 * x[1]], vec![0.0, x[0] * x[1]])
        }
    }

    #[test]
    fn symbol_jet_matches_differences() {
        let model = CliffordModel::new(1).unwrap();
        let map = SymbolMap::new(&model, Arc::new(Linear)).unwrap();
        let x = [0.4, -0.3];
        let exact = map.jet(0, &x).unwrap();
        let direct = model.symbol(&[0.4, -0.6], &[0.0, -0.12]).unwrap();
        assert!((&exact.value - direct).max_abs() < 1e-15);
        // default finite-difference route through the trait
        let fd = FnMap {
            dim: 2,
            rank_plus: 2,
            rank_minus: 2,
            f: |c: usize, y: &[f64]| map.value(c, y).unwrap(),
        };
        let j = fd.jet(0, &x).unwrap();
        for k in 0..2 {
            assert!((&j.partials[k] - &exact.partials[k]).max_abs() < 1e-10);
        }
    }

    #[test]
    fn closure_map_shape_is_checked() {
        let bad = FnMap { dim: 2, rank_plus: 2, rank_minus: 1, f: |_: usize, _: &[f64]| CMat::zeros(2, 2) };
        assert!(bad.value(0, &[0.0, 0.0]).is_err());
    }
}
