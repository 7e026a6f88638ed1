use std::sync::Arc;

use num_complex::Complex64;

use super::{MultiIndex, PointForm};
use crate::error::{Error, Result};
use crate::linalg::{CMat, Coeff};
use crate::numerics::Stencil;

/// One coordinate axis of a tensor-product chart grid.
///
/// Periodic axes carry nodes `lo + i·h`; bounded axes carry cell midpoints
/// `lo + (i + ½)·h`. Either way `h = (hi − lo)/n` is also the quadrature
/// weight, so a product rule is trapezoidal on periodic axes and midpoint
/// on bounded ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub periodic: bool,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize, periodic: bool) -> Result<Self> {
        if !(hi > lo) || n == 0 {
            return Err(Error::Config(format!("axis [{lo}, {hi}] with {n} nodes")));
        }
        Ok(Axis { lo, hi, n, periodic })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        let offset = if self.periodic { 0.0 } else { 0.5 };
        self.lo + (i as f64 + offset) * self.step()
    }
}

/// Tensor-product grid; the last axis varies fastest in node numbering.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > super::multi_index::MAX_DIM {
            return Err(Error::Config(format!("grid dimension {}", axes.len())));
        }
        let mut strides = vec![1; axes.len()];
        for k in (0..axes.len() - 1).rev() {
            strides[k] = strides[k + 1] * axes[k + 1].n;
        }
        let len = strides[0] * axes[0].n;
        Ok(Grid { axes, strides, len })
    }

    /// Uniform box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64, n: usize, periodic: bool) -> Result<Self> {
        let axis = Axis::new(lo, hi, n, periodic)?;
        Grid::new(vec![axis; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn multi_index_of(&self, node: usize) -> Vec<usize> {
        self.axes
            .iter()
            .zip(&self.strides)
            .map(|(a, s)| (node / s) % a.n)
            .collect()
    }

    pub fn coords(&self, node: usize) -> Vec<f64> {
        self.axes
            .iter()
            .zip(&self.strides)
            .map(|(a, s)| a.node((node / s) % a.n))
            .collect()
    }

    /// Product quadrature weight (cell volume).
    pub fn weight(&self) -> f64 {
        self.axes.iter().map(Axis::step).product()
    }

    pub fn volume(&self) -> f64 {
        self.axes.iter().map(|a| a.hi - a.lo).product()
    }

    fn check_stencil(&self, stencil: Stencil) -> Result<()> {
        for (k, a) in self.axes.iter().enumerate() {
            if a.n < stencil.min_nodes() {
                return Err(Error::Config(format!(
                    "axis {k} has {} nodes; the order-{} stencil needs at least {}",
                    a.n,
                    stencil.order(),
                    stencil.min_nodes()
                )));
            }
        }
        Ok(())
    }
}

/// Differential form sampled on a chart grid, stored sparsely by multi-index.
#[derive(Clone, Debug)]
pub struct GridForm<T> {
    grid: Arc<Grid>,
    terms: Vec<(MultiIndex, Vec<T>)>,
}

pub type DifferentialForm = GridForm<Complex64>;
pub type MatrixForm = GridForm<CMat>;

impl<T: Coeff> GridForm<T> {
    pub fn zero(grid: Arc<Grid>) -> Self {
        GridForm { grid, terms: Vec::new() }
    }

    /// Samples a pointwise form at every node.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> PointForm<T>) -> Result<Self> {
        let mut out = GridForm::zero(grid.clone());
        for node in 0..grid.len() {
            let p = f(&grid.coords(node));
            if p.dim() != grid.dim() {
                return Err(Error::Config(format!(
                    "sampled form has dimension {}, grid has {}",
                    p.dim(),
                    grid.dim()
                )));
            }
            for (mi, v) in p.terms() {
                out.slot(*mi, v)[node] = v.clone();
            }
        }
        Ok(out)
    }

    /// Coefficient array for `mi`, created zero-filled on first access.
    fn slot(&mut self, mi: MultiIndex, like: &T) -> &mut Vec<T> {
        let k = match self.terms.binary_search_by_key(&mi, |(m, _)| *m) {
            Ok(k) => k,
            Err(k) => {
                self.terms.insert(k, (mi, vec![like.zero_like(); self.grid.len()]));
                k
            }
        };
        &mut self.terms[k].1
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn terms(&self) -> &[(MultiIndex, Vec<T>)] {
        &self.terms
    }

    pub fn component(&self, mi: MultiIndex) -> Option<&[T]> {
        self.terms
            .binary_search_by_key(&mi, |(m, _)| *m)
            .ok()
            .map(|k| self.terms[k].1.as_slice())
    }

    /// The common degree of all stored terms, if homogeneous and nonempty.
    pub fn degree(&self) -> Option<usize> {
        let first = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == first).then_some(first)
    }

    pub fn at(&self, node: usize) -> PointForm<T> {
        PointForm::from_terms(
            self.grid.dim(),
            self.terms.iter().map(|(m, v)| (*m, v[node].clone())),
        )
    }

    fn same_grid(&self, other: &GridForm<impl Coeff>) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::Config("forms live on different grids".into()))
        }
    }

    fn shape(&self) -> Option<usize> {
        self.terms.first().and_then(|(_, v)| v.first()).map(Coeff::shape)
    }

    /// `self += s·other`.
    pub fn add_scaled(&mut self, other: &Self, s: Complex64) -> Result<()> {
        self.same_grid(other)?;
        if let (Some(a), Some(b)) = (self.shape(), other.shape()) {
            if a != b {
                return Err(Error::Config(format!("coefficient shapes {a} and {b} differ")));
            }
        }
        for (mi, v) in &other.terms {
            let dst = self.slot(*mi, &v[0]);
            for (d, x) in dst.iter_mut().zip(v) {
                d.add_scaled(x, s);
            }
        }
        Ok(())
    }

    /// Pointwise wedge with a caller-supplied coefficient product.
    pub fn wedge_with<U: Coeff, V: Coeff>(
        &self,
        other: &GridForm<U>,
        mul: impl Fn(&T, &U) -> V,
    ) -> Result<GridForm<V>> {
        self.same_grid(other)?;
        let mut out = GridForm::zero(self.grid.clone());
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let Some(sign) = ma.wedge_sign(*mb) else { continue };
                let first = mul(&a[0], &b[0]);
                let dst = out.slot(ma.union(*mb), &first);
                for node in 0..a.len() {
                    dst[node].add_scaled(&mul(&a[node], &b[node]), Complex64::new(sign, 0.0));
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative by finite differences along each chart axis.
    ///
    /// Terms of top degree contribute nothing, so `d` of a top form is the
    /// empty form.
    pub fn exterior_derivative(&self, stencil: Stencil) -> Result<Self> {
        self.grid.check_stencil(stencil)?;
        let g = &*self.grid;
        let mut out = GridForm::zero(self.grid.clone());
        for (mi, v) in &self.terms {
            for axis in 0..g.dim() {
                if mi.contains(axis) {
                    continue;
                }
                // dx_axis ∧ dx_I = sign · dx_{I ∪ axis}
                let sign = MultiIndex::single(axis).wedge_sign(*mi).expect("disjoint");
                let ax = &g.axes[axis];
                let stride = g.strides[axis];
                let scale = Complex64::new(sign / ax.step(), 0.0);
                let mut dv = vec![v[0].zero_like(); g.len()];
                for (node, d) in dv.iter_mut().enumerate() {
                    let i = (node / stride) % ax.n;
                    let base = node - i * stride;
                    for (j, w) in stencil.weights_at(i, ax.n, ax.periodic) {
                        d.add_scaled(&v[base + j * stride], scale * w);
                    }
                }
                let dst = out.slot(mi.union(MultiIndex::single(axis)), &v[0]);
                for (d, x) in dst.iter_mut().zip(&dv) {
                    d.add_scaled(x, Complex64::new(1.0, 0.0));
                }
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude over all nodes and terms.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|(_, v)| v.iter())
            .fold(0.0, |m, t| m.max(t.max_abs()))
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> GridForm<U> {
        GridForm {
            grid: self.grid.clone(),
            terms: self.terms.iter().map(|(m, v)| (*m, v.iter().map(&f).collect())).collect(),
        }
    }

    /// Applies a pointwise operation node by node.
    pub fn map_points<U: Coeff>(
        &self,
        f: impl Fn(&PointForm<T>) -> Result<PointForm<U>>,
    ) -> Result<GridForm<U>> {
        let mut out = GridForm::zero(self.grid.clone());
        for node in 0..self.grid.len() {
            let p = f(&self.at(node))?;
            for (mi, v) in p.terms() {
                out.slot(*mi, v)[node] = v.clone();
            }
        }
        Ok(out)
    }
}

impl DifferentialForm {
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.wedge_with(other, |a, b| a * b)
    }

    /// Top-degree coefficient array, zero-filled when absent.
    pub fn top_coefficients(&self) -> Vec<Complex64> {
        self.component(MultiIndex::top(self.grid.dim()))
            .map(<[Complex64]>::to_vec)
            .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); self.grid.len()])
    }
}

impl MatrixForm {
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.shape(), other.shape()) {
            if a != b {
                return Err(Error::Config(format!("matrix sizes {a} and {b} differ")));
            }
        }
        self.wedge_with(other, |a, b| a * b)
    }

    pub fn trace(&self) -> DifferentialForm {
        self.map(|m| m.trace())
    }
}

/// Free-function spelling of [`GridForm::wedge`] for scalar forms.
pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm> {
    a.wedge(b)
}

/// Free-function spelling of [`GridForm::exterior_derivative`].
pub fn exterior_derivative<T: Coeff>(f: &GridForm<T>, stencil: Stencil) -> Result<GridForm<T>> {
    f.exterior_derivative(stencil)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2(n: usize) -> Arc<Grid> {
        Arc::new(Grid::cube(2, -1.0, 1.0, n, false).unwrap())
    }

    fn one_form(dim: usize, axis: usize, v: Complex64) -> PointForm<Complex64> {
        PointForm::from_terms(dim, [(MultiIndex::single(axis), v)])
    }

    #[test]
    fn d_of_constant_vanishes() {
        let f = DifferentialForm::from_fn(grid2(9), |_| {
            PointForm::constant(2, Complex64::new(3.0, -1.0))
        })
        .unwrap();
        assert_eq!(f.exterior_derivative(Stencil::Fourth).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn d_of_x_dy_is_area_form() {
        let f = DifferentialForm::from_fn(grid2(9), |x| one_form(2, 1, x[0].into())).unwrap();
        for stencil in [Stencil::Second, Stencil::Fourth] {
            let df = f.exterior_derivative(stencil).unwrap();
            for c in df.top_coefficients() {
                assert!((c - 1.0).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn d_of_top_form_is_empty_and_coarse_grid_rejected() {
        let top = DifferentialForm::from_fn(grid2(9), |x| {
            PointForm::from_terms(2, [(MultiIndex::top(2), Complex64::from(x[0] * x[1]))])
        })
        .unwrap();
        assert!(top.exterior_derivative(Stencil::Fourth).unwrap().terms().is_empty());
        let coarse = DifferentialForm::zero(grid2(4));
        assert!(coarse.exterior_derivative(Stencil::Fourth).is_err());
        assert!(coarse.exterior_derivative(Stencil::Second).is_ok());
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = DifferentialForm::zero(grid2(8));
        let b = DifferentialForm::zero(grid2(9));
        assert!(a.wedge(&b).is_err());
    }

    #[test]
    fn matrix_size_mismatch_rejected() {
        let g = grid2(5);
        let a = MatrixForm::from_fn(g.clone(), |_| {
            PointForm::from_terms(2, [(MultiIndex::single(0), CMat::identity(2, 2))])
        })
        .unwrap();
        let b = MatrixForm::from_fn(g, |_| {
            PointForm::from_terms(2, [(MultiIndex::single(1), CMat::identity(3, 3))])
        })
        .unwrap();
        assert!(a.wedge(&b).is_err());
    }

    #[test]
    fn periodic_derivative_is_spectral_on_trig() {
        let g = Arc::new(Grid::cube(1, 0.0, 1.0, 64, true).unwrap());
        let tau = std::f64::consts::TAU;
        let f = DifferentialForm::from_fn(g, |x| {
            PointForm::constant(1, (tau * x[0]).sin().into())
        })
        .unwrap();
        let df = f.exterior_derivative(Stencil::Fourth).unwrap();
        let c = df.component(MultiIndex::single(0)).unwrap();
        let err = (0..64)
            .map(|i| (c[i].re - tau * (tau * i as f64 / 64.0).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }
}
