use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::CliffordModel;
use crate::error::{Error, Result};
use crate::forms::{MatrixPointForm, MultiIndex, PointForm};
use crate::geometry::manifold::ManifoldId;
use crate::linalg::{CMat, Coeff};
use crate::numerics::{fine_derivative, FINE_STEP};

/// Connection matrix `ω` and its exterior derivative `dω` at one point of a
/// chart. Components follow `∇f = df + ωf` on column vectors, so the
/// curvature is `dω + ω∧ω`.
#[derive(Clone, Debug)]
pub struct ConnectionJet {
    pub omega: MatrixPointForm,
    pub domega: MatrixPointForm,
    pub rank: usize,
}

impl ConnectionJet {
    pub fn flat(dim: usize, rank: usize) -> Self {
        ConnectionJet {
            omega: PointForm::zero(dim),
            domega: PointForm::zero(dim),
            rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn curvature(&self) -> MatrixPointForm {
        self.domega.plus(&self.omega.wedge(&self.omega))
    }

    /// `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let r = self.rank + other.rank;
        let embed = |a: &MatrixPointForm, b: &MatrixPointForm| {
            let mut out = PointForm::zero(a.dim());
            let zero_a = CMat::zeros(self.rank, self.rank);
            let zero_b = CMat::zeros(other.rank, other.rank);
            let mut keys: Vec<MultiIndex> =
                a.terms().iter().chain(b.terms()).map(|(m, _)| *m).collect();
            keys.sort();
            keys.dedup();
            for mi in keys {
                let mut m = CMat::zeros(r, r);
                m.view_mut((0, 0), (self.rank, self.rank))
                    .copy_from(a.get(mi).unwrap_or(&zero_a));
                m.view_mut((self.rank, self.rank), (other.rank, other.rank))
                    .copy_from(b.get(mi).unwrap_or(&zero_b));
                out.add_term(mi, &m, Complex64::new(1.0, 0.0));
            }
            out
        };
        ConnectionJet {
            omega: embed(&self.omega, &other.omega),
            domega: embed(&self.domega, &other.domega),
            rank: r,
        }
    }
}

/// A connection on a trivialized bundle over the charts of a scenario
/// manifold, evaluated pointwise.
pub trait Connection: Send + Sync {
    fn dim(&self) -> usize;
    fn rank(&self) -> usize;
    fn jet(&self, chart: usize, x: &[f64]) -> Result<ConnectionJet>;

    /// The jet together with its curvature. Implementations may override
    /// this when the curvature has a cheaper route than `dω + ω∧ω`.
    fn jet_with_curvature(&self, chart: usize, x: &[f64]) -> Result<(ConnectionJet, MatrixPointForm)> {
        let j = self.jet(chart, x)?;
        let r = j.curvature();
        Ok((j, r))
    }
}

/// `ω = 0`.
#[derive(Clone, Debug)]
pub struct FlatConnection {
    pub dim: usize,
    pub rank: usize,
}

impl Connection for FlatConnection {
    fn dim(&self) -> usize {
        self.dim
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn jet(&self, _chart: usize, _x: &[f64]) -> Result<ConnectionJet> {
        Ok(ConnectionJet::flat(self.dim, self.rank))
    }
}

fn real_entry(rank: usize, i: usize, j: usize, v: f64) -> CMat {
    let mut m = CMat::zeros(rank, rank);
    m[(i, j)] = Complex64::new(v, 0.0);
    m[(j, i)] = Complex64::new(-v, 0.0);
    m
}

/// Levi-Civita connection of the round S² in the orthonormal frame
/// `∂_a/λ` of a stereographic chart: `ω¹₂ = (−2y dx + 2x dy)/(1 + r²)`.
fn sphere_levi_civita(x: f64, y: f64, offset: usize, dim: usize, rank: usize) -> ConnectionJet {
    let q = 1.0 + x * x + y * y;
    let (i, j) = (offset, offset + 1);
    let omega = PointForm::from_terms(
        dim,
        [
            (MultiIndex::single(i), real_entry(rank, i, j, -2.0 * y / q)),
            (MultiIndex::single(j), real_entry(rank, i, j, 2.0 * x / q)),
        ],
    );
    let domega = PointForm::from_terms(
        dim,
        [(MultiIndex::from_mask((1 << i) | (1 << j)), real_entry(rank, i, j, 4.0 / (q * q)))],
    );
    ConnectionJet { omega, domega, rank }
}

/// Levi-Civita connection of a scenario manifold in the chart orthonormal
/// frame (real skew matrices, complexified).
#[derive(Clone, Debug)]
pub struct LeviCivita {
    pub manifold: ManifoldId,
}

impl Connection for LeviCivita {
    fn dim(&self) -> usize {
        self.manifold.dim()
    }
    fn rank(&self) -> usize {
        self.manifold.dim()
    }
    fn jet(&self, _chart: usize, x: &[f64]) -> Result<ConnectionJet> {
        Ok(match self.manifold {
            ManifoldId::T2 => ConnectionJet::flat(2, 2),
            ManifoldId::S2 => sphere_levi_civita(x[0], x[1], 0, 2, 2),
            ManifoldId::S2xS2 => {
                let a = sphere_levi_civita(x[0], x[1], 0, 4, 4);
                let b = sphere_levi_civita(x[2], x[3], 2, 4, 4);
                ConnectionJet {
                    omega: a.omega.plus(&b.omega),
                    domega: a.domega.plus(&b.domega),
                    rank: 4,
                }
            }
        })
    }
}

/// Which half of the signature grading a connection acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    Plus,
    Minus,
}

/// Sparse `(row, col, value)` entries.
type Triplets = Vec<(usize, usize, Complex64)>;

/// Connection induced on `Λ₊` or `Λ₋` by a metric connection on `R^{2n}`:
/// the derivation extension of `ω` commutes with `τ`, so it restricts to
/// each half.
pub struct ExteriorConnection {
    base: Arc<dyn Connection>,
    half: Half,
    rank: usize,
    /// Nonzero entries of the restricted derivation of `E_ab − E_ba`, for
    /// every `a < b`.
    blocks: Vec<((usize, usize), Triplets)>,
}

impl ExteriorConnection {
    pub fn new(base: Arc<dyn Connection>, model: &CliffordModel, half: Half) -> Result<Self> {
        let d = 2 * model.n();
        if base.rank() != d {
            return Err(Error::Config(format!(
                "base connection has rank {}, the Clifford model needs {d}",
                base.rank()
            )));
        }
        let mut blocks = Vec::new();
        let mut rank = 1;
        for a in 0..d {
            for b in a + 1..d {
                let gen = model.derivation(&real_entry(d, a, b, 1.0));
                let (p, m) = model.split_even(&gen);
                let blk = if half == Half::Plus { p } else { m };
                rank = blk.nrows();
                let entries = (0..rank)
                    .flat_map(|i| (0..rank).map(move |j| (i, j)))
                    .filter(|&(i, j)| blk[(i, j)] != Complex64::new(0.0, 0.0))
                    .map(|(i, j)| (i, j, blk[(i, j)]))
                    .collect();
                blocks.push(((a, b), entries));
            }
        }
        Ok(ExteriorConnection { base, half, rank, blocks })
    }

    pub fn half(&self) -> Half {
        self.half
    }

    fn lift(&self, f: &MatrixPointForm) -> MatrixPointForm {
        let r = self.rank();
        f.map(|m| {
            let mut out = CMat::zeros(r, r);
            for ((a, b), entries) in &self.blocks {
                let c = m[(*a, *b)];
                if c != Complex64::new(0.0, 0.0) {
                    for &(i, j, e) in entries {
                        out[(i, j)] += c * e;
                    }
                }
            }
            out
        })
    }
}

impl Connection for ExteriorConnection {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn jet(&self, chart: usize, x: &[f64]) -> Result<ConnectionJet> {
        let j = self.base.jet(chart, x)?;
        Ok(ConnectionJet {
            omega: self.lift(&j.omega),
            domega: self.lift(&j.domega),
            rank: self.rank(),
        })
    }

    /// The derivation extension is a Lie algebra homomorphism, so the
    /// curvature is the lift of the base curvature.
    fn jet_with_curvature(&self, chart: usize, x: &[f64]) -> Result<(ConnectionJet, MatrixPointForm)> {
        let (j, r) = self.base.jet_with_curvature(chart, x)?;
        let jet = ConnectionJet { omega: self.lift(&j.omega), domega: self.lift(&j.domega), rank: self.rank() };
        Ok((jet, self.lift(&r)))
    }
}

/// Unitary connection on the `k`-th power of the degree-one line bundle over
/// S²: `ω = k·i(y dx − x dy)/(1 + r²)` in both charts, with transition
/// `e^{−ikφ}` from the north to the south frame.
#[derive(Clone, Debug)]
pub struct SphereLineConnection {
    pub power: i32,
}

impl Connection for SphereLineConnection {
    fn dim(&self) -> usize {
        2
    }
    fn rank(&self) -> usize {
        1
    }
    fn jet(&self, _chart: usize, x: &[f64]) -> Result<ConnectionJet> {
        let k = self.power as f64;
        let q = 1.0 + x[0] * x[0] + x[1] * x[1];
        let one = |v: Complex64| CMat::from_element(1, 1, v);
        Ok(ConnectionJet {
            omega: PointForm::from_terms(
                2,
                [
                    (MultiIndex::single(0), one(Complex64::new(0.0, k * x[1] / q))),
                    (MultiIndex::single(1), one(Complex64::new(0.0, -k * x[0] / q))),
                ],
            ),
            domega: PointForm::from_terms(
                2,
                [(MultiIndex::top(2), one(Complex64::new(0.0, -2.0 * k / (q * q))))],
            ),
            rank: 1,
        })
    }
}

/// Connection given by a closure for `ω`; `dω` comes from fourth-order
/// differences with step [`FINE_STEP`].
pub struct FnConnection<F> {
    pub dim: usize,
    pub rank: usize,
    pub omega: F,
}

impl<F> Connection for FnConnection<F>
where
    F: Fn(usize, &[f64]) -> MatrixPointForm + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn jet(&self, chart: usize, x: &[f64]) -> Result<ConnectionJet> {
        let omega = (self.omega)(chart, x);
        let zero = CMat::zeros(self.rank, self.rank);
        let component = |y: &[f64], axis: usize| -> CMat {
            (self.omega)(chart, y).get(MultiIndex::single(axis)).cloned().unwrap_or(zero.clone())
        };
        let mut domega = PointForm::zero(self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                // (dω)_ij = ∂_i ω_j − ∂_j ω_i
                let mut c = fine_derivative(|y| component(y, j), x, i, FINE_STEP);
                c.add_scaled(&fine_derivative(|y| component(y, i), x, j, FINE_STEP), (-1.0).into());
                domega.add_term(MultiIndex::from_mask((1 << i) | (1 << j)), &c, 1.0.into());
            }
        }
        Ok(ConnectionJet { omega, domega, rank: self.rank })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_connection_has_zero_curvature() {
        let j = FlatConnection { dim: 4, rank: 3 }.jet(0, &[0.0; 4]).unwrap();
        assert!(j.curvature().is_empty());
    }

    #[test]
    fn levi_civita_curvature_is_metric_area_form() {
        let lc = LeviCivita { manifold: ManifoldId::S2 };
        let (x, y) = (0.4, -1.1);
        let r = lc.jet(0, &[x, y]).unwrap().curvature();
        let l = crate::geometry::manifold::sphere_lambda(x, y);
        let top = r.top().unwrap();
        assert!((top[(0, 1)].re - l * l).abs() < 1e-14);
        assert!((top[(1, 0)].re + l * l).abs() < 1e-14);
    }

    #[test]
    fn closure_connection_matches_analytic_derivative() {
        let lc = LeviCivita { manifold: ManifoldId::S2 };
        let f = FnConnection {
            dim: 2,
            rank: 2,
            omega: |c: usize, x: &[f64]| LeviCivita { manifold: ManifoldId::S2 }.jet(c, x).unwrap().omega,
        };
        let x = [0.3, 0.9];
        let a = lc.jet(0, &x).unwrap().domega;
        let b = f.jet(0, &x).unwrap().domega;
        assert!(a.minus(&b).max_abs() < 1e-10);
    }

    #[test]
    fn lifted_curvature_matches_assembled_curvature() {
        let model = CliffordModel::new(2).unwrap();
        let base: Arc<dyn Connection> = Arc::new(LeviCivita { manifold: ManifoldId::S2xS2 });
        let x = [0.3, -0.7, 1.2, 0.4];
        for half in [Half::Plus, Half::Minus] {
            let e = ExteriorConnection::new(base.clone(), &model, half).unwrap();
            let (j, r) = e.jet_with_curvature(1, &x).unwrap();
            assert!(j.curvature().minus(&r).max_abs() < 1e-13);
        }
    }

    #[test]
    fn exterior_connection_rejects_wrong_rank() {
        let model = CliffordModel::new(2).unwrap();
        let base: Arc<dyn Connection> = Arc::new(LeviCivita { manifold: ManifoldId::S2 });
        assert!(ExteriorConnection::new(base, &model, Half::Plus).is_err());
    }
}
