use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, RngExt};

use super::manifold::ManifoldId;
use crate::error::{Error, Result};
use crate::forms::{Axis, Grid};

/// One chart with its sampling grid and the partition weight at each node.
#[derive(Clone, Debug)]
pub struct ChartGrid {
    pub id: usize,
    pub grid: Arc<Grid>,
    /// +1 for every built-in chart; kept explicit for the integration rule.
    pub orientation: f64,
    pou: Vec<f64>,
    active: Vec<usize>,
}

impl ChartGrid {
    pub fn partition_weight(&self, node: usize) -> f64 {
        self.pou[node]
    }

    /// Nodes with nonzero partition weight, ascending.
    pub fn active_nodes(&self) -> &[usize] {
        &self.active
    }

    pub fn weight(&self) -> f64 {
        self.grid.weight()
    }
}

/// A scenario manifold sampled at a fixed per-axis resolution.
#[derive(Clone, Debug)]
pub struct Atlas {
    manifold: ManifoldId,
    resolution: usize,
    charts: Vec<ChartGrid>,
}

impl Atlas {
    pub fn new(manifold: ManifoldId, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Config(format!("resolution {resolution} is below 2")));
        }
        let axes = manifold
            .chart_box()
            .into_iter()
            .map(|(lo, hi, periodic)| Axis::new(lo, hi, resolution, periodic))
            .collect::<Result<Vec<_>>>()?;
        let grid = Arc::new(Grid::new(axes)?);
        let charts = (0..manifold.chart_count())
            .map(|id| {
                let pou: Vec<f64> = (0..grid.len())
                    .map(|node| manifold.partition_weight(id, &grid.coords(node)))
                    .collect();
                let active = (0..grid.len()).filter(|&k| pou[k] > 0.0).collect();
                ChartGrid { id, grid: grid.clone(), orientation: 1.0, pou, active }
            })
            .collect();
        Ok(Atlas { manifold, resolution, charts })
    }

    pub fn manifold(&self) -> ManifoldId {
        self.manifold
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn charts(&self) -> &[ChartGrid] {
        &self.charts
    }

    pub fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        self.manifold.metric(x)
    }

    /// Draws a uniformly distributed physical point: unit sphere per S²
    /// factor, unit square for T².
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let sphere = |rng: &mut R| loop {
            let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 1e-3 && r <= 1.0 {
                return p.map(|v| v / r).to_vec();
            }
        };
        match self.manifold {
            ManifoldId::T2 => vec![rng.random::<f64>(), rng.random::<f64>()],
            ManifoldId::S2 => sphere(rng),
            ManifoldId::S2xS2 => {
                let mut p = sphere(rng);
                p.extend(sphere(rng));
                p
            }
        }
    }

    /// Sum of the partition weights at a physical point. Charts whose box
    /// does not contain the point must carry zero weight there; a violation
    /// is reported as an error.
    pub fn partition_sum(&self, p: &[f64]) -> Result<f64> {
        let boxes = self.manifold.chart_box();
        let mut sum = 0.0;
        for chart in 0..self.charts.len() {
            let Some(x) = self.manifold.chart_coords(chart, p) else { continue };
            let w = self.manifold.partition_weight(chart, &x);
            let inside = x
                .iter()
                .zip(&boxes)
                .all(|(v, &(lo, hi, periodic))| periodic || (lo..=hi).contains(v));
            if !inside && w > 0.0 {
                return Err(Error::Contract(format!(
                    "partition weight {w} outside the box of chart {chart}"
                )));
            }
            sum += w;
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partition_sums_to_one_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [ManifoldId::S2, ManifoldId::T2, ManifoldId::S2xS2] {
            let atlas = Atlas::new(m, 4).unwrap();
            for _ in 0..1000 {
                let p = atlas.sample_point(&mut rng);
                let s = atlas.partition_sum(&p).unwrap();
                assert!((s - 1.0).abs() < 1e-12, "{m:?}: {s}");
            }
        }
    }

    #[test]
    fn metric_is_positive_definite_at_nodes() {
        let atlas = Atlas::new(ManifoldId::S2xS2, 6).unwrap();
        let g = &atlas.charts()[0].grid;
        for node in 0..g.len() {
            let m = atlas.metric(&g.coords(node));
            assert_eq!(m, m.transpose());
            assert!(m.symmetric_eigenvalues().iter().all(|&l| l > 0.0));
        }
    }

    #[test]
    fn transition_jacobians_have_positive_determinant() {
        let m = ManifoldId::S2xS2;
        for from in 0..4 {
            for to in 0..4 {
                let j = m.transition_jacobian(from, to, &[0.4, -0.9, 1.2, 0.3]).unwrap();
                assert!(j.determinant() > 0.0);
            }
        }
    }
}
