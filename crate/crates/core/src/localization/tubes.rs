use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bundle::{TruncationField, TruncationProfile};
use crate::error::{Error, Result};
use crate::geometry::{Atlas, ManifoldId};
use crate::numerics::smoothstep5;

/// Shape of a zero component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locus {
    /// An isolated point; normal coordinates are all chart coordinates.
    Point,
    /// `S² × {p}` in S²×S²; normal coordinates are those of the second factor.
    Slice,
}

/// A connected component of the zero set with its tube.
///
/// `home` is the chart in which normal coordinates are measured: the full
/// chart for a point, the second-factor S² chart for a slice.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroComponent {
    pub name: String,
    pub locus: Locus,
    pub home: usize,
    pub center: Vec<f64>,
    pub tube_radius: f64,
}

impl ZeroComponent {
    pub fn codimension(&self) -> usize {
        self.center.len()
    }

    /// Chart holding the normal coordinates of a point given in `chart`.
    pub fn target_chart(&self, manifold: ManifoldId, chart: usize) -> usize {
        match self.locus {
            Locus::Point => self.home,
            Locus::Slice => 2 * manifold.factor_charts(chart)[0] + self.home,
        }
    }

    /// Axes of the target chart spanned by the normal coordinates.
    pub fn normal_axes(&self, manifold: ManifoldId) -> std::ops::Range<usize> {
        match self.locus {
            Locus::Point => 0..manifold.dim(),
            Locus::Slice => 2..4,
        }
    }

    /// Normal coordinates `y − center` and their Jacobian with respect to
    /// the coordinates of `chart`.
    pub fn normal_offset(&self, manifold: ManifoldId, chart: usize, x: &[f64]) -> Option<(Vec<f64>, DMatrix<f64>)> {
        let target = self.target_chart(manifold, chart);
        let axes = self.normal_axes(manifold);
        let y = manifold.transition(chart, target, x)?;
        let j = manifold.transition_jacobian(chart, target, x)?;
        let offset = axes.clone().zip(&self.center).map(|(k, c)| y[k] - c).collect();
        Some((offset, j.rows(axes.start, axes.len()).into_owned()))
    }

    /// Normal distance and its chart gradient; `None` outside the home chart.
    pub fn distance(&self, manifold: ManifoldId, chart: usize, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let (u, j) = self.normal_offset(manifold, chart, x)?;
        let d = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut grad = vec![0.0; x.len()];
        if d > 0.0 {
            for (r, ur) in u.iter().enumerate() {
                for (k, g) in grad.iter_mut().enumerate() {
                    *g += j[(r, k)] * ur / d;
                }
            }
        }
        Some((d, grad))
    }
}

/// Tubes around the zero components together with the truncation profile.
#[derive(Clone, Debug)]
pub struct Tubes {
    manifold: ManifoldId,
    components: Vec<ZeroComponent>,
    profile: TruncationProfile,
}

impl Tubes {
    /// Validates the radii against `injectivity_bound` and checks that no
    /// center lies inside another component's tube.
    pub fn new(
        manifold: ManifoldId,
        components: Vec<ZeroComponent>,
        profile: TruncationProfile,
        injectivity_bound: f64,
    ) -> Result<Self> {
        for c in &components {
            if c.tube_radius >= injectivity_bound || profile.b > c.tube_radius {
                return Err(Error::Config(format!(
                    "tube `{}`: need b = {} ≤ radius = {} < {injectivity_bound}",
                    c.name, profile.b, c.tube_radius
                )));
            }
            let expected = match c.locus {
                Locus::Point => manifold.dim(),
                Locus::Slice if manifold == ManifoldId::S2xS2 => 2,
                Locus::Slice => {
                    return Err(Error::Config(format!("slice component `{}` on {manifold:?}", c.name)))
                }
            };
            let charts = if c.locus == Locus::Slice { 2 } else { manifold.chart_count() };
            if c.center.len() != expected || c.home >= charts {
                return Err(Error::Config(format!("component `{}` has a malformed center or home chart", c.name)));
            }
        }
        let tubes = Tubes { manifold, components, profile };
        for (i, a) in tubes.components.iter().enumerate() {
            for b in &tubes.components[i + 1..] {
                let chart = b.target_chart(manifold, 0);
                let mut x = vec![0.0; manifold.dim()];
                b.normal_axes(manifold).zip(&b.center).for_each(|(k, v)| x[k] = *v);
                if let Some((d, _)) = a.distance(manifold, chart, &x) {
                    if d < a.tube_radius + b.tube_radius {
                        return Err(Error::Config(format!("tubes `{}` and `{}` overlap", a.name, b.name)));
                    }
                }
            }
        }
        Ok(tubes)
    }

    pub fn manifold(&self) -> ManifoldId {
        self.manifold
    }

    pub fn components(&self) -> &[ZeroComponent] {
        &self.components
    }

    pub fn profile(&self) -> TruncationProfile {
        self.profile
    }

    /// Region weights at a point: one per component and the complement.
    /// `m_X = 1` on `d ≤ b`, `0` on `d ≥ radius`, smooth in between.
    pub fn masks_at(&self, chart: usize, x: &[f64]) -> Result<(Vec<f64>, f64)> {
        let mut masks = Vec::with_capacity(self.components.len());
        let mut total = 0.0;
        for c in &self.components {
            let m = match c.distance(self.manifold, chart, x) {
                Some((d, _)) => 1.0 - smoothstep5((d - self.profile.b) / (c.tube_radius - self.profile.b)),
                None => 0.0,
            };
            if m > 0.0 && total > 0.0 {
                return Err(Error::Config(format!("overlapping tubes at chart {chart}, {x:?}")));
            }
            total += m;
            masks.push(m);
        }
        Ok((masks, 1.0 - total))
    }

    /// Normal axes of the first component whose disk `d ≤ b` meets the box
    /// `x ± half_cell`, judged by the linearized distance.
    pub fn tube_axes(&self, chart: usize, x: &[f64], half_cell: &[f64]) -> Option<std::ops::Range<usize>> {
        self.components.iter().find_map(|c| {
            let (d, grad) = c.distance(self.manifold, chart, x)?;
            let margin = 1.5 * grad.iter().zip(half_cell).map(|(g, h)| (g * h).abs()).sum::<f64>();
            (d - margin <= self.profile.b).then(|| c.normal_axes(self.manifold))
        })
    }
}

impl TruncationField for Tubes {
    /// `ρ = Π_X s((d_X − a)/(b − a))`, equal to one away from every tube.
    fn eval(&self, chart: usize, x: &[f64]) -> (f64, Vec<f64>) {
        let mut rho = 1.0;
        let mut grad = vec![0.0; x.len()];
        for c in &self.components {
            let Some((d, dd)) = c.distance(self.manifold, chart, x) else { continue };
            let r = self.profile.value(d);
            let dr = self.profile.derivative(d);
            for (g, v) in grad.iter_mut().zip(&dd) {
                *g = *g * r + rho * dr * v;
            }
            rho *= r;
        }
        (rho, grad)
    }
}

/// Region masks on every node of `atlas`: `[component][chart][node]`, then
/// the complement `[chart][node]`.
pub type RegionMasks = (Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>);

pub fn tube_masks(tubes: &Tubes, atlas: &Atlas) -> Result<RegionMasks> {
    if tubes.manifold() != atlas.manifold() {
        return Err(Error::Config("tubes and atlas live on different manifolds".into()));
    }
    let k = tubes.components().len();
    let mut per = vec![Vec::new(); k];
    let mut complement = Vec::new();
    for chart in atlas.charts() {
        let len = chart.grid.len();
        let mut local = vec![vec![0.0; len]; k];
        let mut rest = vec![0.0; len];
        for node in 0..len {
            let (m, c) = tubes.masks_at(chart.id, &chart.grid.coords(node))?;
            for (dst, v) in local.iter_mut().zip(m) {
                dst[node] = v;
            }
            rest[node] = c;
        }
        per.iter_mut().zip(local).for_each(|(p, l)| p.push(l));
        complement.push(rest);
    }
    Ok((per, complement))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poles() -> Vec<ZeroComponent> {
        (0..2)
            .map(|home| ZeroComponent {
                name: format!("pole{home}"),
                locus: Locus::Point,
                home,
                center: vec![0.0, 0.0],
                tube_radius: 0.8,
            })
            .collect()
    }

    fn profile() -> TruncationProfile {
        TruncationProfile::new(0.4, 0.72).unwrap()
    }

    #[test]
    fn antipodal_masks_partition_unity() {
        let tubes = Tubes::new(ManifoldId::S2, poles(), profile(), 1.0).unwrap();
        let atlas = Atlas::new(ManifoldId::S2, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let p = atlas.sample_point(&mut rng);
            let chart = if p[2] >= 0.0 { 0 } else { 1 };
            let x = ManifoldId::S2.chart_coords(chart, &p).unwrap();
            let (m, c) = tubes.masks_at(chart, &x).unwrap();
            assert!((m.iter().sum::<f64>() + c - 1.0).abs() < 1e-12);
            assert!(m.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn empty_and_single_tube_masks() {
        let none = Tubes::new(ManifoldId::S2, vec![], profile(), 1.0).unwrap();
        assert_eq!(none.masks_at(0, &[0.1, 0.2]).unwrap(), (vec![], 1.0));
        let one = Tubes::new(ManifoldId::S2, poles()[..1].to_vec(), profile(), 1.0).unwrap();
        let (m, c) = one.masks_at(0, &[0.1, 0.2]).unwrap();
        assert_eq!((m[0], c), (1.0, 0.0));
        let (m, c) = one.masks_at(0, &[0.9, 0.2]).unwrap();
        assert_eq!((m[0], c), (0.0, 1.0));
    }

    #[test]
    fn overlapping_and_oversized_tubes_rejected() {
        let mut close = poles();
        close[1].home = 0;
        close[1].center = vec![0.5, 0.0];
        assert!(Tubes::new(ManifoldId::S2, close, profile(), 1.0).is_err());
        let mut big = poles();
        big[0].tube_radius = 1.2;
        assert!(Tubes::new(ManifoldId::S2, big, profile(), 1.0).is_err());
    }

    #[test]
    fn truncation_gradient_matches_differences() {
        let tubes = Tubes::new(ManifoldId::S2, poles(), profile(), 1.0).unwrap();
        // a point of chart 0 inside the south tube's transition band
        let x = [1.5, 0.7];
        let (_, g) = tubes.eval(0, &x);
        let h = 1e-6;
        for k in 0..2 {
            let mut p = x;
            let mut m = x;
            p[k] += h;
            m[k] -= h;
            let fd = (tubes.eval(0, &p).0 - tubes.eval(0, &m).0) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-7, "{fd} vs {}", g[k]);
        }
        assert!(g.iter().any(|v| v.abs() > 1e-3));
    }
}
