use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::check::CheckResult;
use super::fiber::{graded_form, graded_top, localized_pairing, normal_euler_parts};
use super::tubes::{Locus, Tubes};
use crate::bundle::{
    degree_at_zero, euler_form, graded_chern_top, transgression_value, BlockConnection, BundleMap, Connection,
    DeformedConnection, DeformedPoint, ExteriorConnection, GradedConnection, Half, LeviCivita, SymbolMap, VectorFieldPair,
};
use crate::clifford::{CliffordModel, PointClass};
use crate::error::{Error, Result};
use crate::geometry::{euler_char_oracle, integrate_many, oracle_mesh, Atlas, BoundarySphere, ManifoldId};

/// Radius bound every tube and degree sphere must respect, in chart units.
pub const INJECTIVITY_BOUND: f64 = 1.0;
/// Random points drawn when cross-checking the declared zero set.
pub const ZERO_SET_SAMPLES: usize = 500;
/// Nodes on the azimuth of a degree sphere.
pub const DEGREE_SPHERE_NODES: usize = 64;
/// Sub-cells per normal axis for grid cells inside the truncation radius.
pub const BAND_SUBDIVISION: usize = 2;

/// A graded bundle with a bundle map and tubes around the zeros of the map.
pub struct Problem {
    pub atlas: Atlas,
    pub block: BlockConnection,
    pub map: Arc<dyn BundleMap>,
    pub tubes: Arc<Tubes>,
    pub deformed: DeformedConnection,
    /// Present when `E = Λ(T*M ⊗ ℂ)` with the signature grading and `v = v_K`.
    pub symbol: Option<(CliffordModel, Arc<dyn VectorFieldPair>)>,
}

impl Problem {
    pub fn new(atlas: Atlas, block: BlockConnection, map: Arc<dyn BundleMap>, tubes: Tubes) -> Result<Self> {
        if tubes.manifold() != atlas.manifold() || block.dim() != atlas.dim() {
            return Err(Error::Config("bundle, tubes and atlas disagree on the manifold".into()));
        }
        let tubes = Arc::new(tubes);
        let deformed = DeformedConnection::new(block.clone(), map.clone(), tubes.clone())?;
        Ok(Problem { atlas, block, map, tubes, deformed, symbol: None })
    }

    /// The signature-graded exterior bundle with the Levi-Civita connection
    /// and `v = v_K` for the field `K = ξ + √−1η`.
    pub fn signature(atlas: Atlas, field: Arc<dyn VectorFieldPair>, tubes: Tubes) -> Result<Self> {
        let manifold = atlas.manifold();
        let model = CliffordModel::new(manifold.dim() / 2)?;
        let lc: Arc<dyn Connection> = Arc::new(LeviCivita { manifold });
        let block = BlockConnection::new(
            Arc::new(ExteriorConnection::new(lc.clone(), &model, Half::Plus)?),
            Arc::new(ExteriorConnection::new(lc, &model, Half::Minus)?),
        )?;
        let map: Arc<dyn BundleMap> = Arc::new(SymbolMap::new(&model, field.clone())?);
        let mut p = Problem::new(atlas, block, map, tubes)?;
        p.symbol = Some((model, field));
        Ok(p)
    }

    pub fn manifold(&self) -> ManifoldId {
        self.atlas.manifold()
    }

    pub fn n(&self) -> usize {
        self.atlas.dim() / 2
    }
}

/// Everything one pass over the chart grids produces.
#[derive(Clone, Debug)]
pub struct Sweep {
    /// `∫ ch(E₊) − ch(E₋)` with the block connection.
    pub global: Complex64,
    /// Masked integrals of the deformed graded Chern character, per tube.
    pub tubes: Vec<Complex64>,
    pub complement: Complex64,
    /// Sup of the deformed integrand over nodes where `ρ = 1`.
    pub complement_sup: f64,
    /// `∫ e(TM)` with the Levi-Civita connection.
    pub euler: Complex64,
    pub seconds: f64,
}

/// Deformed graded integrand at a point.
fn deformed_top(p: &Problem, chart: usize, x: &[f64]) -> Result<(Complex64, DeformedPoint)> {
    let local = p.deformed.local(chart, x)?;
    let (rp, rm) = local.curvatures();
    Ok((graded_chern_top(&rp, &rm), local))
}

pub fn sweep(p: &Problem) -> Result<Sweep> {
    let start = Instant::now();
    let k = p.tubes.components().len();
    let lc = LeviCivita { manifold: p.manifold() };
    let manifold = p.manifold();
    let dim = p.atlas.dim();
    let steps: Vec<f64> = p.atlas.charts()[0].grid.axes().iter().map(|a| a.step()).collect();
    let half_cell: Vec<f64> = steps.iter().map(|h| 0.5 * h).collect();
    let mut sup = 0.0f64;
    let sums = integrate_many(&p.atlas, k + 3, |chart, node, x, acc| {
        let (value, local) = deformed_top(p, chart, x)?;
        let [bp, bm] = &local.base_curvature;
        acc[0] = graded_chern_top(bp, bm);
        acc[1] = euler_form(&lc.jet(chart, x)?.curvature(), dim)?.top_or_zero();
        if local.rho == 1.0 && local.drho.is_empty() {
            sup = sup.max(value.norm());
        }
        let deposit = |acc: &mut [Complex64], y: &[f64], value: Complex64, w: f64| -> Result<()> {
            let (masks, rest) = p.tubes.masks_at(chart, y)?;
            acc[2] += value * rest * w;
            for (a, m) in acc[3..].iter_mut().zip(&masks) {
                *a += value * *m * w;
            }
            Ok(())
        };
        let Some(axes) = p.tubes.tube_axes(chart, x, &half_cell) else {
            return deposit(acc, x, value, 1.0);
        };
        // the integrand is only C¹ across the truncation band. Refining all
        // of `d ≤ b`, not just the band, puts the edge of the refined region
        // where the deformed integrand vanishes identically, so the midpoint
        // rule's error cancellation survives on both sides of it.
        let pou = p.atlas.charts()[chart].partition_weight(node);
        let pieces = BAND_SUBDIVISION.pow(axes.len() as u32);
        let mut y = x.to_vec();
        for piece in 0..pieces {
            let mut rest = piece;
            for axis in axes.clone() {
                let j = rest % BAND_SUBDIVISION;
                rest /= BAND_SUBDIVISION;
                y[axis] = x[axis] + steps[axis] * ((j as f64 + 0.5) / BAND_SUBDIVISION as f64 - 0.5);
            }
            let w = manifold.partition_weight(chart, &y) / (pou * pieces as f64);
            if w == 0.0 {
                continue;
            }
            let (v, _) = deformed_top(p, chart, &y)?;
            deposit(acc, &y, v, w)?;
        }
        Ok(())
    })?;
    Ok(Sweep {
        global: sums[0],
        euler: sums[1],
        complement: sums[2],
        tubes: sums[3..].to_vec(),
        complement_sup: sup,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// The Euler characteristic of the scenario manifold from its oracle mesh.
pub fn oracle_chi(manifold: ManifoldId) -> Result<i64> {
    euler_char_oracle(&oracle_mesh(manifold))
}

pub fn check_tube_localization(s: &Sweep, tolerance: f64) -> CheckResult {
    let sum: Complex64 = s.tubes.iter().sum();
    CheckResult::compare("tube_localization", s.global, sum, tolerance).timed(s.seconds)
}

pub fn check_complement(s: &Sweep, vanishing_tol: f64, tolerance: f64) -> [CheckResult; 2] {
    [
        CheckResult::real("complement_vanishing", s.complement_sup, 0.0, vanishing_tol)
            .with_note("sup of the deformed graded integrand where ρ = 1"),
        CheckResult::compare("complement_integral", s.complement, 0.0.into(), tolerance),
    ]
}

pub fn check_gauss_bonnet(p: &Problem, s: &Sweep, tolerance: f64) -> Result<CheckResult> {
    Ok(CheckResult::real("gauss_bonnet", s.euler.re, oracle_chi(p.manifold())? as f64, tolerance)
        .with_note("∫ Pf(R/2π) of the Levi-Civita connection against the mesh oracle"))
}

/// Tube integrals by fiber quadrature, one per component.
pub fn localized_pairings(p: &Problem) -> Result<Vec<Complex64>> {
    p.tubes
        .components()
        .iter()
        .map(|c| {
            localized_pairing(p.manifold(), c, p.tubes.profile(), p.atlas.resolution(), |chart, x| {
                graded_top(&p.deformed, chart, x)
            })
        })
        .collect()
}

pub fn check_localized_pairings(s: &Sweep, pairings: &[Complex64], seconds: f64, tolerance: f64) -> CheckResult {
    let sum: Complex64 = pairings.iter().sum();
    CheckResult::compare("localized_pairings", s.global, sum, tolerance)
        .with_note("global integral against fiber-quadrature tube integrals")
        .timed(seconds)
}

/// Local degrees at isolated zeros; `None` if some component is not a point.
pub fn degrees(p: &Problem) -> Result<Option<Vec<i64>>> {
    let comps = p.tubes.components();
    if comps.iter().any(|c| c.locus != Locus::Point) {
        return Ok(None);
    }
    let radius = 0.5 * (p.tubes.profile().b + comps.iter().map(|c| c.tube_radius).fold(f64::INFINITY, f64::min));
    comps
        .iter()
        .map(|c| {
            let s = BoundarySphere::new(p.manifold(), c.home, c.center.clone(), radius, DEGREE_SPHERE_NODES, INJECTIVITY_BOUND)?;
            degree_at_zero(p.map.as_ref(), &s)
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// `∫ch(E₊) − ch(E₋) = (−1)^{n−1}Σ deg`, and the negated sum as a
/// diagnostic.
pub fn check_degree_sum(n: usize, s: &Sweep, degrees: &[i64], tolerance: f64) -> [CheckResult; 2] {
    let sum: i64 = degrees.iter().sum();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let note = format!("local degrees {degrees:?}");
    [
        CheckResult::compare("degree_sum", s.global, (sign * sum as f64).into(), tolerance).with_note(note.clone()),
        CheckResult::compare("degree_sum_negated", s.global, (-(sum as f64)).into(), tolerance)
            .as_diagnostic()
            .with_note(note),
    ]
}

pub fn check_exterior_character(p: &Problem, s: &Sweep, tolerance: f64) -> Result<CheckResult> {
    let chi = oracle_chi(p.manifold())?;
    let rhs = (-2.0f64).powi(p.n() as i32) * chi as f64;
    Ok(CheckResult::compare("exterior_algebra_character", s.global, rhs.into(), tolerance))
}

pub fn check_euler_recovery(p: &Problem, pairings: &[Complex64], tolerance: f64) -> Result<CheckResult> {
    let n = p.n();
    let sum: Complex64 = pairings.iter().sum();
    let lhs = sum / (-2.0f64).powi(n as i32);
    let r = CheckResult::compare("euler_characteristic_recovery", lhs, (oracle_chi(p.manifold())? as f64).into(), tolerance);
    Ok(if n < 2 { r.with_note("outside theorem hypothesis (n = 1)") } else { r })
}

/// Normal-Euler identity for each component. Isolated points and trivial
/// normal bundles are degenerate and reported as diagnostics only.
pub fn check_normal_euler(p: &Problem, pairings: &[Complex64], grid_tubes: &[Complex64], tolerance: f64) -> Result<Vec<CheckResult>> {
    let profile = p.tubes.profile();
    let mut out = Vec::new();
    for (i, c) in p.tubes.components().iter().enumerate() {
        let start = Instant::now();
        let r = match c.locus {
            Locus::Point => CheckResult::compare("normal_euler_identity", pairings[i], grid_tubes[i], tolerance)
                .with_note(format!("{}: isolated point, the localized pairing is the tube integral", c.name)),
            Locus::Slice => {
                if c.codimension() % 2 == 1 {
                    return Err(Error::DiagnosticUndefined(format!("{} has odd codimension", c.name)));
                }
                // the normal bundle of S² × {p} is trivial and the induced
                // connection pulls back to zero, so e(N) ≡ 0
                let parts = normal_euler_parts(
                    p.atlas.resolution(),
                    &[0.0, profile.a, profile.b, c.tube_radius],
                    [c.center[0], c.center[1]],
                    |base| 2 * base + c.home,
                    |chart, x| graded_form(&p.deformed.graded_jet(chart, x)?),
                    |_, _| Ok(0.0),
                )?;
                CheckResult::compare("normal_euler_identity", parts.restricted, parts.euler_times_fiber, tolerance)
                    .with_note(format!("{}: trivial normal bundle, e(N) = 0; reported only", c.name))
            }
        };
        out.push(r.as_diagnostic().timed(start.elapsed().as_secs_f64()));
    }
    Ok(out)
}

/// `−c∫m·dT` against `∫m·ch(∇) − ∫m·ch(∇̃)` on the first tube, or on the
/// whole manifold when there are no tubes.
pub fn check_transgression(p: &Problem, tolerance: f64) -> Result<CheckResult> {
    let start = Instant::now();
    let tubes = p.tubes.clone();
    let mask = move |chart: usize, x: &[f64]| -> f64 {
        match tubes.masks_at(chart, x) {
            Ok((m, _)) if !m.is_empty() => m[0],
            Ok(_) => 1.0,
            Err(_) => f64::NAN,
        }
    };
    let lhs = transgression_value(&p.block, &p.deformed, &p.atlas, &mask)?;
    let sums = integrate_many(&p.atlas, 2, |chart, _node, x, acc| {
        let m = mask(chart, x);
        if m != 0.0 {
            acc[0] = graded_top(&p.block, chart, x)? * m;
            acc[1] = graded_top(&p.deformed, chart, x)? * m;
        }
        Ok(())
    })?;
    let region = if p.tubes.components().is_empty() { "M".to_string() } else { p.tubes.components()[0].name.clone() };
    Ok(CheckResult::compare("transgression", lhs, sums[0] - sums[1], tolerance)
        .with_note(format!("region {region}"))
        .timed(start.elapsed().as_secs_f64()))
}

/// Chart of largest partition weight covering an embedded point.
fn best_chart(manifold: ManifoldId, p: &[f64]) -> Option<(usize, Vec<f64>)> {
    (0..manifold.chart_count())
        .filter_map(|c| manifold.chart_coords(c, p).map(|x| (c, x)))
        .max_by(|a, b| manifold.partition_weight(a.0, &a.1).total_cmp(&manifold.partition_weight(b.0, &b.1)))
}

/// Classifies random points and the declared components. A noninvertible
/// point away from every declared component, or a declared component that
/// does not classify as a zero, is a mismatch.
pub fn check_zero_set(p: &Problem, seed: u64) -> Result<CheckResult> {
    let start = Instant::now();
    let Some((model, field)) = &p.symbol else {
        return Err(Error::Config("zero-set sampling needs a vector field".into()));
    };
    let manifold = p.manifold();
    let comps = p.tubes.components();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut plus_frames = 0;
    for _ in 0..ZERO_SET_SAMPLES {
        let q = p.atlas.sample_point(&mut rng);
        let (chart, x) = best_chart(manifold, &q).ok_or_else(|| Error::Contract("sample outside every chart".into()))?;
        let (xi, eta) = field.components(chart, &x);
        let class = model.classify(&xi, &eta)?;
        plus_frames += (class == PointClass::ZeroPlusFrame) as usize;
        let near = comps.iter().any(|c| c.distance(manifold, chart, &x).is_some_and(|(d, _)| d < 1e-6));
        if class == PointClass::ZeroNoninvertible && !near {
            mismatches.push(format!("undeclared zero at {q:?}"));
        }
    }
    for c in comps {
        let probes: Vec<(usize, Vec<f64>)> = match c.locus {
            Locus::Point => vec![(c.home, c.center.clone())],
            Locus::Slice => [[0.0, 0.0], [0.7, -0.4]]
                .iter()
                .flat_map(|b| (0..2).map(move |c1| (c1, *b)))
                .map(|(c1, b)| (2 * c1 + c.home, vec![b[0], b[1], c.center[0], c.center[1]]))
                .collect(),
        };
        for (chart, x) in probes {
            let (xi, eta) = field.components(chart, &x);
            if model.classify(&xi, &eta)? != PointClass::ZeroNoninvertible {
                mismatches.push(format!("declared component {} is not a zero at {x:?}", c.name));
            }
        }
    }
    if !mismatches.is_empty() {
        return Err(Error::ZeroSetMismatch(mismatches.join("; ")));
    }
    Ok(CheckResult::real("zero_set_sampling", 0.0, 0.0, 0.0)
        .with_note(format!("{ZERO_SET_SAMPLES} samples, {plus_frames} zero_plus_frame"))
        .timed(start.elapsed().as_secs_f64()))
}
