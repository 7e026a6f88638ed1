use num_complex::Complex64;

use super::Atlas;
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::numerics::pairwise_sum_c;

fn check_top(forms: &[DifferentialForm], atlas: &Atlas) -> Result<()> {
    if forms.len() != atlas.charts().len() {
        return Err(Error::Config(format!(
            "{} chart forms for an atlas with {} charts",
            forms.len(),
            atlas.charts().len()
        )));
    }
    for (f, chart) in forms.iter().zip(atlas.charts()) {
        if **f.grid() != *chart.grid {
            return Err(Error::Config(format!("form on chart {} uses a foreign grid", chart.id)));
        }
        if let Some(d) = f.terms().iter().map(|(m, _)| m.degree()).find(|&d| d != atlas.dim()) {
            return Err(Error::Contract(format!(
                "integrand has a degree-{d} part on a {}-manifold",
                atlas.dim()
            )));
        }
    }
    Ok(())
}

/// `Σ_charts Σ_nodes φ · orientation · f_top · w` for one form per chart.
pub fn integrate_top_form(forms: &[DifferentialForm], atlas: &Atlas) -> Result<Complex64> {
    check_top(forms, atlas)?;
    integrate_density(atlas, |chart, node, _| Ok(forms[chart].top_coefficients()[node]))
}

/// Like [`integrate_top_form`] with a per-node weight in `[0, 1]` per chart.
pub fn integrate_region(
    forms: &[DifferentialForm],
    atlas: &Atlas,
    masks: &[Vec<f64>],
) -> Result<Complex64> {
    check_top(forms, atlas)?;
    if masks.len() != forms.len() || masks.iter().zip(forms).any(|(m, f)| m.len() != f.grid().len()) {
        return Err(Error::Config("region mask does not match the atlas grids".into()));
    }
    if let Some(v) = masks.iter().flatten().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Contract(format!("region mask value {v} outside [0, 1]")));
    }
    let tops: Vec<Vec<Complex64>> = forms.iter().map(DifferentialForm::top_coefficients).collect();
    integrate_density(atlas, |chart, node, _| Ok(tops[chart][node] * masks[chart][node]))
}

/// Integrates a top-degree density given by its coordinate coefficient,
/// evaluated only where the partition weight is nonzero.
pub fn integrate_density<F>(atlas: &Atlas, f: F) -> Result<Complex64>
where
    F: Fn(usize, usize, &[f64]) -> Result<Complex64>,
{
    let mut out = integrate_many(atlas, 1, |chart, node, x, acc| {
        acc[0] = f(chart, node, x)?;
        Ok(())
    })?;
    Ok(out.remove(0))
}

/// Integrates `k` densities in one sweep. The callback fills `acc` with the
/// coordinate coefficients at a node; partition weight, orientation and
/// cell volume are applied here. Sums are pairwise per chart and then over
/// charts, so the result does not depend on anything but the grid.
pub fn integrate_many<F>(atlas: &Atlas, k: usize, mut f: F) -> Result<Vec<Complex64>>
where
    F: FnMut(usize, usize, &[f64], &mut [Complex64]) -> Result<()>,
{
    let mut per_chart = vec![Vec::new(); k];
    for chart in atlas.charts() {
        let mut values = vec![Vec::with_capacity(chart.active_nodes().len()); k];
        let scale = chart.orientation * chart.weight();
        let mut acc = vec![Complex64::new(0.0, 0.0); k];
        for &node in chart.active_nodes() {
            acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
            let x = chart.grid.coords(node);
            f(chart.id, node, &x, &mut acc)?;
            let w = scale * chart.partition_weight(node);
            for (v, a) in values.iter_mut().zip(&acc) {
                v.push(a * w);
            }
        }
        for (dst, v) in per_chart.iter_mut().zip(&values) {
            dst.push(pairwise_sum_c(v));
        }
    }
    Ok(per_chart.iter().map(|v| pairwise_sum_c(v)).collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::forms::{MultiIndex, PointForm};
    use crate::geometry::manifold::{sphere_lambda, ManifoldId};

    fn area_forms(atlas: &Atlas) -> Vec<DifferentialForm> {
        atlas
            .charts()
            .iter()
            .map(|c| {
                DifferentialForm::from_fn(Arc::clone(&c.grid), |x| {
                    let l = sphere_lambda(x[0], x[1]);
                    PointForm::from_terms(2, [(MultiIndex::top(2), Complex64::from(l * l))])
                })
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn sphere_area_is_four_pi() {
        let atlas = Atlas::new(ManifoldId::S2, 96).unwrap();
        let a = integrate_top_form(&area_forms(&atlas), &atlas).unwrap();
        let exact = 4.0 * std::f64::consts::PI;
        assert!((a.re - exact).abs() / exact < 1e-4, "{a}");
    }

    #[test]
    fn masks_are_linear_and_validated() {
        let atlas = Atlas::new(ManifoldId::S2, 24).unwrap();
        let forms = area_forms(&atlas);
        let full = integrate_top_form(&forms, &atlas).unwrap();
        let ones: Vec<Vec<f64>> = atlas.charts().iter().map(|c| vec![1.0; c.grid.len()]).collect();
        assert_eq!(integrate_region(&forms, &atlas, &ones).unwrap(), full);
        let zeros: Vec<Vec<f64>> = ones.iter().map(|m| vec![0.0; m.len()]).collect();
        assert_eq!(integrate_region(&forms, &atlas, &zeros).unwrap(), Complex64::new(0.0, 0.0));
        let m: Vec<Vec<f64>> = atlas
            .charts()
            .iter()
            .map(|c| (0..c.grid.len()).map(|k| c.grid.coords(k)[0].abs().min(1.0)).collect())
            .collect();
        let comp: Vec<Vec<f64>> = m.iter().map(|v| v.iter().map(|x| 1.0 - x).collect()).collect();
        let split = integrate_region(&forms, &atlas, &m).unwrap()
            + integrate_region(&forms, &atlas, &comp).unwrap();
        assert!((split - full).norm() < 1e-12);
        let mut bad = ones.clone();
        bad[0][3] = 1.5;
        assert!(integrate_region(&forms, &atlas, &bad).is_err());
    }

    #[test]
    fn wrong_degree_is_a_contract_violation() {
        let atlas = Atlas::new(ManifoldId::T2, 8).unwrap();
        let f = DifferentialForm::from_fn(Arc::clone(&atlas.charts()[0].grid), |_| {
            PointForm::from_terms(2, [(MultiIndex::single(0), Complex64::from(1.0))])
        })
        .unwrap();
        assert!(matches!(integrate_top_form(&[f], &atlas), Err(Error::Contract(_))));
    }

    #[test]
    fn torus_area_form_integrates_to_one() {
        let atlas = Atlas::new(ManifoldId::T2, 16).unwrap();
        let f = DifferentialForm::from_fn(Arc::clone(&atlas.charts()[0].grid), |_| {
            PointForm::from_terms(2, [(MultiIndex::top(2), Complex64::from(1.0))])
        })
        .unwrap();
        assert!((integrate_top_form(&[f], &atlas).unwrap().re - 1.0).abs() < 1e-10);
    }
}
