//! Property tests across modules, and the convergence order of the stencil.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use crate::bundle::{chern_character_form, degree_at_zero, FnMap, TruncationProfile};
use crate::forms::{
    matrix_exp_form, DifferentialForm, Grid, MatrixForm, MatrixPointForm, MultiIndex, PointForm, ScalarPointForm,
};
use crate::geometry::{BoundarySphere, ManifoldId};
use crate::linalg::CMat;
use crate::localization::{Locus, Tubes, ZeroComponent};
use crate::numerics::Stencil;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

/// A scalar form on `R^dim` with random coefficients on the given degrees.
fn scalar_form(dim: usize, degrees: Vec<usize>) -> impl Strategy<Value = ScalarPointForm> {
    let slots: Vec<MultiIndex> =
        degrees.iter().flat_map(|&k| MultiIndex::all_of_degree(dim, k)).collect();
    proptest::collection::vec(coeff(), slots.len())
        .prop_map(move |c| PointForm::from_terms(dim, slots.iter().copied().zip(c)))
}

fn matrix(rank: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec(coeff(), rank * rank).prop_map(move |v| CMat::from_vec(rank, rank, v))
}

fn matrix_two_form(dim: usize, rank: usize) -> impl Strategy<Value = MatrixPointForm> {
    let slots = MultiIndex::all_of_degree(dim, 2);
    proptest::collection::vec(matrix(rank), slots.len())
        .prop_map(move |ms| PointForm::from_terms(dim, slots.iter().copied().zip(ms)))
}

fn close(a: &ScalarPointForm, b: &ScalarPointForm, tol: f64) -> bool {
    a.minus(b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn odd_one_forms_square_to_zero(a in scalar_form(4, vec![1])) {
        let sq = a.wedge(&a);
        prop_assert!(sq.terms().iter().all(|(_, c)| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn odd_three_forms_square_to_zero(a in scalar_form(4, vec![3])) {
        prop_assert!(a.wedge(&a).terms().iter().all(|(_, c)| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative(
        a in scalar_form(4, vec![1]),
        b in scalar_form(4, vec![2]),
        c in scalar_form(4, vec![1]),
    ) {
        let left = a.wedge(&b).wedge(&c);
        let right = a.wedge(&b.wedge(&c));
        prop_assert!(close(&left, &right, 1e-13));
        // a∧c = −c∧a for 1-forms, b∧a = a∧b for a 2-form
        prop_assert!(close(&a.wedge(&c), &c.wedge(&a).scaled((-1.0).into()), 1e-13));
        prop_assert!(close(&b.wedge(&a), &a.wedge(&b), 1e-13));
    }

    #[test]
    fn traces_of_powers_are_gauge_invariant(omega in matrix_two_form(4, 3), g in matrix(3)) {
        let g = g + CMat::identity(3, 3) * Complex64::new(4.0, 0.0);
        let g_inv = g.clone().try_inverse().unwrap();
        let conj = omega.conjugated(&g_inv, &g);
        let (mut p, mut q) = (omega.clone(), conj.clone());
        for _ in 1..=2 {
            prop_assert!(close(&p.trace(), &q.trace(), 1e-10));
            p = p.wedge(&omega);
            q = q.wedge(&conj);
        }
    }

    #[test]
    fn exp_series_matches_repeated_wedges(omega in matrix_two_form(4, 2)) {
        let e = matrix_exp_form(&omega, 2).unwrap();
        // 1 + Ω + Ω∧Ω/2, assembled term by term
        let mut expected = PointForm::from_terms(4, [(MultiIndex::EMPTY, CMat::identity(2, 2))]);
        expected.add_scaled(&omega, 1.0.into());
        let mut sq = PointForm::zero(4);
        for (mi, a) in omega.terms() {
            for (mj, b) in omega.terms() {
                if let Some(s) = mi.wedge_sign(*mj) {
                    sq.add_term(mi.union(*mj), &(a * b), Complex64::new(s, 0.0));
                }
            }
        }
        expected.add_scaled(&sq, 0.5.into());
        prop_assert!(e.minus(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn tube_masks_partition_unity(
        x in -1.7..1.7f64, y in -1.7..1.7f64, z in -1.7..1.7f64, w in -1.7..1.7f64, chart in 0usize..4,
    ) {
        let comp = |name: &str, home| ZeroComponent {
            name: name.into(),
            locus: Locus::Slice,
            home,
            center: vec![0.0, 0.0],
            tube_radius: 0.8,
        };
        let tubes = Tubes::new(
            ManifoldId::S2xS2,
            vec![comp("north", 0), comp("south", 1)],
            TruncationProfile::new(0.4, 0.72).unwrap(),
            1.0,
        )
        .unwrap();
        let (masks, rest) = tubes.masks_at(chart, &[x, y, z, w]).unwrap();
        prop_assert!(masks.iter().chain([&rest]).all(|m| (0.0..=1.0).contains(m)));
        prop_assert!((masks.iter().sum::<f64>() + rest - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_is_radius_independent(k in -3i32..=3, r in 0.2..0.45f64) {
        let map = FnMap {
            dim: 2,
            rank_plus: 1,
            rank_minus: 1,
            f: move |_: usize, x: &[f64]| CMat::from_element(1, 1, Complex64::new(x[0], x[1]).powi(k)),
        };
        let deg = |radius: f64| {
            let s = BoundarySphere::new(ManifoldId::S2, 0, vec![0.0, 0.0], radius, 64, 1.0).unwrap();
            degree_at_zero(&map, &s).unwrap()
        };
        prop_assert_eq!(deg(r), deg(2.0 * r));
        prop_assert_eq!(deg(r), k as i64);
    }
}

/// A smooth non-abelian connection on the periodic 4-torus.
fn torus_omega(x: &[f64]) -> MatrixPointForm {
    use std::f64::consts::TAU;
    // mixed frequencies: a single Fourier mode is an eigenfunction of the
    // periodic stencil, and the discrete derivatives would commute exactly
    let s = |k: usize| (TAU * x[k]).sin() + 0.3 * (2.0 * TAU * x[k]).cos();
    let c = |k: usize| (TAU * x[k]).cos() + 0.2 * (3.0 * TAU * x[k]).sin();
    // u(2)-valued, with a nonzero trace part so that ch has a 2-form part
    let m = |a: f64, b: f64, d: f64| {
        CMat::from_row_slice(
            2,
            2,
            &[Complex64::new(0.0, a + b), Complex64::new(b, d), Complex64::new(-b, d), Complex64::new(0.0, -a)],
        )
    };
    PointForm::from_terms(
        4,
        [
            (MultiIndex::single(0), m(s(1), c(2) * 0.5, 0.3 * s(3))),
            (MultiIndex::single(1), m(c(0) * s(2), 0.2, c(3))),
            (MultiIndex::single(2), m(0.4 * c(3), s(0) * s(1), 0.0)),
            (MultiIndex::single(3), m(s(2), 0.0, 0.6 * c(1))),
        ],
    )
}

/// `d_h` applied to the exact differential of `f = tr ω`. The exact
/// `d(tr ω)` is closed, so whatever `d_h` returns is the stencil's
/// truncation error on a closed form.
fn dd_residual(n: usize) -> f64 {
    let grid = Arc::new(Grid::cube(4, 0.0, 1.0, n, true).unwrap());
    let exact_d_trace = DifferentialForm::from_fn(grid, |x| {
        let h = 1e-4;
        let tr = |y: &[f64]| torus_omega(y).trace();
        let mut out = PointForm::zero(4);
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                // ∂_i ω_j dx_i ∧ dx_j, by a fine centered difference
                let mut yp = x.to_vec();
                let mut ym = x.to_vec();
                yp[i] += h;
                ym[i] -= h;
                let comp = |f: ScalarPointForm| f.get(MultiIndex::single(j)).copied().unwrap_or_default();
                let d = (comp(tr(&yp)) - comp(tr(&ym))) / (2.0 * h);
                out.add_term(MultiIndex::single(i).union(MultiIndex::single(j)), &d, i_before_j(i, j).into());
            }
        }
        out
    })
    .unwrap();
    exact_d_trace.exterior_derivative(Stencil::Fourth).unwrap().max_abs()
}

fn i_before_j(i: usize, j: usize) -> f64 {
    if i < j { 1.0 } else { -1.0 }
}

#[test]
fn dd_residual_decays_at_the_stencil_order() {
    let coarse = dd_residual(12);
    let fine = dd_residual(24);
    let slope = (coarse / fine).log2();
    assert!((slope - Stencil::Fourth.order() as f64).abs() < 0.3, "slope {slope} ({coarse:e} → {fine:e})");
    // applying the discrete d twice cancels to rounding: the stencils commute
    let grid = Arc::new(Grid::cube(4, 0.0, 1.0, 12, true).unwrap());
    let f = DifferentialForm::from_fn(grid, |x| torus_omega(x).trace()).unwrap();
    let dd = f.exterior_derivative(Stencil::Fourth).unwrap().exterior_derivative(Stencil::Fourth).unwrap();
    assert!(dd.max_abs() < 1e-10, "{}", dd.max_abs());
}

#[test]
fn chern_form_is_closed_to_stencil_accuracy() {
    let n = 12;
    let grid = Arc::new(Grid::cube(4, 0.0, 1.0, n, true).unwrap());
    let curvature = MatrixForm::from_fn(grid, |x| {
        // R = dω + ω∧ω with dω from fine differences of the closed-form ω
        let h = 1e-4;
        let om = torus_omega(x);
        let mut r = om.wedge(&om);
        for i in 0..4 {
            let mut yp = x.to_vec();
            let mut ym = x.to_vec();
            yp[i] += h;
            ym[i] -= h;
            let (p, m) = (torus_omega(&yp), torus_omega(&ym));
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let d = (p.get(MultiIndex::single(j)).unwrap() - m.get(MultiIndex::single(j)).unwrap()) / Complex64::new(2.0 * h, 0.0);
                r.add_term(MultiIndex::single(i).union(MultiIndex::single(j)), &d, i_before_j(i, j).into());
            }
        }
        r
    })
    .unwrap();
    let ch = curvature.map_points(|r| chern_character_form(r, 2, None)).unwrap();
    let d_ch = ch.exterior_derivative(Stencil::Fourth).unwrap().max_abs();
    let reference = dd_residual(n);
    assert!(d_ch <= 10.0 * reference, "‖d ch‖ = {d_ch:e}, d∘d residual {reference:e}");
}
