//! Pointwise and gridded differential forms: wedge products, the discrete
//! exterior derivative, and the Chern character of a matrix 2-form.
//!
//! ```text
//! cargo run --example forms
//! ```

use std::sync::Arc;

use num_complex::Complex64;

use chernloc::bundle::chern_character_form;
use chernloc::forms::{DifferentialForm, Grid, MultiIndex, PointForm};
use chernloc::linalg::CMat;
use chernloc::numerics::Stencil;

fn main() -> chernloc::Result<()> {
    // dx₀ + 2dx₁ and dx₂ − dx₃ on R⁴
    let a = PointForm::from_terms(4, [(MultiIndex::single(0), Complex64::new(1.0, 0.0)), (MultiIndex::single(1), 2.0.into())]);
    let b = PointForm::from_terms(4, [(MultiIndex::single(2), Complex64::new(1.0, 0.0)), (MultiIndex::single(3), (-1.0).into())]);
    let ab = a.wedge(&b);
    println!("a ∧ b     = {:?}", ab.terms());
    println!("max |a ∧ a| = {}", a.wedge(&a).max_abs());
    println!("(a∧b)∧(a∧b) has degree {:?}", ab.wedge(&ab).degrees());

    // d of f = sin(2πx)cos(2πy) on the periodic unit square, and d∘d
    let grid = Arc::new(Grid::cube(2, 0.0, 1.0, 32, true)?);
    let f = DifferentialForm::from_fn(grid, |x| {
        let v = (std::f64::consts::TAU * x[0]).sin() * (std::f64::consts::TAU * x[1]).cos();
        PointForm::constant(2, v.into())
    })?;
    let df = f.exterior_derivative(Stencil::Fourth)?;
    let ddf = df.exterior_derivative(Stencil::Fourth)?;
    println!("max |df|  = {:.6}   (2π = {:.6})", df.max_abs(), std::f64::consts::TAU);
    println!("max |ddf| = {:.2e}", ddf.max_abs());

    // ch of a u(1) ⊕ u(1) curvature: 2 + c·tr R + c²·tr R∧R / 2
    let mut r = CMat::zeros(2, 2);
    r[(0, 0)] = Complex64::new(0.0, 1.0);
    r[(1, 1)] = Complex64::new(0.0, -0.5);
    let curvature = PointForm::from_terms(4, [(MultiIndex::from_mask(0b0011), r.clone()), (MultiIndex::from_mask(0b1100), r)]);
    let ch = chern_character_form(&curvature, 2, None)?;
    for k in ch.degrees() {
        println!("ch degree {k}: {:?}", ch.part(k).terms());
    }
    Ok(())
}
