//! The transgression between the block connection and its deformation by
//! `v` on S²: `−c∫dT` over the south tube against the difference of the
//! two graded Chern character integrals, and the full-sphere version where
//! both characters integrate to the same number.
//!
//! ```text
//! cargo run --release --example transgression
//! ```

use chernloc::bundle::transgression_value;
use chernloc::geometry::integrate_density;
use chernloc::localization::fiber::graded_top;
use chernloc::scenario::{builtin, ConfigOverride};

fn main() -> chernloc::Result<()> {
    let mut cfg = builtin("s2_corollary1")?;
    cfg.apply(ConfigOverride { resolution: Some(48), ..Default::default() })?;
    let p = cfg.build()?;

    let tubes = p.tubes.clone();
    let south = move |chart: usize, x: &[f64]| tubes.masks_at(chart, x).map(|(m, _)| m[0]).unwrap_or(f64::NAN);
    let t = transgression_value(&p.block, &p.deformed, &p.atlas, &south)?;
    let block = integrate_density(&p.atlas, |c, _, x| Ok(graded_top(&p.block, c, x)? * south(c, x)))?;
    let deformed = integrate_density(&p.atlas, |c, _, x| Ok(graded_top(&p.deformed, c, x)? * south(c, x)))?;
    println!("south tube: −c∫dT = {:.8}, ∫ch(∇) − ∫ch(∇̃) = {:.8}", t.re, (block - deformed).re);
    println!("            ∫ch(∇) = {:.8}, ∫ch(∇̃) = {:.8}", block.re, deformed.re);

    // on all of S² both sides vanish up to quadrature error
    let everywhere = |_: usize, _: &[f64]| 1.0;
    let t = transgression_value(&p.block, &p.deformed, &p.atlas, everywhere)?;
    let block = integrate_density(&p.atlas, |c, _, x| graded_top(&p.block, c, x))?;
    let deformed = integrate_density(&p.atlas, |c, _, x| graded_top(&p.deformed, c, x))?;
    println!("whole sphere: −c∫dT = {:.3e}, ∫ch(∇) − ∫ch(∇̃) = {:.3e}", t.re, (block - deformed).re);
    Ok(())
}
