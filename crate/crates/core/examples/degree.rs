//! Local degree of an invertible bundle map around an isolated zero, from
//! the boundary integral of `tr((v⁻¹dv)^{2n−1})`.
//!
//! ```text
//! cargo run --release --example degree
//! ```

use num_complex::Complex64;

use chernloc::bundle::{degree_at_zero, degree_value, FnMap};
use chernloc::geometry::{BoundarySphere, ManifoldId};
use chernloc::linalg::CMat;

fn main() -> chernloc::Result<()> {
    for k in -3i32..=3 {
        let zk = FnMap {
            dim: 2,
            rank_plus: 1,
            rank_minus: 1,
            f: move |_: usize, x: &[f64]| CMat::from_element(1, 1, Complex64::new(x[0], x[1]).powi(k)),
        };
        let s = BoundarySphere::new(ManifoldId::S2, 0, vec![0.0, 0.0], 0.4, 64, 1.0)?;
        println!("z^{k:<2}: integral {:.12}, degree {}", degree_value(&zk, &s)?.re, degree_at_zero(&zk, &s)?);
    }

    // a quaternion-type zero in R⁴ and its conjugate
    let c = |re: f64, im: f64| Complex64::new(re, im);
    for sign in [1.0, -1.0] {
        let q = FnMap {
            dim: 4,
            rank_plus: 2,
            rank_minus: 2,
            f: move |_: usize, x: &[f64]| {
                let y = [x[0], sign * x[1], sign * x[2], sign * x[3]];
                CMat::from_row_slice(2, 2, &[c(y[0], y[3]), c(y[2], y[1]), c(-y[2], y[1]), c(y[0], -y[3])])
            },
        };
        let s = BoundarySphere::new(ManifoldId::S2xS2, 0, vec![0.0; 4], 0.3, 16, 1.0)?;
        println!("quaternion, sign {sign:+}: degree {}", degree_at_zero(&q, &s)?);
    }
    Ok(())
}
