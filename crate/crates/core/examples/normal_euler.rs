//! The normal-Euler form of a localized pairing on a model where the normal
//! bundle is nontrivial: the zero section of the total space of `L^k` over
//! S², with `v` the tautological section.
//!
//! ```text
//! cargo run --release --example normal_euler
//! ```

use chernloc::bundle::TruncationProfile;
use chernloc::localization::line_bundle_normal_euler;

fn main() -> chernloc::Result<()> {
    let profile = TruncationProfile::new(0.4, 0.72)?;
    for k in [-2, -1, 1, 2, 3] {
        let r = line_bundle_normal_euler(k, 32, profile, 0.8, 5e-2)?;
        println!(
            "L^{k:<2}: tube integral {:>12.8}, ∫ e(N)·(fiber factor) {:>12.8}, error {:.1e}",
            r.lhs_re, r.rhs_re, r.abs_error
        );
    }
    Ok(())
}
