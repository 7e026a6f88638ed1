//! Integrates the Euler form of the Levi-Civita connection over each
//! built-in manifold and compares with the Euler characteristic counted
//! from a triangulation.
//!
//! ```text
//! cargo run --release --example gauss_bonnet
//! ```

use chernloc::bundle::{euler_form, Connection, LeviCivita};
use chernloc::geometry::{euler_char_oracle, integrate_density, oracle_mesh, Atlas, ManifoldId};

fn main() -> chernloc::Result<()> {
    for (manifold, resolution) in [(ManifoldId::S2, 24), (ManifoldId::S2, 48), (ManifoldId::S2, 96), (ManifoldId::T2, 32), (ManifoldId::S2xS2, 12)] {
        let atlas = Atlas::new(manifold, resolution)?;
        let lc = LeviCivita { manifold };
        let dim = manifold.dim();
        let chi = integrate_density(&atlas, |chart, _, x| Ok(euler_form(&lc.jet(chart, x)?.curvature(), dim)?.top_or_zero()))?;
        let mesh = oracle_mesh(manifold);
        println!(
            "{manifold:?} at {resolution:>3}: ∫ e = {:.10}, mesh {:?} gives χ = {}",
            chi.re,
            mesh.counts(),
            euler_char_oracle(&mesh)?
        );
    }
    Ok(())
}
