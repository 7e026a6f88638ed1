//! The signature-graded Clifford model of `Λ(R^{2n}) ⊗ C` and the pointwise
//! classification of a pair `(ξ, η)` by `h(K, K)` and invertibility of `v_K`.
//!
//! ```text
//! cargo run --example clifford
//! ```

use chernloc::clifford::CliffordModel;

fn main() -> chernloc::Result<()> {
    for n in 1..=3 {
        let m = CliffordModel::new(n)?;
        println!(
            "n = {n}: Λ has dimension {}, Λ₊ and Λ₋ have rank {} and {}",
            m.size(),
            m.basis_plus().ncols(),
            m.basis_minus().ncols()
        );
    }

    let m = CliffordModel::new(1)?;
    let pairs: [(&str, [f64; 2], [f64; 2]); 5] = [
        ("ξ alone", [1.0, 0.0], [0.0, 0.0]),
        ("ξ = η", [1.0, 1.0], [1.0, 1.0]),
        ("oriented frame", [1.0, 0.0], [0.0, 1.0]),
        ("reversed frame", [1.0, 0.0], [0.0, -1.0]),
        ("both zero", [0.0, 0.0], [0.0, 0.0]),
    ];
    for (label, xi, eta) in pairs {
        let v = m.symbol(&xi, &eta)?;
        let sigma = v.singular_values().iter().fold(f64::INFINITY, |a, &s| a.min(s));
        println!("{label:<15} ξ = {xi:?}, η = {eta:?}: {:?}, σ_min(v_K) = {sigma:.3}", m.classify(&xi, &eta)?);
    }
    Ok(())
}
