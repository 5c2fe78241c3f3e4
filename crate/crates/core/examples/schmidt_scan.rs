//! Where over the Schmidt simplex is `Δ(p, Φ)` largest?
//!
//! Below the critical exponent the maximum sits at the corners (product
//! inputs, `Δ = 0`); above it, at the center (maximally entangled input).

use wh_purity::purity::schmidt_scan;
use wh_purity::Exponent;

fn main() -> wh_purity::Result<()> {
    for p in [4.0, 4.7823, 5.0] {
        let scan = schmidt_scan(Exponent::Finite(p), 60)?;
        let best = scan.best();
        let kind = if best.is_center() { "center" } else if best.is_corner() { "corner" } else { "interior" };
        println!(
            "p={p:<7} argmax c1²={:.4} c2²={:.4} c3²={:.4}  Δ={:+.3e}  ({kind})",
            best.c1sq,
            best.c2sq,
            best.c3sq(),
            best.delta
        );
    }
    Ok(())
}
