//! Critical exponent above which the maximally entangled input beats every
//! product input for `WH_3 ⊗ WH_3`.

use wh_purity::purity::{delta_max_entangled, find_p0};
use wh_purity::Exponent;

fn main() -> wh_purity::Result<()> {
    for tol in [1e-3, 1e-6, 1e-10] {
        let p0 = find_p0(tol)?;
        let r = delta_max_entangled(Exponent::finite(p0)?)?;
        println!("tol={tol:e}  p0={p0:.10}  Δ(p0)={r:+.2e}");
    }
    Ok(())
}
