//! `Δ(p, Φ_m)` as a function of `p` for `d = 3`, written as CSV.
//!
//! ```text
//! cargo run --example delta_sweep > delta.csv
//! ```

use wh_purity::purity::{delta_max_entangled, delta_sweep, sign_changes};
use wh_purity::Exponent;

fn main() -> wh_purity::Result<()> {
    let rows = delta_sweep(1.1, 10.0, 179)?;
    println!("p,delta");
    for (p, d) in &rows {
        println!("{p:.4},{d:.12}");
    }
    println!("inf,{:.12}", delta_max_entangled(Exponent::Infinity)?);
    for (a, b) in sign_changes(&rows) {
        eprintln!("Δ changes sign between p = {a:.4} and p = {b:.4}");
    }
    Ok(())
}
