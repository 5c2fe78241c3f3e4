//! Numerical maximal output purity against the closed form.
//!
//! For the Werner-Holevo channel every pure input gives the same output
//! p-norm, so the optimizer agrees with `(d−1)^{−(1−1/p)}` immediately. For
//! `S⊗S` the maximizer is a product state at small `p` and the maximally
//! entangled state at large `p`.
//!
//! ```text
//! cargo run --release --example nu_p
//! ```

use wh_purity::purity::{nu_p_numeric, nu_p_wh_analytic, schmidt_coefficients, AscentConfig};
use wh_purity::{wh_channel, Exponent};

fn main() -> wh_purity::Result<()> {
    let cfg = AscentConfig::default();
    for d in [3, 4] {
        let ch = wh_channel(d)?;
        for p in [Exponent::Finite(2.0), Exponent::Finite(3.0), Exponent::Infinity] {
            let r = nu_p_numeric(&ch, p, &cfg, 0)?;
            let exact = nu_p_wh_analytic(d, p)?;
            println!("WH_{d}  p={p:<4} numeric={:.10} analytic={exact:.10}", r.value);
        }
    }

    let ch = wh_channel(3)?;
    let ss = ch.tensor(&ch);
    println!();
    for p in [Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Finite(5.0), Exponent::Infinity] {
        let r = nu_p_numeric(&ss, p, &cfg, 0)?;
        let single = nu_p_wh_analytic(3, p)?;
        let schmidt = schmidt_coefficients(&r.maximizer, (3, 3))?;
        println!(
            "WH_3⊗WH_3  p={p:<4} ν_p={:.10}  ν_p(S)²={:.10}  Δ={:+.6}  Schmidt={:.4?}",
            r.value,
            single * single,
            r.value.ln() - 2.0 * single.ln(),
            schmidt
        );
    }
    Ok(())
}
