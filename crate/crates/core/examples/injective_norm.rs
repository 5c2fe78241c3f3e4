//! Injective norms by alternating rank-one maximization, and the bridge
//! `ν_∞(S) = μ_3(Ã)²` between channels and tripartite vectors.

use wh_purity::injective::{antisymmetric_vector, mu, mu_of_channel, AlternatingConfig};
use wh_purity::purity::{nu_p_numeric, AscentConfig};
use wh_purity::{wh_channel, Exponent};

fn main() -> wh_purity::Result<()> {
    let cfg = AlternatingConfig::default();
    let eps = antisymmetric_vector(3)?;
    let fit = mu(&eps, &cfg, 0)?;
    println!("μ_3(ε/√6) = {:.10}  (1/√6 = {:.10})", fit.value, 1.0 / 6f64.sqrt());

    let ch = wh_channel(3)?;
    let via_mu = mu_of_channel(&ch, &cfg, 0)?;
    let via_nu = nu_p_numeric(&ch, Exponent::Infinity, &AscentConfig::default(), 0)?.value;
    println!("WH_3: μ_3(Ã)² = {via_mu:.10}, ν_∞ = {via_nu:.10}");

    let ss = ch.tensor(&ch);
    println!("WH_3⊗WH_3: μ_3(Ã)² = {:.10}", mu_of_channel(&ss, &cfg, 0)?);
    Ok(())
}
