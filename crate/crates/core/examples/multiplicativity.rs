//! `μ_3` is not multiplicative: the antisymmetric vector tensored with itself.

use wh_purity::injective::{antisymmetric_vector, check_mu_multiplicativity, AlternatingConfig};

fn main() -> wh_purity::Result<()> {
    let a = antisymmetric_vector(3)?;
    let c = check_mu_multiplicativity(&a, &a, &AlternatingConfig::default(), 0)?;
    println!("μ(Φ)      = {:.10}", c.mu_v);
    println!("μ(Φ⊗Φ)    = {:.10}", c.mu_vw);
    println!("ratio     = {:.10}  (2/√3 = {:.10})", c.ratio, 2.0 / 3f64.sqrt());
    println!("ratio²    = {:.10}", c.ratio * c.ratio);
    Ok(())
}
