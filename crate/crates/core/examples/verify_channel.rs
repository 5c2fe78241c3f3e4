//! Structural checks on Werner-Holevo channels and on a family that is not
//! trace preserving.

use wh_purity::cli::{verify_channel, ChannelSource};
use wh_purity::{wh_channel, Channel, ComplexMatrix};

fn report(label: &str, src: &ChannelSource) -> wh_purity::Result<()> {
    println!("{label}");
    for c in verify_channel(src, 50, 0)? {
        println!("  {:<24} {:.3e}  {}", c.name, c.residual, if c.passed { "pass" } else { "FAIL" });
    }
    Ok(())
}

fn main() -> wh_purity::Result<()> {
    for d in [3, 4, 5] {
        report(&format!("WH_{d}"), &ChannelSource { channel: wh_channel(d)?, wh_dim: Some(d) })?;
    }
    let broken = Channel::new_unchecked(2, 2, vec![ComplexMatrix::unit(2, 0, 0), ComplexMatrix::unit(2, 0, 0)])?;
    report("broken", &ChannelSource { channel: broken, wh_dim: None })
}
