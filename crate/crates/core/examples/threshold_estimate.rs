//! Bond percolation threshold from the crossing frequency of growing patches.
//!
//! cargo run --release --example threshold_estimate -- [family] [trials]

use secrecy_percolation::lattice::{estimate_threshold, Family, ThresholdOptions};

fn main() -> secrecy_percolation::Result<()> {
    let mut args = std::env::args().skip(1);
    let family: Family = args.next().as_deref().unwrap_or("triangular").parse()?;
    let trials: u64 = args.next().map_or(5_000, |s| s.parse().expect("trials"));

    let est = estimate_threshold(
        family,
        &[32, 64, 128],
        trials,
        7,
        &ThresholdOptions::default(),
    )?;
    println!(
        "{}: p_c ~ {:.4} +- {:.4}",
        family.name(),
        est.p_c_hat,
        est.half_width
    );
    for (size, p) in est.sizes.iter().zip(&est.per_size) {
        println!("  L={size:>4}: crossing 1/2 at {p:.4}");
    }
    for c in &est.size_crossings {
        match c.p {
            Some(p) => println!("  curves L={} and L={} meet at {p:.4}", c.smaller, c.larger),
            None => println!(
                "  curves L={} and L={} do not meet in the sweep",
                c.smaller, c.larger
            ),
        }
    }
    Ok(())
}
