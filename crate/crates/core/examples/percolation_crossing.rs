//! Left-right crossing frequency and cluster statistics on the three lattices.
//!
//! cargo run --example percolation_crossing -- [size] [trials]

use secrecy_percolation::lattice::{crossing_probability, sample_clusters, Family};

fn main() -> secrecy_percolation::Result<()> {
    let mut args = std::env::args().skip(1);
    let size: usize = args.next().map_or(48, |s| s.parse().expect("size"));
    let trials: u64 = args.next().map_or(2_000, |s| s.parse().expect("trials"));

    for family in [Family::Triangular, Family::Square, Family::Honeycomb] {
        let g = family.build(size)?;
        println!(
            "{} L={size}: {} nodes, {} bonds",
            family.name(),
            g.node_count(),
            g.edge_count()
        );
        for i in 0..=10 {
            let q = 0.25 + 0.05 * i as f64;
            let f = crossing_probability(family, size, q, trials, 1)?;
            println!(
                "  p_edge {q:.2}: crossing {:.4} +- {:.4}",
                f.frequency, f.standard_error
            );
        }
        let stats = sample_clusters(&g.clone().with_open_probability(0.5)?, 2)?;
        println!(
            "  one sample at 0.5: {} clusters, largest fraction {:.3}, spanning {}",
            stats.sizes.len(),
            stats.largest_fraction,
            stats.spanning
        );
    }
    Ok(())
}
