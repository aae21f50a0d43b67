//! Doubled-edge honeycomb of biased links: resolving each bundle on its own
//! versus relaying through one sublattice to get a triangular lattice.
//!
//! cargo run --release --example topology_window -- [p] [trials]

use secrecy_percolation::lattice::window_comparison;

fn main() -> secrecy_percolation::Result<()> {
    let mut args = std::env::args().skip(1);
    let p: f64 = args.next().map_or(0.176, |s| s.parse().expect("p"));
    let trials: u64 = args.next().map_or(4_000, |s| s.parse().expect("trials"));

    let rep = window_comparison(p, &[16, 32, 64, 128], trials, 3)?;
    println!(
        "p = {p}: naive bond {:.4} (honeycomb threshold 0.6527), transformed bond {:.4} (triangular threshold 0.3473)",
        rep.naive_bond_probability, rep.transformed_bond_probability
    );
    println!(
        "{:>5} {:>10} {:>12} {:>8}",
        "L", "naive", "transformed", "gap"
    );
    for r in &rep.rows {
        println!(
            "{:>5} {:>10.4} {:>12.4} {:>8.4}",
            r.size, r.naive.frequency, r.transformed.frequency, r.gap
        );
    }
    Ok(())
}
