//! XOR relay along a chain: exact success, bounds and a simulation check.
//!
//! cargo run --example chain_protocol -- [p] [trials]

use secrecy_percolation::chain::{
    exact_success_probability, naive_success_probability, simulate, success_upper_bound, ChainSpec,
};

fn main() -> secrecy_percolation::Result<()> {
    let mut args = std::env::args().skip(1);
    let p: f64 = args.next().map_or(0.25, |s| s.parse().expect("p"));
    let trials: u64 = args.next().map_or(100_000, |s| s.parse().expect("trials"));

    println!("p = {p}, {trials} simulated runs per n");
    println!(
        "{:>3} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "n", "naive", "exact", "bound", "simulated", "z"
    );
    for n in [1u32, 2, 3, 4, 6, 8, 12, 16, 24, 32] {
        let spec = ChainSpec::new(n, p)?;
        let exact = exact_success_probability(&spec);
        let sim = simulate(&spec, trials, u64::from(n))?;
        println!(
            "{n:>3} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.6e} {:>10.2}",
            naive_success_probability(&spec),
            exact,
            success_upper_bound(&spec),
            sim.frequency,
            sim.z_score(exact)
        );
    }
    Ok(())
}
