//! Two links between the same pair of nodes, and a one-time-pad relay
//! through an intermediate node.
//!
//! cargo run --example parallel_links

use secrecy_percolation::secret_state::{
    otp_compose, otp_success, parallel_link_success, BiasedLink,
};

fn main() -> secrecy_percolation::Result<()> {
    println!(
        "{:>6} {:>10} {:>10} {:>8}",
        "p", "parallel", "relay", "capped"
    );
    for i in 0..=10 {
        let p = i as f64 * 0.05;
        let link = BiasedLink::new(p)?;
        let par = parallel_link_success(p)?;
        println!(
            "{p:>6.2} {:>10.6} {:>10.6} {:>8}",
            par.probability,
            otp_success(link, link),
            par.beyond_optimality_limit
        );
    }

    let (a, b) = (BiasedLink::new(0.1)?, BiasedLink::new(0.3)?);
    println!("\nrelay of p=0.1 and q=0.3:");
    for br in otp_compose(a, b) {
        println!(
            "  announce {}: weight {:.4}, posterior {:?}",
            br.announcement,
            br.weight,
            br.posterior.probs()
        );
    }
    println!("  average success {:.4}", otp_success(a, b));
    Ok(())
}
