//! Converting biased secret bits and general secret states.
//!
//! cargo run --example single_link

use secrecy_percolation::secret_state::{
    conversion_probability, majorizes, BiasedLink, SecretState,
};

fn main() -> secrecy_percolation::Result<()> {
    println!("{:>6} {:>12}", "p", "P(sbit)");
    for i in 0..=10 {
        let p = i as f64 * 0.05;
        println!("{p:>6.2} {:>12.6}", BiasedLink::new(p)?.sbit_probability());
    }

    let from = SecretState::new(vec![0.5625, 0.1875, 0.1875, 0.0625])?;
    let to = SecretState::new(vec![0.5, 0.5])?;
    println!(
        "\n{:?} -> {:?}: deterministic {}, probability {:.6}",
        from.probs(),
        to.probs(),
        majorizes(&to, &from),
        conversion_probability(&from, &to)
    );
    let flat = SecretState::uniform(4);
    println!(
        "{:?} -> {:?}: deterministic {}, probability {:.6}",
        flat.probs(),
        to.probs(),
        majorizes(&to, &flat),
        conversion_probability(&flat, &to)
    );
    Ok(())
}
