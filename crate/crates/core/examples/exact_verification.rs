//! Exact rational enumeration: chain success, secrecy of the shared bit,
//! the best coarse-graining of two links and the XOR uniqueness screen.
//!
//! cargo run --example exact_verification

use secrecy_percolation::oracle::{
    enumerate_chain, enumerate_links_with, exhaustive_strategy_search, leaky_transcript, rational,
    verify_secrecy, xor_uniqueness_check,
};

fn main() -> secrecy_percolation::Result<()> {
    let p = rational(1, 4);
    for n in 1..=6 {
        let e = enumerate_chain(n, &p)?;
        let s = verify_secrecy(&e.joint);
        println!(
            "n={n}: p_n = {}, secret {}, {} transcripts",
            e.success_probability, s.secret, s.transcripts
        );
    }

    let leaky = enumerate_links_with(&vec![p.clone(); 3], leaky_transcript)?;
    println!(
        "leaking the first bit: max bias {}",
        verify_secrecy(&leaky).max_bias
    );

    let q = p.clone() * p.clone();
    let one_minus = rational(3, 4);
    let joint = [
        one_minus.clone() * one_minus.clone(),
        p.clone() * one_minus.clone(),
        one_minus * p.clone(),
        q,
    ];
    let best = exhaustive_strategy_search(&joint)?;
    println!(
        "two links at 1/4: best coarse-graining {:?} reaches {} ({} labelings)",
        best.labeling, best.best, best.labelings_tried
    );

    let rep = xor_uniqueness_check(&p)?;
    for a in &rep.admissible {
        println!(
            "admissible announcement {:?}: success {}, secret {}",
            a.name.as_deref().unwrap_or("?"),
            a.success_probability,
            a.secret_after_conversion
        );
    }
    Ok(())
}
