//! Acceptance suite. Each test prints one `criterion N ... PASS|FAIL` line
//! (run with `--nocapture` to see them) and then asserts.

use secrecy_percolation::chain::{self, ChainSpec};
use secrecy_percolation::lattice::{
    estimate_threshold, window_comparison, Family, ThresholdOptions,
};
use secrecy_percolation::oracle::{self, rational, Rational};
use secrecy_percolation::secret_state::{
    conversion_probability, otp_success, product, BiasedLink, SecretState,
};

const EXACT_TOL: f64 = 1e-12;
const HONEYCOMB_PC: f64 = 0.6527;
const TRIANGULAR_PC: f64 = 0.3473;
const SQUARE_PC: f64 = 0.5;
const LATTICE_TOL: f64 = 0.01;
const SQUARE_TOL: f64 = 0.005;
const THRESHOLD_SIZES: [usize; 2] = [64, 128];
const THRESHOLD_TRIALS: u64 = 20_000;
const WINDOW_P: f64 = 0.176;
const WINDOW_SIZES: [usize; 3] = [32, 64, 128];
const WINDOW_TRIALS: u64 = 10_000;
const WINDOW_MIN_GAP: f64 = 0.2;
const SIMULATION_TRIALS: u64 = 1_000_000;
const SIMULATION_Z: f64 = 4.0;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {id:>2} [{name}]: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn p_grid() -> impl Iterator<Item = f64> {
    (0..=10).map(|i| i as f64 * 0.05)
}

#[test]
fn criterion_01_single_link() {
    let worst = p_grid()
        .map(|p| (BiasedLink::new(p).unwrap().sbit_probability() - 2.0 * p).abs())
        .fold(0.0, f64::max);
    report(
        1,
        "single-link conversion = 2p",
        worst <= EXACT_TOL,
        format!("max error {worst:.1e}, tol {EXACT_TOL:.0e}"),
    );
}

#[test]
fn criterion_02_two_link_relay() {
    let worst = p_grid()
        .map(|p| {
            let l = BiasedLink::new(p).unwrap();
            (otp_success(l, l) - 2.0 * p).abs()
        })
        .fold(0.0, f64::max);
    report(
        2,
        "one-time-pad relay = 2p",
        worst <= EXACT_TOL,
        format!("max error {worst:.1e}, tol {EXACT_TOL:.0e}"),
    );
}

#[test]
fn criterion_03_parallel_links() {
    let limit = 1.0 - 1.0 / 2f64.sqrt();
    let mut worst = 0.0f64;
    let grid: Vec<f64> = p_grid().chain([limit, 0.29, 0.3, 0.4]).collect();
    for &p in &grid {
        let s = BiasedLink::new(p).unwrap().state();
        let got = conversion_probability(&product(&s, &s), &SecretState::sbit());
        let want = if p <= limit { 2.0 * p * (2.0 - p) } else { 1.0 };
        worst = worst.max((got - want).abs());
    }
    report(
        3,
        "parallel links = 2p(2-p), capped at 1",
        worst <= EXACT_TOL,
        format!(
            "{} bias values, max error {worst:.1e}, tol {EXACT_TOL:.0e}",
            grid.len()
        ),
    );
}

#[test]
fn criterion_04_chain_exactness() {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for (num, den) in [(1, 10), (1, 4), (2, 5)] {
        let p = rational(num, den);
        for n in 1..=12 {
            let exact = oracle::enumerate_chain(n, &p).unwrap().success_probability;
            let closed = chain::exact_success_probability(
                &ChainSpec::new(n as u32, num as f64 / den as f64).unwrap(),
            );
            worst = worst.max((oracle::approximate(&exact) - closed).abs());
            cases += 1;
        }
    }
    report(
        4,
        "closed form matches exact enumeration",
        worst <= EXACT_TOL,
        format!("{cases} cases, n <= 12, max error {worst:.1e}, tol {EXACT_TOL:.0e}"),
    );
}

#[test]
fn criterion_05_chain_inequalities() {
    let mut violations = Vec::new();
    for p in p_grid() {
        for n in 1..=30u32 {
            let spec = ChainSpec::new(n, p).unwrap();
            let (naive, exact, bound) = (
                chain::naive_success_probability(&spec),
                chain::exact_success_probability(&spec),
                chain::success_upper_bound(&spec),
            );
            let slack = EXACT_TOL * bound.max(1e-300);
            let ordered = naive <= exact + slack && exact <= bound + slack;
            let interior = p > 0.0 && p < 0.5 && n >= 2;
            let strict = !interior || (naive < exact && exact < bound);
            if !(ordered && strict) {
                violations.push((n, p));
            }
        }
    }
    report(
        5,
        "(2p)^n <= p_n <= (2 sqrt(p(1-p)))^n, strict inside",
        violations.is_empty(),
        format!("n <= 30 over 11 bias values, violations {violations:?}"),
    );
}

#[test]
fn criterion_06_secrecy() {
    let ps: Vec<Rational> = [(0, 1), (1, 10), (1, 4), (2, 5), (1, 2)]
        .iter()
        .map(|&(a, b)| rational(a, b))
        .collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in &ps {
        for n in 1..=10 {
            let joint = oracle::enumerate_chain(n, p).unwrap().joint;
            let rep = oracle::verify_secrecy(&joint);
            checked += 1;
            if !rep.secret {
                failures.push(format!("chain n={n} p={p}"));
            }
        }
        let mut local = vec![("parallel", oracle::enumerate_parallel(p).unwrap())];
        for q in &ps {
            let otp =
                oracle::enumerate_links_with(&[p.clone(), q.clone()], oracle::xor_relay_transcript)
                    .unwrap();
            local.push(("otp", otp));
        }
        for joint in oracle::enumerate_relay_node(p).unwrap() {
            local.push(("relay node", joint));
        }
        for (what, joint) in local {
            checked += 1;
            if !oracle::verify_secrecy(&joint).secret {
                failures.push(format!("{what} p={p}"));
            }
        }
    }
    report(
        6,
        "zero bias given transcript and success",
        failures.is_empty(),
        format!("{checked} exact distributions, failures {failures:?}"),
    );
}

#[test]
fn criterion_07_thresholds() {
    let opts = ThresholdOptions::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for (family, target, tol, seed) in [
        (Family::Triangular, TRIANGULAR_PC, LATTICE_TOL, 71),
        (Family::Honeycomb, HONEYCOMB_PC, LATTICE_TOL, 72),
        (Family::Square, SQUARE_PC, SQUARE_TOL, 73),
    ] {
        let est =
            estimate_threshold(family, &THRESHOLD_SIZES, THRESHOLD_TRIALS, seed, &opts).unwrap();
        let ok = (est.p_c_hat - target).abs() <= tol;
        pass &= ok;
        lines.push(format!(
            "{} {:.4} +- {:.4} vs {target} +- {tol}",
            family.name(),
            est.p_c_hat,
            est.half_width
        ));
    }
    report(
        7,
        "percolation thresholds",
        pass,
        format!(
            "L={THRESHOLD_SIZES:?}, {THRESHOLD_TRIALS} trials: {}",
            lines.join("; ")
        ),
    );
}

#[test]
fn criterion_08_window() {
    let rep = window_comparison(WINDOW_P, &WINDOW_SIZES, WINDOW_TRIALS, 80).unwrap();
    let gaps: Vec<f64> = rep.rows.iter().map(|r| r.gap).collect();
    let last = *gaps.last().unwrap();
    let widens = last > gaps[0];
    let rows: Vec<String> = rep
        .rows
        .iter()
        .map(|r| {
            format!(
                "L={} naive {:.4} transformed {:.4} gap {:.4}",
                r.size, r.naive.frequency, r.transformed.frequency, r.gap
            )
        })
        .collect();
    report(
        8,
        "transformed beats naive inside the window",
        last >= WINDOW_MIN_GAP && widens,
        format!(
            "p={WINDOW_P}, {WINDOW_TRIALS} trials, min gap {WINDOW_MIN_GAP}: {}",
            rows.join("; ")
        ),
    );
}

#[test]
fn criterion_09_xor_uniqueness() {
    let rep = oracle::xor_uniqueness_check(&rational(1, 4)).unwrap();
    let mut names: Vec<String> = rep
        .admissible
        .iter()
        .filter_map(|a| a.name.clone())
        .collect();
    names.sort();
    let only_named = rep.admissible.iter().all(|a| a.name.is_some());
    let secret = rep.admissible.iter().all(|a| a.secret_after_conversion);
    report(
        9,
        "only XOR and XNOR are admissible",
        only_named && secret && names == ["xnor", "xor"],
        format!(
            "admissible {names:?} out of {} functions at p=1/4",
            rep.functions.len()
        ),
    );
}

#[test]
fn criterion_10_simulation() {
    let spec = ChainSpec::new(3, 0.25).unwrap();
    let f = chain::simulate(&spec, SIMULATION_TRIALS, 10).unwrap();
    let z = f.z_score(0.3125);
    report(
        10,
        "chain simulation agrees with p_3",
        z.abs() <= SIMULATION_Z,
        format!(
            "{:.5} +- {:.5} vs 0.3125, z = {z:.2}, limit {SIMULATION_Z}",
            f.frequency, f.standard_error
        ),
    );
}
