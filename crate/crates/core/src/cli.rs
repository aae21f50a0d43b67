//! Command-line front end. Every run prints a config echo that reproduces it
//! bit-exactly, followed by the result as JSON (default) or CSV.
//!
//! JSON output is one object:
//!
//! ```json
//! { "schema_version": 1, "command": "...", "config": { ... }, "result": { ... } }
//! ```
//!
//! CSV output starts with a `# config: <json>` line, then a header row whose
//! first column is `schema_version`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chain::{self, ChainSpec};
use crate::error::{Error, Result};
use crate::lattice::{self, Family, Strategy};
use crate::oracle;
use crate::sampling::{derive_seed, Frequency};
use crate::secret_state::{self, BiasedLink, SecretState};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 0x5EC2_E7B1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "secperc",
    version,
    about = "Secret-key networks: conversions, relay chains and secrecy percolation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conversion probability of a biased bit or between two states.
    Convert(ConvertArgs),
    /// Exact, bound, naive and optionally simulated success along a chain.
    Chain(ChainArgs),
    /// Crossing frequency and cluster statistics of one lattice configuration.
    Percolate(PercolateArgs),
    /// Bond percolation threshold estimate.
    Threshold(ThresholdArgs),
    /// Naive versus transformed strategy on a doubled-edge honeycomb.
    Window(WindowArgs),
    /// Exact enumeration and secrecy check of the relay chain.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvertArgs {
    /// Bias of a single link; converts it into a secret bit.
    #[arg(long, conflicts_with = "from")]
    pub p: Option<f64>,
    /// Comma-separated source distribution.
    #[arg(long, value_delimiter = ',')]
    pub from: Option<Vec<f64>>,
    /// Comma-separated target distribution (default: secret bit).
    #[arg(long, value_delimiter = ',', requires = "from")]
    pub to: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChainArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub p: f64,
    /// Also run the protocol this many times.
    #[arg(long)]
    pub simulate: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PercolateArgs {
    /// Lattice family for --p-edge runs (square, triangular, honeycomb).
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub size: usize,
    /// Uniform bond probability.
    #[arg(long, conflicts_with_all = ["p", "strategy"])]
    pub p_edge: Option<f64>,
    /// Link bias of a doubled-edge honeycomb.
    #[arg(long, requires = "strategy")]
    pub p: Option<f64>,
    /// naive or transformed.
    #[arg(long, requires = "p")]
    pub strategy: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WindowArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    /// Exact link bias, e.g. `1/4`.
    #[arg(long)]
    pub p: String,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub parameters: Value,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Result of a run, rendered in both formats.
#[derive(Debug, Clone)]
pub struct Report {
    pub config: RunConfig,
    pub result: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.config.command,
            "config": self.config,
            "result": self.result,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# config: {}",
            serde_json::to_string(&self.config).unwrap_or_default()
        );
        let _ = writeln!(out, "schema_version,{}", self.csv_header.join(","));
        for row in &self.csv_rows {
            let _ = writeln!(out, "{SCHEMA_VERSION},{}", row.join(","));
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => format!("{:#}\n", self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn frequency_json(f: &Frequency) -> Value {
    serde_json::to_value(f).expect("plain struct")
}

pub fn run(cli: &Cli) -> Result<Report> {
    let common = &cli.common;
    let config = |command, parameters: Value| RunConfig {
        command,
        parameters,
        seed: common.seed,
        format: common.format,
        out: common.out.clone(),
        threads: common.threads,
    };
    let to_value = |a: &dyn erased::Params| a.to_value();
    match &cli.command {
        Command::Convert(a) => cmd_convert(config("convert", to_value(a)), a),
        Command::Chain(a) => cmd_chain(config("chain", to_value(a)), a, common.seed),
        Command::Percolate(a) => cmd_percolate(config("percolate", to_value(a)), a, common.seed),
        Command::Threshold(a) => cmd_threshold(config("threshold", to_value(a)), a, common.seed),
        Command::Window(a) => cmd_window(config("window", to_value(a)), a, common.seed),
        Command::Verify(a) => cmd_verify(config("verify", to_value(a)), a),
    }
}

mod erased {
    use serde_json::Value;

    pub trait Params {
        fn to_value(&self) -> Value;
    }

    impl<T: serde::Serialize> Params for T {
        fn to_value(&self) -> Value {
            serde_json::to_value(self).expect("argument structs serialize")
        }
    }
}

pub fn cmd_convert(config: RunConfig, a: &ConvertArgs) -> Result<Report> {
    let (from, to) = match (&a.p, &a.from) {
        (Some(p), None) => (BiasedLink::new(*p)?.state(), SecretState::sbit()),
        (None, Some(from)) => {
            let to = match &a.to {
                Some(t) => SecretState::new(t.clone())?,
                None => SecretState::sbit(),
            };
            (SecretState::new(from.clone())?, to)
        }
        _ => return Err(Error::InvalidArgument("give either --p or --from".into())),
    };
    let probability = secret_state::conversion_probability(&from, &to);
    let deterministic = secret_state::majorizes(&to, &from);
    let join = |s: &SecretState| {
        s.probs()
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(";")
    };
    Ok(Report {
        result: json!({
            "from": from.probs(),
            "to": to.probs(),
            "conversion_probability": probability,
            "deterministic": deterministic,
        }),
        csv_header: vec!["from", "to", "conversion_probability", "deterministic"],
        csv_rows: vec![vec![
            join(&from),
            join(&to),
            s(probability),
            s(deterministic),
        ]],
        config,
    })
}

pub fn cmd_chain(config: RunConfig, a: &ChainArgs, seed: u64) -> Result<Report> {
    let spec = ChainSpec::new(a.n, a.p)?;
    let exact = chain::exact_success_probability(&spec);
    let bound = chain::success_upper_bound(&spec);
    let naive = chain::naive_success_probability(&spec);
    let simulated = a
        .simulate
        .map(|t| chain::simulate(&spec, t, seed))
        .transpose()?;
    Ok(Report {
        result: json!({
            "n": a.n,
            "p": a.p,
            "exact": exact,
            "upper_bound": bound,
            "naive": naive,
            "simulated": simulated.as_ref().map(frequency_json),
        }),
        csv_header: vec![
            "n",
            "p",
            "exact",
            "upper_bound",
            "naive",
            "simulated",
            "standard_error",
            "trials",
        ],
        csv_rows: vec![vec![
            s(a.n),
            s(a.p),
            s(exact),
            s(bound),
            s(naive),
            opt(simulated.map(|f| f.frequency)),
            opt(simulated.map(|f| f.standard_error)),
            opt(simulated.map(|f| f.trials)),
        ]],
        config,
    })
}

pub fn cmd_percolate(config: RunConfig, a: &PercolateArgs, seed: u64) -> Result<Report> {
    if a.trials == 0 {
        return Err(Error::NoTrials);
    }
    let graph = match (a.p_edge, a.p, &a.strategy) {
        (Some(q), None, None) => {
            let family: Family = a
                .family
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("--p-edge needs --family".into()))?
                .parse()?;
            family.build(a.size)?.with_open_probability(q)?
        }
        (None, Some(p), Some(strategy)) => {
            if let Some(f) = &a.family {
                if f.parse::<Family>()? != Family::Honeycomb {
                    return Err(Error::InvalidArgument(
                        "strategies act on the honeycomb".into(),
                    ));
                }
            }
            lattice::strategy_graph(strategy.parse::<Strategy>()?, a.size, p)?
        }
        _ => {
            return Err(Error::InvalidArgument(
                "give either --p-edge or --p with --strategy".into(),
            ))
        }
    };
    let samples: Vec<lattice::ClusterStats> = (0..a.trials)
        .into_par_iter()
        .map(|t| lattice::sample_clusters(&graph, derive_seed(seed, t)))
        .collect::<Result<_>>()?;
    let spanning = samples.iter().filter(|c| c.spanning).count() as u64;
    let crossing = Frequency::new(spanning, a.trials);
    let mean_largest = samples.iter().map(|c| c.largest_fraction).sum::<f64>() / a.trials as f64;
    Ok(Report {
        result: json!({
            "lattice": graph.kind,
            "nodes": graph.node_count(),
            "bonds": graph.edge_count(),
            "open_probability": graph.uniform_open_probability(),
            "crossing": frequency_json(&crossing),
            "mean_largest_fraction": mean_largest,
            "samples": samples.iter().map(|c| json!({
                "spanning": c.spanning,
                "largest_fraction": c.largest_fraction,
                "clusters": c.sizes.len(),
            })).collect::<Vec<_>>(),
        }),
        csv_header: vec!["trial", "spanning", "largest_fraction", "clusters"],
        csv_rows: samples
            .iter()
            .enumerate()
            .map(|(t, c)| vec![s(t), s(c.spanning), s(c.largest_fraction), s(c.sizes.len())])
            .collect(),
        config,
    })
}

pub fn cmd_threshold(config: RunConfig, a: &ThresholdArgs, seed: u64) -> Result<Report> {
    let family: Family = a.family.parse()?;
    let est = lattice::estimate_threshold(family, &a.sizes, a.trials, seed, &Default::default())?;
    Ok(Report {
        result: serde_json::to_value(&est).expect("plain struct"),
        csv_header: vec!["family", "size", "p", "frequency", "standard_error"],
        csv_rows: est
            .sweep
            .iter()
            .map(|pt| {
                vec![
                    s(family.name()),
                    s(pt.size),
                    s(pt.p),
                    s(pt.frequency),
                    s(pt.standard_error),
                ]
            })
            .collect(),
        config,
    })
}

pub fn cmd_window(config: RunConfig, a: &WindowArgs, seed: u64) -> Result<Report> {
    let rep = lattice::window_comparison(a.p, &a.sizes, a.trials, seed)?;
    let above = |q: f64, threshold: f64| q > threshold;
    Ok(Report {
        result: json!({
            "report": rep,
            "naive_above_honeycomb_threshold": above(rep.naive_bond_probability, HONEYCOMB_THRESHOLD),
            "transformed_above_triangular_threshold": above(rep.transformed_bond_probability, TRIANGULAR_THRESHOLD),
        }),
        csv_header: vec![
            "size",
            "p",
            "naive_bond_probability",
            "transformed_bond_probability",
            "naive_frequency",
            "naive_standard_error",
            "transformed_frequency",
            "transformed_standard_error",
            "gap",
        ],
        csv_rows: rep
            .rows
            .iter()
            .map(|r| {
                vec![
                    s(r.size),
                    s(rep.p),
                    s(rep.naive_bond_probability),
                    s(rep.transformed_bond_probability),
                    s(r.naive.frequency),
                    s(r.naive.standard_error),
                    s(r.transformed.frequency),
                    s(r.transformed.standard_error),
                    s(r.gap),
                ]
            })
            .collect(),
        config,
    })
}

/// Exact bond percolation thresholds, `1 - 2 sin(pi/18)` and `2 sin(pi/18)`.
pub const HONEYCOMB_THRESHOLD: f64 = 0.652_703_644_666_139_3;
pub const TRIANGULAR_THRESHOLD: f64 = 0.347_296_355_333_860_7;

pub fn cmd_verify(config: RunConfig, a: &VerifyArgs) -> Result<Report> {
    let p = oracle::parse_rational(&a.p)?;
    let enumeration = oracle::enumerate_chain(a.n, &p)?;
    let secrecy = oracle::verify_secrecy(&enumeration.joint);
    let exact_float = oracle::approximate(&enumeration.success_probability);
    let closed_form =
        chain::exact_success_probability(&ChainSpec::new(a.n as u32, exact_float_of(&p))?);
    let xor = oracle::xor_uniqueness_check(&p)?;
    let diff = (exact_float - closed_form).abs();
    Ok(Report {
        result: json!({
            "n": a.n,
            "p": p.to_string(),
            "exact": enumeration.success_probability.to_string(),
            "exact_float": exact_float,
            "closed_form": closed_form,
            "abs_diff": diff,
            "entries": enumeration.joint.entries.len(),
            "secrecy": secrecy,
            "xor_uniqueness": xor,
        }),
        csv_header: vec![
            "n",
            "p",
            "exact",
            "exact_float",
            "closed_form",
            "abs_diff",
            "secret",
            "max_bias",
        ],
        csv_rows: vec![vec![
            s(a.n),
            p.to_string(),
            enumeration.success_probability.to_string(),
            s(exact_float),
            s(closed_form),
            s(diff),
            s(secrecy.secret),
            secrecy.max_bias.to_string(),
        ]],
        config,
    })
}

fn exact_float_of(p: &oracle::Rational) -> f64 {
    oracle::approximate(p)
}

/// Parses `args`, runs, writes the output and returns the process exit code:
/// 0 on success, 2 on invalid input, 1 on I/O failure.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match cli.common.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => run(&cli),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = report.render();
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(args: &[&str]) -> Result<Report> {
        let cli =
            Cli::try_parse_from(std::iter::once("secperc").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    fn result(args: &[&str]) -> Value {
        report(args).unwrap().result
    }

    #[test]
    fn convert_examples() {
        assert_eq!(
            result(&["convert", "--p", "0.25"])["conversion_probability"],
            0.5
        );
        assert_eq!(
            result(&["convert", "--p", "0.5"])["conversion_probability"],
            1.0
        );
        let r = result(&[
            "convert",
            "--from",
            "0.5625,0.1875,0.1875,0.0625",
            "--to",
            "0.5,0.5",
        ]);
        assert!((r["conversion_probability"].as_f64().unwrap() - 0.875).abs() < 1e-12);
        assert_eq!(r["deterministic"], false);
        assert!(report(&["convert", "--from", "0.5,0.6"]).is_err());
        assert!(report(&["convert"]).is_err());
    }

    #[test]
    fn chain_examples() {
        let r = result(&["chain", "--n", "3", "--p", "0.25"]);
        assert!((r["exact"].as_f64().unwrap() - 0.3125).abs() < 1e-12);
        assert!((r["upper_bound"].as_f64().unwrap() - 0.6495).abs() < 1e-4);
        assert!((r["naive"].as_f64().unwrap() - 0.125).abs() < 1e-12);
        assert!(r["simulated"].is_null());
        let r = result(&["chain", "--n", "1", "--p", "0.25"]);
        for k in ["exact", "naive"] {
            assert!((r[k].as_f64().unwrap() - 0.5).abs() < 1e-12, "{k}");
        }
        assert!((r["upper_bound"].as_f64().unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
        let r = result(&["chain", "--n", "5", "--p", "0.5", "--simulate", "1000"]);
        for k in ["exact", "upper_bound", "naive"] {
            assert_eq!(r[k], 1.0);
        }
        assert_eq!(r["simulated"]["frequency"], 1.0);
    }

    #[test]
    fn percolate_extremes_and_validation() {
        let r = result(&[
            "percolate",
            "--family",
            "square",
            "--size",
            "12",
            "--p-edge",
            "1",
            "--trials",
            "20",
        ]);
        assert_eq!(r["crossing"]["frequency"], 1.0);
        let r = result(&[
            "percolate",
            "--family",
            "triangular",
            "--size",
            "12",
            "--p-edge",
            "0",
            "--trials",
            "20",
        ]);
        assert_eq!(r["crossing"]["frequency"], 0.0);
        let r = result(&[
            "percolate",
            "--size",
            "12",
            "--p",
            "0.5",
            "--strategy",
            "transformed",
            "--trials",
            "5",
        ]);
        assert_eq!(r["lattice"], "transformed_triangular");
        assert_eq!(r["crossing"]["frequency"], 1.0);
        assert!(report(&["percolate", "--size", "12", "--p-edge", "0.5"]).is_err());
        assert!(report(&[
            "percolate",
            "--family",
            "square",
            "--p",
            "0.2",
            "--strategy",
            "naive"
        ])
        .is_err());
        let csv = report(&[
            "percolate",
            "--family",
            "square",
            "--size",
            "8",
            "--p-edge",
            "0.5",
            "--trials",
            "3",
            "--format",
            "csv",
        ])
        .unwrap()
        .render();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# config: "));
        assert_eq!(
            lines[1],
            "schema_version,trial,spanning,largest_fraction,clusters"
        );
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn window_reports_bond_probabilities() {
        let r = result(&["window", "--p", "0.25", "--sizes", "16", "--trials", "200"]);
        assert_eq!(r["naive_above_honeycomb_threshold"], true);
        assert_eq!(r["transformed_above_triangular_threshold"], true);
        let r = result(&["window", "--p", "0.05", "--sizes", "16", "--trials", "200"]);
        assert_eq!(r["naive_above_honeycomb_threshold"], false);
        assert_eq!(r["transformed_above_triangular_threshold"], false);
        let r = result(&["window", "--p", "0.176", "--sizes", "16", "--trials", "200"]);
        assert_eq!(r["naive_above_honeycomb_threshold"], false);
        assert_eq!(r["transformed_above_triangular_threshold"], true);
    }

    #[test]
    fn verify_examples() {
        let r = result(&["verify", "--n", "3", "--p", "1/4"]);
        assert_eq!(r["exact"], "5/16");
        assert_eq!(r["secrecy"]["secret"], true);
        assert!(r["abs_diff"].as_f64().unwrap() < 1e-12);
        assert_eq!(
            result(&["verify", "--n", "1", "--p", "1/4"])["exact"],
            "1/2"
        );
        assert_eq!(result(&["verify", "--n", "2", "--p", "1/2"])["exact"], "1");
        assert!(report(&["verify", "--n", "20", "--p", "1/4"]).is_err());
        assert!(report(&["verify", "--n", "3", "--p", "x"]).is_err());
    }

    #[test]
    fn json_envelope_is_stable() {
        let rep = report(&["--seed", "9", "chain", "--n", "2", "--p", "0.1"]).unwrap();
        let j = rep.to_json();
        assert_eq!(j["schema_version"], SCHEMA_VERSION);
        assert_eq!(j["command"], "chain");
        assert_eq!(j["config"]["seed"], 9);
        assert_eq!(j["config"]["parameters"]["n"], 2);
        assert!(j["result"].is_object());
    }

    #[test]
    fn thresholds_match_exact_values() {
        let s = (std::f64::consts::PI / 18.0).sin();
        assert!((TRIANGULAR_THRESHOLD - 2.0 * s).abs() < 1e-15);
        assert!((HONEYCOMB_THRESHOLD - (1.0 - 2.0 * s)).abs() < 1e-15);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["secperc", "convert", "--p", "2"]), 2);
        assert_eq!(main_with_args(["secperc", "bogus"]), 2);
        let dir = std::env::temp_dir().join(format!("secperc-test-{}", std::process::id()));
        let path = dir.with_extension("json");
        assert_eq!(
            main_with_args([
                "secperc",
                "convert",
                "--p",
                "0.25",
                "--out",
                path.to_str().unwrap()
            ]),
            0
        );
        let written: Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(written["result"]["conversion_probability"], 0.5);
        let _ = std::fs::remove_file(path);
    }
}
