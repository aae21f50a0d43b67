//! Exact verification by exhaustive enumeration in rational arithmetic.
//!
//! Every protocol execution on a small instance is listed together with its
//! public transcript, its outcome and its exact probability. Probabilistic
//! conversion is realized as explicit abort branches: for the pair of
//! complementary link assignments `a` and `!a` that a transcript leaves open,
//! the lighter one is always kept and the heavier one is kept with probability
//! `P(lighter) / P(heavier)`. Conditioned on success, the shared bit is then
//! uniform.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest chain the enumerator accepts.
pub const MAX_CHAIN_LINKS: usize = 16;
/// Largest alphabet for [`exhaustive_strategy_search`].
pub const MAX_SEARCH_OUTCOMES: usize = 4;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"num/den"`, an integer, or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("`{s}` is not a rational number"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

fn check_bias(p: &Rational) -> Result<()> {
    if p.is_negative() || *p > rational(1, 2) {
        return Err(Error::InvalidArgument(format!(
            "link bias {p} outside [0, 1/2]"
        )));
    }
    Ok(())
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Announcement {
    pub node: usize,
    pub bit: u8,
}

pub type Transcript = Vec<Announcement>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The endpoints share this bit.
    Success(u8),
    Abort,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointEntry {
    /// Link bits, in link order.
    pub assignment: Vec<u8>,
    pub transcript: Transcript,
    pub outcome: Outcome,
    #[serde(with = "rational_string")]
    pub weight: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    pub entries: Vec<JointEntry>,
}

impl JointDistribution {
    pub fn total_weight(&self) -> Rational {
        self.entries.iter().map(|e| &e.weight).sum()
    }

    pub fn success_probability(&self) -> Rational {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, Outcome::Success(_)))
            .map(|e| &e.weight)
            .sum()
    }
}

mod rational_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Probability of a link assignment when link `i` equals 1 with probability
/// `biases[i]`.
fn assignment_probability(bits: &[u8], biases: &[Rational]) -> Rational {
    bits.iter()
        .zip(biases)
        .map(|(&b, p)| {
            if b == 1 {
                p.clone()
            } else {
                Rational::one() - p
            }
        })
        .product()
}

fn bits_of(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((index >> i) & 1) as u8).collect()
}

/// Splits `weight` into kept and aborted parts, keeping the lighter of the
/// two candidates fully and the heavier one with the ratio of their weights.
fn filter(weight: &Rational, observed: &Rational, complement: &Rational) -> (Rational, Rational) {
    if observed <= complement {
        (weight.clone(), Rational::zero())
    } else {
        let kept = weight * complement / observed;
        let aborted = weight - &kept;
        (kept, aborted)
    }
}

fn push_split(
    entries: &mut Vec<JointEntry>,
    assignment: &[u8],
    transcript: &Transcript,
    bit: u8,
    (kept, aborted): (Rational, Rational),
) {
    for (outcome, weight) in [(Outcome::Success(bit), kept), (Outcome::Abort, aborted)] {
        if !weight.is_zero() {
            entries.push(JointEntry {
                assignment: assignment.to_vec(),
                transcript: transcript.clone(),
                outcome,
                weight,
            });
        }
    }
}

/// Intermediate node `i` (1-based) announces `a_i xor a_{i+1}`.
pub fn xor_relay_transcript(bits: &[u8]) -> Transcript {
    bits.windows(2)
        .enumerate()
        .map(|(i, w)| Announcement {
            node: i + 1,
            bit: w[0] ^ w[1],
        })
        .collect()
}

/// The relay transcript plus node 0 announcing its bit in the clear.
pub fn leaky_transcript(bits: &[u8]) -> Transcript {
    let mut t = vec![Announcement {
        node: 0,
        bit: bits[0],
    }];
    t.extend(xor_relay_transcript(bits));
    t
}

/// Enumerates a chain of links with individual biases under an arbitrary
/// announcement rule. The endpoints assume the transcript pins the links down
/// to `a` or its complement and convert accordingly; the shared bit is the
/// first link's bit.
pub fn enumerate_links_with(
    biases: &[Rational],
    announce: impl Fn(&[u8]) -> Transcript,
) -> Result<JointDistribution> {
    let n = biases.len();
    if n == 0 {
        return Err(Error::EmptyChain);
    }
    if n > MAX_CHAIN_LINKS {
        return Err(Error::CostGuard(format!(
            "{n} links exceed the limit of {MAX_CHAIN_LINKS}"
        )));
    }
    biases.iter().try_for_each(check_bias)?;

    let mut entries = Vec::with_capacity(2 << n);
    for index in 0..1usize << n {
        let bits = bits_of(index, n);
        let weight = assignment_probability(&bits, biases);
        if weight.is_zero() {
            continue;
        }
        let complement: Vec<u8> = bits.iter().map(|b| b ^ 1).collect();
        let complement_weight = assignment_probability(&complement, biases);
        let transcript = announce(&bits);
        let split = filter(&weight, &weight, &complement_weight);
        push_split(&mut entries, &bits, &transcript, bits[0], split);
    }
    Ok(JointDistribution { entries })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEnumeration {
    pub joint: JointDistribution,
    #[serde(with = "rational_string")]
    pub success_probability: Rational,
}

/// All executions of the XOR relay protocol on `n` links of bias `p`.
pub fn enumerate_chain(n: usize, p: &Rational) -> Result<ChainEnumeration> {
    let joint = enumerate_links_with(&vec![p.clone(); n], xor_relay_transcript)?;
    let success_probability = joint.success_probability();
    Ok(ChainEnumeration {
        joint,
        success_probability,
    })
}

/// Two parallel links of bias `p` merged into `a_f = a_1 OR a_2`, then
/// converted. No announcement besides the abort decision.
pub fn enumerate_parallel(p: &Rational) -> Result<JointDistribution> {
    check_bias(p)?;
    let q = Rational::one() - p;
    let merged = [&q * &q, Rational::one() - &q * &q];
    let biases = [p.clone(), p.clone()];
    let mut entries = Vec::new();
    for index in 0..4 {
        let bits = bits_of(index, 2);
        let weight = assignment_probability(&bits, &biases);
        if weight.is_zero() {
            continue;
        }
        let f = bits[0] | bits[1];
        let split = filter(&weight, &merged[f as usize], &merged[1 - f as usize]);
        push_split(&mut entries, &bits, &Vec::new(), f, split);
    }
    Ok(JointDistribution { entries })
}

/// One relay node of a doubled-edge honeycomb with neighbors 1, 2, 3.
///
/// Links `2k` and `2k + 1` form the bundle to neighbor `k + 1`. The node runs
/// three one-time-pad relays on (0, 2), (3, 4) and (1, 5), joining neighbor
/// pairs (1, 2), (2, 3) and (1, 3), and announces the three XORs. Returns one
/// joint distribution per new link, each over the full six-link assignment
/// with the shared transcript; the outcome is that link's conversion.
pub fn enumerate_relay_node(p: &Rational) -> Result<[JointDistribution; 3]> {
    check_bias(p)?;
    const PAIRS: [(usize, usize); 3] = [(0, 2), (3, 4), (1, 5)];
    let biases = vec![p.clone(); 6];
    let single = |b: u8| {
        if b == 1 {
            p.clone()
        } else {
            Rational::one() - p
        }
    };
    let mut out: [JointDistribution; 3] = Default::default();
    for index in 0..64 {
        let bits = bits_of(index, 6);
        let weight = assignment_probability(&bits, &biases);
        if weight.is_zero() {
            continue;
        }
        let transcript: Transcript = PAIRS
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| Announcement {
                node: k,
                bit: bits[i] ^ bits[j],
            })
            .collect();
        for (dist, &(i, j)) in out.iter_mut().zip(&PAIRS) {
            let observed = single(bits[i]) * single(bits[j]);
            let complement = single(bits[i] ^ 1) * single(bits[j] ^ 1);
            let split = filter(&weight, &observed, &complement);
            push_split(&mut dist.entries, &bits, &transcript, bits[i], split);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub secret: bool,
    /// Largest `|P(bit = 0 | transcript, success) - 1/2|` over transcripts.
    #[serde(with = "rational_string")]
    pub max_bias: Rational,
    pub transcripts: usize,
}

/// Checks that, for every transcript with positive success weight, the shared
/// bit is exactly uniform given the transcript and success.
pub fn verify_secrecy(joint: &JointDistribution) -> SecrecyReport {
    let mut by_transcript: BTreeMap<&Transcript, [Rational; 2]> = BTreeMap::new();
    for e in &joint.entries {
        let slot = by_transcript
            .entry(&e.transcript)
            .or_insert_with(|| [Rational::zero(), Rational::zero()]);
        if let Outcome::Success(bit) = e.outcome {
            slot[bit as usize] += &e.weight;
        }
    }
    let half = rational(1, 2);
    let mut max_bias = Rational::zero();
    for [w0, w1] in by_transcript.values() {
        let total = w0 + w1;
        if total.is_zero() {
            continue;
        }
        let bias = (w0 / &total - &half).abs();
        if bias > max_bias {
            max_bias = bias;
        }
    }
    SecrecyReport {
        secret: max_bias.is_zero(),
        max_bias,
        transcripts: by_transcript.len(),
    }
}

/// Maximal conversion probability from `from` to `to`, in exact arithmetic.
/// Same formula as the floating-point version, computed independently.
pub fn conversion_probability_exact(from: &[Rational], to: &[Rational]) -> Rational {
    let len = from.len().max(to.len());
    let sorted = |v: &[Rational]| {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.cmp(a));
        s.resize(len, Rational::zero());
        s
    };
    let (fs, ts) = (sorted(from), sorted(to));
    let mut best = Rational::one();
    let (mut from_prefix, mut to_prefix) = (Rational::zero(), Rational::zero());
    for k in 0..len.saturating_sub(1) {
        from_prefix += &fs[k];
        to_prefix += &ts[k];
        let den = Rational::one() - &to_prefix;
        if den.is_zero() {
            continue;
        }
        let ratio = (Rational::one() - &from_prefix) / den;
        if ratio < best {
            best = ratio;
        }
    }
    if best.is_negative() {
        Rational::zero()
    } else {
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySearch {
    #[serde(with = "rational_string")]
    pub best: Rational,
    /// First labeling (in enumeration order) reaching `best`.
    pub labeling: Vec<usize>,
    pub labelings_tried: usize,
}

/// Best sbit probability over every deterministic relabeling of `state`
/// followed by optimal conversion to a uniform bit.
pub fn exhaustive_strategy_search(state: &[Rational]) -> Result<StrategySearch> {
    let n = state.len();
    if n == 0 || n > MAX_SEARCH_OUTCOMES {
        return Err(Error::CostGuard(format!(
            "alphabet of {n} outcomes; search supports 1..={MAX_SEARCH_OUTCOMES}"
        )));
    }
    if state.iter().any(Signed::is_negative) || state.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::InvalidState(
            "exact probabilities must be non-negative and sum to 1".into(),
        ));
    }
    let sbit = [rational(1, 2), rational(1, 2)];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut tried = 0;
    for code in 0..n.pow(n as u32) {
        let labeling: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
        let symbols = labeling.iter().max().unwrap() + 1;
        // surjective onto 0..symbols
        if (0..symbols).any(|s| !labeling.contains(&s)) {
            continue;
        }
        tried += 1;
        let mut grained = vec![Rational::zero(); symbols];
        for (p, &l) in state.iter().zip(&labeling) {
            grained[l] += p;
        }
        let value = if symbols < 2 {
            Rational::zero()
        } else {
            conversion_probability_exact(&grained, &sbit)
        };
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, labeling));
        }
    }
    let (best, labeling) = best.expect("identity labeling is always surjective");
    Ok(StrategySearch {
        best,
        labeling,
        labelings_tried: tried,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionVerdict {
    /// Bit `2 * a1 + a2` holds `f(a1, a2)`.
    pub truth_table: u8,
    pub name: Option<String>,
    /// `f(0, a2) != f(1, a2)` for both values of `a2`.
    pub decodable: bool,
    /// `sum_{a2} f(0, a2) == sum_{a2} f(1, a2)`.
    pub balanced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleFunction {
    pub truth_table: u8,
    pub name: Option<String>,
    /// Exact two-link success probability when the middle node announces `f`.
    #[serde(with = "rational_string")]
    pub success_probability: Rational,
    /// Whether the converted bit is perfectly secret given the announcement.
    pub secret_after_conversion: bool,
    /// `|P(f = 1 | a1 = 0) - P(f = 1 | a1 = 1)|` before conversion.
    #[serde(with = "rational_string")]
    pub announcement_bias: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XorUniquenessReport {
    #[serde(with = "rational_string")]
    pub p: Rational,
    pub functions: Vec<FunctionVerdict>,
    pub admissible: Vec<AdmissibleFunction>,
    /// Some value of `a2` has probability zero, so the constraints on it are
    /// not tied to any observable event.
    pub degenerate: bool,
}

fn function_name(table: u8) -> Option<String> {
    match table {
        0b0110 => Some("xor".into()),
        0b1001 => Some("xnor".into()),
        _ => None,
    }
}

/// Screens all 16 announcement functions `f(a1, a2)` of the middle node of a
/// two-link chain for decodability (the right end recovers `a1` from `a2` and
/// `f`) and balance (each value of `a1` produces the same number of 1
/// announcements), then runs every survivor through exact enumeration at `p`.
pub fn xor_uniqueness_check(p: &Rational) -> Result<XorUniquenessReport> {
    check_bias(p)?;
    let f = |table: u8, a1: u8, a2: u8| (table >> (2 * a1 + a2)) & 1;
    let mut functions = Vec::with_capacity(16);
    let mut admissible = Vec::new();
    let p_a2 = [Rational::one() - p, p.clone()];
    for table in 0u8..16 {
        let decodable = (0..2).all(|a2| f(table, 0, a2) != f(table, 1, a2));
        let ones = |a1| (0..2).map(|a2| f(table, a1, a2)).sum::<u8>();
        let balanced = ones(0) == ones(1);
        let name = function_name(table);
        if decodable && balanced {
            let joint = enumerate_links_with(&[p.clone(), p.clone()], |bits| {
                vec![Announcement {
                    node: 1,
                    bit: f(table, bits[0], bits[1]),
                }]
            })?;
            let leak = |a1| -> Rational {
                (0..2)
                    .filter(|&a2| f(table, a1, a2) == 1)
                    .map(|a2| p_a2[a2 as usize].clone())
                    .sum()
            };
            admissible.push(AdmissibleFunction {
                truth_table: table,
                name: name.clone(),
                success_probability: joint.success_probability(),
                secret_after_conversion: verify_secrecy(&joint).secret,
                announcement_bias: (leak(0) - leak(1)).abs(),
            });
        }
        functions.push(FunctionVerdict {
            truth_table: table,
            name,
            decodable,
            balanced,
        });
    }
    Ok(XorUniquenessReport {
        p: p.clone(),
        functions,
        admissible,
        degenerate: p.is_zero(),
    })
}

/// Float value of an exact probability, for comparisons with closed forms.
pub fn approximate(r: &Rational) -> f64 {
    to_f64(r)
}
