//! Monte Carlo and exhaustive estimates of the false-acceptance rate, plus
//! brute-force minimum distance and random-code sampling.
//!
//! Randomness: every trial `t` under master seed `s` uses ChaCha20 seeded
//! from `s` (via `seed_from_u64`) on stream `t`. Trials never share state,
//! so parallel and serial runs give identical reports.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::bounds::{distance_guarantee_probability, plan_example, SuccessProbability};
use crate::error::{invalid, Error, Result};
use crate::gf::Field;
use crate::identify_code::CodeSpec;
use crate::identify_prng::{PrngScheme, Seed};
use crate::message::Message;
use crate::scheme::Scheme;

/// Upper limit on enumerated cases in exhaustive mode.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 24;
/// Upper limit on `q^k` for brute-force distance.
pub const DISTANCE_LIMIT: u128 = 1 << 20;

const Z_95: f64 = 1.959_963_984_540_054;

pub fn trial_rng(master: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng
}

/// Wilson score interval at 95%.
pub fn wilson_interval(accepts: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = accepts as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if accepts == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if accepts == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialMode {
    RandomPairs,
    WorstPairExhaustive,
}

impl std::str::FromStr for TrialMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-pairs" => Ok(TrialMode::RandomPairs),
            "worst-pair-exhaustive" => Ok(TrialMode::WorstPairExhaustive),
            other => Err(invalid(format!("unknown trial mode {other:?}"))),
        }
    }
}

impl fmt::Display for TrialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrialMode::RandomPairs => "random-pairs",
            TrialMode::WorstPairExhaustive => "worst-pair-exhaustive",
        })
    }
}

/// Whether the receiver expects a different message (false acceptance) or
/// the sent one (missed detection).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Distinct,
    Identical,
}

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub scheme: Scheme,
    pub trials: u64,
    pub seed: u64,
    pub mode: TrialMode,
    pub pairing: Pairing,
}

impl TrialConfig {
    pub fn random_pairs(scheme: Scheme, trials: u64, seed: u64) -> Self {
        TrialConfig {
            scheme,
            trials,
            seed,
            mode: TrialMode::RandomPairs,
            pairing: Pairing::Distinct,
        }
    }

    pub fn exhaustive(scheme: Scheme) -> Self {
        TrialConfig {
            scheme,
            trials: 1,
            seed: 0,
            mode: TrialMode::WorstPairExhaustive,
            pairing: Pairing::Distinct,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstPair {
    pub sent: Message,
    pub expected: Message,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub mode: TrialMode,
    pub accepts: u64,
    pub trials: u64,
    pub estimate: f64,
    pub interval: (f64, f64),
    pub reference: Option<f64>,
    /// Exhaustive mode: the pair attaining the worst rate.
    pub worst_pair: Option<WorstPair>,
    /// Exhaustive mode: exact rate averaged over all pairs.
    pub mean_rate: Option<f64>,
}

impl TrialReport {
    fn sampled(accepts: u64, trials: u64, reference: Option<f64>) -> Self {
        TrialReport {
            mode: TrialMode::RandomPairs,
            accepts,
            trials,
            estimate: accepts as f64 / trials as f64,
            interval: wilson_interval(accepts, trials),
            reference,
            worst_pair: None,
            mean_rate: None,
        }
    }

    /// Whether the reference value lies in the interval. Exhaustive reports
    /// have a degenerate interval, so this is an exactness check.
    pub fn covers_reference(&self) -> Option<bool> {
        self.reference.map(|r| {
            let tol = 1e-12;
            r >= self.interval.0 - tol && r <= self.interval.1 + tol
        })
    }

    pub fn to_kv(&self) -> String {
        let mut lines = vec![
            format!("mode={}", self.mode),
            format!("accepts={}", self.accepts),
            format!("trials={}", self.trials),
            format!("estimate={}", self.estimate),
            format!("ci_low={}", self.interval.0),
            format!("ci_high={}", self.interval.1),
        ];
        if let Some(r) = self.reference {
            lines.push(format!("reference={r}"));
        }
        if let Some(c) = self.covers_reference() {
            lines.push(format!("covers={c}"));
        }
        if let Some(m) = self.mean_rate {
            lines.push(format!("mean_rate={m}"));
        }
        if let Some(w) = &self.worst_pair {
            lines.push(format!("worst_sent={}", w.sent));
            lines.push(format!("worst_expected={}", w.expected));
        }
        lines.join("\n") + "\n"
    }
}

impl fmt::Display for TrialReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<16}{}", "mode", self.mode)?;
        writeln!(f, "{:<16}{} / {}", "accepted", self.accepts, self.trials)?;
        writeln!(f, "{:<16}{:.6e}", "estimate", self.estimate)?;
        writeln!(
            f,
            "{:<16}[{:.6e}, {:.6e}]",
            "95% interval", self.interval.0, self.interval.1
        )?;
        if let Some(m) = self.mean_rate {
            writeln!(f, "{:<16}{:.6e}", "mean over pairs", m)?;
        }
        if let (Some(r), Some(c)) = (self.reference, self.covers_reference()) {
            writeln!(
                f,
                "{:<16}{:.6e} ({})",
                "reference",
                r,
                if c { "covered" } else { "NOT covered" }
            )?;
        }
        Ok(())
    }
}

fn draw_pair<R: RngCore>(scheme: &Scheme, pairing: Pairing, rng: &mut R) -> (Message, Message) {
    let (f, k) = (scheme.field(), scheme.k());
    let sent = Message::random(f, k, rng);
    let expected = match pairing {
        Pairing::Identical => sent.clone(),
        Pairing::Distinct => loop {
            let candidate = Message::random(f, k, rng);
            if candidate != sent {
                break candidate;
            }
        },
    };
    (sent, expected)
}

/// Runs the configured trials and reports how often the receiver accepted.
pub fn estimate_lambda2(cfg: &TrialConfig) -> Result<TrialReport> {
    match cfg.mode {
        TrialMode::RandomPairs => random_pairs(cfg),
        TrialMode::WorstPairExhaustive => match &cfg.scheme {
            Scheme::Code { spec, ell } => exhaustive_code(spec, *ell, cfg.pairing),
            Scheme::Prng(p) => exhaustive_prng(p, cfg.pairing),
        },
    }
}

fn random_pairs(cfg: &TrialConfig) -> Result<TrialReport> {
    if cfg.trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let scheme = &cfg.scheme;
    let accepts = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<u64> {
            let mut rng = trial_rng(cfg.seed, t);
            let (sent, expected) = draw_pair(scheme, cfg.pairing, &mut rng);
            let word = scheme.send(&sent, &mut rng)?;
            Ok(u64::from(scheme.verify(&expected, &word).is_accept()))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let reference = match cfg.pairing {
        Pairing::Distinct => scheme.ideal_false_accept(),
        Pairing::Identical => 1.0,
    };
    Ok(TrialReport::sampled(accepts, cfg.trials, Some(reference)))
}

fn message_count(field: Field, k: usize) -> u128 {
    u128::from(field.q())
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX)
}

/// Message number `idx` in base-q order, least significant symbol first.
fn message_at(field: Field, k: usize, mut idx: u64) -> Vec<u16> {
    let q = u64::from(field.q());
    (0..k)
        .map(|_| {
            let d = (idx % q) as u16;
            idx /= q;
            d
        })
        .collect()
}

fn pair_count(messages: u128, pairing: Pairing) -> u128 {
    match pairing {
        Pairing::Distinct => messages * (messages - 1),
        Pairing::Identical => messages,
    }
}

fn check_cases(cases: u128) -> Result<()> {
    if cases > EXHAUSTIVE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            cases,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

/// Per-pair counts to worst pair and mean rate. `counts[a * messages + b]`
/// is the number of accepting cases when `a` is sent and `b` expected.
#[allow(clippy::too_many_arguments)]
fn summarize(
    field: Field,
    k: usize,
    counts: &[u64],
    messages: usize,
    cases_per_pair: u64,
    ell: u32,
    pairing: Pairing,
    reference: Option<f64>,
) -> TrialReport {
    let mut worst = (0u64, 0usize, 0usize);
    let mut rate_sum = 0f64;
    let mut pairs = 0u64;
    let per_pair = (cases_per_pair as f64).powi(ell as i32);
    for a in 0..messages {
        for b in 0..messages {
            let keep = match pairing {
                Pairing::Distinct => a != b,
                Pairing::Identical => a == b,
            };
            if !keep {
                continue;
            }
            let c = counts[a * messages + b];
            rate_sum += (c as f64).powi(ell as i32) / per_pair;
            pairs += 1;
            if c > worst.0 || pairs == 1 {
                worst = (c, a, b);
            }
        }
    }
    let accepts = worst.0.pow(ell);
    let trials = cases_per_pair.pow(ell);
    let estimate = accepts as f64 / trials as f64;
    let msg = |i: usize| {
        Message::from_values(field, message_at(field, k, i as u64)).expect("valid symbols")
    };
    TrialReport {
        mode: TrialMode::WorstPairExhaustive,
        accepts,
        trials,
        estimate,
        interval: (estimate, estimate),
        reference,
        worst_pair: Some(WorstPair {
            sent: msg(worst.1),
            expected: msg(worst.2),
        }),
        mean_rate: Some(rate_sum / pairs as f64),
    }
}

/// Enumerates every ordered pair and every index. With `ℓ` repetitions drawn
/// with replacement the accepting index tuples of a pair number `c^ℓ` out of
/// `n^ℓ`, where `c` is the single-index count.
fn exhaustive_code(spec: &CodeSpec, ell: usize, pairing: Pairing) -> Result<TrialReport> {
    let field = spec.field();
    let k = spec.k();
    let messages = message_count(field, k);
    check_cases(pair_count(messages, pairing).saturating_mul(u128::from(spec.n())))?;
    let messages = messages as usize;
    let n = spec.n() as usize;
    let columns = spec.materialize();
    // codewords[u * n + i] = c_i(u)
    let codewords: Vec<u16> = (0..messages)
        .flat_map(|u| {
            let sym = message_at(field, k, u as u64);
            columns
                .iter()
                .map(|c| field.dot_raw(&sym, c.as_slice()))
                .collect::<Vec<_>>()
        })
        .collect();
    let counts: Vec<u64> = (0..messages * messages)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / messages, ab % messages);
            let ca = &codewords[a * n..(a + 1) * n];
            let cb = &codewords[b * n..(b + 1) * n];
            ca.iter().zip(cb).filter(|(x, y)| x == y).count() as u64
        })
        .collect();
    let reference = match pairing {
        Pairing::Distinct => {
            let d = brute_force_min_distance(spec)?.distance;
            Some((1.0 - f64::from(d) / n as f64).powi(ell as i32))
        }
        Pairing::Identical => Some(1.0),
    };
    Ok(summarize(
        field, k, &counts, messages, n as u64, ell as u32, pairing, reference,
    ))
}

/// Enumerates every ordered pair and every seed in `F_q^μ`.
fn exhaustive_prng(scheme: &PrngScheme, pairing: Pairing) -> Result<TrialReport> {
    let field = scheme.field();
    let k = scheme.k();
    let messages = message_count(field, k);
    let seeds = message_count(field, scheme.mu());
    check_cases(pair_count(messages, pairing).saturating_mul(seeds))?;
    let messages = messages as usize;
    let seeds = seeds as u64;
    let all: Vec<Message> = (0..messages)
        .map(|i| Message::from_values(field, message_at(field, k, i as u64)).expect("valid"))
        .collect();
    let counts = (0..seeds)
        .into_par_iter()
        .map(|s| -> Result<Vec<u64>> {
            let seed = Seed::new(field.vector(message_at(field, scheme.mu(), s))?);
            let g = scheme.build_tag_matrix(&seed)?;
            let tags: Vec<_> = all.iter().map(|u| g.apply(u)).collect();
            let mut hits = vec![0u64; messages * messages];
            for a in 0..messages {
                for b in 0..messages {
                    if tags[a] == tags[b] {
                        hits[a * messages + b] = 1;
                    }
                }
            }
            Ok(hits)
        })
        .try_reduce(
            || vec![0u64; messages * messages],
            |mut acc, h| {
                acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
                Ok(acc)
            },
        )?;
    let reference = match pairing {
        Pairing::Distinct => Some(f64::from(field.q()).powi(-(scheme.ell() as i32))),
        Pairing::Identical => Some(1.0),
    };
    Ok(summarize(
        field, k, &counts, messages, seeds, 1, pairing, reference,
    ))
}

/// Which seeds a fixed-pair sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedSweep {
    /// Every one of the `q^μ` seeds.
    All,
    /// `N` seeds drawn from per-trial streams of the master seed.
    Random(u64),
}

impl std::str::FromStr for SeedSweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(SeedSweep::All);
        }
        match s.parse::<u64>() {
            Ok(n) if n >= 1 => Ok(SeedSweep::Random(n)),
            _ => Err(invalid("seeds must be `all` or a positive count")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub accepted: u64,
    pub seeds: u64,
    pub exhaustive: bool,
}

impl SweepReport {
    pub fn rate(&self) -> f64 {
        self.accepted as f64 / self.seeds as f64
    }

    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.accepted, self.seeds)
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "accepted {}/{} seeds, lambda2={}",
            self.accepted,
            self.seeds,
            self.rate()
        )
    }
}

/// Sends `sent` under each selected seed and counts how often the receiver
/// expecting `expected` accepts.
pub fn seed_sweep(
    scheme: &PrngScheme,
    sent: &Message,
    expected: &Message,
    sweep: SeedSweep,
    master: u64,
) -> Result<SweepReport> {
    let field = scheme.field();
    sent.check(field, scheme.k())?;
    expected.check(field, scheme.k())?;
    let hit = |seed: &Seed| -> Result<u64> {
        let w = crate::identify_prng::PrngIdentWord {
            seed: seed.clone(),
            tags: scheme.tags_for(sent, seed)?,
        };
        Ok(u64::from(scheme.verify(expected, &w).is_accept()))
    };
    match sweep {
        SeedSweep::All => {
            let seeds = message_count(field, scheme.mu());
            check_cases(seeds)?;
            let seeds = seeds as u64;
            let accepted = (0..seeds)
                .into_par_iter()
                .map(|s| {
                    hit(&Seed::new(field.vector(message_at(
                        field,
                        scheme.mu(),
                        s,
                    ))?))
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(SweepReport {
                accepted,
                seeds,
                exhaustive: true,
            })
        }
        SeedSweep::Random(n) => {
            let accepted = (0..n)
                .into_par_iter()
                .map(|t| hit(&scheme.random_seed(&mut trial_rng(master, t))))
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(SweepReport {
                accepted,
                seeds: n,
                exhaustive: false,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinDistance {
    pub distance: u32,
    /// Some nonzero message encodes to the zero word.
    pub degenerate: bool,
}

/// Minimum Hamming weight over all nonzero codewords `vG`.
pub fn brute_force_min_distance(spec: &CodeSpec) -> Result<MinDistance> {
    let field = spec.field();
    let k = spec.k();
    let messages = message_count(field, k);
    if messages > DISTANCE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            cases: messages,
            limit: DISTANCE_LIMIT,
        });
    }
    let columns = spec.materialize();
    let distance = (1..messages as u64)
        .into_par_iter()
        .map(|v| {
            let sym = message_at(field, k, v);
            columns
                .iter()
                .filter(|c| field.dot_raw(&sym, c.as_slice()) != 0)
                .count() as u32
        })
        .min()
        .unwrap_or(spec.n());
    Ok(MinDistance {
        distance,
        degenerate: distance == 0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VgSampleReport {
    pub q: u64,
    pub n: u32,
    pub k: u64,
    pub delta: f64,
    pub eps: f64,
    pub samples: u64,
    pub successes: u64,
    pub bound: SuccessProbability,
}

impl VgSampleReport {
    pub fn fraction(&self) -> f64 {
        self.successes as f64 / self.samples as f64
    }

    pub fn bound_is_vacuous(&self) -> bool {
        self.bound.is_vacuous()
    }

    /// Success fraction at least the (clamped) guarantee.
    pub fn meets_bound(&self) -> bool {
        self.fraction() >= self.bound.probability.max(0.0)
    }

    pub fn to_kv(&self) -> String {
        format!(
            "q={}\nn={}\nk={}\ndelta={}\neps={}\nsamples={}\nsuccesses={}\nfraction={}\nbound={}\nbound_status={}\n",
            self.q,
            self.n,
            self.k,
            self.delta,
            self.eps,
            self.samples,
            self.successes,
            self.fraction(),
            self.bound.probability,
            if self.bound_is_vacuous() { "vacuous" } else { "informative" }
        )
    }
}

impl fmt::Display for VgSampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "random [{}, {}] codes over GF({})",
            self.n, self.k, self.q
        )?;
        writeln!(
            f,
            "d/n >= {}: {} / {} ({:.4})",
            self.delta,
            self.successes,
            self.samples,
            self.fraction()
        )?;
        if self.bound_is_vacuous() {
            writeln!(f, "guarantee: vacuous ({:.4})", self.bound.probability)
        } else {
            writeln!(f, "guarantee: {:.6}", self.bound.probability)
        }
    }
}

/// Samples random codes of dimension `floor((1 - h_q(δ) - ε)·n)` and counts
/// how many reach relative distance δ.
pub fn vg_sample(
    field: Field,
    n: u32,
    delta: f64,
    eps: f64,
    samples: u64,
    seed: u64,
) -> Result<VgSampleReport> {
    if samples == 0 {
        return Err(invalid("samples must be at least 1"));
    }
    let q = u64::from(field.q());
    let plan = plan_example(q, u64::from(n), delta, eps, 1)?;
    let k = usize::try_from(plan.k).map_err(|_| invalid("k too large"))?;
    if message_count(field, k) > DISTANCE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            cases: message_count(field, k),
            limit: DISTANCE_LIMIT,
        });
    }
    let threshold = delta * f64::from(n);
    let successes = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<u64> {
            let mut rng = trial_rng(seed, s);
            let key: [u8; 32] = rng.random();
            let spec = CodeSpec::new(field, k, n, key.to_vec())?;
            let d = brute_force_min_distance(&spec)?;
            Ok(u64::from(f64::from(d.distance) >= threshold))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(VgSampleReport {
        q,
        n,
        k: plan.k,
        delta,
        eps,
        samples,
        successes,
        bound: distance_guarantee_probability(q, u64::from(n), eps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identify_prng::Generator;

    fn code(m: u8, k: usize, n: u32, key: &[u8], ell: usize) -> Scheme {
        Scheme::Code {
            spec: CodeSpec::new(Field::new(m).unwrap(), k, n, key.to_vec()).unwrap(),
            ell,
        }
    }

    fn pairwise_min_distance(spec: &CodeSpec) -> u32 {
        // Independent route: minimum distance between distinct codewords.
        let f = spec.field();
        let g = spec.materialize();
        let words: Vec<Vec<u16>> = (0..message_count(f, spec.k()) as u64)
            .map(|u| {
                let sym = message_at(f, spec.k(), u);
                g.iter()
                    .map(|c| {
                        sym.iter()
                            .zip(c.as_slice())
                            .fold(0, |acc, (&a, &b)| acc ^ f.mul_raw(a, b))
                    })
                    .collect()
            })
            .collect();
        let mut best = spec.n();
        for a in 0..words.len() {
            for b in a + 1..words.len() {
                let d = words[a]
                    .iter()
                    .zip(&words[b])
                    .filter(|(x, y)| x != y)
                    .count() as u32;
                best = best.min(d);
            }
        }
        best
    }

    #[test]
    fn wilson_matches_closed_form() {
        // 50 of 100: center 0.5, half-width z·sqrt(0.25/n + z²/4n²)/(1+z²/n)
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.403_831_4).abs() < 1e-6);
        assert!((hi - 0.596_168_6).abs() < 1e-6);
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.31);
        let (lo, hi) = wilson_interval(10, 10);
        assert!(lo > 0.69);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn reports_are_reproducible() {
        let s = code(4, 4, 64, b"repro", 1);
        let a = estimate_lambda2(&TrialConfig::random_pairs(s.clone(), 2000, 42)).unwrap();
        let b = estimate_lambda2(&TrialConfig::random_pairs(s.clone(), 2000, 42)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.accepts, 0);
    }

    #[test]
    fn identical_pairing_always_accepts() {
        let s = code(8, 4, 100, b"same", 2);
        let cfg = TrialConfig {
            trials: 1,
            pairing: Pairing::Identical,
            ..TrialConfig::random_pairs(s, 1, 9)
        };
        let r = estimate_lambda2(&cfg).unwrap();
        assert_eq!(r.accepts, 1);
        assert_eq!(r.covers_reference(), Some(true));
    }

    #[test]
    fn prng_gf16_covers_reciprocal() {
        let p =
            PrngScheme::new(Field::new(4).unwrap(), 4, 1, 3, Generator::NonlinearDefault).unwrap();
        let r = estimate_lambda2(&TrialConfig::random_pairs(Scheme::Prng(p), 100_000, 1)).unwrap();
        assert_eq!(r.reference, Some(1.0 / 16.0));
        assert_eq!(r.covers_reference(), Some(true), "{r}");
    }

    #[test]
    fn exhaustive_code_worst_pair_is_distance_bound() {
        let s = code(1, 3, 7, b"seven", 1);
        let r = estimate_lambda2(&TrialConfig::exhaustive(s.clone())).unwrap();
        let Scheme::Code { spec, .. } = &s else {
            unreachable!()
        };
        let d = pairwise_min_distance(spec);
        assert_eq!(r.trials, 7);
        assert_eq!(r.accepts, 7 - u64::from(d));
        assert_eq!(r.covers_reference(), Some(true));
        let w = r.worst_pair.unwrap();
        assert_ne!(w.sent, w.expected);
    }

    #[test]
    fn exhaustive_and_sampled_agree_on_tiny_code() {
        let s = code(1, 2, 4, b"tiny", 1);
        let exact = estimate_lambda2(&TrialConfig::exhaustive(s.clone()))
            .unwrap()
            .mean_rate
            .unwrap();
        let mc = estimate_lambda2(&TrialConfig::random_pairs(s, 100_000, 5)).unwrap();
        let sigma = (exact * (1.0 - exact) / 100_000.0).sqrt();
        assert!((mc.estimate - exact).abs() < 4.0 * sigma, "{exact} vs {mc}");
    }

    #[test]
    fn lfsr_sweep_accepts_every_seed() {
        let f = Field::new(1).unwrap();
        let lfsr = crate::identify_prng::LfsrSpec::new(f, vec![1, 1]).unwrap();
        let (u, v) = crate::identify_prng::lfsr_attack(&lfsr, 4).unwrap();
        let p = PrngScheme::new(f, 4, 1, 2, Generator::Lfsr(lfsr)).unwrap();
        let r = seed_sweep(&p, &u, &v, SeedSweep::All, 0).unwrap();
        assert_eq!(r.to_string(), "accepted 4/4 seeds, lambda2=1");
        let r = seed_sweep(&p, &u, &v, SeedSweep::Random(50), 3).unwrap();
        assert_eq!((r.accepted, r.seeds), (50, 50));
        assert_eq!("all".parse::<SeedSweep>().unwrap(), SeedSweep::All);
        assert!("0".parse::<SeedSweep>().is_err());
    }

    #[test]
    fn exhaustive_too_large_is_rejected() {
        let s = code(8, 4, 100, b"big", 1);
        assert!(matches!(
            estimate_lambda2(&TrialConfig::exhaustive(s)),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn exhaustive_lfsr_worst_pair_always_accepted() {
        let f = Field::new(1).unwrap();
        let lfsr = crate::identify_prng::LfsrSpec::new(f, vec![1, 1]).unwrap();
        let p = PrngScheme::new(f, 4, 2, 2, Generator::Lfsr(lfsr)).unwrap();
        let r = estimate_lambda2(&TrialConfig::exhaustive(Scheme::Prng(p))).unwrap();
        assert_eq!(r.accepts, r.trials);
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.covers_reference(), Some(false));
    }

    #[test]
    fn min_distance_single_row() {
        let f = Field::new(2).unwrap();
        let spec = CodeSpec::new(f, 1, 9, b"row".to_vec()).unwrap();
        let row_weight = spec
            .materialize()
            .iter()
            .filter(|c| c.as_slice()[0] != 0)
            .count() as u32;
        let d = brute_force_min_distance(&spec).unwrap();
        assert_eq!(d.distance, row_weight);
        assert_eq!(d.degenerate, row_weight == 0);
    }

    #[test]
    fn min_distance_matches_pairwise_oracle() {
        for key in 0..20u8 {
            let spec = CodeSpec::new(Field::new(1).unwrap(), 4, 8, vec![key]).unwrap();
            assert_eq!(
                brute_force_min_distance(&spec).unwrap().distance,
                pairwise_min_distance(&spec)
            );
        }
    }

    #[test]
    fn degenerate_code_flagged() {
        // n = 1, k = 2 over GF(2): some nonzero v always kills the column.
        let spec = CodeSpec::new(Field::new(1).unwrap(), 2, 1, b"x".to_vec()).unwrap();
        let d = brute_force_min_distance(&spec).unwrap();
        assert_eq!(d.distance, 0);
        assert!(d.degenerate);
    }

    #[test]
    fn vg_sample_zero_delta_always_succeeds() {
        let r = vg_sample(Field::new(1).unwrap(), 10, 0.0, 0.3, 20, 1).unwrap();
        assert_eq!(r.successes, 20);
        assert_eq!(r.k, 7);
    }

    #[test]
    fn vg_sample_k_zero_rejected() {
        let f = Field::new(1).unwrap();
        let r = crate::bounds::vg_rate(2, 0.2).unwrap();
        assert!(matches!(
            vg_sample(f, 14, 0.2, r - 1e-4, 10, 1),
            Err(Error::Degenerate(_))
        ));
    }
}
