//! Rate and bound calculators: q-ary entropy, the Varshamov-Gilbert rate,
//! the probability that a random linear code meets it, and a planner that
//! turns `(q, n, δ, ε)` into concrete identification parameters.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::identify_code::ident_rate_code_q;

/// `h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`, with `0 log 0 = 0`.
pub fn entropy_q(q: u64, x: f64) -> Result<f64> {
    if q < 2 {
        return Err(invalid(format!("entropy needs q >= 2, got {q}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("entropy argument {x} outside [0, 1]")));
    }
    let ln_q = (q as f64).ln();
    let mut h = x * ((q - 1) as f64).ln();
    if x > 0.0 {
        h -= x * x.ln();
    }
    if x < 1.0 {
        h -= (1.0 - x) * (-x).ln_1p();
    }
    Ok(h / ln_q)
}

fn check_delta(q: u64, delta: f64) -> Result<()> {
    let limit = 1.0 - 1.0 / q as f64;
    if !(0.0..limit).contains(&delta) {
        return Err(invalid(format!(
            "relative distance {delta} outside [0, 1 - 1/q) = [0, {limit})"
        )));
    }
    Ok(())
}

/// `R = 1 - h_q(δ)`.
pub fn vg_rate(q: u64, delta: f64) -> Result<f64> {
    check_delta(q, delta)?;
    Ok(1.0 - entropy_q(q, delta)?)
}

/// `P = 1 - q^(1 - εn)` from the random-code distance guarantee, kept in
/// log form so tiny failure probabilities survive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessProbability {
    pub probability: f64,
    /// `log₁₀(1 - P) = (1 - εn)·log₁₀ q`.
    pub log10_one_minus: f64,
}

impl SuccessProbability {
    /// True when the bound says nothing (`P ≤ 0`).
    pub fn is_vacuous(&self) -> bool {
        self.probability <= 0.0
    }

    /// `-log₁₀(1 - P)`.
    pub fn nines(&self) -> f64 {
        -self.log10_one_minus
    }
}

pub fn distance_guarantee_probability(q: u64, n: u64, eps: f64) -> SuccessProbability {
    let exponent = 1.0 - eps * n as f64;
    let ln_fail = exponent * (q as f64).ln();
    SuccessProbability {
        probability: -ln_fail.exp_m1(),
        log10_one_minus: exponent * (q as f64).log10(),
    }
}

/// Identification parameters derived from a random code meeting the
/// distance guarantee. Derived quantities are methods, never cached.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSet {
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub delta: f64,
    pub eps: f64,
    pub ell: u32,
}

impl ParamSet {
    pub fn code_rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Worst-pair false acceptance bound `(1 - δ)^ℓ`.
    pub fn lambda2(&self) -> f64 {
        (1.0 - self.delta).powi(self.ell as i32)
    }

    /// Information content of the transmitted word, `ℓ·(log₂ n + log₂ q)`.
    pub fn word_bits(&self) -> f64 {
        f64::from(self.ell) * ((self.n as f64).log2() + (self.q as f64).log2())
    }

    /// Size of an identifier in bits, `k·log₂ q`.
    pub fn message_bits(&self) -> f64 {
        self.k as f64 * (self.q as f64).log2()
    }

    pub fn ident_rate(&self) -> f64 {
        ident_rate_code_q(self.q, self.k, self.n).unwrap_or(f64::NAN)
    }

    pub fn success(&self) -> SuccessProbability {
        distance_guarantee_probability(self.q, self.n, self.eps)
    }

    /// `key=value` lines with the documented keys.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push('=');
            s.push_str(&v);
            s.push('\n');
        };
        kv("q", self.q.to_string());
        kv("n", self.n.to_string());
        kv("k", self.k.to_string());
        kv("delta", self.delta.to_string());
        kv("eps", self.eps.to_string());
        kv("ell", self.ell.to_string());
        kv("lambda2", self.lambda2().to_string());
        kv("word_bits", self.word_bits().to_string());
        kv("rate", self.ident_rate().to_string());
        kv(
            "log10_one_minus_P",
            self.success().log10_one_minus.to_string(),
        );
        kv("message_bits", self.message_bits().to_string());
        s
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.success();
        writeln!(f, "{:<24}{}", "field order q", self.q)?;
        writeln!(f, "{:<24}{}", "code length n", self.n)?;
        writeln!(f, "{:<24}{}", "dimension k", self.k)?;
        writeln!(f, "{:<24}{}", "relative distance", self.delta)?;
        writeln!(f, "{:<24}{}", "slack eps", self.eps)?;
        writeln!(f, "{:<24}{}", "repetitions ell", self.ell)?;
        writeln!(f, "{:<24}{:.6e}", "false accept bound", self.lambda2())?;
        writeln!(f, "{:<24}{}", "word bits", self.word_bits())?;
        writeln!(f, "{:<24}{:.3}", "identification rate", self.ident_rate())?;
        writeln!(f, "{:<24}{}", "message bits", self.message_bits())?;
        if p.is_vacuous() {
            writeln!(f, "{:<24}vacuous", "success probability")
        } else {
            writeln!(
                f,
                "{:<24}1 - 10^{:.2}",
                "success probability", p.log10_one_minus
            )
        }
    }
}

/// `k = floor((1 - h_q(δ) - ε)·n)` and everything that follows from it.
pub fn plan_example(q: u64, n: u64, delta: f64, eps: f64, ell: u32) -> Result<ParamSet> {
    check_delta(q, delta)?;
    if n == 0 {
        return Err(invalid("code length n must be positive"));
    }
    if ell == 0 {
        return Err(invalid("repetition count ell must be at least 1"));
    }
    let rate = vg_rate(q, delta)?;
    if !(eps > 0.0 && eps < rate) {
        return Err(invalid(format!(
            "slack eps = {eps} outside (0, 1 - h_q(delta)) = (0, {rate})"
        )));
    }
    let k = ((rate - eps) * n as f64).floor();
    if k < 1.0 {
        return Err(Error::Degenerate(format!(
            "(1 - h_q(delta) - eps)·n = {} gives k = 0",
            (rate - eps) * n as f64
        )));
    }
    Ok(ParamSet {
        q,
        n,
        k: k as u64,
        delta,
        eps,
        ell,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    /// Strictly monotone toward the limit at every step.
    TowardLimit,
    /// Constant.
    NoTrend,
    /// Any other pattern.
    NotMonotone,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trend::TowardLimit => "toward limit",
            Trend::NoTrend => "no trend",
            Trend::NotMonotone => "not monotone",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendPoint {
    pub n: u64,
    /// log q / log n, limit 0.
    pub field_ratio: f64,
    /// log k / log n, limit 1.
    pub dimension_ratio: f64,
    /// δ as a stand-in for d/n, limit 1.
    pub distance_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub points: Vec<TrendPoint>,
    pub n_increasing: bool,
    pub field_ratio: Trend,
    pub dimension_ratio: Trend,
    pub distance_ratio: Trend,
}

impl TrendReport {
    pub fn all_toward_limits(&self) -> bool {
        self.n_increasing
            && [self.field_ratio, self.dimension_ratio, self.distance_ratio]
                .iter()
                .all(|t| *t == Trend::TowardLimit)
    }
}

impl fmt::Display for TrendReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>14} {:>12} {:>12} {:>12}",
            "n", "logq/logn", "logk/logn", "delta"
        )?;
        for p in &self.points {
            writeln!(
                f,
                "{:>14} {:>12.6} {:>12.6} {:>12.6}",
                p.n, p.field_ratio, p.dimension_ratio, p.distance_ratio
            )?;
        }
        writeln!(f, "logq/logn -> 0: {}", self.field_ratio)?;
        writeln!(f, "logk/logn -> 1: {}", self.dimension_ratio)?;
        writeln!(f, "delta -> 1:     {}", self.distance_ratio)
    }
}

fn classify(values: &[f64], increasing: bool) -> Trend {
    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if steps.iter().all(|&d| d == 0.0) {
        Trend::NoTrend
    } else if steps
        .iter()
        .all(|&d| if increasing { d > 0.0 } else { d < 0.0 })
    {
        Trend::TowardLimit
    } else {
        Trend::NotMonotone
    }
}

/// Finite-trend diagnostic for the optimality ratios. Reports direction
/// only; it makes no claim about limits.
pub fn optimality_check(points: &[ParamSet]) -> Result<TrendReport> {
    if points.len() < 3 {
        return Err(invalid(format!(
            "trend check needs at least 3 points, got {}",
            points.len()
        )));
    }
    let pts: Vec<TrendPoint> = points
        .iter()
        .map(|p| {
            let log_n = (p.n as f64).ln();
            TrendPoint {
                n: p.n,
                field_ratio: (p.q as f64).ln() / log_n,
                dimension_ratio: (p.k as f64).ln() / log_n,
                distance_ratio: p.delta,
            }
        })
        .collect();
    let n_increasing = points.windows(2).all(|w| w[1].n > w[0].n);
    let col = |f: fn(&TrendPoint) -> f64| pts.iter().map(f).collect::<Vec<_>>();
    Ok(TrendReport {
        field_ratio: classify(&col(|p| p.field_ratio), false),
        dimension_ratio: classify(&col(|p| p.dimension_ratio), true),
        distance_ratio: classify(&col(|p| p.distance_ratio), true),
        points: pts,
        n_increasing,
    })
}

/// A growth schedule `(q, n, δ, ε)` = `(2^4, 2^12, 1-2^-2, 2^-10)`,
/// `(2^6, 2^20, 1-2^-3, 2^-16)`, `(2^8, 2^32, 1-2^-4, 2^-24)`: the field
/// grows slower than the length while δ approaches 1.
pub fn growth_schedule() -> Result<Vec<ParamSet>> {
    [
        (4u32, 12u32, 2i32, -10i32),
        (6, 20, 3, -16),
        (8, 32, 4, -24),
    ]
    .into_iter()
    .map(|(m, log_n, delta_exp, eps_exp)| {
        plan_example(
            1 << m,
            1u64 << log_n,
            1.0 - 2f64.powi(-delta_exp),
            2f64.powi(eps_exp),
            1,
        )
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DELTA_EX1: f64 = 1.0 - 1.0 / 128.0;
    const EPS_EX1: f64 = 1.0 / 16384.0;

    #[test]
    fn entropy_endpoints() {
        for q in [2u64, 3, 4, 16, 1024] {
            assert_eq!(entropy_q(q, 0.0).unwrap(), 0.0);
            let peak = 1.0 - 1.0 / q as f64;
            assert!((entropy_q(q, peak).unwrap() - 1.0).abs() < 1e-12, "q={q}");
        }
        assert!(entropy_q(2, -0.1).is_err());
        assert!(entropy_q(2, 1.1).is_err());
        assert!(entropy_q(1, 0.5).is_err());
        // h_q(1) = log_q(q-1)
        assert!((entropy_q(4, 1.0).unwrap() - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn entropy_gf1024_example() {
        // 50-digit mpmath: 0.998639085435618495885750902803537...
        let h = entropy_q(1024, DELTA_EX1).unwrap();
        assert!((h - 0.998_639_085_435_618_5).abs() < 1e-13);
    }

    #[test]
    fn entropy_concave_and_peaked() {
        for q in [2u64, 4, 16, 256] {
            let peak = 1.0 - 1.0 / q as f64;
            let grid: Vec<f64> = (0..=200).map(|i| peak * i as f64 / 200.0).collect();
            let h: Vec<f64> = grid.iter().map(|&x| entropy_q(q, x).unwrap()).collect();
            for w in h.windows(3) {
                assert!(w[0] + w[2] <= 2.0 * w[1] + 1e-12);
            }
            assert!(h.iter().all(|&v| v <= 1.0 + 1e-12));
        }
    }

    #[test]
    fn vg_rates() {
        assert_eq!(vg_rate(2, 0.0).unwrap(), 1.0);
        assert!(vg_rate(2, 0.5).is_err());
        assert!(vg_rate(2, 0.499_999_999).unwrap().abs() < 1e-9);
        let r = vg_rate(1024, DELTA_EX1).unwrap();
        assert!((r - 0.001_360_914_564_381_504).abs() < 1e-13);
        assert!(vg_rate(4, -0.1).is_err());
    }

    #[test]
    fn guarantee_probability() {
        let p = distance_guarantee_probability(1024, 1 << 18, EPS_EX1);
        // 1 - P = 2^-150
        assert!((p.log10_one_minus - (-150.0 * 2f64.log10())).abs() < 1e-9);
        assert!((p.nines() - 45.154_499_349_597_18).abs() < 1e-9);
        assert_eq!(p.probability, 1.0);

        let p = distance_guarantee_probability(2, 100, 0.1);
        assert!((p.probability - 0.998_046_875).abs() < 1e-15);

        let p = distance_guarantee_probability(16, 10, 0.1);
        assert_eq!(p.probability, 0.0);
        assert!(p.is_vacuous());
    }

    #[test]
    fn guarantee_probability_monotone() {
        let mut last = f64::NEG_INFINITY;
        for n in 1..200u64 {
            let p = distance_guarantee_probability(4, n, 0.05).probability;
            assert!(p > last);
            last = p;
        }
        let mut last = f64::NEG_INFINITY;
        for i in 1..100 {
            let p = distance_guarantee_probability(4, 50, i as f64 * 0.002).probability;
            assert!(p > last);
            last = p;
        }
    }

    #[test]
    fn example_one_plan() {
        let p = plan_example(1024, 1 << 18, DELTA_EX1, EPS_EX1, 1).unwrap();
        assert_eq!(p.k, 340);
        assert_eq!(p.lambda2(), 0.0078125);
        assert_eq!(p.word_bits(), 28.0);
        assert!((p.ident_rate() - 0.419).abs() < 1e-3);
        assert_eq!(p.message_bits(), 3400.0);
        assert!((p.success().nines() - 45.0).abs() < 1.0);

        let p2 = ParamSet { ell: 2, ..p };
        assert!((6.0e-5..=6.2e-5).contains(&p2.lambda2()));
        assert_eq!(p2.word_bits(), 56.0);
    }

    #[test]
    fn zero_distance_plan() {
        let p = plan_example(4, 1000, 0.0, 0.01, 1).unwrap();
        assert_eq!(p.lambda2(), 1.0);
        assert_eq!(p.k, 990);
    }

    #[test]
    fn plan_hypotheses_enforced() {
        assert!(plan_example(2, 100, 0.5, 0.01, 1).is_err());
        assert!(plan_example(2, 100, 0.1, 0.0, 1).is_err());
        assert!(plan_example(2, 100, 0.1, 0.6, 1).is_err());
        assert!(plan_example(2, 100, 0.1, 0.01, 0).is_err());
        // rate - eps tiny: k rounds to 0
        let r = vg_rate(2, 0.2).unwrap();
        assert!(matches!(
            plan_example(2, 14, 0.2, r - 1e-3, 1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn kv_has_documented_keys() {
        let p = plan_example(1024, 1 << 18, DELTA_EX1, EPS_EX1, 1).unwrap();
        let kv = p.to_kv();
        for key in [
            "q",
            "n",
            "k",
            "delta",
            "eps",
            "ell",
            "lambda2",
            "word_bits",
            "rate",
            "log10_one_minus_P",
        ] {
            assert!(
                kv.lines().any(|l| l.starts_with(&format!("{key}="))),
                "{key}"
            );
        }
        assert!(kv.contains("k=340\n"));
        assert!(kv.contains("lambda2=0.0078125\n"));
        assert!(kv.contains("word_bits=28\n"));
    }

    #[test]
    fn growth_schedule_moves_toward_limits() {
        let pts = growth_schedule().unwrap();
        // k values frozen from a 40-digit evaluation of the same schedule.
        assert_eq!(
            pts.iter().map(|p| p.k).collect::<Vec<_>>(),
            [260, 39535, 90195982]
        );
        let report = optimality_check(&pts).unwrap();
        assert!(report.all_toward_limits(), "{report}");
    }

    #[test]
    fn constant_field_gives_decreasing_field_ratio() {
        let pts: Vec<ParamSet> = [1u64 << 10, 1 << 14, 1 << 18]
            .into_iter()
            .map(|n| plan_example(16, n, 0.5, 0.01, 1).unwrap())
            .collect();
        let report = optimality_check(&pts).unwrap();
        assert_eq!(report.field_ratio, Trend::TowardLimit);
        assert_eq!(report.distance_ratio, Trend::NoTrend);
    }

    #[test]
    fn repeated_point_has_no_trend() {
        let p = plan_example(16, 4096, 0.5, 0.01, 1).unwrap();
        let report = optimality_check(&[p.clone(), p.clone(), p]).unwrap();
        assert!(!report.n_increasing);
        assert_eq!(report.field_ratio, Trend::NoTrend);
        assert_eq!(report.dimension_ratio, Trend::NoTrend);
        assert_eq!(report.distance_ratio, Trend::NoTrend);
        assert!(!report.all_toward_limits());
    }

    #[test]
    fn too_few_points() {
        let p = plan_example(16, 4096, 0.5, 0.01, 1).unwrap();
        assert!(optimality_check(&[p.clone(), p]).is_err());
    }
}
