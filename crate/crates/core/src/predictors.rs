//! Predictors over characteristic sequences and their martingales.
//!
//! Bit `i` of a characteristic prefix `w` is the membership bit of `sᵢ`. A
//! predictor assigns `(p(sᵢ, 0), p(sᵢ, 1))` summing to one, and its capital
//! after `n` rounds is `d(w) = 2ⁿ · ∏_{i<n} p(sᵢ, w[i])`. All capital
//! arithmetic is in base-2 logs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::depth::PerformanceValue;
use crate::error::Error;
use crate::sequences::string_index;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredictorSpec {
    /// Always `(1/2, 1/2)`.
    Uniform,
    /// Add-one smoothed frequency of the bits revealed so far.
    Frequency,
    /// Add-one smoothed counts conditioned on the last `order` revealed bits.
    Markov { order: u32 },
    /// Certain of a fixed target; for tests.
    Oracle { target: BitString },
}

/// Running prediction state over one characteristic prefix.
pub trait PredictionState {
    /// `(p0, p1)` for query `s_index`.
    fn predict(&self, index: u64) -> (f64, f64);
    fn observe(&mut self, bit: bool);
}

pub trait Predictor: Send + Sync {
    fn spec(&self) -> PredictorSpec;
    fn start(&self) -> Box<dyn PredictionState + '_>;
}

impl PredictorSpec {
    pub fn build(&self) -> Box<dyn Predictor> {
        match self {
            PredictorSpec::Uniform => Box::new(Uniform),
            PredictorSpec::Frequency => Box::new(Counting { order: 0, kind: self.clone() }),
            PredictorSpec::Markov { order } => {
                Box::new(Counting { order: *order, kind: self.clone() })
            }
            PredictorSpec::Oracle { target } => Box::new(Oracle { target: target.clone() }),
        }
    }
}

impl FromStr for PredictorSpec {
    type Err = Error;

    /// `uniform`, `frequency`, `markov:<order>`, optionally prefixed by `predictor:`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let body = s.strip_prefix("predictor:").unwrap_or(s);
        match body.split_once(':') {
            None if body == "uniform" => Ok(PredictorSpec::Uniform),
            None if body == "frequency" => Ok(PredictorSpec::Frequency),
            Some(("markov", r)) => {
                let order = r
                    .parse::<u32>()
                    .ok()
                    .filter(|&r| r <= MAX_ORDER)
                    .ok_or_else(|| Error::Config(format!("markov order must be 0..={MAX_ORDER}, got {r:?}")))?;
                Ok(PredictorSpec::Markov { order })
            }
            _ => Err(Error::Config(format!("unknown predictor {s:?}"))),
        }
    }
}

impl fmt::Display for PredictorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorSpec::Uniform => f.write_str("predictor:uniform"),
            PredictorSpec::Frequency => f.write_str("predictor:frequency"),
            PredictorSpec::Markov { order } => write!(f, "predictor:markov:{order}"),
            PredictorSpec::Oracle { .. } => f.write_str("predictor:oracle"),
        }
    }
}

pub const MAX_ORDER: u32 = 32;

struct Uniform;

impl Predictor for Uniform {
    fn spec(&self) -> PredictorSpec {
        PredictorSpec::Uniform
    }

    fn start(&self) -> Box<dyn PredictionState + '_> {
        Box::new(Uniform)
    }
}

impl PredictionState for Uniform {
    fn predict(&self, _index: u64) -> (f64, f64) {
        (0.5, 0.5)
    }

    fn observe(&mut self, _bit: bool) {}
}

struct Counting {
    order: u32,
    kind: PredictorSpec,
}

struct CountingState {
    order: u32,
    // (context length, context bits) -> counts of the following bit
    counts: HashMap<(u32, u64), [u64; 2]>,
    context: u64,
    seen: u64,
}

impl CountingState {
    fn key(&self) -> (u32, u64) {
        let len = self.order.min(self.seen.min(u32::MAX as u64) as u32);
        let mask = if len == 0 { 0 } else { u64::MAX >> (64 - len) };
        (len, self.context & mask)
    }
}

impl Predictor for Counting {
    fn spec(&self) -> PredictorSpec {
        self.kind.clone()
    }

    fn start(&self) -> Box<dyn PredictionState + '_> {
        Box::new(CountingState { order: self.order, counts: HashMap::new(), context: 0, seen: 0 })
    }
}

impl PredictionState for CountingState {
    fn predict(&self, _index: u64) -> (f64, f64) {
        let [c0, c1] = self.counts.get(&self.key()).copied().unwrap_or([0, 0]);
        let p0 = (c0 + 1) as f64 / (c0 + c1 + 2) as f64;
        (p0, 1.0 - p0)
    }

    fn observe(&mut self, bit: bool) {
        let key = self.key();
        self.counts.entry(key).or_insert([0, 0])[bit as usize] += 1;
        self.context = (self.context << 1) | bit as u64;
        self.seen += 1;
    }
}

struct Oracle {
    target: BitString,
}

struct OracleState<'a> {
    target: &'a BitString,
}

impl Predictor for Oracle {
    fn spec(&self) -> PredictorSpec {
        PredictorSpec::Oracle { target: self.target.clone() }
    }

    fn start(&self) -> Box<dyn PredictionState + '_> {
        Box::new(OracleState { target: &self.target })
    }
}

impl PredictionState for OracleState<'_> {
    fn predict(&self, index: u64) -> (f64, f64) {
        match self.target.get(index as usize) {
            Some(true) => (0.0, 1.0),
            Some(false) => (1.0, 0.0),
            None => (0.5, 0.5),
        }
    }

    fn observe(&mut self, _bit: bool) {}
}

/// `(p(query, 0), p(query, 1))` after the characteristic prefix `history`.
pub fn predict(pred: &PredictorSpec, query: &[bool], history: &[bool]) -> (f64, f64) {
    let p = pred.build();
    let mut state = p.start();
    for &b in history {
        state.observe(b);
    }
    // λ has no index; only the oracle looks at it
    state.predict(string_index(query).unwrap_or(u64::MAX))
}

/// `log₂ d(w) = n + Σ log₂ p(sᵢ, w[i])`; `-∞` when some factor is zero.
pub fn martingale_log(pred: &PredictorSpec, w: &[bool]) -> f64 {
    log_capital_at(pred, w, &[w.len()])[0]
}

/// `log₂ d` after each prefix length in `checkpoints` (any order).
pub fn log_capital_at(pred: &PredictorSpec, w: &[bool], checkpoints: &[usize]) -> Vec<f64> {
    let horizon = checkpoints.iter().copied().max().unwrap_or(0).min(w.len());
    let p = pred.build();
    let mut state = p.start();
    let mut running = Vec::with_capacity(horizon + 1);
    let mut sum = 0.0f64;
    running.push(0.0);
    for (i, &b) in w[..horizon].iter().enumerate() {
        let (p0, p1) = state.predict(i as u64);
        let pb = if b { p1 } else { p0 };
        sum += 1.0 + pb.log2();
        running.push(sum);
        state.observe(b);
    }
    checkpoints.iter().map(|&n| running[n.min(horizon)]).collect()
}

/// Capital after each round of the betting game, in log₂.
#[derive(Clone, Debug, PartialEq)]
pub struct CapitalTrace {
    pub log2_values: Vec<f64>,
}

impl CapitalTrace {
    pub fn last(&self) -> f64 {
        *self.log2_values.last().expect("trace starts with entry 0")
    }
}

/// Plays the fair game round by round: stake `p(sₙ, b)` of the capital on
/// each outcome `b`; the stake on the revealed bit doubles, the other is lost.
/// Capital is held as `mantissa · 2^exponent` to survive `2^±n`.
pub fn betting_game_trace(pred: &PredictorSpec, w: &[bool]) -> CapitalTrace {
    let p = pred.build();
    let mut state = p.start();
    let mut mantissa = 1.0f64;
    let mut exponent = 0i64;
    let mut log2_values = Vec::with_capacity(w.len() + 1);
    log2_values.push(0.0);
    for (i, &b) in w.iter().enumerate() {
        let (p0, p1) = state.predict(i as u64);
        let on_one = p1 * mantissa;
        let on_zero = p0 * mantissa;
        mantissa = 2.0 * if b { on_one } else { on_zero };
        if mantissa == 0.0 {
            log2_values.extend(std::iter::repeat_n(f64::NEG_INFINITY, w.len() - i));
            break;
        }
        let shift = mantissa.log2().floor() as i32;
        mantissa /= 2f64.powi(shift);
        exponent += shift as i64;
        log2_values.push(exponent as f64 + mantissa.log2());
        state.observe(b);
    }
    CapitalTrace { log2_values }
}

/// `clamp(log₂ d(w) / |w|, 0, 1)`.
pub fn predictor_perf(pred: &PredictorSpec, w: &[bool]) -> PerformanceValue {
    assert!(!w.is_empty(), "performance of an empty prefix");
    normalized_perf(martingale_log(pred, w), w.len())
}

pub fn normalized_perf(log2_capital: f64, n: usize) -> PerformanceValue {
    if log2_capital == f64::NEG_INFINITY {
        return PerformanceValue::WORST;
    }
    PerformanceValue::clamped(log2_capital / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::nth_string;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn predict_examples() {
        assert_eq!(predict(&PredictorSpec::Uniform, &b("0110"), &b("01")), (0.5, 0.5));
        let (p0, p1) = predict(&PredictorSpec::Frequency, &nth_string(4), &b("000"));
        assert!((p0 - 0.8).abs() < 1e-15);
        assert!((p0 + p1 - 1.0).abs() < 1e-15);
        let target = b("0110");
        let oracle = PredictorSpec::Oracle { target: target.clone() };
        for (i, &bit) in target.iter().enumerate() {
            let (p0, p1) = predict(&oracle, &nth_string(i as u64), &[]);
            assert_eq!(if bit { p1 } else { p0 }, 1.0);
        }
    }

    #[test]
    fn martingale_examples() {
        assert_eq!(martingale_log(&PredictorSpec::Uniform, &b("0110101")), 0.0);
        let target = b("011010");
        let oracle = PredictorSpec::Oracle { target: target.clone() };
        assert_eq!(martingale_log(&oracle, &target), 6.0);
        // 2⁴ · (1/2)(2/3)(3/4)(4/5) = 3.2
        let m = martingale_log(&PredictorSpec::Frequency, &b("0000"));
        assert!((m - 3.2f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn oracle_mismatch_is_negative_infinity() {
        let oracle = PredictorSpec::Oracle { target: b("00") };
        assert_eq!(martingale_log(&oracle, &b("01")), f64::NEG_INFINITY);
        assert_eq!(betting_game_trace(&oracle, &b("011")).last(), f64::NEG_INFINITY);
        assert_eq!(predictor_perf(&oracle, &b("01")).value(), 0.0);
    }

    #[test]
    fn game_examples() {
        assert_eq!(betting_game_trace(&PredictorSpec::Uniform, &b("0110")).log2_values, vec![0.0; 5]);
        let target = b("1001");
        let trace = betting_game_trace(&PredictorSpec::Oracle { target: target.clone() }, &target);
        assert_eq!(trace.log2_values, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        let t = betting_game_trace(&PredictorSpec::Frequency, &b("0000"));
        assert!((t.last() - 3.2f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn perf_examples() {
        assert_eq!(predictor_perf(&PredictorSpec::Uniform, &b("0110")).value(), 0.0);
        let target = b("0110");
        assert_eq!(predictor_perf(&PredictorSpec::Oracle { target: target.clone() }, &target).value(), 1.0);
        let p = predictor_perf(&PredictorSpec::Frequency, &b("0000")).value();
        assert!((p - 3.2f64.log2() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn markov_uses_context() {
        // after 0101010, order 1 has seen 0->1 three times
        let (p0, _) = predict(&PredictorSpec::Markov { order: 1 }, &nth_string(7), &b("0101010"));
        assert!((p0 - 1.0 / 5.0).abs() < 1e-15);
        // order 0 equals frequency
        let w = b("0010111010001");
        assert_eq!(
            martingale_log(&PredictorSpec::Markov { order: 0 }, &w),
            martingale_log(&PredictorSpec::Frequency, &w)
        );
    }

    #[test]
    fn large_prefix_does_not_overflow() {
        let w = BitString::zeros(5000);
        let m = martingale_log(&PredictorSpec::Frequency, &w);
        let g = betting_game_trace(&PredictorSpec::Frequency, &w).last();
        assert!(m.is_finite() && m > 4900.0);
        assert!((m - g).abs() <= 1e-9 * m.abs());
    }

    #[test]
    fn spec_grammar() {
        assert_eq!("predictor:uniform".parse::<PredictorSpec>().unwrap(), PredictorSpec::Uniform);
        assert_eq!("frequency".parse::<PredictorSpec>().unwrap(), PredictorSpec::Frequency);
        assert_eq!("predictor:markov:3".parse::<PredictorSpec>().unwrap(), PredictorSpec::Markov { order: 3 });
        assert!("oracle".parse::<PredictorSpec>().is_err());
        assert!("markov:99".parse::<PredictorSpec>().is_err());
        assert_eq!(PredictorSpec::Markov { order: 2 }.to_string(), "predictor:markov:2");
    }
}
