//! The general depth framework: performance values, bound families and the
//! gap condition `Perf(A', x) - Perf(A, x) >= m(n)/n`.

use std::fmt;
use std::str::FromStr;

use crate::bits::ceil_log2;
use crate::error::Error;

/// How well an observer does on a string, in `[0, 1]` (1 is optimal).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct PerformanceValue(f64);

impl PerformanceValue {
    pub const WORST: PerformanceValue = PerformanceValue(0.0);
    pub const OPTIMAL: PerformanceValue = PerformanceValue(1.0);

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn clamped(value: f64) -> Self {
        if value.is_nan() {
            PerformanceValue(0.0)
        } else {
            PerformanceValue(value.clamp(0.0, 1.0))
        }
    }

    /// Rejects values outside `[0, 1]`.
    pub fn new(value: f64) -> Result<Self, Error> {
        if (0.0..=1.0).contains(&value) {
            Ok(PerformanceValue(value))
        } else {
            Err(Error::Validation(format!("performance {value} outside [0,1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn max(self, other: Self) -> Self {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }
}

/// A bound function `m(n)` from a closed set of kinds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundSpec {
    /// `m(n) = c`
    Constant(u64),
    /// `m(n) = ⌈log₂ n⌉ + c`
    Log(u64),
    /// `m(n) = ⌈log₂ log₂ n⌉ + c`
    LogLog(u64),
    /// `m(n) = ⌈α·n⌉`, `α ∈ (0, 1]`
    Linear(f64),
}

// Absorbs representation error in α·n so that e.g. 0.1·300 rounds up to 30.
const LINEAR_EPS: f64 = 1e-9;

/// ⌈log₂ log₂ n⌉, taking the value 0 for n ≤ 2.
fn ceil_log2_log2(n: u64) -> u64 {
    // smallest e with n <= 2^(2^e)
    let bits = ceil_log2(n.max(1)) as u64;
    if bits <= 1 {
        0
    } else {
        ceil_log2(bits) as u64
    }
}

impl BoundSpec {
    pub fn linear(alpha: f64) -> Result<Self, Error> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(BoundSpec::Linear(alpha))
        } else {
            Err(Error::Config(format!("alpha must lie in (0,1], got {alpha}")))
        }
    }

    /// `m(n)` clamped into `[1, n]`. `n` must be at least 1.
    pub fn value(&self, n: u64) -> u64 {
        assert!(n >= 1, "bound evaluated at n = 0");
        let raw = match *self {
            BoundSpec::Constant(c) => c,
            BoundSpec::Log(c) => ceil_log2(n) as u64 + c,
            BoundSpec::LogLog(c) => ceil_log2_log2(n) + c,
            BoundSpec::Linear(alpha) => {
                let v = (alpha * n as f64 - LINEAR_EPS).ceil();
                if v <= 0.0 {
                    0
                } else {
                    v as u64
                }
            }
        };
        raw.clamp(1, n)
    }

    /// `m(n) / n`.
    pub fn threshold(&self, n: u64) -> f64 {
        self.value(n) as f64 / n as f64
    }
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSpec::Constant(c) => write!(f, "const:{c}"),
            BoundSpec::Log(c) => write!(f, "log:{c}"),
            BoundSpec::LogLog(c) => write!(f, "loglog:{c}"),
            BoundSpec::Linear(a) => write!(f, "linear:{a}"),
        }
    }
}

impl FromStr for BoundSpec {
    type Err = Error;

    /// Grammar: `const:<c>`, `log:<c>`, `loglog:<c>`, `linear:<alpha>`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("bound {s:?}: expected <kind>:<param>")))?;
        let int = |a: &str| {
            a.parse::<u64>()
                .map_err(|_| Error::Config(format!("bound {s:?}: bad integer {a:?}")))
        };
        match kind {
            "const" => Ok(BoundSpec::Constant(int(arg)?)),
            "log" => Ok(BoundSpec::Log(int(arg)?)),
            "loglog" => Ok(BoundSpec::LogLog(int(arg)?)),
            "linear" => {
                let alpha = arg
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bound {s:?}: bad real {arg:?}")))?;
                BoundSpec::linear(alpha)
            }
            other => Err(Error::Config(format!("unknown bound kind {other:?}"))),
        }
    }
}

pub fn bound_value(spec: &BoundSpec, n: u64) -> u64 {
    spec.value(n)
}

/// `gap >= m(n)/n`.
pub fn depth_condition(gap: f64, n: u64, spec: &BoundSpec) -> bool {
    gap >= spec.threshold(n)
}

/// Identifies one observer: a family name, a resource level, and parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObserverId {
    pub family: String,
    pub level: u32,
    pub parameters: Vec<(String, String)>,
}

impl ObserverId {
    pub fn new(family: impl Into<String>, level: u32) -> Self {
        ObserverId { family: family.into(), level, parameters: Vec::new() }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.parameters.push((key.into(), value.to_string()));
        self
    }
}

impl fmt::Display for ObserverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.family, self.level)?;
        for (k, v) in &self.parameters {
            write!(f, ",{k}={v}")?;
        }
        Ok(())
    }
}

/// One comparison of a weak and a strong observer at prefix length `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapRecord {
    pub n: u64,
    pub perf_weak: PerformanceValue,
    pub perf_strong: PerformanceValue,
    pub gap: f64,
    pub threshold: f64,
    pub cleared: bool,
}

impl GapRecord {
    /// Whether `cleared` agrees with the other fields.
    pub fn is_consistent(&self) -> bool {
        self.cleared == (self.gap >= self.threshold)
    }
}

pub fn make_gap_record(
    n: u64,
    weak: PerformanceValue,
    strong: PerformanceValue,
    spec: &BoundSpec,
) -> GapRecord {
    let gap = strong.value() - weak.value();
    GapRecord {
        n,
        perf_weak: weak,
        perf_strong: strong,
        gap,
        threshold: spec.threshold(n),
        cleared: depth_condition(gap, n, spec),
    }
}
