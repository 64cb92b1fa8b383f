//! Observer families: resource-indexed classes of observers sharing a
//! performance function. Each family is a strategy behind `ObserverFamily`,
//! looked up by name from a family string such as `fst:3:1`.

use std::sync::Arc;

use crate::compressors::{compressor_perf, registry_encode, RegistrySpec};
use crate::depth::{ObserverId, PerformanceValue};
use crate::error::Error;
use crate::fst::{enumerate_ilfsts, CompressionTable, EnumerationLimits, TransducerSpec};
use crate::predictors::{log_capital_at, normalized_perf, PredictorSpec};

/// Best performance per (checkpoint, level), levels in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelTable {
    pub perf: Vec<Vec<PerformanceValue>>,
    /// Unnormalized scores where the family has one (log₂ capital for predictors).
    pub raw: Option<Vec<Vec<f64>>>,
}

pub trait ObserverFamily: Send + Sync {
    fn name(&self) -> &'static str;

    /// Resource indices, strictly increasing and nonempty.
    fn levels(&self) -> Vec<u32>;

    fn observer(&self, level: u32) -> ObserverId;

    /// Performance of the best observer at each level on `x[..n]` for each `n` in `checkpoints`.
    fn evaluate(&self, x: &[bool], checkpoints: &[usize]) -> Result<LevelTable, Error>;

    /// Canonical family string; parses back through `family_from_str`.
    fn describe(&self) -> String;
}

/// Information-lossless transducers with at most `level` states.
pub struct FstFamily {
    max_states: usize,
    max_output: usize,
    header: bool,
    machines: Arc<[TransducerSpec]>,
}

impl FstFamily {
    pub fn enumerate(
        max_states: usize,
        max_output: usize,
        header: bool,
        limits: &EnumerationLimits,
    ) -> Result<Self, Error> {
        let machines: Vec<_> = enumerate_ilfsts(max_states, max_output, limits)?.collect();
        Ok(Self::with_machines(max_states, max_output, header, machines.into()))
    }

    /// Uses a precomputed enumeration, e.g. loaded from a cache. `machines`
    /// must be `enumerate_ilfsts(max_states, max_output)` in order.
    pub fn with_machines(
        max_states: usize,
        max_output: usize,
        header: bool,
        machines: Arc<[TransducerSpec]>,
    ) -> Self {
        FstFamily { max_states, max_output, header, machines }
    }

    pub fn machines(&self) -> &Arc<[TransducerSpec]> {
        &self.machines
    }

    pub fn max_output(&self) -> usize {
        self.max_output
    }

    pub fn header(&self) -> bool {
        self.header
    }
}

impl ObserverFamily for FstFamily {
    fn name(&self) -> &'static str {
        "fst"
    }

    fn levels(&self) -> Vec<u32> {
        (1..=self.max_states as u32).collect()
    }

    fn observer(&self, level: u32) -> ObserverId {
        ObserverId::new("fst", level)
            .with_param("max_output", self.max_output)
            .with_param("header", self.header)
    }

    fn evaluate(&self, x: &[bool], checkpoints: &[usize]) -> Result<LevelTable, Error> {
        let table = CompressionTable::build(&self.machines, x, checkpoints, self.max_states, self.header);
        let perf = (0..checkpoints.len())
            .map(|c| (1..=self.max_states).map(|l| table.perf(c, l)).collect())
            .collect();
        Ok(LevelTable { perf, raw: None })
    }

    fn describe(&self) -> String {
        let h = if self.header { ":header" } else { "" };
        format!("fst:{}:{}{h}", self.max_states, self.max_output)
    }
}

/// Level `r` is the best of the uniform predictor and Markov predictors of order ≤ `r`.
pub struct PredictorFamily {
    max_order: u32,
}

impl PredictorFamily {
    pub fn new(max_order: u32) -> Result<Self, Error> {
        if max_order > crate::predictors::MAX_ORDER {
            return Err(Error::Config(format!("markov order {max_order} too large")));
        }
        Ok(PredictorFamily { max_order })
    }
}

impl ObserverFamily for PredictorFamily {
    fn name(&self) -> &'static str {
        "predictor"
    }

    fn levels(&self) -> Vec<u32> {
        (0..=self.max_order).collect()
    }

    fn observer(&self, level: u32) -> ObserverId {
        ObserverId::new("predictor", level).with_param("kind", "markov")
    }

    fn evaluate(&self, x: &[bool], checkpoints: &[usize]) -> Result<LevelTable, Error> {
        let mut best: Vec<f64> = log_capital_at(&PredictorSpec::Uniform, x, checkpoints);
        let mut raw = vec![Vec::new(); checkpoints.len()];
        for order in 0..=self.max_order {
            let caps = log_capital_at(&PredictorSpec::Markov { order }, x, checkpoints);
            for (c, cap) in caps.into_iter().enumerate() {
                best[c] = best[c].max(cap);
                raw[c].push(best[c]);
            }
        }
        let perf = raw
            .iter()
            .zip(checkpoints)
            .map(|(row, &n)| {
                row.iter()
                    .map(|&cap| if n == 0 { PerformanceValue::WORST } else { normalized_perf(cap, n) })
                    .collect()
            })
            .collect();
        Ok(LevelTable { perf, raw: Some(raw) })
    }

    fn describe(&self) -> String {
        format!("predictor:{}", self.max_order)
    }
}

/// Level `t` is the registry encoder restricted to its first `t` codecs.
pub struct RegistryFamily {
    registry: RegistrySpec,
}

impl RegistryFamily {
    pub fn new(registry: RegistrySpec) -> Self {
        RegistryFamily { registry }
    }
}

impl ObserverFamily for RegistryFamily {
    fn name(&self) -> &'static str {
        "registry"
    }

    fn levels(&self) -> Vec<u32> {
        (1..=self.registry.len() as u32).collect()
    }

    fn observer(&self, level: u32) -> ObserverId {
        ObserverId::new("registry", level).with_param("codecs", self.registry.to_string().replace(',', "+"))
    }

    fn evaluate(&self, x: &[bool], checkpoints: &[usize]) -> Result<LevelTable, Error> {
        let perf = checkpoints
            .iter()
            .map(|&n| {
                let prefix = &x[..n.min(x.len())];
                (1..=self.registry.len())
                    .map(|t| {
                        if prefix.is_empty() {
                            return Ok(PerformanceValue::WORST);
                        }
                        let w = registry_encode(&self.registry, prefix, t)?;
                        Ok(compressor_perf(prefix.len(), w.bits.len()))
                    })
                    .collect::<Result<Vec<_>, Error>>()
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(LevelTable { perf, raw: None })
    }

    fn describe(&self) -> String {
        format!("registry:{}", self.registry)
    }
}

type FamilyCtor = fn(&str) -> Result<Box<dyn ObserverFamily>, Error>;

fn parse_usize(field: &str, what: &str) -> Result<usize, Error> {
    field.parse().map_err(|_| Error::Config(format!("bad {what} {field:?}")))
}

/// Registered families. Parameter strings:
/// `fst:<max states>:<max output>[:header]`, `predictor:<max order>`,
/// `registry:<codec>,<codec>,…`.
const FAMILIES: &[(&str, FamilyCtor)] = &[
    ("fst", |args| {
        let parts: Vec<&str> = args.split(':').collect();
        let (k, l, header) = match parts[..] {
            [k, l] => (k, l, false),
            [k, l, "header"] => (k, l, true),
            _ => return Err(Error::Config(format!("fst family expects <states>:<maxout>[:header], got {args:?}"))),
        };
        let family = FstFamily::enumerate(
            parse_usize(k, "state budget")?,
            parse_usize(l, "output bound")?,
            header,
            &EnumerationLimits::default(),
        )?;
        Ok(Box::new(family))
    }),
    ("predictor", |args| {
        let r = parse_usize(args, "markov order")?;
        Ok(Box::new(PredictorFamily::new(r as u32)?))
    }),
    ("registry", |args| Ok(Box::new(RegistryFamily::new(args.parse()?)))),
];

pub fn family_names() -> impl Iterator<Item = &'static str> {
    FAMILIES.iter().map(|(n, _)| *n)
}

pub fn family_from_str(s: &str) -> Result<Box<dyn ObserverFamily>, Error> {
    let (name, args) = s
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("family {s:?}: expected <name>:<params>")))?;
    let (_, ctor) = FAMILIES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("unknown observer family {name:?}")))?;
    ctor(args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;

    #[test]
    fn families_are_registered_by_name() {
        assert_eq!(family_names().collect::<Vec<_>>(), ["fst", "predictor", "registry"]);
        for s in ["fst:2:1", "fst:1:1:header", "predictor:3", "registry:identity,lz78"] {
            assert_eq!(family_from_str(s).unwrap().describe(), s);
        }
        assert!(family_from_str("fst:9:1").is_err());
        assert!(family_from_str("gzip:1").is_err());
        assert!(family_from_str("fst").is_err());
    }

    #[test]
    fn fst_level_one_cannot_compress_periodic() {
        let fam = family_from_str("fst:1:1").unwrap();
        let x: BitString = "01010101".parse().unwrap();
        let t = fam.evaluate(&x, &[8]).unwrap();
        assert_eq!(t.perf[0][0].value(), 0.0);
    }

    #[test]
    fn uniform_only_predictor_level_is_zero() {
        // the uniform predictor alone never gains capital
        let x: BitString = "0110100110010110".parse().unwrap();
        assert_eq!(log_capital_at(&PredictorSpec::Uniform, &x, &[16])[0], 0.0);
    }

    #[test]
    fn registry_level_two_compresses_zeros() {
        let fam = family_from_str("registry:identity,lz78").unwrap();
        let t = fam.evaluate(&BitString::zeros(1024), &[1024]).unwrap();
        assert_eq!(t.perf[0][0].value(), 0.0);
        assert!(t.perf[0][1].value() >= 0.4);
    }

    #[test]
    fn predictor_levels_are_monotone() {
        let fam = PredictorFamily::new(3).unwrap();
        let x: BitString = "0010010010010010010010010".parse().unwrap();
        let t = fam.evaluate(&x, &[10, 25]).unwrap();
        for row in &t.perf {
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
        }
        assert!(t.perf[1][3].value() > t.perf[1][0].value());
    }
}
