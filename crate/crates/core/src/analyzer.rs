//! Depth-gap profiles over observer hierarchies, plus the slow-growth and
//! toy Bennett experiments.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::compressors::{registry_encode, RegistrySpec};
use crate::depth::{make_gap_record, BoundSpec, GapRecord, ObserverId, PerformanceValue};
use crate::error::Error;
use crate::fst::{check_il, TransducerSpec};
use crate::observer::ObserverFamily;
use crate::sequences::SequenceSpec;

/// A level counts as depth-indicated once this many scheduled lengths clear.
pub const DEPTH_INDICATION_MIN: usize = 3;

pub fn default_schedule() -> Vec<usize> {
    (8..=12).map(|e| 1usize << e).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrongSide {
    /// The strong observer is the best of the same family at any larger level.
    SameFamily,
    /// The strong observer is the family's top level.
    FullFamily,
}

impl fmt::Display for StrongSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrongSide::SameFamily => "same-family",
            StrongSide::FullFamily => "full-family",
        })
    }
}

impl FromStr for StrongSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "same-family" | "same" => Ok(StrongSide::SameFamily),
            "full-family" | "full" => Ok(StrongSide::FullFamily),
            _ => Err(Error::Config(format!("unknown strong side {s:?}"))),
        }
    }
}

#[derive(Clone)]
pub struct HierarchySpec {
    pub family: Arc<dyn ObserverFamily>,
    pub strong_side: StrongSide,
}

impl HierarchySpec {
    pub fn new(family: Arc<dyn ObserverFamily>, strong_side: StrongSide) -> Result<Self, Error> {
        let levels = family.levels();
        if levels.is_empty() || levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("hierarchy levels must be nonempty and strictly increasing".into()));
        }
        Ok(HierarchySpec { family, strong_side })
    }
}

impl fmt::Debug for HierarchySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HierarchySpec({}, {})", self.family.describe(), self.strong_side)
    }
}

/// Where the analyzed bits come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    Spec(SequenceSpec),
    Raw(BitString),
}

impl InputSource {
    pub fn prefix(&self, n: usize) -> Result<BitString, Error> {
        match self {
            InputSource::Spec(spec) => spec.generate(n),
            InputSource::Raw(bits) => {
                if bits.len() < n {
                    return Err(Error::Config(format!(
                        "input has {} bits, schedule needs {n}",
                        bits.len()
                    )));
                }
                Ok(bits.prefix(n))
            }
        }
    }

    /// The sequence grammar string, or `raw:<sha256 prefix>` for raw bits.
    pub fn describe(&self) -> String {
        match self {
            InputSource::Spec(spec) => spec.to_string(),
            InputSource::Raw(bits) => format!("raw:{}", digest(bits)),
        }
    }
}

fn digest(bits: &[bool]) -> String {
    let ascii: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    hex::encode(&Sha256::digest(ascii.as_bytes())[..8])
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    pub weak: ObserverId,
    pub strong: ObserverId,
    pub record: GapRecord,
    /// Unnormalized scores of the weak and strong observers, if the family has them.
    pub raw: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSummary {
    pub level: u32,
    pub cleared: usize,
    pub max_cleared_n: Option<u64>,
    pub all_cleared: bool,
    pub depth_indicated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthProfile {
    pub sequence: String,
    pub family: String,
    pub family_name: String,
    pub strong_side: StrongSide,
    pub bound: BoundSpec,
    pub schedule: Vec<u64>,
    /// n-major, level-minor.
    pub rows: Vec<ProfileRow>,
    pub summary: Vec<LevelSummary>,
}

impl DepthProfile {
    pub fn cleared_rows(&self) -> impl Iterator<Item = &ProfileRow> {
        self.rows.iter().filter(|r| r.record.cleared)
    }
}

fn check_schedule(schedule: &[usize]) -> Result<(), Error> {
    if schedule.is_empty() {
        return Err(Error::Config("schedule must be nonempty".into()));
    }
    if schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("schedule must be positive and strictly ascending".into()));
    }
    Ok(())
}

/// Best performance at `level` on all of `x`.
pub fn level_perf(x: &[bool], hierarchy: &HierarchySpec, level: u32) -> Result<PerformanceValue, Error> {
    let levels = hierarchy.family.levels();
    let pos = levels
        .iter()
        .position(|&l| l == level)
        .ok_or_else(|| Error::Config(format!("level {level} not in hierarchy")))?;
    let table = hierarchy.family.evaluate(x, &[x.len()])?;
    Ok(table.perf[0][pos])
}

pub fn depth_profile(
    source: &InputSource,
    hierarchy: &HierarchySpec,
    bound: &BoundSpec,
    schedule: &[usize],
) -> Result<DepthProfile, Error> {
    check_schedule(schedule)?;
    let x = source.prefix(*schedule.last().unwrap())?;
    profile_bits(source.describe(), &x, hierarchy, bound, schedule)
}

/// Profile of `x` at the given (non-decreasing, positive) prefix lengths.
fn profile_bits(
    sequence: String,
    x: &[bool],
    hierarchy: &HierarchySpec,
    bound: &BoundSpec,
    schedule: &[usize],
) -> Result<DepthProfile, Error> {
    let family = &hierarchy.family;
    let levels = family.levels();
    let table = family.evaluate(x, schedule)?;

    let mut rows = Vec::with_capacity(schedule.len() * levels.len());
    for (c, &n) in schedule.iter().enumerate() {
        let perf = &table.perf[c];
        for (i, &level) in levels.iter().enumerate() {
            let strong = match hierarchy.strong_side {
                // first best wins among strictly larger levels; none left means no stronger observer
                StrongSide::SameFamily => (i + 1..levels.len())
                    .fold(None, |best: Option<usize>, j| match best {
                        Some(b) if perf[b] >= perf[j] => Some(b),
                        _ => Some(j),
                    })
                    .unwrap_or(i),
                StrongSide::FullFamily => levels.len() - 1,
            };
            let record = make_gap_record(n as u64, perf[i], perf[strong], bound);
            let raw = table.raw.as_ref().map(|r| (r[c][i], r[c][strong]));
            rows.push(ProfileRow {
                weak: family.observer(level),
                strong: family.observer(levels[strong]),
                record,
                raw,
            });
        }
    }

    let summary = levels
        .iter()
        .enumerate()
        .map(|(i, &level)| {
            let mine: Vec<&ProfileRow> = rows.iter().skip(i).step_by(levels.len()).collect();
            let cleared: Vec<u64> = mine.iter().filter(|r| r.record.cleared).map(|r| r.record.n).collect();
            LevelSummary {
                level,
                cleared: cleared.len(),
                max_cleared_n: cleared.iter().copied().max(),
                all_cleared: cleared.len() == mine.len(),
                depth_indicated: cleared.len() >= DEPTH_INDICATION_MIN,
            }
        })
        .collect();

    Ok(DepthProfile {
        sequence,
        family: family.describe(),
        family_name: family.name().to_string(),
        strong_side: hierarchy.strong_side,
        bound: *bound,
        schedule: schedule.iter().map(|&n| n as u64).collect(),
        rows,
        summary,
    })
}

/// Profiles `source` and its image under a lossless `machine`. The image is
/// profiled at the output lengths of the scheduled input prefixes.
pub fn slow_growth_experiment(
    source: &InputSource,
    machine: &TransducerSpec,
    hierarchy: &HierarchySpec,
    bound: &BoundSpec,
    schedule: &[usize],
) -> Result<(DepthProfile, DepthProfile), Error> {
    let verdict = check_il(machine)?;
    if let Some((a, b)) = verdict.witness {
        return Err(Error::NotLossless(a.to_string(), b.to_string()));
    }
    check_schedule(schedule)?;
    let x = source.prefix(*schedule.last().unwrap())?;
    let before = profile_bits(source.describe(), &x, hierarchy, bound, schedule)?;

    let image = machine.run(&x).output;
    let mut lengths = Vec::with_capacity(schedule.len());
    let mut q = machine.start();
    let mut produced = 0;
    let mut consumed = 0;
    for &n in schedule {
        for &b in &x[consumed..n] {
            produced += machine.edge_output(q, b).len();
            q = machine.next_state(q, b);
        }
        consumed = n;
        lengths.push(produced);
    }
    if lengths[0] == 0 {
        return Err(Error::Config("transformed prefix is empty at the first scheduled length".into()));
    }
    let label = format!("{} | fst:{}", source.describe(), digest_machine(machine));
    let after = profile_bits(label, &image, hierarchy, bound, &lengths)?;
    Ok((before, after))
}

fn digest_machine(m: &TransducerSpec) -> String {
    hex::encode(&Sha256::digest(crate::fst::serialize_fst(m).as_bytes())[..8])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BennettRow {
    pub n: u64,
    pub budget: usize,
    pub code_bits: u64,
    pub full_bits: u64,
    /// `code_bits − full_bits`
    pub gap: i64,
}

/// Toy Bennett gaps for every scheduled prefix and every budget `1..=T`.
pub fn bennett_toy_profile(
    source: &InputSource,
    registry: &RegistrySpec,
    schedule: &[usize],
) -> Result<Vec<BennettRow>, Error> {
    check_schedule(schedule)?;
    let x = source.prefix(*schedule.last().unwrap())?;
    let mut rows = Vec::new();
    for &n in schedule {
        let prefix = &x[..n];
        let lengths = (1..=registry.len())
            .map(|t| registry_encode(registry, prefix, t).map(|w| w.bits.len() as u64))
            .collect::<Result<Vec<_>, _>>()?;
        let full = *lengths.last().unwrap();
        for (t, &code) in lengths.iter().enumerate() {
            rows.push(BennettRow {
                n: n as u64,
                budget: t + 1,
                code_bits: code,
                full_bits: full,
                gap: code as i64 - full as i64,
            });
        }
    }
    Ok(rows)
}
