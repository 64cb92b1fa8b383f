//! CSV rendering of depth profiles and Bennett tables, and a reader for the
//! profile format.

use std::fmt::Write as _;

use crate::analyzer::{BennettRow, DepthProfile, ProfileRow};
use crate::depth::GapRecord;
use crate::error::Error;

pub const PROFILE_COLUMNS: &str = "n,family,weak_level,strong_side,perf_weak,perf_strong,gap,threshold,cleared";
const CAPITAL_COLUMNS: &str = "log2_capital_weak,log2_capital_strong";
pub const BENNETT_COLUMNS: &str = "n,t,code_bits,full_bits,gap";

/// Fixed nine-decimal rendering with negative zero printed as zero.
pub fn fixed9(v: f64) -> String {
    let s = format!("{v:.9}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|c| c == b'0' || c == b'.') => rest.to_string(),
        _ => s,
    }
}

fn header_lines(out: &mut String, profile: &DepthProfile) {
    let schedule: Vec<String> = profile.schedule.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "# sequence: {}", profile.sequence);
    let _ = writeln!(out, "# family: {}", profile.family);
    let _ = writeln!(out, "# strong_side: {}", profile.strong_side);
    let _ = writeln!(out, "# bound: {}", profile.bound);
    let _ = writeln!(out, "# schedule: {}", schedule.join(","));
    for s in &profile.summary {
        let max_n = s.max_cleared_n.map_or_else(|| "-".to_string(), |n| n.to_string());
        let _ = writeln!(
            out,
            "# level {}: cleared {}/{} max_cleared_n {} depth_indicated {}",
            s.level,
            s.cleared,
            profile.schedule.len(),
            max_n,
            s.depth_indicated
        );
    }
}

fn has_capital(profile: &DepthProfile) -> bool {
    profile.rows.first().is_some_and(|r| r.raw.is_some())
}

fn row_fields(out: &mut String, profile: &DepthProfile, row: &ProfileRow) {
    let r = &row.record;
    let _ = write!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        r.n,
        profile.family_name,
        row.weak.level,
        row.strong.level,
        fixed9(r.perf_weak.value()),
        fixed9(r.perf_strong.value()),
        fixed9(r.gap),
        fixed9(r.threshold),
        r.cleared
    );
    if let Some((w, s)) = row.raw {
        let _ = write!(out, ",{},{}", fixed9(w), fixed9(s));
    }
}

pub fn profile_csv(profile: &DepthProfile) -> String {
    let mut out = String::new();
    header_lines(&mut out, profile);
    out.push_str(PROFILE_COLUMNS);
    if has_capital(profile) {
        let _ = write!(out, ",{CAPITAL_COLUMNS}");
    }
    out.push('\n');
    for row in &profile.rows {
        row_fields(&mut out, profile, row);
        out.push('\n');
    }
    out
}

/// Before/after profiles in one table, tagged by a leading `profile` column.
pub fn slow_growth_csv(before: &DepthProfile, after: &DepthProfile) -> String {
    let mut out = String::new();
    for (tag, p) in [("before", before), ("after", after)] {
        let mut block = String::new();
        header_lines(&mut block, p);
        for line in block.lines() {
            let _ = writeln!(out, "# {tag} {}", &line[2..]);
        }
    }
    let _ = write!(out, "profile,{PROFILE_COLUMNS}");
    if has_capital(before) {
        let _ = write!(out, ",{CAPITAL_COLUMNS}");
    }
    out.push('\n');
    for (tag, p) in [("before", before), ("after", after)] {
        for row in &p.rows {
            let _ = write!(out, "{tag},");
            row_fields(&mut out, p, row);
            out.push('\n');
        }
    }
    out
}

pub fn bennett_csv(source: &str, registry: &str, rows: &[BennettRow]) -> String {
    let mut out = format!("# sequence: {source}\n# registry: {registry}\n{BENNETT_COLUMNS}\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.n, r.budget, r.code_bits, r.full_bits, r.gap);
    }
    out
}

/// One data row of a profile CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub profile: Option<String>,
    pub family: String,
    pub weak_level: u32,
    pub strong_level: u32,
    pub record: GapRecord,
    pub capital: Option<(f64, f64)>,
}

fn field<T: std::str::FromStr>(line: usize, name: &str, v: &str) -> Result<T, Error> {
    v.parse().map_err(|_| Error::Parse { line, message: format!("bad {name} {v:?}") })
}

/// Reads the data rows of `profile_csv` or `slow_growth_csv` output.
pub fn parse_profile_csv(text: &str) -> Result<Vec<CsvRow>, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, message: "no column header".into() })?;
    let cols: Vec<&str> = header.split(',').collect();
    let tagged = cols.first() == Some(&"profile");
    let base = tagged as usize;
    let expected: Vec<&str> = PROFILE_COLUMNS.split(',').collect();
    if cols.len() < base + expected.len() || cols[base..base + expected.len()] != expected[..] {
        return Err(Error::Parse { line: hline, message: format!("unexpected columns {header:?}") });
    }
    let capital = cols.len() == base + expected.len() + 2;

    lines
        .map(|(line, l)| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != cols.len() {
                return Err(Error::Parse { line, message: format!("expected {} fields", cols.len()) });
            }
            let g = &f[base..];
            let perf = |name, v| field::<f64>(line, name, v).map(crate::depth::PerformanceValue::clamped);
            let record = GapRecord {
                n: field(line, "n", g[0])?,
                perf_weak: perf("perf_weak", g[4])?,
                perf_strong: perf("perf_strong", g[5])?,
                gap: field(line, "gap", g[6])?,
                threshold: field(line, "threshold", g[7])?,
                cleared: field(line, "cleared", g[8])?,
            };
            Ok(CsvRow {
                profile: tagged.then(|| f[0].to_string()),
                family: g[1].to_string(),
                weak_level: field(line, "weak_level", g[2])?,
                strong_level: field(line, "strong_side", g[3])?,
                record,
                capital: if capital {
                    Some((field(line, "capital", g[9])?, field(line, "capital", g[10])?))
                } else {
                    None
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::{depth_profile, HierarchySpec, InputSource, StrongSide};
    use crate::depth::BoundSpec;
    use crate::observer::family_from_str;
    use std::sync::Arc;

    fn profile(family: &str, seq: &str) -> DepthProfile {
        let h = HierarchySpec::new(Arc::from(family_from_str(family).unwrap()), StrongSide::SameFamily).unwrap();
        let src = InputSource::Spec(seq.parse().unwrap());
        depth_profile(&src, &h, &BoundSpec::Linear(0.05), &[64, 128, 256]).unwrap()
    }

    #[test]
    fn fixed9_examples() {
        assert_eq!(fixed9(-0.0), "0.000000000");
        assert_eq!(fixed9(-1e-12), "0.000000000");
        assert_eq!(fixed9(0.5), "0.500000000");
        assert_eq!(fixed9(-0.25), "-0.250000000");
    }

    #[test]
    fn csv_round_trip() {
        for (fam, seq) in [("registry:identity,rle,lz78", "periodic:0001"), ("predictor:2", "champernowne")] {
            let p = profile(fam, seq);
            let text = profile_csv(&p);
            let rows = parse_profile_csv(&text).unwrap();
            assert_eq!(rows.len(), p.rows.len());
            for (a, b) in rows.iter().zip(&p.rows) {
                assert_eq!(a.record.n, b.record.n);
                assert_eq!(a.weak_level, b.weak.level);
                assert_eq!(a.record.cleared, b.record.cleared);
                assert!((a.record.gap - b.record.gap).abs() <= 1e-9);
                assert!((a.record.threshold - b.record.threshold).abs() <= 1e-9);
                assert_eq!(a.capital.is_some(), b.raw.is_some());
            }
        }
    }

    #[test]
    fn slow_growth_table_is_tagged() {
        let p = profile("predictor:1", "periodic:01");
        let text = slow_growth_csv(&p, &p);
        let rows = parse_profile_csv(&text).unwrap();
        assert_eq!(rows.len(), 2 * p.rows.len());
        assert_eq!(rows[0].profile.as_deref(), Some("before"));
        assert_eq!(rows.last().unwrap().profile.as_deref(), Some("after"));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(parse_profile_csv("").is_err());
        assert!(parse_profile_csv("a,b\n").is_err());
        let bad = format!("{PROFILE_COLUMNS}\n1,fst,1,2,0.5\n");
        assert!(matches!(parse_profile_csv(&bad), Err(Error::Parse { line: 2, .. })));
    }
}
