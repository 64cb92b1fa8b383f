//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use depthlab_cli::cache::load_or_enumerate;
use depthlab_cli::{run_command_with, CACHE_ENV};
use depthlab_core::analyzer::{depth_profile, slow_growth_experiment, DepthProfile, HierarchySpec, InputSource, StrongSide};
use depthlab_core::compressors::{decode, encode, registry_decode, registry_encode, bennett_gap, CodecSpec, RegistrySpec};
use depthlab_core::depth::BoundSpec;
use depthlab_core::fst::{brute_force_il, check_il, enumerate_ilfsts, EnumerationLimits, TransducerSpec};
use depthlab_core::observer::FstFamily;
use depthlab_core::predictors::{betting_game_trace, martingale_log, predictor_perf, PredictorSpec};
use depthlab_core::sequences::SequenceSpec;
use depthlab_core::BitString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SCHEDULE: [usize; 4] = [512, 1024, 2048, 4096];
const PRNG_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("depthlab-acceptance-cache")
}

fn outputs(l_max: usize) -> Vec<BitString> {
    let mut out = vec![BitString::new()];
    for len in 1..=l_max {
        for v in 0..1u64 << len {
            let mut b = BitString::new();
            b.push_uint(v, len as u32);
            out.push(b);
        }
    }
    out
}

fn raw_machines(k: usize, l_max: usize) -> Vec<TransducerSpec> {
    let outs = outputs(l_max);
    let per_edge = k * outs.len();
    let tables = per_edge.pow(2 * k as u32);
    let mut all = Vec::new();
    for mut code in 0..tables {
        let mut delta = vec![[0; 2]; k];
        let mut output = vec![[BitString::new(), BitString::new()]; k];
        for q in 0..k {
            for b in 0..2 {
                let d = code % per_edge;
                code /= per_edge;
                delta[q][b] = d / outs.len();
                output[q][b] = outs[d % outs.len()].clone();
            }
        }
        for start in 0..k {
            all.push(TransducerSpec::new(start, delta.clone(), output.clone()).unwrap());
        }
    }
    all
}

fn random_machine(rng: &mut ChaCha8Rng, k: usize, l_max: usize) -> TransducerSpec {
    let outs = outputs(l_max);
    let delta = (0..k).map(|_| [rng.gen_range(0..k), rng.gen_range(0..k)]).collect();
    let output = (0..k)
        .map(|_| [outs[rng.gen_range(0..outs.len())].clone(), outs[rng.gen_range(0..outs.len())].clone()])
        .collect();
    TransducerSpec::new(rng.gen_range(0..k), delta, output).unwrap()
}

fn random_bits(rng: &mut ChaCha8Rng, max_len: usize) -> BitString {
    let len = rng.gen_range(0..=max_len);
    let bias = rng.gen_range(0.02..0.98);
    (0..len).map(|_| rng.gen_bool(bias)).collect()
}

fn all_strings(max_len: u32) -> impl Iterator<Item = BitString> {
    (0..=max_len).flat_map(|len| {
        (0..1u64 << len).map(move |v| {
            let mut b = BitString::new();
            b.push_uint(v, len);
            b
        })
    })
}

fn il_soundness() -> Outcome {
    let start = Instant::now();
    let mut exhaustive = 0;
    let mut disagreements = Vec::new();
    for k in 1..=2 {
        for m in raw_machines(k, 1) {
            if check_il(&m).map_err(|e| e.to_string())?.lossless != brute_force_il(&m, 10).is_none() {
                disagreements.push(m);
            }
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let (k, l) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let m = random_machine(&mut rng, k, l);
        if check_il(&m).map_err(|e| e.to_string())?.lossless != brute_force_il(&m, 10).is_none() {
            disagreements.push(m);
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{exhaustive} exhaustive + 200 random machines, {} disagreements, {:.1} s",
        disagreements.len(),
        elapsed.as_secs_f64()
    );
    if disagreements.is_empty() && elapsed <= Duration::from_secs(60) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn enumeration_ground_truth() -> Outcome {
    let limits = EnumerationLimits::default();
    let one: Vec<_> = enumerate_ilfsts(1, 1, &limits).map_err(|e| e.to_string())?.collect();
    if one != [TransducerSpec::identity(), TransducerSpec::negation()] {
        return Err(format!("k=1, l=1 gave {} machines, expected identity and negation", one.len()));
    }
    let mut counts = Vec::new();
    for k in 1..=3 {
        let machines: Vec<_> = enumerate_ilfsts(k, 1, &limits).map_err(|e| e.to_string())?.collect();
        if let Some(m) = machines.iter().find(|m| !check_il(m).unwrap().lossless) {
            return Err(format!("non-lossless machine yielded: {m:?}"));
        }
        let forms: HashSet<TransducerSpec> = machines.iter().map(TransducerSpec::canonical).collect();
        if forms.len() != machines.len() {
            return Err(format!("k ≤ {k}: {} machines but {} isomorphism classes", machines.len(), forms.len()));
        }
        counts.push(machines.len());
    }
    Ok(format!("k=1: identity, negation; cumulative counts for k ≤ 1, 2, 3: {counts:?}"))
}

fn lossless_round_trips() -> Outcome {
    let codecs: Vec<CodecSpec> = ["identity", "rle", "lz78"].iter().map(|s| s.parse().unwrap()).collect();
    let reg: RegistrySpec = "identity,lz78,rle".parse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..10_000 {
        let x = random_bits(&mut rng, 4096);
        for c in &codecs {
            if decode(c, &encode(c, &x)).ok().as_ref() != Some(&x) {
                return Err(format!("{c} failed on case {i}"));
            }
        }
        for t in 1..=reg.len() {
            let w = registry_encode(&reg, &x, t).map_err(|e| e.to_string())?;
            if registry_decode(&reg, &w.bits, t).ok().as_ref() != Some(&x) {
                return Err(format!("registry budget {t} failed on case {i}"));
            }
        }
    }
    for c in &codecs {
        let mut seen = HashSet::new();
        for x in all_strings(12) {
            if !seen.insert(encode(c, &x).bits) {
                return Err(format!("{c} collides on {x}"));
            }
        }
    }
    Ok("10000 random strings through 3 codecs and 3 budgets; codecs injective up to length 12".into())
}

fn martingale_laws() -> Outcome {
    let specs = [
        PredictorSpec::Frequency,
        PredictorSpec::Markov { order: 1 },
        PredictorSpec::Markov { order: 2 },
        PredictorSpec::Markov { order: 4 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_fair = 0f64;
    let mut worst_game = 0f64;
    for i in 0..10_000 {
        let w = random_bits(&mut rng, 200);
        let p = &specs[i % specs.len()];
        let d = martingale_log(p, &w).exp2();
        let mut w0 = w.clone();
        w0.push(false);
        let mut w1 = w.clone();
        w1.push(true);
        let sum = martingale_log(p, &w0).exp2() + martingale_log(p, &w1).exp2();
        worst_fair = worst_fair.max((sum - 2.0 * d).abs() / (2.0 * d));
        // log capitals are compared as capitals: relative error of d is |Δ log₂ d|·ln 2
        let a = martingale_log(p, &w);
        let b = betting_game_trace(p, &w).last();
        worst_game = worst_game.max((a - b).abs() * std::f64::consts::LN_2);

        if betting_game_trace(&PredictorSpec::Uniform, &w).log2_values.iter().any(|&v| v != 0.0) {
            return Err(format!("uniform capital moved on case {i}"));
        }
        if !w.is_empty() && predictor_perf(&PredictorSpec::Oracle { target: w.clone() }, &w).value() != 1.0 {
            return Err(format!("oracle perf below 1 on case {i}"));
        }
    }
    let detail = format!("max relative error: fairness {worst_fair:.2e}, game vs product {worst_game:.2e}");
    if worst_fair <= 1e-9 && worst_game <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fst_hierarchy(k: usize, l_max: usize) -> HierarchySpec {
    let machines = load_or_enumerate(&cache_dir(), k, l_max, &EnumerationLimits::default()).unwrap();
    let family = FstFamily::with_machines(k, l_max, false, machines.into());
    HierarchySpec::new(Arc::new(family), StrongSide::SameFamily).unwrap()
}

fn periodic_controls() -> Vec<SequenceSpec> {
    all_strings(4).filter(|p| !p.is_empty()).map(SequenceSpec::Periodic).collect()
}

fn cleared(p: &DepthProfile) -> usize {
    p.cleared_rows().count()
}

fn shallowness_controls() -> Outcome {
    let start = Instant::now();
    let h = fst_hierarchy(3, 1);
    let bound = BoundSpec::linear(0.1).unwrap();
    let sources = periodic_controls().into_iter().chain(PRNG_SEEDS.iter().map(|&s| SequenceSpec::Prng(s)));
    let mut count = 0;
    let mut failures = Vec::new();
    for spec in sources {
        let p = depth_profile(&InputSource::Spec(spec.clone()), &h, &bound, &SCHEDULE).map_err(|e| e.to_string())?;
        if cleared(&p) > 0 {
            failures.push(format!("{spec}: {} cleared", cleared(&p)));
        }
        count += 1;
    }
    let detail = format!("{count} sources, {:.1} s", start.elapsed().as_secs_f64());
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", failures.join(", ")))
    }
}

fn depth_indication() -> Outcome {
    let h = fst_hierarchy(3, 1);
    let bound = BoundSpec::linear(0.05).unwrap();
    let p = depth_profile(&InputSource::Spec(SequenceSpec::BlockDeep), &h, &bound, &SCHEDULE).map_err(|e| e.to_string())?;
    let best = p.summary.iter().max_by_key(|s| s.cleared).unwrap();
    let max_gap = p.rows.iter().map(|r| r.record.gap).fold(0.0, f64::max);
    let detail = format!(
        "best weak level {} clears {} of {} scheduled n; largest gap {max_gap:.6} against threshold ≥ 0.05",
        best.level,
        best.cleared,
        SCHEDULE.len()
    );
    if p.summary.iter().any(|s| s.cleared >= 3) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slow_growth() -> Outcome {
    let start = Instant::now();
    let h = fst_hierarchy(3, 1);
    let bound = BoundSpec::linear(0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut machines = Vec::new();
    while machines.len() < 10 {
        let (k, l) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let m = random_machine(&mut rng, k, l);
        if check_il(&m).unwrap().lossless {
            machines.push(m);
        }
    }
    let mut failures = Vec::new();
    let mut runs = 0;
    for spec in periodic_controls() {
        for (i, m) in machines.iter().enumerate() {
            let (_, after) = slow_growth_experiment(&InputSource::Spec(spec.clone()), m, &h, &bound, &SCHEDULE)
                .map_err(|e| e.to_string())?;
            if cleared(&after) > 0 {
                failures.push(format!("{spec} through machine {i}"));
            }
            runs += 1;
        }
    }
    let detail = format!("{runs} transformed profiles, {:.1} s", start.elapsed().as_secs_f64());
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; cleared rows in {}", failures.join(", ")))
    }
}

fn toy_bennett() -> Outcome {
    let reg: RegistrySpec = "identity,lz78".parse().unwrap();
    let mut notes = Vec::new();
    for n in [512, 1024, 2048] {
        let gap = bennett_gap(&reg, &BitString::zeros(n), 1).map_err(|e| e.to_string())?;
        if gap as f64 <= 0.4 * n as f64 {
            return Err(format!("zeros at n={n}: gap {gap} ≤ {}", 0.4 * n as f64));
        }
        notes.push(format!("{n}:{gap}"));
    }
    let mut worst = 0;
    for seed in PRNG_SEEDS {
        let x = SequenceSpec::Prng(seed).generate(*SCHEDULE.last().unwrap()).unwrap();
        for n in SCHEDULE {
            let gap = bennett_gap(&reg, &x[..n], 1).map_err(|e| e.to_string())?;
            worst = worst.max(gap.abs());
        }
    }
    let detail = format!("zeros gaps {}; prng max |gap| {worst}", notes.join(" "));
    if worst <= 1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn run_cli(args: &[String], cache: &Path) -> Result<(), String> {
    let env = HashMap::from([(CACHE_ENV.to_string(), cache.display().to_string())]);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("depthlab".to_string()).chain(args.iter().cloned());
    match run_command_with(argv, &env, &mut out, &mut err) {
        0 => Ok(()),
        code => Err(format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err).trim())),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let machine = d.join("m.fst");
    fs::write(&machine, "states 2\nstart 0\nedge 0 0 0 0\nedge 0 1 1 -\nedge 1 0 0 10\nedge 1 1 0 11\n")
        .map_err(|e| e.to_string())?;
    let p = |name: &str| d.join(name).display().to_string();
    let commands: Vec<Vec<String>> = [
        vec!["generate", "--spec", "prng:9", "--length", "4096", "--out", &p("seq.bits")],
        vec!["analyze", "fs", "--input", &p("seq.bits"), "--max-states", "3", "--maxout", "1", "--alpha", "0.1", "--schedule", "512,1024,2048,4096", "--out", &p("fs.csv")],
        vec!["analyze", "fs", "--input", "blockdeep", "--max-states", "2", "--maxout", "2", "--alpha", "0.05", "--header", "--out", &p("fs_header.csv")],
        vec!["analyze", "predictor", "--input", "champernowne", "--max-order", "3", "--bound", "loglog:1", "--out", &p("pred.csv")],
        vec!["analyze", "bennett", "--input", "periodic:0", "--registry", "identity,lz78,rle", "--out", &p("bennett.csv")],
        vec!["experiment", "slow-growth", "--input", "periodic:0011", "--machine", &machine.display().to_string(), "--max-states", "3", "--alpha", "0.1", "--out", &p("slow.csv")],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    let reports = ["seq.bits", "fs.csv", "fs_header.csv", "pred.csv", "bennett.csv", "slow.csv"];

    let mut runs = Vec::new();
    // first pass starts with an empty cache, second pass reuses it
    let cache = d.join("cache");
    for _ in 0..2 {
        for c in &commands {
            run_cli(c, &cache)?;
        }
        let bytes: Vec<Vec<u8>> = reports.iter().map(|r| fs::read(d.join(r)).unwrap()).collect();
        runs.push(bytes);
    }
    let differing: Vec<&str> = reports.iter().zip(runs[0].iter().zip(&runs[1])).filter(|(_, (a, b))| a != b).map(|(r, _)| *r).collect();
    if differing.is_empty() {
        Ok(format!("{} reports byte-identical across cold- and warm-cache runs", reports.len()))
    } else {
        Err(format!("reports differ: {}", differing.join(", ")))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("IL-decision soundness", il_soundness),
        ("enumeration ground truth", enumeration_ground_truth),
        ("lossless round-trips", lossless_round_trips),
        ("martingale laws", martingale_laws),
        ("shallowness controls", shallowness_controls),
        ("depth indication at desk scale", depth_indication),
        ("slow growth", slow_growth),
        ("toy Bennett gap", toy_bennett),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {} {name}: {detail}", i + 1);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
