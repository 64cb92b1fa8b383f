//! The `depthlab` command line: sequence generation, transducer tools and
//! depth-profile reports.

pub mod cache;
pub mod config;

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use depthlab_core::analyzer::{
    bennett_toy_profile, default_schedule, depth_profile, slow_growth_experiment, HierarchySpec,
    InputSource, StrongSide,
};
use depthlab_core::compressors::RegistrySpec;
use depthlab_core::depth::BoundSpec;
use depthlab_core::fst::{check_il, parse_fst, serialize_fst, EnumerationLimits, TransducerSpec};
use depthlab_core::observer::{FstFamily, PredictorFamily};
use depthlab_core::report::{bennett_csv, profile_csv, slow_growth_csv};
use depthlab_core::sequences::{SequenceSpec, GENERATE_CEILING};
use depthlab_core::BitString;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use cache::{cache_lookup, cache_store, CacheEntry, CacheKey};
pub use config::{parse_config_echo, RunConfig};

pub const CACHE_ENV: &str = "DEPTHLAB_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".depthlab-cache";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] depthlab_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for domain and I/O failures, 2 for usage and configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_domain() => 1,
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "depthlab", version, about = "Observer-relative depth profiling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a prefix of a generated sequence as ASCII bits
    Generate {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = GENERATE_CEILING)]
        length_ceiling: usize,
    },
    #[command(subcommand)]
    Fst(FstCommand),
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand, Debug)]
enum FstCommand {
    /// Run a machine on an input and print its output and final state
    Run {
        #[arg(long)]
        machine: PathBuf,
        /// Bits file, sequence spec, or a literal bit string
        #[arg(long)]
        input: String,
        #[arg(long)]
        length: Option<usize>,
    },
    /// Decide information losslessness
    CheckIl {
        #[arg(long)]
        machine: PathBuf,
    },
    /// List the lossless machines up to isomorphism
    Enumerate {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        maxout: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        cache: CacheArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct CacheArgs {
    /// Enumeration cache directory
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = EnumerationLimits::default().max_states)]
    state_ceiling: usize,
    #[arg(long, default_value_t = EnumerationLimits::default().max_output)]
    output_ceiling: usize,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Bits file (ASCII 0/1) or sequence spec
    #[arg(long)]
    input: String,
    /// Comma-separated, strictly ascending prefix lengths
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum AnalyzeCommand {
    /// Finite-state transducer hierarchy
    Fs {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_states: usize,
        #[arg(long, default_value_t = 1)]
        maxout: usize,
        #[arg(long)]
        alpha: f64,
        /// Charge each machine its description length
        #[arg(long)]
        header: bool,
        #[arg(long, default_value = "same-family")]
        strong_side: String,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Markov predictor hierarchy
    Predictor {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_order: u32,
        #[arg(long, default_value = "loglog:0")]
        bound: String,
        #[arg(long, default_value = "same-family")]
        strong_side: String,
    },
    /// Time-bounded compressor registry against its full budget
    Bennett {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "identity,lz78,rle")]
        registry: String,
    },
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Profile an input before and after a lossless transducer
    SlowGrowth {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        max_states: usize,
        #[arg(long, default_value_t = 1)]
        maxout: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "same-family")]
        strong_side: String,
        #[command(flatten)]
        cache: CacheArgs,
    },
}

/// Runs `depthlab` with stdout and stderr.
pub fn run_command<I, S>(argv: I, env: &HashMap<String, String>) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    run_command_with(argv, env, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// `argv[0]` is the program name. Diagnostics go to `err` as one line.
pub fn run_command_with<I, S>(
    argv: I,
    env: &HashMap<String, String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, env, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, env: &HashMap<String, String>, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Generate { spec, length, out: path, length_ceiling } => {
            let spec: SequenceSpec = spec.parse()?;
            let mut text = spec.generate_with_ceiling(length, length_ceiling)?.to_ascii();
            text.push('\n');
            cache::write_atomic(&path, text.as_bytes())
        }
        Command::Fst(cmd) => fst_command(cmd, env, out),
        Command::Analyze(cmd) => analyze_command(cmd, env),
        Command::Experiment(ExperimentCommand::SlowGrowth {
            common,
            machine,
            max_states,
            maxout,
            alpha,
            strong_side,
            cache,
        }) => {
            let (source, input) = resolve_input(&common.input)?;
            let machine_spec = read_machine(&machine)?;
            let bound = BoundSpec::linear(alpha)?;
            let (hierarchy, cache_dir) = fst_hierarchy(max_states, maxout, false, &strong_side, &cache, env)?;
            let schedule = common.schedule.clone().unwrap_or_else(default_schedule);
            let (before, after) = slow_growth_experiment(&source, &machine_spec, &hierarchy, &bound, &schedule)?;
            let config = RunConfig {
                command: "experiment slow-growth".into(),
                input,
                hierarchy: Some(hierarchy.family.describe()),
                strong_side: Some(hierarchy.strong_side.to_string()),
                bound: Some(bound.to_string()),
                machine: Some(machine_digest(&machine_spec)),
                schedule: schedule.iter().map(|&n| n as u64).collect(),
                cache_dir: Some(cache_dir.display().to_string()),
                out: common.out.display().to_string(),
                ..Default::default()
            };
            write_report(&common.out, &config, &slow_growth_csv(&before, &after))
        }
    }
}

fn fst_command(cmd: FstCommand, env: &HashMap<String, String>, out: &mut dyn Write) -> Result<(), CliError> {
    let stdout_err = |source| CliError::Io { path: PathBuf::from("<stdout>"), source };
    match cmd {
        FstCommand::Run { machine, input, length } => {
            let m = read_machine(&machine)?;
            let x = match BitString::parse_ascii(&input) {
                Ok(bits) if !Path::new(&input).exists() => bits,
                _ => {
                    let (source, _) = resolve_input(&input)?;
                    match (&source, length) {
                        (InputSource::Raw(bits), None) => bits.clone(),
                        (_, Some(n)) => source.prefix(n)?,
                        (InputSource::Spec(_), None) => {
                            return Err(CliError::Usage("a sequence spec input needs --length".into()))
                        }
                    }
                }
            };
            let r = m.run(&x);
            writeln!(out, "output: {}\nfinal_state: {}", r.output, r.final_state).map_err(stdout_err)
        }
        FstCommand::CheckIl { machine } => {
            let verdict = check_il(&read_machine(&machine)?)?;
            writeln!(out, "lossless: {}", verdict.lossless).map_err(stdout_err)?;
            if let Some((a, b)) = verdict.witness {
                writeln!(out, "witness: {a} / {b}").map_err(stdout_err)?;
            }
            Ok(())
        }
        FstCommand::Enumerate { states, maxout, out: path, cache } => {
            let dir = cache_dir(&cache, env);
            let machines = cache::load_or_enumerate(&dir, states, maxout, &limits(&cache))?;
            let mut text = format!("# machines: {}\n", machines.len());
            for m in &machines {
                text.push('\n');
                text.push_str(&serialize_fst(m));
            }
            match path {
                Some(p) => cache::write_atomic(&p, text.as_bytes()),
                None => out.write_all(text.as_bytes()).map_err(stdout_err),
            }
        }
    }
}

fn analyze_command(cmd: AnalyzeCommand, env: &HashMap<String, String>) -> Result<(), CliError> {
    match cmd {
        AnalyzeCommand::Fs { common, max_states, maxout, alpha, header, strong_side, cache } => {
            let bound = BoundSpec::linear(alpha)?;
            let (hierarchy, dir) = fst_hierarchy(max_states, maxout, header, &strong_side, &cache, env)?;
            profile_report("analyze fs", &common, &hierarchy, &bound, Some(dir))
        }
        AnalyzeCommand::Predictor { common, max_order, bound, strong_side } => {
            let bound: BoundSpec = bound.parse()?;
            let family = Arc::new(PredictorFamily::new(max_order)?);
            let hierarchy = HierarchySpec::new(family, strong_side.parse()?)?;
            profile_report("analyze predictor", &common, &hierarchy, &bound, None)
        }
        AnalyzeCommand::Bennett { common, registry } => {
            let (source, input) = resolve_input(&common.input)?;
            let reg: RegistrySpec = registry.parse()?;
            let schedule = common.schedule.clone().unwrap_or_else(default_schedule);
            let rows = bennett_toy_profile(&source, &reg, &schedule)?;
            let config = RunConfig {
                command: "analyze bennett".into(),
                input,
                registry: Some(reg.to_string()),
                schedule: schedule.iter().map(|&n| n as u64).collect(),
                out: common.out.display().to_string(),
                ..Default::default()
            };
            write_report(&common.out, &config, &bennett_csv(&source.describe(), &reg.to_string(), &rows))
        }
    }
}

fn profile_report(
    command: &str,
    common: &CommonArgs,
    hierarchy: &HierarchySpec,
    bound: &BoundSpec,
    cache_dir: Option<PathBuf>,
) -> Result<(), CliError> {
    let (source, input) = resolve_input(&common.input)?;
    let schedule = common.schedule.clone().unwrap_or_else(default_schedule);
    let profile = depth_profile(&source, hierarchy, bound, &schedule)?;
    let config = RunConfig {
        command: command.into(),
        input,
        hierarchy: Some(hierarchy.family.describe()),
        strong_side: Some(hierarchy.strong_side.to_string()),
        bound: Some(bound.to_string()),
        schedule: profile.schedule.clone(),
        cache_dir: cache_dir.map(|d| d.display().to_string()),
        out: common.out.display().to_string(),
        ..Default::default()
    };
    write_report(&common.out, &config, &profile_csv(&profile))
}

fn write_report(path: &Path, config: &RunConfig, body: &str) -> Result<(), CliError> {
    let mut text = config.echo();
    text.push_str(body);
    cache::write_atomic(path, text.as_bytes())
}

fn limits(cache: &CacheArgs) -> EnumerationLimits {
    EnumerationLimits {
        max_states: cache.state_ceiling,
        max_output: cache.output_ceiling,
        ..EnumerationLimits::default()
    }
}

fn cache_dir(args: &CacheArgs, env: &HashMap<String, String>) -> PathBuf {
    args.cache
        .clone()
        .or_else(|| env.get(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn fst_hierarchy(
    k: usize,
    l_max: usize,
    header: bool,
    strong_side: &str,
    cache: &CacheArgs,
    env: &HashMap<String, String>,
) -> Result<(HierarchySpec, PathBuf), CliError> {
    let side: StrongSide = strong_side.parse()?;
    let dir = cache_dir(cache, env);
    let machines = cache::load_or_enumerate(&dir, k, l_max, &limits(cache))?;
    let family = FstFamily::with_machines(k, l_max, header, machines.into());
    Ok((HierarchySpec::new(Arc::new(family), side)?, dir))
}

/// A readable file of ASCII bits, otherwise a sequence spec. Also returns
/// the description used in the config echo.
pub fn resolve_input(src: &str) -> Result<(InputSource, String), CliError> {
    let path = Path::new(src);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let source = InputSource::Raw(BitString::parse_ascii(&text)?);
        let description = source.describe();
        return Ok((source, description));
    }
    let spec: SequenceSpec = src.parse()?;
    Ok((InputSource::Spec(spec.clone()), spec.to_string()))
}

fn read_machine(path: &Path) -> Result<TransducerSpec, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(parse_fst(&bytes)?)
}

fn machine_digest(m: &TransducerSpec) -> String {
    hex::encode(&Sha256::digest(serialize_fst(m).as_bytes())[..8])
}
