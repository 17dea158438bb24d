//! Command-line front end: single-frame decoding, Monte-Carlo sweeps,
//! code inspection, and a built-in certification suite.
//!
//! Every flag can also come from a `key=value` config file passed with
//! `--config`; explicit flags win over file entries, which win over the
//! defaults.

use crate::admm::{DecoderConfig, TerminationStatus};
use crate::bp::BpConfig;
use crate::code::{parse_alist, ParityCheckMatrix};
use crate::polytope::{build_system, Fact1Violation};
use crate::sim::{
    emit_results, run_sweep, ChannelConfig, DecoderChoice, SimOptions, StopCondition, SweepContext,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::HashMap;
use std::path::{Path, PathBuf};

const USAGE_EXIT: i32 = 2;
const FAILURE_EXIT: i32 = 1;

#[derive(Parser)]
#[command(
    name = "mpb-ldpc",
    version,
    about = "LP decoding for LDPC codes via check-node decomposition and ADMM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode one frame from channel LLRs or received BPSK samples
    Decode(DecodeArgs),
    /// Monte-Carlo FER/BER sweep over Eb/N0 points, emitting CSV + JSON
    Simulate(SimulateArgs),
    /// Print decomposition dimensions and the structural report of a code
    Inspect(InspectArgs),
    /// Run the oracle certification suite on small codes
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderKind {
    /// Minimum-polytope ADMM LP decoder
    MpbAdmm,
    /// Sum-product belief propagation
    Bp,
}

/// Decoder tuning shared by `decode` and `simulate`.
#[derive(Args)]
struct TuningFlags {
    /// ADMM penalty parameter (default 0.6)
    #[arg(long)]
    mu: Option<f64>,
    /// Stopping tolerance on both squared residual norms (default 1e-5)
    #[arg(long)]
    xi: Option<f64>,
    /// Iteration cap for either decoder (default 500)
    #[arg(long)]
    max_iter: Option<usize>,
    /// Over-relaxation coefficient in [1, 2) (default 1.9)
    #[arg(long)]
    alpha: Option<f64>,
    /// Per-iteration syndrome stop (default: on for simulate, off for
    /// single-frame decode so the run can certify its output)
    #[arg(long)]
    early_termination: Option<bool>,
    /// Hard-decision threshold in (0, 1) (default 0.5)
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct DecodeArgs {
    /// alist file defining the code
    #[arg(long)]
    code: PathBuf,
    /// Comma-separated channel LLRs
    #[arg(long, allow_hyphen_values = true)]
    llr: Option<String>,
    /// File of whitespace-separated channel LLRs
    #[arg(long)]
    llr_file: Option<PathBuf>,
    /// Comma-separated received BPSK samples (requires --sigma2 or --ebn0)
    #[arg(long, allow_hyphen_values = true)]
    received: Option<String>,
    /// File of whitespace-separated received BPSK samples
    #[arg(long)]
    received_file: Option<PathBuf>,
    /// Noise variance for received samples
    #[arg(long)]
    sigma2: Option<f64>,
    /// Eb/N0 in dB for received samples (variance derived from the code rate)
    #[arg(long)]
    ebn0: Option<f64>,
    /// Decoder to run (default mpb-admm)
    #[arg(long, value_enum)]
    decoder: Option<DecoderKind>,
    #[command(flatten)]
    tuning: TuningFlags,
    /// key=value file mirroring the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// alist file defining the code
    #[arg(long)]
    code: PathBuf,
    /// Eb/N0 points: "a:step:b" range or comma list (e.g. 2.0:0.5:3.0)
    #[arg(long)]
    ebn0: Option<String>,
    /// Decoder to run (default mpb-admm)
    #[arg(long, value_enum)]
    decoder: Option<DecoderKind>,
    /// Stop a point after this many error frames (default 200)
    #[arg(long)]
    errors: Option<u64>,
    /// Frame cap per point (default 1000000)
    #[arg(long)]
    frames: Option<u64>,
    /// Master seed (default 1)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 = MPB_LDPC_WORKERS env or all cores (default 0)
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV path (default results.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON sidecar path (default: CSV path with .json extension)
    #[arg(long)]
    json: Option<PathBuf>,
    /// Report zero decode times so output files are byte-reproducible
    #[arg(long)]
    no_timing: bool,
    /// Transmit random codewords instead of the all-zero word
    #[arg(long)]
    random_codewords: bool,
    #[command(flatten)]
    tuning: TuningFlags,
    /// key=value file mirroring the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    /// alist file to inspect
    code: PathBuf,
    /// Write A as "row col value" coordinate text to this file
    #[arg(long)]
    dump_a: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the randomized checks
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

/// Entry point used by the binary; returns the process exit code.
pub fn cli_main(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE_EXIT,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Decode(args) => run_decode(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Inspect(args) => run_inspect(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError { exit_code, message }) => {
            eprintln!("error: {message}");
            exit_code
        }
    }
}

#[derive(Debug)]
struct CliError {
    exit_code: i32,
    message: String,
}

fn usage_error(message: impl Into<String>) -> CliError {
    CliError { exit_code: USAGE_EXIT, message: message.into() }
}

fn failure(message: impl Into<String>) -> CliError {
    CliError { exit_code: FAILURE_EXIT, message: message.into() }
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

/// `key=value` lines; `#` starts a comment.
struct Settings {
    map: HashMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Settings, CliError> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| failure(format!("cannot read config {}: {e}", path.display())))?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(usage_error(format!(
                        "config {} line {}: expected key=value",
                        path.display(),
                        lineno + 1
                    )));
                };
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Settings { map })
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.map
            .get(key)
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| usage_error(format!("config key {key}={s}: {e}")))
            })
            .transpose()
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.map.get(key).map(|s| s.as_str()) {
            None => Ok(None),
            Some("true") | Some("1") | Some("yes") | Some("on") => Ok(Some(true)),
            Some("false") | Some("0") | Some("no") | Some("off") => Ok(Some(false)),
            Some(other) => Err(usage_error(format!("config key {key}={other}: expected a boolean"))),
        }
    }

    fn string(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }
}

fn resolve_decoder(
    kind: Option<DecoderKind>,
    tuning: &TuningFlags,
    settings: &Settings,
    default_early_termination: bool,
) -> Result<DecoderChoice, CliError> {
    let kind = match kind {
        Some(k) => k,
        None => match settings.string("decoder") {
            None | Some("mpb-admm") => DecoderKind::MpbAdmm,
            Some("bp") => DecoderKind::Bp,
            Some(other) => return Err(usage_error(format!("unknown decoder {other:?}"))),
        },
    };
    let defaults = DecoderConfig::default();
    let mu = tuning.mu.or(settings.parsed("mu")?).unwrap_or(defaults.mu);
    let xi = tuning.xi.or(settings.parsed("xi")?).unwrap_or(defaults.xi);
    let max_iter = tuning.max_iter.or(settings.parsed("max_iter")?).unwrap_or(defaults.max_iter);
    let alpha = tuning.alpha.or(settings.parsed("alpha")?).unwrap_or(defaults.alpha);
    let threshold = tuning
        .threshold
        .or(settings.parsed("threshold")?)
        .unwrap_or(defaults.hard_decision_threshold);
    let early_termination = tuning
        .early_termination
        .or(settings.boolean("early_termination")?)
        .unwrap_or(default_early_termination);

    if mu <= 0.0 {
        return Err(usage_error("mu must be positive"));
    }
    if xi <= 0.0 {
        return Err(usage_error("xi must be positive"));
    }
    if max_iter == 0 {
        return Err(usage_error("max_iter must be at least 1"));
    }
    if !(1.0..2.0).contains(&alpha) {
        return Err(usage_error("alpha must lie in [1, 2)"));
    }
    if threshold <= 0.0 || threshold >= 1.0 {
        return Err(usage_error("threshold must lie in (0, 1)"));
    }

    Ok(match kind {
        DecoderKind::MpbAdmm => DecoderChoice::MpbAdmm(DecoderConfig {
            mu,
            xi,
            max_iter,
            alpha,
            early_termination,
            hard_decision_threshold: threshold,
        }),
        DecoderKind::Bp => DecoderChoice::Bp(BpConfig { max_iter, early_termination }),
    })
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

fn load_code(path: &Path) -> Result<ParityCheckMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| failure(format!("cannot read {}: {e}", path.display())))?;
    parse_alist(&text).map_err(|e| failure(format!("{}: {e}", path.display())))
}

fn parse_float_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| usage_error(format!("bad {what} entry {s:?}: {e}")))
        })
        .collect()
}

fn run_decode(args: DecodeArgs) -> Result<(), CliError> {
    let settings = Settings::load(args.config.as_deref())?;
    let h = load_code(&args.code)?;

    let sources = [
        args.llr.is_some(),
        args.llr_file.is_some(),
        args.received.is_some(),
        args.received_file.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(usage_error(
            "provide exactly one of --llr, --llr-file, --received, --received-file",
        ));
    }
    let floats_from_file = |path: &Path, what: &str| -> Result<Vec<f64>, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| failure(format!("cannot read {}: {e}", path.display())))?;
        text.split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| failure(format!("bad {what} {s:?}: {e}"))))
            .collect()
    };
    let llrs: Vec<f64> = if let Some(list) = &args.llr {
        parse_float_list(list, "LLR")?
    } else if let Some(path) = &args.llr_file {
        floats_from_file(path, "LLR")?
    } else {
        let received = match (&args.received, &args.received_file) {
            (Some(list), None) => parse_float_list(list, "received sample")?,
            (None, Some(path)) => floats_from_file(path, "received sample")?,
            _ => unreachable!("source multiplicity checked above"),
        };
        let sigma2 = match (args.sigma2, args.ebn0) {
            (Some(s), None) if s > 0.0 => s,
            (None, Some(ebn0)) => ChannelConfig::new(ebn0, h.rate(), 0).sigma2(),
            _ => {
                return Err(usage_error(
                    "received samples need exactly one of --sigma2 > 0 or --ebn0",
                ))
            }
        };
        crate::sim::llr_from_channel(&received, sigma2)
    };
    if llrs.len() != h.n() {
        return Err(usage_error(format!(
            "expected {} channel values for this code, found {}",
            h.n(),
            llrs.len()
        )));
    }

    let choice = resolve_decoder(args.decoder, &args.tuning, &settings, false)?;
    let mut decoder = choice.build(&h);
    let result = decoder.decode_frame(&llrs);

    let status = match result.status {
        TerminationStatus::Converged => "converged",
        TerminationStatus::EarlyTerminated => "early-terminated",
        TerminationStatus::MaxIter => "max-iterations",
    };
    println!("bits: {}", result.bits.to_bit_string());
    println!("decoder: {}", choice.id());
    println!("status: {status}");
    println!("iterations: {}", result.iterations);
    println!("objective: {}", result.objective);
    println!("integral: {}", result.integral);
    println!("ml_certified: {}", result.ml_certified);
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn parse_ebn0_spec(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if let Some((start, rest)) = spec.split_once(':') {
        let Some((step, end)) = rest.split_once(':') else {
            return Err(usage_error(format!("bad Eb/N0 range {spec:?}: expected start:step:end")));
        };
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| usage_error(format!("bad Eb/N0 range {spec:?}: {e}")))
        };
        let (start, step, end) = (parse(start)?, parse(step)?, parse(end)?);
        if step <= 0.0 || end < start {
            return Err(usage_error(format!("bad Eb/N0 range {spec:?}: need step > 0 and end >= start")));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| start + k as f64 * step).collect())
    } else {
        let points = parse_float_list(spec, "Eb/N0")?;
        if points.is_empty() {
            return Err(usage_error("empty Eb/N0 list"));
        }
        Ok(points)
    }
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let settings = Settings::load(args.config.as_deref())?;

    let ebn0_spec = args
        .ebn0
        .as_deref()
        .or(settings.string("ebn0"))
        .ok_or_else(|| usage_error("--ebn0 is required (flag or config key)"))?;
    let points = parse_ebn0_spec(ebn0_spec)?;

    let choice = resolve_decoder(args.decoder, &args.tuning, &settings, true)?;
    let h = load_code(&args.code)?;
    let stop = StopCondition {
        target_error_frames: Some(args.errors.or(settings.parsed("errors")?).unwrap_or(200)),
        max_frames: args.frames.or(settings.parsed("frames")?).unwrap_or(1_000_000),
    };
    if stop.max_frames == 0 {
        return Err(usage_error("frames must be at least 1"));
    }
    let seed = args.seed.or(settings.parsed("seed")?).unwrap_or(1);
    let opts = SimOptions {
        workers: args.workers.or(settings.parsed("workers")?).unwrap_or(0),
        measure_timing: !(args.no_timing || settings.boolean("no_timing")?.unwrap_or(false)),
        random_codewords: args.random_codewords
            || settings.boolean("random_codewords")?.unwrap_or(false),
    };

    let csv_path = args
        .out
        .or_else(|| settings.string("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results.csv"));
    let json_path = args
        .json
        .or_else(|| settings.string("json").map(PathBuf::from))
        .unwrap_or_else(|| csv_path.with_extension("json"));

    let records = run_sweep(&h, &choice, seed, &points, &stop, &opts);
    for r in &records {
        println!(
            "ebn0 {:>5} dB: fer {:.3e} ({}/{}), ber {:.3e}, mean iters {:.1}, mean time {:.3e} s",
            r.ebn0_db, r.fer, r.error_frames, r.frames, r.ber, r.mean_iterations, r.mean_time_s
        );
    }
    let context = SweepContext {
        code_name: args.code.display().to_string(),
        n: h.n(),
        m: h.m(),
        rate: h.rate(),
        decoder: choice,
        master_seed: seed,
        ebn0_points: points,
        stop,
        options: opts,
    };
    emit_results(&records, &context, &csv_path, &json_path)
        .map_err(|e| failure(format!("writing results: {e}")))?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// inspect
// ---------------------------------------------------------------------------

fn run_inspect(args: InspectArgs) -> Result<(), CliError> {
    let h = load_code(&args.code)?;
    let sys = build_system(&h, &vec![0.0; h.n()]);

    let row_degs: Vec<usize> = (0..h.m()).map(|j| h.row(j).len()).collect();
    let col_degs: Vec<usize> = (0..h.n()).map(|i| h.col(i).len()).collect();
    println!("code: {}", args.code.display());
    println!("n: {}", h.n());
    println!("m: {}", h.m());
    println!("rate: {}", h.rate());
    println!(
        "check degrees: {}..{}",
        row_degs.iter().min().unwrap(),
        row_degs.iter().max().unwrap()
    );
    println!(
        "variable degrees: {}..{}",
        col_degs.iter().min().unwrap(),
        col_degs.iter().max().unwrap()
    );
    println!("triples (Gamma_c): {}", sys.triple_count());
    println!("auxiliary variables (Gamma_a): {}", sys.aux_count());
    println!("constraint rows M: {}", sys.constraint_dim());
    println!("extended variables N: {}", sys.extended_dim());
    println!("nonzeros of A: {}", 12 * sys.triple_count());

    match sys.validate_structure() {
        Ok(_) => println!("structural check: ok"),
        Err(v) => {
            println!("structural check: FAILED ({v})");
            return Err(failure(format!("structural check failed: {v}")));
        }
    }
    match sys.validate_fact1() {
        Ok(report) => println!(
            "dense orthogonality check: ok ({} x {}, {} nonzeros)",
            report.rows, report.cols, report.nonzeros
        ),
        Err(Fact1Violation::DimensionTooLarge { rows, cols }) => {
            println!("dense orthogonality check: skipped ({rows} x {cols} exceeds the dense guard)")
        }
        Err(v) => {
            println!("dense orthogonality check: FAILED ({v})");
            return Err(failure(format!("dense check failed: {v}")));
        }
    }

    if let Some(path) = &args.dump_a {
        std::fs::write(path, sys.dump_coordinates())
            .map_err(|e| failure(format!("writing {}: {e}", path.display())))?;
        println!("wrote coordinate dump to {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    use crate::admm::{decode, init_state, iterate};
    use crate::code::random_regular_code;
    use crate::oracles::{
        brute_force_ml, dense_admm_step, exact_lp, p3_membership, DenseSystem,
    };
    use crate::sim::{derive_frame_seed, GaussianSource};

    let mut failures = 0usize;
    let mut report = |name: &str, outcome: Result<String, String>| match outcome {
        Ok(detail) => println!("PASS {name}: {detail}"),
        Err(detail) => {
            println!("FAIL {name}: {detail}");
            failures += 1;
        }
    };

    report("p3-binary-parity", {
        let mut ok = true;
        for mask in 0u8..8 {
            let bit = |k: u8| f64::from((mask >> k) & 1);
            if p3_membership(bit(0), bit(1), bit(2)) != (mask.count_ones() % 2 == 0) {
                ok = false;
            }
        }
        if ok {
            Ok("membership of all 8 binary triples matches even parity".into())
        } else {
            Err("binary membership does not match parity".into())
        }
    });

    report("decomposition-parity", {
        let mut ok = true;
        'outer: for d in 3..=8usize {
            let row: Vec<usize> = (0..d).collect();
            let (triples, aux) = crate::polytope::decompose_check(&row, d).unwrap();
            for assignment in 0u32..(1 << d) {
                let mut exists = false;
                for aux_bits in 0u32..(1 << aux) {
                    let value = |idx: usize| {
                        if idx < d { (assignment >> idx) & 1 } else { (aux_bits >> (idx - d)) & 1 }
                    };
                    if triples.iter().all(|t| value(t.0) ^ value(t.1) ^ value(t.2) == 0) {
                        exists = true;
                        break;
                    }
                }
                if exists != (assignment.count_ones() % 2 == 0) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            Ok("check degrees 3..=8, exhaustive over assignments and auxiliaries".into())
        } else {
            Err("decomposition changes the parity language".into())
        }
    });

    report("fact1-structure", {
        let mut outcome = Ok(String::new());
        for k in 0..5u64 {
            let h = random_regular_code(24, 3, 6, args.seed.wrapping_add(k)).unwrap();
            let sys = build_system(&h, &vec![0.0; h.n()]);
            if let Err(v) = sys.validate_fact1() {
                outcome = Err(format!("code seed {k}: {v}"));
                break;
            }
        }
        outcome.map(|_| "5 random (3,6) codes, dense entries/nonzeros/orthogonality".into())
    });

    report("sparse-vs-dense-trajectory", {
        let h = random_regular_code(12, 3, 6, args.seed).unwrap();
        let mut gauss = GaussianSource::from_seed(derive_frame_seed(args.seed, 0, 0));
        let llrs: Vec<f64> = (0..12).map(|_| gauss.next_normal()).collect();
        let sys = build_system(&h, &llrs);
        let dsys = DenseSystem::from_system(&sys);
        let cfg = DecoderConfig { alpha: 1.0, ..DecoderConfig::default() };
        let mut sparse = init_state(&sys);
        let mut dense = init_state(&sys);
        let mut max_diff = 0.0f64;
        for _ in 0..100 {
            iterate(&sys, &mut sparse, &cfg);
            dense_admm_step(&dsys, &mut dense, &cfg);
            for (a, b) in sparse.v.iter().zip(&dense.v) {
                max_diff = max_diff.max((a - b).abs());
            }
            for (a, b) in sparse.w.iter().zip(&dense.w) {
                max_diff = max_diff.max((a - b).abs());
            }
            for (a, b) in sparse.lambda.iter().zip(&dense.lambda) {
                max_diff = max_diff.max((a - b).abs());
            }
        }
        if max_diff <= 1e-12 {
            Ok(format!("100 iterations, max deviation {max_diff:.2e}"))
        } else {
            Err(format!("trajectories deviate by {max_diff:.2e}"))
        }
    });

    report("lp-agreement-and-relaxation", {
        let mut outcome = Ok(String::new());
        let mut gauss = GaussianSource::from_seed(derive_frame_seed(args.seed, 1, 0));
        'outer: for k in 0..10u64 {
            let h = random_regular_code(8, 3, 4, args.seed.wrapping_add(100 + k)).unwrap();
            let llrs: Vec<f64> = (0..8).map(|_| gauss.next_normal() * 1.5).collect();
            let sys = build_system(&h, &llrs);
            let lp = match exact_lp(&DenseSystem::from_system(&sys)) {
                Ok(lp) => lp,
                Err(e) => {
                    outcome = Err(format!("simplex failed: {e}"));
                    break 'outer;
                }
            };
            let cfg = DecoderConfig {
                alpha: 1.0,
                xi: 1e-10,
                max_iter: 500_000,
                early_termination: false,
                ..DecoderConfig::default()
            };
            let admm = decode(&sys, &cfg);
            let ml = brute_force_ml(&h, &llrs).unwrap();
            if (admm.objective - lp.objective).abs() > 1e-4 {
                outcome = Err(format!(
                    "instance {k}: ADMM objective {} vs simplex {}",
                    admm.objective, lp.objective
                ));
                break 'outer;
            }
            if lp.objective > ml.objective + 1e-6 {
                outcome = Err(format!("instance {k}: LP above ML objective"));
                break 'outer;
            }
        }
        outcome.map(|_| "10 instances: |ADMM - simplex| <= 1e-4, LP <= ML".into())
    });

    report("ml-certificate-sample", {
        let h = random_regular_code(16, 3, 4, args.seed.wrapping_add(500)).unwrap();
        let cfg = DecoderConfig { early_termination: false, ..DecoderConfig::default() };
        let mut certified = 0usize;
        let mut outcome = Ok(String::new());
        'outer: for frame in 0..200u64 {
            let ebn0 = 1.0 + (frame % 6) as f64;
            let chan = ChannelConfig::new(ebn0, h.rate(), args.seed);
            let sigma2 = chan.sigma2();
            let mut gauss = GaussianSource::from_seed(derive_frame_seed(args.seed, 2, frame));
            let llrs: Vec<f64> = (0..16)
                .map(|_| 2.0 * (1.0 + sigma2.sqrt() * gauss.next_normal()) / sigma2)
                .collect();
            let sys = build_system(&h, &llrs);
            let result = decode(&sys, &cfg);
            if result.integral && result.status == TerminationStatus::Converged {
                certified += 1;
                let ml = brute_force_ml(&h, &llrs).unwrap();
                if result.objective > ml.objective + 1e-6 {
                    outcome = Err(format!("frame {frame}: integral output is not ML"));
                    break 'outer;
                }
            }
        }
        outcome.map(|_| format!("{certified}/200 integral converged outputs, all ML"))
    });

    if failures == 0 {
        println!("verification suite passed");
        Ok(())
    } else {
        Err(failure(format!("{failures} verification check(s) failed")))
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ebn0_range_and_list() {
        assert_eq!(parse_ebn0_spec("2.0:0.5:3.0").unwrap(), vec![2.0, 2.5, 3.0]);
        assert_eq!(parse_ebn0_spec("1,2.5, 4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_ebn0_spec("2.5").unwrap(), vec![2.5]);
        assert!(parse_ebn0_spec("3:0:4").is_err());
        assert!(parse_ebn0_spec("a:b:c").is_err());
    }

    #[test]
    fn settings_precedence_and_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sim.conf");
        std::fs::write(&path, "mu = 0.8\nearly_termination = false # comment\ndecoder=bp\n").unwrap();
        let settings = Settings::load(Some(&path)).unwrap();
        let tuning = TuningFlags {
            mu: None,
            xi: None,
            max_iter: None,
            alpha: None,
            early_termination: None,
            threshold: None,
        };
        let choice = resolve_decoder(None, &tuning, &settings, true).unwrap();
        match choice {
            DecoderChoice::Bp(cfg) => assert!(!cfg.early_termination),
            other => panic!("expected bp, got {other:?}"),
        }
        // Flag overrides the config file.
        let choice = resolve_decoder(Some(DecoderKind::MpbAdmm), &tuning, &settings, true).unwrap();
        match choice {
            DecoderChoice::MpbAdmm(cfg) => {
                assert_eq!(cfg.mu, 0.8);
                assert!(!cfg.early_termination);
            }
            other => panic!("expected mpb-admm, got {other:?}"),
        }
    }

    #[test]
    fn bad_ranges_are_usage_errors() {
        let settings = Settings { map: HashMap::new() };
        let tuning = TuningFlags {
            mu: Some(-1.0),
            xi: None,
            max_iter: None,
            alpha: None,
            early_termination: None,
            threshold: None,
        };
        let err = resolve_decoder(None, &tuning, &settings, true).unwrap_err();
        assert_eq!(err.exit_code, USAGE_EXIT);
    }
}
