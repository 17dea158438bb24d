//! AWGN/BPSK Monte-Carlo pipeline: modulate, add noise, compute LLRs,
//! decode, and accumulate frame/bit error statistics.
//!
//! Reproducibility contract: every frame draws its noise from a fresh
//! ChaCha8 stream seeded by `(master seed, point index, frame index)`
//! through a fixed SplitMix64 chain, and a run stops at the smallest
//! frame index whose cumulative error count reaches the target. Results
//! are therefore byte-identical across worker counts and chunk sizes.
//! Wall-clock timing is the one exception; disable it (see
//! [`SimOptions::measure_timing`]) when comparing output files.
//!
//! BPSK maps bit 0 to +1 and bit 1 to -1, so a positive LLR favours
//! bit 0, matching the cost convention of the decoders.

use crate::admm::{DecodeResult, DecoderConfig};
use crate::bp::{BpConfig, BpDecoder};
use crate::code::{BitVector, ParityCheckMatrix};
use crate::oracles::nullspace_basis;
use crate::polytope::{build_system, ConstraintSystem};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

/// Environment variable overriding the worker count when no explicit
/// count is configured.
pub const WORKERS_ENV: &str = "MPB_LDPC_WORKERS";

// ---------------------------------------------------------------------------
// Seeding and Gaussian sampling
// ---------------------------------------------------------------------------

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Per-frame seed from the master seed, the sweep point index, and the
/// frame index. Fixed mixing chain, independent of worker scheduling.
pub fn derive_frame_seed(master_seed: u64, point_index: u64, frame_index: u64) -> u64 {
    let mut s = splitmix64(master_seed ^ 0xA076_1D64_78BD_642F);
    s = splitmix64(s ^ point_index);
    splitmix64(s ^ frame_index)
}

/// Standard-normal source: Marsaglia polar method over a counter-based
/// ChaCha8 stream. Both pieces are pinned algorithms, so the draw
/// sequence is stable across platforms and library versions.
pub struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn from_seed(seed: u64) -> GaussianSource {
        GaussianSource { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    pub fn from_rng(rng: ChaCha8Rng) -> GaussianSource {
        GaussianSource { rng, spare: None }
    }

    #[inline]
    fn uniform_pm1(&mut self) -> f64 {
        // 53 random bits onto [0, 1), then onto (-1, 1).
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        2.0 * u - 1.0
    }

    /// One standard-normal draw.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = self.uniform_pm1();
            let v = self.uniform_pm1();
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Channel
// ---------------------------------------------------------------------------

/// One AWGN operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Eb/N0 in decibels.
    pub ebn0_db: f64,
    /// Code rate R = (n - m) / n.
    pub rate: f64,
    /// Master seed of the run.
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(ebn0_db: f64, rate: f64, seed: u64) -> ChannelConfig {
        assert!(rate > 0.0 && rate < 1.0, "code rate must lie in (0, 1)");
        ChannelConfig { ebn0_db, rate, seed }
    }

    /// Noise variance per BPSK symbol: `1 / (2 R 10^(EbN0/10))`.
    pub fn sigma2(&self) -> f64 {
        1.0 / (2.0 * self.rate * 10f64.powf(self.ebn0_db / 10.0))
    }
}

/// Channel LLRs for unit-energy BPSK: `2 r / sigma^2` per sample.
pub fn llr_from_channel(received: &[f64], sigma2: f64) -> Vec<f64> {
    assert!(sigma2 > 0.0, "noise variance must be positive");
    received.iter().map(|&r| 2.0 * r / sigma2).collect()
}

// ---------------------------------------------------------------------------
// Frame decoders
// ---------------------------------------------------------------------------

/// A decoder instance owned by one worker; decodes one frame at a time.
pub trait FrameDecoder: Send {
    fn decode_frame(&mut self, llrs: &[f64]) -> DecodeResult;
    fn id(&self) -> &'static str;
}

/// LP decoder wrapper: the constraint structure is built once per
/// instance and only the cost vector changes per frame.
pub struct MpbAdmmFrameDecoder {
    sys: ConstraintSystem,
    cfg: DecoderConfig,
}

impl MpbAdmmFrameDecoder {
    pub fn new(h: &ParityCheckMatrix, cfg: DecoderConfig) -> MpbAdmmFrameDecoder {
        let zeros = vec![0.0; h.n()];
        MpbAdmmFrameDecoder { sys: build_system(h, &zeros), cfg }
    }

    pub fn system(&self) -> &ConstraintSystem {
        &self.sys
    }
}

impl FrameDecoder for MpbAdmmFrameDecoder {
    fn decode_frame(&mut self, llrs: &[f64]) -> DecodeResult {
        self.sys.set_cost(llrs);
        crate::admm::decode(&self.sys, &self.cfg)
    }

    fn id(&self) -> &'static str {
        "mpb-admm"
    }
}

/// Sum-product baseline wrapper; the edge-index workspace persists
/// across frames.
pub struct BpFrameDecoder {
    decoder: BpDecoder,
    cfg: BpConfig,
}

impl BpFrameDecoder {
    pub fn new(h: &ParityCheckMatrix, cfg: BpConfig) -> BpFrameDecoder {
        BpFrameDecoder { decoder: BpDecoder::new(h.clone()), cfg }
    }
}

impl FrameDecoder for BpFrameDecoder {
    fn decode_frame(&mut self, llrs: &[f64]) -> DecodeResult {
        self.decoder.decode(llrs, &self.cfg)
    }

    fn id(&self) -> &'static str {
        "bp"
    }
}

/// Which decoder a simulation runs, with its parameters (serialized into
/// the JSON sidecar).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decoder", rename_all = "kebab-case")]
pub enum DecoderChoice {
    MpbAdmm(DecoderConfig),
    Bp(BpConfig),
}

impl DecoderChoice {
    pub fn id(&self) -> &'static str {
        match self {
            DecoderChoice::MpbAdmm(_) => "mpb-admm",
            DecoderChoice::Bp(_) => "bp",
        }
    }

    pub fn build(&self, h: &ParityCheckMatrix) -> Box<dyn FrameDecoder> {
        match self {
            DecoderChoice::MpbAdmm(cfg) => Box::new(MpbAdmmFrameDecoder::new(h, *cfg)),
            DecoderChoice::Bp(cfg) => Box::new(BpFrameDecoder::new(h, *cfg)),
        }
    }
}

// ---------------------------------------------------------------------------
// Stop rule and options
// ---------------------------------------------------------------------------

/// A point stops at whichever hits first: the target error-frame count
/// or the frame cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopCondition {
    pub target_error_frames: Option<u64>,
    pub max_frames: u64,
}

impl Default for StopCondition {
    fn default() -> Self {
        StopCondition { target_error_frames: Some(200), max_frames: 1_000_000 }
    }
}

/// Execution knobs that do not affect the simulated statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOptions {
    /// Worker threads; 0 means the `MPB_LDPC_WORKERS` environment
    /// variable if set, otherwise the rayon default.
    pub workers: usize,
    /// Record wall-clock decode time per frame. Leave off for
    /// byte-identical output files.
    pub measure_timing: bool,
    /// Transmit random codewords instead of the all-zero word (encoder
    /// derived by GF(2) elimination; intended for symmetry validation).
    pub random_codewords: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { workers: 0, measure_timing: true, random_codewords: false }
    }
}

fn effective_workers(requested: usize) -> usize {
    if requested > 0 {
        return requested;
    }
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// Accumulated statistics of one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub decoder: String,
    pub ebn0_db: f64,
    pub frames: u64,
    pub error_frames: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub mean_iterations: f64,
    /// Mean wall-clock decode seconds per frame (0 when timing is off).
    pub mean_time_s: f64,
    pub seed: u64,
}

/// Run configuration snapshot written to the JSON sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepContext {
    pub code_name: String,
    pub n: usize,
    pub m: usize,
    pub rate: f64,
    pub decoder: DecoderChoice,
    pub master_seed: u64,
    pub ebn0_points: Vec<f64>,
    pub stop: StopCondition,
    pub options: SimOptions,
}

// ---------------------------------------------------------------------------
// Frame simulation
// ---------------------------------------------------------------------------

struct FrameOutcome {
    is_error: bool,
    bit_errors: u32,
    iterations: u32,
    seconds: f64,
}

fn simulate_frame(
    decoder: &mut dyn FrameDecoder,
    n: usize,
    sigma2: f64,
    frame_seed: u64,
    basis: Option<&[BitVector]>,
    measure_timing: bool,
) -> FrameOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(frame_seed);
    let tx = match basis {
        None => BitVector::zeros(n),
        Some(basis) => {
            // Codeword bits are drawn before any noise so both transmit
            // modes consume the stream in a fixed order.
            let mut x = BitVector::zeros(n);
            for b in basis {
                if rng.next_u64() & 1 == 1 {
                    x.xor_assign(b);
                }
            }
            x
        }
    };
    let sigma = sigma2.sqrt();
    let mut gauss = GaussianSource::from_rng(rng);
    let mut llrs = Vec::with_capacity(n);
    for i in 0..n {
        let symbol = 1.0 - 2.0 * f64::from(tx.bit(i));
        let received = symbol + sigma * gauss.next_normal();
        llrs.push(2.0 * received / sigma2);
    }

    let started = if measure_timing { Some(Instant::now()) } else { None };
    let result = decoder.decode_frame(&llrs);
    let seconds = started.map_or(0.0, |t| t.elapsed().as_secs_f64());

    let bit_errors = result.bits.hamming_distance(&tx) as u32;
    FrameOutcome { is_error: bit_errors > 0, bit_errors, iterations: result.iterations as u32, seconds }
}

// ---------------------------------------------------------------------------
// Point and sweep drivers
// ---------------------------------------------------------------------------

const CHUNK_FRAMES: u64 = 256;

/// Simulate one SNR point. Frames are dispatched in chunks across the
/// worker pool; the statistics cover exactly the frames `0..=f*`, where
/// `f*` is the smallest index at which a stop condition is met, so the
/// record does not depend on the worker count.
pub fn run_point(
    h: &ParityCheckMatrix,
    choice: &DecoderChoice,
    chan: &ChannelConfig,
    point_index: u64,
    stop: &StopCondition,
    opts: &SimOptions,
) -> SimRecord {
    let sigma2 = chan.sigma2();
    let n = h.n();
    let basis = opts.random_codewords.then(|| nullspace_basis(h));
    let basis_ref = basis.as_deref();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_workers(opts.workers))
        .build()
        .expect("worker pool");

    let mut frames = 0u64;
    let mut error_frames = 0u64;
    let mut bit_errors = 0u64;
    let mut iteration_sum = 0u64;
    let mut seconds_sum = 0.0f64;

    'chunks: while frames < stop.max_frames {
        let chunk_end = (frames + CHUNK_FRAMES).min(stop.max_frames);
        let outcomes: Vec<FrameOutcome> = pool.install(|| {
            (frames..chunk_end)
                .into_par_iter()
                .map_init(
                    || choice.build(h),
                    |decoder, frame| {
                        let frame_seed = derive_frame_seed(chan.seed, point_index, frame);
                        simulate_frame(
                            decoder.as_mut(),
                            n,
                            sigma2,
                            frame_seed,
                            basis_ref,
                            opts.measure_timing,
                        )
                    },
                )
                .collect()
        });
        for outcome in &outcomes {
            frames += 1;
            bit_errors += u64::from(outcome.bit_errors);
            iteration_sum += u64::from(outcome.iterations);
            seconds_sum += outcome.seconds;
            if outcome.is_error {
                error_frames += 1;
                if stop.target_error_frames.is_some_and(|t| error_frames >= t) {
                    break 'chunks;
                }
            }
        }
    }

    let frames_f = frames as f64;
    SimRecord {
        decoder: choice.id().to_string(),
        ebn0_db: chan.ebn0_db,
        frames,
        error_frames,
        bit_errors,
        fer: error_frames as f64 / frames_f,
        ber: bit_errors as f64 / (frames_f * n as f64),
        mean_iterations: iteration_sum as f64 / frames_f,
        mean_time_s: seconds_sum / frames_f,
        seed: chan.seed,
    }
}

/// Simulate a list of Eb/N0 points (sorted ascending), one record each.
pub fn run_sweep(
    h: &ParityCheckMatrix,
    choice: &DecoderChoice,
    master_seed: u64,
    ebn0_points: &[f64],
    stop: &StopCondition,
    opts: &SimOptions,
) -> Vec<SimRecord> {
    let mut points = ebn0_points.to_vec();
    points.sort_by(|a, b| a.partial_cmp(b).expect("Eb/N0 values must be comparable"));
    points
        .iter()
        .enumerate()
        .map(|(index, &ebn0_db)| {
            let chan = ChannelConfig::new(ebn0_db, h.rate(), master_seed);
            run_point(h, choice, &chan, index as u64, stop, opts)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Result emission
// ---------------------------------------------------------------------------

pub const CSV_HEADER: &str = "decoder,ebn0_db,frames,error_frames,fer,ber,mean_iterations,mean_time_s,seed";

/// Fixed-column CSV; floats print in shortest round-trip form, so parsing
/// the file back reproduces the numbers exactly.
pub fn csv_string(records: &[SimRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.decoder,
            r.ebn0_db,
            r.frames,
            r.error_frames,
            r.fer,
            r.ber,
            r.mean_iterations,
            r.mean_time_s,
            r.seed
        ));
    }
    out
}

/// Parse a CSV produced by [`csv_string`]. Bit-error counts are not part
/// of the CSV schema and come back as 0.
pub fn parse_csv(text: &str) -> Result<Vec<SimRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(format!("unexpected CSV header: {other:?}")),
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(format!("line {}: expected 9 fields, found {}", lineno + 2, fields.len()));
        }
        let parse_f = |s: &str| s.parse::<f64>().map_err(|e| format!("line {}: {e}", lineno + 2));
        let parse_u = |s: &str| s.parse::<u64>().map_err(|e| format!("line {}: {e}", lineno + 2));
        records.push(SimRecord {
            decoder: fields[0].to_string(),
            ebn0_db: parse_f(fields[1])?,
            frames: parse_u(fields[2])?,
            error_frames: parse_u(fields[3])?,
            bit_errors: 0,
            fer: parse_f(fields[4])?,
            ber: parse_f(fields[5])?,
            mean_iterations: parse_f(fields[6])?,
            mean_time_s: parse_f(fields[7])?,
            seed: parse_u(fields[8])?,
        });
    }
    Ok(records)
}

/// Write the CSV and a JSON sidecar holding the full configuration
/// snapshot next to the records.
pub fn emit_results(
    records: &[SimRecord],
    context: &SweepContext,
    csv_path: &Path,
    json_path: &Path,
) -> std::io::Result<()> {
    let mut csv = std::fs::File::create(csv_path)?;
    csv.write_all(csv_string(records).as_bytes())?;
    let sidecar = serde_json::json!({
        "config": context,
        "records": records,
    });
    let mut json = std::fs::File::create(json_path)?;
    json.write_all(serde_json::to_string_pretty(&sidecar).expect("serializable sidecar").as_bytes())?;
    json.write_all(b"\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
