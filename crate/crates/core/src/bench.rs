//! Benchmark harness: products of most-general Clifford polynomials.
//!
//! For every dimension `n` the harness builds two polynomials in `Cl(n,0)`
//! containing all `2^n` basis monomials, checks every engine against
//! `walsh-seq` on those inputs, then times each engine (one untimed warm-up
//! followed by `trials` timed runs, median reported). Wall time and process
//! CPU time are both recorded; their ratio estimates the number of cores
//! actually in use.
//!
//! Pseudorandom coefficients come from ChaCha8 seeded with `seed`, on stream
//! `2n` for the left factor and `2n + 1` for the right one. Each coefficient
//! is `±k / d` with `k` uniform in `1..=99` and `d` uniform in `1..=16`, so
//! the rational and float inputs describe the same numbers.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::blades::{blade_to_name, Signature, SignatureError};
use crate::engines::{multiply, EngineConfig, EngineKind};
use crate::multivector::{AlgebraError, Multivector, Term};
use crate::scalar::{Coefficient, Rational};

/// Largest dimension `general_polynomial` accepts unless told otherwise.
pub const DEFAULT_DIM_CAP: u32 = 20;

/// Dimensions up to this are gated with exact rational coefficients.
pub const EXACT_GATE_MAX_DIM: u32 = 9;

/// Relative tolerance of the float gate used above [`EXACT_GATE_MAX_DIM`].
pub const FLOAT_GATE_RTOL: f64 = 1e-9;

pub const DEFAULT_TRIALS: usize = 5;

pub const CSV_HEADER: &str = "dim,engine,terms_x,terms_y,blade_products,wall_seconds,cpu_seconds,effective_cores,packsize,threads,trials,seed";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("dimension {dim} exceeds the benchmark cap of {cap}")]
    DimTooLarge { dim: u32, cap: u32 },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no engines selected")]
    NoEngines,
    #[error("correctness gate failed for {engine} at dim {dim}: {diff}")]
    Mismatch {
        engine: EngineKind,
        dim: u32,
        diff: String,
    },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Where coefficients of a general polynomial come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffSource {
    Ones,
    /// ChaCha8 with this seed and stream.
    Seeded { seed: u64, stream: u64 },
}

impl CoeffSource {
    pub fn for_factor(seed: u64, dim: u32, right: bool) -> Self {
        CoeffSource::Seeded {
            seed,
            stream: 2 * u64::from(dim) + u64::from(right),
        }
    }
}

/// A polynomial containing every basis monomial of `sig` with a nonzero
/// coefficient.
pub fn general_polynomial<C: Coefficient>(
    sig: Signature,
    source: CoeffSource,
    dim_cap: u32,
) -> Result<Multivector<C>, BenchError> {
    if sig.dim() > dim_cap {
        return Err(BenchError::DimTooLarge {
            dim: sig.dim(),
            cap: dim_cap,
        });
    }
    let basis = (0..sig.basis_len()).map(|b| crate::blades::Blade(b as u32));
    let terms: Vec<Term<C>> = match source {
        CoeffSource::Ones => basis.map(|b| Term::new(C::one(), b)).collect(),
        CoeffSource::Seeded { seed, stream } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            basis
                .map(|b| {
                    let k: i64 = rng.gen_range(1..=99);
                    let d: i64 = rng.gen_range(1..=16);
                    let k = if rng.gen::<bool>() { -k } else { k };
                    Term::new(C::from_ratio(k, d), b)
                })
                .collect()
        }
    };
    Ok(Multivector::from_unsorted(sig, terms))
}

/// SHA-256 of the line-format rendering, as lowercase hex.
pub fn digest<C: Coefficient>(x: &Multivector<C>) -> String {
    let hash = Sha256::digest(x.to_lines().as_bytes());
    hash.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// One timing measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub dim: u32,
    pub signature: Signature,
    pub engine: EngineKind,
    pub terms_x: usize,
    pub terms_y: usize,
    pub blade_products: u64,
    pub wall_seconds: f64,
    pub cpu_seconds: f64,
    pub effective_cores: f64,
    /// CPU time was not measurable; `cpu_seconds` holds an estimate.
    pub wall_only: bool,
    pub trials: usize,
    pub packsize: usize,
    pub threads: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Non-fatal observations, e.g. excessive single-thread task overhead.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub dims: RangeInclusive<u32>,
    pub engines: Vec<EngineKind>,
    /// Packsize, threads and split rule for the parallel engines.
    pub config: EngineConfig,
    pub trials: usize,
    pub seed: u64,
    pub dim_cap: u32,
    pub exact_gate_max_dim: u32,
}

impl BenchPlan {
    pub fn new(dims: RangeInclusive<u32>, engines: Vec<EngineKind>) -> Self {
        Self {
            dims,
            engines,
            config: EngineConfig::default(),
            trials: DEFAULT_TRIALS,
            seed: 0,
            dim_cap: DEFAULT_DIM_CAP,
            exact_gate_max_dim: EXACT_GATE_MAX_DIM,
        }
    }
}

/// User plus system CPU time consumed by this process so far.
pub fn process_cpu_time() -> Option<Duration> {
    let mut usage = std::mem::MaybeUninit::<libc::rusage>::uninit();
    // SAFETY: getrusage fills the struct on success and we only read it then.
    let rc = unsafe { libc::getrusage(libc::RUSAGE_SELF, usage.as_mut_ptr()) };
    if rc != 0 {
        return None;
    }
    // SAFETY: rc == 0 means the kernel initialized `usage`.
    let usage = unsafe { usage.assume_init() };
    let tv = |t: libc::timeval| {
        Duration::from_secs(t.tv_sec as u64) + Duration::from_micros(t.tv_usec as u64)
    };
    Some(tv(usage.ru_utime) + tv(usage.ru_stime))
}

struct Sample {
    wall: f64,
    cpu: Option<f64>,
}

fn time_once<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
    cfg: &EngineConfig,
) -> Result<Sample, AlgebraError> {
    let cpu0 = process_cpu_time();
    let t0 = Instant::now();
    let out = multiply(x, y, cfg)?;
    let wall = t0.elapsed().as_secs_f64();
    let cpu1 = process_cpu_time();
    std::hint::black_box(out);
    Ok(Sample {
        wall: wall.max(1e-9),
        cpu: cpu0.zip(cpu1).map(|(a, b)| b.saturating_sub(a).as_secs_f64()),
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Describes the first term where two products differ.
pub fn first_difference<C: Coefficient>(
    expected: &Multivector<C>,
    got: &Multivector<C>,
    close: impl Fn(&C, &C) -> bool,
) -> Option<String> {
    let basis = expected.signature().basis();
    let zero = C::zero();
    for b in basis {
        let e = expected.coeff(b).unwrap_or(&zero);
        let g = got.coeff(b).unwrap_or(&zero);
        if !close(e, g) {
            return Some(format!(
                "{}: expected {:?}, got {:?}",
                blade_to_name(b),
                e,
                g
            ));
        }
    }
    None
}

fn float_close(scale: f64) -> impl Fn(&f64, &f64) -> bool {
    move |a, b| (a - b).abs() <= FLOAT_GATE_RTOL * scale
}

fn gate(plan: &BenchPlan, sig: Signature, xf: &Multivector<f64>, yf: &Multivector<f64>) -> Result<(), BenchError> {
    let dim = sig.dim();
    if dim <= plan.exact_gate_max_dim {
        let x: Multivector<Rational> =
            general_polynomial(sig, CoeffSource::for_factor(plan.seed, dim, false), plan.dim_cap)?;
        let y: Multivector<Rational> =
            general_polynomial(sig, CoeffSource::for_factor(plan.seed, dim, true), plan.dim_cap)?;
        let reference = multiply(&x, &y, &EngineConfig::new(EngineKind::WalshSeq))?;
        for &engine in &plan.engines {
            let got = multiply(&x, &y, &engine_config(plan, engine))?;
            if let Some(diff) = first_difference(&reference, &got, |a, b| a == b) {
                return Err(BenchError::Mismatch { engine, dim, diff });
            }
        }
    } else {
        let reference = multiply(xf, yf, &EngineConfig::new(EngineKind::WalshSeq))?;
        let scale = xf.terms().iter().map(|t| t.coeff.abs()).sum::<f64>()
            * yf.terms().iter().map(|t| t.coeff.abs()).sum::<f64>();
        for &engine in &plan.engines {
            let got = multiply(xf, yf, &engine_config(plan, engine))?;
            if let Some(diff) = first_difference(&reference, &got, float_close(scale)) {
                return Err(BenchError::Mismatch { engine, dim, diff });
            }
        }
    }
    Ok(())
}

fn engine_config(plan: &BenchPlan, engine: EngineKind) -> EngineConfig {
    let mut cfg = plan.config;
    cfg.engine = engine;
    cfg
}

/// Runs the benchmark protocol over `plan.dims` and `plan.engines`.
///
/// No record is produced for a dimension until every engine passed the
/// correctness gate on that dimension's inputs.
pub fn run_bench(plan: &BenchPlan) -> Result<BenchReport, BenchError> {
    if plan.trials == 0 {
        return Err(BenchError::NoTrials);
    }
    if plan.engines.is_empty() {
        return Err(BenchError::NoEngines);
    }
    if let Some(&dim) = plan.dims.clone().find(|&d| d > plan.dim_cap).as_ref() {
        return Err(BenchError::DimTooLarge {
            dim,
            cap: plan.dim_cap,
        });
    }
    let threads = plan.config.threads.resolve();
    let mut report = BenchReport::default();
    for dim in plan.dims.clone() {
        let sig = Signature::euclidean(dim)?;
        let x: Multivector<f64> =
            general_polynomial(sig, CoeffSource::for_factor(plan.seed, dim, false), plan.dim_cap)?;
        let y: Multivector<f64> =
            general_polynomial(sig, CoeffSource::for_factor(plan.seed, dim, true), plan.dim_cap)?;
        gate(plan, sig, &x, &y)?;

        let mut seq_wall = None;
        for &engine in &plan.engines {
            let cfg = engine_config(plan, engine);
            time_once(&x, &y, &cfg)?;
            let mut walls = Vec::with_capacity(plan.trials);
            let mut cpus = Vec::with_capacity(plan.trials);
            for _ in 0..plan.trials {
                let s = time_once(&x, &y, &cfg)?;
                walls.push(s.wall);
                cpus.extend(s.cpu);
            }
            let wall = median(&mut walls);
            let wall_only = cpus.len() != plan.trials;
            let cpu = if wall_only {
                let observed = if engine_is_parallel(engine) { threads } else { 1 };
                wall * observed as f64
            } else {
                median(&mut cpus)
            };
            match engine {
                EngineKind::WalshSeq => seq_wall = Some(wall),
                EngineKind::WalshParTasks if threads == 1 => {
                    if let Some(seq) = seq_wall {
                        if wall > 2.0 * seq {
                            report.warnings.push(format!(
                                "dim {dim}: walsh-par-tasks on 1 thread took {wall:.6}s, more than 2x walsh-seq ({seq:.6}s)"
                            ));
                        }
                    }
                }
                _ => {}
            }
            report.records.push(BenchRecord {
                dim,
                signature: sig,
                engine,
                terms_x: x.len(),
                terms_y: y.len(),
                blade_products: (x.len() as u64) * (y.len() as u64),
                wall_seconds: wall,
                cpu_seconds: cpu,
                effective_cores: cpu / wall,
                wall_only,
                trials: plan.trials,
                packsize: cfg.effective_packsize(x.len(), y.len()),
                threads: if engine_is_parallel(engine) { threads } else { 1 },
                seed: plan.seed,
            });
        }
    }
    Ok(report)
}

fn engine_is_parallel(engine: EngineKind) -> bool {
    matches!(engine, EngineKind::WalshParTasks | EngineKind::WalshParFlat)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

/// Renders records as CSV (one row per record) or as a markdown table with
/// one row per dimension, a time column per engine, and a ratio column
/// `t_engine / t_reference` after every non-reference engine. The reference
/// is the first engine listed. Missing cells read `NA`.
pub fn emit_table(records: &[BenchRecord], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => emit_csv(records),
        TableFormat::Markdown => emit_markdown(records),
    }
}

fn emit_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.9},{:.9},{:.4},{},{},{},{}",
            r.dim,
            r.engine,
            r.terms_x,
            r.terms_y,
            r.blade_products,
            r.wall_seconds,
            r.cpu_seconds,
            r.effective_cores,
            r.packsize,
            r.threads,
            r.trials,
            r.seed
        );
    }
    out
}

fn emit_markdown(records: &[BenchRecord]) -> String {
    let mut engines: Vec<EngineKind> = Vec::new();
    let mut dims: Vec<u32> = Vec::new();
    for r in records {
        if !engines.contains(&r.engine) {
            engines.push(r.engine);
        }
        if !dims.contains(&r.dim) {
            dims.push(r.dim);
        }
    }
    dims.sort_unstable();
    let time = |dim: u32, engine: EngineKind| {
        records
            .iter()
            .find(|r| r.dim == dim && r.engine == engine)
            .map(|r| r.wall_seconds)
    };

    let mut header = vec!["dim V".to_string()];
    for (k, e) in engines.iter().enumerate() {
        header.push(format!("t_{} [sec]", e));
        if k > 0 {
            header.push(format!("t_{}/t_{}", e, engines[0]));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(
        out,
        "|{}",
        header.iter().map(|_| ":---:|").collect::<String>()
    );
    for dim in dims {
        let reference = time(dim, engines[0]);
        let mut row = vec![dim.to_string()];
        for (k, &e) in engines.iter().enumerate() {
            let t = time(dim, e);
            row.push(t.map_or_else(|| "NA".to_string(), |t| format!("{t:.6}")));
            if k > 0 {
                row.push(match (t, reference) {
                    (Some(t), Some(r)) if r > 0.0 => format!("{:.2}", t / r),
                    (Some(_), Some(_)) => "inf".to_string(),
                    _ => "NA".to_string(),
                });
            }
        }
        let _ = writeln!(out, "| {} |", row.join(" | "));
    }
    out
}
