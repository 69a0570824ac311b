//! Command-line interface.
//!
//! Exit codes: 0 success, 1 computation or verification failure, 2 usage
//! error (including malformed expressions).

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{emit_table, run_bench, BenchPlan, TableFormat, DEFAULT_DIM_CAP, DEFAULT_TRIALS};
use crate::blades::{blade_product, blade_to_name, Signature};
use crate::engines::{multiply, EngineConfig, EngineKind, SplitRule, Threads, DEFAULT_PACKSIZE};
use crate::multivector::Multivector;
use crate::parse::parse;
use crate::scalar::{Coefficient, Rational};
use crate::selftest::{run_selftest, SUM_EXPECTED, SUM_TOP};
use crate::verify::{
    check_all_signatures, cross_check_engines, exhaustive_pair_count, faulty_blade_product,
    BladeProductFn, MAX_EXHAUSTIVE_DIM,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(
    name = "cliffmul",
    version,
    about = "Clifford algebra products in Cl(p,q) with Walsh-function blade signs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Signature `p,q` of the quadratic form.
    #[arg(long, global = true, default_value = "3,0", value_parser = parse_signature)]
    pub sig: Signature,
    /// Product engine.
    #[arg(long, global = true, default_value = "walsh-seq", value_parser = parse_engine)]
    pub engine: EngineKind,
    /// Leaf size of the task engine.
    #[arg(long, global = true, default_value_t = DEFAULT_PACKSIZE, value_parser = parse_packsize)]
    pub packsize: usize,
    /// Worker threads, or `auto` for the number of hardware threads.
    #[arg(long, global = true, env = "CLIFFMUL_THREADS", default_value = "auto", value_parser = parse_threads)]
    pub threads: Threads,
    /// Derive packsize from input size and thread count.
    #[arg(long, global = true)]
    pub dynamic_packsize: bool,
    /// Where the task engine splits an oversized term list.
    #[arg(long, global = true, default_value = "packsize", value_parser = parse_split)]
    pub split: SplitRule,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Coefficient ring for `mul`.
    #[arg(long, global = true, value_enum, default_value_t = CoeffArg::Exact)]
    pub coeff: CoeffArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two Clifford polynomials.
    Mul {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Check blade signs against the reordering oracle and cross-check engines.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_dim: u32,
        /// Random polynomial pairs per signature for the engine cross-checks.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, hide = true)]
        inject_sign_fault: bool,
    },
    /// Time engines on most-general polynomials.
    Bench {
        /// Dimension range `a..b` (inclusive) or a single dimension.
        #[arg(long, default_value = "2..7", value_parser = parse_dims)]
        dims: RangeInclusive<u32>,
        /// Comma-separated engine names; the first is the ratio reference.
        #[arg(long, default_value = "walsh-seq,walsh-par-tasks", value_delimiter = ',', value_parser = parse_engine)]
        engines: Vec<EngineKind>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: u32,
    },
    /// Parallel summation smoke test and hardware thread report.
    Selftest,
}

fn parse_signature(s: &str) -> Result<Signature, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_engine(s: &str) -> Result<EngineKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_threads(s: &str) -> Result<Threads, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_split(s: &str) -> Result<SplitRule, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_packsize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("invalid packsize `{s}` (expected a positive integer)")),
    }
}

fn parse_dims(s: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("invalid dimension range `{s}` (expected `a..b` or `a`)");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// Parses arguments and runs one subcommand, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    // Resolved once; every engine below sees the same fixed count.
    let threads = Threads::fixed(cli.global.threads.resolve()).expect("at least one thread");
    let cfg = EngineConfig::new(cli.global.engine)
        .with_packsize(cli.global.packsize)
        .expect("packsize validated by clap")
        .with_threads(threads)
        .with_dynamic_packsize(cli.global.dynamic_packsize)
        .with_split(cli.global.split);

    match cli.command {
        Command::Mul { x, y } => match cli.global.coeff {
            CoeffArg::Exact => cmd_mul::<Rational>(&cli.global, &cfg, &x, &y, out, err),
            CoeffArg::Float => cmd_mul::<f64>(&cli.global, &cfg, &x, &y, out, err),
        },
        Command::Verify {
            max_dim,
            samples,
            inject_sign_fault,
        } => {
            let product: BladeProductFn = if inject_sign_fault {
                faulty_blade_product
            } else {
                blade_product
            };
            cmd_verify(max_dim, samples, cli.global.seed, &cfg, product, out, err)
        }
        Command::Bench {
            dims,
            engines,
            trials,
            dim_cap,
        } => {
            let mut plan = BenchPlan::new(dims, engines);
            plan.config = cfg;
            plan.trials = trials;
            plan.seed = cli.global.seed;
            plan.dim_cap = dim_cap;
            cmd_bench(&plan, cli.global.format, out, err)
        }
        Command::Selftest => cmd_selftest(threads.resolve(), out, err),
    }
}

fn cmd_mul<C: Coefficient>(
    global: &GlobalArgs,
    cfg: &EngineConfig,
    x: &str,
    y: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let parsed = parse::<C>(x, global.sig).and_then(|x| Ok((x, parse::<C>(y, global.sig)?)));
    let (x, y) = match parsed {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let product = match multiply(&x, &y, cfg) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let _ = out.write_all(render_product(&product, global.format).as_bytes());
    EXIT_OK
}

fn render_product<C: Coefficient>(x: &Multivector<C>, format: OutputFormat) -> String {
    let coeff = |c: &C| {
        if c.is_negative() {
            format!("-{}", c.render_abs())
        } else {
            c.render_abs()
        }
    };
    match format {
        OutputFormat::Text => format!("{x}\n"),
        OutputFormat::Csv => {
            let mut s = String::from("coeff,monomial\n");
            for t in x.terms() {
                s.push_str(&format!("{},{}\n", coeff(&t.coeff), blade_to_name(t.blade)));
            }
            s
        }
        OutputFormat::Md => {
            let mut s = String::from("| coeff | monomial |\n|---:|:---|\n");
            for t in x.terms() {
                s.push_str(&format!("| {} | {} |\n", coeff(&t.coeff), blade_to_name(t.blade)));
            }
            s
        }
    }
}

fn cmd_verify(
    max_dim: u32,
    samples: usize,
    seed: u64,
    cfg: &EngineConfig,
    product: BladeProductFn,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if max_dim > MAX_EXHAUSTIVE_DIM {
        let _ = writeln!(
            err,
            "error: --max-dim {max_dim} exceeds the exhaustive limit of {MAX_EXHAUSTIVE_DIM}"
        );
        return EXIT_USAGE;
    }
    let total = exhaustive_pair_count(max_dim);
    match check_all_signatures(max_dim, product) {
        Ok(n) => {
            debug_assert_eq!(n, total);
            let _ = writeln!(out, "all {n} blade pairs verified");
        }
        Err(m) => {
            let _ = writeln!(out, "blade sign check FAILED");
            let _ = writeln!(err, "mismatch: {m}");
            return EXIT_FAILURE;
        }
    }
    match cross_check_engines(max_dim, samples, seed, cfg) {
        Ok(n) => {
            let _ = writeln!(out, "all {n} engine products agree with the oracle");
            EXIT_OK
        }
        Err(m) => {
            let _ = writeln!(out, "engine cross-check FAILED");
            let _ = writeln!(err, "mismatch: {m}");
            EXIT_FAILURE
        }
    }
}

fn cmd_bench(plan: &BenchPlan, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let report = match run_bench(plan) {
        Ok(r) => r,
        Err(e @ crate::bench::BenchError::Mismatch { .. }) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    if report.records.iter().any(|r| r.wall_only) {
        let _ = writeln!(err, "warning: process CPU time unavailable, effective cores estimated");
    }
    let table = match format {
        OutputFormat::Csv => TableFormat::Csv,
        OutputFormat::Md | OutputFormat::Text => TableFormat::Markdown,
    };
    let _ = out.write_all(emit_table(&report.records, table).as_bytes());
    EXIT_OK
}

fn cmd_selftest(threads: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let report = run_selftest(threads);
    let _ = writeln!(out, "threads: {}", report.threads);
    let _ = writeln!(
        out,
        "hardware threads: {} logical, {} physical",
        report.logical_cpus, report.physical_cpus
    );
    let _ = writeln!(out, "sequential sum 1..{SUM_TOP}: {}", report.sequential);
    let _ = writeln!(out, "task sum 1..{SUM_TOP}: {}", report.tasks);
    let _ = writeln!(out, "flat sum 1..{SUM_TOP}: {}", report.flat);
    if report.passed() {
        let _ = writeln!(out, "selftest passed");
        EXIT_OK
    } else {
        let _ = writeln!(err, "selftest FAILED: expected {SUM_EXPECTED}");
        EXIT_FAILURE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["cliffmul"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn dims_ranges() {
        assert_eq!(parse_dims("2..7"), Ok(2..=7));
        assert_eq!(parse_dims("2..=7"), Ok(2..=7));
        assert_eq!(parse_dims("9"), Ok(9..=9));
        assert!(parse_dims("7..2").is_err());
        assert!(parse_dims("a..2").is_err());
    }

    #[test]
    fn mul_formats() {
        let (code, out, _) = run_str(&["--sig", "3,0", "--format", "csv", "mul", "2*e1", "e2 - 1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "coeff,monomial\n-2,e1\n2,e1we2\n");
        let (_, out, _) = run_str(&["--format", "md", "mul", "e1", "e1"]);
        assert_eq!(out, "| coeff | monomial |\n|---:|:---|\n| 1 | Id |\n");
        let (_, out, _) = run_str(&["--coeff", "float", "mul", "0.5*e1", "e1"]);
        assert_eq!(out, "0.5*Id\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["--bogus", "selftest"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--threads", "0", "selftest"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--packsize", "0", "mul", "e1", "e1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--engine", "cmulRS", "mul", "e1", "e1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--sig", "40,0", "mul", "e1", "e1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "--max-dim", "13"]).0, EXIT_USAGE);
        assert_eq!(run_str(&[]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }
}
