//! Command-line front end. Each `cmd_*` returns the process exit code:
//! 0 on success, 1 when a product disagrees with the oracle, 2 for bad input
//! or I/O failures.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algorithms::matmul;
use crate::bench::{self, BenchConfig, BenchError, BenchRow};
use crate::bits::{oracle_matmul, BitMatrix};
use crate::machine::{build, Backend, Mode};
use crate::selftest::{self, Factory, SelftestConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mechmvp",
    version,
    about = "Boolean matrix products on simulated mechanical matrix-vector processors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two matrix files.
    Multiply(MultiplyArgs),
    /// Run seeded random products and write op counts as CSV.
    Bench(BenchArgs),
    /// Exhaustive small-instance checks against the oracle.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Axis,
    Wall,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Axis => Backend::AxisLadder,
            BackendArg::Wall => Backend::WallLight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Seq,
    Par,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Seq => Mode::Sequential,
            ModeArg::Par => Mode::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendSel {
    Axis,
    Wall,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeSel {
    Seq,
    Par,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct MultiplyArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_enum, default_value = "axis")]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value = "seq")]
    pub mode: ModeArg,
    /// Write the product here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append an op-count row to this CSV file.
    #[arg(long)]
    pub ops: Option<PathBuf>,
    /// Compare against the definitional product; exit 1 on mismatch.
    #[arg(long)]
    pub verify: bool,
    /// Record wall-clock microseconds in the CSV row.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value = "all")]
    pub backend: BackendSel,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: ModeSel,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Probability that a random cell is 1.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Record wall-clock microseconds (makes the CSV non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = SelftestConfig::default().seed)]
    pub seed: u64,
    /// Number of random configurations for the duality check.
    #[arg(long, default_value_t = SelftestConfig::default().duality_configs)]
    pub configs: u64,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Multiply(args) => cmd_multiply(&args, out, err),
        Command::Bench(args) => cmd_bench(&args, out, err),
        Command::Selftest(args) => cmd_selftest(&args, out, err),
    }
}

fn read_matrix(path: &Path) -> Result<BitMatrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    BitMatrix::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn append_row(path: &Path, row: &BenchRow) -> Result<(), String> {
    let fail = |e: &dyn std::fmt::Display| format!("{}: {e}", path.display());
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| fail(&e))?;
    let empty = file.metadata().map_err(|e| fail(&e))?.len() == 0;
    bench::write_rows(file, std::slice::from_ref(row), empty).map_err(|e| fail(&e))
}

pub fn cmd_multiply(args: &MultiplyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (a, b) = match (read_matrix(&args.a), read_matrix(&args.b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    if a.n() != b.n() {
        let _ = writeln!(
            err,
            "error: dimension mismatch: {} has n = {}, {} has n = {}",
            args.a.display(),
            a.n(),
            args.b.display(),
            b.n()
        );
        return EXIT_INPUT;
    }
    let started = Instant::now();
    let report = match build(args.backend.into(), args.mode.into(), a.n())
        .and_then(|mut m| matmul(&mut m, &a, &b))
    {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let usec = if args.timing {
        started.elapsed().as_micros() as u64
    } else {
        0
    };

    let text = report.result.to_text();
    let written = match &args.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    if let Some(path) = &args.ops {
        if let Err(e) = append_row(path, &BenchRow::from_report(&report, usec)) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    }
    if args.verify {
        let expected = oracle_matmul(&a, &b).expect("same n");
        if expected != report.result {
            let _ = writeln!(
                err,
                "verify: product differs from the oracle\nexpected:\n{}got:\n{}",
                expected.to_text(),
                report.result.to_text()
            );
            return EXIT_MISMATCH;
        }
    }
    EXIT_OK
}

fn bench_kinds(backend: BackendSel, mode: ModeSel) -> Result<Vec<(Backend, Mode)>, String> {
    let backends: &[Backend] = match backend {
        BackendSel::Axis => &[Backend::AxisLadder],
        BackendSel::Wall => &[Backend::WallLight],
        BackendSel::All => &[Backend::AxisLadder, Backend::WallLight],
    };
    let modes: &[Mode] = match mode {
        ModeSel::Seq => &[Mode::Sequential],
        ModeSel::Par => &[Mode::Parallel],
        ModeSel::All => &[Mode::Sequential, Mode::Parallel],
    };
    let explicit = backend != BackendSel::All && mode != ModeSel::All;
    let mut kinds = Vec::new();
    for &b in backends {
        for &m in modes {
            // Only the axis machine has a parallel mode.
            if b == Backend::WallLight && m == Mode::Parallel {
                if explicit {
                    return Err("the wall backend has no par mode".into());
                }
                continue;
            }
            kinds.push((b, m));
        }
    }
    if kinds.is_empty() {
        return Err("no backend supports the requested mode".into());
    }
    Ok(kinds)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let kinds = match bench_kinds(args.backend, args.mode) {
        Ok(k) => k,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    if args.sizes.is_empty() || args.sizes.contains(&0) {
        let _ = writeln!(err, "error: sizes must be positive");
        return EXIT_INPUT;
    }
    if args.trials == 0 {
        let _ = writeln!(err, "error: --trials must be at least 1");
        return EXIT_INPUT;
    }
    if !(0.0..=1.0).contains(&args.density) {
        let _ = writeln!(err, "error: --density must lie in [0, 1]");
        return EXIT_INPUT;
    }
    // Open the destination first so an unwritable path fails before any work.
    let mut file = match &args.csv {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Some(f),
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        },
        None => None,
    };

    let config = BenchConfig {
        sizes: args.sizes.clone(),
        kinds,
        seed: args.seed,
        trials: args.trials,
        density: args.density,
        timing: args.timing,
    };
    let rows = match bench::run(&config) {
        Ok(rows) => rows,
        Err(e @ BenchError::Mismatch { .. }) => {
            let _ = writeln!(err, "error: {e}");
            if let BenchError::Mismatch { a, b, .. } = &e {
                let _ = write!(err, "A:\n{}B:\n{}", a.to_text(), b.to_text());
            }
            return EXIT_MISMATCH;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let written = match file.as_mut() {
        Some(f) => bench::write_rows(f, &rows, true),
        None => bench::write_rows(&mut *out, &rows, true),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    EXIT_OK
}

/// Runs the self-test over arbitrary machine factories; exit 1 with the
/// counterexample on stderr if any check fails.
pub fn run_selftest(
    config: &SelftestConfig,
    backends: &[(String, Factory)],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match selftest::run(config, backends, out) {
        Ok(()) => {
            let _ = writeln!(out, "selftest passed");
            EXIT_OK
        }
        Err(cx) => {
            let _ = writeln!(err, "selftest FAILED\n{cx}");
            EXIT_MISMATCH
        }
    }
}

pub fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = SelftestConfig {
        seed: args.seed,
        duality_configs: args.configs,
        ..SelftestConfig::default()
    };
    run_selftest(&config, &selftest::standard_backends(), out, err)
}
