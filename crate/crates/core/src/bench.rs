//! Seeded random instances and the op-count CSV.
//!
//! Instances depend only on `(seed, n, trial)`: each gets its own ChaCha8
//! stream, so the same seed yields the same matrices for every backend and
//! mode, and sizes can run concurrently without changing the output.

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algorithms::{matmul, MatmulReport};
use crate::bits::{oracle_matmul, BitMatrix, BitVector};
use crate::machine::{build, Backend, MachineError, Mode, OpCategory, OpLog};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("n = {n}, {backend}/{mode}, trial {trial}: product differs from the oracle")]
    Mismatch {
        n: usize,
        backend: Backend,
        mode: Mode,
        trial: u64,
        a: BitMatrix,
        b: BitMatrix,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Generator for one instance stream.
pub fn instance_rng(seed: u64, n: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) ^ trial);
    rng
}

/// Each cell is independently 1 with probability `density`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, density: f64) -> BitMatrix {
    BitMatrix::from_fn(n, |_, _| rng.gen_bool(density)).expect("n >= 1")
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, density: f64) -> BitVector {
    BitVector::from_fn(n, |_| rng.gen_bool(density)).expect("n >= 1")
}

/// `(A, B)` for trial `trial` at size `n`.
pub fn instance(seed: u64, n: usize, trial: u64, density: f64) -> (BitMatrix, BitMatrix) {
    let mut rng = instance_rng(seed, n, trial);
    let a = random_matrix(&mut rng, n, density);
    let b = random_matrix(&mut rng, n, density);
    (a, b)
}

/// One CSV row: a single product on one machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub backend: Backend,
    pub mode: Mode,
    pub ops: OpLog,
    /// Wall-clock microseconds, or 0 when timing is off.
    pub usec: u64,
}

impl BenchRow {
    pub fn from_report(report: &MatmulReport, usec: u64) -> Self {
        Self {
            n: report.n,
            backend: report.backend,
            mode: report.mode,
            ops: report.ops.clone(),
            usec,
        }
    }

    pub fn header() -> Vec<String> {
        let mut h: Vec<String> = ["n", "backend", "mode", "total_ops"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        h.extend(OpCategory::ALL.iter().map(|c| c.name().to_string()));
        h.push("parallel_phases".into());
        h.push("usec".into());
        h
    }

    pub fn record(&self) -> Vec<String> {
        let mut r = vec![
            self.n.to_string(),
            self.backend.to_string(),
            self.mode.to_string(),
            self.ops.total().to_string(),
        ];
        r.extend(self.ops.iter().map(|(_, k)| k.to_string()));
        r.push(self.ops.parallel_phases().to_string());
        r.push(self.usec.to_string());
        r
    }
}

/// Writes rows, preceded by the header when `with_header` is set.
pub fn write_rows<W: Write>(
    out: W,
    rows: &[BenchRow],
    with_header: bool,
) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    if with_header {
        w.write_record(BenchRow::header())?;
    }
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// Machine kinds to run; unsupported combinations must already be
    /// filtered out.
    pub kinds: Vec<(Backend, Mode)>,
    pub seed: u64,
    pub trials: u64,
    pub density: f64,
    pub timing: bool,
}

/// Runs every `(size, kind, trial)` product, verifying each one against the
/// oracle. Rows come back ordered by size, then kind, then trial. Sizes run
/// concurrently.
pub fn run(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let per_size: Vec<Result<Vec<BenchRow>, BenchError>> = config
        .sizes
        .par_iter()
        .map(|&n| run_size(config, n))
        .collect();
    let mut rows = Vec::new();
    for chunk in per_size {
        rows.extend(chunk?);
    }
    Ok(rows)
}

fn run_size(config: &BenchConfig, n: usize) -> Result<Vec<BenchRow>, BenchError> {
    let instances: Vec<_> = (0..config.trials)
        .map(|t| instance(config.seed, n, t, config.density))
        .collect();
    let expected: Vec<BitMatrix> = instances
        .iter()
        .map(|(a, b)| oracle_matmul(a, b).expect("same n"))
        .collect();
    let mut rows = Vec::new();
    for &(backend, mode) in &config.kinds {
        for (trial, (a, b)) in instances.iter().enumerate() {
            let mut machine = build(backend, mode, n)?;
            let start = Instant::now();
            let report = matmul(&mut machine, a, b)?;
            let usec = if config.timing {
                start.elapsed().as_micros() as u64
            } else {
                0
            };
            if report.result != expected[trial] {
                return Err(BenchError::Mismatch {
                    n,
                    backend,
                    mode,
                    trial: trial as u64,
                    a: a.clone(),
                    b: b.clone(),
                });
            }
            rows.push(BenchRow::from_report(&report, usec));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible_and_distinct() {
        assert_eq!(instance(7, 8, 0, 0.5), instance(7, 8, 0, 0.5));
        assert_ne!(instance(7, 8, 0, 0.5), instance(7, 8, 1, 0.5));
        assert_ne!(instance(7, 8, 0, 0.5), instance(8, 8, 0, 0.5));
    }

    #[test]
    fn density_extremes() {
        let mut rng = instance_rng(1, 5, 0);
        assert_eq!(
            random_matrix(&mut rng, 5, 0.0),
            BitMatrix::zeros(5).unwrap()
        );
        assert_eq!(random_matrix(&mut rng, 5, 1.0), BitMatrix::ones(5).unwrap());
    }

    #[test]
    fn header_lists_every_category() {
        let h = BenchRow::header();
        assert_eq!(h.len(), 4 + OpCategory::COUNT + 2);
        assert_eq!(h[0], "n");
        assert_eq!(h[3], "total_ops");
        assert_eq!(h[4], "column_activate");
        assert_eq!(h[h.len() - 2], "parallel_phases");
        assert_eq!(h[h.len() - 1], "usec");
    }

    #[test]
    fn rows_follow_size_kind_trial_order() {
        let config = BenchConfig {
            sizes: vec![4, 2],
            kinds: vec![
                (Backend::AxisLadder, Mode::Parallel),
                (Backend::WallLight, Mode::Sequential),
            ],
            seed: 3,
            trials: 2,
            density: 0.5,
            timing: false,
        };
        let rows = run(&config).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.n, r.backend, r.mode)).collect();
        assert_eq!(keys.len(), 8);
        assert_eq!(keys[0], (4, Backend::AxisLadder, Mode::Parallel));
        assert_eq!(keys[2], (4, Backend::WallLight, Mode::Sequential));
        assert_eq!(keys[4], (2, Backend::AxisLadder, Mode::Parallel));
        assert!(rows.iter().all(|r| r.ops.is_consistent() && r.usec == 0));
    }
}
