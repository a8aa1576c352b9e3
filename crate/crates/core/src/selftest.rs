//! Exhaustive small-instance equivalence against the oracle, and the
//! ladder/light duality check between the two backends.

use std::fmt;
use std::io::Write;

use crate::algorithms::{matmul, matvec};
use crate::axis_ladder::AxisLadderMvp;
use crate::bench::{instance_rng, random_matrix, random_vector};
use crate::bits::{oracle_matmul, oracle_matvec, BitMatrix, BitVector};
use crate::machine::{build, Backend, MachineError, Mode, Mvp};
use crate::wall_light::WallLightMvp;

/// Builds a fresh machine of dimension `n`.
pub type Factory = Box<dyn Fn(usize) -> Result<Box<dyn Mvp + Send>, MachineError> + Send + Sync>;

/// The machine kinds the self-test covers by default.
pub fn standard_backends() -> Vec<(String, Factory)> {
    [
        (Backend::AxisLadder, Mode::Sequential),
        (Backend::AxisLadder, Mode::Parallel),
        (Backend::WallLight, Mode::Sequential),
    ]
    .into_iter()
    .map(|(backend, mode)| {
        let factory: Factory = Box::new(move |n| build(backend, mode, n));
        (format!("{backend}/{mode}"), factory)
    })
    .collect()
}

#[derive(Debug, Clone)]
pub enum Failure {
    Matvec {
        a: BitMatrix,
        v: BitVector,
        expected: BitVector,
        got: BitVector,
    },
    Matmul {
        a: BitMatrix,
        b: BitMatrix,
        expected: BitMatrix,
        got: BitMatrix,
    },
    /// Row `row` (zero-based) is blocked on the ladder machine exactly when
    /// its light is seen on the wall machine.
    Duality {
        a: BitMatrix,
        active: BitVector,
        row: usize,
        blocked: bool,
        observed: bool,
    },
    Machine {
        a: BitMatrix,
        v: Option<BitVector>,
        error: MachineError,
    },
}

/// A failing case, printed in the matrix/vector text format.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub label: String,
    pub failure: Box<Failure>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failure.as_ref() {
            Failure::Matvec { a, v, expected, got } => write!(
                f,
                "{}: matvec mismatch\nA:\n{}V:\n{}expected:\n{}got:\n{}",
                self.label,
                a.to_text(),
                v.to_text(),
                expected.to_text(),
                got.to_text()
            ),
            Failure::Matmul { a, b, expected, got } => write!(
                f,
                "{}: matmul mismatch\nA:\n{}B:\n{}expected:\n{}got:\n{}",
                self.label,
                a.to_text(),
                b.to_text(),
                expected.to_text(),
                got.to_text()
            ),
            Failure::Duality {
                a,
                active,
                row,
                blocked,
                observed,
            } => write!(
                f,
                "{}: duality violated at row {} (ladder blocked = {blocked}, light observed = {observed})\nA:\n{}active:\n{}",
                self.label,
                row + 1,
                a.to_text(),
                active.to_text()
            ),
            Failure::Machine { a, v, error } => {
                write!(f, "{}: machine error: {error}\nA:\n{}", self.label, a.to_text())?;
                if let Some(v) = v {
                    write!(f, "V:\n{}", v.to_text())?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for Counterexample {}

/// Every `(A, V)` with `1 <= n <= max_n`. One machine per `A` serves all of
/// its vectors, so stale activation from the previous vector is exercised
/// too. Returns the number of cases checked.
pub fn check_matvec_exhaustive(
    label: &str,
    factory: &Factory,
    max_n: usize,
) -> Result<u64, Counterexample> {
    let mut cases = 0;
    for n in 1..=max_n {
        for aw in 0..1u64 << (n * n) {
            let a = BitMatrix::from_word(n, aw).expect("n >= 1");
            let fail = |v: Option<&BitVector>, error| Counterexample {
                label: label.to_string(),
                failure: Box::new(Failure::Machine {
                    a: a.clone(),
                    v: v.cloned(),
                    error,
                }),
            };
            let mut m = factory(n).map_err(|e| fail(None, e))?;
            m.load_matrix(&a).map_err(|e| fail(None, e))?;
            for vw in 0..1u64 << n {
                let v = BitVector::from_word(n, vw).expect("n >= 1");
                let got = matvec(&mut m, &v).map_err(|e| fail(Some(&v), e))?.result;
                let expected = oracle_matvec(&a, &v).expect("same n");
                if got != expected {
                    return Err(Counterexample {
                        label: label.to_string(),
                        failure: Box::new(Failure::Matvec {
                            a,
                            v,
                            expected,
                            got,
                        }),
                    });
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// Every `(A, B)` pair at dimension `n`, each on a fresh machine.
pub fn check_matmul_exhaustive(
    label: &str,
    factory: &Factory,
    n: usize,
) -> Result<u64, Counterexample> {
    let mut cases = 0;
    let words = 1u64 << (n * n);
    for aw in 0..words {
        let a = BitMatrix::from_word(n, aw).expect("n >= 1");
        for bw in 0..words {
            let b = BitMatrix::from_word(n, bw).expect("n >= 1");
            let fail = |error| Counterexample {
                label: label.to_string(),
                failure: Box::new(Failure::Machine {
                    a: a.clone(),
                    v: None,
                    error,
                }),
            };
            let mut m = factory(n).map_err(fail)?;
            let got = matmul(&mut m, &a, &b).map_err(fail)?.result;
            let expected = oracle_matmul(&a, &b).expect("same n");
            if got != expected {
                return Err(Counterexample {
                    label: label.to_string(),
                    failure: Box::new(Failure::Matmul {
                        a,
                        b,
                        expected,
                        got,
                    }),
                });
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Random `(A, active set)` configurations with `n` cycling through
/// `1..=max_n`. On each, row `i`'s ladder must be blocked exactly when row
/// `i`'s light is not observed. Both sides use the charged primitives
/// (`move_ladder`, `observe_light`).
pub fn check_duality(seed: u64, configs: u64, max_n: usize) -> Result<u64, Counterexample> {
    let mut rows_checked = 0;
    for c in 0..configs {
        let n = (c as usize % max_n) + 1;
        let mut rng = instance_rng(seed, n, c);
        let a = random_matrix(&mut rng, n, 0.5);
        let active = random_vector(&mut rng, n, 0.5);
        let fail = |error| Counterexample {
            label: "duality".into(),
            failure: Box::new(Failure::Machine {
                a: a.clone(),
                v: Some(active.clone()),
                error,
            }),
        };

        let mut axis = AxisLadderMvp::sequential(n).map_err(fail)?;
        let mut wall = WallLightMvp::sequential(n).map_err(fail)?;
        axis.load_matrix(&a).map_err(fail)?;
        wall.load_matrix(&a).map_err(fail)?;
        for j in (0..n).filter(|&j| active.get(j)) {
            axis.activate_column(j).map_err(fail)?;
            wall.shift_wall_down(j).map_err(fail)?;
        }
        for i in 0..n {
            let blocked = !axis.move_ladder(i).map_err(fail)?;
            let observed = wall.observe_light(i).map_err(fail)?;
            if blocked == observed {
                return Err(Counterexample {
                    label: "duality".into(),
                    failure: Box::new(Failure::Duality {
                        a,
                        active,
                        row: i,
                        blocked,
                        observed,
                    }),
                });
            }
            rows_checked += 1;
        }
    }
    Ok(rows_checked)
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestConfig {
    pub max_n: usize,
    pub matmul_n: usize,
    pub seed: u64,
    pub duality_configs: u64,
    pub duality_max_n: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            max_n: 3,
            matmul_n: 2,
            seed: 0x5eed,
            duality_configs: 1000,
            duality_max_n: 16,
        }
    }
}

/// Runs the whole suite over `backends`, writing one progress line per
/// check to `log`. Stops at the first counterexample.
pub fn run(
    config: &SelftestConfig,
    backends: &[(String, Factory)],
    log: &mut dyn Write,
) -> Result<(), Counterexample> {
    for (label, factory) in backends {
        let cases = check_matvec_exhaustive(label, factory, config.max_n)?;
        let _ = writeln!(
            log,
            "ok  {label}: matvec, all {cases} cases with n <= {}",
            config.max_n
        );
        let cases = check_matmul_exhaustive(label, factory, config.matmul_n)?;
        let _ = writeln!(
            log,
            "ok  {label}: matmul, all {cases} pairs with n = {}",
            config.matmul_n
        );
    }
    let rows = check_duality(config.seed, config.duality_configs, config.duality_max_n)?;
    let _ = writeln!(
        log,
        "ok  duality: {} configurations, {rows} rows",
        config.duality_configs
    );
    Ok(())
}
