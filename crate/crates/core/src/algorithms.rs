//! Matrix-vector and matrix-matrix drivers over any [`Mvp`] backend.
//!
//! [`matvec`] runs one full pass: load the vector, bring column activation in
//! line with it, set the output row by row, report it, and reset the output
//! mechanism for the next pass. [`matmul`] loads `A` once and then runs one
//! such pass per column of `B`, collecting the reported vectors as the
//! columns of the product.
//!
//! Under the unit cost constants a pass costs at most
//! `n` (vector) + `2n` (scan and toggles) + `2n` (ladder moves or light
//! observations, and switches) + `n` (report) + `2n` (reset) = [`matvec_budget`],
//! and a product at most `n^2 + n * 8n` = [`matmul_budget`] from a machine
//! whose columns are all inactive.

use crate::axis_ladder::PASS_PHASES;
use crate::bits::{BitMatrix, BitVector};
use crate::machine::{Backend, MachineError, Mode, Mvp, OpLog};

/// Outcome of one driver run together with the operations it consumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport<R> {
    pub result: R,
    pub ops: OpLog,
    pub backend: Backend,
    pub mode: Mode,
    pub n: usize,
}

pub type MatvecReport = RunReport<BitVector>;
pub type MatmulReport = RunReport<BitMatrix>;

pub fn matvec_budget(n: usize) -> u64 {
    8 * n as u64
}

pub fn matmul_budget(n: usize) -> u64 {
    9 * (n as u64) * (n as u64)
}

/// Upper bound on parallel steps for a product in parallel mode.
pub fn matmul_phase_budget(n: usize) -> u64 {
    (PASS_PHASES + 2) * n as u64
}

/// One matrix-vector pass against the matrix already held by `machine`.
pub fn matvec<M: Mvp + ?Sized>(
    machine: &mut M,
    v: &BitVector,
) -> Result<MatvecReport, MachineError> {
    if machine.n() != v.n() {
        return Err(MachineError::DimensionMismatch {
            expected: machine.n(),
            found: v.n(),
        });
    }
    let before = machine.oplog().clone();
    machine.load_vector(v)?;
    let result = procedure(machine)?;
    machine.reset_output()?;
    Ok(RunReport {
        result,
        ops: machine.oplog().since(&before),
        backend: machine.backend(),
        mode: machine.mode(),
        n: machine.n(),
    })
}

/// The two loops of the matrix-vector procedure: activate/deactivate the
/// columns against the loaded vector, then set every output coordinate.
fn procedure<M: Mvp + ?Sized>(machine: &mut M) -> Result<BitVector, MachineError> {
    machine.sync_columns()?;
    machine.set_output()?;
    machine.report_output()
}

/// Boolean product `A * B` computed column by column on `machine`.
pub fn matmul<M: Mvp + ?Sized>(
    machine: &mut M,
    a: &BitMatrix,
    b: &BitMatrix,
) -> Result<MatmulReport, MachineError> {
    let n = machine.n();
    for found in [a.n(), b.n()] {
        if found != n {
            return Err(MachineError::DimensionMismatch { expected: n, found });
        }
    }
    let before = machine.oplog().clone();
    machine.load_matrix(a)?;
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        columns.push(matvec(machine, &b.column(j))?.result);
    }
    let result = BitMatrix::from_columns(&columns).expect("n columns of length n");
    Ok(RunReport {
        result,
        ops: machine.oplog().since(&before),
        backend: machine.backend(),
        mode: machine.mode(),
        n,
    })
}
