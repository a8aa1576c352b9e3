//! Named inputs used by tests, the bench and the self-test.

use crate::algorithms::{matvec, MatvecReport};
use crate::bits::{BitMatrix, BitVector};
use crate::machine::{MachineError, Mvp};

/// The 4x4 array whose columns hold 1101, 0100, 1001 and 0101.
pub fn fig6_matrix() -> BitMatrix {
    let columns: Vec<BitVector> = [[1, 1, 0, 1], [0, 1, 0, 0], [1, 0, 0, 1], [0, 1, 0, 1]]
        .iter()
        .map(|c| BitVector::from_fn(4, |i| c[i] == 1).expect("n = 4"))
        .collect();
    BitMatrix::from_columns(&columns).expect("4 columns of length 4")
}

/// Activates the first and third columns.
pub fn fig6_vector() -> BitVector {
    BitVector::from_bits(vec![true, false, true, false]).expect("n = 4")
}

/// Column `j` is all ones for even `j` and all zeros for odd `j`, so every
/// pass over it flips every column's activation.
pub fn alternating_columns(n: usize) -> BitMatrix {
    BitMatrix::from_fn(n, |_, j| j % 2 == 0).expect("n >= 1")
}

/// Dense product fixture: all-ones `A` against [`alternating_columns`].
pub fn worst_case_matmul(n: usize) -> (BitMatrix, BitMatrix) {
    (BitMatrix::ones(n).expect("n >= 1"), alternating_columns(n))
}

/// Drives `machine` into its most expensive matrix-vector pass and returns
/// that pass: with an all-ones array and every column active, the all-zero
/// vector deactivates all `n` columns, every ladder completes its move and
/// every output section has to be switched and later switched back.
pub fn worst_case_matvec<M: Mvp + ?Sized>(machine: &mut M) -> Result<MatvecReport, MachineError> {
    let n = machine.n();
    machine.load_matrix(&BitMatrix::ones(n).expect("n >= 1"))?;
    matvec(machine, &BitVector::ones(n).expect("n >= 1"))?;
    matvec(machine, &BitVector::zeros(n).expect("n >= 1"))
}
