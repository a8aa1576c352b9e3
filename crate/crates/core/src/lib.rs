//! Operation-counting simulator of mechanical matrix-vector processors.
//!
//! A matrix-vector processor holds a Boolean `n x n` array, an input vector
//! and an output vector. With unit-cost mechanical primitives it computes a
//! Boolean matrix-vector product in `O(n)` operations, and therefore a Boolean
//! matrix product in `O(n^2)` operations by running one pass per column.
//!
//! - [`bits`]: matrix and vector values, the definitional product oracle and
//!   the text format.
//! - [`machine`]: the processor contract ([`Mvp`]) and the operation ledger
//!   ([`OpLog`]).
//! - [`axis_ladder`] and [`wall_light`]: the two mechanical backends.
//! - [`algorithms`]: the matrix-vector pass and the column-by-column product.
//! - [`bench`], [`selftest`], [`cli`]: the command-line tool.

pub mod algorithms;
pub mod axis_ladder;
pub mod bench;
pub mod bits;
pub mod cli;
pub mod fixtures;
pub mod machine;
pub mod selftest;
pub mod wall_light;

pub use algorithms::{matmul, matvec, MatmulReport, MatvecReport, RunReport};
pub use axis_ladder::{AxisLadderMvp, PASS_PHASES};
pub use bits::{oracle_matmul, oracle_matvec, BitMatrix, BitVector, BitsError, ParseError};
pub use machine::{build, Backend, MachineError, Mode, Mvp, OpCategory, OpLog};
pub use wall_light::WallLightMvp;
