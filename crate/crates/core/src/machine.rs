//! The matrix-vector processor contract shared by every backend, and the
//! operation ledger both backends charge into.
//!
//! A processor holds an `n x n` input array, an input vector and an output
//! vector. It exposes six operations (load matrix, load vector, synchronise
//! column activation with the vector, set the output, report the output,
//! reset the output), each with a budget in counted mechanical operations:
//!
//! | operation        | budget        |
//! |------------------|---------------|
//! | `load_matrix`    | `n^2 + n`     |
//! | `load_vector`    | `n`           |
//! | `sync_columns`   | `2n`          |
//! | `set_output`     | `2n`          |
//! | `report_output`  | `n`           |
//! | `reset_output`   | `2n`          |
//!
//! Within one pass the calls must come in the order
//! `load_vector -> sync_columns -> set_output -> report_output -> reset_output`.
//! Calls out of order fail with [`MachineError::State`].

use std::fmt;

use thiserror::Error;

use crate::bits::{BitMatrix, BitVector};

/// Kind of a counted mechanical primitive. Every primitive a backend executes
/// increments exactly one category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpCategory {
    ColumnActivate,
    ColumnDeactivate,
    ScanStep,
    LadderMove,
    OutputSwitch,
    LightObserve,
    WallShift,
    CellLoad,
    VectorCoordLoad,
    OutputCoordReport,
    ResetStep,
}

impl OpCategory {
    pub const COUNT: usize = 11;

    pub const ALL: [OpCategory; Self::COUNT] = [
        OpCategory::ColumnActivate,
        OpCategory::ColumnDeactivate,
        OpCategory::ScanStep,
        OpCategory::LadderMove,
        OpCategory::OutputSwitch,
        OpCategory::LightObserve,
        OpCategory::WallShift,
        OpCategory::CellLoad,
        OpCategory::VectorCoordLoad,
        OpCategory::OutputCoordReport,
        OpCategory::ResetStep,
    ];

    /// Column name used in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            OpCategory::ColumnActivate => "column_activate",
            OpCategory::ColumnDeactivate => "column_deactivate",
            OpCategory::ScanStep => "scan_step",
            OpCategory::LadderMove => "ladder_move",
            OpCategory::OutputSwitch => "output_switch",
            OpCategory::LightObserve => "light_observe",
            OpCategory::WallShift => "wall_shift",
            OpCategory::CellLoad => "cell_load",
            OpCategory::VectorCoordLoad => "vector_coord_load",
            OpCategory::OutputCoordReport => "output_coord_report",
            OpCategory::ResetStep => "reset_step",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for OpCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Categorised tally of executed operations.
///
/// `total` is kept separately from the per-category counts so that the
/// conservation law (`total == sum of categories`) is a real check rather than
/// a tautology. In parallel mode every parallel step is recorded as a phase
/// together with the number of operations charged while it was open.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpLog {
    counts: [u64; OpCategory::COUNT],
    total: u64,
    phase_ops: Vec<u64>,
    phase_open: bool,
}

impl OpLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, category: OpCategory, ops: u64) {
        self.counts[category.index()] += ops;
        self.total += ops;
        if self.phase_open {
            if let Some(last) = self.phase_ops.last_mut() {
                *last += ops;
            }
        }
    }

    /// Opens a parallel phase. Operations charged until [`OpLog::end_phase`]
    /// are attributed to it.
    pub fn begin_phase(&mut self) {
        assert!(!self.phase_open, "parallel phases do not nest");
        self.phase_ops.push(0);
        self.phase_open = true;
    }

    pub fn end_phase(&mut self) {
        assert!(self.phase_open, "no parallel phase is open");
        self.phase_open = false;
    }

    pub fn count(&self, category: OpCategory) -> u64 {
        self.counts[category.index()]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of parallel steps consumed; zero for purely sequential runs.
    pub fn parallel_phases(&self) -> u64 {
        self.phase_ops.len() as u64
    }

    /// Operations charged within each parallel phase, in order.
    pub fn phase_ops(&self) -> &[u64] {
        &self.phase_ops
    }

    pub fn max_phase_ops(&self) -> u64 {
        self.phase_ops.iter().copied().max().unwrap_or(0)
    }

    /// Column activations plus deactivations.
    pub fn toggles(&self) -> u64 {
        self.count(OpCategory::ColumnActivate) + self.count(OpCategory::ColumnDeactivate)
    }

    pub fn is_consistent(&self) -> bool {
        self.counts.iter().sum::<u64>() == self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (OpCategory, u64)> + '_ {
        OpCategory::ALL.iter().map(|&c| (c, self.count(c)))
    }

    /// Operations performed since `earlier`, a previous snapshot of the same
    /// log.
    pub fn since(&self, earlier: &OpLog) -> OpLog {
        assert!(
            earlier.phase_ops.len() <= self.phase_ops.len() && earlier.total <= self.total,
            "snapshot is not an ancestor of this log"
        );
        let mut counts = [0; OpCategory::COUNT];
        for (k, slot) in counts.iter_mut().enumerate() {
            *slot = self.counts[k] - earlier.counts[k];
        }
        // A phase still open in `earlier` may have grown since.
        let mut phase_ops = self.phase_ops[earlier.phase_ops.len()..].to_vec();
        if earlier.phase_open {
            let k = earlier.phase_ops.len() - 1;
            phase_ops.insert(0, self.phase_ops[k] - earlier.phase_ops[k]);
        }
        OpLog {
            counts,
            total: self.total - earlier.total,
            phase_ops,
            phase_open: self.phase_open,
        }
    }
}

/// Runs `body` inside one parallel phase of `log`.
pub(crate) fn in_phase<T>(log: &mut OpLog, body: impl FnOnce(&mut OpLog) -> T) -> T {
    log.begin_phase();
    let out = body(log);
    log.end_phase();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sequential => "seq",
            Mode::Parallel => "par",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Rotating axes with segments, sliding ladders.
    AxisLadder,
    /// Sliding windowed walls, light beams.
    WallLight,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::AxisLadder => "axis",
            Backend::WallLight => "wall",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("dimension mismatch: machine has n = {expected}, input has n = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} {index} out of range for n = {n}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        n: usize,
    },
    #[error("{op}: {reason}")]
    State { op: &'static str, reason: String },
    #[error("the {backend} backend has no {mode} mode")]
    UnsupportedMode { backend: Backend, mode: Mode },
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

impl MachineError {
    pub(crate) fn state(op: &'static str, reason: impl Into<String>) -> Self {
        MachineError::State {
            op,
            reason: reason.into(),
        }
    }
}

/// The abstract matrix-vector processor.
///
/// Read-only inspection methods (`matrix`, `is_active`, `output`, ...) look at
/// the machine state without charging operations; everything else charges
/// its primitives into [`Mvp::oplog`].
pub trait Mvp {
    fn n(&self) -> usize;
    fn backend(&self) -> Backend;
    fn mode(&self) -> Mode;

    /// Reads `a` into the input array and deactivates every column.
    fn load_matrix(&mut self, a: &BitMatrix) -> Result<(), MachineError>;
    /// Reads `v` into the input vector. Column activation is left untouched.
    fn load_vector(&mut self, v: &BitVector) -> Result<(), MachineError>;
    /// Makes column `j` active exactly when coordinate `j` of the input vector
    /// is 1.
    fn sync_columns(&mut self) -> Result<(), MachineError>;
    /// Sets output coordinate `i` to 1 exactly when row `i` has a 1 in an
    /// active column.
    fn set_output(&mut self) -> Result<(), MachineError>;
    /// Non-destructive read of the output vector.
    fn report_output(&mut self) -> Result<BitVector, MachineError>;
    /// Restores the output mechanism to its initial state. Matrix content and
    /// column activation are unchanged.
    fn reset_output(&mut self) -> Result<(), MachineError>;

    fn oplog(&self) -> &OpLog;
    /// Returns the tally so far and starts a fresh one.
    fn take_oplog(&mut self) -> OpLog;

    fn matrix(&self) -> BitMatrix;
    fn input_vector(&self) -> Option<&BitVector>;
    fn is_active(&self, j: usize) -> bool;
    /// Current state of the output vector representation.
    fn output(&self) -> BitVector;

    fn active_set(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.is_active(j)).collect()
    }
}

impl<M: Mvp + ?Sized> Mvp for Box<M> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn backend(&self) -> Backend {
        (**self).backend()
    }
    fn mode(&self) -> Mode {
        (**self).mode()
    }
    fn load_matrix(&mut self, a: &BitMatrix) -> Result<(), MachineError> {
        (**self).load_matrix(a)
    }
    fn load_vector(&mut self, v: &BitVector) -> Result<(), MachineError> {
        (**self).load_vector(v)
    }
    fn sync_columns(&mut self) -> Result<(), MachineError> {
        (**self).sync_columns()
    }
    fn set_output(&mut self) -> Result<(), MachineError> {
        (**self).set_output()
    }
    fn report_output(&mut self) -> Result<BitVector, MachineError> {
        (**self).report_output()
    }
    fn reset_output(&mut self) -> Result<(), MachineError> {
        (**self).reset_output()
    }
    fn oplog(&self) -> &OpLog {
        (**self).oplog()
    }
    fn take_oplog(&mut self) -> OpLog {
        (**self).take_oplog()
    }
    fn matrix(&self) -> BitMatrix {
        (**self).matrix()
    }
    fn input_vector(&self) -> Option<&BitVector> {
        (**self).input_vector()
    }
    fn is_active(&self, j: usize) -> bool {
        (**self).is_active(j)
    }
    fn output(&self) -> BitVector {
        (**self).output()
    }
}

/// Builds a machine of the given kind.
pub fn build(backend: Backend, mode: Mode, n: usize) -> Result<Box<dyn Mvp + Send>, MachineError> {
    Ok(match backend {
        Backend::AxisLadder => Box::new(crate::axis_ladder::AxisLadderMvp::new(n, mode)?),
        Backend::WallLight => Box::new(crate::wall_light::WallLightMvp::new(n, mode)?),
    })
}

/// Pass bookkeeping common to both backends: what has been loaded, whether
/// column activation reflects the current vector, and whether the output has
/// been set since the last reset.
#[derive(Debug, Clone, Default)]
pub(crate) struct PassState {
    pub matrix_loaded: bool,
    pub input: Option<BitVector>,
    pub synced: bool,
    pub output_set: bool,
}

impl PassState {
    pub fn check_dim(n: usize, found: usize) -> Result<(), MachineError> {
        if n == found {
            Ok(())
        } else {
            Err(MachineError::DimensionMismatch { expected: n, found })
        }
    }

    pub fn require_sync_ready(&self, op: &'static str) -> Result<&BitVector, MachineError> {
        if !self.matrix_loaded {
            return Err(MachineError::state(op, "no matrix loaded"));
        }
        self.input
            .as_ref()
            .ok_or_else(|| MachineError::state(op, "no input vector loaded"))
    }

    pub fn require_output_ready(&self, op: &'static str) -> Result<(), MachineError> {
        if !self.synced {
            return Err(MachineError::state(
                op,
                "column activation is not synchronised with the current input vector",
            ));
        }
        if self.output_set {
            return Err(MachineError::state(
                op,
                "output already set; reset it first",
            ));
        }
        Ok(())
    }

    pub fn require_output_set(&self, op: &'static str) -> Result<(), MachineError> {
        if self.output_set {
            Ok(())
        } else {
            Err(MachineError::state(op, "output has not been set"))
        }
    }
}

pub(crate) fn check_index(what: &'static str, index: usize, n: usize) -> Result<(), MachineError> {
    if index < n {
        Ok(())
    } else {
        Err(MachineError::IndexOutOfRange {
            what,
            index: index + 1,
            n,
        })
    }
}
