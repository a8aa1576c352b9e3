//! Axis-and-ladder processor.
//!
//! Each column of the input array is an axis carrying one segment per entry;
//! a segment pulled out perpendicular to the axis is a 1, a segment aligned
//! with it is a 0. Activating a column rotates its axis a quarter turn so
//! that the pulled-out segments hang down through the openings of the row
//! ladders. Each row has a ladder that is pushed one opening to the right:
//! it completes the move, and flips its output section from 1 to 0, only if
//! no segment sticks through any of its openings.
//!
//! The geometry is reduced to the protrusion predicate
//! `protrudes(i, j) = entry(i, j) && active(j)`.
//!
//! In [`Mode::Parallel`] the contract operations are grouped into parallel
//! steps: loading the vector, deactivating every column, activating the
//! columns selected by the vector, sliding all ladders at once, reporting and
//! resetting each take one step, so a full matrix-vector pass is
//! [`PASS_PHASES`] steps regardless of `n`.

use crate::bits::{BitMatrix, BitVector};
use crate::machine::{
    check_index, in_phase, Backend, MachineError, Mode, Mvp, OpCategory, OpLog, PassState,
};

/// Parallel steps in one complete matrix-vector pass.
pub const PASS_PHASES: u64 = 6;

/// One column of the input array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisColumn {
    entries: Vec<bool>,
    active: bool,
}

impl AxisColumn {
    fn new(n: usize) -> Self {
        Self {
            entries: vec![false; n],
            active: false,
        }
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    pub fn is_active(&self) -> bool {
        self.active
    }

    /// Whether the segment for row `i` sticks through its ladder opening.
    pub fn protrudes(&self, i: usize) -> bool {
        self.active && self.entries[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderPosition {
    Initial,
    Shifted,
}

#[derive(Debug, Clone)]
pub struct AxisLadderMvp {
    n: usize,
    mode: Mode,
    axes: Vec<AxisColumn>,
    ladders: Vec<LadderPosition>,
    /// Output sections; all start at 1.
    sections: Vec<bool>,
    pass: PassState,
    log: OpLog,
}

impl AxisLadderMvp {
    pub fn new(n: usize, mode: Mode) -> Result<Self, MachineError> {
        if n == 0 {
            return Err(MachineError::ZeroDimension);
        }
        Ok(Self {
            n,
            mode,
            axes: vec![AxisColumn::new(n); n],
            ladders: vec![LadderPosition::Initial; n],
            sections: vec![true; n],
            pass: PassState::default(),
            log: OpLog::new(),
        })
    }

    pub fn sequential(n: usize) -> Result<Self, MachineError> {
        Self::new(n, Mode::Sequential)
    }

    pub fn parallel(n: usize) -> Result<Self, MachineError> {
        Self::new(n, Mode::Parallel)
    }

    pub fn axis(&self, j: usize) -> &AxisColumn {
        &self.axes[j]
    }

    pub fn ladder(&self, i: usize) -> LadderPosition {
        self.ladders[i]
    }

    pub fn protrudes(&self, i: usize, j: usize) -> bool {
        self.axes[j].protrudes(i)
    }

    /// Whether some segment sticks through an opening of ladder `i`.
    pub fn is_blocked(&self, i: usize) -> bool {
        self.axes.iter().any(|axis| axis.protrudes(i))
    }

    /// Rotates axis `j` a quarter turn into the active position.
    pub fn activate_column(&mut self, j: usize) -> Result<(), MachineError> {
        check_index("column", j, self.n)?;
        if self.axes[j].active {
            return Err(MachineError::state(
                "activate_column",
                format!("column {} is already active", j + 1),
            ));
        }
        self.rotate(j, true);
        self.pass.synced = false;
        Ok(())
    }

    /// Rotates axis `j` back to the inactive position.
    pub fn deactivate_column(&mut self, j: usize) -> Result<(), MachineError> {
        check_index("column", j, self.n)?;
        if !self.axes[j].active {
            return Err(MachineError::state(
                "deactivate_column",
                format!("column {} is not active", j + 1),
            ));
        }
        self.rotate(j, false);
        self.pass.synced = false;
        Ok(())
    }

    fn rotate(&mut self, j: usize, active: bool) {
        self.axes[j].active = active;
        let category = if active {
            OpCategory::ColumnActivate
        } else {
            OpCategory::ColumnDeactivate
        };
        self.log.charge(category, 1);
    }

    /// Pushes ladder `i` one opening to the right. Returns whether the full
    /// move happened; if it did, output section `i` switched from 1 to 0.
    /// A blocked attempt is still charged one ladder move.
    pub fn move_ladder(&mut self, i: usize) -> Result<bool, MachineError> {
        check_index("row", i, self.n)?;
        if self.ladders[i] != LadderPosition::Initial {
            return Err(MachineError::state(
                "move_ladder",
                format!("ladder {} is already shifted", i + 1),
            ));
        }
        self.log.charge(OpCategory::LadderMove, 1);
        if self.is_blocked(i) {
            return Ok(false);
        }
        self.ladders[i] = LadderPosition::Shifted;
        if self.sections[i] {
            self.sections[i] = false;
            self.log.charge(OpCategory::OutputSwitch, 1);
        }
        Ok(true)
    }

    fn require_parallel(&self) -> Result<(), MachineError> {
        if self.mode == Mode::Parallel {
            Ok(())
        } else {
            Err(MachineError::UnsupportedMode {
                backend: Backend::AxisLadder,
                mode: self.mode,
            })
        }
    }

    /// Two parallel steps: withdraw the previous vector (deactivating every
    /// active column at once), then push the current one against the axis
    /// start points (activating every selected column at once). Both steps
    /// are charged even when nothing toggles.
    pub fn parallel_sync(&mut self) -> Result<(), MachineError> {
        self.require_parallel()?;
        let v = self.pass.require_sync_ready("parallel_sync")?.clone();
        let axes = &mut self.axes;
        in_phase(&mut self.log, |log| {
            for axis in axes.iter_mut().filter(|a| a.active) {
                axis.active = false;
                log.charge(OpCategory::ColumnDeactivate, 1);
            }
        });
        in_phase(&mut self.log, |log| {
            for (axis, bit) in axes.iter_mut().zip(v.iter()) {
                if bit {
                    axis.active = true;
                    log.charge(OpCategory::ColumnActivate, 1);
                }
            }
        });
        self.pass.synced = true;
        Ok(())
    }

    /// All ladders attempt their move in one parallel step.
    pub fn parallel_ladder_step(&mut self) -> Result<(), MachineError> {
        self.require_parallel()?;
        if let Some(i) = self
            .ladders
            .iter()
            .position(|&l| l != LadderPosition::Initial)
        {
            return Err(MachineError::state(
                "parallel_ladder_step",
                format!("ladder {} is already shifted", i + 1),
            ));
        }
        // Blocking is decided for every row before any ladder moves.
        let blocked: Vec<bool> = (0..self.n).map(|i| self.is_blocked(i)).collect();
        let (ladders, sections) = (&mut self.ladders, &mut self.sections);
        in_phase(&mut self.log, |log| {
            for (i, &row_blocked) in blocked.iter().enumerate() {
                log.charge(OpCategory::LadderMove, 1);
                if !row_blocked {
                    ladders[i] = LadderPosition::Shifted;
                    if sections[i] {
                        sections[i] = false;
                        log.charge(OpCategory::OutputSwitch, 1);
                    }
                }
            }
        });
        Ok(())
    }

    fn sequential_sync(&mut self) -> Result<(), MachineError> {
        let v = self.pass.require_sync_ready("sync_columns")?.clone();
        for (j, want) in v.iter().enumerate() {
            self.log.charge(OpCategory::ScanStep, 1);
            if want != self.axes[j].active {
                self.rotate(j, want);
            }
        }
        self.pass.synced = true;
        Ok(())
    }

    fn load_cells(&mut self, a: &BitMatrix, j: usize, log: &mut OpLog) {
        for (i, slot) in self.axes[j].entries.iter_mut().enumerate() {
            *slot = a.get(i, j);
            log.charge(OpCategory::CellLoad, 1);
        }
    }

    fn reset_mechanism(ladders: &mut [LadderPosition], sections: &mut [bool], log: &mut OpLog) {
        for ladder in ladders
            .iter_mut()
            .filter(|l| **l == LadderPosition::Shifted)
        {
            *ladder = LadderPosition::Initial;
            log.charge(OpCategory::ResetStep, 1);
        }
        for section in sections.iter_mut().filter(|s| !**s) {
            *section = true;
            log.charge(OpCategory::ResetStep, 1);
        }
    }
}

impl Mvp for AxisLadderMvp {
    fn n(&self) -> usize {
        self.n
    }

    fn backend(&self) -> Backend {
        Backend::AxisLadder
    }

    fn mode(&self) -> Mode {
        self.mode
    }

    fn load_matrix(&mut self, a: &BitMatrix) -> Result<(), MachineError> {
        PassState::check_dim(self.n, a.n())?;
        let mut log = std::mem::take(&mut self.log);
        match self.mode {
            Mode::Sequential => {
                for j in 0..self.n {
                    if self.axes[j].active {
                        self.axes[j].active = false;
                        log.charge(OpCategory::ColumnDeactivate, 1);
                    }
                }
                for j in 0..self.n {
                    self.load_cells(a, j, &mut log);
                }
            }
            Mode::Parallel => {
                if self.axes.iter().any(|axis| axis.active) {
                    let axes = &mut self.axes;
                    in_phase(&mut log, |log| {
                        for axis in axes.iter_mut().filter(|a| a.active) {
                            axis.active = false;
                            log.charge(OpCategory::ColumnDeactivate, 1);
                        }
                    });
                }
                for j in 0..self.n {
                    log.begin_phase();
                    self.load_cells(a, j, &mut log);
                    log.end_phase();
                }
            }
        }
        self.log = log;
        self.pass.matrix_loaded = true;
        self.pass.synced = false;
        Ok(())
    }

    fn load_vector(&mut self, v: &BitVector) -> Result<(), MachineError> {
        PassState::check_dim(self.n, v.n())?;
        let n = self.n as u64;
        match self.mode {
            Mode::Sequential => self.log.charge(OpCategory::VectorCoordLoad, n),
            Mode::Parallel => in_phase(&mut self.log, |log| {
                log.charge(OpCategory::VectorCoordLoad, n)
            }),
        }
        self.pass.input = Some(v.clone());
        self.pass.synced = false;
        Ok(())
    }

    fn sync_columns(&mut self) -> Result<(), MachineError> {
        match self.mode {
            Mode::Sequential => self.sequential_sync(),
            Mode::Parallel => self.parallel_sync(),
        }
    }

    fn set_output(&mut self) -> Result<(), MachineError> {
        self.pass.require_output_ready("set_output")?;
        if let Some(i) = self
            .ladders
            .iter()
            .position(|&l| l != LadderPosition::Initial)
        {
            return Err(MachineError::state(
                "set_output",
                format!("ladder {} is not in its initial position", i + 1),
            ));
        }
        match self.mode {
            Mode::Sequential => {
                for i in 0..self.n {
                    self.move_ladder(i)?;
                }
            }
            Mode::Parallel => self.parallel_ladder_step()?,
        }
        self.pass.output_set = true;
        Ok(())
    }

    fn report_output(&mut self) -> Result<BitVector, MachineError> {
        self.pass.require_output_set("report_output")?;
        let n = self.n as u64;
        match self.mode {
            Mode::Sequential => self.log.charge(OpCategory::OutputCoordReport, n),
            Mode::Parallel => in_phase(&mut self.log, |log| {
                log.charge(OpCategory::OutputCoordReport, n)
            }),
        }
        Ok(self.output())
    }

    fn reset_output(&mut self) -> Result<(), MachineError> {
        let (ladders, sections) = (&mut self.ladders, &mut self.sections);
        match self.mode {
            Mode::Sequential => Self::reset_mechanism(ladders, sections, &mut self.log),
            Mode::Parallel => in_phase(&mut self.log, |log| {
                Self::reset_mechanism(ladders, sections, log)
            }),
        }
        self.pass.output_set = false;
        Ok(())
    }

    fn oplog(&self) -> &OpLog {
        &self.log
    }

    fn take_oplog(&mut self) -> OpLog {
        std::mem::take(&mut self.log)
    }

    fn matrix(&self) -> BitMatrix {
        BitMatrix::from_fn(self.n, |i, j| self.axes[j].entries[i]).expect("n >= 1")
    }

    fn input_vector(&self) -> Option<&BitVector> {
        self.pass.input.as_ref()
    }

    fn is_active(&self, j: usize) -> bool {
        self.axes[j].active
    }

    fn output(&self) -> BitVector {
        BitVector::from_bits(self.sections.clone()).expect("n >= 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::oracle_matvec;

    fn v(s: &str) -> BitVector {
        BitVector::parse(&format!("{s}\n")).unwrap()
    }

    fn fig6() -> BitMatrix {
        BitMatrix::parse("1010\n1101\n0000\n1011\n").unwrap()
    }

    /// Single-column machine whose first axis carries entries 1, 1, 0, 1.
    fn fig4_machine() -> AxisLadderMvp {
        let a = BitMatrix::from_fn(4, |i, j| j == 0 && i != 2).unwrap();
        let mut m = AxisLadderMvp::sequential(4).unwrap();
        m.load_matrix(&a).unwrap();
        m
    }

    #[test]
    fn activating_fig4_column_protrudes_its_ones() {
        let mut m = fig4_machine();
        assert!((0..4).all(|i| !m.protrudes(i, 0)));
        m.activate_column(0).unwrap();
        let rows: Vec<usize> = (0..4).filter(|&i| m.protrudes(i, 0)).collect();
        assert_eq!(rows, vec![0, 1, 3]);
        assert_eq!(m.oplog().count(OpCategory::ColumnActivate), 1);
    }

    #[test]
    fn zero_column_never_protrudes() {
        let mut m = AxisLadderMvp::sequential(3).unwrap();
        m.load_matrix(&BitMatrix::zeros(3).unwrap()).unwrap();
        m.activate_column(1).unwrap();
        assert!((0..3).all(|i| !m.is_blocked(i)));
    }

    #[test]
    fn fig4_ladder_moves_only_on_row_three() {
        let mut m = fig4_machine();
        m.activate_column(0).unwrap();
        let moved: Vec<bool> = (0..4).map(|i| m.move_ladder(i).unwrap()).collect();
        assert_eq!(moved, vec![false, false, true, false]);
        assert_eq!(m.output(), v("1101"));
        assert_eq!(m.oplog().count(OpCategory::LadderMove), 4);
        assert_eq!(m.oplog().count(OpCategory::OutputSwitch), 1);
    }

    #[test]
    fn double_toggles_are_state_errors() {
        let mut m = fig4_machine();
        assert!(matches!(
            m.deactivate_column(0),
            Err(MachineError::State { .. })
        ));
        m.activate_column(0).unwrap();
        assert!(matches!(
            m.activate_column(0),
            Err(MachineError::State { .. })
        ));
        assert!(matches!(
            m.activate_column(4),
            Err(MachineError::IndexOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn deactivation_withdraws_only_that_column() {
        let mut m = AxisLadderMvp::sequential(4).unwrap();
        m.load_matrix(&fig6()).unwrap();
        m.activate_column(0).unwrap();
        m.activate_column(2).unwrap();
        m.deactivate_column(0).unwrap();
        assert_eq!(m.active_set(), vec![2]);
        for i in 0..4 {
            assert!(!m.protrudes(i, 0));
            assert_eq!(m.protrudes(i, 2), fig6().get(i, 2));
        }
        m.deactivate_column(2).unwrap();
        assert!((0..4).all(|i| !m.is_blocked(i)));
    }

    #[test]
    fn fig6_sequential_ladders() {
        let mut m = AxisLadderMvp::sequential(4).unwrap();
        m.load_matrix(&fig6()).unwrap();
        m.activate_column(0).unwrap();
        m.activate_column(2).unwrap();
        let moved: Vec<bool> = (0..4).map(|i| m.move_ladder(i).unwrap()).collect();
        assert_eq!(moved, vec![false, false, true, false]);
        assert_eq!(m.output(), oracle_matvec(&fig6(), &v("1010")).unwrap());
        assert!(matches!(m.move_ladder(2), Err(MachineError::State { .. })));
    }

    #[test]
    fn parallel_sync_charges_two_phases() {
        let mut m = AxisLadderMvp::parallel(4).unwrap();
        m.load_matrix(&fig6()).unwrap();
        m.load_vector(&v("1010")).unwrap();
        let before = m.oplog().clone();
        m.parallel_sync().unwrap();
        assert_eq!(m.active_set(), vec![0, 2]);
        let d = m.oplog().since(&before);
        assert_eq!(d.parallel_phases(), 2);
        assert_eq!(d.phase_ops(), &[0, 2]);

        let before = m.oplog().clone();
        m.parallel_sync().unwrap();
        assert_eq!(m.oplog().since(&before).parallel_phases(), 2);

        m.load_vector(&v("1111")).unwrap();
        m.parallel_sync().unwrap();
        m.load_vector(&v("0000")).unwrap();
        m.parallel_sync().unwrap();
        assert!(m.active_set().is_empty());
    }

    #[test]
    fn parallel_ladder_step_matches_oracle() {
        let mut m = AxisLadderMvp::parallel(4).unwrap();
        m.load_matrix(&fig6()).unwrap();
        m.load_vector(&v("1010")).unwrap();
        m.parallel_sync().unwrap();
        let before = m.oplog().clone();
        m.parallel_ladder_step().unwrap();
        assert_eq!(m.output(), v("1101"));
        assert_eq!(m.oplog().since(&before).parallel_phases(), 1);
        assert!(m.parallel_ladder_step().is_err());
    }

    #[test]
    fn parallel_ops_need_parallel_mode() {
        let mut m = AxisLadderMvp::sequential(2).unwrap();
        assert!(matches!(
            m.parallel_ladder_step(),
            Err(MachineError::UnsupportedMode { .. })
        ));
        assert!(matches!(
            m.parallel_sync(),
            Err(MachineError::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn parallel_load_matrix_uses_column_phases() {
        let mut m = AxisLadderMvp::parallel(5).unwrap();
        m.load_matrix(&BitMatrix::ones(5).unwrap()).unwrap();
        assert_eq!(m.oplog().phase_ops(), &[5; 5]);
        m.load_vector(&BitVector::ones(5).unwrap()).unwrap();
        m.sync_columns().unwrap();
        let before = m.oplog().clone();
        m.load_matrix(&BitMatrix::zeros(5).unwrap()).unwrap();
        let d = m.oplog().since(&before);
        assert_eq!(d.parallel_phases(), 6);
        assert_eq!(d.count(OpCategory::ColumnDeactivate), 5);
        assert!(m.active_set().is_empty());
    }

    #[test]
    fn reset_returns_shifted_ladders() {
        let mut m = AxisLadderMvp::sequential(4).unwrap();
        m.load_matrix(&fig6()).unwrap();
        m.load_vector(&v("1010")).unwrap();
        m.sync_columns().unwrap();
        m.set_output().unwrap();
        let before = m.oplog().clone();
        m.reset_output().unwrap();
        // Only row 3's ladder moved and only its section switched.
        assert_eq!(m.oplog().since(&before).count(OpCategory::ResetStep), 2);
        assert_eq!(m.output(), v("1111"));
        assert!((0..4).all(|i| m.ladder(i) == LadderPosition::Initial));
        assert_eq!(m.active_set(), vec![0, 2]);
    }
}
