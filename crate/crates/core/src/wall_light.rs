//! Wall-and-light processor.
//!
//! Each column is a thin wall divided into `2n` sections. Odd section `2k-1`
//! carries the window for entry `k` (closed = 1, open = 0); every even section
//! has a window that is always open. Shifting a wall down by one section
//! activates the column. A light per row shines through the stack of walls:
//! it is seen on the far side exactly when no active column holds a 1 in that
//! row, and the output coordinate is the complement of that observation.
//!
//! Only the resulting pass-through predicate is modelled. The wall moves are
//! charged to [`OpCategory::ColumnActivate`] / [`OpCategory::ColumnDeactivate`]
//! so that both backends report toggles in the same columns. This backend
//! has no parallel mode.

use crate::bits::{BitMatrix, BitVector};
use crate::machine::{check_index, Backend, MachineError, Mode, Mvp, OpCategory, OpLog, PassState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    entries: Vec<bool>,
    shifted: bool,
}

impl Wall {
    fn new(n: usize) -> Self {
        Self {
            entries: vec![false; n],
            shifted: false,
        }
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    /// Whether the light of row `i` gets through this wall.
    pub fn passes_light(&self, i: usize) -> bool {
        !self.shifted || !self.entries[i]
    }
}

#[derive(Debug, Clone)]
pub struct WallLightMvp {
    n: usize,
    walls: Vec<Wall>,
    sections: Vec<bool>,
    pass: PassState,
    log: OpLog,
}

impl WallLightMvp {
    /// Fails with [`MachineError::UnsupportedMode`] for [`Mode::Parallel`].
    pub fn new(n: usize, mode: Mode) -> Result<Self, MachineError> {
        if mode == Mode::Parallel {
            return Err(MachineError::UnsupportedMode {
                backend: Backend::WallLight,
                mode,
            });
        }
        if n == 0 {
            return Err(MachineError::ZeroDimension);
        }
        Ok(Self {
            n,
            walls: vec![Wall::new(n); n],
            sections: vec![true; n],
            pass: PassState::default(),
            log: OpLog::new(),
        })
    }

    pub fn sequential(n: usize) -> Result<Self, MachineError> {
        Self::new(n, Mode::Sequential)
    }

    pub fn wall(&self, j: usize) -> &Wall {
        &self.walls[j]
    }

    pub fn shift_wall_down(&mut self, j: usize) -> Result<(), MachineError> {
        check_index("column", j, self.n)?;
        if self.walls[j].shifted {
            return Err(MachineError::state(
                "shift_wall_down",
                format!("wall {} is already shifted down", j + 1),
            ));
        }
        self.shift(j, true);
        self.pass.synced = false;
        Ok(())
    }

    pub fn shift_wall_up(&mut self, j: usize) -> Result<(), MachineError> {
        check_index("column", j, self.n)?;
        if !self.walls[j].shifted {
            return Err(MachineError::state(
                "shift_wall_up",
                format!("wall {} is not shifted down", j + 1),
            ));
        }
        self.shift(j, false);
        self.pass.synced = false;
        Ok(())
    }

    fn shift(&mut self, j: usize, down: bool) {
        self.walls[j].shifted = down;
        let category = if down {
            OpCategory::ColumnActivate
        } else {
            OpCategory::ColumnDeactivate
        };
        self.log.charge(category, 1);
    }

    /// Whether light of row `i` reaches the far side; charged as one
    /// observation.
    pub fn observe_light(&mut self, i: usize) -> Result<bool, MachineError> {
        check_index("row", i, self.n)?;
        if !self.pass.matrix_loaded {
            return Err(MachineError::state("observe_light", "no matrix loaded"));
        }
        self.log.charge(OpCategory::LightObserve, 1);
        Ok(self.light_passes(i))
    }

    /// Uncharged view of the same predicate as [`Self::observe_light`].
    pub fn light_passes(&self, i: usize) -> bool {
        self.walls.iter().all(|w| w.passes_light(i))
    }
}

impl Mvp for WallLightMvp {
    fn n(&self) -> usize {
        self.n
    }

    fn backend(&self) -> Backend {
        Backend::WallLight
    }

    fn mode(&self) -> Mode {
        Mode::Sequential
    }

    fn load_matrix(&mut self, a: &BitMatrix) -> Result<(), MachineError> {
        PassState::check_dim(self.n, a.n())?;
        for j in 0..self.n {
            if self.walls[j].shifted {
                self.shift(j, false);
            }
        }
        for (j, wall) in self.walls.iter_mut().enumerate() {
            for (i, window) in wall.entries.iter_mut().enumerate() {
                *window = a.get(i, j);
                self.log.charge(OpCategory::CellLoad, 1);
            }
        }
        self.pass.matrix_loaded = true;
        self.pass.synced = false;
        Ok(())
    }

    fn load_vector(&mut self, v: &BitVector) -> Result<(), MachineError> {
        PassState::check_dim(self.n, v.n())?;
        self.log.charge(OpCategory::VectorCoordLoad, self.n as u64);
        self.pass.input = Some(v.clone());
        self.pass.synced = false;
        Ok(())
    }

    fn sync_columns(&mut self) -> Result<(), MachineError> {
        let v = self.pass.require_sync_ready("sync_columns")?.clone();
        for (j, want) in v.iter().enumerate() {
            self.log.charge(OpCategory::ScanStep, 1);
            if want != self.walls[j].shifted {
                self.shift(j, want);
            }
        }
        self.pass.synced = true;
        Ok(())
    }

    fn set_output(&mut self) -> Result<(), MachineError> {
        self.pass.require_output_ready("set_output")?;
        for i in 0..self.n {
            if self.observe_light(i)? && self.sections[i] {
                self.sections[i] = false;
                self.log.charge(OpCategory::OutputSwitch, 1);
            }
        }
        self.pass.output_set = true;
        Ok(())
    }

    fn report_output(&mut self) -> Result<BitVector, MachineError> {
        self.pass.require_output_set("report_output")?;
        self.log
            .charge(OpCategory::OutputCoordReport, self.n as u64);
        Ok(self.output())
    }

    fn reset_output(&mut self) -> Result<(), MachineError> {
        for section in self.sections.iter_mut().filter(|s| !**s) {
            *section = true;
            self.log.charge(OpCategory::ResetStep, 1);
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
        BitMatrix::from_fn(self.n, |i, j| self.walls[j].entries[i]).expect("n >= 1")
    }

    fn input_vector(&self) -> Option<&BitVector> {
        self.pass.input.as_ref()
    }

    fn is_active(&self, j: usize) -> bool {
        self.walls[j].shifted
    }

    fn output(&self) -> BitVector {
        BitVector::from_bits(self.sections.clone()).expect("n >= 1")
    }
}
