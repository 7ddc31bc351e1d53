use std::fmt;

use thiserror::Error;

/// A budget of abstract computation steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fuel(pub u64);

impl Fuel {
    pub const fn steps(self) -> u64 {
        self.0
    }

    pub fn doubled(self) -> Fuel {
        Fuel(self.0.saturating_mul(2))
    }
}

impl fmt::Display for Fuel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Outcome of a fuel-bounded semi-decision. `NotYet` carries no information.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SemiResult {
    Accept,
    NotYet,
}

impl SemiResult {
    pub fn is_accept(self) -> bool {
        matches!(self, SemiResult::Accept)
    }

    pub fn from_bool(accepted: bool) -> SemiResult {
        if accepted {
            SemiResult::Accept
        } else {
            SemiResult::NotYet
        }
    }
}

/// Why a bounded evaluation stopped before producing its value.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Stall {
    #[error("fuel exhausted")]
    OutOfFuel,
    #[error("input name ended")]
    EndOfInput,
    #[error("malformed input: {0}")]
    BadInput(String),
}

/// Step counter threaded through every bounded evaluation.
///
/// One step is charged per name-cell read and one per semi-decision poll.
#[derive(Clone, Debug)]
pub struct Meter {
    limit: Option<u64>,
    used: u64,
}

impl Meter {
    pub fn new(fuel: Fuel) -> Meter {
        Meter {
            limit: Some(fuel.0),
            used: 0,
        }
    }

    /// A meter that never runs out. Evaluation under it may diverge.
    pub fn unbounded() -> Meter {
        Meter {
            limit: None,
            used: 0,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> Option<u64> {
        self.limit.map(|l| l.saturating_sub(self.used))
    }

    pub fn tick(&mut self) -> Result<(), Stall> {
        self.charge(1)
    }

    pub fn charge(&mut self, steps: u64) -> Result<(), Stall> {
        match self.limit {
            Some(limit) if self.used.saturating_add(steps) > limit => {
                self.used = limit;
                Err(Stall::OutOfFuel)
            }
            _ => {
                self.used = self.used.saturating_add(steps);
                Ok(())
            }
        }
    }
}
