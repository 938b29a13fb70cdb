use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Default cap on the number of states a single construction may create.
pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// Cooperative wall-clock and size limit checked inside long-running
/// constructions.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    state_limit: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

impl Budget {
    /// No deadline; the default state limit still applies.
    pub fn unlimited() -> Self {
        Budget {
            deadline: None,
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + timeout),
            ..Budget::unlimited()
        }
    }

    pub fn with_state_limit(self, limit: usize) -> Self {
        Budget {
            state_limit: limit,
            ..self
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }

    /// Fails once a construction holds more than the allowed number of
    /// states (or macrostates, or rankings).
    pub fn check_states(&self, count: usize) -> Result<()> {
        if count > self.state_limit {
            Err(Error::StateLimit(self.state_limit))
        } else {
            Ok(())
        }
    }
}
