//! Cooperative limits for long-running transformations.
//!
//! The regex builders poll a [`Guard`] between units of work, so a caller
//! can bound wall time, cancel from another thread, or cap the number of
//! alternatives an intermediate regex may hold.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Interrupted {
    #[error("time budget exhausted")]
    Timeout,
    #[error("cancelled")]
    Cancelled,
    #[error("intermediate regex exceeded {limit} alternatives")]
    TooManyAlternatives { limit: usize },
}

#[derive(Debug, Clone, Default)]
pub struct Guard {
    deadline: Option<Instant>,
    cancel: Option<Arc<AtomicBool>>,
    max_alternatives: Option<usize>,
}

impl Guard {
    /// Never interrupts.
    pub fn unlimited() -> Self {
        Guard::default()
    }

    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub fn with_timeout(self, timeout: Duration) -> Self {
        // An unrepresentable deadline is as good as none.
        match Instant::now().checked_add(timeout) {
            Some(deadline) => self.with_deadline(deadline),
            None => self,
        }
    }

    pub fn with_cancel_flag(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub fn with_max_alternatives(mut self, limit: usize) -> Self {
        self.max_alternatives = Some(limit);
        self
    }

    pub fn is_unlimited(&self) -> bool {
        self.deadline.is_none() && self.cancel.is_none() && self.max_alternatives.is_none()
    }

    pub fn check(&self) -> Result<(), Interrupted> {
        if let Some(flag) = &self.cancel {
            if flag.load(Ordering::Relaxed) {
                return Err(Interrupted::Cancelled);
            }
        }
        match self.deadline {
            Some(deadline) if Instant::now() >= deadline => Err(Interrupted::Timeout),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_size(&self, alternatives: usize) -> Result<(), Interrupted> {
        match self.max_alternatives {
            Some(limit) if alternatives > limit => Err(Interrupted::TooManyAlternatives { limit }),
            _ => self.check(),
        }
    }
}
