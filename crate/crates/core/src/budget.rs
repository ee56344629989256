//! Wall-clock deadlines and cooperative cancellation shared by the engines.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Engines call [`Budget::exhausted`] at least every few milliseconds of work
/// and stop with a resource-out result once it returns true.
#[derive(Debug, Clone)]
pub struct Budget {
    deadline: Option<Instant>,
    cancel: Arc<AtomicBool>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None, cancel: Arc::new(AtomicBool::new(false)) }
    }

    pub fn with_timeout(d: Duration) -> Self {
        Budget { deadline: Some(Instant::now() + d), cancel: Arc::new(AtomicBool::new(false)) }
    }

    /// Same cancellation flag, tighter of the two deadlines.
    pub fn child(&self, d: Option<Duration>) -> Self {
        let mine = d.map(|d| Instant::now() + d);
        let deadline = match (self.deadline, mine) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Budget { deadline, cancel: Arc::clone(&self.cancel) }
    }

    pub fn cancel(&self) {
        self.cancel.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.cancel.load(Ordering::Relaxed)
    }

    pub fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn exhausted(&self) -> bool {
        self.is_cancelled() || self.timed_out()
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}
