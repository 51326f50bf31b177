//! Rate-limited progress messages on stderr.

use std::sync::Mutex;
use std::time::{Duration, Instant};

pub struct Progress {
    enabled: bool,
    interval: Duration,
    last: Mutex<Option<Instant>>,
}

impl Progress {
    pub fn silent() -> Self {
        Self {
            enabled: false,
            interval: Duration::ZERO,
            last: Mutex::new(None),
        }
    }

    pub fn stderr(interval: Duration) -> Self {
        Self {
            enabled: true,
            interval,
            last: Mutex::new(None),
        }
    }

    /// Prints `msg` unless another message went out within the interval.
    pub fn tick(&self, msg: impl FnOnce() -> String) {
        if !self.enabled {
            return;
        }
        let mut last = self.last.lock().unwrap_or_else(|e| e.into_inner());
        let now = Instant::now();
        if last.is_some_and(|t| now.duration_since(t) < self.interval) {
            return;
        }
        *last = Some(now);
        eprintln!("{}", msg());
    }

    /// Prints unconditionally (still serialized).
    pub fn note(&self, msg: impl FnOnce() -> String) {
        if self.enabled {
            let _guard = self.last.lock().unwrap_or_else(|e| e.into_inner());
            eprintln!("{}", msg());
        }
    }
}

impl Default for Progress {
    fn default() -> Self {
        Self::silent()
    }
}
