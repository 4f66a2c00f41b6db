//! Command-line companion to the core library: file ingestion,
//! synthetic data generators, pipeline orchestration, and
//! machine-readable reports.

pub mod generate;
pub mod ingest;
pub mod pipeline;
pub mod report;

use cyclerep_core::metrics::Clock;
use std::time::Instant;

/// Wall clock for solver timing. Reports carry solver work counts
/// (pivots, nodes) rather than these times, so byte-level report
/// determinism is unaffected.
pub struct WallClock {
    start: Instant,
}

impl WallClock {
    pub fn new() -> Self {
        WallClock { start: Instant::now() }
    }
}

impl Default for WallClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for WallClock {
    fn elapsed(&self) -> core::time::Duration {
        self.start.elapsed()
    }
}
