//! Per-thread counters of radical evaluations, used for benchmarking.

use std::cell::Cell;

thread_local! {
    static SQRT_CALLS: Cell<u64> = const { Cell::new(0) };
    static ROOT_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Radical evaluations performed on the current thread since the last reset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RootCounts {
    pub sqrt: u64,
    /// Calls to the general k-th root (including k = 2 through that entry).
    pub root: u64,
}

impl RootCounts {
    pub fn total(&self) -> u64 {
        self.sqrt + self.root
    }
}

pub(crate) fn count_sqrt() {
    SQRT_CALLS.with(|c| c.set(c.get() + 1));
}

pub(crate) fn count_root() {
    ROOT_CALLS.with(|c| c.set(c.get() + 1));
}

pub fn reset() {
    SQRT_CALLS.with(|c| c.set(0));
    ROOT_CALLS.with(|c| c.set(0));
}

pub fn snapshot() -> RootCounts {
    RootCounts {
        sqrt: SQRT_CALLS.with(Cell::get),
        root: ROOT_CALLS.with(Cell::get),
    }
}
