//! Execution schedule for data-parallel loops.
//!
//! With the `parallel` feature (on by default) the step kernel and ensemble
//! runner spread work over rayon's pool. Without it, or when
//! [`Schedule::Sequential`] is requested, everything runs on the calling
//! thread. Both schedules produce identical results for identical seeds.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    Sequential,
    Parallel,
}

impl Default for Schedule {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Schedule::Parallel
        } else {
            Schedule::Sequential
        }
    }
}

impl Schedule {
    /// Whether this schedule will actually fan out. `Parallel` degrades to
    /// sequential when the crate is built without the `parallel` feature.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Schedule::Parallel
    }
}

/// Maps `f` over `0..len`, preserving index order in the output.
pub(crate) fn map_indexed<T, F>(schedule: Schedule, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if schedule.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = schedule;
    (0..len).map(f).collect()
}
