use crate::error::{Error, Result};

/// A search instance: `N` database states, the marked states to recall and
/// the per-step failure tolerance `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    n_states: usize,
    marked: Vec<usize>,
    /// `marked` sorted ascending, for membership lookups.
    sorted: Vec<usize>,
    delta: f64,
}

impl ProblemInstance {
    pub fn new(n_states: usize, marked: Vec<usize>, delta: f64) -> Result<Self> {
        if n_states == 0 {
            return Err(Error::InvalidProblem("N must be positive".into()));
        }
        if marked.is_empty() {
            return Err(Error::InvalidProblem(
                "at least one marked state is required".into(),
            ));
        }
        if marked.len() > n_states {
            return Err(Error::InvalidProblem(format!(
                "m={} exceeds N={}",
                marked.len(),
                n_states
            )));
        }
        if let Some(&bad) = marked.iter().find(|&&i| i >= n_states) {
            return Err(Error::InvalidProblem(format!(
                "marked index {bad} is outside [0, {n_states})"
            )));
        }
        check_delta(delta)?;
        let mut sorted = marked.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidProblem(format!(
                "marked index {} appears more than once",
                w[0]
            )));
        }
        Ok(Self {
            n_states,
            marked,
            sorted,
            delta,
        })
    }

    /// Builds an instance with `n_marked` marked states spread evenly over
    /// the index range (`k * N / m` for `k = 0..m`).
    pub fn with_marked_count(n_states: usize, n_marked: usize, delta: f64) -> Result<Self> {
        if n_states == 0 || n_marked == 0 || n_marked > n_states {
            return Err(Error::InvalidProblem(format!(
                "need 1 <= m <= N, got m={n_marked}, N={n_states}"
            )));
        }
        let marked = (0..n_marked)
            .map(|k| ((k as u128 * n_states as u128) / n_marked as u128) as usize)
            .collect();
        Self::new(n_states, marked, delta)
    }

    /// Same states, different tolerance.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(Self {
            delta,
            ..self.clone()
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_marked(&self) -> usize {
        self.marked.len()
    }

    /// Marked states in the order they were given.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_marked(&self, index: usize) -> bool {
        self.sorted.binary_search(&index).is_ok()
    }

    /// Position of `index` within [`marked`](Self::marked), if marked.
    pub fn marked_position(&self, index: usize) -> Option<usize> {
        self.marked.iter().position(|&i| i == index)
    }

    /// Rank of `index` in the ascending marked order. Used for O(log m)
    /// bookkeeping of which marked states have been seen.
    pub(crate) fn marked_rank(&self, index: usize) -> Option<usize> {
        self.sorted.binary_search(&index).ok()
    }

    pub(crate) fn sorted_marked(&self) -> &[usize] {
        &self.sorted
    }

    /// The `k`-th unmarked index in ascending order, `k < N - m`.
    pub(crate) fn nth_unmarked(&self, k: usize) -> usize {
        // Smallest x with x - |{marked <= x}| == k and x unmarked.
        let mut candidate = k;
        for &t in &self.sorted {
            if t <= candidate {
                candidate += 1;
            } else {
                break;
            }
        }
        candidate
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidDelta(delta))
    }
}
