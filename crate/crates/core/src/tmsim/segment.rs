//! Time segments and tape blocks.
//!
//! With segment length `b`, segment `i` (0-based) consists of steps
//! `i*b + 1 ..= (i+1)*b`, so it acts from configurations `i*b .. (i+1)*b`;
//! the blocks it visits are those under the heads in these configurations.
//! Block `m` of a tape is the cell interval `[m*b, (m+1)*b)`. A run is block
//! respecting if heads change block only on steps divisible by `b`.

use serde::{Deserialize, Serialize};

use super::run::RunTrace;
use crate::error::{Error, Result};

pub fn block_of(pos: i64, b: u64) -> i64 {
    pos.div_euclid(b as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub step: u64,
    pub tape: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentedTrace {
    pub b: u64,
    pub steps: u64,
    pub tapes: usize,
    /// `visits[i][tape]`: sorted blocks visited by `tape` during segment `i`.
    pub visits: Vec<Vec<Vec<i64>>>,
    /// State after the last step of each segment.
    pub end_states: Vec<usize>,
    /// Head positions after the last step of each segment.
    pub end_positions: Vec<Vec<i64>>,
    pub first_violation: Option<Violation>,
}

impl SegmentedTrace {
    /// Number of segments, `ceil(steps / b)`.
    pub fn a(&self) -> usize {
        self.visits.len()
    }

    /// Configuration reached at the end of segment `i`.
    pub fn end_config(&self, i: usize) -> u64 {
        ((i as u64 + 1) * self.b).min(self.steps)
    }

    /// Length in steps of segment `i`.
    pub fn segment_len(&self, i: usize) -> u64 {
        self.end_config(i) - i as u64 * self.b
    }
}

pub fn segment(trace: &RunTrace, b: u64) -> Result<SegmentedTrace> {
    if b == 0 {
        return Err(Error::InvalidArgument("segment length must be at least 1".into()));
    }
    let a = trace.steps.div_ceil(b) as usize;
    let tapes = trace.tapes;
    let mut visits = Vec::with_capacity(a);
    let mut end_states = Vec::with_capacity(a);
    let mut end_positions = Vec::with_capacity(a);
    for i in 0..a {
        let start = i as u64 * b;
        let end = ((i as u64 + 1) * b).min(trace.steps);
        let per_tape: Vec<Vec<i64>> = (0..tapes)
            .map(|tape| {
                let mut blocks: Vec<i64> = (start..end).map(|t| block_of(trace.position(t, tape), b)).collect();
                blocks.sort_unstable();
                blocks.dedup();
                blocks
            })
            .collect();
        visits.push(per_tape);
        end_states.push(trace.state(end));
        end_positions.push((0..tapes).map(|tape| trace.position(end, tape)).collect());
    }
    let first_violation = (1..=trace.steps).filter(|t| t % b != 0).find_map(|t| {
        (0..tapes)
            .find(|&tape| block_of(trace.position(t, tape), b) != block_of(trace.position(t - 1, tape), b))
            .map(|tape| Violation { step: t, tape })
    });
    Ok(SegmentedTrace {
        b,
        steps: trace.steps,
        tapes,
        visits,
        end_states,
        end_positions,
        first_violation,
    })
}

/// Whether every head changes block only on steps divisible by `b`, with the
/// first offending step otherwise.
pub fn is_block_respecting(st: &SegmentedTrace) -> (bool, Option<Violation>) {
    (st.first_violation.is_none(), st.first_violation)
}
