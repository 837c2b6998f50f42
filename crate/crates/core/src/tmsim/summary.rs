//! Computation summaries: end-of-segment states and head positions for
//! every segment, plus the final contents of the visited blocks for the
//! segments in a chosen set `J`.
//!
//! Bit layout of [`ComputationSummary::to_bits`], all fields LSB-first:
//!
//! 1. `a` states, `state_bits` each (index into the machine's state list);
//! 2. `a * tapes` head positions, `pos_bits` each, two's complement;
//! 3. `a` bits marking the segments of `J`;
//! 4. per transcription (segments of `J` ascending, then tapes, then
//!    blocks): the block index in `pos_bits`, then its `b` cells with
//!    `sym_bits` each (index into the alphabet).
//!
//! `state_bits` and `sym_bits` are `ceil(log2)` of the state and alphabet
//! sizes; `pos_bits` is one sign bit plus the bit length of the largest
//! absolute head position anywhere in the trace, so it does not depend on
//! `J`. Parameters such as `a`, `b` and the tape count are not counted.

use serde::{Deserialize, Serialize};

use super::machine::MachineSpec;
use super::run::{RunTrace, Tape};
use super::segment::SegmentedTrace;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcription {
    pub segment: usize,
    pub tape: usize,
    pub block: i64,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputationSummary {
    pub b: u64,
    pub tapes: usize,
    pub state_bits: usize,
    pub pos_bits: usize,
    pub sym_bits: usize,
    pub end_states: Vec<usize>,
    pub end_positions: Vec<Vec<i64>>,
    pub selected: Vec<usize>,
    pub transcriptions: Vec<Transcription>,
    alphabet: Vec<char>,
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn push_bits(out: &mut Vec<bool>, value: u64, bits: usize) {
    out.extend((0..bits).map(|i| (value >> i) & 1 == 1));
}

impl ComputationSummary {
    pub fn a(&self) -> usize {
        self.end_states.len()
    }

    /// Exact size of [`to_bits`](Self::to_bits).
    pub fn bit_size(&self) -> u64 {
        let a = self.a() as u64;
        let per_transcription = (self.pos_bits + self.b as usize * self.sym_bits) as u64;
        a * self.state_bits as u64
            + a * self.tapes as u64 * self.pos_bits as u64
            + a
            + self.transcriptions.len() as u64 * per_transcription
    }

    pub fn to_bits(&self) -> Vec<bool> {
        let mut out = Vec::new();
        for &q in &self.end_states {
            push_bits(&mut out, q as u64, self.state_bits);
        }
        for positions in &self.end_positions {
            for &p in positions {
                push_bits(&mut out, p as u64, self.pos_bits);
            }
        }
        let mut marks = vec![false; self.a()];
        for &j in &self.selected {
            marks[j] = true;
        }
        out.extend(marks);
        for t in &self.transcriptions {
            push_bits(&mut out, t.block as u64, self.pos_bits);
            for c in t.content.chars() {
                let idx = self.alphabet.iter().position(|&s| s == c).expect("tape symbols are in the alphabet");
                push_bits(&mut out, idx as u64, self.sym_bits);
            }
        }
        out
    }
}

pub fn summary_extract(
    machine: &MachineSpec,
    trace: &RunTrace,
    st: &SegmentedTrace,
    selected: &[usize],
) -> Result<ComputationSummary> {
    if trace.tapes != machine.tape_count() || st.steps != trace.steps {
        return Err(Error::DimensionMismatch("trace, segmentation and machine disagree".into()));
    }
    let mut chosen = selected.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    if let Some(&bad) = chosen.iter().find(|&&j| j >= st.a()) {
        return Err(Error::InvalidArgument(format!("segment {bad} out of range for {} segments", st.a())));
    }
    let max_abs = trace.positions.iter().map(|p| p.unsigned_abs()).max().unwrap_or(0);
    let pos_bits = 1 + (u64::BITS - max_abs.leading_zeros()) as usize;
    let blank = machine.blank();
    let mut tapes: Vec<Tape> = (0..trace.tapes)
        .map(|t| match t {
            0 => Tape::new(blank, &trace.input),
            1 => Tape::new(blank, &trace.advice),
            _ => Tape::new(blank, &[]),
        })
        .collect();
    let mut writes = trace.writes.iter().peekable();
    let mut transcriptions = Vec::new();
    for &j in &chosen {
        let end = st.end_config(j);
        while let Some(w) = writes.next_if(|w| w.step <= end) {
            tapes[w.tape].set(w.pos, w.symbol);
        }
        for (tape, blocks) in st.visits[j].iter().enumerate() {
            for &block in blocks {
                let first = block * st.b as i64;
                let content = (first..first + st.b as i64).map(|p| tapes[tape].get(p)).collect();
                transcriptions.push(Transcription {
                    segment: j,
                    tape,
                    block,
                    content,
                });
            }
        }
    }
    Ok(ComputationSummary {
        b: st.b,
        tapes: trace.tapes,
        state_bits: ceil_log2(machine.states().len()),
        pos_bits,
        sym_bits: ceil_log2(machine.alphabet().len()),
        end_states: st.end_states.clone(),
        end_positions: st.end_positions.clone(),
        selected: chosen,
        transcriptions,
        alphabet: machine.alphabet().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tmsim::run::run;
    use crate::tmsim::segment::segment;

    fn copier_run() -> (MachineSpec, RunTrace) {
        let m = MachineSpec::copier();
        let t = run(&m, &"0110100111".chars().collect::<Vec<_>>(), &[], 100).unwrap();
        (m, t)
    }

    #[test]
    fn empty_selection_has_only_states_and_positions() {
        let (m, t) = copier_run();
        let st = segment(&t, 4).unwrap();
        let s = summary_extract(&m, &t, &st, &[]).unwrap();
        assert!(s.transcriptions.is_empty());
        assert_eq!(s.a(), 3);
        // 2 states -> 1 bit; positions up to 10 -> 5 bits; 4 tapes
        assert_eq!((s.state_bits, s.pos_bits, s.sym_bits), (1, 5, 2));
        assert_eq!(s.bit_size(), 3 + 3 * 4 * 5 + 3);
        assert_eq!(s.bit_size(), s.to_bits().len() as u64);
    }

    #[test]
    fn full_selection_transcribes_every_block() {
        let (m, t) = copier_run();
        let st = segment(&t, 4).unwrap();
        let s = summary_extract(&m, &t, &st, &[0, 1, 2]).unwrap();
        assert_eq!(s.transcriptions.len(), 3 * 4);
        // output block 1 after segment 1 holds the second group of four
        let out = s.transcriptions.iter().find(|x| x.segment == 1 && x.tape == 3).unwrap();
        assert_eq!((out.block, out.content.as_str()), (1, "1001"));
        // the input block of segment 2 is the last two symbols plus blanks
        let inp = s.transcriptions.iter().find(|x| x.segment == 2 && x.tape == 0).unwrap();
        assert_eq!(inp.content, "11__");
        assert_eq!(s.bit_size(), s.to_bits().len() as u64);
    }

    #[test]
    fn size_grows_with_selection() {
        let (m, t) = copier_run();
        let st = segment(&t, 2).unwrap();
        let mut last = 0;
        for j in 0..=st.a() {
            let sel: Vec<usize> = (0..j).collect();
            let size = summary_extract(&m, &t, &st, &sel).unwrap().bit_size();
            assert!(size > last || j == 0);
            last = size;
        }
        assert!(summary_extract(&m, &t, &st, &[st.a()]).is_err());
    }
}
