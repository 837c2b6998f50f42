use serde::{Deserialize, Serialize};

use super::machine::MachineSpec;
use crate::error::{Error, Result};

/// Two-way infinite tape over integer cells.
#[derive(Debug, Clone)]
pub(crate) struct Tape {
    right: Vec<char>,
    left: Vec<char>,
    blank: char,
}

impl Tape {
    pub(crate) fn new(blank: char, content: &[char]) -> Self {
        Self {
            right: content.to_vec(),
            left: Vec::new(),
            blank,
        }
    }

    pub(crate) fn get(&self, pos: i64) -> char {
        let cell = if pos >= 0 {
            self.right.get(pos as usize)
        } else {
            self.left.get((-pos - 1) as usize)
        };
        cell.copied().unwrap_or(self.blank)
    }

    pub(crate) fn set(&mut self, pos: i64, c: char) {
        let (side, idx) = if pos >= 0 {
            (&mut self.right, pos as usize)
        } else {
            (&mut self.left, (-pos - 1) as usize)
        };
        if idx >= side.len() {
            side.resize(idx + 1, self.blank);
        }
        side[idx] = c;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WriteEvent {
    /// 1-based step performing the write.
    pub step: u64,
    pub tape: usize,
    pub pos: i64,
    pub symbol: char,
}

/// Full record of a run: configuration `t` (for `t = 0..=steps`) has state
/// `states[t]` and head positions `positions[t * tapes .. (t + 1) * tapes]`.
/// The output head position equals the number of symbols emitted so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub steps: u64,
    pub halted: bool,
    pub output: String,
    pub tapes: usize,
    pub states: Vec<u32>,
    pub positions: Vec<i64>,
    pub writes: Vec<WriteEvent>,
    pub input: Vec<char>,
    pub advice: Vec<char>,
}

impl RunTrace {
    pub fn position(&self, config: u64, tape: usize) -> i64 {
        self.positions[config as usize * self.tapes + tape]
    }

    pub fn state(&self, config: u64) -> usize {
        self.states[config as usize] as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub steps: u64,
    pub halted: bool,
    pub output: String,
}

struct Machine<'a> {
    spec: &'a MachineSpec,
    tapes: Vec<Tape>,
    heads: Vec<i64>,
    state: usize,
    output: String,
    steps: u64,
    symbols: Vec<char>,
}

impl<'a> Machine<'a> {
    fn new(spec: &'a MachineSpec, input: &[char], advice: &[char]) -> Result<Self> {
        for (name, content) in [("input", input), ("advice", advice)] {
            if let Some(c) = content.iter().find(|c| !spec.alphabet().contains(c)) {
                return Err(Error::InvalidArgument(format!("{name} symbol `{c}` is not in the alphabet")));
            }
        }
        let blank = spec.blank();
        let mut tapes = vec![Tape::new(blank, input), Tape::new(blank, advice)];
        tapes.extend((0..spec.work_tapes()).map(|_| Tape::new(blank, &[])));
        Ok(Self {
            spec,
            tapes,
            heads: vec![0; spec.tape_count()],
            state: spec.start(),
            output: String::new(),
            steps: 0,
            symbols: vec![blank; spec.readable_tapes()],
        })
    }

    /// One step; `None` once halted.
    fn step(&mut self, mut on_write: impl FnMut(WriteEvent)) -> Result<Option<()>> {
        if self.state == self.spec.halt() {
            return Ok(None);
        }
        for (t, tape) in self.tapes.iter().enumerate() {
            self.symbols[t] = tape.get(self.heads[t]);
        }
        let rule = self.spec.transition(self.state, &self.symbols).ok_or_else(|| Error::UndefinedTransition {
            state: self.spec.states()[self.state].clone(),
            read: self.symbols.iter().collect(),
        })?;
        self.steps += 1;
        for (w, sym) in rule.write.iter().enumerate() {
            if let Some(c) = *sym {
                let tape = 2 + w;
                self.tapes[tape].set(self.heads[tape], c);
                on_write(WriteEvent {
                    step: self.steps,
                    tape,
                    pos: self.heads[tape],
                    symbol: c,
                });
            }
        }
        if let Some(c) = rule.emit {
            let out = self.spec.output_tape();
            on_write(WriteEvent {
                step: self.steps,
                tape: out,
                pos: self.heads[out],
                symbol: c,
            });
            self.output.push(c);
            self.heads[out] += 1;
        }
        for (t, m) in rule.moves.iter().enumerate() {
            self.heads[t] += m.delta();
        }
        self.state = rule.next;
        Ok(Some(()))
    }
}

/// Runs until halting or `step_limit` steps, recording the full trace.
/// Unlike [`run`], reaching the limit is not an error; `halted` is false.
pub fn run_partial(spec: &MachineSpec, input: &[char], advice: &[char], step_limit: u64) -> Result<RunTrace> {
    let mut m = Machine::new(spec, input, advice)?;
    let mut states = vec![m.state as u32];
    let mut positions = m.heads.clone();
    let mut writes = Vec::new();
    while m.steps < step_limit {
        if m.step(|w| writes.push(w))?.is_none() {
            break;
        }
        states.push(m.state as u32);
        positions.extend_from_slice(&m.heads);
    }
    Ok(RunTrace {
        steps: m.steps,
        halted: m.state == spec.halt(),
        output: m.output,
        tapes: spec.tape_count(),
        states,
        positions,
        writes,
        input: input.to_vec(),
        advice: advice.to_vec(),
    })
}

/// Runs to completion, recording the full trace.
pub fn run(spec: &MachineSpec, input: &[char], advice: &[char], step_limit: u64) -> Result<RunTrace> {
    let trace = run_partial(spec, input, advice, step_limit)?;
    if !trace.halted {
        return Err(Error::StepLimitExceeded(step_limit));
    }
    Ok(trace)
}

/// Runs to completion keeping only the step count and output.
pub fn run_untraced(spec: &MachineSpec, input: &[char], advice: &[char], step_limit: u64) -> Result<RunResult> {
    let mut m = Machine::new(spec, input, advice)?;
    while m.steps < step_limit {
        if m.step(|_| {})?.is_none() {
            break;
        }
    }
    if m.state != spec.halt() {
        return Err(Error::StepLimitExceeded(step_limit));
    }
    Ok(RunResult {
        steps: m.steps,
        halted: true,
        output: m.output,
    })
}
