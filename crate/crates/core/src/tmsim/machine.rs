//! Multitape machine descriptions.
//!
//! Tapes are numbered: `0` input (read-only), `1` advice (read-only),
//! `2 .. 2 + w` work tapes, and `2 + w` the write-only output tape. A rule
//! reads the `2 + w` readable tapes, writes the work tapes, moves every
//! readable head and may append one symbol to the output.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! work_tapes 1
//! alphabet 01_
//! blank _
//! start copy
//! halt done
//! states copy done
//! copy 0** -> copy * RSS 0
//! copy 1** -> copy * RSS 1
//! copy _** -> done * SSS
//! ```
//!
//! A rule line is `state reads -> next writes moves [emit]`. In `reads`,
//! `*` matches any symbol; in `writes`, `*` keeps the cell. Moves are `L`,
//! `S` or `R`. Rules of a state are tried in file order; the first match
//! wins. The halt state has no rules. The optional `states` header fixes
//! the state numbering; otherwise states are numbered by first mention.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const WILDCARD: char = '*';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    L,
    S,
    R,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::L => -1,
            Move::S => 0,
            Move::R => 1,
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'L' => Some(Move::L),
            'S' => Some(Move::S),
            'R' => Some(Move::R),
            _ => None,
        }
    }

    fn to_char(self) -> char {
        match self {
            Move::L => 'L',
            Move::S => 'S',
            Move::R => 'R',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    /// One pattern per readable tape; `None` matches anything.
    pub read: Vec<Option<char>>,
    pub next: usize,
    /// One per work tape; `None` keeps the cell.
    pub write: Vec<Option<char>>,
    pub moves: Vec<Move>,
    pub emit: Option<char>,
}

impl Rule {
    pub fn matches(&self, symbols: &[char]) -> bool {
        self.read.iter().zip(symbols).all(|(p, s)| p.is_none_or(|p| p == *s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineSpec {
    work_tapes: usize,
    alphabet: Vec<char>,
    blank: char,
    states: Vec<String>,
    start: usize,
    halt: usize,
    rules: Vec<Vec<Rule>>,
}

impl MachineSpec {
    pub fn work_tapes(&self) -> usize {
        self.work_tapes
    }

    /// Readable tapes: input, advice and work tapes.
    pub fn readable_tapes(&self) -> usize {
        2 + self.work_tapes
    }

    /// All tapes including the output tape.
    pub fn tape_count(&self) -> usize {
        3 + self.work_tapes
    }

    pub fn output_tape(&self) -> usize {
        2 + self.work_tapes
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn blank(&self) -> char {
        self.blank
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn halt(&self) -> usize {
        self.halt
    }

    pub fn rules(&self, state: usize) -> &[Rule] {
        &self.rules[state]
    }

    pub fn rule_count(&self) -> usize {
        self.rules.iter().map(Vec::len).sum()
    }

    /// First rule of `state` matching `symbols`.
    pub fn transition(&self, state: usize, symbols: &[char]) -> Option<&Rule> {
        self.rules[state].iter().find(|r| r.matches(symbols))
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut builder: Option<MachineBuilder> = None;
        let mut header: HashMap<&str, (usize, &str)> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if !line.contains("->") {
                let (key, value) = line
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::parse(line_no, format!("expected `key value`, got {line:?}")))?;
                if builder.is_some() {
                    return Err(Error::parse(line_no, "header lines must precede rules"));
                }
                if header.insert(key, (line_no, value.trim())).is_some() {
                    return Err(Error::parse(line_no, format!("duplicate header `{key}`")));
                }
                continue;
            }
            if builder.is_none() {
                builder = Some(MachineBuilder::from_header(&header, line_no)?);
            }
            let b = builder.as_mut().expect("just set");
            let (lhs, rhs) = line.split_once("->").expect("checked");
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let rhs: Vec<&str> = rhs.split_whitespace().collect();
            if lhs.len() != 2 || !(3..=4).contains(&rhs.len()) {
                return Err(Error::parse(line_no, "rule must be `state reads -> next writes moves [emit]`"));
            }
            let emit = match rhs.get(3) {
                Some(e) => {
                    let mut chars = e.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => Some(c),
                        _ => return Err(Error::parse(line_no, format!("emit must be one symbol, got {e:?}"))),
                    }
                }
                None => None,
            };
            b.add_rule(lhs[0], lhs[1], rhs[0], rhs[1], rhs[2], emit)
                .map_err(|m| Error::parse(line_no, m))?;
        }
        let builder = match builder {
            Some(b) => b,
            None => MachineBuilder::from_header(&header, 0)?,
        };
        builder.finish()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "work_tapes {}", self.work_tapes);
        let _ = writeln!(out, "alphabet {}", self.alphabet.iter().collect::<String>());
        let _ = writeln!(out, "blank {}", self.blank);
        let _ = writeln!(out, "start {}", self.states[self.start]);
        let _ = writeln!(out, "halt {}", self.states[self.halt]);
        let _ = writeln!(out, "states {}", self.states.join(" "));
        let pattern = |v: &[Option<char>]| v.iter().map(|c| c.unwrap_or(WILDCARD)).collect::<String>();
        for (q, rules) in self.rules.iter().enumerate() {
            for r in rules {
                let writes = pattern(&r.write);
                let _ = write!(
                    out,
                    "{} {} -> {} {} {}",
                    self.states[q],
                    pattern(&r.read),
                    self.states[r.next],
                    writes,
                    r.moves.iter().map(|m| m.to_char()).collect::<String>()
                );
                if let Some(e) = r.emit {
                    let _ = write!(out, " {e}");
                }
                out.push('\n');
            }
        }
        out
    }

    /// Copies the input to the output one symbol per step and halts on the
    /// first blank. One work tape, never used.
    pub fn copier() -> Self {
        let mut b = MachineBuilder::new(1, &['0', '1', '_'], '_', "copy", "done").expect("valid");
        for s in ['0', '1'] {
            b.rule("copy", &[Some(s), None, None], "copy", &[None], "RSS", Some(s));
        }
        b.rule("copy", &[Some('_'), None, None], "done", &[None], "SSS", None);
        b.finish().expect("valid")
    }

    /// A machine with a complete random transition table over `{0, 1, _}`;
    /// each rule halts with probability `halt_weight / (states + halt_weight)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, states: usize, work_tapes: usize, halt_weight: usize) -> Self {
        let alphabet = ['0', '1', '_'];
        let names: Vec<String> = (0..states).map(|q| format!("q{q}")).collect();
        let mut b = MachineBuilder::new(work_tapes, &alphabet, '_', "q0", "halt").expect("valid");
        for name in &names {
            b.state(name);
        }
        let readable = 2 + work_tapes;
        let combos = 3usize.pow(readable as u32);
        let moves = [Move::L, Move::S, Move::R];
        for name in &names {
            for combo in 0..combos {
                let read: Vec<Option<char>> = (0..readable)
                    .map(|t| Some(alphabet[(combo / 3usize.pow(t as u32)) % 3]))
                    .collect();
                let pick = rng.random_range(0..states + halt_weight);
                let next = if pick < states { names[pick].as_str() } else { "halt" };
                let write: Vec<Option<char>> = (0..work_tapes).map(|_| Some(alphabet[rng.random_range(0..3)])).collect();
                let mv: String = (0..readable).map(|_| moves[rng.random_range(0..3)].to_char()).collect();
                let emit = match rng.random_range(0..4) {
                    0 => Some('0'),
                    1 => Some('1'),
                    _ => None,
                };
                b.rule(name, &read, next, &write, &mv, emit);
            }
        }
        b.finish().expect("valid")
    }
}

/// Incremental construction of a [`MachineSpec`]; states are created on
/// first mention.
#[derive(Debug, Clone)]
pub struct MachineBuilder {
    work_tapes: usize,
    alphabet: Vec<char>,
    blank: char,
    states: Vec<String>,
    index: HashMap<String, usize>,
    start: usize,
    halt: usize,
    rules: Vec<Vec<Rule>>,
}

impl MachineBuilder {
    pub fn new(work_tapes: usize, alphabet: &[char], blank: char, start: &str, halt: &str) -> Result<Self> {
        if work_tapes == 0 {
            return Err(Error::InvalidArgument("at least one work tape is required".into()));
        }
        let mut alpha: Vec<char> = alphabet.to_vec();
        alpha.dedup();
        if alpha.contains(&WILDCARD) {
            return Err(Error::InvalidArgument(format!("`{WILDCARD}` is reserved")));
        }
        if !alpha.contains(&blank) {
            return Err(Error::InvalidArgument(format!("blank `{blank}` is not in the alphabet")));
        }
        let mut b = Self {
            work_tapes,
            alphabet: alpha,
            blank,
            states: Vec::new(),
            index: HashMap::new(),
            start: 0,
            halt: 0,
            rules: Vec::new(),
        };
        b.start = b.state(start);
        b.halt = b.state(halt);
        Ok(b)
    }

    fn from_header(header: &HashMap<&str, (usize, &str)>, line_no: usize) -> Result<Self> {
        let get = |key: &str| {
            header
                .get(key)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::parse(line_no, format!("missing header `{key}`")))
        };
        let work_tapes: usize = get("work_tapes")?
            .parse()
            .map_err(|_| Error::parse(header["work_tapes"].0, "work_tapes must be a number"))?;
        let alphabet: Vec<char> = get("alphabet")?.chars().filter(|c| !c.is_whitespace()).collect();
        let blank_text = get("blank")?;
        let mut blank_chars = blank_text.chars();
        let blank = match (blank_chars.next(), blank_chars.next()) {
            (Some(c), None) => c,
            _ => return Err(Error::parse(header["blank"].0, "blank must be one symbol")),
        };
        if let Some(extra) = header
            .keys()
            .find(|k| !["work_tapes", "alphabet", "blank", "start", "halt", "states"].contains(k))
        {
            return Err(Error::parse(header[extra].0, format!("unknown header `{extra}`")));
        }
        let mut b = Self::new(work_tapes, &alphabet, blank, get("start")?, get("halt")?)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
        // optional explicit state order, so printed machines parse back identically
        if let Some(&(_, names)) = header.get("states") {
            for name in names.split_whitespace() {
                b.state(name);
            }
        }
        Ok(b)
    }

    /// Index of `name`, creating the state if needed.
    pub fn state(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.states.push(name.to_string());
        self.rules.push(Vec::new());
        self.index.insert(name.to_string(), self.states.len() - 1);
        self.states.len() - 1
    }

    /// Adds a rule from already split fields; panics on malformed input, so
    /// only use it for generated machines.
    pub fn rule(&mut self, state: &str, read: &[Option<char>], next: &str, write: &[Option<char>], moves: &str, emit: Option<char>) {
        let read: String = read.iter().map(|c| c.unwrap_or(WILDCARD)).collect();
        let write: String = write.iter().map(|c| c.unwrap_or(WILDCARD)).collect();
        self.add_rule(state, &read, next, &write, moves, emit).expect("generated rule is well formed");
    }

    fn symbol(&self, c: char, wildcard_ok: bool) -> std::result::Result<Option<char>, String> {
        if c == WILDCARD && wildcard_ok {
            Ok(None)
        } else if self.alphabet.contains(&c) {
            Ok(Some(c))
        } else {
            Err(format!("symbol `{c}` is not in the alphabet"))
        }
    }

    fn add_rule(
        &mut self,
        state: &str,
        read: &str,
        next: &str,
        write: &str,
        moves: &str,
        emit: Option<char>,
    ) -> std::result::Result<(), String> {
        let readable = 2 + self.work_tapes;
        let read: Vec<Option<char>> = read.chars().map(|c| self.symbol(c, true)).collect::<std::result::Result<_, _>>()?;
        if read.len() != readable {
            return Err(format!("read pattern needs {readable} symbols, got {}", read.len()));
        }
        let write: Vec<Option<char>> = write.chars().map(|c| self.symbol(c, true)).collect::<std::result::Result<_, _>>()?;
        if write.len() != self.work_tapes {
            return Err(format!("write pattern needs {} symbols, got {}", self.work_tapes, write.len()));
        }
        let moves: Vec<Move> = moves
            .chars()
            .map(|c| Move::from_char(c).ok_or_else(|| format!("move `{c}` must be L, S or R")))
            .collect::<std::result::Result<_, _>>()?;
        if moves.len() != readable {
            return Err(format!("moves need {readable} entries, got {}", moves.len()));
        }
        if let Some(e) = emit {
            if self.symbol(e, false)?.is_none() {
                return Err("emit cannot be a wildcard".into());
            }
        }
        let from = self.state(state);
        if from == self.halt {
            return Err("the halt state has no rules".into());
        }
        let next = self.state(next);
        self.rules[from].push(Rule {
            read,
            next,
            write,
            moves,
            emit,
        });
        Ok(())
    }

    pub fn finish(self) -> Result<MachineSpec> {
        Ok(MachineSpec {
            work_tapes: self.work_tapes,
            alphabet: self.alphabet,
            blank: self.blank,
            states: self.states,
            start: self.start,
            halt: self.halt,
            rules: self.rules,
        })
    }
}
