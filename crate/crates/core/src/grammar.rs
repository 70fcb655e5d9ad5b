//! Binary regular languages given as deterministic finite automata, and
//! fixed-length enumeration of their strings.
//!
//! Built-in grammars:
//!
//! | g | language |
//! |---|----------|
//! | 1 | `1*` |
//! | 2 | even number of 0s and even number of 1s |
//! | 3 | `1* + 0*(1 + 0)` |
//! | 4 | no odd run of 1s is directly followed by an odd run of 0s |
//!
//! For g4 a trailing odd run of 1s is accepted, since nothing follows it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{LabeledPointSet, Metric};
use crate::shapley::{run_influence, InfluenceProfile, ShapleyMethod};

pub const ALPHABET: [char; 2] = ['0', '1'];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    name: String,
    /// `transitions[state][symbol]`, symbol 0 = '0', 1 = '1'.
    transitions: Vec<[usize; 2]>,
    start: usize,
    accepting: Vec<bool>,
}

fn symbol_index(c: char) -> Result<usize> {
    match c {
        '0' => Ok(0),
        '1' => Ok(1),
        other => Err(Error::ForeignSymbol(other)),
    }
}

impl Dfa {
    pub fn new(name: impl Into<String>, transitions: Vec<[usize; 2]>, start: usize, accepting: Vec<usize>) -> Result<Self> {
        let states = transitions.len();
        if states == 0 {
            return Err(Error::InvalidDfa("no states".into()));
        }
        if start >= states {
            return Err(Error::InvalidDfa(format!("start state {start} out of range")));
        }
        if let Some((s, t)) = transitions.iter().enumerate().find(|(_, t)| t.iter().any(|&x| x >= states)) {
            return Err(Error::InvalidDfa(format!("state {s} has a transition to {t:?} outside 0..{states}")));
        }
        let mut flags = vec![false; states];
        for a in accepting {
            if a >= states {
                return Err(Error::InvalidDfa(format!("accepting state {a} out of range")));
            }
            flags[a] = true;
        }
        Ok(Self { name: name.into(), transitions, start, accepting: flags })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    fn run(&self, s: &str) -> Result<usize> {
        s.chars().try_fold(self.start, |state, c| Ok(self.transitions[state][symbol_index(c)?]))
    }

    pub fn accepts(&self, s: &str) -> Result<bool> {
        Ok(self.accepting[self.run(s)?])
    }

    /// `live[k][q]`: some string of length `k` leads from `q` to a state
    /// whose acceptance flag equals `target`.
    fn liveness(&self, len: usize, target: bool) -> Vec<Vec<bool>> {
        let mut live = vec![self.accepting.iter().map(|&a| a == target).collect::<Vec<_>>()];
        for k in 1..=len {
            let prev = &live[k - 1];
            let next = self.transitions.iter().map(|t| prev[t[0]] || prev[t[1]]).collect();
            live.push(next);
        }
        live
    }

    fn enumerate_with(&self, len: usize, target: bool) -> Vec<String> {
        let live = self.liveness(len, target);
        let mut out = Vec::new();
        let mut buf = String::with_capacity(len);
        self.descend(&live, self.start, len, &mut buf, &mut out);
        out
    }

    fn descend(&self, live: &[Vec<bool>], state: usize, remaining: usize, buf: &mut String, out: &mut Vec<String>) {
        if !live[remaining][state] {
            return;
        }
        if remaining == 0 {
            out.push(buf.clone());
            return;
        }
        for (sym, &c) in ALPHABET.iter().enumerate() {
            buf.push(c);
            self.descend(live, self.transitions[state][sym], remaining - 1, buf, out);
            buf.pop();
        }
    }

    /// All accepted strings of length `len`, in lexicographic order.
    pub fn enumerate(&self, len: usize) -> Vec<String> {
        self.enumerate_with(len, true)
    }

    /// All rejected strings of length `len`, in lexicographic order.
    pub fn enumerate_rejected(&self, len: usize) -> Vec<String> {
        self.enumerate_with(len, false)
    }

    /// Number of states of the minimal equivalent automaton (reachable part,
    /// Moore partition refinement).
    pub fn minimal_state_count(&self) -> usize {
        let mut reachable = vec![false; self.state_count()];
        let mut stack = vec![self.start];
        reachable[self.start] = true;
        while let Some(q) = stack.pop() {
            for &t in &self.transitions[q] {
                if !reachable[t] {
                    reachable[t] = true;
                    stack.push(t);
                }
            }
        }
        let states: Vec<usize> = (0..self.state_count()).filter(|&q| reachable[q]).collect();
        let mut class: Vec<usize> = (0..self.state_count()).map(|q| usize::from(self.accepting[q])).collect();
        let mut count = 0;
        loop {
            let mut signatures: Vec<(usize, usize, usize)> =
                states.iter().map(|&q| (class[q], class[self.transitions[q][0]], class[self.transitions[q][1]])).collect();
            let keys = signatures.clone();
            signatures.sort_unstable();
            signatures.dedup();
            let next_count = signatures.len();
            for (&q, key) in states.iter().zip(&keys) {
                class[q] = signatures.binary_search(key).expect("signature present");
            }
            if next_count == count {
                return count;
            }
            count = next_count;
        }
    }
}

/// Minimal automaton for built-in grammar `g` (1 to 4).
pub fn builtin_grammar(g: u8) -> Result<Dfa> {
    match g {
        // 0: all ones so far, 1: dead
        1 => Dfa::new("g1", vec![[1, 0], [1, 1]], 0, vec![0]),
        // state = 2 * (zeros mod 2) + (ones mod 2)
        2 => Dfa::new("g2", vec![[2, 1], [3, 0], [0, 3], [1, 2]], 0, vec![0]),
        // 0: empty, 1: 1+, 2: 0+, 3: 0*1 after at least one 0, 4: dead
        3 => Dfa::new("g3", vec![[2, 1], [4, 1], [2, 3], [4, 4], [4, 4]], 0, vec![0, 1, 2, 3]),
        // 0: unconstrained (also after an even run of 1s), 1: odd run of 1s,
        // 2: odd run of 0s after an odd run of 1s, 3: even run of 0s after an odd run of 1s, 4: dead
        4 => Dfa::new("g4", vec![[0, 1], [2, 0], [3, 4], [2, 1], [4, 4]], 0, vec![0, 1, 3]),
        other => Err(Error::UnknownGrammar(other)),
    }
}

/// One string with its membership label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledString {
    pub text: String,
    pub accepted: bool,
}

/// Strings for every length in `lengths`, each length in lexicographic
/// order; rejected strings are included when `negatives` is set.
pub fn labeled_strings(dfa: &Dfa, lengths: std::ops::RangeInclusive<usize>, negatives: bool) -> Vec<LabeledString> {
    let mut out = Vec::new();
    for len in lengths {
        let mut batch: Vec<LabeledString> =
            dfa.enumerate(len).into_iter().map(|text| LabeledString { text, accepted: true }).collect();
        if negatives {
            batch.extend(dfa.enumerate_rejected(len).into_iter().map(|text| LabeledString { text, accepted: false }));
            batch.sort_by(|a, b| a.text.cmp(&b.text));
        }
        out.extend(batch);
    }
    out
}

/// Influence profile of the length-`len` language of grammar `g` under the
/// edit distance at radius `r`.
pub fn grammar_entropy(g: u8, len: usize, r: f64, method: &ShapleyMethod) -> Result<InfluenceProfile> {
    dfa_entropy(&builtin_grammar(g)?, len, r, method)
}

pub fn dfa_entropy(dfa: &Dfa, len: usize, r: f64, method: &ShapleyMethod) -> Result<InfluenceProfile> {
    let strings = dfa.enumerate(len);
    if strings.is_empty() {
        return Err(Error::EmptyLanguage { grammar: dfa.name().to_string(), len });
    }
    run_influence(&LabeledPointSet::strings(strings)?, Metric::Edit, r, method)
}
