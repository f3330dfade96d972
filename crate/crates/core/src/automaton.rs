//! The minimal deterministic acceptor of the lex-representative language.
//!
//! States are the reachable admissible functions plus one fail state. The
//! transition on `σ_i` fails exactly when `σ_i` is itself a forbidden
//! prefix, and otherwise is `step_f`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::prefixes::{build_witness, f_to_set, initial_f, step_f, AdmissibleFunction, Step};
use crate::words::{ArtinWord, StrandCount};
use crate::{Error, Result};

pub const DEFAULT_CEILING: u16 = 16;
pub const DEFAULT_WITNESS_BOUND: u16 = 12;

const UNSET: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct LexAutomaton {
    n: StrandCount,
    /// Accepted states; the index is the state id. The initial state is 0.
    states: Vec<AdmissibleFunction>,
    /// Row-major `(state, letter - 1)`, including the fail state's row.
    transitions: Vec<u32>,
}

pub fn build_automaton(n: StrandCount) -> Result<LexAutomaton> {
    build_automaton_with_ceiling(n, DEFAULT_CEILING)
}

/// Breadth-first closure of `step_f` from the empty word's function.
pub fn build_automaton_with_ceiling(n: StrandCount, ceiling: u16) -> Result<LexAutomaton> {
    if n.get() > ceiling {
        return Err(Error::AutomatonTooLarge {
            n: n.get(),
            ceiling,
        });
    }
    let letters = n.generators() as usize;
    let mut ids: HashMap<AdmissibleFunction, u32> = HashMap::new();
    let mut states = vec![initial_f(n)];
    ids.insert(states[0].clone(), 0);
    let mut transitions: Vec<u32> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        for letter in 1..=n.generators() {
            let target = match step_f(&states[next], letter) {
                Step::Blocked => UNSET,
                Step::Next(g) => *ids.entry(g).or_insert_with_key(|g| {
                    states.push(g.clone());
                    (states.len() - 1) as u32
                }),
            };
            transitions.push(target);
        }
        next += 1;
    }
    let fail = states.len() as u32;
    for t in transitions.iter_mut() {
        if *t == UNSET {
            *t = fail;
        }
    }
    transitions.extend(std::iter::repeat_n(fail, letters));
    Ok(LexAutomaton {
        n,
        states,
        transitions,
    })
}

impl LexAutomaton {
    pub fn strands(&self) -> StrandCount {
        self.n
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn fail(&self) -> usize {
        self.states.len()
    }

    pub fn accepted_states(&self) -> usize {
        self.states.len()
    }

    /// Accepted states plus the fail state.
    pub fn total_states(&self) -> usize {
        self.states.len() + 1
    }

    /// Admissible function of an accepted state.
    pub fn state_function(&self, id: usize) -> Option<&AdmissibleFunction> {
        self.states.get(id)
    }

    pub fn state_of(&self, f: &AdmissibleFunction) -> Option<usize> {
        self.states.iter().position(|s| s == f)
    }

    pub fn next(&self, state: usize, letter: u16) -> usize {
        let width = self.n.generators() as usize;
        self.transitions[state * width + letter as usize - 1] as usize
    }

    pub fn run(&self, w: &ArtinWord) -> usize {
        w.letters()
            .iter()
            .fold(self.initial(), |s, &letter| self.next(s, letter))
    }

    pub fn accepts(&self, w: &ArtinWord) -> bool {
        self.run(w) != self.fail()
    }

    /// Number of accepted words of each length `0..=k`.
    pub fn path_counts(&self, k: usize) -> Vec<BigUint> {
        let mut current = vec![BigUint::zero(); self.states.len()];
        current[0] = BigUint::one();
        let mut out = Vec::with_capacity(k + 1);
        for step in 0..=k {
            out.push(current.iter().sum());
            if step == k {
                break;
            }
            let mut next = vec![BigUint::zero(); self.states.len()];
            for (s, count) in current.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for letter in 1..=self.n.generators() {
                    let t = self.next(s, letter);
                    if t != self.fail() {
                        next[t] += count;
                    }
                }
            }
            current = next;
        }
        out
    }

    pub fn path_count(&self, k: usize) -> BigUint {
        self.path_counts(k).pop().unwrap_or_default()
    }

    /// The complete transition structure as a plain DFA.
    pub fn to_dfa(&self) -> Dfa {
        let total = self.total_states();
        Dfa {
            alphabet: self.n.generators() as usize,
            transitions: self.transitions.iter().map(|&t| t as usize).collect(),
            accepting: (0..total).map(|s| s != self.fail()).collect(),
        }
    }

    pub fn check_minimality(&self) -> bool {
        self.to_dfa().is_minimal()
    }

    /// Runs every witness word for subsets of `{1, ..., n-2}` and reports
    /// whether they reach `2^{n-2}` distinct states.
    pub fn witness_distinctness(&self, bound: u16) -> Result<(bool, usize)> {
        let n = self.n;
        if n.get() > bound {
            return Err(Error::WitnessBoundExceeded { n: n.get(), bound });
        }
        let top = n.get() - 2;
        let mut reached = std::collections::HashSet::new();
        let mut all_accepted = true;
        for mask in 0u32..(1u32 << top) {
            let subset: Vec<u16> = (1..=top).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            let state = self.run(&build_witness(n, &subset)?);
            all_accepted &= state != self.fail();
            reached.insert(state);
        }
        let expected = 1usize << top;
        Ok((all_accepted && reached.len() == expected, reached.len()))
    }

    fn state_label(&self, id: usize) -> String {
        let set = f_to_set(&self.states[id]);
        format!("{{{}}}", set.to_strings().join(", "))
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::Json => self.to_json(),
        }
    }

    /// Graphviz rendering without the fail state.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph lex_automaton_{} {{", self.n);
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  node [shape=box, style=rounded];");
        let _ = writeln!(out, "  start [shape=point];");
        let _ = writeln!(out, "  start -> s0;");
        for id in 0..self.states.len() {
            let _ = writeln!(out, "  s{id} [label=\"{}\"];", self.state_label(id));
        }
        for id in 0..self.states.len() {
            for letter in 1..=self.n.generators() {
                let t = self.next(id, letter);
                if t != self.fail() {
                    let _ = writeln!(out, "  s{id} -> s{t} [label=\"{letter}\"];");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct State {
            id: usize,
            f: Option<Vec<i16>>,
            forbidden: Vec<String>,
        }
        #[derive(Serialize)]
        struct Doc {
            n: u16,
            states: Vec<State>,
            transitions: Vec<[usize; 3]>,
            initial: usize,
            fail: usize,
        }
        let mut states: Vec<State> = self
            .states
            .iter()
            .enumerate()
            .map(|(id, f)| State {
                id,
                f: Some(f.values().to_vec()),
                forbidden: f_to_set(f).to_strings(),
            })
            .collect();
        states.push(State {
            id: self.fail(),
            f: None,
            forbidden: (1..=self.n.generators()).map(|i| i.to_string()).collect(),
        });
        let mut transitions = Vec::new();
        for id in 0..self.states.len() {
            for letter in 1..=self.n.generators() {
                transitions.push([id, letter as usize, self.next(id, letter)]);
            }
        }
        let doc = Doc {
            n: self.n.get(),
            states,
            transitions,
            initial: self.initial(),
            fail: self.fail(),
        };
        serde_json::to_string_pretty(&doc).expect("automaton serializes")
    }
}

pub fn witness_distinctness(n: StrandCount) -> Result<bool> {
    if n.get() > DEFAULT_WITNESS_BOUND {
        return Err(Error::WitnessBoundExceeded {
            n: n.get(),
            bound: DEFAULT_WITNESS_BOUND,
        });
    }
    let automaton = build_automaton(n)?;
    Ok(automaton.witness_distinctness(DEFAULT_WITNESS_BOUND)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// A complete deterministic automaton over letters `0..alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: usize,
    /// Row-major `(state, letter)`.
    pub transitions: Vec<usize>,
    pub accepting: Vec<bool>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    /// Number of Myhill-Nerode classes, by Moore partition refinement.
    pub fn minimized_state_count(&self) -> usize {
        let states = self.num_states();
        let mut class: Vec<usize> = self.accepting.iter().map(|&a| a as usize).collect();
        let mut count = class.iter().collect::<std::collections::HashSet<_>>().len();
        loop {
            let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0; states];
            for s in 0..states {
                let mut sig = Vec::with_capacity(self.alphabet + 1);
                sig.push(class[s]);
                sig.extend(
                    (0..self.alphabet).map(|a| class[self.transitions[s * self.alphabet + a]]),
                );
                let fresh = signatures.len();
                next[s] = *signatures.entry(sig).or_insert(fresh);
            }
            let refined = signatures.len();
            class = next;
            if refined == count {
                return count;
            }
            count = refined;
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.minimized_state_count() == self.num_states()
    }

    /// A copy with an extra state that behaves exactly like `state`; every
    /// transition of `redirect_from` into `state` is sent to the copy.
    pub fn with_duplicated_state(&self, state: usize, redirect_from: usize) -> Dfa {
        let copy = self.num_states();
        let mut out = self.clone();
        let row: Vec<usize> =
            self.transitions[state * self.alphabet..(state + 1) * self.alphabet].to_vec();
        out.transitions.extend(row);
        out.accepting.push(self.accepting[state]);
        for a in 0..self.alphabet {
            let idx = redirect_from * self.alphabet + a;
            if out.transitions[idx] == state {
                out.transitions[idx] = copy;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefixes::f_for_word;

    fn n(k: usize) -> StrandCount {
        StrandCount::new(k).unwrap()
    }

    fn w(k: usize, letters: &[u16]) -> ArtinWord {
        ArtinWord::new(n(k), letters.to_vec()).unwrap()
    }

    #[test]
    fn state_counts() {
        assert_eq!(build_automaton(n(2)).unwrap().accepted_states(), 1);
        assert_eq!(build_automaton(n(3)).unwrap().accepted_states(), 5);
        assert_eq!(build_automaton(n(4)).unwrap().accepted_states(), 18);
        assert_eq!(build_automaton(n(7)).unwrap().accepted_states(), 443);
    }

    #[test]
    fn acceptance_examples() {
        let a = build_automaton(n(3)).unwrap();
        assert!(a.accepts(&w(3, &[1, 2, 1])));
        assert!(!a.accepts(&w(3, &[2, 1, 2])));
        assert!(a.accepts(&w(3, &[])));
    }

    #[test]
    fn path_count_examples() {
        let a = build_automaton(n(4)).unwrap();
        assert_eq!(a.path_count(3), BigUint::from(19u32));
        assert_eq!(a.path_count(2), BigUint::from(8u32));
        assert_eq!(a.path_count(0), BigUint::one());
    }

    #[test]
    fn ceiling_is_enforced() {
        let err = build_automaton_with_ceiling(n(9), 8).unwrap_err();
        assert!(err.to_string().contains("exponentially"));
    }

    #[test]
    fn small_automata_are_minimal() {
        for k in 2..=6 {
            assert!(build_automaton(n(k)).unwrap().check_minimality(), "n={k}");
        }
        let dfa = build_automaton(n(3)).unwrap().to_dfa();
        assert_eq!(dfa.num_states(), 6);
    }

    #[test]
    fn duplicated_state_is_detected() {
        let a = build_automaton(n(4)).unwrap();
        // state reached from the start by σ_2
        let target = a.next(0, 2);
        let dup = a.to_dfa().with_duplicated_state(target, 0);
        assert_eq!(dup.num_states(), a.total_states() + 1);
        assert!(!dup.is_minimal());
        assert_eq!(dup.minimized_state_count(), a.total_states());
    }

    #[test]
    fn fail_state_absorbs() {
        let a = build_automaton(n(5)).unwrap();
        for letter in 1..5 {
            assert_eq!(a.next(a.fail(), letter), a.fail());
        }
        for id in 0..a.accepted_states() {
            let f = a.state_function(id).unwrap();
            for letter in 1..5u16 {
                let blocked = f.get(letter) == letter as i16;
                assert_eq!(a.next(id, letter) == a.fail(), blocked);
            }
        }
    }

    #[test]
    fn three_strand_dot_matches_figure() {
        let a = build_automaton(n(3)).unwrap();
        let dot = a.to_dot();
        let labels: Vec<String> = (0..a.accepted_states()).map(|i| a.state_label(i)).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["{1 2}", "{1}", "{2 1}", "{2}", "{}"]);
        let id = |label: &str| labels.iter().position(|l| l == label).unwrap();
        let edge = |from: &str, letter: u16, to: &str| {
            format!("s{} -> s{} [label=\"{letter}\"];", id(from), id(to))
        };
        for (from, letter, to) in [
            ("{}", 1, "{}"),
            ("{}", 2, "{1 2}"),
            ("{1 2}", 1, "{2}"),
            ("{1 2}", 2, "{1 2}"),
            ("{2}", 1, "{2 1}"),
            ("{2 1}", 1, "{2 1}"),
            ("{2 1}", 2, "{1}"),
            ("{1}", 2, "{1 2}"),
        ] {
            assert!(
                dot.contains(&edge(from, letter, to)),
                "{from} -{letter}-> {to}"
            );
        }
        assert_eq!(dot.matches(" -> s").count(), 9); // 8 edges plus the start arrow
        assert!(!dot.contains("fail"));
    }

    #[test]
    fn json_export() {
        let a = build_automaton(n(2)).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(doc["n"], 2);
        assert_eq!(doc["initial"], 0);
        assert_eq!(doc["fail"], 1);
        assert_eq!(doc["states"][0]["f"], serde_json::json!([0]));
        assert_eq!(doc["transitions"], serde_json::json!([[0, 1, 0]]));
        assert!("xml".parse::<ExportFormat>().is_err());
        assert_eq!("dot".parse::<ExportFormat>().unwrap(), ExportFormat::Dot);
    }

    #[test]
    fn witnesses_reach_distinct_states() {
        assert!(witness_distinctness(n(2)).unwrap());
        let a = build_automaton(n(4)).unwrap();
        assert_eq!(a.witness_distinctness(12).unwrap(), (true, 4));
        let a10 = build_automaton(n(10)).unwrap();
        assert_eq!(a10.witness_distinctness(12).unwrap(), (true, 256));
        assert!(witness_distinctness(n(13)).is_err());
    }

    #[test]
    fn acceptance_agrees_with_step_function_on_random_words() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for k in 2..=8usize {
            let a = build_automaton(n(k)).unwrap();
            for _ in 0..(100_000 / 7) {
                let len = rng.gen_range(0..=50);
                let letters: Vec<u16> = (0..len).map(|_| rng.gen_range(1..k as u16)).collect();
                let word = w(k, &letters);
                assert_eq!(a.accepts(&word), f_for_word(&word).is_some());
            }
        }
    }
}
