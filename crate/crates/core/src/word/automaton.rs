//! Automaton data types. Letters are subsets of a proposition list,
//! represented as bitmasks, so an alphabet with `k` propositions has `2^k`
//! letters and letter index = bitmask.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// Alphabet `2^props`. Letter indices are bitmasks over `props`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordAlphabet {
    pub props: Vec<String>,
}

impl WordAlphabet {
    pub fn new(props: Vec<String>) -> Self {
        assert!(props.len() <= 20, "alphabet too large");
        WordAlphabet { props }
    }

    pub fn from_names(props: &[&str]) -> Self {
        WordAlphabet::new(props.iter().map(|s| s.to_string()).collect())
    }

    pub fn num_letters(&self) -> usize {
        1usize << self.props.len()
    }

    pub fn display_letter(&self, letter: usize) -> String {
        let mut s = String::from("{");
        let mut first = true;
        for (i, p) in self.props.iter().enumerate() {
            if letter & (1 << i) != 0 {
                if !first {
                    s.push(',');
                }
                s.push_str(p);
                first = false;
            }
        }
        s.push('}');
        s
    }
}

/// Nondeterministic (or deterministic) automaton over finite words.
#[derive(Clone, Debug)]
pub struct FiniteWordAutomaton {
    pub alphabet: WordAlphabet,
    pub num_states: usize,
    pub initial: usize,
    /// `delta[state][letter]` is the successor set.
    pub delta: Vec<Vec<BTreeSet<usize>>>,
    pub accepting: BTreeSet<usize>,
    pub deterministic: bool,
}

impl FiniteWordAutomaton {
    pub fn new(alphabet: WordAlphabet, num_states: usize, initial: usize) -> Self {
        let letters = alphabet.num_letters();
        FiniteWordAutomaton {
            alphabet,
            num_states,
            initial,
            delta: vec![vec![BTreeSet::new(); letters]; num_states],
            accepting: BTreeSet::new(),
            deterministic: false,
        }
    }

    pub fn add_transition(&mut self, from: usize, letter: usize, to: usize) {
        self.delta[from][letter].insert(to);
    }

    /// Checks the structural invariants: referenced states exist and the
    /// deterministic flag matches the transition relation.
    pub fn validate(&self) -> Result<(), String> {
        if self.initial >= self.num_states {
            return Err(String::from("initial state out of range"));
        }
        for q in &self.accepting {
            if *q >= self.num_states {
                return Err(String::from("accepting state out of range"));
            }
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (l, succs) in row.iter().enumerate() {
                for s in succs {
                    if *s >= self.num_states {
                        return Err(alloc::format!("transition {q} --{l}--> {s} out of range"));
                    }
                }
                if self.deterministic && succs.len() > 1 {
                    return Err(alloc::format!("state {q} is nondeterministic on letter {l}"));
                }
            }
        }
        Ok(())
    }

    /// Does the automaton accept the finite word (sequence of letters)?
    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut current: BTreeSet<usize> = BTreeSet::new();
        current.insert(self.initial);
        for &a in word {
            let mut next = BTreeSet::new();
            for &q in &current {
                next.extend(self.delta[q][a].iter().copied());
            }
            current = next;
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.accepting.contains(q))
    }

    /// Boolean transition matrices per letter, rows as bitmasks.
    pub fn letter_matrices(&self) -> Vec<Vec<u64>> {
        assert!(self.num_states <= 64, "monoid machinery limited to 64 states");
        (0..self.alphabet.num_letters())
            .map(|l| {
                (0..self.num_states)
                    .map(|q| {
                        let mut row = 0u64;
                        for &s in &self.delta[q][l] {
                            row |= 1 << s;
                        }
                        row
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branching {
    Nondeterministic,
    Universal,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Acceptance {
    /// `pattern` holds the accepting states; a run succeeds when it visits
    /// them infinitely often.
    Buchi,
    /// `pattern` holds the rejecting states; a run succeeds when it visits
    /// them finitely often.
    CoBuchi,
}

/// Büchi or coBüchi automaton over infinite words.
#[derive(Clone, Debug)]
pub struct OmegaWordAutomaton {
    pub alphabet: WordAlphabet,
    pub num_states: usize,
    pub initial: usize,
    pub delta: Vec<Vec<BTreeSet<usize>>>,
    /// The distinguished state set `F`; its reading depends on `acceptance`.
    pub pattern: BTreeSet<usize>,
    pub branching: Branching,
    pub acceptance: Acceptance,
}

impl OmegaWordAutomaton {
    pub fn new(
        alphabet: WordAlphabet,
        num_states: usize,
        initial: usize,
        branching: Branching,
        acceptance: Acceptance,
    ) -> Self {
        let letters = alphabet.num_letters();
        OmegaWordAutomaton {
            alphabet,
            num_states,
            initial,
            delta: vec![vec![BTreeSet::new(); letters]; num_states],
            pattern: BTreeSet::new(),
            branching,
            acceptance,
        }
    }

    pub fn add_transition(&mut self, from: usize, letter: usize, to: usize) {
        self.delta[from][letter].insert(to);
    }

    pub fn letter_matrices(&self) -> Vec<Vec<u64>> {
        assert!(self.num_states <= 64, "monoid machinery limited to 64 states");
        (0..self.alphabet.num_letters())
            .map(|l| {
                (0..self.num_states)
                    .map(|q| {
                        let mut row = 0u64;
                        for &s in &self.delta[q][l] {
                            row |= 1 << s;
                        }
                        row
                    })
                    .collect()
            })
            .collect()
    }

    /// True when `state` loops to itself (and nowhere else) on every letter.
    pub fn is_sink(&self, state: usize) -> bool {
        self.delta[state]
            .iter()
            .all(|succs| succs.len() == 1 && succs.contains(&state))
    }
}
