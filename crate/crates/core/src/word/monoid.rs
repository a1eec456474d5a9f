//! Transition monoids and the counter-freeness test.
//!
//! The counter-freeness condition quantifies over all finite words: if the
//! automaton admits a path on `w^n` from `q` back to `q` then it admits one
//! on `w` itself. The transition monoid makes that finite: it suffices to
//! check the diagonal condition on every monoid element.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// Boolean transition matrix: `rows[q]` is the successor bitmask of state `q`.
pub type BoolMatrix = Vec<u64>;

fn mat_mul(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    let n = a.len();
    let mut out = vec![0u64; n];
    for q in 0..n {
        let mut row = 0u64;
        let mut mids = a[q];
        while mids != 0 {
            let m = mids.trailing_zeros() as usize;
            mids &= mids - 1;
            row |= b[m];
        }
        out[q] = row;
    }
    out
}

fn identity(n: usize) -> BoolMatrix {
    (0..n).map(|q| 1u64 << q).collect()
}

/// The finite monoid of Boolean matrices generated by an automaton's letter
/// matrices, with a shortest generator word per element and the full
/// composition table.
#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    pub dim: usize,
    pub elements: Vec<BoolMatrix>,
    /// Index of each letter's matrix in `elements`.
    pub letter_element: Vec<usize>,
    /// A shortest letter word realizing each element (empty for identity).
    pub word_of: Vec<Vec<usize>>,
    /// `table[i][j]` is the index of `elements[i] * elements[j]`.
    pub table: Vec<Vec<usize>>,
    index: BTreeMap<BoolMatrix, usize>,
}

impl TransitionMonoid {
    pub fn index_of(&self, m: &BoolMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Closure of the letter matrices under product, including the identity.
pub fn transition_monoid(num_states: usize, letters: &[BoolMatrix]) -> TransitionMonoid {
    let mut elements = Vec::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut index: BTreeMap<BoolMatrix, usize> = BTreeMap::new();

    let id = identity(num_states);
    index.insert(id.clone(), 0);
    elements.push(id);
    words.push(Vec::new());

    let mut letter_element = Vec::with_capacity(letters.len());
    for (l, m) in letters.iter().enumerate() {
        let idx = match index.get(m) {
            Some(&i) => i,
            None => {
                let i = elements.len();
                index.insert(m.clone(), i);
                elements.push(m.clone());
                words.push(vec![l]);
                i
            }
        };
        letter_element.push(idx);
    }

    // Closure under right product with generators; BFS order keeps the
    // representative words shortest.
    let mut queue: Vec<usize> = (0..elements.len()).collect();
    let mut head = 0;
    while head < queue.len() {
        let e = queue[head];
        head += 1;
        for (l, m) in letters.iter().enumerate() {
            let prod = mat_mul(&elements[e], m);
            if !index.contains_key(&prod) {
                let i = elements.len();
                index.insert(prod.clone(), i);
                elements.push(prod);
                let mut w = words[e].clone();
                w.push(l);
                words.push(w);
                queue.push(i);
            }
        }
    }

    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = mat_mul(&elements[i], &elements[j]);
            table[i][j] = *index.get(&prod).expect("monoid closed under product");
        }
    }

    TransitionMonoid {
        dim: num_states,
        elements,
        letter_element,
        word_of: words,
        table,
        index,
    }
}

/// A violation of counter-freeness: the automaton cycles on `word^n` at
/// `state` but not on `word` alone.
#[derive(Clone, Debug)]
pub struct CounterWitness {
    pub word: Vec<usize>,
    pub n: usize,
    pub state: usize,
}

/// Diagonal condition on every monoid element: `M^n[q][q]` implies
/// `M[q][q]` for all `n >= 1` and states `q`.
pub fn is_counter_free(monoid: &TransitionMonoid) -> Result<(), CounterWitness> {
    for (i, m) in monoid.elements.iter().enumerate() {
        if monoid.word_of[i].is_empty() && i == 0 {
            continue; // identity: diagonal full, condition trivial
        }
        let diag = |mat: &BoolMatrix| -> u64 {
            let mut d = 0u64;
            for (q, row) in mat.iter().enumerate() {
                if row & (1 << q) != 0 {
                    d |= 1 << q;
                }
            }
            d
        };
        let base = diag(m);
        // Iterate powers until the power sequence cycles; the monoid is
        // finite so this happens within |monoid| steps.
        let mut seen = alloc::collections::BTreeSet::new();
        let mut cur = i;
        let mut n = 1usize;
        loop {
            let d = diag(&monoid.elements[cur]);
            if d & !base != 0 {
                let q = (d & !base).trailing_zeros() as usize;
                return Err(CounterWitness {
                    word: monoid.word_of[i].clone(),
                    n,
                    state: q,
                });
            }
            if !seen.insert(cur) {
                break;
            }
            cur = monoid.table[cur][i];
            n += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::automaton::{FiniteWordAutomaton, WordAlphabet};

    #[test]
    fn one_state_automaton_has_trivial_monoid() {
        let mut a = FiniteWordAutomaton::new(WordAlphabet::from_names(&["p"]), 1, 0);
        for l in 0..2 {
            a.add_transition(0, l, 0);
        }
        let m = transition_monoid(a.num_states, &a.letter_matrices());
        assert_eq!(m.len(), 1);
        assert!(is_counter_free(&m).is_ok());
    }

    #[test]
    fn two_state_toggle_is_a_counter() {
        // letter {} toggles the two states: the canonical counter.
        let mut a = FiniteWordAutomaton::new(WordAlphabet::from_names(&[]), 2, 0);
        a.add_transition(0, 0, 1);
        a.add_transition(1, 0, 0);
        let m = transition_monoid(a.num_states, &a.letter_matrices());
        // Z2 structure: identity plus the toggle.
        assert_eq!(m.len(), 2);
        let w = is_counter_free(&m).unwrap_err();
        assert_eq!(w.word, alloc::vec![0]);
        assert_eq!(w.n, 2);
    }

    /// Independent closure count for a fixed 3-state automaton.
    #[test]
    fn monoid_size_matches_brute_closure() {
        let mut a = FiniteWordAutomaton::new(WordAlphabet::from_names(&["p"]), 3, 0);
        // letter 0: 0->1, 1->2, 2->2 ; letter 1: 0->0, 1->0, 2->1
        a.add_transition(0, 0, 1);
        a.add_transition(1, 0, 2);
        a.add_transition(2, 0, 2);
        a.add_transition(0, 1, 0);
        a.add_transition(1, 1, 0);
        a.add_transition(2, 1, 1);
        let mats = a.letter_matrices();
        let m = transition_monoid(3, &mats);

        // brute force: all products of generator words up to length 9
        let mut set = alloc::collections::BTreeSet::new();
        set.insert(identity(3));
        let mut frontier = alloc::vec![identity(3)];
        for _ in 0..9 {
            let mut next = Vec::new();
            for f in &frontier {
                for g in &mats {
                    let prod = mat_mul(f, g);
                    if set.insert(prod.clone()) {
                        next.push(prod);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(m.len(), set.len());
    }
}
