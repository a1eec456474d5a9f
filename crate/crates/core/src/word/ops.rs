//! Subset construction, DFA minimization and bounded language comparison.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::word::automaton::FiniteWordAutomaton;

/// Subset construction. The result is deterministic and complete (the empty
/// subset acts as a trap) and accepts the same finite words.
pub fn determinize(a: &FiniteWordAutomaton) -> FiniteWordAutomaton {
    let letters = a.alphabet.num_letters();
    let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut init = BTreeSet::new();
    init.insert(a.initial);
    index.insert(init.clone(), 0);
    subsets.push(init);

    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < subsets.len() {
        let cur = subsets[head].clone();
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters {
            let mut next = BTreeSet::new();
            for &q in &cur {
                next.extend(a.delta[q][l].iter().copied());
            }
            let id = match index.get(&next) {
                Some(&i) => i,
                None => {
                    let i = subsets.len();
                    index.insert(next.clone(), i);
                    subsets.push(next);
                    i
                }
            };
            row.push(id);
        }
        delta.push(row);
        head += 1;
    }

    let mut out = FiniteWordAutomaton::new(a.alphabet.clone(), subsets.len(), 0);
    out.deterministic = true;
    for (s, row) in delta.iter().enumerate() {
        for (l, &t) in row.iter().enumerate() {
            out.add_transition(s, l, t);
        }
        if subsets[s].iter().any(|q| a.accepting.contains(q)) {
            out.accepting.insert(s);
        }
    }
    out
}

/// Moore partition refinement on a complete DFA. States unreachable from the
/// initial state are dropped first.
pub fn minimize_dfa(a: &FiniteWordAutomaton) -> FiniteWordAutomaton {
    assert!(a.deterministic, "minimization needs a deterministic automaton");
    let letters = a.alphabet.num_letters();

    // reachable restriction
    let mut reach = vec![false; a.num_states];
    let mut stack = vec![a.initial];
    reach[a.initial] = true;
    while let Some(q) = stack.pop() {
        for l in 0..letters {
            for &t in &a.delta[q][l] {
                if !reach[t] {
                    reach[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    let states: Vec<usize> = (0..a.num_states).filter(|&q| reach[q]).collect();
    let pos: BTreeMap<usize, usize> = states.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let step = |q: usize, l: usize| -> usize {
        *a.delta[q][l].iter().next().expect("complete dfa")
    };

    // initial partition: accepting vs not
    let mut class: Vec<usize> = states
        .iter()
        .map(|q| usize::from(a.accepting.contains(q)))
        .collect();
    loop {
        let mut sig_index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next_class = vec![0usize; states.len()];
        for (i, &q) in states.iter().enumerate() {
            let sig: Vec<usize> = (0..letters).map(|l| class[pos[&step(q, l)]]).collect();
            let key = (class[i], sig);
            let n = sig_index.len();
            let c = *sig_index.entry(key).or_insert(n);
            next_class[i] = c;
        }
        if next_class == class {
            break;
        }
        class = next_class;
    }

    let num_classes = class.iter().max().map_or(0, |m| m + 1);
    let mut out = FiniteWordAutomaton::new(a.alphabet.clone(), num_classes, class[pos[&a.initial]]);
    out.deterministic = true;
    let mut done = vec![false; num_classes];
    for (i, &q) in states.iter().enumerate() {
        let c = class[i];
        if done[c] {
            continue;
        }
        done[c] = true;
        for l in 0..letters {
            out.add_transition(c, l, class[pos[&step(q, l)]]);
        }
        if a.accepting.contains(&q) {
            out.accepting.insert(c);
        }
    }
    out
}

/// Exhaustive comparison of the finite-word languages up to `max_len`,
/// returning the first (shortest, lexicographically first) differing word.
pub fn bounded_language_equiv(
    a: &FiniteWordAutomaton,
    b: &FiniteWordAutomaton,
    max_len: usize,
) -> Option<Vec<usize>> {
    assert_eq!(a.alphabet.num_letters(), b.alphabet.num_letters());
    let letters = a.alphabet.num_letters();
    // BFS over pairs of subset states, tracking the word.
    let mut init_a = BTreeSet::new();
    init_a.insert(a.initial);
    let mut init_b = BTreeSet::new();
    init_b.insert(b.initial);
    let acc = |m: &FiniteWordAutomaton, s: &BTreeSet<usize>| s.iter().any(|q| m.accepting.contains(q));
    if acc(a, &init_a) != acc(b, &init_b) {
        return Some(Vec::new());
    }
    let mut visited: BTreeSet<(BTreeSet<usize>, BTreeSet<usize>)> = BTreeSet::new();
    let mut frontier = vec![(init_a, init_b, Vec::new())];
    for _ in 0..max_len {
        let mut next_frontier = Vec::new();
        for (sa, sb, w) in frontier {
            for l in 0..letters {
                let mut na = BTreeSet::new();
                for &q in &sa {
                    na.extend(a.delta[q][l].iter().copied());
                }
                let mut nb = BTreeSet::new();
                for &q in &sb {
                    nb.extend(b.delta[q][l].iter().copied());
                }
                let mut w2 = w.clone();
                w2.push(l);
                if acc(a, &na) != acc(b, &nb) {
                    return Some(w2);
                }
                if visited.insert((na.clone(), nb.clone())) {
                    next_frontier.push((na, nb, w2));
                }
            }
        }
        frontier = next_frontier;
        if frontier.is_empty() {
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::automaton::WordAlphabet;

    fn simple_nfa() -> FiniteWordAutomaton {
        // accepts words containing letter {p} (letter index 1)
        let mut a = FiniteWordAutomaton::new(WordAlphabet::from_names(&["p"]), 2, 0);
        for l in 0..2 {
            a.add_transition(0, l, 0);
            a.add_transition(1, l, 1);
        }
        a.add_transition(0, 1, 1);
        a.accepting.insert(1);
        a
    }

    #[test]
    fn determinize_preserves_language() {
        let a = simple_nfa();
        let d = determinize(&a);
        assert!(d.deterministic);
        assert!(bounded_language_equiv(&a, &d, 7).is_none());
    }

    #[test]
    fn minimize_already_minimal_is_isomorphic() {
        let a = simple_nfa();
        let d = determinize(&a);
        let m = minimize_dfa(&d);
        assert_eq!(m.num_states, 2);
        assert!(bounded_language_equiv(&d, &m, 8).is_none());
        let mm = minimize_dfa(&m);
        assert_eq!(mm.num_states, m.num_states);
    }

    #[test]
    fn bounded_equiv_reports_witness() {
        let a = simple_nfa();
        let mut b = a.clone();
        b.accepting.insert(0); // now also accepts the empty word and everything
        let w = bounded_language_equiv(&a, &b, 5).unwrap();
        assert!(w.is_empty());
    }
}
