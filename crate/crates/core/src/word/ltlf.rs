//! Finite-trace compilation: from a future formula (strong `X`, weak `wX`)
//! to a nondeterministic automaton accepting exactly the nonempty finite
//! words that satisfy it at position 0.
//!
//! The construction is the standard obligation-set tableau: a state is the
//! set of formulas the remaining suffix must satisfy; reading a letter
//! discharges local requirements and produces next obligations, and a word
//! may end at a position where every obligation is end-compatible.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::fragment::{Fragment, NotInFragment};
use crate::rewrite::to_nnf;
use crate::word::automaton::{FiniteWordAutomaton, WordAlphabet};

/// Interned normalized formulas; ids index `nodes`.
struct Arena {
    nodes: Vec<Node>,
    index: BTreeMap<Node, usize>,
}

/// Tableau-level syntax: literals over letter bits, boolean structure, and
/// the temporal operators with a finite-word reading.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Node {
    True,
    False,
    Pos(usize),
    Neg(usize),
    Or(usize, usize),
    And(usize, usize),
    Next(usize),
    WeakNext(usize),
    Until(usize, usize),
    Release(usize, usize),
}

impl Arena {
    fn new() -> Self {
        Arena { nodes: Vec::new(), index: BTreeMap::new() }
    }

    fn intern(&mut self, n: Node) -> usize {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        let i = self.nodes.len();
        self.index.insert(n.clone(), i);
        self.nodes.push(n);
        i
    }

    /// Lowers an NNF formula; props map to bit positions via `prop_index`.
    fn lower(&mut self, f: &Formula, prop_index: &BTreeMap<&str, usize>) -> Result<usize, NotInFragment> {
        let err = |d: &str| NotInFragment {
            fragment: Fragment::Ltlf,
            detail: String::from(d),
        };
        Ok(match f {
            Formula::True => self.intern(Node::True),
            Formula::False => self.intern(Node::False),
            Formula::Prop(p) => {
                let i = *prop_index.get(p.as_ref()).expect("prop collected");
                self.intern(Node::Pos(i))
            }
            Formula::Not(a) => match &**a {
                Formula::Prop(p) => {
                    let i = *prop_index.get(p.as_ref()).expect("prop collected");
                    self.intern(Node::Neg(i))
                }
                _ => return Err(err("negation above a non-literal after NNF")),
            },
            Formula::Or(a, b) => {
                let (x, y) = (self.lower(a, prop_index)?, self.lower(b, prop_index)?);
                self.intern(Node::Or(x, y))
            }
            Formula::And(a, b) => {
                let (x, y) = (self.lower(a, prop_index)?, self.lower(b, prop_index)?);
                self.intern(Node::And(x, y))
            }
            Formula::Next(a) => {
                let x = self.lower(a, prop_index)?;
                self.intern(Node::Next(x))
            }
            Formula::WeakNext(a) => {
                let x = self.lower(a, prop_index)?;
                self.intern(Node::WeakNext(x))
            }
            Formula::Until(a, b) => {
                let (x, y) = (self.lower(a, prop_index)?, self.lower(b, prop_index)?);
                self.intern(Node::Until(x, y))
            }
            Formula::Release(a, b) => {
                let (x, y) = (self.lower(a, prop_index)?, self.lower(b, prop_index)?);
                self.intern(Node::Release(x, y))
            }
            // Finite-word identities: F a = true U a, G a = false R a,
            // a W b = b R (a | b).
            Formula::Eventually(a) => {
                let t = self.intern(Node::True);
                let x = self.lower(a, prop_index)?;
                self.intern(Node::Until(t, x))
            }
            Formula::Globally(a) => {
                let b = self.intern(Node::False);
                let x = self.lower(a, prop_index)?;
                self.intern(Node::Release(b, x))
            }
            Formula::WeakUntil(a, b) => {
                let x = self.lower(a, prop_index)?;
                let y = self.lower(b, prop_index)?;
                let or = self.intern(Node::Or(x, y));
                self.intern(Node::Release(y, or))
            }
            Formula::Exists(_)
            | Formula::All(_)
            | Formula::Count(_, _)
            | Formula::Yesterday(_)
            | Formula::Since(_, _) => return Err(err("path quantifier, count or past operator")),
        })
    }
}

/// One disjunct of the one-step normal form of an obligation set: literal
/// requirements on the current letter, whether the word may end here, and
/// the obligations on the next position (None = the word must end here).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Clause {
    pos: u64,
    neg: u64,
    endable: bool,
    next: Option<BTreeSet<usize>>,
}

impl Clause {
    fn top() -> Clause {
        Clause { pos: 0, neg: 0, endable: true, next: Some(BTreeSet::new()) }
    }

    fn merge(&self, other: &Clause) -> Option<Clause> {
        let pos = self.pos | other.pos;
        let neg = self.neg | other.neg;
        if pos & neg != 0 {
            return None;
        }
        let endable = self.endable && other.endable;
        let next = match (&self.next, &other.next) {
            (Some(a), Some(b)) => Some(a.union(b).cloned().collect()),
            _ => None,
        };
        if !endable && next.is_none() {
            return None;
        }
        Some(Clause { pos, neg, endable, next })
    }

    fn compatible(&self, letter: u64) -> bool {
        self.pos & !letter == 0 && self.neg & letter == 0
    }
}

/// Lazily evaluated tableau over the closure of one formula.
pub struct LtlfTableau {
    arena: Arena,
    /// Per obligation formula, its one-step clauses.
    xnf_memo: BTreeMap<usize, Vec<Clause>>,
    /// Interned obligation sets; the NFA states.
    states: Vec<BTreeSet<usize>>,
    state_index: BTreeMap<BTreeSet<usize>, usize>,
    clauses_of_state: Vec<Vec<Clause>>,
    pub initial: usize,
    pub num_props: usize,
}

impl LtlfTableau {
    /// Builds the tableau for `f`, which must be a future formula (fragment
    /// `ltlf` after NNF). `props` fixes the bit order of the letter alphabet.
    pub fn new(f: &Formula, props: &[String]) -> Result<Self, NotInFragment> {
        let nnf = to_nnf(f);
        let mut arena = Arena::new();
        let prop_index: BTreeMap<&str, usize> =
            props.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        for p in nnf.props() {
            if !prop_index.contains_key(p.as_str()) {
                return Err(NotInFragment {
                    fragment: Fragment::Ltlf,
                    detail: alloc::format!("undeclared proposition {p}"),
                });
            }
        }
        let root = arena.lower(&nnf, &prop_index)?;
        let mut t = LtlfTableau {
            arena,
            xnf_memo: BTreeMap::new(),
            states: Vec::new(),
            state_index: BTreeMap::new(),
            clauses_of_state: Vec::new(),
            initial: 0,
            num_props: props.len(),
        };
        let mut init = BTreeSet::new();
        init.insert(root);
        t.initial = t.intern_state(init);
        Ok(t)
    }

    fn intern_state(&mut self, s: BTreeSet<usize>) -> usize {
        if let Some(&i) = self.state_index.get(&s) {
            return i;
        }
        let clauses = self.clauses_of_set(&s);
        let i = self.states.len();
        self.state_index.insert(s.clone(), i);
        self.states.push(s);
        self.clauses_of_state.push(clauses);
        i
    }

    fn xnf(&mut self, id: usize) -> Vec<Clause> {
        if let Some(c) = self.xnf_memo.get(&id) {
            return c.clone();
        }
        let node = self.arena.nodes[id].clone();
        let out = match node {
            Node::True => vec![Clause::top()],
            Node::False => vec![],
            Node::Pos(i) => vec![Clause { pos: 1 << i, ..Clause::top() }],
            Node::Neg(i) => vec![Clause { neg: 1 << i, ..Clause::top() }],
            Node::Or(a, b) => {
                let mut v = self.xnf(a);
                v.extend(self.xnf(b));
                v
            }
            Node::And(a, b) => {
                let va = self.xnf(a);
                let vb = self.xnf(b);
                let mut v = Vec::new();
                for x in &va {
                    for y in &vb {
                        if let Some(m) = x.merge(y) {
                            v.push(m);
                        }
                    }
                }
                v
            }
            Node::Next(a) => vec![Clause {
                pos: 0,
                neg: 0,
                endable: false,
                next: Some([a].into_iter().collect()),
            }],
            Node::WeakNext(a) => vec![Clause {
                pos: 0,
                neg: 0,
                endable: true,
                next: Some([a].into_iter().collect()),
            }],
            Node::Until(a, b) => {
                // b | (a & X (a U b))
                let mut v = self.xnf(b);
                let tail = Clause {
                    pos: 0,
                    neg: 0,
                    endable: false,
                    next: Some([id].into_iter().collect()),
                };
                for x in self.xnf(a) {
                    if let Some(m) = x.merge(&tail) {
                        v.push(m);
                    }
                }
                v
            }
            Node::Release(a, b) => {
                // b & (a | wX (a R b))
                let vb = self.xnf(b);
                let mut alt = self.xnf(a);
                alt.push(Clause {
                    pos: 0,
                    neg: 0,
                    endable: true,
                    next: Some([id].into_iter().collect()),
                });
                let mut v = Vec::new();
                for x in &vb {
                    for y in &alt {
                        if let Some(m) = x.merge(y) {
                            v.push(m);
                        }
                    }
                }
                v
            }
        };
        let mut dedup: Vec<Clause> = Vec::new();
        for c in out {
            if !dedup.contains(&c) {
                dedup.push(c);
            }
        }
        self.xnf_memo.insert(id, dedup.clone());
        dedup
    }

    fn clauses_of_set(&mut self, s: &BTreeSet<usize>) -> Vec<Clause> {
        let mut acc = vec![Clause::top()];
        for &f in s {
            let cf = self.xnf(f);
            let mut next = Vec::new();
            for a in &acc {
                for b in &cf {
                    if let Some(m) = a.merge(b) {
                        if !next.contains(&m) {
                            next.push(m);
                        }
                    }
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// May a word end right after reading `letter` in `state`?
    pub fn end_accept(&self, state: usize, letter: u64) -> bool {
        self.clauses_of_state[state]
            .iter()
            .any(|c| c.endable && c.compatible(letter))
    }

    /// Successor obligation states when the word continues past `letter`.
    pub fn successors(&mut self, state: usize, letter: u64) -> Vec<usize> {
        let clauses = self.clauses_of_state[state].clone();
        let mut out = Vec::new();
        for c in clauses {
            if !c.compatible(letter) {
                continue;
            }
            if let Some(next) = c.next {
                let id = self.intern_state(next);
                if !out.contains(&id) {
                    out.push(id);
                }
            }
        }
        out
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }
}

/// Materializes the tableau as an explicit automaton over the full letter
/// alphabet, with a fresh accepting state entered when a word may end.
pub fn ltlf_to_nfa(f: &Formula, props: &[String]) -> Result<FiniteWordAutomaton, NotInFragment> {
    crate::fragment::require(f, Fragment::Ltlf)?;
    let mut tab = LtlfTableau::new(f, props)?;
    let alphabet = WordAlphabet::new(props.to_vec());
    let letters = alphabet.num_letters();

    // Explore reachable tableau states.
    let mut trans: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut ends: Vec<Vec<bool>> = Vec::new();
    let mut explored = 0usize;
    while explored < tab.num_states() {
        let s = explored;
        explored += 1;
        let mut row = Vec::with_capacity(letters);
        let mut erow = Vec::with_capacity(letters);
        for a in 0..letters {
            row.push(tab.successors(s, a as u64));
            erow.push(tab.end_accept(s, a as u64));
        }
        trans.push(row);
        ends.push(erow);
    }

    let n = trans.len();
    let accept = n; // dedicated final state
    let mut nfa = FiniteWordAutomaton::new(alphabet, n + 1, tab.initial);
    for (s, row) in trans.iter().enumerate() {
        for (a, succs) in row.iter().enumerate() {
            for &t in succs {
                nfa.add_transition(s, a, t);
            }
            if ends[s][a] {
                nfa.add_transition(s, a, accept);
            }
        }
    }
    nfa.accepting.insert(accept);
    Ok(nfa)
}

/// Direct recursive finite-word semantics, used as the independent oracle in
/// tests: the word is a slice of letters, evaluation at position `i`.
pub fn eval_ltlf(f: &Formula, word: &[u64], i: usize, prop_index: &BTreeMap<&str, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Prop(p) => {
            let b = prop_index.get(p.as_ref()).copied();
            match b {
                Some(b) => word[i] & (1 << b) != 0,
                None => false,
            }
        }
        Formula::Not(a) => !eval_ltlf(a, word, i, prop_index),
        Formula::Or(a, b) => eval_ltlf(a, word, i, prop_index) || eval_ltlf(b, word, i, prop_index),
        Formula::And(a, b) => eval_ltlf(a, word, i, prop_index) && eval_ltlf(b, word, i, prop_index),
        Formula::Next(a) => i + 1 < word.len() && eval_ltlf(a, word, i + 1, prop_index),
        Formula::WeakNext(a) => i + 1 >= word.len() || eval_ltlf(a, word, i + 1, prop_index),
        Formula::Until(a, b) => (i..word.len()).any(|j| {
            eval_ltlf(b, word, j, prop_index) && (i..j).all(|k| eval_ltlf(a, word, k, prop_index))
        }),
        Formula::Release(a, b) => (i..word.len()).all(|j| {
            eval_ltlf(b, word, j, prop_index) || (i..j).any(|k| eval_ltlf(a, word, k, prop_index))
        }),
        Formula::WeakUntil(a, b) => {
            let g = (i..word.len()).all(|j| eval_ltlf(a, word, j, prop_index));
            g || eval_ltlf(&Formula::until((**a).clone(), (**b).clone()), word, i, prop_index)
        }
        Formula::Eventually(a) => (i..word.len()).any(|j| eval_ltlf(a, word, j, prop_index)),
        Formula::Globally(a) => (i..word.len()).all(|j| eval_ltlf(a, word, j, prop_index)),
        Formula::Exists(_) | Formula::All(_) | Formula::Count(_, _) => {
            panic!("not a linear formula")
        }
        Formula::Yesterday(a) => i > 0 && eval_ltlf(a, word, i - 1, prop_index),
        Formula::Since(a, b) => (0..=i).rev().any(|j| {
            eval_ltlf(b, word, j, prop_index)
                && (j + 1..=i).all(|k| eval_ltlf(a, word, k, prop_index))
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    fn props2() -> Vec<String> {
        vec!["p".into(), "q".into()]
    }

    fn check_against_oracle(f: &F, max_len: usize) {
        let props = props2();
        let nfa = ltlf_to_nfa(f, &props).unwrap();
        let prop_index: BTreeMap<&str, usize> =
            props.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        // all words up to max_len over 4 letters
        let mut words: Vec<Vec<u64>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &words {
                for a in 0..4u64 {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            for w in next {
                words.push(w);
            }
            words.dedup();
        }
        for w in &words {
            let by_nfa = nfa.accepts(&w.iter().map(|&x| x as usize).collect::<Vec<_>>());
            let by_sem = !w.is_empty() && eval_ltlf(f, w, 0, &prop_index);
            assert_eq!(by_nfa, by_sem, "formula {f} word {w:?}");
        }
    }

    #[test]
    fn atom_accepts_first_letter() {
        check_against_oracle(&F::prop("p"), 3);
    }

    #[test]
    fn strong_next_rejects_singletons() {
        let f = F::next(F::prop("p"));
        let nfa = ltlf_to_nfa(&f, &props2()).unwrap();
        for a in 0..4 {
            assert!(!nfa.accepts(&[a]));
        }
        let g = F::weak_next(F::prop("p"));
        let nfa2 = ltlf_to_nfa(&g, &props2()).unwrap();
        for a in 0..4 {
            assert!(nfa2.accepts(&[a]));
        }
    }

    #[test]
    fn tableau_matches_semantics_on_small_words() {
        let p = || F::prop("p");
        let q = || F::prop("q");
        let formulas = [
            F::until(p(), q()),
            F::release(p(), q()),
            F::globally(F::or(F::not(p()), F::next(q()))),
            F::eventually(F::and(p(), F::weak_next(q()))),
            F::and(F::until(p(), q()), F::next(F::next(p()))),
            F::weak_until(p(), F::and(q(), F::next(p()))),
            F::not(F::until(p(), F::not(q()))),
        ];
        for f in &formulas {
            check_against_oracle(f, 5);
        }
    }
}
