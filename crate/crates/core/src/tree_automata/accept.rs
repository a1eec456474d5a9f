//! Acceptance of regular trees.
//!
//! One-way hesitant automata are decided exactly by a membership-game
//! fixpoint per component, lowest component first: least fixpoints for
//! existential (odd) components, greatest for universal (even) ones,
//! single-step evaluation for transient ones. Graded atoms count over the
//! outgoing edge multiset, so parallel edges are distinct children.
//!
//! Two-way linear automata get a three-valued bounded game over a
//! truncation of the unfolding, used as a cross-checking oracle; their exact
//! acceptance is defined through the translation to the past logic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::semantics::{BoundedVerdict, Tri};
use crate::tree::{RegularTree, TruncatedTree};
use crate::tree_automata::gta::{
    validate_subclass, ComponentType, GradedTreeAutomaton, InitialCondition, SubclassTarget,
};
use crate::tree_automata::pbf::{Atom, Modality, Pbf};

#[derive(Clone, Debug)]
pub enum AcceptError {
    AlphabetMismatch(String),
    SubclassViolation(String),
}

impl core::fmt::Display for AcceptError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AcceptError::AlphabetMismatch(d) => write!(f, "alphabet mismatch: {d}"),
            AcceptError::SubclassViolation(d) => write!(f, "subclass violation: {d}"),
        }
    }
}

fn check_alphabet(a: &GradedTreeAutomaton, t: &RegularTree) -> Result<(), AcceptError> {
    if a.sig.props() != t.sig.props() {
        return Err(AcceptError::AlphabetMismatch(format!(
            "automaton {:?} vs tree {:?}",
            a.sig.props(),
            t.sig.props()
        )));
    }
    Ok(())
}

/// Exact acceptance of a one-way hesitant weak automaton.
pub fn accept_hwgt(a: &GradedTreeAutomaton, t: &RegularTree) -> Result<bool, AcceptError> {
    validate_subclass(a, SubclassTarget::Hwgt)
        .map_err(|v| AcceptError::SubclassViolation(format!("{v}")))?;
    check_alphabet(a, t)?;
    Ok(accept_hwgt_unchecked(a, t))
}

/// The fixpoint engine without revalidation, for callers in loops.
pub fn accept_hwgt_unchecked(a: &GradedTreeAutomaton, t: &RegularTree) -> bool {
    let n_nodes = t.num_nodes();
    let mut win: Vec<Vec<bool>> = vec![vec![false; n_nodes]; a.num_states()];

    let eval = |body: &Pbf, v: usize, win: &Vec<Vec<bool>>| -> bool {
        eval_pbf(body, v, t, win)
    };

    for ci in a.component_order() {
        let comp = &a.components[ci];
        match comp.ctype {
            ComponentType::Transient => {
                for &q in &comp.states {
                    for v in 0..n_nodes {
                        let body = &a.delta[q][t.label(v) as usize].nonroot;
                        win[q][v] = eval(body, v, &win);
                    }
                }
            }
            ComponentType::Existential => {
                // least fixpoint from false
                loop {
                    let mut changed = false;
                    for &q in &comp.states {
                        for v in 0..n_nodes {
                            if win[q][v] {
                                continue;
                            }
                            let body = &a.delta[q][t.label(v) as usize].nonroot;
                            if eval(body, v, &win) {
                                win[q][v] = true;
                                changed = true;
                            }
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
            ComponentType::Universal => {
                // greatest fixpoint from true
                for &q in &comp.states {
                    for v in 0..n_nodes {
                        win[q][v] = true;
                    }
                }
                loop {
                    let mut changed = false;
                    for &q in &comp.states {
                        for v in 0..n_nodes {
                            if !win[q][v] {
                                continue;
                            }
                            let body = &a.delta[q][t.label(v) as usize].nonroot;
                            if !eval(body, v, &win) {
                                win[q][v] = false;
                                changed = true;
                            }
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
            ComponentType::Upward => unreachable!("one-way automaton"),
        }
    }

    match &a.initial {
        InitialCondition::State(q) => win[*q][t.root],
        InitialCondition::Condition(body) => eval_pbf(body, t.root, t, &win),
    }
}

fn eval_pbf(body: &Pbf, v: usize, t: &RegularTree, win: &Vec<Vec<bool>>) -> bool {
    match body {
        Pbf::True => true,
        Pbf::False => false,
        Pbf::Or(a, b) => eval_pbf(a, v, t, win) || eval_pbf(b, v, t, win),
        Pbf::And(a, b) => eval_pbf(a, v, t, win) && eval_pbf(b, v, t, win),
        Pbf::Atom(at) => eval_atom(at, v, t, win),
    }
}

fn eval_atom(at: &Atom, v: usize, t: &RegularTree, win: &Vec<Vec<bool>>) -> bool {
    match at.modality {
        Modality::Diamond(k) => {
            t.out_edges(v)
                .iter()
                .filter(|&&e| win[at.state][t.edges[e].dst])
                .count()
                >= k as usize
        }
        Modality::Box(k) => {
            t.out_edges(v)
                .iter()
                .filter(|&&e| !win[at.state][t.edges[e].dst])
                .count()
                <= (k - 1) as usize
        }
        Modality::Up => unreachable!("one-way evaluation"),
    }
}

/// Three-valued bounded membership game for two-way linear automata over the
/// depth-bounded truncation. Plays that would need to look below a cut leaf
/// come back unknown; a play revisiting its own component's configuration
/// cannot happen on a truncation except through the linear structure, which
/// is acyclic per component, so plain memoized recursion is exact on the
/// truncation.
pub fn bounded_game_2hlgt(
    a: &GradedTreeAutomaton,
    t: &RegularTree,
    depth: usize,
) -> Result<BoundedVerdict, AcceptError> {
    validate_subclass(a, SubclassTarget::TwoHlgt)
        .map_err(|v| AcceptError::SubclassViolation(format!("{v}")))?;
    check_alphabet(a, t)?;
    let trunc = t.unfold(depth);
    let mut game = Game { a, t, trunc: &trunc, memo: BTreeMap::new(), on_stack: BTreeMap::new() };
    let v = match &a.initial {
        InitialCondition::State(q) => game.config(0, *q),
        InitialCondition::Condition(body) => game.eval_body(body, 0),
    };
    Ok(v.to_bounded(depth))
}

struct Game<'a> {
    a: &'a GradedTreeAutomaton,
    t: &'a RegularTree,
    trunc: &'a TruncatedTree,
    memo: BTreeMap<(usize, usize), Tri>,
    on_stack: BTreeMap<(usize, usize), ()>,
}

impl<'a> Game<'a> {
    fn config(&mut self, node: usize, q: usize) -> Tri {
        if let Some(&v) = self.memo.get(&(node, q)) {
            return v;
        }
        // A revisit along the current play would mean an infinite
        // regeneration; with singleton components this can only happen
        // through the self atom, whose parity decides the outcome.
        if self.on_stack.contains_key(&(node, q)) {
            let ci = self.a.component_of(q).expect("partition");
            return match self.a.components[ci].ctype {
                ComponentType::Universal => Tri::T,
                ComponentType::Existential => Tri::F,
                _ => Tri::F,
            };
        }
        self.on_stack.insert((node, q), ());
        let tn = &self.trunc.nodes[node];
        let letter = self.t.label(tn.graph_node) as usize;
        let pair = &self.a.delta[q][letter];
        let body = if tn.parent.is_none() { &pair.root } else { &pair.nonroot };
        let body = body.clone();
        let r = self.eval_body(&body, node);
        self.on_stack.remove(&(node, q));
        self.memo.insert((node, q), r);
        r
    }

    fn eval_body(&mut self, body: &Pbf, node: usize) -> Tri {
        match body {
            Pbf::True => Tri::T,
            Pbf::False => Tri::F,
            Pbf::Or(a, b) => self.eval_body(a, node).or(self.eval_body(b, node)),
            Pbf::And(a, b) => self.eval_body(a, node).and(self.eval_body(b, node)),
            Pbf::Atom(at) => self.eval_atom(at, node),
        }
    }

    fn eval_atom(&mut self, at: &Atom, node: usize) -> Tri {
        let tn = &self.trunc.nodes[node];
        match at.modality {
            Modality::Up => match tn.parent {
                None => Tri::F,
                Some((p, _)) => self.config(p, at.state),
            },
            Modality::Diamond(k) => {
                if tn.cut {
                    return Tri::U;
                }
                let children = tn.children.clone();
                let mut yes = 0usize;
                let mut maybe = 0usize;
                for (_, c) in children {
                    match self.config(c, at.state) {
                        Tri::T => yes += 1,
                        Tri::U => maybe += 1,
                        Tri::F => {}
                    }
                }
                if yes >= k as usize {
                    Tri::T
                } else if yes + maybe < k as usize {
                    Tri::F
                } else {
                    Tri::U
                }
            }
            Modality::Box(k) => {
                if tn.cut {
                    return Tri::U;
                }
                let children = tn.children.clone();
                let mut no = 0usize;
                let mut maybe = 0usize;
                for (_, c) in children {
                    match self.config(c, at.state) {
                        Tri::F => no += 1,
                        Tri::U => maybe += 1,
                        Tri::T => {}
                    }
                }
                if no > (k - 1) as usize {
                    Tri::F
                } else if no + maybe <= (k - 1) as usize {
                    Tri::T
                } else {
                    Tri::U
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Signature;
    use crate::tree_automata::gta::Component;
    use alloc::collections::{BTreeMap as Map, BTreeSet};
    use alloc::string::ToString;

    fn tree(
        props: &[&str],
        nodes: &[(&str, &[&str])],
        root: &str,
        edges: &[(&str, &str, &str)],
    ) -> RegularTree {
        let mut labels: Map<String, BTreeSet<String>> = Map::new();
        for (n, ls) in nodes {
            labels.insert(n.to_string(), ls.iter().map(|s| s.to_string()).collect());
        }
        RegularTree::from_parts(
            props.iter().map(|s| s.to_string()).collect(),
            nodes.iter().map(|(n, _)| n.to_string()).collect(),
            &labels,
            root,
            edges
                .iter()
                .map(|(e, s, d)| (e.to_string(), s.to_string(), d.to_string()))
                .collect(),
        )
        .unwrap()
    }

    fn single_state_automaton(ctype: ComponentType, priority: u32, body: Pbf) -> GradedTreeAutomaton {
        let sig = Signature::new(alloc::vec!["p".to_string()]).unwrap();
        let mut a = GradedTreeAutomaton::new(sig, alloc::vec!["q0".to_string()], false);
        a.priority[0] = priority;
        a.components.push(Component { states: alloc::vec![0], ctype });
        for l in 0..a.sig.num_letters() {
            a.set_transition(0, l as u32, body.clone());
        }
        a
    }

    #[test]
    fn trivially_safe_universal_accepts_everything() {
        let a = single_state_automaton(
            ComponentType::Universal,
            0,
            Pbf::Atom(Atom::boxed(1, 0)),
        );
        let t = tree(&["p"], &[("v0", &[])], "v0", &[("e0", "v0", "v0")]);
        assert!(accept_hwgt(&a, &t).unwrap());
    }

    #[test]
    fn inescapable_existential_rejects_everything() {
        let a = single_state_automaton(
            ComponentType::Existential,
            1,
            Pbf::Atom(Atom::diamond(1, 0)),
        );
        let t = tree(&["p"], &[("v0", &["p"])], "v0", &[("e0", "v0", "v0")]);
        assert!(!accept_hwgt(&a, &t).unwrap());
    }

    #[test]
    fn reachability_automaton() {
        // q0 existential: accept iff some node labelled p is reachable.
        let sig = Signature::new(alloc::vec!["p".to_string()]).unwrap();
        let mut a = GradedTreeAutomaton::new(sig, alloc::vec!["q0".to_string()], false);
        a.priority[0] = 1;
        a.components.push(Component { states: alloc::vec![0], ctype: ComponentType::Existential });
        // on letters containing p: accept immediately; otherwise move down
        a.set_transition(0, 0, Pbf::Atom(Atom::diamond(1, 0)));
        a.set_transition(0, 1, Pbf::True);
        let t1 = tree(
            &["p"],
            &[("v0", &[]), ("v1", &["p"])],
            "v0",
            &[("e0", "v0", "v1"), ("e1", "v1", "v1")],
        );
        assert!(accept_hwgt(&a, &t1).unwrap());
        let t2 = tree(&["p"], &[("v0", &[])], "v0", &[("e0", "v0", "v0")]);
        assert!(!accept_hwgt(&a, &t2).unwrap());
    }

    #[test]
    fn bounded_game_on_transient_top() {
        // transient initial state mapping every letter to true accepts all
        let a = single_state_automaton(ComponentType::Transient, 0, Pbf::True);
        let t = tree(&["p"], &[("v0", &[])], "v0", &[("e0", "v0", "v0")]);
        assert_eq!(bounded_game_2hlgt(&a, &t, 3).unwrap(), BoundedVerdict::Holds);
    }

    #[test]
    fn bounded_game_reachability_decides_positive() {
        let sig = Signature::new(alloc::vec!["p".to_string()]).unwrap();
        let mut a = GradedTreeAutomaton::new(sig, alloc::vec!["q0".to_string()], false);
        a.priority[0] = 1;
        a.components.push(Component { states: alloc::vec![0], ctype: ComponentType::Existential });
        a.set_transition(0, 0, Pbf::Atom(Atom::diamond(1, 0)));
        a.set_transition(0, 1, Pbf::True);
        let t = tree(
            &["p"],
            &[("v0", &[]), ("v1", &["p"])],
            "v0",
            &[("e0", "v0", "v1"), ("e1", "v1", "v1")],
        );
        assert_eq!(bounded_game_2hlgt(&a, &t, 2).unwrap(), BoundedVerdict::Holds);
        // safety never closes on a truncation
        let t2 = tree(&["p"], &[("v0", &[])], "v0", &[("e0", "v0", "v0")]);
        assert_eq!(bounded_game_2hlgt(&a, &t2, 3).unwrap(), BoundedVerdict::Unknown(3));
    }
}
