//! Linearization of non-transient components into word automata over
//! annotated letters, and the counter-freeness condition on them.
//!
//! The word automaton of a component reads letters `(σ, C)` where `C` is a
//! set of lower-component atoms riding along the move. Continuation
//! transitions come from clauses pairing one same-component atom with `C`;
//! exit transitions come from clauses made of lower atoms only. Annotated
//! letters are encoded as an alphabet whose propositions are the tree
//! propositions followed by one pseudo-proposition per atom.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::word::automaton::{Acceptance, Branching, OmegaWordAutomaton, WordAlphabet};
use crate::word::monoid::{is_counter_free, transition_monoid, CounterWitness};
use crate::tree_automata::gta::{ComponentType, GradedTreeAutomaton};
use crate::tree_automata::pbf::{cnf, dnf, Atom, Modality};

/// The word automaton of one component state, with its annotation structure.
#[derive(Clone, Debug)]
pub struct LinearizedComponent {
    pub automaton: OmegaWordAutomaton,
    /// Index of the fresh exit state in the automaton.
    pub exit_state: usize,
    /// All atoms of the host automaton, fixing the annotation bit order.
    pub atom_list: Vec<Atom>,
    /// Number of tree propositions (low bits of each letter).
    pub ap_count: usize,
    /// The annotation sets enabling same-component moves.
    pub annotation_sets: Vec<BTreeSet<Atom>>,
}

#[derive(Clone, Debug)]
pub struct TransientComponent(pub String);

impl core::fmt::Display for TransientComponent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "component {} is transient and has no linearization", self.0)
    }
}

/// Builds the word automaton of component `ci` started at its member `q`
/// (an index into the host automaton's states).
pub fn linearize(
    a: &GradedTreeAutomaton,
    ci: usize,
    q: usize,
) -> Result<LinearizedComponent, TransientComponent> {
    let comp = &a.components[ci];
    if comp.ctype == ComponentType::Transient {
        return Err(TransientComponent(format!("C{ci}")));
    }
    assert!(
        matches!(comp.ctype, ComponentType::Existential | ComponentType::Universal),
        "linearization applies to one-way components"
    );
    assert!(comp.states.contains(&q));

    let atom_list: Vec<Atom> = a.all_atoms().into_iter().collect();
    let ap_count = a.sig.props().len();
    assert!(
        ap_count + atom_list.len() <= 20,
        "annotation alphabet too large"
    );
    let mut props: Vec<String> = a.sig.props().to_vec();
    for (i, _) in atom_list.iter().enumerate() {
        props.push(format!("@{i}"));
    }
    let alphabet = WordAlphabet::new(props);

    // word states: component members in order, then the exit state
    let member_index = |s: usize| comp.states.iter().position(|&x| x == s);
    let n = comp.states.len() + 1;
    let exit_state = comp.states.len();
    let (branching, acceptance) = match comp.ctype {
        ComponentType::Existential => (Branching::Nondeterministic, Acceptance::CoBuchi),
        ComponentType::Universal => (Branching::Universal, Acceptance::Buchi),
        _ => unreachable!(),
    };
    let init = member_index(q).expect("member");
    let mut w = OmegaWordAutomaton::new(alphabet, n, init, branching, acceptance);
    // the pattern is the component itself: rejecting for the coBüchi
    // existential case, accepting for the Büchi universal case
    for i in 0..comp.states.len() {
        w.pattern.insert(i);
    }

    let atom_bit = |at: &Atom| -> usize {
        ap_count + atom_list.iter().position(|x| x == at).expect("atom listed")
    };
    let annotation_mask = |c: &BTreeSet<Atom>| -> usize {
        let mut m = 0usize;
        for at in c {
            m |= 1 << atom_bit(at);
        }
        m
    };

    let mut annotation_sets: BTreeSet<BTreeSet<Atom>> = BTreeSet::new();

    for (wi, &s) in comp.states.iter().enumerate() {
        for sigma in 0..a.sig.num_letters() {
            let body = &a.delta[s][sigma].nonroot;
            let clauses = match comp.ctype {
                ComponentType::Existential => dnf(body),
                ComponentType::Universal => cnf(body),
                _ => unreachable!(),
            };
            for clause in clauses {
                let own: Vec<Atom> = clause
                    .iter()
                    .copied()
                    .filter(|at| comp.states.contains(&at.state))
                    .collect();
                let rest: BTreeSet<Atom> = clause
                    .iter()
                    .copied()
                    .filter(|at| !comp.states.contains(&at.state))
                    .collect();
                let letter = sigma | annotation_mask(&rest);
                match own.len() {
                    0 => {
                        w.add_transition(wi, letter, exit_state);
                    }
                    1 => {
                        let target = member_index(own[0].state).expect("same component");
                        debug_assert!(matches!(
                            own[0].modality,
                            Modality::Diamond(1) | Modality::Box(1)
                        ));
                        w.add_transition(wi, letter, target);
                        annotation_sets.insert(rest);
                    }
                    _ => unreachable!("validated hesitant shape"),
                }
            }
        }
    }
    // the exit state loops on every letter
    for l in 0..w.alphabet.num_letters() {
        w.add_transition(exit_state, l, exit_state);
    }

    Ok(LinearizedComponent {
        automaton: w,
        exit_state,
        atom_list,
        ap_count,
        annotation_sets: annotation_sets.into_iter().collect(),
    })
}

/// Runs the counter-freeness test on every linearization of every
/// non-transient component; collects one witness per failing (component,
/// state) pair.
pub fn check_counter_free_components(
    a: &GradedTreeAutomaton,
) -> Result<(), Vec<(usize, usize, CounterWitness)>> {
    let mut witnesses = Vec::new();
    for (ci, comp) in a.components.iter().enumerate() {
        if !matches!(comp.ctype, ComponentType::Existential | ComponentType::Universal) {
            continue;
        }
        for &q in &comp.states {
            let lin = linearize(a, ci, q).expect("non-transient");
            let m = transition_monoid(lin.automaton.num_states, &lin.automaton.letter_matrices());
            if let Err(wit) = is_counter_free(&m) {
                witnesses.push((ci, q, wit));
            }
        }
    }
    if witnesses.is_empty() {
        Ok(())
    } else {
        Err(witnesses)
    }
}

/// Pretty annotation set for diagnostics.
pub fn display_annotation(c: &BTreeSet<Atom>, a: &GradedTreeAutomaton) -> String {
    let mut s = String::from("{");
    let mut first = true;
    for at in c {
        if !first {
            s.push(',');
        }
        first = false;
        let name = a.state_names.get(at.state).cloned().unwrap_or_else(|| format!("#{}", at.state));
        match at.modality {
            Modality::Diamond(k) => s.push_str(&format!("(<>{k} {name})")),
            Modality::Box(k) => s.push_str(&format!("(#{k} {name})")),
            Modality::Up => s.push_str(&format!("(up {name})")),
        }
    }
    s.push('}');
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Signature;
    use crate::tree_automata::gta::Component;
    use crate::tree_automata::pbf::Pbf;
    use alloc::vec;

    /// Universal singleton with delta(q, s) = (# q) & (# qlow):
    /// the annotation sets of the continuation moves are {} and nothing
    /// else; the clause made of the lower atom alone is an exit.
    #[test]
    fn universal_singleton_annotations() {
        let sig = Signature::new(vec!["p".to_string()]).unwrap();
        let mut a =
            GradedTreeAutomaton::new(sig, vec!["qlow".to_string(), "q".to_string()], false);
        a.priority = vec![0, 0];
        a.components.push(Component { states: vec![0], ctype: ComponentType::Universal });
        a.components.push(Component { states: vec![1], ctype: ComponentType::Universal });
        a.add_order(0, 1);
        for l in 0..2 {
            a.set_transition(0, l, Pbf::Atom(Atom::boxed(1, 0)));
            a.set_transition(
                1,
                l,
                Pbf::and(Pbf::Atom(Atom::boxed(1, 1)), Pbf::Atom(Atom::boxed(1, 0))),
            );
        }
        let lin = linearize(&a, 1, 1).unwrap();
        // continuation annotation: the box-self clause rides with C = {}
        assert_eq!(lin.annotation_sets, vec![BTreeSet::new()]);
        // exit transitions exist for the lower-atom-only clause
        let exit_reachable = (0..lin.automaton.alphabet.num_letters())
            .any(|l| lin.automaton.delta[lin.automaton.initial][l].contains(&lin.exit_state));
        assert!(exit_reachable);
    }

    #[test]
    fn transient_component_has_no_linearization() {
        let sig = Signature::new(vec!["p".to_string()]).unwrap();
        let mut a = GradedTreeAutomaton::new(sig, vec!["q".to_string()], false);
        a.components.push(Component { states: vec![0], ctype: ComponentType::Transient });
        for l in 0..2 {
            a.set_transition(0, l, Pbf::True);
        }
        assert!(linearize(&a, 0, 0).is_err());
    }

    /// Singleton linearizations are one-state automata plus the exit; their
    /// monoids are aperiodic, verified rather than assumed.
    #[test]
    fn singleton_linearizations_counter_free() {
        let sig = Signature::new(vec!["p".to_string()]).unwrap();
        let mut a = GradedTreeAutomaton::new(sig, vec!["q".to_string()], false);
        a.priority = vec![1];
        a.components.push(Component { states: vec![0], ctype: ComponentType::Existential });
        a.set_transition(0, 0, Pbf::Atom(Atom::diamond(1, 0)));
        a.set_transition(0, 1, Pbf::True);
        assert!(check_counter_free_components(&a).is_ok());
    }
}
