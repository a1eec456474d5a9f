//! The graded alternating tree automaton type and the subclass validators.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::tree::{Letter, Signature};
use crate::tree_automata::mutex::ComplementCertificate;
use crate::tree_automata::pbf::{cnf, dnf, Atom, Modality, Pbf};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentType {
    Transient,
    Existential,
    Universal,
    Upward,
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComponentType::Transient => "transient",
            ComponentType::Existential => "existential",
            ComponentType::Universal => "universal",
            ComponentType::Upward => "upward",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub states: Vec<usize>,
    pub ctype: ComponentType,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum InitialCondition {
    State(usize),
    Condition(Pbf),
}

/// Transition body of one (state, letter) pair; one-way automata keep both
/// entries equal, two-way automata may distinguish the root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransitionPair {
    pub root: Pbf,
    pub nonroot: Pbf,
}

impl TransitionPair {
    pub fn uniform(p: Pbf) -> TransitionPair {
        TransitionPair { root: p.clone(), nonroot: p }
    }
}

/// Graded alternating tree automaton with a weak priority assignment, an
/// ordered hesitant partition, and optional two-way atoms.
///
/// Components are listed lowest-first; `lower` holds the strict component
/// order as a transitively closed relation on component indices, and always
/// contains the listing order of distinct components that are related by
/// transitions. The `two_way` flag gates the up atoms and the root flag of
/// the transition function.
#[derive(Clone, Debug)]
pub struct GradedTreeAutomaton {
    pub sig: Signature,
    pub state_names: Vec<String>,
    pub initial: InitialCondition,
    pub priority: Vec<u32>,
    pub components: Vec<Component>,
    pub lower: BTreeSet<(usize, usize)>,
    /// `delta[state][letter]`
    pub delta: Vec<Vec<TransitionPair>>,
    pub two_way: bool,
    /// Complement certificates carried by construction, consumed by the
    /// mutual exclusion check.
    pub certificates: Vec<ComplementCertificate>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubclassTarget {
    Gta,
    Wgt,
    Hwgt,
    TwoHwgt,
    Hlgt,
    TwoHlgt,
}

impl fmt::Display for SubclassTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubclassTarget::Gta => "gta",
            SubclassTarget::Wgt => "wgt",
            SubclassTarget::Hwgt => "hwgt",
            SubclassTarget::TwoHwgt => "2hwgt",
            SubclassTarget::Hlgt => "hlgt",
            SubclassTarget::TwoHlgt => "2hlgt",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubclassViolation {
    pub state: Option<String>,
    pub letter: Option<String>,
    pub detail: String,
}

impl fmt::Display for SubclassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.state {
            write!(f, "state {s}: ")?;
        }
        if let Some(l) = &self.letter {
            write!(f, "letter {l}: ")?;
        }
        write!(f, "{}", self.detail)
    }
}

impl GradedTreeAutomaton {
    pub fn new(sig: Signature, state_names: Vec<String>, two_way: bool) -> Self {
        let n = state_names.len();
        let letters = sig.num_letters();
        GradedTreeAutomaton {
            sig,
            state_names,
            initial: InitialCondition::State(0),
            priority: vec![0; n],
            components: Vec::new(),
            lower: BTreeSet::new(),
            delta: vec![vec![TransitionPair::uniform(Pbf::False); letters]; n],
            two_way,
            certificates: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.state_names[q]
    }

    pub fn component_of(&self, q: usize) -> Option<usize> {
        self.components.iter().position(|c| c.states.contains(&q))
    }

    pub fn set_transition(&mut self, q: usize, letter: Letter, body: Pbf) {
        self.delta[q][letter as usize] = TransitionPair::uniform(body);
    }

    pub fn set_transition_rooted(&mut self, q: usize, letter: Letter, root: Pbf, nonroot: Pbf) {
        self.delta[q][letter as usize] = TransitionPair { root, nonroot };
    }

    /// Declares that component `a` is strictly lower than component `b` and
    /// closes the relation transitively.
    pub fn add_order(&mut self, a: usize, b: usize) {
        self.lower.insert((a, b));
        loop {
            let mut added = false;
            let pairs: Vec<(usize, usize)> = self.lower.iter().copied().collect();
            for &(x, y) in &pairs {
                for &(y2, z) in &pairs {
                    if y == y2 && self.lower.insert((x, z)) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
    }

    fn strictly_lower(&self, a: usize, b: usize) -> bool {
        self.lower.contains(&(a, b))
    }

    /// Components in evaluation order (lowest first): a topological order of
    /// the strict relation, falling back to listing order.
    pub fn component_order(&self) -> Vec<usize> {
        let n = self.components.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            if self.strictly_lower(a, b) {
                core::cmp::Ordering::Less
            } else if self.strictly_lower(b, a) {
                core::cmp::Ordering::Greater
            } else {
                a.cmp(&b)
            }
        });
        order
    }

    /// All atoms occurring in transition images.
    pub fn all_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for row in &self.delta {
            for pair in row {
                out.extend(pair.root.atoms());
                out.extend(pair.nonroot.atoms());
            }
        }
        out
    }

    /// The automaton with `initial` replaced by state `q`.
    pub fn with_initial_state(&self, q: usize) -> GradedTreeAutomaton {
        let mut a = self.clone();
        a.initial = InitialCondition::State(q);
        a
    }

    /// Adds a fresh state whose every transition is `body`, forming a new
    /// topmost transient singleton component, and makes it initial.
    pub fn with_initial_condition(&self, body: Pbf) -> GradedTreeAutomaton {
        let mut a = self.clone();
        let q = a.num_states();
        a.state_names.push(format!("qinit{q}"));
        a.priority.push(0);
        for row in &mut a.delta {
            let _ = row;
        }
        a.delta.push(vec![TransitionPair::uniform(body); a.sig.num_letters()]);
        let new_comp = a.components.len();
        a.components.push(Component { states: vec![q], ctype: ComponentType::Transient });
        for i in 0..new_comp {
            a.add_order(i, new_comp);
        }
        a.initial = InitialCondition::State(q);
        a
    }

    /// Structural dual: conjunction with disjunction, diamonds with boxes,
    /// existential with universal components, priorities flipped. The dual
    /// accepts exactly the trees the original rejects.
    pub fn dualize(&self) -> GradedTreeAutomaton {
        let mut a = self.clone();
        for row in &mut a.delta {
            for pair in row.iter_mut() {
                pair.root = pair.root.dual();
                pair.nonroot = pair.nonroot.dual();
            }
        }
        for c in &mut a.components {
            c.ctype = match c.ctype {
                ComponentType::Existential => ComponentType::Universal,
                ComponentType::Universal => ComponentType::Existential,
                t => t,
            };
        }
        for p in &mut a.priority {
            *p = 1 - (*p & 1);
        }
        if let InitialCondition::Condition(pbf) = &a.initial {
            a.initial = InitialCondition::Condition(pbf.dual());
        }
        a.certificates = self.certificates.clone();
        a
    }
}

/// Checks every structural invariant of the target class, returning one
/// diagnostic for the first violated clause.
pub fn validate_subclass(
    a: &GradedTreeAutomaton,
    target: SubclassTarget,
) -> Result<(), SubclassViolation> {
    let fail = |state: Option<usize>, letter: Option<Letter>, detail: String| SubclassViolation {
        state: state.map(|q| a.state_names.get(q).cloned().unwrap_or_else(|| format!("#{q}"))),
        letter: letter.map(|l| a.sig.display_letter(l)),
        detail,
    };

    // Basic well-formedness for every target.
    let n = a.num_states();
    if a.priority.len() != n || a.delta.len() != n {
        return Err(fail(None, None, "state tables have inconsistent sizes".to_string()));
    }
    match &a.initial {
        InitialCondition::State(q) if *q >= n => {
            return Err(fail(None, None, format!("initial state #{q} undeclared")))
        }
        InitialCondition::Condition(pbf) => {
            for at in pbf.atoms() {
                if at.state >= n {
                    return Err(fail(None, None, format!("initial condition references state #{}", at.state)));
                }
            }
        }
        _ => {}
    }
    for q in 0..n {
        for l in 0..a.sig.num_letters() {
            let pair = &a.delta[q][l];
            for body in [&pair.root, &pair.nonroot] {
                for at in body.atoms() {
                    if at.state >= n {
                        return Err(fail(
                            Some(q),
                            Some(l as Letter),
                            format!("atom references undeclared state #{}", at.state),
                        ));
                    }
                    if !at.grade_ok() {
                        return Err(fail(Some(q), Some(l as Letter), "grade must be at least 1".to_string()));
                    }
                    if at.modality == Modality::Up && !a.two_way {
                        return Err(fail(
                            Some(q),
                            Some(l as Letter),
                            "up atom in a one-way automaton".to_string(),
                        ));
                    }
                }
            }
            if !a.two_way && pair.root != pair.nonroot {
                return Err(fail(
                    Some(q),
                    Some(l as Letter),
                    "root-dependent transition in a one-way automaton".to_string(),
                ));
            }
        }
    }
    if target == SubclassTarget::Gta {
        return Ok(());
    }

    // Weak: exact partition, order-respecting transitions, uniform parity.
    let mut seen = vec![false; n];
    for c in &a.components {
        if c.states.is_empty() {
            return Err(fail(None, None, "empty component".to_string()));
        }
        for &q in &c.states {
            if q >= n || seen[q] {
                return Err(fail(Some(q.min(n - 1)), None, "components must partition the states".to_string()));
            }
            seen[q] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(fail(None, None, "some state is in no component".to_string()));
    }
    for (ci, c) in a.components.iter().enumerate() {
        let parity = a.priority[c.states[0]] & 1;
        for &q in &c.states {
            if a.priority[q] & 1 != parity {
                return Err(fail(Some(q), None, format!("component C{ci} mixes priorities")));
            }
        }
        for &q in &c.states {
            for l in 0..a.sig.num_letters() {
                let pair = &a.delta[q][l];
                for body in [&pair.root, &pair.nonroot] {
                    for at in body.atoms() {
                        let cj = a.component_of(at.state).expect("partition total");
                        if cj != ci && !a.strictly_lower(cj, ci) {
                            return Err(fail(
                                Some(q),
                                Some(l as Letter),
                                format!(
                                    "transition reaches state {} of a component that is not lower",
                                    a.state_names[at.state]
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    if target == SubclassTarget::Wgt {
        return Ok(());
    }

    // Hesitant: per-component type discipline.
    let two_way_target =
        matches!(target, SubclassTarget::TwoHwgt | SubclassTarget::TwoHlgt);
    if !two_way_target && a.two_way {
        return Err(fail(None, None, format!("two-way automaton checked against {target}")));
    }
    for (ci, c) in a.components.iter().enumerate() {
        let in_comp = |s: usize| c.states.contains(&s);
        match c.ctype {
            ComponentType::Transient => {
                for &q in &c.states {
                    for l in 0..a.sig.num_letters() {
                        let pair = &a.delta[q][l];
                        for body in [&pair.root, &pair.nonroot] {
                            if body.atoms().iter().any(|at| in_comp(at.state)) {
                                return Err(fail(
                                    Some(q),
                                    Some(l as Letter),
                                    "transient component mentions itself".to_string(),
                                ));
                            }
                        }
                    }
                }
            }
            ComponentType::Existential => {
                if a.priority[c.states[0]] & 1 != 1 {
                    return Err(fail(
                        Some(c.states[0]),
                        None,
                        format!("existential component C{ci} must be odd"),
                    ));
                }
                for &q in &c.states {
                    for l in 0..a.sig.num_letters() {
                        let pair = &a.delta[q][l];
                        for body in [&pair.root, &pair.nonroot] {
                            for clause in dnf(body) {
                                let own: Vec<&Atom> =
                                    clause.iter().filter(|at| in_comp(at.state)).collect();
                                if own.len() > 1 {
                                    return Err(fail(
                                        Some(q),
                                        Some(l as Letter),
                                        "two same-component atoms conjoined in a disjunctive clause"
                                            .to_string(),
                                    ));
                                }
                                if let Some(at) = own.first() {
                                    if at.modality != Modality::Diamond(1) {
                                        return Err(fail(
                                            Some(q),
                                            Some(l as Letter),
                                            "same-component atom must be a grade-one diamond"
                                                .to_string(),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            ComponentType::Universal => {
                if a.priority[c.states[0]] & 1 != 0 {
                    return Err(fail(
                        Some(c.states[0]),
                        None,
                        format!("universal component C{ci} must be even"),
                    ));
                }
                for &q in &c.states {
                    for l in 0..a.sig.num_letters() {
                        let pair = &a.delta[q][l];
                        for body in [&pair.root, &pair.nonroot] {
                            for clause in cnf(body) {
                                let own: Vec<&Atom> =
                                    clause.iter().filter(|at| in_comp(at.state)).collect();
                                if own.len() > 1 {
                                    return Err(fail(
                                        Some(q),
                                        Some(l as Letter),
                                        "two same-component atoms disjoined in a conjunctive clause"
                                            .to_string(),
                                    ));
                                }
                                if let Some(at) = own.first() {
                                    if at.modality != Modality::Box(1) {
                                        return Err(fail(
                                            Some(q),
                                            Some(l as Letter),
                                            "same-component atom must be a grade-one box".to_string(),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            ComponentType::Upward => {
                if !two_way_target {
                    return Err(fail(
                        Some(c.states[0]),
                        None,
                        format!("upward component C{ci} in a one-way class"),
                    ));
                }
                for &q in &c.states {
                    for l in 0..a.sig.num_letters() {
                        let pair = &a.delta[q][l];
                        for body in [&pair.root, &pair.nonroot] {
                            for at in body.atoms() {
                                if in_comp(at.state) && at.modality != Modality::Up {
                                    return Err(fail(
                                        Some(q),
                                        Some(l as Letter),
                                        "same-component atom of an upward component must go up"
                                            .to_string(),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if matches!(target, SubclassTarget::Hwgt | SubclassTarget::TwoHwgt) {
        return Ok(());
    }

    // Linear: singleton components.
    for (ci, c) in a.components.iter().enumerate() {
        if c.states.len() != 1 {
            return Err(fail(
                Some(c.states[0]),
                None,
                format!("component C{ci} is not a singleton"),
            ));
        }
    }
    Ok(())
}
