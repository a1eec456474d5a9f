//! Polarized normal form for the finite-path logic: state layer
//! `p | !f | f|f | f&f | Dn f | E psi`, path layer built from state formulas
//! with or, and, X, U only.
//!
//! Universal quantifiers are expressed through negation, and each
//! existential body is ground through the word machinery: maximal state
//! subformulas become marker bits, the body becomes a finite-trace language,
//! and since an existential over the total tree only sees the
//! extension-closure of that language, the body is re-extracted from the
//! closure's reachability automaton as a positive `X`/`U` formula.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::fragment::{check_fragment, Fragment, NotInFragment};
use crate::rewrite::{rewrite_prop3, to_nnf};
use crate::semantics::ctlsf::is_state;
use crate::word::convert::{dfa_reach_lform, Budget, ConvertError};
use crate::word::looping::{lform_to_formula, omega_fold};
use crate::word::ltlf::ltlf_to_nfa;
use crate::word::monoid::{is_counter_free, transition_monoid};
use crate::word::ops::{determinize, minimize_dfa};

#[derive(Clone, Debug)]
pub enum NormalizeError {
    NotInFragment(NotInFragment),
    /// The body extraction exceeded its size budget.
    Budget,
}

impl core::fmt::Display for NormalizeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NormalizeError::NotInFragment(e) => write!(f, "{e}"),
            NormalizeError::Budget => write!(f, "normalization exceeded its size budget"),
        }
    }
}

impl From<NotInFragment> for NormalizeError {
    fn from(e: NotInFragment) -> Self {
        NormalizeError::NotInFragment(e)
    }
}

const NORMALIZE_BUDGET: usize = 1 << 22;

/// Rewrites a past-free formula into the polarized normal form, preserving
/// the models of every tree. Top-level path formulas are read under the
/// universal closure that defines the model relation.
pub fn normalize_ctlsf(f: &Formula) -> Result<Formula, NormalizeError> {
    crate::fragment::require(f, Fragment::CCtlStarF)?;
    let wrapped = if is_state(f) { f.clone() } else { Formula::all(f.clone()) };
    // The dedicated rewrite pass first: it already removes the polarized
    // redexes at the named context shapes and settles the easy cases.
    let pre = rewrite_prop3(&to_nnf(&wrapped))?;
    let out = norm_state(&pre)?.simplify();
    debug_assert!(
        check_fragment(&out, Fragment::PolCCtlStar),
        "normalization left the grammar: {out}"
    );
    Ok(out)
}

fn norm_state(f: &Formula) -> Result<Formula, NormalizeError> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => Formula::not(norm_state(a)?),
        Formula::Or(a, b) => Formula::or(norm_state(a)?, norm_state(b)?),
        Formula::And(a, b) => Formula::and(norm_state(a)?, norm_state(b)?),
        Formula::Exists(body) => norm_exists(body)?,
        Formula::All(body) => Formula::not(norm_exists(&to_nnf(&Formula::not(
            (**body).clone(),
        )))?),
        other => panic!("not a state formula: {other}"),
    })
}

/// Marker table: each marker is re-emitted as a normalized state formula.
struct Markers {
    emit: Vec<Formula>,
}

impl Markers {
    fn intern(&mut self, emit: Formula) -> Formula {
        let i = match self.emit.iter().position(|x| x == &emit) {
            Some(i) => i,
            None => {
                self.emit.push(emit);
                self.emit.len() - 1
            }
        };
        Formula::prop(&format!("m{i}"))
    }
}

/// Normalizes `E body` into the grammar.
fn norm_exists(body: &Formula) -> Result<Formula, NormalizeError> {
    if is_state(body) {
        // degenerate quantification
        return norm_state(body);
    }
    let mut markers = Markers { emit: Vec::new() };
    let linear = abstract_path(body, &mut markers)?;

    // Fast path: the body already lies in the positive fragment over the
    // markers, so no language surgery is needed.
    if positive_cosafe(&linear) {
        let substituted = substitute_markers(&linear, &markers);
        return Ok(Formula::exists(substituted).simplify());
    }

    // Language route: compile the body, close it under extension (the
    // quantifier cannot see the difference on a total tree), and read a
    // positive formula off the reachability automaton of the closure.
    let props: Vec<String> = (0..markers.emit.len()).map(|i| format!("m{i}")).collect();
    let mut nfa = ltlf_to_nfa(&linear, &props)?;
    // extension closure: let accepting states absorb
    let acc: Vec<usize> = nfa.accepting.iter().copied().collect();
    for q in acc {
        for l in 0..nfa.alphabet.num_letters() {
            nfa.delta[q][l].insert(q);
        }
    }
    let dfa = minimize_dfa(&determinize(&nfa));
    if dfa.accepting.is_empty() {
        return Ok(Formula::False);
    }
    let monoid = transition_monoid(dfa.num_states, &dfa.letter_matrices());
    if is_counter_free(&monoid).is_err() {
        // cannot happen for a star-free body; treated as a budget failure
        return Err(NormalizeError::Budget);
    }
    let letters = dfa.alphabet.num_letters();
    let next: Vec<Vec<usize>> = (0..dfa.num_states)
        .map(|q| (0..letters).map(|l| *dfa.delta[q][l].iter().next().expect("complete")).collect())
        .collect();
    let goal: Vec<bool> = (0..dfa.num_states).map(|q| dfa.accepting.contains(&q)).collect();
    let mut budget = Budget::new(NORMALIZE_BUDGET);
    let lf = dfa_reach_lform(dfa.num_states, letters, &next, &goal, &mut budget)
        .map_err(|ConvertError::BudgetExceeded| NormalizeError::Budget)?;
    let word_formula = omega_fold(&lform_to_formula(&lf[dfa.initial], &dfa.alphabet));
    let substituted = substitute_markers(&word_formula, &markers);
    Ok(Formula::exists(substituted).simplify())
}

/// Replaces maximal state subformulas by markers re-emitted in normal form,
/// and graded counts by their one-step reading.
fn abstract_path(f: &Formula, markers: &mut Markers) -> Result<Formula, NormalizeError> {
    if is_state(f) {
        let emit = norm_state(f)?;
        // constants stay constants to keep the linear formula small
        return Ok(match emit {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            emit => markers.intern(emit),
        });
    }
    Ok(match f {
        // Dn g: the path continues and at least n successor edges carry a
        // witness of g; the witness condition is the state formula
        // E Dn (E g').
        Formula::Count(k, a) => {
            let inner = norm_exists(a)?;
            let emit = Formula::exists(Formula::count(*k, inner)).simplify();
            let m = match emit {
                Formula::True => Formula::True,
                Formula::False => Formula::False,
                emit => markers.intern(emit),
            };
            Formula::and(m, Formula::next(Formula::True))
        }
        Formula::Not(a) => Formula::not(abstract_path(a, markers)?),
        Formula::Or(a, b) => Formula::or(abstract_path(a, markers)?, abstract_path(b, markers)?),
        Formula::And(a, b) => Formula::and(abstract_path(a, markers)?, abstract_path(b, markers)?),
        Formula::Next(a) => Formula::next(abstract_path(a, markers)?),
        Formula::WeakNext(a) => Formula::weak_next(abstract_path(a, markers)?),
        Formula::Until(a, b) => {
            Formula::until(abstract_path(a, markers)?, abstract_path(b, markers)?)
        }
        Formula::Release(a, b) => {
            Formula::release(abstract_path(a, markers)?, abstract_path(b, markers)?)
        }
        Formula::WeakUntil(a, b) => {
            Formula::weak_until(abstract_path(a, markers)?, abstract_path(b, markers)?)
        }
        Formula::Eventually(a) => Formula::eventually(abstract_path(a, markers)?),
        Formula::Globally(a) => Formula::globally(abstract_path(a, markers)?),
        other => panic!("unexpected path node: {other}"),
    })
}

/// Positive fragment over markers: literals (negation allowed only on
/// markers), conjunction, disjunction, strong next and until.
fn positive_cosafe(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => true,
        Formula::Not(a) => matches!(&**a, Formula::Prop(_)),
        Formula::Or(a, b) | Formula::And(a, b) | Formula::Until(a, b) => {
            positive_cosafe(a) && positive_cosafe(b)
        }
        Formula::Next(a) | Formula::Eventually(a) => positive_cosafe(a),
        _ => false,
    }
}

fn substitute_markers(f: &Formula, markers: &Markers) -> Formula {
    match f {
        Formula::Prop(p) => {
            if let Some(rest) = p.strip_prefix('m') {
                if let Ok(i) = rest.parse::<usize>() {
                    if i < markers.emit.len() {
                        return markers.emit[i].clone();
                    }
                }
            }
            f.clone()
        }
        Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::not(substitute_markers(a, markers)),
        Formula::Or(a, b) => {
            Formula::or(substitute_markers(a, markers), substitute_markers(b, markers))
        }
        Formula::And(a, b) => {
            Formula::and(substitute_markers(a, markers), substitute_markers(b, markers))
        }
        Formula::Next(a) => Formula::next(substitute_markers(a, markers)),
        Formula::WeakNext(a) => Formula::weak_next(substitute_markers(a, markers)),
        Formula::Until(a, b) => {
            Formula::until(substitute_markers(a, markers), substitute_markers(b, markers))
        }
        Formula::Release(a, b) => {
            Formula::release(substitute_markers(a, markers), substitute_markers(b, markers))
        }
        Formula::WeakUntil(a, b) => {
            Formula::weak_until(substitute_markers(a, markers), substitute_markers(b, markers))
        }
        Formula::Eventually(a) => Formula::eventually(substitute_markers(a, markers)),
        Formula::Globally(a) => Formula::globally(substitute_markers(a, markers)),
        Formula::Count(k, a) => Formula::Count(*k, alloc::boxed::Box::new(substitute_markers(a, markers))),
        Formula::Exists(a) => Formula::exists(substitute_markers(a, markers)),
        Formula::All(a) => Formula::all(substitute_markers(a, markers)),
        Formula::Yesterday(a) => Formula::yesterday(substitute_markers(a, markers)),
        Formula::Since(a, b) => {
            Formula::since(substitute_markers(a, markers), substitute_markers(b, markers))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use crate::gen::random_formula;
    use crate::semantics::{check_equiv_sampled, SamplerConfig, Semantics};

    fn p() -> F {
        F::prop("p")
    }
    fn q() -> F {
        F::prop("q")
    }

    #[test]
    fn simple_shapes() {
        // A G p normalizes to a negated existential
        let f = F::all(F::globally(p()));
        let n = normalize_ctlsf(&f).unwrap();
        assert!(check_fragment(&n, Fragment::PolCCtlStar), "got {n}");
        // E(p R q) is expressible positively
        let g = F::exists(F::release(p(), q()));
        let ng = normalize_ctlsf(&g).unwrap();
        assert!(check_fragment(&ng, Fragment::PolCCtlStar), "got {ng}");
    }

    #[test]
    fn normalization_preserves_models_sampled() {
        let cfg = SamplerConfig::new(60, 5, 17, &["p", "q"]);
        for seed in 0..60u64 {
            let f = random_formula(Fragment::CCtlStarF, 3, &["p", "q"], 3000 + seed);
            let n = match normalize_ctlsf(&f) {
                Ok(n) => n,
                Err(NormalizeError::Budget) => continue,
                Err(e) => panic!("{e}"),
            };
            assert!(check_fragment(&n, Fragment::PolCCtlStar), "{f} -> {n}");
            let v = check_equiv_sampled(&f, &n, Semantics::FinitePath, &cfg).unwrap();
            assert!(
                v.holds,
                "normalization changed models of {f}: got {n}, tree {:?}",
                v.counterexample.map(|c| c.1)
            );
        }
    }
}
