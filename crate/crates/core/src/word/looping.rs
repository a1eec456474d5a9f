//! Looping automata and their correspondence with the safe and co-safe
//! temporal fragments.
//!
//! A looping automaton has all states inside the acceptance pattern except
//! at most one, which must be a sink: Büchi looping automata recognize
//! safety languages, coBüchi looping automata co-safety languages. For
//! counter-free looping automata these are exactly the languages of the
//! safe/co-safe fragments, and both directions of that correspondence are
//! implemented here.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::fragment::{check_fragment, Fragment};
use crate::rewrite::to_nnf;
use crate::word::automaton::{
    Acceptance, Branching, FiniteWordAutomaton, OmegaWordAutomaton, WordAlphabet,
};
use crate::word::convert::{dfa_reach_lform, Budget, ConvertError};
use crate::word::lform::LForm;
use crate::word::monoid::{is_counter_free, transition_monoid};
use crate::word::ops::{determinize, minimize_dfa};

#[derive(Clone, Debug)]
pub enum LoopingError {
    NotLooping,
    NotCounterFree,
    WrongMode,
    NotInFragment(String),
    ConversionBudgetExceeded,
}

impl core::fmt::Display for LoopingError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LoopingError::NotLooping => write!(f, "automaton is not looping"),
            LoopingError::NotCounterFree => write!(f, "automaton is not counter-free"),
            LoopingError::WrongMode => {
                write!(f, "expected a universal Büchi or nondeterministic coBüchi automaton")
            }
            LoopingError::NotInFragment(d) => write!(f, "{d}"),
            LoopingError::ConversionBudgetExceeded => {
                write!(f, "conversion exceeded its size budget")
            }
        }
    }
}

/// At most one state outside the pattern set, and that state is a sink.
/// Automata with no exceptional state at all are accepted as degenerate
/// looping automata (their language is everything or nothing).
pub fn is_looping(a: &OmegaWordAutomaton) -> bool {
    let outside: Vec<usize> = (0..a.num_states).filter(|q| !a.pattern.contains(q)).collect();
    match outside.len() {
        0 => true,
        1 => a.is_sink(outside[0]),
        _ => false,
    }
}

/// Compiles a safe or co-safe formula into the corresponding looping
/// counter-free automaton: a universal Büchi automaton for the safe
/// fragment, a nondeterministic coBüchi automaton for the co-safe one.
/// Formulas in both fragments (pure boolean ones) follow `prefer` when
/// given, defaulting to the co-safe route.
pub fn ltl_to_looping_automaton(
    f: &Formula,
    prefer: Option<Branching>,
) -> Result<OmegaWordAutomaton, LoopingError> {
    let cosafe = check_fragment(f, Fragment::CosafeLtl);
    let safe = check_fragment(f, Fragment::SafeLtl);
    let use_cosafe = match (cosafe, safe, prefer) {
        (true, true, Some(Branching::Universal)) => false,
        (true, _, _) => true,
        (false, true, _) => false,
        (false, false, _) => {
            return Err(LoopingError::NotInFragment(format!(
                "formula {f} is neither safe nor co-safe"
            )))
        }
    };
    if use_cosafe {
        let dfa = good_prefix_dfa(f)?;
        Ok(dfa_to_looping(&dfa, Branching::Nondeterministic, Acceptance::CoBuchi))
    } else {
        // Bad prefixes of a safe formula are the good prefixes of its
        // negation, which is co-safe.
        let neg = strong_nnf_negation(f);
        let dfa = good_prefix_dfa(&neg)?;
        Ok(dfa_to_looping(&dfa, Branching::Universal, Acceptance::Buchi))
    }
}

/// Negation normal form of `!f` with the weak next collapsed into the strong
/// one; valid over infinite words, where the two coincide.
pub fn strong_nnf_negation(f: &Formula) -> Formula {
    fn strengthen(f: &Formula) -> Formula {
        match f {
            Formula::WeakNext(a) => Formula::next(strengthen(a)),
            Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
            Formula::Not(a) => Formula::not(strengthen(a)),
            Formula::Or(a, b) => Formula::or(strengthen(a), strengthen(b)),
            Formula::And(a, b) => Formula::and(strengthen(a), strengthen(b)),
            Formula::Next(a) => Formula::next(strengthen(a)),
            Formula::Until(a, b) => Formula::until(strengthen(a), strengthen(b)),
            Formula::Release(a, b) => Formula::release(strengthen(a), strengthen(b)),
            Formula::WeakUntil(a, b) => Formula::weak_until(strengthen(a), strengthen(b)),
            Formula::Eventually(a) => Formula::eventually(strengthen(a)),
            Formula::Globally(a) => Formula::globally(strengthen(a)),
            other => other.clone(),
        }
    }
    strengthen(&to_nnf(&Formula::not(f.clone())))
}

/// Minimal complete DFA of the finite words satisfying the co-safe formula
/// under the strong finite-trace reading. Co-safety makes this language
/// extension-closed, so the minimal DFA has at most one accepting state and
/// it is absorbing.
fn good_prefix_dfa(f: &Formula) -> Result<FiniteWordAutomaton, LoopingError> {
    let props = f.props();
    let nfa = crate::word::ltlf::ltlf_to_nfa(f, &props)
        .map_err(|e| LoopingError::NotInFragment(format!("{e}")))?;
    let dfa = minimize_dfa(&determinize(&nfa));
    debug_assert!(
        dfa.accepting.len() <= 1,
        "extension-closed language must have a single accepting class"
    );
    Ok(dfa)
}

fn dfa_to_looping(
    dfa: &FiniteWordAutomaton,
    branching: Branching,
    acceptance: Acceptance,
) -> OmegaWordAutomaton {
    let mut a = OmegaWordAutomaton::new(
        dfa.alphabet.clone(),
        dfa.num_states,
        dfa.initial,
        branching,
        acceptance,
    );
    a.delta = dfa.delta.clone();
    // The pattern excludes the absorbing accepting class: for the coBüchi
    // reading those are the rejecting states, for the Büchi reading the
    // accepting ones.
    for q in 0..dfa.num_states {
        if !dfa.accepting.contains(&q) {
            a.pattern.insert(q);
        }
    }
    a
}

/// Extracts a co-safe formula from a looping nondeterministic coBüchi
/// automaton, or a safe formula from a looping universal Büchi automaton,
/// with the same language. The route goes through the prefix language of
/// the sink: determinize, minimize, verify counter-freeness, convert the
/// reachability structure to a formula, and (for the universal case) dualize.
pub fn looping_automaton_to_ltl(
    a: &OmegaWordAutomaton,
    budget_limit: usize,
) -> Result<Formula, LoopingError> {
    if !is_looping(a) {
        return Err(LoopingError::NotLooping);
    }
    let monoid = transition_monoid(a.num_states, &a.letter_matrices());
    if is_counter_free(&monoid).is_err() {
        return Err(LoopingError::NotCounterFree);
    }
    match (a.branching, a.acceptance) {
        (Branching::Nondeterministic, Acceptance::CoBuchi) => {
            // The language is (prefixes reaching the accepting sink).anything
            let reach = sink_reach_formula(a, budget_limit)?;
            Ok(omega_fold(&reach).simplify())
        }
        (Branching::Universal, Acceptance::Buchi) => {
            // The language is the complement of (prefixes reaching the
            // rejecting sink).anything
            let reach = sink_reach_formula(a, budget_limit)?;
            Ok(omega_fold(&strong_nnf_negation(&omega_fold(&reach))).simplify())
        }
        _ => Err(LoopingError::WrongMode),
    }
}

/// Folds `X true` into `true` and `X false` into `false`, bottom-up. Valid
/// over infinite words, where every position has a successor.
pub fn omega_fold(f: &Formula) -> Formula {
    let g = match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => Formula::not(omega_fold(a)),
        Formula::Or(a, b) => Formula::or(omega_fold(a), omega_fold(b)),
        Formula::And(a, b) => Formula::and(omega_fold(a), omega_fold(b)),
        Formula::Next(a) => Formula::next(omega_fold(a)),
        Formula::WeakNext(a) => Formula::weak_next(omega_fold(a)),
        Formula::Until(a, b) => Formula::until(omega_fold(a), omega_fold(b)),
        Formula::Release(a, b) => Formula::release(omega_fold(a), omega_fold(b)),
        Formula::WeakUntil(a, b) => Formula::weak_until(omega_fold(a), omega_fold(b)),
        Formula::Eventually(a) => Formula::eventually(omega_fold(a)),
        Formula::Globally(a) => Formula::globally(omega_fold(a)),
        other => other.clone(),
    };
    match g {
        Formula::Next(inner) | Formula::WeakNext(inner)
            if *inner == Formula::True || *inner == Formula::False =>
        {
            *inner
        }
        g => g,
    }
}

/// Co-safe formula for "some prefix drives a run of `a` into its
/// non-pattern sink".
fn sink_reach_formula(
    a: &OmegaWordAutomaton,
    budget_limit: usize,
) -> Result<Formula, LoopingError> {
    let sink: Vec<usize> = (0..a.num_states).filter(|q| !a.pattern.contains(q)).collect();
    if sink.is_empty() {
        // no exceptional state: the sink-reach language is empty
        return Ok(Formula::False);
    }
    let mut nfa = FiniteWordAutomaton::new(a.alphabet.clone(), a.num_states, a.initial);
    nfa.delta = a.delta.clone();
    nfa.accepting.insert(sink[0]);
    let dfa = minimize_dfa(&determinize(&nfa));
    if dfa.accepting.is_empty() {
        return Ok(Formula::False);
    }
    // The minimal DFA of a counter-free language is itself counter-free.
    let dmon = transition_monoid(dfa.num_states, &dfa.letter_matrices());
    if is_counter_free(&dmon).is_err() {
        return Err(LoopingError::NotCounterFree);
    }
    let letters = dfa.alphabet.num_letters();
    let next: Vec<Vec<usize>> = (0..dfa.num_states)
        .map(|q| {
            (0..letters)
                .map(|l| *dfa.delta[q][l].iter().next().expect("complete"))
                .collect()
        })
        .collect();
    let goal: Vec<bool> = (0..dfa.num_states).map(|q| dfa.accepting.contains(&q)).collect();
    let mut budget = Budget::new(budget_limit);
    let lf = dfa_reach_lform(dfa.num_states, letters, &next, &goal, &mut budget)
        .map_err(|ConvertError::BudgetExceeded| LoopingError::ConversionBudgetExceeded)?;
    Ok(lform_to_formula(&lf[dfa.initial], &a.alphabet))
}

/// Final lowering: abstract letters become exact valuation formulas over the
/// alphabet's propositions.
pub fn lform_to_formula(f: &LForm, alphabet: &WordAlphabet) -> Formula {
    match f {
        LForm::True => Formula::True,
        LForm::False => Formula::False,
        LForm::Letter(l) => letter_formula(alphabet, *l),
        LForm::Local(_) => unreachable!("locals resolved before final lowering"),
        // Infinite words have no final position.
        LForm::End => Formula::False,
        LForm::Or(a, b) => Formula::or(lform_to_formula(a, alphabet), lform_to_formula(b, alphabet)),
        LForm::And(a, b) => {
            Formula::and(lform_to_formula(a, alphabet), lform_to_formula(b, alphabet))
        }
        LForm::X(a) => Formula::next(lform_to_formula(a, alphabet)),
        LForm::U(a, b) => {
            Formula::until(lform_to_formula(a, alphabet), lform_to_formula(b, alphabet))
        }
    }
}

/// The exact valuation formula of one letter.
pub fn letter_formula(alphabet: &WordAlphabet, letter: usize) -> Formula {
    Formula::big_and(alphabet.props.iter().enumerate().map(|(i, p)| {
        if letter & (1 << i) != 0 {
            Formula::prop(p)
        } else {
            Formula::not(Formula::prop(p))
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use crate::word::ltlf::ltlf_to_nfa;
    use crate::word::ops::bounded_language_equiv;

    fn p() -> F {
        F::prop("p")
    }
    fn q() -> F {
        F::prop("q")
    }

    #[test]
    fn safety_of_never_p() {
        // G !p: two-state looping UBA with a rejecting sink reached on p.
        let f = F::globally(F::not(p()));
        let a = ltl_to_looping_automaton(&f, None).unwrap();
        assert_eq!(a.branching, Branching::Universal);
        assert!(is_looping(&a));
        let back = looping_automaton_to_ltl(&a, 1 << 20).unwrap();
        assert!(check_fragment(&back, Fragment::SafeLtl), "got {back}");
        // bad-prefix languages agree up to length 8
        let n1 = ltlf_to_nfa(&strong_nnf_negation(&f), &f.props()).unwrap();
        let n2 = ltlf_to_nfa(&strong_nnf_negation(&back), &f.props()).unwrap();
        assert!(bounded_language_equiv(&n1, &n2, 8).is_none());
    }

    #[test]
    fn cosafety_of_eventually_q() {
        let f = F::eventually(q());
        let a = ltl_to_looping_automaton(&f, None).unwrap();
        assert_eq!(a.branching, Branching::Nondeterministic);
        assert!(is_looping(&a));
        let back = looping_automaton_to_ltl(&a, 1 << 20).unwrap();
        assert!(check_fragment(&back, Fragment::CosafeLtl), "got {back}");
        let n1 = ltlf_to_nfa(&f, &f.props()).unwrap();
        let n2 = ltlf_to_nfa(&back, &f.props()).unwrap();
        let w = bounded_language_equiv(&n1, &n2, 8);
        assert!(w.is_none(), "back = {back}, differ on {w:?}");
    }

    #[test]
    fn universal_accepting_everything_is_degenerate_looping() {
        let f = F::globally(F::True);
        let a = ltl_to_looping_automaton(&f, Some(Branching::Universal)).unwrap();
        assert!(is_looping(&a));
        let back = looping_automaton_to_ltl(&a, 1 << 20).unwrap();
        assert_eq!(back, F::True);
    }

    /// Round trip through the looping automaton on a batch of random safe
    /// and co-safe formulas: the automaton must be looping and counter-free,
    /// and the extracted formula must match on all words up to length 7.
    #[test]
    fn random_round_trips() {
        use crate::gen::random_formula;
        use crate::word::monoid::{is_counter_free, transition_monoid};
        for seed in 0..40u64 {
            for frag in [Fragment::CosafeLtl, Fragment::SafeLtl] {
                let f = random_formula(frag, 3, &["p", "q"], 1000 + seed);
                let prefer = if frag == Fragment::SafeLtl {
                    Some(Branching::Universal)
                } else {
                    Some(Branching::Nondeterministic)
                };
                let a = ltl_to_looping_automaton(&f, prefer).unwrap();
                assert!(is_looping(&a), "not looping for {f}");
                let m = transition_monoid(a.num_states, &a.letter_matrices());
                assert!(is_counter_free(&m).is_ok(), "counter in automaton of {f}");
                let back = looping_automaton_to_ltl(&a, 1 << 22).unwrap();
                let target = if frag == Fragment::SafeLtl {
                    Fragment::SafeLtl
                } else {
                    Fragment::CosafeLtl
                };
                assert!(check_fragment(&back, target), "{back} not in {target}");
                // compare finite-trace languages of the witness side
                let (lhs, rhs) = if frag == Fragment::SafeLtl {
                    (strong_nnf_negation(&f), strong_nnf_negation(&back))
                } else {
                    (f.clone(), back.clone())
                };
                let props = alloc::vec![alloc::string::String::from("p"), alloc::string::String::from("q")];
                let n1 = ltlf_to_nfa(&lhs, &props).unwrap();
                let n2 = ltlf_to_nfa(&rhs, &props).unwrap();
                let w = bounded_language_equiv(&n1, &n2, 7);
                assert!(w.is_none(), "formula {f}: back {back}: differ on {w:?}");
            }
        }
    }
}
