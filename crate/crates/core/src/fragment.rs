//! Grammar fragments of the common formula syntax and their membership
//! predicates.
//!
//! Membership is syntactic: a formula belongs to a fragment when it is
//! generated by the fragment's grammar after expanding only the
//! abbreviations that the fragment's definition licenses. In particular the
//! polarized fragment accepts the derived forms `A X`, `E F`, `A G` and
//! `A (· R ·)` but rejects `E G`, `E (· R ·)`, `A F` and `A (· U ·)` in any
//! disguise.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::formula::Formula;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fragment {
    /// The unrestricted superset grammar.
    FullCtlStarP,
    /// Polarized counting CTL with past: `D^n, p, !, |, E X, E (U), Y, S`
    /// plus the licensed derived forms.
    PolCCtlP,
    /// [`Fragment::PolCCtlP`] without past operators.
    PolCCtl,
    /// Counting CTL* over finite paths: the full grammar minus `Y`/`S`.
    CCtlStarF,
    /// Polarized normal form of [`Fragment::CCtlStarF`]: state layer
    /// `p | !f | f|f | Dn f | E psi`, path layer `psi ::= f | psi|psi |
    /// psi&psi | X psi | (psi U psi)`.
    PolCCtlStar,
    /// Normal form of [`Fragment::PolCCtlP`]: state layer
    /// `p | !f | f&f | Dn f | E F psi` with `psi` pure past over state
    /// formulas.
    EfPurePast,
    /// Linear-time future fragment (no path quantifiers, counts or past).
    Ltl,
    /// LTL over finite words: [`Fragment::Ltl`] plus the weak next `wX`.
    Ltlf,
    /// Safety fragment: literals, `&`, `|`, `X`, `R` (and the derived
    /// `G`, `W`). No `U`, no negation above literals.
    SafeLtl,
    /// Co-safety fragment: literals, `&`, `|`, `X`, `U` (and the derived
    /// `F`). No `R`, no negation above literals.
    CosafeLtl,
    /// Propositional logic over `Y` and `S` only.
    PurePast,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Fragment::FullCtlStarP => "cctl*p",
            Fragment::PolCCtlP => "polcctlp",
            Fragment::PolCCtl => "polcctl",
            Fragment::CCtlStarF => "cctlsf",
            Fragment::PolCCtlStar => "polcctlstar",
            Fragment::EfPurePast => "efpurepast",
            Fragment::Ltl => "ltl",
            Fragment::Ltlf => "ltlf",
            Fragment::SafeLtl => "safeltl",
            Fragment::CosafeLtl => "cosafeltl",
            Fragment::PurePast => "purepast",
        };
        write!(f, "{name}")
    }
}

/// Error raised by operations whose precondition is fragment membership.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NotInFragment {
    pub fragment: Fragment,
    pub detail: String,
}

impl fmt::Display for NotInFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "formula is not in fragment {}: {}", self.fragment, self.detail)
    }
}

/// Decides membership of `f` in `frag`. Total.
pub fn check_fragment(f: &Formula, frag: Fragment) -> bool {
    match frag {
        Fragment::FullCtlStarP => true,
        Fragment::PolCCtlP => kernelize_polcctlp(f, false).is_ok(),
        Fragment::PolCCtl => !f.has_past() && kernelize_polcctlp(f, false).is_ok(),
        Fragment::CCtlStarF => !f.has_past(),
        Fragment::PolCCtlStar => polarized_state(f),
        Fragment::EfPurePast => ef_state(f),
        Fragment::Ltl => ltl(f, false),
        Fragment::Ltlf => ltl(f, true),
        Fragment::SafeLtl => safe(f),
        Fragment::CosafeLtl => cosafe(f),
        Fragment::PurePast => pure_past_bool(f),
    }
}

/// Kernel shape of the polarized past fragment: booleans, `D^n`, `E X`,
/// `E (U)`, `Y`, `S`, with every licensed abbreviation expanded away.
///
/// With `weak_next_as_next` the weak next operator is folded into the strong
/// one (they coincide over infinite paths); the strict fragment check keeps
/// it off, the infinite-path model checker turns it on so that negation
/// normal forms remain checkable.
pub fn kernelize_polcctlp(f: &Formula, weak_next_as_next: bool) -> Result<Formula, NotInFragment> {
    let err = |what: &str| NotInFragment {
        fragment: Fragment::PolCCtlP,
        detail: String::from(what),
    };
    let k = |g: &Formula| kernelize_polcctlp(g, weak_next_as_next);
    match f {
        Formula::True => Ok(Formula::True),
        Formula::False => Ok(Formula::False),
        Formula::Prop(p) => Ok(Formula::Prop(p.clone())),
        Formula::Not(a) => Ok(Formula::not(k(a)?)),
        Formula::Or(a, b) => Ok(Formula::or(k(a)?, k(b)?)),
        Formula::And(a, b) => Ok(Formula::and(k(a)?, k(b)?)),
        Formula::Count(n, a) => Ok(Formula::Count(*n, alloc::boxed::Box::new(k(a)?))),
        Formula::Yesterday(a) => Ok(Formula::yesterday(k(a)?)),
        Formula::Since(a, b) => Ok(Formula::since(k(a)?, k(b)?)),
        Formula::Exists(body) => match &**body {
            Formula::Next(a) => Ok(Formula::exists(Formula::next(k(a)?))),
            Formula::WeakNext(a) if weak_next_as_next => {
                Ok(Formula::exists(Formula::next(k(a)?)))
            }
            Formula::Until(a, b) => Ok(Formula::exists(Formula::until(k(a)?, k(b)?))),
            Formula::Eventually(a) => {
                Ok(Formula::exists(Formula::until(Formula::True, k(a)?)))
            }
            // E over a state formula quantifies nothing.
            other => k(other).map_err(|_| err("E must be followed by X, U or F")),
        },
        Formula::All(body) => match &**body {
            // A X f = !E X !f; over infinite paths the weak next coincides.
            Formula::Next(a) | Formula::WeakNext(a) => Ok(Formula::not(Formula::exists(
                Formula::next(Formula::not(k(a)?)),
            ))),
            // A (f R g) = !E (!f U !g)
            Formula::Release(a, b) => Ok(Formula::not(Formula::exists(Formula::until(
                Formula::not(k(a)?),
                Formula::not(k(b)?),
            )))),
            // A G f = !E F !f
            Formula::Globally(a) => Ok(Formula::not(Formula::exists(Formula::until(
                Formula::True,
                Formula::not(k(a)?),
            )))),
            // A (f W g) = A (g R (f | g)); only folded in relaxed mode.
            Formula::WeakUntil(a, b) if weak_next_as_next => {
                let (ka, kb) = (k(a)?, k(b)?);
                Ok(Formula::not(Formula::exists(Formula::until(
                    Formula::not(kb.clone()),
                    Formula::not(Formula::or(ka, kb)),
                ))))
            }
            Formula::Until(_, _) | Formula::Eventually(_) => {
                Err(err("A F and A (U) are not derivable in the polarized fragment"))
            }
            other => k(other).map_err(|_| err("A must be followed by X, R or G")),
        },
        Formula::Next(_)
        | Formula::WeakNext(_)
        | Formula::Until(_, _)
        | Formula::Release(_, _)
        | Formula::WeakUntil(_, _)
        | Formula::Eventually(_)
        | Formula::Globally(_) => Err(err("bare path operator outside a path quantifier")),
    }
}

fn polarized_state(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => true,
        Formula::Not(a) => polarized_state(a),
        Formula::Or(a, b) | Formula::And(a, b) => polarized_state(a) && polarized_state(b),
        Formula::Count(_, a) => polarized_state(a),
        Formula::Exists(body) => polarized_path(body),
        _ => false,
    }
}

fn polarized_path(f: &Formula) -> bool {
    if polarized_state(f) {
        return true;
    }
    match f {
        Formula::Or(a, b) | Formula::And(a, b) | Formula::Until(a, b) => {
            polarized_path(a) && polarized_path(b)
        }
        Formula::Next(a) | Formula::Eventually(a) => polarized_path(a),
        _ => false,
    }
}

fn ef_state(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => true,
        Formula::Not(a) => ef_state(a),
        Formula::And(a, b) | Formula::Or(a, b) => ef_state(a) && ef_state(b),
        Formula::Count(_, a) => ef_state(a),
        Formula::Exists(body) => match &**body {
            Formula::Eventually(p) => ef_past(p),
            Formula::Until(t, p) if **t == Formula::True => ef_past(p),
            _ => false,
        },
        _ => false,
    }
}

fn ef_past(f: &Formula) -> bool {
    if ef_state(f) {
        return true;
    }
    match f {
        Formula::Or(a, b) | Formula::And(a, b) => ef_past(a) && ef_past(b),
        Formula::Yesterday(a) => ef_past(a),
        Formula::Since(a, b) => ef_past(a) && ef_past(b),
        _ => false,
    }
}

fn ltl(f: &Formula, weak_next: bool) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => true,
        Formula::Not(a) => ltl(a, weak_next),
        Formula::Or(a, b)
        | Formula::And(a, b)
        | Formula::Until(a, b)
        | Formula::Release(a, b)
        | Formula::WeakUntil(a, b) => ltl(a, weak_next) && ltl(b, weak_next),
        Formula::Next(a) | Formula::Eventually(a) | Formula::Globally(a) => ltl(a, weak_next),
        Formula::WeakNext(a) => weak_next && ltl(a, weak_next),
        _ => false,
    }
}

fn literal(f: &Formula) -> bool {
    matches!(f, Formula::True | Formula::False | Formula::Prop(_))
        || matches!(f, Formula::Not(a) if matches!(&**a, Formula::Prop(_)))
}

fn safe(f: &Formula) -> bool {
    if literal(f) {
        return true;
    }
    match f {
        Formula::Or(a, b) | Formula::And(a, b) | Formula::Release(a, b) | Formula::WeakUntil(a, b) => {
            safe(a) && safe(b)
        }
        Formula::Next(a) | Formula::Globally(a) => safe(a),
        _ => false,
    }
}

fn cosafe(f: &Formula) -> bool {
    if literal(f) {
        return true;
    }
    match f {
        Formula::Or(a, b) | Formula::And(a, b) | Formula::Until(a, b) => cosafe(a) && cosafe(b),
        Formula::Next(a) | Formula::Eventually(a) => cosafe(a),
        _ => false,
    }
}

fn pure_past_bool(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => true,
        Formula::Not(a) => pure_past_bool(a),
        Formula::Or(a, b) | Formula::And(a, b) => pure_past_bool(a) && pure_past_bool(b),
        Formula::Yesterday(a) => pure_past_bool(a),
        Formula::Since(a, b) => pure_past_bool(a) && pure_past_bool(b),
        _ => false,
    }
}

/// Convenience: error value for a failed precondition on `frag`.
pub fn require(f: &Formula, frag: Fragment) -> Result<(), NotInFragment> {
    if check_fragment(f, frag) {
        Ok(())
    } else {
        Err(NotInFragment {
            fragment: frag,
            detail: format!("offending formula: {f}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    fn p() -> F {
        F::prop("p")
    }
    fn q() -> F {
        F::prop("q")
    }

    #[test]
    fn polarized_rejects_af_and_eg() {
        assert!(!check_fragment(&F::all(F::eventually(p())), Fragment::PolCCtlP));
        assert!(!check_fragment(&F::all(F::until(p(), q())), Fragment::PolCCtlP));
        assert!(!check_fragment(&F::exists(F::globally(p())), Fragment::PolCCtlP));
        assert!(!check_fragment(&F::exists(F::release(p(), q())), Fragment::PolCCtlP));
    }

    #[test]
    fn polarized_accepts_derived_forms() {
        assert!(check_fragment(&F::all(F::next(p())), Fragment::PolCCtlP));
        assert!(check_fragment(&F::all(F::globally(p())), Fragment::PolCCtlP));
        assert!(check_fragment(&F::all(F::release(p(), q())), Fragment::PolCCtlP));
        assert!(check_fragment(&F::exists(F::eventually(p())), Fragment::PolCCtlP));
        // !E!(p) is A p, a degenerate quantification over a state formula.
        assert!(check_fragment(&F::not(F::exists(F::not(p()))), Fragment::PolCCtlP));
    }

    #[test]
    fn nested_until_only_in_full_star_syntax() {
        // E((p | (q U r)) U s)
        let f = F::exists(F::until(
            F::or(p(), F::until(q(), F::prop("r"))),
            F::prop("s"),
        ));
        assert!(!check_fragment(&f, Fragment::PolCCtl));
        assert!(!check_fragment(&f, Fragment::PolCCtlP));
        assert!(check_fragment(&f, Fragment::CCtlStarF));
        assert!(check_fragment(&f, Fragment::PolCCtlStar));
    }

    #[test]
    fn past_membership() {
        let f = F::since(p(), q());
        assert!(check_fragment(&f, Fragment::PolCCtlP));
        assert!(!check_fragment(&f, Fragment::PolCCtl));
        assert!(!check_fragment(&f, Fragment::CCtlStarF));
        assert!(check_fragment(&f, Fragment::PurePast));
    }

    #[test]
    fn safe_and_cosafe_are_ltl() {
        let s = F::globally(F::or(F::not(p()), F::next(q())));
        let c = F::until(p(), F::and(q(), F::next(p())));
        assert!(check_fragment(&s, Fragment::SafeLtl));
        assert!(!check_fragment(&s, Fragment::CosafeLtl));
        assert!(check_fragment(&c, Fragment::CosafeLtl));
        assert!(!check_fragment(&c, Fragment::SafeLtl));
        assert!(check_fragment(&s, Fragment::Ltl));
        assert!(check_fragment(&c, Fragment::Ltl));
    }

    #[test]
    fn safe_forbids_until_and_negation() {
        assert!(!check_fragment(&F::until(p(), q()), Fragment::SafeLtl));
        assert!(!check_fragment(&F::not(F::next(p())), Fragment::SafeLtl));
        assert!(!check_fragment(&F::release(p(), q()), Fragment::CosafeLtl));
    }
}
