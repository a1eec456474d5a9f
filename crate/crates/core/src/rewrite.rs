//! Equivalence-preserving syntactic rewriters: negation normal form,
//! abbreviation expansion, and the finite-path rewrite rules that trade
//! release under existential quantifiers (and until under universal ones)
//! for their bounded unfoldings.

use alloc::boxed::Box;
use alloc::string::String;

use crate::formula::Formula;
use crate::fragment::{Fragment, NotInFragment};

/// Negation normal form.
///
/// Negations are pushed to the leaves through the dual pairs (E,A), (X,wX),
/// (U,R), (F,G), (&,|) and the constants. Three node shapes keep their
/// negation as a tagged leaf, with the operands themselves normalized:
/// `!Dn f` (the graded count has no dual operator in the syntax), `!Y f` and
/// `!(f S g)` (their weak-past duals are not part of the syntax either).
/// The result is equivalent to the input under both the infinite-path and the
/// finite-path semantics.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf_pos(f)
}

fn nnf_pos(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => nnf_neg(a),
        Formula::Or(a, b) => Formula::or(nnf_pos(a), nnf_pos(b)),
        Formula::And(a, b) => Formula::and(nnf_pos(a), nnf_pos(b)),
        Formula::Count(n, a) => Formula::Count(*n, Box::new(nnf_pos(a))),
        Formula::Exists(a) => Formula::exists(nnf_pos(a)),
        Formula::All(a) => Formula::all(nnf_pos(a)),
        Formula::Next(a) => Formula::next(nnf_pos(a)),
        Formula::WeakNext(a) => Formula::weak_next(nnf_pos(a)),
        Formula::Until(a, b) => Formula::until(nnf_pos(a), nnf_pos(b)),
        Formula::Release(a, b) => Formula::release(nnf_pos(a), nnf_pos(b)),
        Formula::WeakUntil(a, b) => Formula::weak_until(nnf_pos(a), nnf_pos(b)),
        Formula::Eventually(a) => Formula::eventually(nnf_pos(a)),
        Formula::Globally(a) => Formula::globally(nnf_pos(a)),
        Formula::Yesterday(a) => Formula::yesterday(nnf_pos(a)),
        Formula::Since(a, b) => Formula::since(nnf_pos(a), nnf_pos(b)),
    }
}

fn nnf_neg(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Prop(_) => Formula::not(f.clone()),
        Formula::Not(a) => nnf_pos(a),
        Formula::Or(a, b) => Formula::and(nnf_neg(a), nnf_neg(b)),
        Formula::And(a, b) => Formula::or(nnf_neg(a), nnf_neg(b)),
        // Tagged negated-count leaf; the operand stays positive.
        Formula::Count(n, a) => Formula::not(Formula::Count(*n, Box::new(nnf_pos(a)))),
        Formula::Exists(a) => Formula::all(nnf_neg(a)),
        Formula::All(a) => Formula::exists(nnf_neg(a)),
        Formula::Next(a) => Formula::weak_next(nnf_neg(a)),
        Formula::WeakNext(a) => Formula::next(nnf_neg(a)),
        Formula::Until(a, b) => Formula::release(nnf_neg(a), nnf_neg(b)),
        Formula::Release(a, b) => Formula::until(nnf_neg(a), nnf_neg(b)),
        // !(f W g) = !(g R (f | g)) = !g U (!f & !g)
        Formula::WeakUntil(a, b) => {
            let na = nnf_neg(a);
            let nb = nnf_neg(b);
            Formula::until(nb.clone(), Formula::and(na, nb))
        }
        Formula::Eventually(a) => Formula::globally(nnf_neg(a)),
        Formula::Globally(a) => Formula::eventually(nnf_neg(a)),
        // Tagged negated-past leaves.
        Formula::Yesterday(a) => Formula::not(Formula::yesterday(nnf_pos(a))),
        Formula::Since(a, b) => Formula::not(Formula::since(nnf_pos(a), nnf_pos(b))),
    }
}

/// True when negations occur only on propositions, counts and past operators
/// (with positive operands underneath).
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => true,
        Formula::Not(a) => match &**a {
            Formula::Prop(_) => true,
            Formula::Count(_, x) | Formula::Yesterday(x) => is_nnf(x),
            Formula::Since(x, y) => is_nnf(x) && is_nnf(y),
            _ => false,
        },
        Formula::Or(a, b)
        | Formula::And(a, b)
        | Formula::Until(a, b)
        | Formula::Release(a, b)
        | Formula::WeakUntil(a, b)
        | Formula::Since(a, b) => is_nnf(a) && is_nnf(b),
        Formula::Count(_, a)
        | Formula::Exists(a)
        | Formula::All(a)
        | Formula::Next(a)
        | Formula::WeakNext(a)
        | Formula::Eventually(a)
        | Formula::Globally(a)
        | Formula::Yesterday(a) => is_nnf(a),
    }
}

/// Expands every abbreviation to the primitive connectives: `F f = true U f`,
/// `G f = !F !f`, `f W g = G f | (f U g)`, `A f = !E !f`, `wX f = !X !f`,
/// `f R g = !(!f U !g)`. The output uses only booleans, counts, `E`, `X`,
/// `U`, `Y` and `S`.
pub fn expand_abbreviations(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => Formula::not(expand_abbreviations(a)),
        Formula::Or(a, b) => Formula::or(expand_abbreviations(a), expand_abbreviations(b)),
        Formula::And(a, b) => Formula::and(expand_abbreviations(a), expand_abbreviations(b)),
        Formula::Count(n, a) => Formula::Count(*n, Box::new(expand_abbreviations(a))),
        Formula::Exists(a) => Formula::exists(expand_abbreviations(a)),
        Formula::All(a) => Formula::not(Formula::exists(Formula::not(expand_abbreviations(a)))),
        Formula::Next(a) => Formula::next(expand_abbreviations(a)),
        Formula::WeakNext(a) => {
            Formula::not(Formula::next(Formula::not(expand_abbreviations(a))))
        }
        Formula::Until(a, b) => Formula::until(expand_abbreviations(a), expand_abbreviations(b)),
        Formula::Release(a, b) => Formula::not(Formula::until(
            Formula::not(expand_abbreviations(a)),
            Formula::not(expand_abbreviations(b)),
        )),
        Formula::WeakUntil(a, b) => {
            let ea = expand_abbreviations(a);
            let eb = expand_abbreviations(b);
            Formula::or(
                Formula::not(Formula::until(Formula::True, Formula::not(ea.clone()))),
                Formula::until(ea, eb),
            )
        }
        Formula::Eventually(a) => Formula::until(Formula::True, expand_abbreviations(a)),
        Formula::Globally(a) => Formula::not(Formula::until(
            Formula::True,
            Formula::not(expand_abbreviations(a)),
        )),
        Formula::Yesterday(a) => Formula::yesterday(expand_abbreviations(a)),
        Formula::Since(a, b) => Formula::since(expand_abbreviations(a), expand_abbreviations(b)),
    }
}

/// Best-effort inverse of [`expand_abbreviations`]: folds the primitive
/// patterns back into `A`, `wX`, `R`, `F`, `G` and `W`. Bottom-up, so nested
/// expansions fold too.
pub fn introduce_abbreviations(f: &Formula) -> Formula {
    let f = match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => Formula::not(introduce_abbreviations(a)),
        Formula::Or(a, b) => Formula::or(introduce_abbreviations(a), introduce_abbreviations(b)),
        Formula::And(a, b) => Formula::and(introduce_abbreviations(a), introduce_abbreviations(b)),
        Formula::Count(n, a) => Formula::Count(*n, Box::new(introduce_abbreviations(a))),
        Formula::Exists(a) => Formula::exists(introduce_abbreviations(a)),
        Formula::All(a) => Formula::all(introduce_abbreviations(a)),
        Formula::Next(a) => Formula::next(introduce_abbreviations(a)),
        Formula::WeakNext(a) => Formula::weak_next(introduce_abbreviations(a)),
        Formula::Until(a, b) => Formula::until(introduce_abbreviations(a), introduce_abbreviations(b)),
        Formula::Release(a, b) => {
            Formula::release(introduce_abbreviations(a), introduce_abbreviations(b))
        }
        Formula::WeakUntil(a, b) => {
            Formula::weak_until(introduce_abbreviations(a), introduce_abbreviations(b))
        }
        Formula::Eventually(a) => Formula::eventually(introduce_abbreviations(a)),
        Formula::Globally(a) => Formula::globally(introduce_abbreviations(a)),
        Formula::Yesterday(a) => Formula::yesterday(introduce_abbreviations(a)),
        Formula::Since(a, b) => Formula::since(introduce_abbreviations(a), introduce_abbreviations(b)),
    };
    fold_once(f)
}

fn fold_once(f: Formula) -> Formula {
    match f {
        // true U f  =>  F f
        Formula::Until(a, b) if *a == Formula::True => Formula::eventually(*b),
        Formula::Not(inner) => match *inner {
            // !F !f  =>  G f
            Formula::Eventually(x) => match *x {
                Formula::Not(y) => Formula::globally(*y),
                x => Formula::not(Formula::eventually(x)),
            },
            // !E !f  =>  A f
            Formula::Exists(x) => match *x {
                Formula::Not(y) => Formula::all(*y),
                x => Formula::not(Formula::exists(x)),
            },
            // !X !f  =>  wX f
            Formula::Next(x) => match *x {
                Formula::Not(y) => Formula::weak_next(*y),
                x => Formula::not(Formula::next(x)),
            },
            // !(!a U !b)  =>  a R b
            Formula::Until(a, b) => match (*a, *b) {
                (Formula::Not(x), Formula::Not(y)) => Formula::release(*x, *y),
                (a, b) => Formula::not(Formula::until(a, b)),
            },
            other => Formula::not(other),
        },
        // G a | (a U b)  =>  a W b
        Formula::Or(l, r) => match (*l, *r) {
            (Formula::Globally(ga), Formula::Until(ua, ub)) if *ga == *ua => {
                Formula::weak_until(*ua, *ub)
            }
            (l, r) => Formula::or(l, r),
        },
        f => f,
    }
}

/// The finite-path rewrite system.
///
/// Under finite-path semantics `E wX f` is valid and `A X f` unsatisfiable,
/// and release/until trade places through the unfoldings
/// `aR(f,g) = g U ((wX false | f) & g)` and `aU(f,g) = g R ((X true & f) | g)`.
/// This routine applies those rules, innermost first and to a fixpoint, at
/// the polarized context shapes: release at the top of an `E` body, under
/// `X` in an `E` body, or on either side of an `U` in an `E` body; dually for
/// until under `A`. Expects a past-free formula in negation normal form;
/// `F`, `G` and `W` inside quantified bodies are unfolded into `U`/`R` first.
pub fn rewrite_prop3(f: &Formula) -> Result<Formula, NotInFragment> {
    if f.has_past() {
        return Err(NotInFragment {
            fragment: Fragment::CCtlStarF,
            detail: String::from("past operators have no finite-path reading"),
        });
    }
    Ok(rw(f))
}

/// `g U ((wX false | f) & g)` - the release unfolding valid on finite paths.
pub fn alpha_release(f: Formula, g: Formula) -> Formula {
    Formula::until(
        g.clone(),
        Formula::and(Formula::or(Formula::weak_next(Formula::False), f), g),
    )
}

/// `g R ((X true & f) | g)` - the until unfolding valid on finite paths.
pub fn alpha_until(f: Formula, g: Formula) -> Formula {
    Formula::release(
        g.clone(),
        Formula::or(Formula::and(Formula::next(Formula::True), f), g),
    )
}

fn rw(f: &Formula) -> Formula {
    // Process children first (innermost), then look for a redex here.
    let f = match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => Formula::not(rw(a)),
        Formula::Or(a, b) => Formula::or(rw(a), rw(b)),
        Formula::And(a, b) => Formula::and(rw(a), rw(b)),
        Formula::Count(n, a) => Formula::Count(*n, Box::new(rw(a))),
        Formula::Exists(a) => Formula::exists(rw(a)),
        Formula::All(a) => Formula::all(rw(a)),
        Formula::Next(a) => Formula::next(rw(a)),
        Formula::WeakNext(a) => Formula::weak_next(rw(a)),
        Formula::Until(a, b) => Formula::until(rw(a), rw(b)),
        Formula::Release(a, b) => Formula::release(rw(a), rw(b)),
        Formula::WeakUntil(a, b) => Formula::weak_until(rw(a), rw(b)),
        Formula::Eventually(a) => Formula::eventually(rw(a)),
        Formula::Globally(a) => Formula::globally(rw(a)),
        Formula::Yesterday(_) | Formula::Since(_, _) => unreachable!("past checked by caller"),
    };
    match f {
        Formula::Exists(body) => Formula::exists(rw_e_body(unfold_sugar(*body))).simplify_quantifier_shell(),
        Formula::All(body) => Formula::all(rw_a_body(unfold_sugar(*body))).simplify_quantifier_shell(),
        f => f,
    }
}

impl Formula {
    /// `E wX f -> true` and `A X f -> false`.
    fn simplify_quantifier_shell(self) -> Formula {
        match &self {
            Formula::Exists(b) => {
                if matches!(&**b, Formula::WeakNext(_)) {
                    return Formula::True;
                }
            }
            Formula::All(b) => {
                if matches!(&**b, Formula::Next(_)) {
                    return Formula::False;
                }
            }
            _ => {}
        }
        self
    }
}

/// Inside quantified bodies: `F a = true U a`, `G a = false R a`,
/// `a W b = b R (a | b)`. All three identities hold on finite paths.
fn unfold_sugar(f: Formula) -> Formula {
    match f {
        Formula::Eventually(a) => Formula::until(Formula::True, unfold_sugar(*a)),
        Formula::Globally(a) => Formula::release(Formula::False, unfold_sugar(*a)),
        Formula::WeakUntil(a, b) => {
            let a = unfold_sugar(*a);
            let b = unfold_sugar(*b);
            Formula::release(b.clone(), Formula::or(a, b))
        }
        Formula::Not(a) => Formula::not(unfold_sugar(*a)),
        Formula::Or(a, b) => Formula::or(unfold_sugar(*a), unfold_sugar(*b)),
        Formula::And(a, b) => Formula::and(unfold_sugar(*a), unfold_sugar(*b)),
        Formula::Next(a) => Formula::next(unfold_sugar(*a)),
        Formula::WeakNext(a) => Formula::weak_next(unfold_sugar(*a)),
        Formula::Until(a, b) => Formula::until(unfold_sugar(*a), unfold_sugar(*b)),
        Formula::Release(a, b) => Formula::release(unfold_sugar(*a), unfold_sugar(*b)),
        // State subformulas (quantified or atomic) are left alone; they were
        // already processed by the outer traversal.
        leaf => leaf,
    }
}

/// Redexes in an existential body: release at the top, release under a
/// top-level `X`, release on either side of a top-level `U`.
fn rw_e_body(f: Formula) -> Formula {
    match f {
        Formula::Release(a, b) => rw_e_body(alpha_release(*a, *b)),
        Formula::Next(inner) => match *inner {
            Formula::Release(a, b) => Formula::next(rw_e_body(alpha_release(*a, *b))),
            other => Formula::next(other),
        },
        Formula::Until(a, b) => {
            let a = match *a {
                Formula::Release(x, y) => rw_e_body(alpha_release(*x, *y)),
                other => other,
            };
            let b = match *b {
                Formula::Release(x, y) => rw_e_body(alpha_release(*x, *y)),
                other => other,
            };
            Formula::until(a, b)
        }
        other => other,
    }
}

/// Dual redexes in a universal body: until at the top, until under a
/// top-level `wX`, until on either side of a top-level `R`.
fn rw_a_body(f: Formula) -> Formula {
    match f {
        Formula::Until(a, b) => rw_a_body(alpha_until(*a, *b)),
        Formula::WeakNext(inner) => match *inner {
            Formula::Until(a, b) => Formula::weak_next(rw_a_body(alpha_until(*a, *b))),
            other => Formula::weak_next(other),
        },
        Formula::Release(a, b) => {
            let a = match *a {
                Formula::Until(x, y) => rw_a_body(alpha_until(*x, *y)),
                other => other,
            };
            let b = match *b {
                Formula::Until(x, y) => rw_a_body(alpha_until(*x, *y)),
                other => other,
            };
            Formula::release(a, b)
        }
        other => other,
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
    fn nnf_dual_pairs() {
        // !E X !p  =>  A wX p
        let f = F::not(F::exists(F::next(F::not(p()))));
        assert_eq!(to_nnf(&f), F::all(F::weak_next(p())));
        // !(p U q)  =>  !p R !q
        let g = F::not(F::until(p(), q()));
        assert_eq!(to_nnf(&g), F::release(F::not(p()), F::not(q())));
    }

    #[test]
    fn nnf_keeps_negated_leaves() {
        let f = F::not(F::count(2, F::not(F::not(p()))));
        assert_eq!(to_nnf(&f), F::not(F::count(2, p())));
        let g = F::not(F::yesterday(p()));
        assert_eq!(to_nnf(&g), g);
        assert!(is_nnf(&to_nnf(&F::not(F::since(p(), F::not(q()))))));
    }

    #[test]
    fn expand_f_and_w() {
        assert_eq!(
            expand_abbreviations(&F::eventually(p())),
            F::until(F::True, p())
        );
        let w = expand_abbreviations(&F::weak_until(p(), q()));
        assert_eq!(
            w,
            F::or(
                F::not(F::until(F::True, F::not(p()))),
                F::until(p(), q())
            )
        );
    }

    #[test]
    fn introduce_inverts_simple_expansions() {
        for f in [
            F::eventually(p()),
            F::globally(p()),
            F::all(F::next(p())),
            F::weak_until(p(), q()),
            F::release(p(), q()),
        ] {
            assert_eq!(introduce_abbreviations(&expand_abbreviations(&f)), f);
        }
    }

    #[test]
    fn prop3_item_one() {
        assert_eq!(rewrite_prop3(&F::exists(F::weak_next(p()))).unwrap(), F::True);
        assert_eq!(rewrite_prop3(&F::all(F::next(p()))).unwrap(), F::False);
    }

    #[test]
    fn prop3_release_under_exists() {
        let f = F::exists(F::release(p(), q()));
        let expected = F::exists(alpha_release(p(), q()));
        assert_eq!(rewrite_prop3(&f).unwrap(), expected);
    }

    #[test]
    fn prop3_rejects_past() {
        assert!(rewrite_prop3(&F::yesterday(p())).is_err());
    }
}
