//! Deterministic random generators for formulas and automata: the substrate
//! of the differential test suites. Everything is a pure function of the
//! seed.

use alloc::string::String;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::fragment::Fragment;

pub use crate::semantics::equiv::derive_seed;

/// Random formula in the given fragment, with subformula depth at most
/// `depth`, over the propositions `ap`.
pub fn random_formula(fragment: Fragment, depth: usize, ap: &[&str], seed: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = gen(fragment, depth, ap, &mut rng);
    debug_assert!(
        crate::fragment::check_fragment(&f, fragment),
        "generator left its fragment: {f} not in {fragment}"
    );
    f
}

fn prop(ap: &[&str], rng: &mut ChaCha8Rng) -> Formula {
    if ap.is_empty() {
        return Formula::True;
    }
    Formula::prop(ap[rng.gen_range(0..ap.len())])
}

fn gen(fragment: Fragment, depth: usize, ap: &[&str], rng: &mut ChaCha8Rng) -> Formula {
    match fragment {
        Fragment::PolCCtlP => gen_polp(depth, ap, rng, true),
        Fragment::PolCCtl => gen_polp(depth, ap, rng, false),
        Fragment::CCtlStarF => gen_starf(depth, ap, rng),
        Fragment::SafeLtl => gen_safe(depth, ap, rng),
        Fragment::CosafeLtl => gen_cosafe(depth, ap, rng),
        Fragment::Ltlf | Fragment::Ltl => gen_ltl(depth, ap, rng, fragment == Fragment::Ltlf),
        Fragment::PurePast => gen_past(depth, ap, rng),
        _ => gen_starf(depth, ap, rng),
    }
}

/// Polarized counting CTL (optionally with past): the grammar productions
/// plus the licensed derived forms, leaf-weighted by depth.
fn gen_polp(depth: usize, ap: &[&str], rng: &mut ChaCha8Rng, past: bool) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..5) {
            0 => Formula::True,
            1 => Formula::False,
            _ => prop(ap, rng),
        };
    }
    let d = depth - 1;
    let mut g = |rng: &mut ChaCha8Rng| gen_polp(d, ap, rng, past);
    let top = if past { 11 } else { 9 };
    match rng.gen_range(0..top) {
        0 => prop(ap, rng),
        1 => Formula::not(g(rng)),
        2 => Formula::or(g(rng), g(rng)),
        3 => Formula::and(g(rng), g(rng)),
        4 => Formula::count(rng.gen_range(1..=3), g(rng)),
        5 => Formula::exists(Formula::next(g(rng))),
        6 => Formula::exists(Formula::until(g(rng), g(rng))),
        7 => Formula::exists(Formula::eventually(g(rng))),
        // derived universal forms
        8 => match rng.gen_range(0..3) {
            0 => Formula::all(Formula::next(g(rng))),
            1 => Formula::all(Formula::release(g(rng), g(rng))),
            _ => Formula::all(Formula::globally(g(rng))),
        },
        9 => Formula::yesterday(g(rng)),
        _ => Formula::since(g(rng), g(rng)),
    }
}

/// Full counting CTL* without past: state and path layers mixed freely.
fn gen_starf(depth: usize, ap: &[&str], rng: &mut ChaCha8Rng) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..5) {
            0 => Formula::True,
            1 => Formula::False,
            _ => prop(ap, rng),
        };
    }
    let d = depth - 1;
    let mut g = |rng: &mut ChaCha8Rng| gen_starf(d, ap, rng);
    match rng.gen_range(0..14) {
        0 => prop(ap, rng),
        1 => Formula::not(g(rng)),
        2 => Formula::or(g(rng), g(rng)),
        3 => Formula::and(g(rng), g(rng)),
        4 => Formula::count(rng.gen_range(1..=3), g(rng)),
        5 => Formula::exists(g(rng)),
        6 => Formula::all(g(rng)),
        7 => Formula::next(g(rng)),
        8 => Formula::weak_next(g(rng)),
        9 => Formula::until(g(rng), g(rng)),
        10 => Formula::release(g(rng), g(rng)),
        11 => Formula::eventually(g(rng)),
        12 => Formula::globally(g(rng)),
        _ => Formula::weak_until(g(rng), g(rng)),
    }
}

fn literal(ap: &[&str], rng: &mut ChaCha8Rng) -> Formula {
    let p = prop(ap, rng);
    if rng.gen_bool(0.4) {
        Formula::not(p)
    } else {
        p
    }
}

fn gen_safe(depth: usize, ap: &[&str], rng: &mut ChaCha8Rng) -> Formula {
    if depth == 0 {
        return literal(ap, rng);
    }
    let d = depth - 1;
    let mut g = |rng: &mut ChaCha8Rng| gen_safe(d, ap, rng);
    match rng.gen_range(0..7) {
        0 => literal(ap, rng),
        1 => Formula::or(g(rng), g(rng)),
        2 => Formula::and(g(rng), g(rng)),
        3 => Formula::next(g(rng)),
        4 => Formula::release(g(rng), g(rng)),
        5 => Formula::globally(g(rng)),
        _ => Formula::weak_until(g(rng), g(rng)),
    }
}

fn gen_cosafe(depth: usize, ap: &[&str], rng: &mut ChaCha8Rng) -> Formula {
    if depth == 0 {
        return literal(ap, rng);
    }
    let d = depth - 1;
    let mut g = |rng: &mut ChaCha8Rng| gen_cosafe(d, ap, rng);
    match rng.gen_range(0..6) {
        0 => literal(ap, rng),
        1 => Formula::or(g(rng), g(rng)),
        2 => Formula::and(g(rng), g(rng)),
        3 => Formula::next(g(rng)),
        4 => Formula::until(g(rng), g(rng)),
        _ => Formula::eventually(g(rng)),
    }
}

fn gen_ltl(depth: usize, ap: &[&str], rng: &mut ChaCha8Rng, weak_next: bool) -> Formula {
    if depth == 0 {
        return literal(ap, rng);
    }
    let d = depth - 1;
    let mut g = |rng: &mut ChaCha8Rng| gen_ltl(d, ap, rng, weak_next);
    let top = if weak_next { 10 } else { 9 };
    match rng.gen_range(0..top) {
        0 => literal(ap, rng),
        1 => Formula::not(g(rng)),
        2 => Formula::or(g(rng), g(rng)),
        3 => Formula::and(g(rng), g(rng)),
        4 => Formula::next(g(rng)),
        5 => Formula::until(g(rng), g(rng)),
        6 => Formula::release(g(rng), g(rng)),
        7 => Formula::eventually(g(rng)),
        8 => Formula::globally(g(rng)),
        _ => Formula::weak_next(g(rng)),
    }
}

fn gen_past(depth: usize, ap: &[&str], rng: &mut ChaCha8Rng) -> Formula {
    if depth == 0 {
        return literal(ap, rng);
    }
    let d = depth - 1;
    let mut g = |rng: &mut ChaCha8Rng| gen_past(d, ap, rng);
    match rng.gen_range(0..6) {
        0 => literal(ap, rng),
        1 => Formula::not(g(rng)),
        2 => Formula::or(g(rng), g(rng)),
        3 => Formula::and(g(rng), g(rng)),
        4 => Formula::yesterday(g(rng)),
        _ => Formula::since(g(rng), g(rng)),
    }
}

/// Random finite word automaton over an alphabet of proposition subsets;
/// each (state, letter) pair gets 0 to 2 successors.
pub fn random_nfa(num_states: usize, ap: &[&str], seed: u64) -> crate::word::FiniteWordAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = crate::word::WordAlphabet::new(ap.iter().map(|s| String::from(*s)).collect());
    let mut a = crate::word::FiniteWordAutomaton::new(alphabet, num_states, 0);
    for q in 0..num_states {
        for l in 0..a.alphabet.num_letters() {
            for _ in 0..rng.gen_range(0..=2usize) {
                let t = rng.gen_range(0..num_states);
                a.delta[q][l].insert(t);
            }
        }
        if rng.gen_bool(0.4) {
            a.accepting.insert(q);
        }
    }
    if a.accepting.is_empty() {
        a.accepting.insert(num_states - 1);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragment::check_fragment;

    #[test]
    fn generators_stay_in_fragment() {
        for seed in 0..200u64 {
            for frag in [
                Fragment::PolCCtlP,
                Fragment::PolCCtl,
                Fragment::CCtlStarF,
                Fragment::SafeLtl,
                Fragment::CosafeLtl,
                Fragment::Ltlf,
                Fragment::PurePast,
            ] {
                let f = random_formula(frag, 3, &["p", "q"], seed);
                assert!(check_fragment(&f, frag), "{f} not in {frag}");
            }
        }
    }

    #[test]
    fn determinism() {
        let a = random_formula(Fragment::CCtlStarF, 4, &["p", "q"], 99);
        let b = random_formula(Fragment::CCtlStarF, 4, &["p", "q"], 99);
        assert_eq!(a, b);
    }
}
