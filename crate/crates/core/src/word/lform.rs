//! Intermediate form for building temporal formulas over abstract letter
//! alphabets, with the embeddings that push a formula one level down: from a
//! delimiter-bounded window into its host word, and from the skeleton of
//! pivot positions into the word containing them.
//!
//! Words at every level are finite or infinite sequences of positions; every
//! position carries a letter except the final position of a finite word,
//! which is letterless. `End` holds exactly at that final position (never on
//! infinite words), `X` is strong, `U` is the standard until. `Local` leaves
//! are opaque payloads resolved when the enclosing construction lowers the
//! formula.

use alloc::boxed::Box;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum LForm {
    True,
    False,
    /// The current position reads this letter (an index of the level's
    /// alphabet).
    Letter(usize),
    /// Opaque payload, substituted during lowering.
    Local(usize),
    /// The current position is the final, letterless one.
    End,
    Or(Box<LForm>, Box<LForm>),
    And(Box<LForm>, Box<LForm>),
    X(Box<LForm>),
    U(Box<LForm>, Box<LForm>),
}

impl LForm {
    pub fn or(a: LForm, b: LForm) -> LForm {
        match (a, b) {
            (LForm::True, _) | (_, LForm::True) => LForm::True,
            (LForm::False, x) | (x, LForm::False) => x,
            (x, y) if x == y => x,
            (x, y) => LForm::Or(Box::new(x), Box::new(y)),
        }
    }

    pub fn and(a: LForm, b: LForm) -> LForm {
        match (a, b) {
            (LForm::False, _) | (_, LForm::False) => LForm::False,
            (LForm::True, x) | (x, LForm::True) => x,
            (x, y) if x == y => x,
            (x, y) => LForm::And(Box::new(x), Box::new(y)),
        }
    }

    pub fn x(a: LForm) -> LForm {
        match a {
            LForm::False => LForm::False,
            a => LForm::X(Box::new(a)),
        }
    }

    pub fn u(a: LForm, b: LForm) -> LForm {
        match b {
            LForm::True => LForm::True,
            LForm::False => LForm::False,
            b => LForm::U(Box::new(a), Box::new(b)),
        }
    }

    pub fn big_or(items: impl IntoIterator<Item = LForm>) -> LForm {
        let mut out = LForm::False;
        for f in items {
            out = LForm::or(out, f);
        }
        out
    }

    pub fn big_and(items: impl IntoIterator<Item = LForm>) -> LForm {
        let mut out = LForm::True;
        for f in items {
            out = LForm::and(out, f);
        }
        out
    }

    pub fn size(&self) -> usize {
        match self {
            LForm::True | LForm::False | LForm::Letter(_) | LForm::Local(_) | LForm::End => 1,
            LForm::X(a) => 1 + a.size(),
            LForm::Or(a, b) | LForm::And(a, b) | LForm::U(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Substitutes `Local(i)` leaves by `payloads[i]`.
    pub fn resolve_locals(&self, payloads: &[LForm]) -> LForm {
        match self {
            LForm::Local(i) => payloads[*i].clone(),
            LForm::True | LForm::False | LForm::Letter(_) | LForm::End => self.clone(),
            LForm::Or(a, b) => {
                LForm::or(a.resolve_locals(payloads), b.resolve_locals(payloads))
            }
            LForm::And(a, b) => {
                LForm::and(a.resolve_locals(payloads), b.resolve_locals(payloads))
            }
            LForm::X(a) => LForm::x(a.resolve_locals(payloads)),
            LForm::U(a, b) => LForm::u(a.resolve_locals(payloads), b.resolve_locals(payloads)),
        }
    }
}

fn letters_or(letters: &[usize]) -> LForm {
    LForm::big_or(letters.iter().map(|&l| LForm::Letter(l)))
}

/// Embeds a formula talking about the window that starts at the current
/// position and runs to the first `delim` position (inclusive, as the
/// window's letterless end) into the host level. `window_letters` are the
/// letters that can occur inside the window (the delimiter excluded).
/// `closed` windows are known to be delimiter-terminated, so `End` becomes
/// the delimiter test; open windows may also end with the host word.
pub fn lower_window(
    f: &LForm,
    window_letters: &[usize],
    delim: usize,
    closed: bool,
    locals: &[LForm],
) -> LForm {
    debug_assert!(!window_letters.contains(&delim));
    match f {
        LForm::True => LForm::True,
        LForm::False => LForm::False,
        LForm::Letter(l) => {
            debug_assert_ne!(*l, delim);
            LForm::Letter(*l)
        }
        LForm::Local(i) => locals[*i].clone(),
        LForm::End => {
            if closed {
                LForm::Letter(delim)
            } else {
                LForm::or(LForm::Letter(delim), LForm::End)
            }
        }
        LForm::Or(a, b) => LForm::or(
            lower_window(a, window_letters, delim, closed, locals),
            lower_window(b, window_letters, delim, closed, locals),
        ),
        LForm::And(a, b) => LForm::and(
            lower_window(a, window_letters, delim, closed, locals),
            lower_window(b, window_letters, delim, closed, locals),
        ),
        // The step is legal when the current position reads an in-window
        // letter; the target is in-window automatically.
        LForm::X(a) => LForm::and(
            letters_or(window_letters),
            LForm::x(lower_window(a, window_letters, delim, closed, locals)),
        ),
        // Intermediates must be in-window letter positions; the discharge may
        // sit anywhere in the window including its letterless end.
        LForm::U(a, b) => LForm::u(
            LForm::and(
                letters_or(window_letters),
                lower_window(a, window_letters, delim, closed, locals),
            ),
            lower_window(b, window_letters, delim, closed, locals),
        ),
    }
}

/// Embeds a formula over the skeleton of `pivot` positions into the host
/// level. Skeleton positions ("anchors") are exactly the host positions
/// reading `pivot`; `gap_letters` are the letters that may occur between
/// anchors. The anchor letter tests are supplied by the caller as host
/// formulas evaluated at an anchor, as are the `Local` payloads.
pub fn lower_skeleton(
    f: &LForm,
    gap_letters: &[usize],
    pivot: usize,
    gamma_tests: &[LForm],
    locals: &[LForm],
) -> LForm {
    debug_assert!(!gap_letters.contains(&pivot));
    let gap = letters_or(gap_letters);
    match f {
        LForm::True => LForm::True,
        LForm::False => LForm::False,
        LForm::Letter(g) => gamma_tests[*g].clone(),
        LForm::Local(i) => locals[*i].clone(),
        // No anchor after this one: from the next host position, non-pivot
        // letters all the way to the host end.
        LForm::End => LForm::x(LForm::u(gap, LForm::End)),
        LForm::Or(a, b) => LForm::or(
            lower_skeleton(a, gap_letters, pivot, gamma_tests, locals),
            lower_skeleton(b, gap_letters, pivot, gamma_tests, locals),
        ),
        LForm::And(a, b) => LForm::and(
            lower_skeleton(a, gap_letters, pivot, gamma_tests, locals),
            lower_skeleton(b, gap_letters, pivot, gamma_tests, locals),
        ),
        // Next anchor: scan over gap positions to the next pivot.
        LForm::X(a) => LForm::x(LForm::u(
            gap,
            LForm::and(
                LForm::Letter(pivot),
                lower_skeleton(a, gap_letters, pivot, gamma_tests, locals),
            ),
        )),
        // Anchors up to the discharge satisfy `a`; gap positions pass.
        LForm::U(a, b) => LForm::u(
            LForm::or(
                gap,
                lower_skeleton(a, gap_letters, pivot, gamma_tests, locals),
            ),
            LForm::and(
                LForm::Letter(pivot),
                lower_skeleton(b, gap_letters, pivot, gamma_tests, locals),
            ),
        ),
    }
}

/// Direct evaluation on an explicit finite word (letters plus a final
/// letterless position), for tests.
#[cfg(test)]
pub fn eval_lform(f: &LForm, letters: &[usize], i: usize) -> bool {
    let last = letters.len();
    match f {
        LForm::True => true,
        LForm::False => false,
        LForm::Letter(l) => i < last && letters[i] == *l,
        LForm::Local(_) => panic!("unresolved local"),
        LForm::End => i == last,
        LForm::Or(a, b) => eval_lform(a, letters, i) || eval_lform(b, letters, i),
        LForm::And(a, b) => eval_lform(a, letters, i) && eval_lform(b, letters, i),
        LForm::X(a) => i < last && eval_lform(a, letters, i + 1),
        LForm::U(a, b) => {
            (i..=last).any(|j| eval_lform(b, letters, j) && (i..j).all(|k| eval_lform(a, letters, k)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn words(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = alloc::vec![alloc::vec![]];
        let mut frontier: Vec<Vec<usize>> = alloc::vec![alloc::vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for a in 0..letters {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn window_embedding_matches_direct_window_evaluation() {
        let sub_forms = [
            LForm::Letter(0),
            LForm::x(LForm::Letter(1)),
            LForm::u(LForm::Letter(0), LForm::Letter(1)),
            LForm::u(LForm::Letter(0), LForm::End),
            LForm::and(LForm::x(LForm::x(LForm::True)), LForm::Letter(0)),
            LForm::End,
        ];
        for f in &sub_forms {
            for closed in [false, true] {
                let lowered = lower_window(f, &[0, 1], 2, closed, &[]);
                for w in words(3, 4) {
                    let cut = w.iter().position(|&a| a == 2).unwrap_or(w.len());
                    if closed && cut == w.len() {
                        continue; // closed windows presume a delimiter
                    }
                    let window: Vec<usize> = w[..cut].to_vec();
                    let direct = eval_lform(f, &window, 0);
                    let host = eval_lform(&lowered, &w, 0);
                    assert_eq!(direct, host, "formula {f:?} word {w:?} closed {closed}");
                }
            }
        }
    }

    #[test]
    fn skeleton_embedding_matches_direct_skeleton_evaluation() {
        // Host letters {0,1,2}, pivot 2. Skeleton letter g in {0,1} holds at
        // an anchor iff the following gap is exactly the single letter g and
        // another pivot closes it.
        let gamma = |g: usize| {
            LForm::and(
                LForm::x(LForm::Letter(g)),
                LForm::x(LForm::x(LForm::Letter(2))),
            )
        };
        let gamma_tests = [gamma(0), gamma(1)];
        let skel_forms = [
            LForm::Letter(0),
            LForm::x(LForm::Letter(1)),
            LForm::u(LForm::Letter(0), LForm::Letter(1)),
            LForm::u(LForm::True, LForm::End),
            LForm::End,
        ];
        for f in &skel_forms {
            let lowered = lower_skeleton(f, &[0, 1], 2, &gamma_tests, &[]);
            for w in words(3, 5) {
                let anchors: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 2).collect();
                if anchors.is_empty() {
                    continue;
                }
                // Only exercise words whose interior gaps have length 1, so
                // the simple gamma interpretation above is faithful.
                let mut skel: Vec<usize> = Vec::new();
                let mut ok = true;
                for k in 0..anchors.len().saturating_sub(1) {
                    let (i, j) = (anchors[k], anchors[k + 1]);
                    if j != i + 2 {
                        ok = false;
                        break;
                    }
                    skel.push(w[i + 1]);
                }
                if !ok {
                    continue;
                }
                let direct = eval_lform(f, &skel, 0);
                let host = eval_lform(&lowered, &w, anchors[0]);
                assert_eq!(direct, host, "formula {f:?} word {w:?} skel {skel:?}");
            }
        }
    }
}
