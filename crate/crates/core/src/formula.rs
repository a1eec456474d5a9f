//! Formula AST shared by every logic in the crate.
//!
//! All logics handled here (polarized counting CTL with past, counting CTL*
//! over finite paths, LTL and its safe/co-safe fragments, pure past formulas)
//! are syntactic fragments of one superset grammar, so a single AST carries
//! them all. Fragment membership is checked separately, see [`crate::fragment`].

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A formula of the common superset syntax.
///
/// `Count(n, φ)` is the graded child quantifier (written `Dn φ`): at least
/// `n` distinct successors start a continuation satisfying `φ`. `WeakNext`
/// is the weak variant of `Next` used by the finite-path semantics, where a
/// path may end. `Yesterday`/`Since` look backwards along the unique history
/// of a tree node.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Prop(Arc<str>),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `D^n φ`, n >= 1.
    Count(u32, Box<Formula>),
    Exists(Box<Formula>),
    All(Box<Formula>),
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
    Yesterday(Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Self {
        Formula::Prop(Arc::from(name))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// `D^n φ`. Panics if `n == 0`; the grammar requires n >= 1.
    pub fn count(n: u32, f: Formula) -> Self {
        assert!(n >= 1, "count operator requires n >= 1");
        Formula::Count(n, Box::new(f))
    }

    pub fn exists(f: Formula) -> Self {
        Formula::Exists(Box::new(f))
    }

    pub fn all(f: Formula) -> Self {
        Formula::All(Box::new(f))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Self {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Formula, b: Formula) -> Self {
        Formula::WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    pub fn yesterday(f: Formula) -> Self {
        Formula::Yesterday(Box::new(f))
    }

    pub fn since(a: Formula, b: Formula) -> Self {
        Formula::Since(Box::new(a), Box::new(b))
    }

    /// Disjunction of a list, `false` when empty.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Option<Formula> = None;
        for f in items {
            out = Some(match out {
                None => f,
                Some(a) => Formula::or(a, f),
            });
        }
        out.unwrap_or(Formula::False)
    }

    /// Conjunction of a list, `true` when empty.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Option<Formula> = None;
        for f in items {
            out = Some(match out {
                None => f,
                Some(a) => Formula::and(a, f),
            });
        }
        out.unwrap_or(Formula::True)
    }

    /// All proposition names occurring in the formula, sorted and deduplicated.
    pub fn props(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_props(&self, out: &mut Vec<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Prop(p) => out.push(p.to_string()),
            Formula::Not(a)
            | Formula::Count(_, a)
            | Formula::Exists(a)
            | Formula::All(a)
            | Formula::Next(a)
            | Formula::WeakNext(a)
            | Formula::Eventually(a)
            | Formula::Globally(a)
            | Formula::Yesterday(a) => a.collect_props(out),
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Since(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 1,
            Formula::Not(a)
            | Formula::Count(_, a)
            | Formula::Exists(a)
            | Formula::All(a)
            | Formula::Next(a)
            | Formula::WeakNext(a)
            | Formula::Eventually(a)
            | Formula::Globally(a)
            | Formula::Yesterday(a) => 1 + a.size(),
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Since(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when the formula contains a past operator (`Y` or `S`).
    pub fn has_past(&self) -> bool {
        match self {
            Formula::Yesterday(_) | Formula::Since(_, _) => true,
            Formula::True | Formula::False | Formula::Prop(_) => false,
            Formula::Not(a)
            | Formula::Count(_, a)
            | Formula::Exists(a)
            | Formula::All(a)
            | Formula::Next(a)
            | Formula::WeakNext(a)
            | Formula::Eventually(a)
            | Formula::Globally(a) => a.has_past(),
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::WeakUntil(a, b) => a.has_past() || b.has_past(),
        }
    }

    /// Boolean simplification: constant folding, double negation, identical
    /// operands. Keeps the formula semantically equivalent under both path
    /// semantics; used to keep machine-generated formulas readable.
    pub fn simplify(self) -> Formula {
        match self {
            Formula::Not(a) => match a.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(inner) => *inner,
                a => Formula::not(a),
            },
            Formula::Or(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::True, _) | (_, Formula::True) => Formula::True,
                (Formula::False, x) | (x, Formula::False) => x,
                (x, y) if x == y => x,
                (x, y) => Formula::or(x, y),
            },
            Formula::And(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::False, _) | (_, Formula::False) => Formula::False,
                (Formula::True, x) | (x, Formula::True) => x,
                (x, y) if x == y => x,
                (x, y) => Formula::and(x, y),
            },
            Formula::Count(n, a) => match a.simplify() {
                Formula::False => Formula::False,
                a => Formula::Count(n, Box::new(a)),
            },
            Formula::Exists(a) => match a.simplify() {
                Formula::True => Formula::True,
                Formula::False => Formula::False,
                a => Formula::exists(a),
            },
            Formula::All(a) => match a.simplify() {
                Formula::True => Formula::True,
                Formula::False => Formula::False,
                a => Formula::all(a),
            },
            Formula::Next(a) => Formula::next(a.simplify()),
            Formula::WeakNext(a) => match a.simplify() {
                Formula::True => Formula::True,
                a => Formula::weak_next(a),
            },
            Formula::Until(a, b) => match (a.simplify(), b.simplify()) {
                (_, Formula::True) => Formula::True,
                (_, Formula::False) => Formula::False,
                (Formula::False, b) => b,
                (a, b) => Formula::until(a, b),
            },
            Formula::Release(a, b) => match (a.simplify(), b.simplify()) {
                (_, Formula::True) => Formula::True,
                (_, Formula::False) => Formula::False,
                (a, b) => Formula::release(a, b),
            },
            Formula::WeakUntil(a, b) => match (a.simplify(), b.simplify()) {
                (_, Formula::True) => Formula::True,
                (Formula::True, _) => Formula::True,
                (a, b) => Formula::weak_until(a, b),
            },
            Formula::Eventually(a) => match a.simplify() {
                Formula::True => Formula::True,
                Formula::False => Formula::False,
                a => Formula::eventually(a),
            },
            Formula::Globally(a) => match a.simplify() {
                Formula::True => Formula::True,
                a => Formula::globally(a),
            },
            Formula::Yesterday(a) => match a.simplify() {
                Formula::False => Formula::False,
                a => Formula::yesterday(a),
            },
            Formula::Since(a, b) => match (a.simplify(), b.simplify()) {
                (_, Formula::False) => Formula::False,
                (a, b) => Formula::since(a, b),
            },
            leaf => leaf,
        }
    }
}

/// A proposition name is valid when it matches `[A-Za-z0-9_]+` and is not a
/// reserved keyword of the concrete syntax (`true`, `false`, the operator
/// letters, or a `D<digits>` count token).
pub fn is_valid_prop_name(name: &str) -> bool {
    if name.is_empty() || !name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        return false;
    }
    if matches!(
        name,
        "true" | "false" | "E" | "A" | "X" | "wX" | "Y" | "F" | "G" | "U" | "R" | "W" | "S" | "D"
    ) {
        return false;
    }
    // D3, D12, ... are count tokens.
    if let Some(rest) = name.strip_prefix('D') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
    }
    true
}

/// Canonical printing. Binary operators are always parenthesized, unary
/// operators are prefix keywords; this is exactly the grammar accepted by the
/// companion crate's parser, so `parse(print(f)) == f`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Prop(p) => write!(f, "{p}"),
            Formula::Not(a) => write!(f, "!{a}"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Count(n, a) => write!(f, "D{n} {a}"),
            Formula::Exists(a) => write!(f, "E {a}"),
            Formula::All(a) => write!(f, "A {a}"),
            Formula::Next(a) => write!(f, "X {a}"),
            Formula::WeakNext(a) => write!(f, "wX {a}"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::Release(a, b) => write!(f, "({a} R {b})"),
            Formula::WeakUntil(a, b) => write!(f, "({a} W {b})"),
            Formula::Eventually(a) => write!(f, "F {a}"),
            Formula::Globally(a) => write!(f, "G {a}"),
            Formula::Yesterday(a) => write!(f, "Y {a}"),
            Formula::Since(a, b) => write!(f, "({a} S {b})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_canonical_forms() {
        let f = Formula::exists(Formula::until(Formula::prop("p"), Formula::prop("q")));
        assert_eq!(f.to_string(), "E (p U q)");
        let g = Formula::count(3, Formula::prop("p"));
        assert_eq!(g.to_string(), "D3 p");
        let h = Formula::not(Formula::weak_next(Formula::False));
        assert_eq!(h.to_string(), "!wX false");
    }

    #[test]
    fn prop_name_validity() {
        assert!(is_valid_prop_name("p"));
        assert!(is_valid_prop_name("req_1"));
        assert!(!is_valid_prop_name("D3"));
        assert!(!is_valid_prop_name("wX"));
        assert!(!is_valid_prop_name("true"));
        assert!(!is_valid_prop_name(""));
        assert!(!is_valid_prop_name("a-b"));
    }

    #[test]
    fn simplify_folds_constants() {
        let f = Formula::or(Formula::and(Formula::True, Formula::prop("p")), Formula::False);
        assert_eq!(f.simplify(), Formula::prop("p"));
        let g = Formula::exists(Formula::until(Formula::prop("p"), Formula::False));
        assert_eq!(g.simplify(), Formula::False);
    }
}
