//! Exact model checker for counting CTL* over finite paths.
//!
//! The checker labels graph nodes with state subformulas bottom-up. A path
//! quantifier compiles its body, with maximal state subformulas and graded
//! counts abstracted into marker bits, through the finite-trace tableau; the
//! quantified check is then a reachability search in the product of the
//! graph with the tableau, sound because every finite path of the graph can
//! be cut anywhere and every finite path extends (the edge relation is
//! total). Graded counts are path-sensitive (they require the path to
//! continue), so `Dn f` becomes "marker and X true" with the marker reading
//! "at least n successor edges start a finite path satisfying f".

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::fragment::{Fragment, NotInFragment};
use crate::semantics::Verdict;
use crate::tree::RegularTree;
use crate::word::ltlf::LtlfTableau;

/// Decides whether `t` is a model of `f` under finite-path semantics: every
/// finite nonempty path from the root satisfies `f` at position 0.
pub fn mc_ctlsf(t: &RegularTree, f: &Formula) -> Result<Verdict, NotInFragment> {
    if f.has_past() {
        return Err(NotInFragment {
            fragment: Fragment::CCtlStarF,
            detail: format!("past operator in {f}"),
        });
    }
    let mut mc = Checker { t, state_memo: BTreeMap::new(), exists_memo: BTreeMap::new() };
    let top = if is_state(f) { f.clone() } else { Formula::all(f.clone()) };
    Ok(Verdict::of(mc.eval_state(t.root, &top)))
}

/// Truth of `f` at a node (for state formulas) under finite-path semantics;
/// used by the translation validators.
pub fn holds_at(t: &RegularTree, node: usize, f: &Formula) -> Result<bool, NotInFragment> {
    if f.has_past() {
        return Err(NotInFragment {
            fragment: Fragment::CCtlStarF,
            detail: format!("past operator in {f}"),
        });
    }
    let mut mc = Checker { t, state_memo: BTreeMap::new(), exists_memo: BTreeMap::new() };
    let top = if is_state(f) { f.clone() } else { Formula::all(f.clone()) };
    Ok(mc.eval_state(node, &top))
}

/// State formulas are path-independent: truth at `(path, i)` depends only on
/// the node at position `i`.
pub fn is_state(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => true,
        Formula::Not(a) => is_state(a),
        Formula::Or(a, b) | Formula::And(a, b) => is_state(a) && is_state(b),
        Formula::Exists(_) | Formula::All(_) => true,
        _ => false,
    }
}

struct Checker<'a> {
    t: &'a RegularTree,
    state_memo: BTreeMap<(usize, Formula), bool>,
    exists_memo: BTreeMap<(usize, Formula), bool>,
}

/// Marker kinds: a state subformula read at the current node, or a graded
/// edge count whose witnesses are finite paths from successor edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Marker {
    State(Formula),
    CountChildren(u32, Formula),
}

impl<'a> Checker<'a> {
    fn eval_state(&mut self, node: usize, f: &Formula) -> bool {
        if let Some(&b) = self.state_memo.get(&(node, f.clone())) {
            return b;
        }
        let r = match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Prop(p) => self
                .t
                .sig
                .index_of(p)
                .is_some_and(|b| self.t.label(node) & (1 << b) != 0),
            Formula::Not(a) => !self.eval_state(node, a),
            Formula::Or(a, b) => self.eval_state(node, a) || self.eval_state(node, b),
            Formula::And(a, b) => self.eval_state(node, a) && self.eval_state(node, b),
            Formula::Exists(body) => self.eval_exists(node, body),
            // A psi = !E !psi under the finite-path duality.
            Formula::All(body) => !self.eval_exists(node, &Formula::not((**body).clone())),
            other => panic!("not a state formula: {other}"),
        };
        self.state_memo.insert((node, f.clone()), r);
        r
    }

    /// Exists a finite nonempty path from `node` satisfying the path body.
    fn eval_exists(&mut self, node: usize, body: &Formula) -> bool {
        let key = (node, body.clone());
        if let Some(&b) = self.exists_memo.get(&key) {
            return b;
        }
        // Abstract the body into a linear formula over markers.
        let mut markers: Vec<Marker> = Vec::new();
        let linear = abstract_body(body, &mut markers);
        let props: Vec<String> = (0..markers.len()).map(|i| format!("m{i}")).collect();
        let mut tableau = match LtlfTableau::new(&linear, &props) {
            Ok(t) => t,
            Err(e) => panic!("body abstraction produced a non-linear formula: {e}"),
        };

        // Marker valuations per graph node, computed on demand.
        let mut valuation: BTreeMap<usize, u64> = BTreeMap::new();
        let mut val_of = |mc: &mut Checker<'a>, v: usize| -> u64 {
            if let Some(&m) = valuation.get(&v) {
                return m;
            }
            let mut mask = 0u64;
            for (i, m) in markers.iter().enumerate() {
                let holds = match m {
                    Marker::State(sf) => mc.eval_state(v, sf),
                    Marker::CountChildren(k, pf) => {
                        let mut count = 0usize;
                        for &e in mc.t.out_edges(v) {
                            let dst = mc.t.edges[e].dst;
                            if mc.eval_exists(dst, pf) {
                                count += 1;
                            }
                        }
                        count >= *k as usize
                    }
                };
                if holds {
                    mask |= 1 << i;
                }
            }
            valuation.insert(v, mask);
            mask
        };

        // Reachability in the product (graph node, tableau state): a word may
        // end at any position, so acceptance is checked letter by letter.
        let mut visited: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        let mut stack = alloc::vec![(node, tableau.initial)];
        let mut found = false;
        while let Some((v, s)) = stack.pop() {
            if visited.insert((v, s), ()).is_some() {
                continue;
            }
            let letter = val_of(self, v);
            if tableau.end_accept(s, letter) {
                found = true;
                break;
            }
            for s2 in tableau.successors(s, letter) {
                for &e in self.t.out_edges(v) {
                    let w = self.t.edges[e].dst;
                    if !visited.contains_key(&(w, s2)) {
                        stack.push((w, s2));
                    }
                }
            }
        }
        self.exists_memo.insert(key, found);
        found
    }
}

/// Replaces maximal state subformulas and graded counts by marker
/// propositions, leaving a pure future formula over markers.
fn abstract_body(f: &Formula, markers: &mut Vec<Marker>) -> Formula {
    fn marker_prop(markers: &mut Vec<Marker>, m: Marker) -> Formula {
        let i = match markers.iter().position(|x| x == &m) {
            Some(i) => i,
            None => {
                markers.push(m);
                markers.len() - 1
            }
        };
        Formula::prop(&format!("m{i}").to_string())
    }
    if is_state(f) {
        return marker_prop(markers, Marker::State(f.clone()));
    }
    match f {
        // Dn f = (>= n successor edges with a witness) & X true: graded
        // counts require the path to continue.
        Formula::Count(k, a) => {
            let m = marker_prop(markers, Marker::CountChildren(*k, (**a).clone()));
            Formula::and(m, Formula::next(Formula::True))
        }
        Formula::Not(a) => Formula::not(abstract_body(a, markers)),
        Formula::Or(a, b) => Formula::or(abstract_body(a, markers), abstract_body(b, markers)),
        Formula::And(a, b) => Formula::and(abstract_body(a, markers), abstract_body(b, markers)),
        Formula::Next(a) => Formula::next(abstract_body(a, markers)),
        Formula::WeakNext(a) => Formula::weak_next(abstract_body(a, markers)),
        Formula::Until(a, b) => Formula::until(abstract_body(a, markers), abstract_body(b, markers)),
        Formula::Release(a, b) => {
            Formula::release(abstract_body(a, markers), abstract_body(b, markers))
        }
        Formula::WeakUntil(a, b) => {
            Formula::weak_until(abstract_body(a, markers), abstract_body(b, markers))
        }
        Formula::Eventually(a) => Formula::eventually(abstract_body(a, markers)),
        Formula::Globally(a) => Formula::globally(abstract_body(a, markers)),
        Formula::Exists(_) | Formula::All(_) | Formula::Prop(_) | Formula::True | Formula::False => {
            unreachable!("state formulas handled above")
        }
        Formula::Yesterday(_) | Formula::Since(_, _) => unreachable!("past rejected by caller"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use alloc::collections::{BTreeMap as Map, BTreeSet};

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

    fn self_loop(label: &[&str]) -> RegularTree {
        tree(&["p", "q"], &[("v0", label)], "v0", &[("e0", "v0", "v0")])
    }

    #[test]
    fn weak_next_vs_strong_next_at_length_one() {
        let t = self_loop(&["p"]);
        // A wX p holds: the length-one path ends immediately.
        assert!(mc_ctlsf(&t, &F::all(F::weak_next(F::prop("p")))).unwrap().holds);
        // A X p fails: the length-one path has no next position.
        assert!(!mc_ctlsf(&t, &F::all(F::next(F::prop("p")))).unwrap().holds);
        // E wX f is valid for any f.
        assert!(mc_ctlsf(&t, &F::exists(F::weak_next(F::prop("q")))).unwrap().holds);
    }

    #[test]
    fn until_under_quantifiers() {
        let t = tree(
            &["p", "q"],
            &[("v0", &["p"]), ("v1", &["q"])],
            "v0",
            &[("e0", "v0", "v1"), ("e1", "v1", "v1")],
        );
        let f = F::exists(F::until(F::prop("p"), F::prop("q")));
        assert!(mc_ctlsf(&t, &f).unwrap().holds);
        // the length-one path at the root satisfies neither completion
        let g = F::all(F::until(F::prop("p"), F::prop("q")));
        assert!(!mc_ctlsf(&t, &g).unwrap().holds);
    }

    #[test]
    fn graded_count_is_strong() {
        let t = tree(
            &["p"],
            &[("v0", &[]), ("a", &["p"]), ("b", &["p"])],
            "v0",
            &[
                ("e1", "v0", "a"),
                ("e2", "v0", "b"),
                ("e3", "a", "a"),
                ("e4", "b", "b"),
            ],
        );
        // As a model property, D2 p fails: the length-one path ends at the
        // root, and the count demands a continuing path.
        assert!(!mc_ctlsf(&t, &F::count(2, F::prop("p"))).unwrap().holds);
        // Existentially quantified it is a pure node property.
        assert!(mc_ctlsf(&t, &F::exists(F::count(2, F::prop("p")))).unwrap().holds);
        assert!(!mc_ctlsf(&t, &F::exists(F::count(3, F::prop("p")))).unwrap().holds);
    }

    #[test]
    fn nested_path_formula() {
        // E((p | (q U r)) U s) on a chain q,r? ... use a 3-node witness:
        // v0{q} -> v1{r}?? keep simple: v0{q} -> v1{q} -> v2{s}, all loop.
        let t = tree(
            &["q", "s"],
            &[("v0", &["q"]), ("v1", &["q"]), ("v2", &["s"])],
            "v0",
            &[("e0", "v0", "v1"), ("e1", "v1", "v2"), ("e2", "v2", "v2")],
        );
        let f = F::exists(F::until(
            F::or(F::prop("p"), F::until(F::prop("q"), F::prop("r"))),
            F::prop("s"),
        ));
        // q U r never discharges (no r), p absent: only the immediate s
        // could witness; the root is not s, so the until needs the left side
        // at position 0, which fails.
        assert!(!mc_ctlsf(&t, &f).unwrap().holds);
        let g = F::exists(F::until(
            F::or(F::prop("q"), F::until(F::prop("q"), F::prop("s"))),
            F::prop("s"),
        ));
        assert!(mc_ctlsf(&t, &g).unwrap().holds);
    }
}
