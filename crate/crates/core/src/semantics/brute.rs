//! Depth- and length-bounded literal evaluation of the two semantics,
//! three-valued so that a bound never turns into a wrong answer. These are
//! the independent oracles the exact checkers are tested against: whenever
//! an oracle decides, the exact checker must agree.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::fragment::{kernelize_polcctlp, NotInFragment};
use crate::semantics::{BoundedVerdict, Tri};
use crate::tree::{RegularTree, TruncatedTree};

/// Literal infinite-path semantics on the depth-`depth` truncation of the
/// unfolding. Existential witnesses must be fully decided inside the
/// truncation; unresolved obligations at cut leaves propagate as unknowns.
pub fn brute_force_polcctlp(
    t: &RegularTree,
    f: &Formula,
    depth: usize,
) -> Result<BoundedVerdict, NotInFragment> {
    let kernel = kernelize_polcctlp(f, true)?;
    let trunc = t.unfold(depth);
    let mut ev = PolEval { t, trunc: &trunc, memo: BTreeMap::new() };
    Ok(ev.eval(0, &kernel).to_bounded(depth))
}

struct PolEval<'a> {
    t: &'a RegularTree,
    trunc: &'a TruncatedTree,
    memo: BTreeMap<(usize, Formula), Tri>,
}

impl<'a> PolEval<'a> {
    fn eval(&mut self, node: usize, f: &Formula) -> Tri {
        let key = (node, f.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let n = &self.trunc.nodes[node];
        let r = match f {
            Formula::True => Tri::T,
            Formula::False => Tri::F,
            Formula::Prop(p) => Tri::from_bool(
                self.t
                    .sig
                    .index_of(p)
                    .is_some_and(|b| self.t.label(n.graph_node) & (1 << b) != 0),
            ),
            Formula::Not(a) => self.eval(node, a).not(),
            Formula::Or(a, b) => self.eval(node, a).or(self.eval(node, b)),
            Formula::And(a, b) => self.eval(node, a).and(self.eval(node, b)),
            Formula::Count(k, a) => {
                if n.cut {
                    Tri::U
                } else {
                    let mut yes = 0usize;
                    let mut maybe = 0usize;
                    for &(_, c) in &n.children {
                        match self.eval(c, a) {
                            Tri::T => yes += 1,
                            Tri::U => maybe += 1,
                            Tri::F => {}
                        }
                    }
                    if yes >= *k as usize {
                        Tri::T
                    } else if yes + maybe < *k as usize {
                        Tri::F
                    } else {
                        Tri::U
                    }
                }
            }
            Formula::Exists(body) => match &**body {
                Formula::Next(a) => {
                    if n.cut {
                        Tri::U
                    } else {
                        let mut acc = Tri::F;
                        for &(_, c) in &n.children {
                            acc = acc.or(self.eval(c, a));
                        }
                        acc
                    }
                }
                Formula::Until(a, b) => self.eval_eu(node, a, b),
                other => self.eval(node, other),
            },
            Formula::Yesterday(a) => match n.parent {
                None => Tri::F,
                Some((p, _)) => self.eval(p, a),
            },
            Formula::Since(a, b) => {
                // walk the unique history
                let now_b = self.eval(node, b);
                if now_b == Tri::T {
                    Tri::T
                } else {
                    let now_a = self.eval(node, a);
                    let back = match n.parent {
                        None => Tri::F,
                        Some((p, _)) => self.eval(p, f),
                    };
                    now_b.or(now_a.and(back))
                }
            }
            other => unreachable!("kernel shape: {other}"),
        };
        self.memo.insert(key, r);
        r
    }

    /// E(a U b): a b-node reachable through a-nodes, three-valued on the
    /// truncation (obligations open at cut leaves yield unknown).
    fn eval_eu(&mut self, node: usize, a: &Formula, b: &Formula) -> Tri {
        let key = (node, Formula::exists(Formula::until(a.clone(), b.clone())));
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let vb = self.eval(node, b);
        let r = if vb == Tri::T {
            Tri::T
        } else {
            let va = self.eval(node, a);
            let n = &self.trunc.nodes[node];
            let cont = if n.cut {
                Tri::U
            } else {
                let mut acc = Tri::F;
                let children = n.children.clone();
                for (_, c) in children {
                    acc = acc.or(self.eval_eu(c, a, b));
                }
                acc
            };
            vb.or(va.and(cont))
        };
        self.memo.insert(key, r);
        r
    }
}

/// Literal finite-path semantics with path quantifiers enumerated over all
/// finite paths of length <= `max_len` (number of nodes). An existential
/// that fails within the bound stays unknown; universal verdicts are dual.
pub fn brute_force_ctlsf(
    t: &RegularTree,
    f: &Formula,
    max_len: usize,
) -> Result<BoundedVerdict, NotInFragment> {
    if f.has_past() {
        return Err(NotInFragment {
            fragment: crate::fragment::Fragment::CCtlStarF,
            detail: alloc::format!("past operator in {f}"),
        });
    }
    let mut ev = FinEval { t, max_len: max_len.max(1) };
    // Model relation: every finite nonempty path satisfies f at position 0.
    // Formula truth at (path, 0) for state formulas ignores the path, so a
    // single evaluation on the trivial path decides those exactly.
    let path = vec![t.root];
    let r = if super::ctlsf::is_state(f) {
        ev.eval(&path, 0, f)
    } else {
        // universal closure over enumerated paths
        let mut acc = Tri::T;
        let paths = ev.paths_from(t.root);
        for p in paths {
            acc = acc.and(ev.eval(&p, 0, f));
            if acc == Tri::F {
                break;
            }
        }
        // all enumerated paths pass; longer ones might not
        if acc == Tri::T {
            Tri::U
        } else {
            acc
        }
    };
    Ok(r.to_bounded(max_len))
}

struct FinEval<'a> {
    t: &'a RegularTree,
    max_len: usize,
}

impl<'a> FinEval<'a> {
    /// All paths (node sequences) of length 1..=max_len from `v`.
    fn paths_from(&self, v: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![v]];
        let mut frontier = vec![vec![v]];
        for _ in 1..self.max_len {
            let mut next = Vec::new();
            for p in &frontier {
                let last = *p.last().unwrap();
                for &e in self.t.out_edges(last) {
                    let mut p2 = p.clone();
                    p2.push(self.t.edges[e].dst);
                    next.push(p2);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Extensions of the prefix `path[..=i]` by paths of length <= max_len
    /// from `path[i]` (the prefix itself included).
    fn coinciding(&self, path: &[usize], i: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for suffix in self.paths_from(path[i]) {
            let mut p = path[..i].to_vec();
            p.extend(suffix);
            out.push(p);
        }
        out
    }

    fn eval(&mut self, path: &[usize], i: usize, f: &Formula) -> Tri {
        match f {
            Formula::True => Tri::T,
            Formula::False => Tri::F,
            Formula::Prop(p) => Tri::from_bool(
                self.t
                    .sig
                    .index_of(p)
                    .is_some_and(|b| self.t.label(path[i]) & (1 << b) != 0),
            ),
            Formula::Not(a) => self.eval(path, i, a).not(),
            Formula::Or(a, b) => self.eval(path, i, a).or(self.eval(path, i, b)),
            Formula::And(a, b) => self.eval(path, i, a).and(self.eval(path, i, b)),
            // the path must continue and n distinct continuations (edges)
            // must satisfy a at the next position
            Formula::Count(k, a) => {
                if i + 1 >= path.len() {
                    Tri::F
                } else {
                    let mut yes = 0usize;
                    let mut maybe = 0usize;
                    for &e in self.t.out_edges(path[i]) {
                        let dst = self.t.edges[e].dst;
                        // some continuation through this edge satisfies a at
                        // position i+1
                        let mut best = Tri::F;
                        for suffix in self.paths_from(dst) {
                            let mut p2 = path[..=i].to_vec();
                            p2.extend(suffix);
                            best = best.or(self.eval(&p2, i + 1, a));
                            if best == Tri::T {
                                break;
                            }
                        }
                        // a longer continuation might still satisfy a
                        let best = if best == Tri::F { Tri::U } else { best };
                        match best {
                            Tri::T => yes += 1,
                            Tri::U => maybe += 1,
                            Tri::F => {}
                        }
                    }
                    if yes >= *k as usize {
                        Tri::T
                    } else if yes + maybe < *k as usize {
                        Tri::F
                    } else {
                        Tri::U
                    }
                }
            }
            Formula::Exists(body) => {
                let mut acc = Tri::F;
                for p2 in self.coinciding(path, i) {
                    acc = acc.or(self.eval(&p2, i, body));
                    if acc == Tri::T {
                        return Tri::T;
                    }
                }
                // a longer witness might exist
                if acc == Tri::F {
                    Tri::U
                } else {
                    acc
                }
            }
            Formula::All(body) => {
                let neg = Formula::not((**body).clone());
                self.eval(path, i, &Formula::exists(neg)).not()
            }
            Formula::Next(a) => {
                if i + 1 < path.len() {
                    self.eval(path, i + 1, a)
                } else {
                    Tri::F
                }
            }
            Formula::WeakNext(a) => {
                if i + 1 < path.len() {
                    self.eval(path, i + 1, a)
                } else {
                    Tri::T
                }
            }
            Formula::Until(a, b) => {
                let mut acc = Tri::F;
                for j in i..path.len() {
                    let mut here = self.eval(path, j, b);
                    for k in i..j {
                        here = here.and(self.eval(path, k, a));
                    }
                    acc = acc.or(here);
                    if acc == Tri::T {
                        break;
                    }
                }
                acc
            }
            Formula::Release(a, b) => {
                let dual = Formula::until(
                    Formula::not((**a).clone()),
                    Formula::not((**b).clone()),
                );
                self.eval(path, i, &dual).not()
            }
            Formula::WeakUntil(a, b) => {
                let g = Formula::globally((**a).clone());
                let u = Formula::until((**a).clone(), (**b).clone());
                self.eval(path, i, &g).or(self.eval(path, i, &u))
            }
            Formula::Eventually(a) => {
                let mut acc = Tri::F;
                for j in i..path.len() {
                    acc = acc.or(self.eval(path, j, a));
                }
                acc
            }
            Formula::Globally(a) => {
                let mut acc = Tri::T;
                for j in i..path.len() {
                    acc = acc.and(self.eval(path, j, a));
                }
                acc
            }
            Formula::Yesterday(_) | Formula::Since(_, _) => unreachable!("past rejected"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use alloc::collections::{BTreeMap as Map, BTreeSet};
    use alloc::string::{String, ToString};

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

    #[test]
    fn safety_never_certified_on_prefixes() {
        let t = tree(&["p"], &[("v0", &["p"])], "v0", &[("e0", "v0", "v0")]);
        let f = F::all(F::globally(F::prop("p")));
        assert_eq!(brute_force_polcctlp(&t, &f, 4).unwrap(), BoundedVerdict::Unknown(4));
    }

    #[test]
    fn cosafety_certified_by_prefix() {
        let t = tree(
            &["p", "q"],
            &[("v0", &["p"]), ("v1", &["q"])],
            "v0",
            &[("e0", "v0", "v1"), ("e1", "v1", "v1")],
        );
        let f = F::exists(F::eventually(F::prop("q")));
        assert_eq!(brute_force_polcctlp(&t, &f, 2).unwrap(), BoundedVerdict::Holds);
        // but a missing witness is never a refutation
        let t2 = tree(&["q"], &[("v0", &[])], "v0", &[("e0", "v0", "v0")]);
        assert_eq!(
            brute_force_polcctlp(&t2, &f, 4).unwrap(),
            BoundedVerdict::Unknown(4)
        );
    }

    #[test]
    fn finite_weak_next_decided_at_length_one() {
        let t = tree(&["p"], &[("v0", &[])], "v0", &[("e0", "v0", "v0")]);
        let f = F::exists(F::weak_next(F::prop("p")));
        assert_eq!(brute_force_ctlsf(&t, &f, 1).unwrap(), BoundedVerdict::Holds);
        let g = F::exists(F::eventually(F::prop("p")));
        assert_eq!(brute_force_ctlsf(&t, &g, 5).unwrap(), BoundedVerdict::Unknown(5));
        // A X p is refuted by the length-one path
        let h = F::all(F::next(F::prop("p")));
        assert_eq!(brute_force_ctlsf(&t, &h, 3).unwrap(), BoundedVerdict::Fails);
    }
}
