//! Exact infinite-path model checker for the polarized counting fragment
//! with past operators.
//!
//! Every formula of the fragment is a node property of the unfolding: the
//! future connectives reduce to fixpoints over the finite graph (totality of
//! the edge relation makes every finite witness extend to an infinite path),
//! and each past subformula is compiled into one deterministic history bit,
//! doubling the graph per past operator but presenting the same unfolding.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::fragment::{kernelize_polcctlp, NotInFragment};
use crate::semantics::Verdict;
use crate::tree::RegularTree;

/// History-expanded graph: nodes are (graph node, history bits), one bit per
/// past subformula, reachable part only.
struct Expanded {
    /// (original node, bits) per expanded node.
    nodes: Vec<(usize, u64)>,
    /// Outgoing (original edge index, target expanded node).
    out: Vec<Vec<(usize, usize)>>,
    root: usize,
}

impl Expanded {
    fn base(t: &RegularTree) -> Expanded {
        Expanded {
            nodes: (0..t.num_nodes()).map(|v| (v, 0)).collect(),
            out: (0..t.num_nodes())
                .map(|v| t.out_edges(v).iter().map(|&e| (e, t.edges[e].dst)).collect())
                .collect(),
            root: t.root,
        }
    }
}

/// Decides whether the unfolding of `t` is a model of `f` (infinite-path
/// semantics, evaluated at the root). The formula must belong to the
/// polarized past fragment up to abbreviations; the weak next is accepted
/// and read as the strong one, which is sound on infinite paths.
pub fn mc_polcctlp(t: &RegularTree, f: &Formula) -> Result<Verdict, NotInFragment> {
    let kernel = kernelize_polcctlp(f, true)?;
    Ok(Verdict::of(holds_at_root(t, &kernel)))
}

pub(crate) fn holds_at_root(t: &RegularTree, kernel: &Formula) -> bool {
    // Collect past subformulas, smallest first, so each bit's defining
    // subformulas only involve earlier bits.
    let mut past: Vec<Formula> = Vec::new();
    collect_past(kernel, &mut past);
    past.sort_by_key(|f| f.size());
    past.dedup();

    let mut g = Expanded::base(t);
    let mut bit_of: BTreeMap<Formula, usize> = BTreeMap::new();
    for (k, p) in past.iter().enumerate() {
        g = expand_with(t, &g, p, &bit_of, k);
        bit_of.insert(p.clone(), k);
    }

    let memo = &mut BTreeMap::new();
    let sat = eval(t, &g, kernel, &bit_of, memo);
    sat[g.root]
}

fn collect_past(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Yesterday(a) => {
            collect_past(a, out);
            out.push(f.clone());
        }
        Formula::Since(a, b) => {
            collect_past(a, out);
            collect_past(b, out);
            out.push(f.clone());
        }
        Formula::True | Formula::False | Formula::Prop(_) => {}
        Formula::Not(a) | Formula::Count(_, a) | Formula::Exists(a) | Formula::Next(a) => {
            collect_past(a, out)
        }
        Formula::Or(a, b) | Formula::And(a, b) | Formula::Until(a, b) => {
            collect_past(a, out);
            collect_past(b, out);
        }
        _ => unreachable!("kernel shape"),
    }
}

/// Adds one history bit for past subformula `p` (bit index `k`): the bit at
/// a node is the truth of `p` there, determined from the parent's bit and
/// the operand values, which only involve earlier bits.
fn expand_with(
    t: &RegularTree,
    g: &Expanded,
    p: &Formula,
    bit_of: &BTreeMap<Formula, usize>,
    k: usize,
) -> Expanded {
    let memo = &mut BTreeMap::new();
    let (a_sat, b_sat): (Vec<bool>, Vec<bool>) = match p {
        // bit(child) = operand(parent); bit(root) = false
        Formula::Yesterday(a) => (eval(t, g, a, bit_of, memo), Vec::new()),
        // bit(v) = b(v) | (a(v) & bit(parent)); bit(root) = b(root)
        Formula::Since(a, b) => {
            let sa = eval(t, g, a, bit_of, memo);
            let sb = eval(t, g, b, bit_of, memo);
            (sa, sb)
        }
        _ => unreachable!(),
    };
    let root_bit = match p {
        Formula::Yesterday(_) => false,
        Formula::Since(_, _) => b_sat[g.root],
        _ => unreachable!(),
    };

    let mut nodes: Vec<(usize, u64)> = Vec::new();
    let mut origin: Vec<(usize, bool)> = Vec::new();
    let mut index: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut out: Vec<Vec<(usize, usize)>> = Vec::new();

    fn intern(
        old: usize,
        bit: bool,
        k: usize,
        g: &Expanded,
        nodes: &mut Vec<(usize, u64)>,
        origin: &mut Vec<(usize, bool)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        index: &mut BTreeMap<(usize, bool), usize>,
    ) -> usize {
        *index.entry((old, bit)).or_insert_with(|| {
            let id = nodes.len();
            let (orig, bits) = g.nodes[old];
            nodes.push((orig, bits | ((bit as u64) << k)));
            origin.push((old, bit));
            out.push(Vec::new());
            id
        })
    }

    intern(g.root, root_bit, k, g, &mut nodes, &mut origin, &mut out, &mut index);
    let mut head = 0;
    while head < nodes.len() {
        let (old, bit) = origin[head];
        for &(edge, old_dst) in &g.out[old] {
            let child_bit = match p {
                Formula::Yesterday(_) => a_sat[old],
                Formula::Since(_, _) => b_sat[old_dst] || (a_sat[old_dst] && bit),
                _ => unreachable!(),
            };
            let dst = intern(
                old_dst, child_bit, k, g, &mut nodes, &mut origin, &mut out, &mut index,
            );
            out[head].push((edge, dst));
        }
        head += 1;
    }
    Expanded { nodes, out, root: 0 }
}

/// Bottom-up evaluation of a kernel formula over the expanded graph,
/// memoized per subformula.
fn eval(
    t: &RegularTree,
    g: &Expanded,
    f: &Formula,
    bit_of: &BTreeMap<Formula, usize>,
    memo: &mut BTreeMap<Formula, Vec<bool>>,
) -> Vec<bool> {
    if let Some(v) = memo.get(f) {
        return v.clone();
    }
    let n = g.nodes.len();
    let result: Vec<bool> = match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Prop(p) => {
            let bit = t.sig.index_of(p);
            g.nodes
                .iter()
                .map(|&(v, _)| bit.is_some_and(|b| t.label(v) & (1 << b) != 0))
                .collect()
        }
        Formula::Not(a) => eval(t, g, a, bit_of, memo).iter().map(|b| !b).collect(),
        Formula::Or(a, b) => {
            let sa = eval(t, g, a, bit_of, memo);
            let sb = eval(t, g, b, bit_of, memo);
            sa.iter().zip(&sb).map(|(x, y)| *x || *y).collect()
        }
        Formula::And(a, b) => {
            let sa = eval(t, g, a, bit_of, memo);
            let sb = eval(t, g, b, bit_of, memo);
            sa.iter().zip(&sb).map(|(x, y)| *x && *y).collect()
        }
        // Graded child count over the edge multiset: parallel edges are
        // distinct unfolding children and count separately.
        Formula::Count(k, a) => {
            let sa = eval(t, g, a, bit_of, memo);
            (0..n)
                .map(|v| g.out[v].iter().filter(|(_, dst)| sa[*dst]).count() >= *k as usize)
                .collect()
        }
        Formula::Exists(body) => match &**body {
            Formula::Next(a) => {
                let sa = eval(t, g, a, bit_of, memo);
                (0..n).map(|v| g.out[v].iter().any(|(_, dst)| sa[*dst])).collect()
            }
            // Least fixpoint: reach a `b` node through `a` nodes; sound on
            // total graphs because every finite witness extends.
            Formula::Until(a, b) => {
                let sa = eval(t, g, a, bit_of, memo);
                let sb = eval(t, g, b, bit_of, memo);
                let mut sat = sb.clone();
                loop {
                    let mut changed = false;
                    for v in 0..n {
                        if !sat[v] && sa[v] && g.out[v].iter().any(|(_, dst)| sat[*dst]) {
                            sat[v] = true;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                sat
            }
            other => eval(t, g, other, bit_of, memo),
        },
        Formula::Yesterday(_) | Formula::Since(_, _) => {
            let k = bit_of[f];
            g.nodes.iter().map(|&(_, bits)| bits & (1 << k) != 0).collect()
        }
        _ => unreachable!("kernel shape: {f}"),
    };
    memo.insert(f.clone(), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use alloc::collections::{BTreeMap as Map, BTreeSet};
    use alloc::string::ToString;

    fn tree(
        props: &[&str],
        nodes: &[(&str, &[&str])],
        root: &str,
        edges: &[(&str, &str, &str)],
    ) -> RegularTree {
        let mut labels: Map<alloc::string::String, BTreeSet<alloc::string::String>> = Map::new();
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
    fn ag_on_self_loop() {
        let t = tree(&["p"], &[("v0", &["p"])], "v0", &[("e0", "v0", "v0")]);
        let f = F::all(F::globally(F::prop("p")));
        assert!(mc_polcctlp(&t, &f).unwrap().holds);
        let g = F::all(F::globally(F::prop("q")));
        assert!(!mc_polcctlp(&t, &g).unwrap().holds);
    }

    #[test]
    fn count_children_by_edges() {
        // v0 -> a (e1), v0 -> b (e2); both labelled p, self-loops.
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
        assert!(mc_polcctlp(&t, &F::count(2, F::prop("p"))).unwrap().holds);
        assert!(!mc_polcctlp(&t, &F::count(3, F::prop("p"))).unwrap().holds);
        // parallel edges count separately
        let t2 = tree(
            &["p"],
            &[("v0", &[]), ("a", &["p"])],
            "v0",
            &[("e1", "v0", "a"), ("e2", "v0", "a"), ("e3", "a", "a")],
        );
        assert!(mc_polcctlp(&t2, &F::count(2, F::prop("p"))).unwrap().holds);
    }

    #[test]
    fn until_and_since() {
        // v0{p} -> v1{q} (loop at v1)
        let t = tree(
            &["p", "q"],
            &[("v0", &["p"]), ("v1", &["q"])],
            "v0",
            &[("e0", "v0", "v1"), ("e1", "v1", "v1")],
        );
        let f = F::exists(F::until(F::prop("p"), F::prop("q")));
        assert!(mc_polcctlp(&t, &f).unwrap().holds);
        // at the root, p S q fails: no earlier positions and q is false now
        let g = F::since(F::prop("p"), F::prop("q"));
        assert!(!mc_polcctlp(&t, &g).unwrap().holds);
        // q S q at the root likewise fails, p S p holds
        assert!(mc_polcctlp(&t, &F::since(F::prop("p"), F::prop("p"))).unwrap().holds);
    }

    #[test]
    fn yesterday_via_ef() {
        // EF (q & Y p): v0{p} -> v1{q}: the q node's parent is labelled p.
        let t = tree(
            &["p", "q"],
            &[("v0", &["p"]), ("v1", &["q"])],
            "v0",
            &[("e0", "v0", "v1"), ("e1", "v1", "v1")],
        );
        let f = F::exists(F::eventually(F::and(
            F::prop("q"),
            F::yesterday(F::prop("p")),
        )));
        assert!(mc_polcctlp(&t, &f).unwrap().holds);
        // but not Y q at any reachable q-node's child... EF(q & Y q) holds at
        // v1's self-loop successor.
        let g = F::exists(F::eventually(F::and(F::prop("q"), F::yesterday(F::prop("q")))));
        assert!(mc_polcctlp(&t, &g).unwrap().holds);
        // root has no parent
        let h = F::yesterday(F::True);
        assert!(!mc_polcctlp(&t, &h).unwrap().holds);
    }

    #[test]
    fn rejects_wrong_fragment() {
        let f = F::all(F::eventually(F::prop("p")));
        let t = tree(&["p"], &[("v0", &["p"])], "v0", &[("e0", "v0", "v0")]);
        assert!(mc_polcctlp(&t, &f).is_err());
    }
}
