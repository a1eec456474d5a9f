//! Reachability-to-formula conversion for counter-free deterministic
//! automata.
//!
//! Given a complete DFA whose transition monoid is aperiodic and an
//! absorbing goal set, `dfa_reach_lform` produces, for every state, a
//! positive formula (letters, and, or, X, U) that holds on an infinite word
//! exactly when the run from that state eventually enters the goal. The
//! construction factors the word by a pivot letter: a prefix analysis over
//! the reduced alphabet, exact block-value formulas for the stretch before
//! the first pivot, and a recursive analysis of the pivot skeleton, whose
//! transition structure lives in the local divisor of the transition monoid
//! and is therefore strictly smaller. Budget limits make failure observable
//! instead of silent.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::lform::{lower_skeleton, lower_window, LForm};

/// A state transformation: `f[q]` is the state after reading the letter.
pub type Func = Vec<usize>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConvertError {
    /// The construction exceeded its size budget; the input is likely not
    /// counter-free or simply too large.
    BudgetExceeded,
}

pub struct Budget {
    pub remaining: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { remaining: limit }
    }

    fn spend(&mut self, amount: usize) -> Result<(), ConvertError> {
        if self.remaining < amount {
            return Err(ConvertError::BudgetExceeded);
        }
        self.remaining -= amount;
        Ok(())
    }
}

fn then(a: &Func, b: &Func) -> Func {
    a.iter().map(|&q| b[q]).collect()
}

fn is_identity(f: &Func) -> bool {
    f.iter().enumerate().all(|(i, &q)| i == q)
}

fn image_size(f: &Func) -> usize {
    let mut seen = vec![false; f.len()];
    let mut n = 0;
    for &q in f {
        if !seen[q] {
            seen[q] = true;
            n += 1;
        }
    }
    n
}

/// Letter disjunction helper.
fn any_of(letters: &[usize]) -> LForm {
    LForm::big_or(letters.iter().map(|&l| LForm::Letter(l)))
}

/// Formulas asserting that from each state, reading the word eventually
/// either enters a goal state (goal must be closed under all letters) or
/// sits at a position where the state's local event fires. Local events are
/// emitted as `Local(state)` leaves; `has_local[q]` tells whether state `q`
/// has one. `active` lists the letters that may occur.
fn reach(
    funcs: &[Func],
    active: &[usize],
    goal: &[bool],
    has_local: &[bool],
    budget: &mut Budget,
) -> Result<Vec<LForm>, ConvertError> {
    let n = goal.len();
    budget.spend(n + active.len())?;

    let base = |s: usize| {
        if goal[s] {
            LForm::True
        } else if has_local[s] {
            LForm::u(LForm::True, LForm::Local(s))
        } else {
            LForm::False
        }
    };

    // Pivot: an active letter acting non-trivially, smallest image first.
    let pivot = active
        .iter()
        .copied()
        .filter(|&l| !is_identity(&funcs[l]))
        .min_by_key(|&l| image_size(&funcs[l]));
    let c = match pivot {
        None => return Ok((0..n).map(base).collect()),
        Some(c) => c,
    };
    let rest: Vec<usize> = active.iter().copied().filter(|&l| l != c).collect();

    // A branch: the event happens within the maximal pivot-free prefix.
    let sub = reach(funcs, &rest, goal, has_local, budget)?;
    let idents: Vec<LForm> = (0..n).map(LForm::Local).collect();
    let a_branch: Vec<LForm> = sub
        .iter()
        .map(|f| lower_window(f, &rest, c, false, &idents))
        .collect();

    // Value formulas for pivot-free blocks.
    let vals = value(funcs, &rest, budget)?;

    // Skeleton structure over the local divisor.
    let fc = &funcs[c];
    let pre = preimage_picker(fc, n);
    let compose = |p: &Func, e: &Func| -> Func { p.iter().map(|&q| e[pre[q]]).collect() };

    // Gamma letters: distinct section elements c.m'.c, each with the block
    // values realizing it.
    let mut gamma_elems: Vec<Func> = Vec::new();
    let mut gamma_members: Vec<Vec<&Func>> = Vec::new();
    for m in vals.keys() {
        let e = then(fc, &then(m, fc));
        match gamma_elems.iter().position(|x| x == &e) {
            Some(i) => gamma_members[i].push(m),
            None => {
                gamma_elems.push(e);
                gamma_members.push(vec![m]);
            }
        }
    }

    // P space: closure of {fc} under composition with the gamma elements.
    let mut pspace: Vec<Func> = vec![fc.clone()];
    let mut head = 0;
    while head < pspace.len() {
        let p = pspace[head].clone();
        head += 1;
        for e in &gamma_elems {
            let q = compose(&p, e);
            if !pspace.contains(&q) {
                budget.spend(1)?;
                pspace.push(q);
            }
        }
    }
    let pindex = |p: &Func| pspace.iter().position(|x| x == p).expect("closed");
    let gfuncs: Vec<Func> = gamma_elems
        .iter()
        .map(|e| pspace.iter().map(|p| pindex(&compose(p, e))).collect())
        .collect();
    let gactive: Vec<usize> = (0..gamma_elems.len()).collect();

    let closes = LForm::u(any_of(&rest), LForm::Letter(c));
    let gamma_tests: Vec<LForm> = gamma_members
        .iter()
        .map(|ms| {
            let val_dis = LForm::big_or(ms.iter().map(|m| vals[*m].clone()));
            LForm::x(LForm::and(
                lower_window(&val_dis, &rest, c, true, &idents),
                closes.clone(),
            ))
        })
        .collect();

    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let mut b_branch = LForm::False;
        for x in 0..n {
            // value of the first block must drive s to x
            let win = LForm::big_or(
                vals.iter()
                    .filter(|(m, _)| m[s] == x)
                    .map(|(_, f)| f.clone()),
            );
            if win == LForm::False {
                continue;
            }
            let valwin = LForm::and(
                lower_window(&win, &rest, c, true, &idents),
                closes.clone(),
            );
            // skeleton from the first pivot with state tracker seeded at fc
            let goal_g: Vec<bool> = pspace.iter().map(|p| goal[p[x]]).collect();
            let local_g: Vec<LForm> = pspace
                .iter()
                .map(|p| {
                    LForm::x(lower_window(&sub[p[x]], &rest, c, false, &idents))
                })
                .collect();
            let has_local_g = vec![true; pspace.len()];
            let greach = reach(&gfuncs, &gactive, &goal_g, &has_local_g, budget)?;
            let skel = lower_skeleton(&greach[0], &rest, c, &gamma_tests, &local_g);
            let b_x = LForm::and(
                valwin,
                LForm::u(any_of(&rest), LForm::and(LForm::Letter(c), skel)),
            );
            b_branch = LForm::or(b_branch, b_x);
        }
        let phi = LForm::or(a_branch[s].clone(), b_branch);
        budget.spend(phi.size() / 16 + 1)?;
        out.push(phi);
    }
    Ok(out)
}

fn preimage_picker(fc: &Func, n: usize) -> Vec<usize> {
    // pre[r] = some q with fc[q] = r, for r in the image of fc.
    let mut pre = vec![usize::MAX; n];
    for (q, &r) in fc.iter().enumerate() {
        if pre[r] == usize::MAX {
            pre[r] = q;
        }
    }
    pre
}

/// Value-class formulas: for every achievable product of letter
/// transformations, a formula holding at the first position of a finite word
/// (letters followed by a letterless end position) exactly when the word's
/// letters compose to that transformation. The empty letter sequence has the
/// identity value.
fn value(
    funcs: &[Func],
    active: &[usize],
    budget: &mut Budget,
) -> Result<BTreeMap<Func, LForm>, ConvertError> {
    let n = funcs.first().map_or(0, |f| f.len());
    budget.spend(active.len() + 1)?;
    let ident: Func = (0..n).collect();

    let pivot = active
        .iter()
        .copied()
        .filter(|&l| !is_identity(&funcs[l]))
        .min_by_key(|&l| image_size(&funcs[l]));
    let c = match pivot {
        None => {
            let mut out = BTreeMap::new();
            out.insert(ident, LForm::True);
            return Ok(out);
        }
        Some(c) => c,
    };
    let rest: Vec<usize> = active.iter().copied().filter(|&l| l != c).collect();
    let sub = value(funcs, &rest, budget)?;

    let mut out: BTreeMap<Func, LForm> = BTreeMap::new();
    let mut add = |m: Func, f: LForm, budget: &mut Budget| -> Result<(), ConvertError> {
        budget.spend(f.size() / 16 + 1)?;
        let slot = out.entry(m).or_insert(LForm::False);
        *slot = LForm::or(core::mem::replace(slot, LForm::False), f);
        Ok(())
    };

    // No pivot in the word at all.
    let no_c = LForm::u(any_of(&rest), LForm::End);
    for (m, f) in &sub {
        add(m.clone(), LForm::and(no_c.clone(), f.clone()), budget)?;
    }

    // At least one pivot: first block, pivot section, tail block.
    let fc = &funcs[c];
    let pre = preimage_picker(fc, n);
    let compose = |p: &Func, e: &Func| -> Func { p.iter().map(|&q| e[pre[q]]).collect() };

    let mut gamma_elems: Vec<Func> = Vec::new();
    let mut gamma_members: Vec<Vec<Func>> = Vec::new();
    for m in sub.keys() {
        let e = then(fc, &then(m, fc));
        match gamma_elems.iter().position(|x| x == &e) {
            Some(i) => gamma_members[i].push(m.clone()),
            None => {
                gamma_elems.push(e);
                gamma_members.push(vec![m.clone()]);
            }
        }
    }
    let mut pspace: Vec<Func> = vec![fc.clone()];
    let mut head = 0;
    while head < pspace.len() {
        let p = pspace[head].clone();
        head += 1;
        for e in &gamma_elems {
            let q = compose(&p, e);
            if !pspace.contains(&q) {
                budget.spend(1)?;
                pspace.push(q);
            }
        }
    }
    let gfuncs: Vec<Func> = gamma_elems
        .iter()
        .map(|e| {
            pspace
                .iter()
                .map(|p| {
                    let q = compose(p, e);
                    pspace.iter().position(|x| x == &q).expect("closed")
                })
                .collect()
        })
        .collect();
    let gactive: Vec<usize> = (0..gamma_elems.len()).collect();
    let skelvals = value(&gfuncs, &gactive, budget)?;

    let idents: Vec<LForm> = Vec::new();
    let closes = LForm::u(any_of(&rest), LForm::Letter(c));
    let gamma_tests: Vec<LForm> = gamma_members
        .iter()
        .map(|ms| {
            let dis = LForm::big_or(ms.iter().map(|m| sub[m].clone()));
            LForm::x(LForm::and(
                lower_window(&dis, &rest, c, true, &idents),
                closes.clone(),
            ))
        })
        .collect();

    for (m0, f0) in &sub {
        let first = LForm::and(
            lower_window(f0, &rest, c, true, &idents),
            closes.clone(),
        );
        for (t, ft) in &skelvals {
            // the section value: seed fc pushed through the skeleton word
            let d = pspace[t[0]].clone();
            for (m1, f1) in &sub {
                let total = then(m0, &then(&d, m1));
                let tail_payload =
                    LForm::x(lower_window(f1, &rest, c, false, &idents));
                let at_last = LForm::u(LForm::True, LForm::and(LForm::End, LForm::Local(0)));
                let skel_plus_tail = LForm::and(ft.clone(), at_last);
                let lowered = lower_skeleton(
                    &skel_plus_tail,
                    &rest,
                    c,
                    &gamma_tests,
                    &[tail_payload],
                );
                let goto = LForm::u(any_of(&rest), LForm::and(LForm::Letter(c), lowered));
                add(total, LForm::and(first.clone(), goto), budget)?;
            }
        }
    }
    Ok(out)
}

/// Tarjan strongly connected components, returned in reverse topological
/// order (callees before callers).
fn sccs(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    struct St {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(v: usize, st: &mut St, succ: &impl Fn(usize) -> Vec<usize>) {
        // iterative DFS to avoid recursion limits
        let mut call_stack: Vec<(usize, Vec<usize>, usize)> = vec![(v, succ(v), 0)];
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        while let Some((u, succs, mut i)) = call_stack.pop() {
            let mut descended = false;
            while i < succs.len() {
                let w = succs[i];
                i += 1;
                match st.index[w] {
                    None => {
                        st.index[w] = Some(st.next);
                        st.low[w] = st.next;
                        st.next += 1;
                        st.stack.push(w);
                        st.on_stack[w] = true;
                        call_stack.push((u, succs, i));
                        call_stack.push((w, succ(w), 0));
                        descended = true;
                        break;
                    }
                    Some(wi) => {
                        if st.on_stack[w] && wi < st.low[u] {
                            st.low[u] = wi;
                        }
                    }
                }
            }
            if descended {
                continue;
            }
            if st.low[u] == st.index[u].unwrap() {
                let mut comp = Vec::new();
                while let Some(w) = st.stack.pop() {
                    st.on_stack[w] = false;
                    comp.push(w);
                    if w == u {
                        break;
                    }
                }
                st.out.push(comp);
            }
            if let Some((p, _, _)) = call_stack.last() {
                let p = *p;
                if st.low[u] < st.low[p] {
                    st.low[p] = st.low[u];
                }
            }
        }
    }
    let mut st = St {
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(v, &mut st, &succ);
        }
    }
    st.out
}

/// Per-state reachability formulas for a complete DFA with absorbing goal
/// states. Strongly connected components are processed bottom-up; acyclic
/// states unfold directly, single states with self-loops use the until rule,
/// and genuinely cyclic components go through the pivot recursion with their
/// exits as local events.
pub fn dfa_reach_lform(
    num_states: usize,
    num_letters: usize,
    next: &[Vec<usize>],
    goal: &[bool],
    budget: &mut Budget,
) -> Result<Vec<LForm>, ConvertError> {
    // goal states must be absorbing
    for q in 0..num_states {
        if goal[q] {
            debug_assert!((0..num_letters).all(|l| goal[next[q][l]]));
        }
    }
    let mut formula: Vec<Option<LForm>> = vec![None; num_states];
    let components = sccs(num_states, |q| (0..num_letters).map(|l| next[q][l]).collect());
    for comp in components {
        if comp.len() == 1 {
            let q = comp[0];
            if goal[q] {
                formula[q] = Some(LForm::True);
                continue;
            }
            let selfs: Vec<usize> = (0..num_letters).filter(|&l| next[q][l] == q).collect();
            let exits: Vec<usize> = (0..num_letters).filter(|&l| next[q][l] != q).collect();
            let exit_form = LForm::big_or(exits.iter().map(|&l| {
                LForm::and(
                    LForm::Letter(l),
                    LForm::x(formula[next[q][l]].clone().expect("reverse topological")),
                )
            }));
            formula[q] = Some(if selfs.is_empty() {
                exit_form
            } else {
                LForm::u(any_of(&selfs), exit_form)
            });
        } else {
            // Cyclic component: local problem with exits as events.
            if comp.iter().any(|&q| goal[q]) {
                // goal absorbing, so a goal state cannot share a cycle with
                // non-goal states; goal SCCs are singletons.
                unreachable!("goal states are absorbing");
            }
            let pos: BTreeMap<usize, usize> =
                comp.iter().enumerate().map(|(i, &q)| (q, i)).collect();
            let out_state = comp.len();
            let m = comp.len() + 1;
            let funcs: Vec<Func> = (0..num_letters)
                .map(|l| {
                    let mut f: Func = comp
                        .iter()
                        .map(|&q| *pos.get(&next[q][l]).unwrap_or(&out_state))
                        .collect();
                    f.push(out_state);
                    f
                })
                .collect();
            let goal_local = vec![false; m];
            let mut has_local = vec![true; m];
            has_local[out_state] = false;
            let active: Vec<usize> = (0..num_letters).collect();
            let raw = reach(&funcs, &active, &goal_local, &has_local, budget)?;
            // Local payload of a component state: exit now toward a good
            // continuation.
            let payloads: Vec<LForm> = comp
                .iter()
                .map(|&q| {
                    LForm::big_or((0..num_letters).filter(|&l| !pos.contains_key(&next[q][l])).map(
                        |l| {
                            LForm::and(
                                LForm::Letter(l),
                                LForm::x(
                                    formula[next[q][l]].clone().expect("reverse topological"),
                                ),
                            )
                        },
                    ))
                })
                .chain(core::iter::once(LForm::False))
                .collect();
            for (i, &q) in comp.iter().enumerate() {
                formula[q] = Some(raw[i].resolve_locals(&payloads));
            }
        }
    }
    Ok(formula.into_iter().map(|f| f.expect("all covered")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::lform::eval_lform;

    /// Checks a reach formula against the DFA on every word up to `max_len`:
    /// the formula (evaluated with the finite-word reading, which for the
    /// letter/and/or/X/U fragment under-approximates the infinite one) must
    /// hold on some extension within the bound iff the run hits goal within
    /// the bound; and formula-satisfaction must imply goal-reaching.
    fn check_reach(
        num_states: usize,
        num_letters: usize,
        next: &[Vec<usize>],
        goal: &[bool],
        max_len: usize,
    ) {
        let mut budget = Budget::new(1_000_000);
        let forms = dfa_reach_lform(num_states, num_letters, next, goal, &mut budget).unwrap();
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..max_len {
            let mut nf = Vec::new();
            for w in &frontier {
                for a in 0..num_letters {
                    let mut w2 = w.clone();
                    w2.push(a);
                    nf.push(w2);
                }
            }
            words.extend(nf.iter().cloned());
            frontier = nf;
        }
        for s in 0..num_states {
            for w in &words {
                let mut q = s;
                let mut reached = goal[q];
                for &a in w {
                    q = next[q][a];
                    reached |= goal[q];
                }
                let sat = eval_lform(&forms[s], w, 0);
                // soundness: formula satisfied on the finite prefix => run
                // reaches goal along it
                if sat {
                    assert!(reached, "state {s} word {w:?}: formula true but goal unreached");
                }
                // completeness: reached => the formula holds on this prefix
                // (reach events are prefix-witnessed and the formula's
                // operators are satisfied by finite witnesses)
                if reached {
                    assert!(sat, "state {s} word {w:?}: goal reached but formula false");
                }
            }
        }
    }

    #[test]
    fn straight_line_reach() {
        // 0 --any--> 1 --any--> goal 2
        let next = vec![vec![1, 1], vec![2, 2], vec![2, 2]];
        check_reach(3, 2, &next, &[false, false, true], 5);
    }

    #[test]
    fn self_loop_until_reach() {
        // 0 loops on letter 0, moves to goal on letter 1
        let next = vec![vec![0, 1], vec![1, 1]];
        check_reach(2, 2, &next, &[false, true], 6);
    }

    #[test]
    fn two_state_cycle_aperiodic() {
        // letters: a: 0->1, 1->1 ; b: 0->0, 1->0 ; c: 1->goal, 0->0
        // SCC {0,1} is aperiodic (no letter permutes it nontrivially).
        let next = vec![
            vec![1, 0, 0], // from 0: a->1, b->0, c->0
            vec![1, 0, 2], // from 1: a->1, b->0, c->goal
            vec![2, 2, 2],
        ];
        check_reach(3, 3, &next, &[false, false, true], 6);
    }

    #[test]
    fn mixed_internal_exit_letter() {
        // the shape of the minimal automaton of F(p & X q):
        // s0 -p-> s1; s1 -q-> goal; s1 -p-> s1; s1 -{}-> s0; s0 -q-> s0
        // letters: 0={}, 1={p}, 2={q}, 3={p,q}
        let next = vec![
            vec![0, 1, 0, 1], // s0
            vec![0, 1, 2, 2], // s1
            vec![2, 2, 2, 2], // goal
        ];
        check_reach(3, 4, &next, &[false, false, true], 6);
    }

    #[test]
    fn three_state_aperiodic_component() {
        // letter 0: 0->1, 1->2, 2->2 (partial progress, idempotent-ish)
        // letter 1: 0->0, 1->0, 2->0 (reset)
        // letter 2: exits to goal from 2 only
        let next = vec![
            vec![1, 0, 0],
            vec![2, 0, 1],
            vec![2, 0, 3],
            vec![3, 3, 3],
        ];
        check_reach(4, 3, &next, &[false, false, false, true], 6);
    }
}
