//! Positive Boolean formulas over graded atoms: the bodies of alternating
//! transition functions.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Direction and grade of an atom: send a copy to at least `k` children, to
/// all but `k - 1` children, or to the parent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Modality {
    Diamond(u32),
    Box(u32),
    Up,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub modality: Modality,
    pub state: usize,
}

impl Atom {
    pub fn diamond(k: u32, state: usize) -> Atom {
        Atom { modality: Modality::Diamond(k), state }
    }

    pub fn boxed(k: u32, state: usize) -> Atom {
        Atom { modality: Modality::Box(k), state }
    }

    pub fn up(state: usize) -> Atom {
        Atom { modality: Modality::Up, state }
    }

    /// Well-formed grades are at least one.
    pub fn grade_ok(&self) -> bool {
        match self.modality {
            Modality::Diamond(k) | Modality::Box(k) => k >= 1,
            Modality::Up => true,
        }
    }
}

/// Positive Boolean formula: no negation anywhere.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Pbf {
    True,
    False,
    Atom(Atom),
    Or(Box<Pbf>, Box<Pbf>),
    And(Box<Pbf>, Box<Pbf>),
}

impl Pbf {
    pub fn or(a: Pbf, b: Pbf) -> Pbf {
        match (a, b) {
            (Pbf::True, _) | (_, Pbf::True) => Pbf::True,
            (Pbf::False, x) | (x, Pbf::False) => x,
            (x, y) => Pbf::Or(Box::new(x), Box::new(y)),
        }
    }

    pub fn and(a: Pbf, b: Pbf) -> Pbf {
        match (a, b) {
            (Pbf::False, _) | (_, Pbf::False) => Pbf::False,
            (Pbf::True, x) | (x, Pbf::True) => x,
            (x, y) => Pbf::And(Box::new(x), Box::new(y)),
        }
    }

    pub fn big_or(items: impl IntoIterator<Item = Pbf>) -> Pbf {
        let mut out = Pbf::False;
        for x in items {
            out = Pbf::or(out, x);
        }
        out
    }

    pub fn big_and(items: impl IntoIterator<Item = Pbf>) -> Pbf {
        let mut out = Pbf::True;
        for x in items {
            out = Pbf::and(out, x);
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Pbf::True | Pbf::False => {}
            Pbf::Atom(a) => {
                out.insert(*a);
            }
            Pbf::Or(a, b) | Pbf::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Swaps conjunction with disjunction, diamonds with boxes, and the
    /// constants; the language of the dualized automaton is the complement.
    pub fn dual(&self) -> Pbf {
        match self {
            Pbf::True => Pbf::False,
            Pbf::False => Pbf::True,
            Pbf::Atom(a) => Pbf::Atom(Atom {
                modality: match a.modality {
                    Modality::Diamond(k) => Modality::Box(k),
                    Modality::Box(k) => Modality::Diamond(k),
                    Modality::Up => Modality::Up,
                },
                state: a.state,
            }),
            Pbf::Or(a, b) => Pbf::And(Box::new(a.dual()), Box::new(b.dual())),
            Pbf::And(a, b) => Pbf::Or(Box::new(a.dual()), Box::new(b.dual())),
        }
    }

    /// Evaluates under an atom assignment (used by tests and the validators).
    pub fn eval(&self, assign: &dyn Fn(&Atom) -> bool) -> bool {
        match self {
            Pbf::True => true,
            Pbf::False => false,
            Pbf::Atom(a) => assign(a),
            Pbf::Or(a, b) => a.eval(assign) || b.eval(assign),
            Pbf::And(a, b) => a.eval(assign) && b.eval(assign),
        }
    }
}

impl fmt::Display for Pbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pbf::True => write!(f, "true"),
            Pbf::False => write!(f, "false"),
            Pbf::Atom(a) => match a.modality {
                Modality::Diamond(1) => write!(f, "(<> q{})", a.state),
                Modality::Diamond(k) => write!(f, "(<>{} q{})", k, a.state),
                Modality::Box(1) => write!(f, "(# q{})", a.state),
                Modality::Box(k) => write!(f, "(#{} q{})", k, a.state),
                Modality::Up => write!(f, "(up q{})", a.state),
            },
            Pbf::Or(a, b) => write!(f, "({a} | {b})"),
            Pbf::And(a, b) => write!(f, "({a} & {b})"),
        }
    }
}

/// Irredundant disjunctive normal form: clauses are atom sets, constants are
/// normalized away, and subsumed clauses are dropped. The empty clause list
/// is `false`; a list containing the empty clause is `true`.
pub fn dnf(f: &Pbf) -> Vec<BTreeSet<Atom>> {
    let raw = match f {
        Pbf::True => vec![BTreeSet::new()],
        Pbf::False => vec![],
        Pbf::Atom(a) => vec![[*a].into_iter().collect()],
        Pbf::Or(a, b) => {
            let mut v = dnf(a);
            v.extend(dnf(b));
            v
        }
        Pbf::And(a, b) => {
            let va = dnf(a);
            let vb = dnf(b);
            let mut v = Vec::new();
            for x in &va {
                for y in &vb {
                    v.push(x.union(y).cloned().collect());
                }
            }
            v
        }
    };
    minimize_clauses(raw)
}

/// Irredundant conjunctive normal form, dual to [`dnf`].
pub fn cnf(f: &Pbf) -> Vec<BTreeSet<Atom>> {
    let raw = match f {
        Pbf::True => vec![],
        Pbf::False => vec![BTreeSet::new()],
        Pbf::Atom(a) => vec![[*a].into_iter().collect()],
        Pbf::And(a, b) => {
            let mut v = cnf(a);
            v.extend(cnf(b));
            v
        }
        Pbf::Or(a, b) => {
            let va = cnf(a);
            let vb = cnf(b);
            let mut v = Vec::new();
            for x in &va {
                for y in &vb {
                    v.push(x.union(y).cloned().collect());
                }
            }
            v
        }
    };
    minimize_clauses(raw)
}

fn minimize_clauses(mut clauses: Vec<BTreeSet<Atom>>) -> Vec<BTreeSet<Atom>> {
    clauses.sort();
    clauses.dedup();
    let keep: Vec<bool> = clauses
        .iter()
        .enumerate()
        .map(|(i, c)| {
            !clauses
                .iter()
                .enumerate()
                .any(|(j, c2)| j != i && c2.is_subset(c) && c2 != c)
        })
        .collect();
    clauses
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| if k { Some(c) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: usize) -> Pbf {
        Pbf::Atom(Atom::diamond(1, i))
    }

    #[test]
    fn dnf_distributes() {
        // (a0 | a1) & a2 => {a0,a2}, {a1,a2}
        let f = Pbf::and(Pbf::or(a(0), a(1)), a(2));
        let d = dnf(&f);
        assert_eq!(d.len(), 2);
        assert!(d.contains(&[Atom::diamond(1, 0), Atom::diamond(1, 2)].into_iter().collect()));
        assert!(d.contains(&[Atom::diamond(1, 1), Atom::diamond(1, 2)].into_iter().collect()));
    }

    #[test]
    fn dnf_of_true_is_single_empty_clause() {
        assert_eq!(dnf(&Pbf::True), vec![BTreeSet::new()]);
        assert!(dnf(&Pbf::False).is_empty());
    }

    /// Truth-table agreement of both normal forms with direct evaluation,
    /// over all assignments of up to 4 atoms.
    #[test]
    fn normal_forms_agree_with_truth_tables() {
        let atoms = [
            Atom::diamond(1, 0),
            Atom::boxed(2, 1),
            Atom::diamond(3, 2),
            Atom::up(1),
        ];
        let f = Pbf::or(
            Pbf::and(Pbf::Atom(atoms[0]), Pbf::or(Pbf::Atom(atoms[1]), Pbf::Atom(atoms[2]))),
            Pbf::and(Pbf::Atom(atoms[3]), Pbf::True),
        );
        let d = dnf(&f);
        let c = cnf(&f);
        for mask in 0u32..16 {
            let assign = |at: &Atom| -> bool {
                atoms.iter().position(|x| x == at).map(|i| mask & (1 << i) != 0).unwrap()
            };
            let direct = f.eval(&assign);
            let via_dnf = d.iter().any(|cl| cl.iter().all(|at| assign(at)));
            let via_cnf = c.iter().all(|cl| cl.iter().any(|at| assign(at)));
            assert_eq!(direct, via_dnf, "mask {mask}");
            assert_eq!(direct, via_cnf, "mask {mask}");
        }
    }
}
