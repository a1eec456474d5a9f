//! Exact model checking over regular tree presentations, for both the
//! infinite-path semantics (polarized counting CTL with past) and the
//! finite-path semantics (counting CTL* over finite paths), plus the
//! depth/length-bounded brute-force oracles and sampled equivalence checks
//! every translation is validated against.

pub mod brute;
pub mod ctlsf;
pub mod equiv;
pub mod polcctlp;

pub use brute::{brute_force_ctlsf, brute_force_polcctlp};
pub use ctlsf::mc_ctlsf;
pub use equiv::{check_equiv_sampled, SamplerConfig, Semantics};
pub use polcctlp::mc_polcctlp;

use crate::tree::RegularTree;
use alloc::string::String;

/// Result of an exact check; equivalence checks attach the disagreeing tree.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<(RegularTree, String)>,
}

impl Verdict {
    pub fn of(holds: bool) -> Self {
        Verdict { holds, counterexample: None }
    }
}

/// Three-valued result of a bounded evaluation; `Unknown` carries the
/// exhausted bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundedVerdict {
    Holds,
    Fails,
    Unknown(usize),
}

/// Internal three-valued logic with Kleene connectives.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Tri {
    T,
    F,
    U,
}

impl Tri {
    pub(crate) fn from_bool(b: bool) -> Tri {
        if b {
            Tri::T
        } else {
            Tri::F
        }
    }

    pub(crate) fn not(self) -> Tri {
        match self {
            Tri::T => Tri::F,
            Tri::F => Tri::T,
            Tri::U => Tri::U,
        }
    }

    pub(crate) fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::F, _) | (_, Tri::F) => Tri::F,
            (Tri::T, Tri::T) => Tri::T,
            _ => Tri::U,
        }
    }

    pub(crate) fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::T, _) | (_, Tri::T) => Tri::T,
            (Tri::F, Tri::F) => Tri::F,
            _ => Tri::U,
        }
    }

    pub(crate) fn to_bounded(self, bound: usize) -> BoundedVerdict {
        match self {
            Tri::T => BoundedVerdict::Holds,
            Tri::F => BoundedVerdict::Fails,
            Tri::U => BoundedVerdict::Unknown(bound),
        }
    }
}
