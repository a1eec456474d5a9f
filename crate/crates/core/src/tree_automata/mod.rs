//! Graded alternating tree automata with weak acceptance, hesitant
//! partitions, linear (singleton) components and optional two-way atoms;
//! subclass validators, acceptance over regular trees, component
//! linearization into word automata, and the counter-freeness and mutual
//! exclusion side conditions.

pub mod accept;
pub mod gta;
pub mod linearize;
pub mod mutex;
pub mod pbf;

pub use accept::{accept_hwgt, bounded_game_2hlgt, AcceptError};
pub use gta::{
    validate_subclass, Component, ComponentType, GradedTreeAutomaton, InitialCondition,
    SubclassTarget, SubclassViolation,
};
pub use linearize::{check_counter_free_components, linearize, LinearizedComponent};
pub use mutex::{check_mutual_exclusion, ComplementCertificate, MutexVerdict};
pub use pbf::{Atom, Modality, Pbf};
