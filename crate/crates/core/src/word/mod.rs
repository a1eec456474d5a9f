//! Word automata over alphabets of proposition subsets: finite-word
//! automata, Büchi/coBüchi automata with nondeterministic or universal
//! branching, transition monoids and the counter-freeness test, the
//! finite-trace tableau compiler, and the bridge between looping automata
//! and the safe/co-safe temporal fragments.

pub mod automaton;
pub mod convert;
pub mod lform;
pub mod looping;
pub mod ltlf;
pub mod monoid;
pub mod ops;

pub use automaton::{Acceptance, Branching, FiniteWordAutomaton, OmegaWordAutomaton, WordAlphabet};
pub use convert::{dfa_reach_lform, Budget, ConvertError};
pub use looping::{is_looping, looping_automaton_to_ltl, ltl_to_looping_automaton, LoopingError};
pub use ltlf::{ltlf_to_nfa, LtlfTableau};
pub use monoid::{is_counter_free, transition_monoid, CounterWitness, TransitionMonoid};
pub use ops::{bounded_language_equiv, determinize, minimize_dfa};
