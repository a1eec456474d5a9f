//! Core library for branching-time temporal logics with counting and past
//! operators over regular trees, the hesitant graded tree automata matching
//! them, and the constructive translations between the two worlds.
//!
//! The crate is `no_std` (with `alloc`); all IO, text formats and the command
//! line live in the companion `hesitant-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod formula;
pub mod fragment;
pub mod gen;
pub mod normal;
pub mod pastify;
pub mod rewrite;
pub mod semantics;
pub mod translate;
pub mod tree;
pub mod tree_automata;
pub mod word;

pub use formula::Formula;
pub use fragment::Fragment;
pub use tree::RegularTree;
