//! Translations between logics and automata.
