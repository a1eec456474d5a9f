//! Pastification pipeline for the past normal form.
