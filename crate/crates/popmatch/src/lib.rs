//! Popular matchings in bipartite graphs with weighted voters.
//!
//! A matching `M` is *popular* if no other matching `M'` beats it in a
//! weighted head-to-head vote: every vertex votes for the matching giving it
//! the better partner, with multiplicity equal to its weight, and `M` must
//! never lose. This crate provides:
//!
//! - an exact data model over arbitrary-precision rationals ([`model`]),
//! - an exact popularity verifier based on the augmented-graph vote
//!   characterization ([`verifier`]),
//! - witness (LP-dual certificate) checking and the dominance machinery
//!   ([`witness`]),
//! - a brute-force oracle for desk-scale ground truth ([`oracle`]),
//! - a polynomial-time solver for instances where one side has uniform
//!   weight `c > 3` and the other has weight 1 ([`solver`]),
//! - generators for the hardness-gadget instance families ([`gadgets`]),
//! - a command-line interface with stable text file formats ([`cli`]).
//!
//! The narrative guide under `book/` walks through the concepts; its code
//! samples are compiled and run by `cargo test --doc`.

pub mod cli;
pub mod gadgets;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod verifier;
pub mod witness;

#[cfg(doctest)]
mod book;
