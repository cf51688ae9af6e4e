//! Compiles the guide's code samples as doctests, so `cargo test --doc`
//! keeps the book in sync with the library.

#[doc = include_str!("../../../book/src/popularity.md")]
pub mod popularity {}

#[doc = include_str!("../../../book/src/witnesses.md")]
pub mod witnesses {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}

#[doc = include_str!("../../../book/src/gadgets.md")]
pub mod gadgets {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
