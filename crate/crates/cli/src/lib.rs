//! Library surface of the command-line front end: the descriptor DSL and
//! the result cache. The binary in `main.rs` wires these to the engines.

pub mod cache;
pub mod descriptor;
