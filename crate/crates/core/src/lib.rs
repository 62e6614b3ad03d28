//! Exact, finite-state machinery for language-style semantics of monadic
//! Moore automata: quantale-valued distances, coalgebraic determinization,
//! depth-indexed word behaviours, and modal logics that are invariant and
//! expressive for those behaviours.
//!
//! Everything is computed over exact rationals (or Booleans); there are no
//! floating-point tolerances anywhere. The crate is organized around the
//! pipeline
//!
//! ```text
//! machine --(determinize)--> word tables --(compare)--> behavioural distance
//!    |                                                        ||  (theorems)
//!    +------(evaluate formulas)----------------------> logical distance
//! ```
//!
//! with law checkers (`laws` suites in [`expressivity`]) that machine-verify
//! the algebraic facts the pipeline relies on: quantale axioms, monad and
//! algebra laws, distributive laws, graded multiplication laws, modality
//! validity and separation.

pub mod error;
pub mod expressivity;
pub mod graded;
pub mod io;
pub mod logic;
pub mod machine;
pub mod monad;
pub mod quantale;
pub mod report;
pub mod vcat;

pub use error::{Error, Result};
pub use quantale::{Quantale, Rat, Value};
