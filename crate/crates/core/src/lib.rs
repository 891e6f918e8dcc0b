//! Modular disjunctive logic programs under the stable-model semantics.
//!
//! A module ([`DlpFunction`]) is a set of disjunctive rules with an explicit
//! input/output/hidden interface. The crate enumerates classical, minimal and
//! stable models, composes and joins modules, decomposes programs along
//! their strongly connected components, shifts disjunctions, checks modular
//! equivalence, and compiles two-level QBFs into modules.

pub mod algebra;
mod bits;
pub mod cli;
pub mod completion;
pub mod decomposition;
pub mod equivalence;
pub mod error;
pub mod model;
pub mod parser;
pub mod qbf;
mod search;
pub mod semantics;
pub mod shifting;

pub use error::{Error, Result};
pub use model::{Atom, AtomSet, DlpFunction, Interpretation, ModelSet, Rule, RuleSet};
pub use semantics::{Engine, Limits};
