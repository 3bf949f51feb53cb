//! First-order Hilbert-style proof machinery over a small arithmetic
//! language: formulas, axiom schemata, a proof checker, a bounded
//! consequence engine, propositional and bounded-model semantics, and an
//! audit runner for scripted derivation claims.

pub mod audit;
pub mod axioms;
pub mod derived;
pub mod engine;
pub mod formula;
pub mod kernel;
pub mod named;
pub mod parser;
pub mod schema;
pub mod script;
pub mod semantics;
pub mod transform;

pub use formula::{Formula, Term, Var, VarSet};
pub use parser::{parse_formula, parse_term, ParseError};
