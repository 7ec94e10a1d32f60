//! Commutator expansion under axiom sets and the built-in derivations.

mod axioms;
mod derivation;
mod expand;
mod rules;

pub use axioms::{AxiomError, AxiomId, AxiomSet, AxiomSetBuilder, Relation, BUILTIN_NAMES};
pub use derivation::{replay, replay_under, CheckResult, Derivation, DerivationId, PairOutcome};
pub use expand::{commutator, ddt, equivalent, expand, standard_form, substitute_velocity, Closure, EngineError};
pub use rules::Rule;
