//! Relative match-bounds: enriched rewriting and tree-automata completion.

pub mod automaton;
mod complete;
pub mod enriched;

pub use automaton::{initial_automaton, AutomatonError, Lhs, State, StateTerm, TreeAutomaton};
pub use complete::{alphabet, certify, check_preconditions, complete, Completion, CompletionBudget, CompletionMode, GaveUp, MatchBoundsError};
pub use enriched::{EnrichedSymbol, LabeledTerm};
