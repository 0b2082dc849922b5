//! Complexity problems, processors, proof trees and the proof search.

mod bound;
mod processors;
mod proof;
mod strategy;

pub use bound::Bound;
pub use processors::{completion_mode, completion_signature, gap_processor, matchbounds_processor, pair_processor, split_processor, FrameworkError, Outcome, GAP_NOTE};
pub use proof::{match_problem, CpProblem, ProofNode, Processor, Step, Witness};
pub use strategy::{analyze, prove, tighten, AnalysisConfig, Method, Methods};
