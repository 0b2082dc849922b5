//! Complexity analysis for relative term rewrite systems.

pub mod render;
pub mod rewrite;
pub mod term;
pub mod trs_io;
pub mod budget;
pub mod interp;
pub mod sat;
pub mod semiring;
pub mod synth;
pub mod matchbounds;
pub mod framework;
