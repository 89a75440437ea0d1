//! Library face of the `ars3d` binary: document schema, deterministic JSON
//! rendering, and the command implementations, callable in-process.

pub mod commands;
pub mod doc;
pub mod json;

pub use commands::{
    cmd_classify, cmd_demo_counterexample, cmd_locus, cmd_validate, cmd_verify, Outcome,
};
pub use doc::ArsDocument;
