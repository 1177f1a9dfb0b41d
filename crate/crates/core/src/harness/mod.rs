//! Experiment plumbing: seeded corpora, per-instance audits, batch sweeps
//! and their JSON/CSV output.

pub mod corpus;
pub mod record;
pub mod sweep;

pub use corpus::{generate_corpus, CorpusKind, CorpusSpec};
pub use record::{audit, write_csv, write_json, ExitStatus, SweepRecord};
pub use sweep::{
    pythag_trials, sweep_cyclic, sweep_roots, CyclicSweep, Execution, PythagTrial, RootSummary,
    RootSweep,
};
