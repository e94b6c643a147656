//! Command-line companion to `rearrange-core`: JSON/CSV file formats, plot
//! emission, deterministic parallel sweeps, and the subcommand dispatcher.
//!
//! Everything here is plumbing around the library: schemas for profiles and
//! weights, tables with shortest-round-trip float formatting so reruns are
//! byte-identical, and the exit-code contract
//! (0 success, 2 precondition violation, 3 numerical non-convergence,
//! 4 certificate failure, 64 usage).

pub mod app;
pub mod formats;
pub mod runner;
pub mod svg;
pub mod table;

pub use app::run;

/// Process exit codes of the `rearrange-lab` binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Precondition = 2,
    NonConvergence = 3,
    CertificateFailure = 4,
    Usage = 64,
}
