//! JSON documents, reports and the `qpt` command line for `qpt-core`.

pub mod app;
pub mod document;
pub mod report;

pub use app::{run, Cli, CliError};
pub use document::{read_matrix_input, read_pairs, DocumentError, Kind, MatrixDocument, PairDocument};
