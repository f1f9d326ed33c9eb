//! The static-memory-hard function: H1 labels a graph into a static table,
//! H2 answers an input with a few table lookups masked by the oracle.

mod h2;
pub mod label;
mod oracle;
mod stream;
mod table;

pub use h2::{h2, h2_q, increment, H2Eval};
pub use label::{label_all, Labeler};
pub use oracle::{HashId, HashOracle, Oracle, OracleSpec};
pub use stream::{h1_streaming, StreamShape, Streamed};
pub use table::{h1, h1_graph, table_digest, SeekOracle, StaticTable};

use thiserror::Error;

use crate::constructions::ConstructionError;

#[derive(Debug, Error)]
pub enum ShfError {
    #[error("invalid oracle spec: {0}")]
    Spec(String),
    #[error("{what} must be {expected} bytes, got {found}")]
    Width { what: &'static str, expected: usize, found: usize },
    #[error("{q} lookups of {label_bits}-bit labels do not fill a {word_bits}-bit word")]
    Truncation { label_bits: usize, word_bits: usize, q: usize },
    #[error("table is empty")]
    EmptyTable,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("bad streaming shape: {0}")]
    Shape(String),
    #[error("bad table file: {0}")]
    TableFormat(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}
