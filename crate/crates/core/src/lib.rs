//! Pebbling games, hard-to-pebble graph families and a static-memory-hard
//! hash function built on graph labeling.
//!
//! Modules, bottom-up: [`graph`] (DAGs and the PGRAPH1 format),
//! [`constructions`] (graph families), [`engine`] (rule checking and
//! measures), [`solver`] (exhaustive search and named strategies),
//! [`shf`] (labeling, H1/H2, the row-streaming evaluator) and [`audit`]
//! (query traces and ex-post-facto pebblings).

pub mod audit;
pub mod constructions;
pub mod engine;
pub mod graph;
pub mod par;
pub mod shf;
pub mod solver;
