//! An in-memory pattern database. All knowledge lives in flat sequences of
//! atomic symbols; queries are answered by building multiple alignments
//! between a query pattern and the stored patterns, scored by how much the
//! alignment compresses the query. Relational retrieval, joins across
//! pattern sets, class-hierarchy inheritance and parsing all come out of the
//! one mechanism.

pub mod alignment;
pub mod bench;
pub mod builder;
pub mod error;
pub mod kb;
pub mod matcher;
pub mod params;
pub mod pattern;
pub mod retrieval;
pub mod scoring;
pub mod store;
pub mod symbol;

pub use alignment::{check_alignment, project, Alignment, Column, RowEntry};
pub use builder::{build_alignments, build_alignments_traced, merge};
pub use error::{Error, Result};
pub use matcher::{match_alignment, match_alignment_with, pairwise_match, MatchHit};
pub use params::SearchParams;
pub use pattern::{Pattern, PatternRef, Role};
pub use retrieval::{query_by_example, QueryResult};
pub use scoring::{
    infer_attributes, relative_probabilities, score, symbol_cost, InferenceSet, ScoredAlignment,
};
pub use store::{build_store, Store};
pub use symbol::{Symbol, SymbolTable};
