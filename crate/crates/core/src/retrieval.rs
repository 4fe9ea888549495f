//! Query-by-example: run the alignment search, filter, and attach relative
//! probabilities. Joins over several stored "tables" and class-hierarchy
//! inheritance need no extra machinery; they fall out of multi-row
//! alignments.

use crate::builder::build_alignments;
use crate::error::Result;
use crate::params::SearchParams;
use crate::pattern::PatternRef;
use crate::scoring::{relative_probabilities, ScoredAlignment};
use crate::store::Store;

/// Ranked query results. Probabilities are normalized over the returned
/// list, after filtering, so they condition on the filter.
#[derive(Debug, Clone)]
pub struct QueryResult {
    pub results: Vec<ScoredAlignment>,
    pub full_only: bool,
}

/// Align a sparse query pattern against the store and rank the outcomes.
/// With `full_only`, only alignments matching every query symbol survive.
pub fn query_by_example(
    new: PatternRef,
    store: &Store,
    params: &SearchParams,
    full_only: bool,
) -> Result<QueryResult> {
    let mut results = build_alignments(new, store, params)?;
    if full_only {
        results.retain(|r| r.full_match);
    }
    let results =
        if results.is_empty() { results } else { relative_probabilities(results)? };
    Ok(QueryResult { results, full_only })
}
