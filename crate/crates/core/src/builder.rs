//! Staged search that grows multiple alignments by matching the column
//! structure of retained candidates against stored patterns and merging the
//! best hits, keeping a bounded beam of candidates per stage.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::alignment::{Alignment, Column, RowEntry};
use crate::error::{Error, Result};
use crate::matcher::MatchHit;
use crate::params::SearchParams;
use crate::pattern::{PatternRef, Role};
use crate::scoring::{score, store_cost, ScoredAlignment};
use crate::store::Store;

/// Add one row for `target` to `driving`, joining the columns named by the
/// hit. Unmatched target positions become fresh single-member columns placed
/// by the canonical ordering. Hits that would cross a row order, reuse a
/// matched query symbol, or stack a pattern onto itself are rejected, and a
/// hit joining stored-row columns must anchor an identification boundary:
/// either the target's own first symbol is matched, or the hit reaches the
/// first symbol of a row already present. Without that, any two patterns
/// sharing field delimiters would pile up into spurious alignments.
pub fn merge(
    driving: &Alignment,
    target: &PatternRef,
    hit: &MatchHit,
    max_instances_per_pattern: usize,
) -> Result<Alignment> {
    if target.role() != Role::Old {
        return Err(Error::InvalidHit("merge target must be a stored pattern".into()));
    }
    if driving.instances_of(target.pid()) >= max_instances_per_pattern {
        return Err(Error::InvalidHit(format!(
            "pattern {:?} already has {} instances",
            target.pid(),
            max_instances_per_pattern
        )));
    }
    if hit.pairs.is_empty() {
        return Err(Error::InvalidHit("empty hit".into()));
    }

    let n_cols = driving.columns().len();
    let mut last_t: Option<usize> = None;
    let mut has_old_only_pair = false;
    let mut anchored = false;
    for &(col, tpos) in &hit.pairs {
        if col >= n_cols || tpos >= target.len() {
            return Err(Error::InvalidHit("hit indexes out of range".into()));
        }
        if let Some(prev) = last_t {
            if tpos <= prev {
                return Err(Error::InvalidHit("hit target positions must increase".into()));
            }
        }
        last_t = Some(tpos);
        if driving.symbol_at(col) != target.symbols()[tpos] {
            return Err(Error::InvalidHit("hit joins different symbols".into()));
        }
        if tpos == 0 {
            anchored = true;
        }
        let column = &driving.columns()[col];
        let mut has_new = false;
        let mut at_zero = 0usize;
        for &(r, p) in &column.members {
            let row = &driving.rows()[r as usize];
            if row.role() == Role::New {
                has_new = true;
            } else {
                if row.pattern.pid() == target.pid() {
                    return Err(Error::InvalidHit("column already holds this pattern".into()));
                }
                if p == 0 {
                    anchored = true;
                }
            }
            if p == 0 {
                at_zero += 1;
            }
        }
        if has_new && column.len() >= 2 {
            return Err(Error::InvalidHit("query symbol is already matched".into()));
        }
        if tpos == 0 && at_zero != 0 && at_zero != column.len() {
            // the column is a reference slot already bound to another row;
            // a fresh identification symbol may not crash it
            return Err(Error::InvalidHit("reference slot is already bound".into()));
        }
        if !has_new {
            has_old_only_pair = true;
        }
    }
    if has_old_only_pair && !anchored {
        return Err(Error::InvalidHit("hit joins stored rows without an identification anchor".into()));
    }

    let new_row = driving.rows().len() as u32;
    let mut rows: Vec<RowEntry> = driving.rows().to_vec();
    rows.push(RowEntry { pattern: target.clone() });

    let mut columns: Vec<Column> = driving.columns().to_vec();
    let matched: HashSet<usize> = hit.pairs.iter().map(|&(_, t)| t).collect();
    for &(col, tpos) in &hit.pairs {
        columns[col].members.push((new_row, tpos as u32));
        columns[col].members.sort_unstable();
    }
    for tpos in 0..target.len() {
        if !matched.contains(&tpos) {
            columns.push(Column::single(new_row, tpos as u32));
        }
    }

    let mut merged = match Alignment::from_parts(rows, columns) {
        Ok(a) => a,
        Err(_) => return Err(Error::InvalidHit("hit cannot be interleaved without crossing".into())),
    };
    merged.canonicalize_columns().map_err(|_| Error::InvalidHit("crossing".into()))?;
    Ok(merged)
}

#[derive(Clone)]
struct Candidate {
    scored: ScoredAlignment,
    sig: String,
    pids_key: Vec<String>,
    covered: Vec<u32>,
}

impl Candidate {
    fn new(scored: ScoredAlignment) -> Self {
        let sig = scored.alignment.signature();
        let mut pids_key: Vec<String> =
            scored.alignment.old_rows().map(|r| r.pattern.pid().to_string()).collect();
        pids_key.sort();
        let a = &scored.alignment;
        let mut covered: Vec<u32> = Vec::new();
        for col in a.columns() {
            let new_pos = col
                .members
                .iter()
                .find(|&&(r, _)| a.rows()[r as usize].role() == Role::New)
                .map(|&(_, p)| p);
            if let Some(p) = new_pos {
                if col.len() >= 2 {
                    covered.push(p);
                }
            }
        }
        covered.sort_unstable();
        Candidate { scored, sig, pids_key, covered }
    }

    /// True when `self` makes `other` redundant: the same query coverage
    /// from a strict subset of its patterns at no worse a score. Extra rows
    /// must pay their way in the score or they are noise.
    fn dominates(&self, other: &Candidate) -> bool {
        self.scored.cd >= other.scored.cd
            && self.covered == other.covered
            && is_strict_submultiset(&self.pids_key, &other.pids_key)
    }
}

fn is_strict_submultiset(a: &[String], b: &[String]) -> bool {
    if a.len() >= b.len() {
        return false;
    }
    let mut bi = 0;
    for x in a {
        loop {
            if bi >= b.len() {
                return false;
            }
            let cur = &b[bi];
            bi += 1;
            match x.cmp(cur) {
                std::cmp::Ordering::Equal => break,
                std::cmp::Ordering::Greater => continue,
                std::cmp::Ordering::Less => return false,
            }
        }
    }
    true
}

/// Global candidate order: compression difference first, then fewer rows,
/// then sorted row pids, then the column signature.
fn tie_break(a: &Candidate, b: &Candidate) -> Ordering {
    b.scored
        .cd
        .partial_cmp(&a.scored.cd)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.scored.alignment.rows().len().cmp(&b.scored.alignment.rows().len()))
        .then_with(|| a.pids_key.cmp(&b.pids_key))
        .then_with(|| a.sig.cmp(&b.sig))
}

/// Retained candidates: sorted by the global order, deduplicated by
/// signature, truncated to the beam width.
struct CandidateSet {
    members: Vec<Candidate>,
    seen: HashSet<String>,
}

impl CandidateSet {
    fn new() -> Self {
        CandidateSet { members: Vec::new(), seen: HashSet::new() }
    }

    /// True when the candidate's signature was not seen before.
    fn offer(&mut self, c: Candidate) -> bool {
        if !self.seen.insert(c.sig.clone()) {
            return false;
        }
        self.members.push(c);
        true
    }

    fn commit(&mut self, beam_width: usize) {
        self.members.sort_by(tie_break);
        self.members.truncate(beam_width);
    }
}

/// Grow alignments between `new` and the store's patterns by staged search.
///
/// Stage 0 holds the trivial alignment of the query alone; each later stage
/// matches every retained candidate against every stored pattern, merges the
/// returned hits, and keeps the best `beam_width` candidates. The best
/// `max_alignments` alignments seen anywhere are returned in the global
/// order. An empty store yields only the trivial alignment.
pub fn build_alignments(
    new: PatternRef,
    store: &Store,
    params: &SearchParams,
) -> Result<Vec<ScoredAlignment>> {
    build_alignments_traced(new, store, params).map(|(results, _)| results)
}

/// [`build_alignments`] plus the number of stages the search ran.
pub fn build_alignments_traced(
    new: PatternRef,
    store: &Store,
    params: &SearchParams,
) -> Result<(Vec<ScoredAlignment>, usize)> {
    params.validate()?;
    if new.role() != Role::New {
        return Err(Error::Invalid(format!("pattern {:?} is not a query pattern", new.pid())));
    }

    let cost = store_cost(store);
    let trivial = Alignment::trivial(new)?;
    let seed = Candidate::new(score(&trivial, store)?);

    let mut beam = CandidateSet::new();
    let mut best: Vec<Candidate> = vec![Candidate::new(seed.scored.clone())];
    beam.offer(seed);
    beam.commit(params.beam_width);

    let mut stages_run = 0;
    for _stage in 0..params.max_stages {
        stages_run += 1;
        let mut fresh: Vec<Candidate> = Vec::new();
        for member in &beam.members {
            let desc = member.scored.alignment.column_descendants();
            for target in store.patterns() {
                if member.scored.alignment.instances_of(target.pid())
                    >= params.max_instances_per_pattern
                {
                    continue;
                }
                let hits = crate::matcher::match_alignment_with(
                    &member.scored.alignment,
                    &desc,
                    target,
                    &cost,
                    params.depth,
                    params.depth,
                );
                for hit in &hits {
                    let merged =
                        match merge(&member.scored.alignment, target, hit, params.max_instances_per_pattern) {
                            Ok(a) => a,
                            Err(Error::InvalidHit(_)) => continue,
                            Err(e) => return Err(e),
                        };
                    let scored = score(&merged, store)?;
                    fresh.push(Candidate::new(scored));
                }
            }
        }

        let mut added = false;
        for c in fresh {
            let keep = c.clone();
            if beam.offer(c) {
                added = true;
                best.push(keep);
            }
        }
        if !added {
            break;
        }
        beam.commit(params.beam_width);
        best.sort_by(tie_break);
        best.truncate(params.max_alignments.max(params.beam_width));
    }

    best.sort_by(tie_break);
    let kept = drop_dominated(best);
    let results = kept.into_iter().take(params.max_alignments).map(|c| c.scored).collect();
    Ok((results, stages_run))
}

/// Remove candidates made redundant by a better-ranked candidate. The best
/// candidate can never be dominated, so the top of the list is untouched.
fn drop_dominated(sorted: Vec<Candidate>) -> Vec<Candidate> {
    let mut kept: Vec<Candidate> = Vec::with_capacity(sorted.len());
    for c in sorted {
        if !kept.iter().any(|k| k.dominates(&c)) {
            kept.push(c);
        }
    }
    kept
}
