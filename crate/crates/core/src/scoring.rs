//! Compression-based evaluation of alignments.
//!
//! An alignment earns bits for every query symbol it matches, and for
//! columns where one stored row fills a slot inside another along an
//! established reference; it pays an identification code per stored row
//! and a small charge for cells stacked to no effect. The difference is
//! the alignment's merit, and relative probabilities follow from it.

use std::collections::{HashMap, HashSet};

use crate::alignment::{check_alignment, Alignment};
use crate::error::{Error, Result};
use crate::pattern::Role;
use crate::store::Store;
use crate::symbol::Symbol;

/// Weight applied to bits saved by columns shared between Old rows. Matched
/// query symbols always count at full weight.
pub const SHARE_WEIGHT: f64 = 0.3;

/// Charge for stored-row cells stacked into a column beyond the one share
/// it can earn. Co-location that explains nothing is not free.
pub const SHARE_WASTE: f64 = 0.1;

/// An alignment together with its bit accounting.
#[derive(Debug, Clone)]
pub struct ScoredAlignment {
    pub alignment: Alignment,
    /// Raw bits of the query pattern.
    pub bn: f64,
    /// Net cost of encoding the query via the alignment (may go negative
    /// when sharing between stored rows dominates).
    pub be: f64,
    /// Compression difference, bn - be. Higher is better.
    pub cd: f64,
    /// True when every query position shares a column with a stored row.
    pub full_match: bool,
    pub rel_prob: Option<f64>,
}

/// Symbols a query inherits from the stored rows of an alignment: every
/// stored-row cell in a column holding no query symbol, in column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceSet {
    pub inferred: Vec<(Symbol, String)>,
}

/// Bit-cost terms summed in sorted order, so that two alignments made of
/// the same parts score bit-identically no matter how their columns are
/// arranged.
#[derive(Default)]
struct Terms(Vec<f64>);

impl Terms {
    fn add(&mut self, x: f64) {
        self.0.push(x);
    }
    fn sum(mut self) -> f64 {
        self.0.sort_by(|a, b| a.partial_cmp(b).unwrap());
        self.0.iter().sum()
    }
}

/// Bits needed to name `s` against the store's statistics, with add-one
/// smoothing so unseen query symbols still get a finite cost.
pub fn symbol_cost(s: Symbol, store: &Store) -> f64 {
    let denom = store.total_sym() + store.distinct_symbols();
    if denom == 0 {
        return 0.0;
    }
    let num = store.sym_count(s) + 1;
    -((num as f64) / (denom as f64)).log2()
}

/// Cost closure borrowing the store, for handing to the matcher.
pub fn store_cost(store: &Store) -> impl Fn(Symbol) -> f64 + '_ {
    move |s| symbol_cost(s, store)
}

/// Identification code for one use of a stored pattern.
fn row_code(frequency: u32, store: &Store) -> f64 {
    let total = store.total_freq();
    if total == 0 {
        return 0.0;
    }
    -((frequency as f64) / (total as f64)).log2()
}

/// Score a valid alignment against a frozen store.
pub fn score(a: &Alignment, store: &Store) -> Result<ScoredAlignment> {
    let (ok, violations) = check_alignment(a);
    if !ok {
        return Err(Error::InvalidAlignment(violations.join("; ")));
    }

    let new_len = a.new_row().pattern.len();
    let mut bn = 0.0;
    for &s in a.new_row().pattern.symbols() {
        bn += symbol_cost(s, store);
    }

    // Old-row cells per column, flagged interior (not the row's first or
    // last position).
    let old_cells: Vec<Vec<(u32, u32, bool)>> = a
        .columns()
        .iter()
        .map(|col| {
            col.members
                .iter()
                .filter(|&&(r, _)| a.rows()[r as usize].role() == Role::Old)
                .map(|&(r, p)| {
                    let len = a.rows()[r as usize].pattern.len();
                    (r, p, p != 0 && (p as usize) != len - 1)
                })
                .collect()
        })
        .collect();

    // positions sitting in single-member columns: explained by nobody
    let mut unmatched: Vec<Vec<bool>> =
        a.rows().iter().map(|r| vec![false; r.pattern.len()]).collect();
    for col in a.columns() {
        if col.len() == 1 {
            let (r, p) = col.members[0];
            unmatched[r as usize][p as usize] = true;
        }
    }

    // Shared columns per row pair, in column order. A pair is a reference
    // pair when the rows share at least two columns and no gap between
    // consecutive shared columns has unexplained material on both sides at
    // once: a record filling a schema's empty slot passes, two sibling
    // records with their own values in every field do not.
    let mut pair_cols: HashMap<(u32, u32), Vec<(u32, u32)>> = HashMap::new();
    for cells in &old_cells {
        for (i, &(r1, p1, _)) in cells.iter().enumerate() {
            for &(r2, p2, _) in &cells[i + 1..] {
                let key = if r1 < r2 { (r1, r2) } else { (r2, r1) };
                let pos = if r1 < r2 { (p1, p2) } else { (p2, p1) };
                pair_cols.entry(key).or_default().push(pos);
            }
        }
    }
    let mut reference: HashSet<(u32, u32)> = HashSet::new();
    for (&(r1, r2), cols) in &mut pair_cols {
        if cols.len() < 2 {
            continue;
        }
        cols.sort_unstable();
        let len1 = a.rows()[r1 as usize].pattern.len() as u32;
        let len2 = a.rows()[r2 as usize].pattern.len() as u32;
        let gap_material = |row: u32, from: i64, to: i64| -> bool {
            (from + 1..to).any(|p| unmatched[row as usize][p as usize])
        };
        // a pair stays a reference pair only if no gap, including the
        // stretches before the first and after the last shared column,
        // has unexplained cells on both sides
        let first = cols[0];
        let last = cols[cols.len() - 1];
        let mut parallel = gap_material(r1, -1, first.0 as i64) && gap_material(r2, -1, first.1 as i64);
        parallel |= gap_material(r1, last.0 as i64, len1 as i64)
            && gap_material(r2, last.1 as i64, len2 as i64);
        parallel |= cols.windows(2).any(|w| {
            gap_material(r1, w[0].0 as i64, w[1].0 as i64)
                && gap_material(r2, w[0].1 as i64, w[1].1 as i64)
        });
        if !parallel {
            reference.insert((r1, r2));
        }
    }

    // Sharing pays only near the query: a row earns when it covers a query
    // symbol itself or references a row that does. Extra copies of the
    // stored hierarchy floating free of the query would otherwise mint
    // bits out of each other.
    let mut covers_new = vec![false; a.rows().len()];
    for col in a.columns() {
        if col.members.iter().any(|&(r, _)| a.rows()[r as usize].role() == Role::New) {
            for &(r, _) in &col.members {
                if a.rows()[r as usize].role() == Role::Old {
                    covers_new[r as usize] = true;
                }
            }
        }
    }
    let mut relevant = covers_new.clone();
    for &(r1, r2) in &reference {
        if covers_new[r2 as usize] {
            relevant[r1 as usize] = true;
        }
        if covers_new[r1 as usize] {
            relevant[r2 as usize] = true;
        }
    }

    let mut covered = vec![false; new_len];
    let mut coverage = Terms::default();
    let mut shared = Terms::default();
    let mut waste = Terms::default();
    for (ci, col) in a.columns().iter().enumerate() {
        let cost = symbol_cost(a.symbol_at(ci), store);
        let new_pos = col
            .members
            .iter()
            .find(|&&(r, _)| a.rows()[r as usize].role() == Role::New)
            .map(|&(_, p)| p);
        let cells = &old_cells[ci];
        if let Some(p) = new_pos {
            if !cells.is_empty() {
                covered[p as usize] = true;
                coverage.add(cost);
            }
        }
        // a shared column saves one copy of its symbol when it fills a slot
        // inside a reference pair of query-relevant rows; stacked cells
        // beyond that are waste
        let mut earns = false;
        'pairs: for (i, &(r1, _, int1)) in cells.iter().enumerate() {
            for &(r2, _, int2) in &cells[i + 1..] {
                if (int1 || int2)
                    && relevant[r1 as usize]
                    && relevant[r2 as usize]
                    && reference.contains(&(r1.min(r2), r1.max(r2)))
                {
                    earns = true;
                    break 'pairs;
                }
            }
        }
        if cells.len() >= 2 {
            let earned = usize::from(earns);
            if earned == 1 {
                shared.add(cost);
            }
            for _ in 0..cells.len() - 1 - earned {
                waste.add(cost);
            }
        }
    }

    let mut codes = Terms::default();
    for row in a.old_rows() {
        codes.add(row_code(row.pattern.frequency(), store));
    }

    let cd = coverage.sum() + SHARE_WEIGHT * shared.sum() - SHARE_WASTE * waste.sum()
        - codes.sum();
    let full_match = covered.iter().all(|&c| c);
    Ok(ScoredAlignment { alignment: a.clone(), bn, be: bn - cd, cd, full_match, rel_prob: None })
}

/// Fill in relative probabilities: 2^cd normalized over the list.
pub fn relative_probabilities(mut results: Vec<ScoredAlignment>) -> Result<Vec<ScoredAlignment>> {
    if results.is_empty() {
        return Err(Error::EmptyInput("results"));
    }
    let max_cd = results.iter().map(|r| r.cd).fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = results.iter().map(|r| (r.cd - max_cd).exp2()).collect();
    let total: f64 = weights.iter().sum();
    for (r, w) in results.iter_mut().zip(weights) {
        r.rel_prob = Some(w / total);
    }
    Ok(results)
}

/// Extract the inherited symbols of a scored alignment.
pub fn infer_attributes(sa: &ScoredAlignment) -> InferenceSet {
    let a = &sa.alignment;
    let mut inferred = Vec::new();
    for col in a.columns() {
        if col.members.iter().any(|&(r, _)| a.rows()[r as usize].role() == Role::New) {
            continue;
        }
        for &(r, p) in &col.members {
            let row = &a.rows()[r as usize];
            inferred.push((row.pattern.symbols()[p as usize], row.pattern.pid().to_string()));
        }
    }
    InferenceSet { inferred }
}
