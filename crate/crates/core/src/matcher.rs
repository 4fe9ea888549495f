//! Dynamic-programming search for good full and partial ordered matches.
//!
//! The same k-best machinery matches a plain symbol sequence or the column
//! structure of a partially built alignment against a stored pattern. Each
//! cell of the table keeps up to `depth` alternative partial matches, so the
//! search can surface many distinct hits rather than the single best one.

use crate::alignment::{Alignment, DescendantSets};
use crate::error::{Error, Result};
use crate::pattern::{Pattern, Role};
use crate::symbol::Symbol;

/// One ordered match between a driving side and a target pattern.
///
/// `pairs` holds (driving slot, target position); slots are query positions
/// for sequence matching and column indices for alignment matching. Pairs
/// rise strictly in both coordinates and every pair joins equal symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchHit {
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
}

/// How the driving side exposes its slots to the matcher.
trait DrivingView {
    fn len(&self) -> usize;
    fn symbol(&self, slot: usize) -> Symbol;
    /// May the target claim this slot? `first` marks the target's opening
    /// symbol, which carries its identification.
    fn admits(&self, slot: usize, first: bool) -> bool;
    /// May `b` come after `a` in one chain?
    fn can_precede(&self, a: usize, b: usize) -> bool;
}

struct SeqView<'a> {
    symbols: &'a [Symbol],
}

impl DrivingView for SeqView<'_> {
    fn len(&self) -> usize {
        self.symbols.len()
    }
    fn symbol(&self, slot: usize) -> Symbol {
        self.symbols[slot]
    }
    fn admits(&self, _slot: usize, _first: bool) -> bool {
        true
    }
    fn can_precede(&self, a: usize, b: usize) -> bool {
        a < b
    }
}

/// Columns of an alignment, with the slots a new row for `target_pid` may
/// join. A column is closed once its query symbol is matched (the query
/// symbol's information is already encoded) and to rows of a pattern it
/// already holds (aligning a pattern with itself adds nothing). The
/// target's opening symbol may not join a column mixing first and interior
/// positions: that reference slot is already bound to another row.
struct ColumnView<'a> {
    alignment: &'a Alignment,
    desc: &'a DescendantSets,
    open: Vec<bool>,
    open_for_first: Vec<bool>,
    symbols: Vec<Symbol>,
}

impl<'a> ColumnView<'a> {
    fn new(alignment: &'a Alignment, desc: &'a DescendantSets, target_pid: &str) -> Self {
        let n = alignment.columns().len();
        let mut open = Vec::with_capacity(n);
        let mut open_for_first = Vec::with_capacity(n);
        let mut symbols = Vec::with_capacity(n);
        for (ci, col) in alignment.columns().iter().enumerate() {
            let mut ok = true;
            let mut has_new = false;
            let mut at_zero = 0usize;
            for &(r, p) in &col.members {
                let row = &alignment.rows()[r as usize];
                if row.role() == Role::New {
                    has_new = true;
                } else if row.pattern.pid() == target_pid {
                    ok = false;
                }
                if p == 0 {
                    at_zero += 1;
                }
            }
            if has_new && col.len() >= 2 {
                ok = false;
            }
            let unmixed = at_zero == 0 || at_zero == col.len();
            open.push(ok);
            open_for_first.push(ok && unmixed);
            symbols.push(alignment.symbol_at(ci));
        }
        ColumnView { alignment, desc, open, open_for_first, symbols }
    }
}

impl DrivingView for ColumnView<'_> {
    fn len(&self) -> usize {
        self.alignment.columns().len()
    }
    fn symbol(&self, slot: usize) -> Symbol {
        self.symbols[slot]
    }
    fn admits(&self, slot: usize, first: bool) -> bool {
        if first {
            self.open_for_first[slot]
        } else {
            self.open[slot]
        }
    }
    fn can_precede(&self, a: usize, b: usize) -> bool {
        self.desc.can_precede(a, b)
    }
}

#[derive(Clone, Copy)]
struct Alt {
    weight: f64,
    prev: Option<(usize, usize)>, // (cell index, alt index)
}

fn run_match<V: DrivingView>(
    view: &V,
    target: &[Symbol],
    cost: &dyn Fn(Symbol) -> f64,
    depth: usize,
    max_hits: usize,
) -> Vec<MatchHit> {
    // cells: admissible equal-symbol (slot, tpos) pairs, in (tpos, slot) order
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (tpos, &ts) in target.iter().enumerate() {
        for slot in 0..view.len() {
            if view.admits(slot, tpos == 0) && view.symbol(slot) == ts {
                cells.push((slot, tpos));
            }
        }
    }
    cells.sort_unstable_by_key(|&(slot, tpos)| (tpos, slot));

    let mut alts: Vec<Vec<Alt>> = Vec::with_capacity(cells.len());
    for ci in 0..cells.len() {
        let (slot, tpos) = cells[ci];
        let step = cost(view.symbol(slot));
        let mut cand: Vec<Alt> = vec![Alt { weight: step, prev: None }];
        for pj in 0..ci {
            let (pslot, ptpos) = cells[pj];
            if ptpos >= tpos || !view.can_precede(pslot, slot) {
                continue;
            }
            for (ai, alt) in alts[pj].iter().enumerate() {
                cand.push(Alt { weight: alt.weight + step, prev: Some((pj, ai)) });
            }
        }
        cand.sort_by(|x, y| {
            y.weight
                .partial_cmp(&x.weight)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| prev_key(x).cmp(&prev_key(y)))
        });
        cand.truncate(depth);
        alts.push(cand);
    }

    // Reconstruct every retained alternative into a candidate hit.
    let mut hits: Vec<MatchHit> = Vec::new();
    for (ci, cell_alts) in alts.iter().enumerate() {
        for alt in cell_alts {
            let mut chain = Vec::new();
            let mut cur = Some((ci, alt));
            while let Some((c, a)) = cur {
                chain.push(cells[c]);
                cur = a.prev.map(|(pc, pa)| (pc, &alts[pc][pa]));
            }
            let weight = alt.weight;
            chain.reverse();
            // The DP checks consecutive compatibility; a partial order also
            // needs every earlier slot compatible with every later one.
            if chain_consistent(view, &chain) {
                hits.push(MatchHit { pairs: chain, weight });
            }
        }
    }

    hits.sort_by(|x, y| {
        y.weight
            .partial_cmp(&x.weight)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| x.pairs.cmp(&y.pairs))
    });
    hits.truncate(max_hits);
    hits
}

fn prev_key(a: &Alt) -> (usize, usize) {
    a.prev.unwrap_or((usize::MAX, usize::MAX))
}

fn chain_consistent<V: DrivingView>(view: &V, chain: &[(usize, usize)]) -> bool {
    for i in 0..chain.len() {
        for j in (i + 1)..chain.len() {
            if !view.can_precede(chain[i].0, chain[j].0) {
                return false;
            }
        }
    }
    true
}

/// Find up to `max_hits` ordered matches between two symbol sequences,
/// best weight first. Weight is the summed cost of matched query symbols,
/// so under a store-derived cost function rare symbols dominate.
pub fn pairwise_match(
    query: &[Symbol],
    target: &[Symbol],
    cost: &dyn Fn(Symbol) -> f64,
    depth: usize,
    max_hits: usize,
) -> Result<Vec<MatchHit>> {
    if query.is_empty() {
        return Err(Error::EmptyInput("query"));
    }
    if target.is_empty() {
        return Err(Error::EmptyInput("target"));
    }
    if depth < 1 || max_hits < 1 {
        return Err(Error::Invalid("depth and max_hits must be >= 1".into()));
    }
    let view = SeqView { symbols: query };
    Ok(run_match(&view, target, cost, depth, max_hits))
}

/// Match a stored pattern against the open columns of an alignment.
/// Pairs map column indices to target positions.
pub fn match_alignment(
    alignment: &Alignment,
    target: &Pattern,
    cost: &dyn Fn(Symbol) -> f64,
    depth: usize,
    max_hits: usize,
) -> Vec<MatchHit> {
    let desc = alignment.column_descendants();
    match_alignment_with(alignment, &desc, target, cost, depth, max_hits)
}

/// As [`match_alignment`], reusing a precomputed descendant relation so one
/// alignment can be matched against many patterns cheaply.
pub fn match_alignment_with(
    alignment: &Alignment,
    desc: &DescendantSets,
    target: &Pattern,
    cost: &dyn Fn(Symbol) -> f64,
    depth: usize,
    max_hits: usize,
) -> Vec<MatchHit> {
    let view = ColumnView::new(alignment, desc, target.pid());
    run_match(&view, target.symbols(), cost, depth, max_hits)
}
