//! Multiple alignments: one query (New) row plus any number of stored (Old)
//! pattern rows, partitioned into ordered columns of identical symbols.
//!
//! The stored column order is one linear extension of the partial order the
//! row chains induce; [`Alignment::canonicalize_columns`] recomputes it in a
//! path- and row-order-independent way so that structurally equal alignments
//! compare equal.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pattern::{PatternRef, Role};
use crate::symbol::Symbol;

/// One pattern instance taking part in an alignment. The instance id is the
/// row's index; the same Old pattern may occupy several rows.
#[derive(Debug, Clone)]
pub struct RowEntry {
    pub pattern: PatternRef,
}

impl RowEntry {
    pub fn role(&self) -> Role {
        self.pattern.role()
    }
}

/// A column: the set of (row, position) cells aligned together. Members are
/// kept sorted by row index. All member cells hold the same symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub members: Vec<(u32, u32)>,
}

impl Column {
    pub fn single(row: u32, pos: u32) -> Self {
        Column { members: vec![(row, pos)] }
    }

    pub fn position_of(&self, row: u32) -> Option<u32> {
        self.members.iter().find(|&&(r, _)| r == row).map(|&(_, p)| p)
    }

    pub fn has_row(&self, row: u32) -> bool {
        self.members.iter().any(|&(r, _)| r == row)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Alignment {
    rows: Vec<RowEntry>,
    columns: Vec<Column>,
}

impl Alignment {
    /// The one-row alignment of a query pattern: each symbol its own column.
    pub fn trivial(new: PatternRef) -> Result<Self> {
        if new.role() != Role::New {
            return Err(Error::Invalid(format!("pattern {:?} is not a query pattern", new.pid())));
        }
        let columns = (0..new.len() as u32).map(|p| Column::single(0, p)).collect();
        Ok(Alignment { rows: vec![RowEntry { pattern: new }], columns })
    }

    /// Assemble an alignment from parts; the column order is canonicalized.
    /// Fails when the columns cannot be ordered without crossing a row.
    pub fn from_parts(rows: Vec<RowEntry>, columns: Vec<Column>) -> Result<Self> {
        let mut a = Alignment { rows, columns };
        for c in &mut a.columns {
            c.members.sort_unstable();
        }
        a.canonicalize_columns()?;
        let (ok, violations) = check_alignment(&a);
        if !ok {
            return Err(Error::InvalidAlignment(violations.join("; ")));
        }
        Ok(a)
    }

    pub fn rows(&self) -> &[RowEntry] {
        &self.rows
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn new_row(&self) -> &RowEntry {
        &self.rows[0]
    }

    pub fn old_rows(&self) -> impl Iterator<Item = &RowEntry> {
        self.rows.iter().skip(1)
    }

    /// Number of rows holding the given stored pattern.
    pub fn instances_of(&self, pid: &str) -> usize {
        self.rows.iter().filter(|r| r.pattern.pid() == pid).count()
    }

    pub fn symbol_at(&self, col: usize) -> Symbol {
        let (r, p) = self.columns[col].members[0];
        self.rows[r as usize].pattern.symbols()[p as usize]
    }

    /// Recompute the stored column order as the canonical linear extension of
    /// the row-chain partial order. Ready columns are emitted smallest first
    /// by a key built from (role, pid, position) triples, which makes the
    /// result independent of row order and of the order merges happened in.
    pub fn canonicalize_columns(&mut self) -> Result<()> {
        let n = self.columns.len();
        let mut next_pos: Vec<u32> = vec![0; self.rows.len()];
        let mut emitted: Vec<bool> = vec![false; n];
        let mut order: Vec<usize> = Vec::with_capacity(n);

        let keys: Vec<Vec<(u8, &str, u32)>> = self
            .columns
            .iter()
            .map(|c| {
                let mut k: Vec<(u8, &str, u32)> = c
                    .members
                    .iter()
                    .map(|&(r, p)| {
                        let row = &self.rows[r as usize];
                        let rank = if row.role() == Role::New { 0 } else { 1 };
                        (rank, row.pattern.pid(), p)
                    })
                    .collect();
                k.sort_unstable();
                k
            })
            .collect();

        for _ in 0..n {
            let mut best: Option<usize> = None;
            for c in 0..n {
                if emitted[c] {
                    continue;
                }
                let ready = self.columns[c].members.iter().all(|&(r, p)| next_pos[r as usize] == p);
                if !ready {
                    continue;
                }
                best = match best {
                    None => Some(c),
                    Some(b) => {
                        if (&keys[c], &self.columns[c].members) < (&keys[b], &self.columns[b].members) {
                            Some(c)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            match best {
                Some(c) => {
                    emitted[c] = true;
                    for &(r, _) in &self.columns[c].members {
                        next_pos[r as usize] += 1;
                    }
                    order.push(c);
                }
                None => {
                    return Err(Error::InvalidAlignment("columns cannot be ordered without crossing".into()))
                }
            }
        }

        let mut reordered = Vec::with_capacity(n);
        for &c in &order {
            reordered.push(self.columns[c].clone());
        }
        self.columns = reordered;
        Ok(())
    }

    /// Map (row, position) -> column index under the stored order.
    pub fn cell_to_column(&self) -> Vec<Vec<usize>> {
        let mut map: Vec<Vec<usize>> = self.rows.iter().map(|r| vec![usize::MAX; r.pattern.len()]).collect();
        for (ci, c) in self.columns.iter().enumerate() {
            for &(r, p) in &c.members {
                map[r as usize][p as usize] = ci;
            }
        }
        map
    }

    /// Descendant sets over the column DAG: `desc[c]` holds every column that
    /// must come after column `c` in any linear extension.
    pub fn column_descendants(&self) -> DescendantSets {
        let n = self.columns.len();
        let words = n.div_ceil(64);
        let cell_map = self.cell_to_column();
        let mut desc = vec![0u64; n * words];
        // Stored order is a linear extension, so a reverse sweep sees all
        // successors of a column before the column itself.
        for ci in (0..n).rev() {
            let mut acc = vec![0u64; words];
            for &(r, p) in &self.columns[ci].members {
                let row_map = &cell_map[r as usize];
                if (p as usize + 1) < row_map.len() {
                    let succ = row_map[p as usize + 1];
                    acc[succ / 64] |= 1 << (succ % 64);
                    let base = succ * words;
                    for w in 0..words {
                        acc[w] |= desc[base + w];
                    }
                }
            }
            desc[ci * words..(ci + 1) * words].copy_from_slice(&acc);
        }
        DescendantSets { words, bits: desc }
    }

    /// Reorder the Old rows by `perm` (a permutation of 1..rows). Columns keep
    /// their order; member row indices are remapped. Used to check that row
    /// order carries no meaning.
    pub fn permute_old_rows(&self, perm: &[usize]) -> Result<Alignment> {
        if perm.len() != self.rows.len() - 1 {
            return Err(Error::Invalid("permutation length mismatch".into()));
        }
        let mut new_rows = vec![self.rows[0].clone()];
        for &old_idx in perm {
            new_rows.push(self.rows[old_idx].clone());
        }
        // map old row index -> new row index
        let mut remap = vec![0u32; self.rows.len()];
        for (new_idx, &old_idx) in perm.iter().enumerate() {
            remap[old_idx] = new_idx as u32 + 1;
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut members: Vec<(u32, u32)> =
                    c.members.iter().map(|&(r, p)| (remap[r as usize], p)).collect();
                members.sort_unstable();
                Column { members }
            })
            .collect();
        Ok(Alignment { rows: new_rows, columns })
    }

    /// Canonical structural key: row pids with instances numbered by first
    /// appearance in column order, plus every column's (row, position) set.
    /// Two alignments get equal signatures exactly when they are the same
    /// arrangement up to renaming of instance ids.
    pub fn signature(&self) -> String {
        use std::fmt::Write;
        // canonical numbering: first column appearance decides instance order
        let mut first_col: Vec<usize> = vec![usize::MAX; self.rows.len()];
        for (ci, c) in self.columns.iter().enumerate() {
            for &(r, _) in &c.members {
                if first_col[r as usize] == usize::MAX {
                    first_col[r as usize] = ci;
                }
            }
        }
        let mut order: Vec<usize> = (1..self.rows.len()).collect();
        order.sort_by(|&a, &b| {
            let ka = (self.rows[a].pattern.pid(), first_col[a]);
            let kb = (self.rows[b].pattern.pid(), first_col[b]);
            ka.cmp(&kb)
        });
        let mut canon = vec![0usize; self.rows.len()];
        for (rank, &r) in order.iter().enumerate() {
            canon[r] = rank + 1;
        }
        let mut out = String::new();
        out.push_str("rows:");
        for &r in &order {
            let _ = write!(out, "{},", self.rows[r].pattern.pid());
        }
        out.push_str("|cols:");
        for c in &self.columns {
            let mut cells: Vec<(usize, u32)> = c.members.iter().map(|&(r, p)| (canon[r as usize], p)).collect();
            cells.sort_unstable();
            out.push('[');
            for (r, p) in cells {
                let _ = write!(out, "{r}:{p},");
            }
            out.push(']');
        }
        out
    }
}

/// Bitset descendant relation over columns.
pub struct DescendantSets {
    words: usize,
    bits: Vec<u64>,
}

impl DescendantSets {
    /// True when column `b` is required to come after column `a`.
    pub fn must_follow(&self, b: usize, a: usize) -> bool {
        self.bits[a * self.words + b / 64] & (1 << (b % 64)) != 0
    }

    /// True when placing `a` before `b` is consistent with the DAG.
    pub fn can_precede(&self, a: usize, b: usize) -> bool {
        a != b && !self.must_follow(a, b)
    }
}

/// Check every alignment invariant, reporting the violations found.
///
/// Total function: any input yields a verdict. The first entry of the list
/// names the first failing invariant.
pub fn check_alignment(a: &Alignment) -> (bool, Vec<String>) {
    let mut violations = Vec::new();

    if a.rows.is_empty() {
        return (false, vec!["alignment has no rows".into()]);
    }
    if a.rows[0].role() != Role::New {
        violations.push("row 0 is not the New pattern".into());
    }
    let new_count = a.rows.iter().filter(|r| r.role() == Role::New).count();
    if new_count != 1 {
        violations.push(format!("expected exactly one New row, found {new_count}"));
    }

    // every position of every row in exactly one column
    let mut seen: Vec<Vec<u32>> = a.rows.iter().map(|r| vec![0; r.pattern.len()]).collect();
    for c in &a.columns {
        if c.members.is_empty() {
            violations.push("empty column".into());
            continue;
        }
        for &(r, p) in &c.members {
            match seen.get_mut(r as usize).and_then(|v| v.get_mut(p as usize)) {
                Some(slot) => *slot += 1,
                None => violations.push(format!("column cell ({r},{p}) is out of range")),
            }
        }
    }
    for (r, v) in seen.iter().enumerate() {
        for (p, &count) in v.iter().enumerate() {
            if count != 1 {
                violations.push(format!("row {r} position {p} appears in {count} columns"));
            }
        }
    }

    // shared columns hold identical symbols
    for (ci, c) in a.columns.iter().enumerate() {
        let mut sym: Option<Symbol> = None;
        for &(r, p) in &c.members {
            let Some(row) = a.rows.get(r as usize) else { continue };
            let Some(&s) = row.pattern.symbols().get(p as usize) else { continue };
            match sym {
                None => sym = Some(s),
                Some(prev) if prev != s => {
                    violations.push(format!("column {ci} mixes different symbols"));
                    break;
                }
                _ => {}
            }
        }
    }

    // positions strictly increasing along column order: no crossings
    let mut last_pos: HashMap<u32, u32> = HashMap::new();
    for c in &a.columns {
        for &(r, p) in &c.members {
            if let Some(&prev) = last_pos.get(&r) {
                if p <= prev {
                    violations.push(format!("crossing: row {r} position {p} after {prev}"));
                }
            }
            last_pos.insert(r, p);
        }
    }

    (violations.is_empty(), violations)
}

/// Read one symbol per column, in column order.
pub fn project(a: &Alignment) -> Result<Vec<Symbol>> {
    let (ok, violations) = check_alignment(a);
    if !ok {
        return Err(Error::InvalidAlignment(violations.join("; ")));
    }
    Ok((0..a.columns.len()).map(|c| a.symbol_at(c)).collect())
}
