//! The frozen corpus of Old patterns plus the occurrence statistics that
//! drive bit costs. A store never changes once queries begin.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pattern::{Pattern, PatternRef, Role};
use crate::symbol::Symbol;

#[derive(Debug, Clone)]
pub struct Store {
    patterns: Vec<PatternRef>,
    by_pid: HashMap<String, usize>,
    /// Frequency-weighted occurrence count per symbol id, fixed at build time.
    sym_count: Vec<u64>,
    total_sym: u64,
    total_freq: u64,
    distinct: u64,
}

/// Build a store from Old patterns, computing all occurrence statistics.
///
/// Each occurrence of a symbol in a pattern contributes that pattern's
/// frequency to the symbol's count.
pub fn build_store(patterns: Vec<Pattern>) -> Result<Store> {
    let mut by_pid = HashMap::new();
    let mut sym_count: Vec<u64> = Vec::new();
    let mut total_sym = 0u64;
    let mut total_freq = 0u64;
    let mut refs = Vec::with_capacity(patterns.len());

    for (i, p) in patterns.into_iter().enumerate() {
        if p.role() != Role::Old {
            return Err(Error::NewPatternInStore(p.pid().to_string()));
        }
        if by_pid.insert(p.pid().to_string(), i).is_some() {
            return Err(Error::DuplicatePid(p.pid().to_string()));
        }
        let f = p.frequency() as u64;
        total_freq += f;
        for &s in p.symbols() {
            let idx = s.sid() as usize;
            if idx >= sym_count.len() {
                sym_count.resize(idx + 1, 0);
            }
            sym_count[idx] += f;
            total_sym += f;
        }
        refs.push(PatternRef::new(p));
    }

    let distinct = sym_count.iter().filter(|&&c| c > 0).count() as u64;
    Ok(Store { patterns: refs, by_pid, sym_count, total_sym, total_freq, distinct })
}

impl Store {
    pub fn patterns(&self) -> &[PatternRef] {
        &self.patterns
    }

    pub fn get(&self, pid: &str) -> Option<&PatternRef> {
        self.by_pid.get(pid).map(|&i| &self.patterns[i])
    }

    pub fn sym_count(&self, s: Symbol) -> u64 {
        self.sym_count.get(s.sid() as usize).copied().unwrap_or(0)
    }

    pub fn total_sym(&self) -> u64 {
        self.total_sym
    }

    pub fn total_freq(&self) -> u64 {
        self.total_freq
    }

    /// Number of distinct symbols occurring in the store.
    pub fn distinct_symbols(&self) -> u64 {
        self.distinct
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Total symbol instances across all patterns, ignoring frequency.
    pub fn symbol_positions(&self) -> usize {
        self.patterns.iter().map(|p| p.len()).sum()
    }
}
