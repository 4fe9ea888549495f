//! Synthetic corpora and timing runs for scaling checks. Generation is
//! fully determined by the seed.

use std::time::Instant;

use crate::builder::build_alignments_traced;
use crate::error::Result;
use crate::params::SearchParams;
use crate::pattern::{Pattern, PatternRef};
use crate::store::build_store;
use crate::symbol::{Symbol, SymbolTable};

/// One bench measurement. `ns` counts query symbols, `os` the total symbol
/// instances across stored patterns.
#[derive(Debug, Clone, Copy)]
pub struct BenchStats {
    pub ns: usize,
    pub os: usize,
    pub seed: u64,
    pub wall_secs: f64,
    pub stages_run: usize,
}

/// splitmix64; enough randomness for corpus generation without pulling in
/// a dependency, and stable across platforms.
pub struct SeededRng(u64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }
}

const ALPHABET: usize = 128;

/// Build a corpus of random patterns totalling about `os` symbols, and a
/// query of exactly `ns` symbols that embeds an ordered sample of one
/// stored pattern, so the search has something real to find.
pub fn generate_corpus(
    ns: usize,
    os: usize,
    seed: u64,
    table: &mut SymbolTable,
) -> Result<(Vec<Pattern>, Vec<Symbol>)> {
    let mut rng = SeededRng::new(seed);
    let alphabet: Vec<Symbol> = (0..ALPHABET)
        .map(|i| table.intern(&format!("w{i}")))
        .collect::<Result<_>>()?;

    let mut patterns = Vec::new();
    let mut total = 0usize;
    while total < os {
        let len = rng.range(6, 10).min(os.saturating_sub(total).max(1));
        let symbols: Vec<Symbol> = (0..len).map(|_| alphabet[rng.below(ALPHABET)]).collect();
        total += symbols.len();
        patterns.push(Pattern::new_old(format!("g{}", patterns.len()), symbols, 1)?);
    }

    // plant an ordered sample of the first pattern inside the query
    let host = patterns[0].symbols().to_vec();
    let planted = (ns / 2).min(host.len()).max(1);
    let mut picks: Vec<usize> = (0..host.len()).collect();
    while picks.len() > planted {
        let i = rng.below(picks.len());
        picks.remove(i);
    }
    let mut query: Vec<Symbol> = picks.iter().map(|&i| host[i]).collect();
    while query.len() < ns {
        let at = rng.below(query.len() + 1);
        query.insert(at, alphabet[rng.below(ALPHABET)]);
    }
    query.truncate(ns);
    Ok((patterns, query))
}

/// Generate, search, and time one corpus.
pub fn run_bench(ns: usize, os: usize, seed: u64, params: &SearchParams) -> Result<BenchStats> {
    let mut table = SymbolTable::new();
    let (patterns, query) = generate_corpus(ns, os, seed, &mut table)?;
    let os_actual = patterns.iter().map(|p| p.len()).sum();
    let store = build_store(patterns)?;
    let new = PatternRef::new(Pattern::new_query("bench-query", query)?);
    let start = Instant::now();
    let (_, stages_run) = build_alignments_traced(new, &store, params)?;
    let wall_secs = start.elapsed().as_secs_f64();
    Ok(BenchStats { ns, os: os_actual, seed, wall_secs, stages_run })
}
