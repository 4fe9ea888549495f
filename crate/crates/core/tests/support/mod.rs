#![allow(dead_code)]

//! Shared test machinery: fixture loading, random micro-instances, and an
//! exhaustive enumerator used as the search oracle.

use std::collections::HashSet;

use aligndb::bench::SeededRng;
use aligndb::kb::parse_pattern_file;
use aligndb::{
    build_store, merge, score, Alignment, MatchHit, Pattern, PatternRef, Store, Symbol,
    SymbolTable,
};

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

pub fn load_store(name: &str, table: &mut SymbolTable) -> Store {
    let patterns = parse_pattern_file(&data(name), table).unwrap();
    build_store(patterns).unwrap()
}

pub fn query(table: &mut SymbolTable, text: &str) -> PatternRef {
    PatternRef::new(Pattern::new_query("query", table.intern_seq(text).unwrap()).unwrap())
}

/// Split a small CSV fixture; good enough for test data without quoting.
pub fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header: Vec<String> =
        lines.next().unwrap().split(',').map(|s| s.trim().to_string()).collect();
    let rows = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|s| s.trim().to_string()).collect())
        .collect();
    (header, rows)
}

/// Every non-empty chain of (column, target position) cells with equal
/// symbols, strictly rising on the target and mutually orderable on the
/// driving side. Brute force; micro inputs only.
pub fn all_chains(a: &Alignment, target: &Pattern) -> Vec<Vec<(usize, usize)>> {
    let desc = a.column_descendants();
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (tpos, &ts) in target.symbols().iter().enumerate() {
        for col in 0..a.columns().len() {
            if a.symbol_at(col) == ts {
                cells.push((col, tpos));
            }
        }
    }
    cells.sort_unstable_by_key(|&(c, t)| (t, c));

    let mut out = Vec::new();
    let mut chain: Vec<(usize, usize)> = Vec::new();
    fn extend(
        cells: &[(usize, usize)],
        from: usize,
        chain: &mut Vec<(usize, usize)>,
        desc: &aligndb::alignment::DescendantSets,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        for i in from..cells.len() {
            let (c, t) = cells[i];
            if let Some(&(_, lt)) = chain.last() {
                if t <= lt {
                    continue;
                }
            }
            if !chain.iter().all(|&(pc, _)| desc.can_precede(pc, c)) {
                continue;
            }
            chain.push((c, t));
            out.push(chain.clone());
            extend(cells, i + 1, chain, desc, out);
            chain.pop();
        }
    }
    extend(&cells, 0, &mut chain, &desc, &mut out);
    out
}

/// Exhaustive search over everything reachable by merging, returning the
/// best compression difference. Independent of the beam, the matcher's
/// alternatives bound, and hit ranking. Degenerate instances full of one
/// repeated symbol have astronomically many reachable states; the budget
/// counts merge attempts and `None` means the instance is not exhaustively
/// checkable in reasonable time.
pub fn oracle_best_cd(
    new: PatternRef,
    store: &Store,
    max_instances: usize,
    budget: usize,
) -> Option<f64> {
    let trivial = Alignment::trivial(new).unwrap();
    let mut best = score(&trivial, store).unwrap().cd;
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(trivial.signature());
    let mut stack = vec![trivial];
    let mut work = 0usize;
    while let Some(a) = stack.pop() {
        for target in store.patterns() {
            if a.instances_of(target.pid()) >= max_instances {
                continue;
            }
            for pairs in all_chains(&a, target) {
                work += 1;
                if work > budget {
                    return None;
                }
                let hit = MatchHit { pairs, weight: 0.0 };
                let Ok(m) = merge(&a, target, &hit, max_instances) else { continue };
                if seen.insert(m.signature()) {
                    let cd = score(&m, store).unwrap().cd;
                    if cd > best {
                        best = cd;
                    }
                    stack.push(m);
                }
            }
        }
    }
    Some(best)
}

/// Brute-force maximum weight over all common subsequences.
pub fn brute_max_weight(q: &[Symbol], t: &[Symbol], cost: &dyn Fn(Symbol) -> f64) -> f64 {
    fn rec(q: &[Symbol], t: &[Symbol], qi: usize, ti: usize, cost: &dyn Fn(Symbol) -> f64) -> f64 {
        let mut best = 0.0f64;
        for i in qi..q.len() {
            for j in ti..t.len() {
                if q[i] == t[j] {
                    let w = cost(q[i]) + rec(q, t, i + 1, j + 1, cost);
                    if w > best {
                        best = w;
                    }
                }
            }
        }
        best
    }
    rec(q, t, 0, 0, cost)
}

/// One random micro-instance: up to three stored patterns and a short query
/// over a small alphabet.
pub struct MicroInstance {
    pub table: SymbolTable,
    pub store: Store,
    pub new: PatternRef,
}

pub fn micro_instance(rng: &mut SeededRng) -> MicroInstance {
    let mut table = SymbolTable::new();
    let alphabet_size = rng.range(3, 4);
    let alphabet: Vec<Symbol> = (0..alphabet_size)
        .map(|i| table.intern(&format!("s{i}")).unwrap())
        .collect();
    let n_patterns = rng.range(1, 3);
    let patterns: Vec<Pattern> = (0..n_patterns)
        .map(|i| {
            let len = rng.range(1, 4);
            let syms: Vec<Symbol> = (0..len).map(|_| alphabet[rng.below(alphabet_size)]).collect();
            Pattern::new_old(format!("p{i}"), syms, rng.range(1, 3) as u32).unwrap()
        })
        .collect();
    let store = build_store(patterns).unwrap();
    let qlen = rng.range(1, 5);
    let qsyms: Vec<Symbol> = (0..qlen).map(|_| alphabet[rng.below(alphabet_size)]).collect();
    let new = PatternRef::new(Pattern::new_query("q", qsyms).unwrap());
    MicroInstance { table, store, new }
}
