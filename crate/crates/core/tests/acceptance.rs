//! Acceptance suite: the reference scenarios and scaling checks the engine
//! has to reproduce, one test per criterion, each printing a PASS line.

mod support;

use std::collections::HashSet;

use aligndb::bench::{run_bench, SeededRng};
use aligndb::kb::{
    membership_of, parse_rendered, render_alignment, table_to_patterns, Orientation, TableSchema,
};
use aligndb::{
    build_alignments, build_store, check_alignment, infer_attributes, pairwise_match, project,
    query_by_example, score, Alignment, Column, PatternRef, RowEntry, ScoredAlignment,
    SearchParams, Store, SymbolTable,
};
use support::*;

fn pass(n: u32, name: &str) {
    println!("acceptance {n} ({name}): PASS");
}

fn assert_all_valid(results: &[ScoredAlignment]) {
    for sa in results {
        let (ok, v) = check_alignment(&sa.alignment);
        assert!(ok, "invalid alignment in results: {v:?}");
    }
}

fn old_pids(sa: &ScoredAlignment) -> Vec<String> {
    let mut pids: Vec<String> =
        sa.alignment.old_rows().map(|r| r.pattern.pid().to_string()).collect();
    pids.sort();
    pids
}

/// The expected parse, cell for cell.
/// Row order here: query, S, NP, NP, D0, D1, N0, N1, V0.
fn expected_parse(table: &mut SymbolTable, store: &Store, new: PatternRef) -> Alignment {
    let row = |pid: &str| RowEntry { pattern: store.get(pid).unwrap().clone() };
    let rows = vec![
        RowEntry { pattern: new },
        row("S"),
        row("NP"),
        row("NP"),
        row("D0"),
        row("D1"),
        row("N0"),
        row("N1"),
        row("V0"),
    ];
    let _ = table;
    let cols: Vec<Vec<(u32, u32)>> = vec![
        vec![(1, 0)],         // S
        vec![(1, 1), (2, 0)], // NP
        vec![(2, 1), (4, 0)], // D
        vec![(4, 1)],         // 0
        vec![(0, 0), (4, 2)], // this
        vec![(2, 2), (4, 3)], // #D
        vec![(2, 3), (7, 0)], // N
        vec![(7, 1)],         // 1
        vec![(0, 1), (7, 2)], // boy
        vec![(2, 4), (7, 3)], // #N
        vec![(1, 2), (2, 5)], // #NP
        vec![(1, 3), (8, 0)], // V
        vec![(8, 1)],         // 0
        vec![(0, 2), (8, 2)], // loves
        vec![(1, 4), (8, 3)], // #V
        vec![(1, 5), (3, 0)], // NP
        vec![(3, 1), (5, 0)], // D
        vec![(5, 1)],         // 1
        vec![(0, 3), (5, 2)], // that
        vec![(3, 2), (5, 3)], // #D
        vec![(3, 3), (6, 0)], // N
        vec![(6, 1)],         // 0
        vec![(0, 4), (6, 2)], // girl
        vec![(3, 4), (6, 3)], // #N
        vec![(1, 6), (3, 5)], // #NP
        vec![(1, 7)],         // #S
    ];
    let columns = cols.into_iter().map(|members| Column { members }).collect();
    Alignment::from_parts(rows, columns).unwrap()
}

#[test]
fn criterion_1_parse() {
    let mut table = SymbolTable::new();
    let store = load_store("grammar.sp", &mut table);
    let new = query(&mut table, "this boy loves that girl");
    let results = build_alignments(new.clone(), &store, &SearchParams::default()).unwrap();
    assert_all_valid(&results);

    let expected = expected_parse(&mut table, &store, new);
    let top = &results[0];
    assert_eq!(
        top.alignment.signature(),
        expected.signature(),
        "top parse differs from the expected structure; got projection {:?}",
        project(&top.alignment)
            .unwrap()
            .iter()
            .map(|&s| table.text(s))
            .collect::<Vec<_>>()
    );
    // the projection reads the expected columns in order
    let proj: Vec<&str> =
        project(&top.alignment).unwrap().iter().map(|&s| table.text(s)).collect();
    assert_eq!(&proj[..6], ["S", "NP", "D", "0", "this", "#D"]);
    pass(1, "grammar parse reproduced cell for cell");
}

fn staff_store(table: &mut SymbolTable) -> Store {
    let (header, rows) = csv_rows(&data("staff.csv"));
    let schema = TableSchema::new("staff", header).unwrap();
    let patterns = table_to_patterns(&schema, &rows, table).unwrap();
    // spot-check the encoding of the first row against the reference text
    let texts: Vec<&str> = patterns[0].symbols().iter().map(|&s| table.text(s)).collect();
    assert_eq!(
        texts,
        [
            "<staff>", "0", "<staff_no>", "SL21", "</staff_no>", "<first_name>", "John",
            "</first_name>", "<last_name>", "White", "</last_name>", "<position>", "Manager",
            "</position>", "<sex>", "M", "</sex>", "<dob>", "1-Oct-45", "</dob>", "<salary>",
            "30000", "</salary>", "<branch_no>", "B005", "</branch_no>", "</staff>"
        ]
    );
    let store = build_store(patterns).unwrap();
    // every record contributes one <staff>, and record values are rarer
    // than structure, so they cost more bits
    let staff_sym = table.lookup("<staff>").unwrap();
    assert_eq!(store.sym_count(staff_sym), 6);
    let sg37 = table.lookup("SG37").unwrap();
    assert!(aligndb::symbol_cost(staff_sym, &store) < aligndb::symbol_cost(sg37, &store));
    store
}

fn result_staff_no(sa: &ScoredAlignment, table: &SymbolTable, wanted: &[&str]) -> String {
    for row in sa.alignment.old_rows() {
        for &s in row.pattern.symbols() {
            let t = table.text(s);
            if wanted.contains(&t) {
                return t.to_string();
            }
        }
    }
    panic!("no staff number found in result");
}

#[test]
fn criterion_2_query_by_example() {
    let mut table = SymbolTable::new();
    let store = staff_store(&mut table);
    let wanted = ["SL21", "SG37", "SG14", "SA9", "SG5", "SL41"];

    // the matcher alone already pairs every query symbol with the SG37 record
    {
        let new = query(&mut table, "<staff> <sex> F </sex> <branch_no> B003 </branch_no> </staff>");
        let sg37 = store.get("staff1").unwrap();
        let cost = aligndb::scoring::store_cost(&store);
        let hits = pairwise_match(new.symbols(), sg37.symbols(), &cost, 8, 8).unwrap();
        assert_eq!(hits[0].pairs.len(), 8, "top hit must match all eight query symbols");
    }

    for text in [
        "<staff> <sex> F </sex> <branch_no> B003 </branch_no> </staff>",
        "<staff> F B003 </staff>",
    ] {
        let new = query(&mut table, text);
        let out = query_by_example(new, &store, &SearchParams::default(), true).unwrap();
        assert_all_valid(&out.results);
        assert_eq!(out.results.len(), 2, "query {text:?} must match exactly two staff");
        let mut hits: Vec<String> =
            out.results.iter().map(|r| result_staff_no(r, &table, &wanted)).collect();
        hits.sort();
        assert_eq!(hits, ["SG37", "SG5"], "query {text:?}");
        for r in &out.results {
            assert!(r.full_match);
            assert_eq!(r.alignment.rows().len(), 2);
        }
    }
    pass(2, "female staff at B003 found, both query forms");
}

/// The expected join: query, the CR76 viewing, and the CR76 client record.
fn expected_join(store: &Store, new: PatternRef) -> Alignment {
    let rows = vec![
        RowEntry { pattern: new },
        RowEntry { pattern: store.get("viewing-11").unwrap().clone() },
        RowEntry { pattern: store.get("client-CR76").unwrap().clone() },
    ];
    let cols: Vec<Vec<(u32, u32)>> = vec![
        vec![(0, 0), (1, 0)],   // <viewing>
        vec![(1, 1)],           // 11
        vec![(1, 2), (2, 0)],   // <client>
        vec![(2, 1)],           // 6
        vec![(2, 2)],           // <client_no>
        vec![(1, 3), (2, 3)],   // CR76
        vec![(2, 4)],           // </client_no>
        vec![(0, 1), (2, 5)],   // <first_name>
        vec![(2, 6)],           // John
        vec![(0, 2), (2, 7)],   // </first_name>
        vec![(0, 3), (2, 8)],   // <last_name>
        vec![(2, 9)],           // Kay
        vec![(0, 4), (2, 10)],  // </last_name>
        vec![(2, 11)],          // <tel_no>
        vec![(2, 12)],          // 0207-774-5632
        vec![(2, 13)],          // </tel_no>
        vec![(2, 14)],          // <pref_type>
        vec![(2, 15)],          // Flat
        vec![(2, 16)],          // </pref_type>
        vec![(2, 17)],          // <max_rent>
        vec![(2, 18)],          // 425
        vec![(2, 19)],          // </max_rent>
        vec![(1, 4), (2, 20)],  // </client>
        vec![(0, 5), (1, 5)],   // <property_no>
        vec![(1, 6)],           // PG4
        vec![(0, 6), (1, 7)],   // </property_no>
        vec![(1, 8)],           // <view_date>
        vec![(1, 9)],           // 20-Apr-01
        vec![(1, 10)],          // </view_date>
        vec![(0, 7), (1, 11)],  // <comment>
        vec![(1, 12)],          // too
        vec![(1, 13)],          // remote
        vec![(0, 8), (1, 14)],  // </comment>
        vec![(0, 9), (1, 15)],  // </viewing>
    ];
    let columns = cols.into_iter().map(|members| Column { members }).collect();
    Alignment::from_parts(rows, columns).unwrap()
}

#[test]
fn criterion_3_join_across_tables() {
    let mut table = SymbolTable::new();
    let store = load_store("dreamhome.sp", &mut table);
    let new = query(
        &mut table,
        "<viewing> <first_name> </first_name> <last_name> </last_name> \
         <property_no> </property_no> <comment> </comment> </viewing>",
    );
    let out = query_by_example(new.clone(), &store, &SearchParams::default(), true).unwrap();
    assert_all_valid(&out.results);
    assert_eq!(out.results.len(), 5, "one join result per viewing");

    let mut seen_pairs = Vec::new();
    for sa in &out.results {
        assert!(sa.full_match);
        let pids = old_pids(sa);
        assert_eq!(pids.len(), 2, "each join holds one viewing and one client: {pids:?}");
        let client = pids.iter().find(|p| p.starts_with("client-")).unwrap();
        let viewing = pids.iter().find(|p| p.starts_with("viewing-")).unwrap();
        // the viewing must reference exactly that client
        let client_no = client.strip_prefix("client-").unwrap();
        let vp = store.get(viewing).unwrap();
        let has_ref = vp.symbols().iter().any(|&s| table.text(s) == client_no);
        assert!(has_ref, "{viewing} does not reference {client}");
        seen_pairs.push((viewing.clone(), client.clone()));
    }
    seen_pairs.sort();
    seen_pairs.dedup();
    assert_eq!(seen_pairs.len(), 5, "five distinct viewing/client pairs");

    let cr76 = out
        .results
        .iter()
        .find(|sa| old_pids(sa).contains(&"client-CR76".to_string()))
        .expect("CR76 join present");
    let expected = expected_join(&store, new);
    assert_eq!(cr76.alignment.signature(), expected.signature());
    pass(3, "join yields five viewing/client alignments, CR76 cell for cell");
}

#[test]
fn criterion_4_inheritance() {
    let mut table = SymbolTable::new();
    let store = load_store("vehicles.sp", &mut table);
    let new = query(&mut table, "LMN 888 2000cc");
    let out = query_by_example(new, &store, &SearchParams::default(), true).unwrap();
    assert_all_valid(&out.results);
    assert!(!out.results.is_empty());

    let best = &out.results[0];
    assert!(best.full_match);
    let pids = old_pids(best);
    assert_eq!(pids, ["car", "engine", "gasoline_type", "v4", "vehicle"]);

    let inferred = infer_attributes(best);
    let has = |sym: &str, pid: &str| {
        inferred
            .inferred
            .iter()
            .any(|(s, p)| table.text(*s) == sym && p == pid)
    };
    assert!(has("4", "car"), "wheel count inherited from the car class");
    assert!(has("low", "gasoline_type"), "compression inherited from the engine type");
    // attributes arrive from several levels of the hierarchy
    let sources: HashSet<&str> = inferred.inferred.iter().map(|(_, p)| p.as_str()).collect();
    assert!(sources.len() >= 3, "inheritance spans {sources:?}");
    pass(4, "all five hierarchy patterns joined; wheels and compression inherited");
}

#[test]
fn criterion_5_reference_linking() {
    let mut table = SymbolTable::new();
    let store = load_store("reference.sp", &mut table);
    let new = query(&mut table, "a1 b1 a2");
    let results = build_alignments(new.clone(), &store, &SearchParams::default()).unwrap();
    assert_all_valid(&results);

    let expected = {
        let rows = vec![
            RowEntry { pattern: new },
            RowEntry { pattern: store.get("A").unwrap().clone() },
            RowEntry { pattern: store.get("B").unwrap().clone() },
        ];
        let cols: Vec<Vec<(u32, u32)>> = vec![
            vec![(1, 0)],         // <A>
            vec![(0, 0), (1, 1)], // a1
            vec![(1, 2), (2, 0)], // <B>
            vec![(0, 1), (2, 1)], // b1
            vec![(1, 3), (2, 2)], // </B>
            vec![(0, 2), (1, 4)], // a2
            vec![(1, 5)],         // </A>
        ];
        let columns = cols.into_iter().map(|members| Column { members }).collect();
        Alignment::from_parts(rows, columns).unwrap()
    };
    assert_eq!(results[0].alignment.signature(), expected.signature());
    assert!(results[0].full_match);

    // everything inherited is bracket symbols, drawn from both patterns
    let inferred = infer_attributes(&results[0]);
    let got: HashSet<(String, String)> = inferred
        .inferred
        .iter()
        .map(|(s, p)| (table.text(*s).to_string(), p.clone()))
        .collect();
    let want: HashSet<(String, String)> = [
        ("<A>", "A"),
        ("<B>", "A"),
        ("<B>", "B"),
        ("</B>", "A"),
        ("</B>", "B"),
        ("</A>", "A"),
    ]
    .into_iter()
    .map(|(s, p)| (s.to_string(), p.to_string()))
    .collect();
    assert_eq!(got, want);
    pass(5, "reference through start and end symbols links both patterns");
}

#[test]
fn criterion_6_oracle_equivalence() {
    // staged search against exhaustive enumeration on random micro-instances;
    // instances whose exhaustive state space exceeds the work budget are
    // skipped and replaced, so every verified case is genuinely exhaustive
    let params = SearchParams {
        beam_width: 64,
        depth: 64,
        max_stages: 10,
        max_alignments: 5,
        max_instances_per_pattern: 2,
    };
    let mut rng = SeededRng::new(0xABCD);
    let mut verified = 0;
    let mut drawn = 0;
    while verified < 200 {
        let inst = micro_instance(&mut rng);
        drawn += 1;
        assert!(drawn <= 400, "too many oracle instances exceeded the budget");
        let Some(want) = oracle_best_cd(inst.new.clone(), &inst.store, 2, 300_000) else {
            continue;
        };
        let got = build_alignments(inst.new.clone(), &inst.store, &params).unwrap();
        assert_all_valid(&got);
        let best = got.first().map(|s| s.cd).unwrap_or(0.0);
        assert_eq!(best, want, "case {drawn}: search best differs from oracle");
        verified += 1;
    }

    // top pairwise hit against brute-force maximum weight
    let mut rng = SeededRng::new(0xBEEF);
    let mut table = SymbolTable::new();
    let alphabet: Vec<_> =
        (0..4).map(|i| table.intern(&format!("t{i}")).unwrap()).collect();
    let uniform = |_s: aligndb::Symbol| 1.0;
    for case in 0..500 {
        let ql = rng.range(1, 8);
        let tl = rng.range(1, 8);
        let q: Vec<_> = (0..ql).map(|_| alphabet[rng.below(4)]).collect();
        let t: Vec<_> = (0..tl).map(|_| alphabet[rng.below(4)]).collect();
        let hits = pairwise_match(&q, &t, &uniform, 16, 32).unwrap();
        let got = hits.first().map(|h| h.weight).unwrap_or(0.0);
        let want = brute_max_weight(&q, &t, &uniform);
        assert_eq!(got, want, "case {case}");
    }
    pass(6, "search equals exhaustive oracle on 200 instances; matcher on 500 pairs");
}

#[test]
fn criterion_7_complexity_scaling() {
    // fixed stage budget: the claim under test is how the per-stage scan
    // scales with corpus and query size, not how soon novelty runs out
    let params = SearchParams { max_stages: 3, ..Default::default() };
    let median = |mut xs: Vec<f64>| -> f64 {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs[xs.len() / 2]
    };
    let time_at = |ns: usize, os: usize| -> f64 {
        let runs: Vec<f64> = (0..5)
            .map(|seed| run_bench(ns, os, 40 + seed, &params).unwrap().wall_secs)
            .collect();
        median(runs)
    };

    let t_small = time_at(8, 2000);
    let t_big = time_at(8, 4000);
    let os_ratio = t_big / t_small;
    assert!(
        (1.5..=3.0).contains(&os_ratio),
        "doubling stored symbols: ratio {os_ratio:.2} (times {t_small:.4}s -> {t_big:.4}s)"
    );

    let t_ns_small = time_at(8, 2000);
    let t_ns_big = time_at(16, 2000);
    let ns_ratio = t_ns_big / t_ns_small;
    assert!(
        ns_ratio <= 5.0,
        "doubling query symbols: ratio {ns_ratio:.2} (times {t_ns_small:.4}s -> {t_ns_big:.4}s)"
    );
    pass(7, "wall time scales about linearly in the store and tamely in the query");
}

#[test]
fn criterion_8_probabilities() {
    // probabilities sum to one on each reference query
    let queries: Vec<(&str, &str)> = vec![
        ("grammar.sp", "this boy loves that girl"),
        ("vehicles.sp", "LMN 888 2000cc"),
        ("reference.sp", "a1 b1 a2"),
        (
            "dreamhome.sp",
            "<viewing> <first_name> </first_name> <last_name> </last_name> \
             <property_no> </property_no> <comment> </comment> </viewing>",
        ),
    ];
    for (file, text) in queries {
        let mut table = SymbolTable::new();
        let store = load_store(file, &mut table);
        let new = query(&mut table, text);
        for full_only in [false, true] {
            let out = query_by_example(new.clone(), &store, &SearchParams::default(), full_only)
                .unwrap();
            if out.results.is_empty() {
                continue;
            }
            let sum: f64 = out.results.iter().map(|r| r.rel_prob.unwrap()).sum();
            assert!((sum - 1.0).abs() < 1e-9, "{file} full_only={full_only}: sum {sum}");
        }
    }
    {
        let mut table = SymbolTable::new();
        let store = staff_store(&mut table);
        let new = query(&mut table, "<staff> <sex> F </sex> <branch_no> B003 </branch_no> </staff>");
        let out = query_by_example(new, &store, &SearchParams::default(), true).unwrap();
        let sum: f64 = out.results.iter().map(|r| r.rel_prob.unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    // doubling a pattern's frequency raises the probability of results using it
    let prob_of_sg37 = |boost: bool| -> f64 {
        let mut table = SymbolTable::new();
        let (header, rows) = csv_rows(&data("staff.csv"));
        let schema = TableSchema::new("staff", header).unwrap();
        let mut patterns = table_to_patterns(&schema, &rows, &mut table).unwrap();
        if boost {
            // row 1 is SG37
            patterns[1] = patterns[1].with_frequency(2).unwrap();
        }
        let store = build_store(patterns).unwrap();
        let new = query(
            &mut table,
            "<staff> <sex> F </sex> <branch_no> B003 </branch_no> </staff>",
        );
        let out = query_by_example(new, &store, &SearchParams::default(), true).unwrap();
        let wanted = ["SL21", "SG37", "SG14", "SA9", "SG5", "SL41"];
        out.results
            .iter()
            .find(|r| result_staff_no(r, &table, &wanted) == "SG37")
            .unwrap()
            .rel_prob
            .unwrap()
    };
    let before = prob_of_sg37(false);
    let after = prob_of_sg37(true);
    assert!(
        after > before,
        "frequency boost must raise the result's probability ({before} -> {after})"
    );
    pass(8, "probabilities normalize and follow pattern frequency");
}

#[test]
fn criterion_9_invariants() {
    // alignments produced across random runs all check out, scores ignore
    // row order, and renderings parse back to the same columns
    let mut rng = SeededRng::new(0x5EED);
    let params = SearchParams { beam_width: 16, ..Default::default() };
    let mut harvested: Vec<(SymbolTable, ScoredAlignment)> = Vec::new();
    while harvested.len() < 200 {
        let inst = micro_instance(&mut rng);
        let results = build_alignments(inst.new.clone(), &inst.store, &params).unwrap();
        for sa in results.into_iter().take(4) {
            let (ok, v) = check_alignment(&sa.alignment);
            assert!(ok, "{v:?}");
            if harvested.len() < 200 {
                harvested.push((inst.table.clone(), sa));
            }
        }
    }

    // row permutation changes nothing observable (first 100)
    let mut rng = SeededRng::new(77);
    for (_, sa) in harvested.iter().take(100) {
        let n_old = sa.alignment.rows().len() - 1;
        if n_old < 2 {
            continue;
        }
        let mut perm: Vec<usize> = (1..=n_old).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.below(i + 1));
        }
        let permuted = sa.alignment.permute_old_rows(&perm).unwrap();
        let (ok, v) = check_alignment(&permuted);
        assert!(ok, "{v:?}");
        assert_eq!(project(&permuted).unwrap(), project(&sa.alignment).unwrap());
        // rescore against a rebuilt store? the store is gone; compare structure
        assert_eq!(permuted.signature(), sa.alignment.signature());
    }

    // structural round-trip of renderings, both orientations
    for (table, sa) in &harvested {
        for orientation in [Orientation::Cols, Orientation::Rows] {
            let text = render_alignment(&sa.alignment, table, orientation);
            let parsed = parse_rendered(&text).unwrap();
            assert_eq!(parsed.columns, membership_of(&sa.alignment), "orientation {orientation:?}");
        }
    }

    // the same round-trip on every fixture store's results
    let fixture_queries: Vec<(&str, &str)> = vec![
        ("grammar.sp", "this boy loves that girl"),
        ("vehicles.sp", "LMN 888 2000cc"),
        ("reference.sp", "a1 b1 a2"),
        (
            "dreamhome.sp",
            "<viewing> <first_name> </first_name> <last_name> </last_name> \
             <property_no> </property_no> <comment> </comment> </viewing>",
        ),
    ];
    for (file, text) in fixture_queries {
        let mut table = SymbolTable::new();
        let store = load_store(file, &mut table);
        let new = query(&mut table, text);
        let results = build_alignments(new, &store, &SearchParams::default()).unwrap();
        for sa in &results {
            for orientation in [Orientation::Cols, Orientation::Rows] {
                let rendered = render_alignment(&sa.alignment, &table, orientation);
                let parsed = parse_rendered(&rendered).unwrap();
                assert_eq!(parsed.columns, membership_of(&sa.alignment), "{file}");
            }
        }
    }

    // permutation invariance of the score itself, on a store we still hold
    {
        let mut table = SymbolTable::new();
        let store = load_store("reference.sp", &mut table);
        let new = query(&mut table, "a1 b1 a2");
        let results = build_alignments(new, &store, &SearchParams::default()).unwrap();
        for sa in &results {
            let n_old = sa.alignment.rows().len() - 1;
            if n_old < 2 {
                continue;
            }
            let perm: Vec<usize> = (1..=n_old).rev().collect();
            let permuted = sa.alignment.permute_old_rows(&perm).unwrap();
            let rescored = score(&permuted, &store).unwrap();
            assert_eq!(rescored.cd, sa.cd);
            assert_eq!(rescored.bn, sa.bn);
            assert_eq!(rescored.full_match, sa.full_match);
        }
    }
    pass(9, "validity, permutation neutrality, and render round-trips hold");
}
