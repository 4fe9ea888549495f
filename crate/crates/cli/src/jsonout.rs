//! One-line JSON records for scripting: rows, column memberships, the bit
//! accounting, and inferred symbols per result.

use serde::Serialize;

use aligndb::{infer_attributes, project, ScoredAlignment, SymbolTable};

#[derive(Serialize)]
struct RowOut {
    pid: String,
    role: &'static str,
    symbols: Vec<String>,
    frequency: u32,
}

#[derive(Serialize)]
struct ResultOut {
    rows: Vec<RowOut>,
    /// For each column: the (row, position) cells aligned in it.
    columns: Vec<Vec<(usize, usize)>>,
    projection: Vec<String>,
    bn: f64,
    be: f64,
    cd: f64,
    rel_prob: Option<f64>,
    full_match: bool,
    inferred: Vec<(String, String)>,
}

pub fn result_line(sa: &ScoredAlignment, table: &SymbolTable) -> anyhow::Result<String> {
    let a = &sa.alignment;
    let rows = a
        .rows()
        .iter()
        .map(|r| RowOut {
            pid: r.pattern.pid().to_string(),
            role: if r.role() == aligndb::Role::New { "new" } else { "old" },
            symbols: r.pattern.symbols().iter().map(|&s| table.text(s).to_string()).collect(),
            frequency: r.pattern.frequency(),
        })
        .collect();
    let columns = a
        .columns()
        .iter()
        .map(|c| c.members.iter().map(|&(r, p)| (r as usize, p as usize)).collect())
        .collect();
    let projection =
        project(a)?.iter().map(|&s| table.text(s).to_string()).collect();
    let inferred = infer_attributes(sa)
        .inferred
        .into_iter()
        .map(|(s, pid)| (table.text(s).to_string(), pid))
        .collect();
    let out = ResultOut {
        rows,
        columns,
        projection,
        bn: sa.bn,
        be: sa.be,
        cd: sa.cd,
        rel_prob: sa.rel_prob,
        full_match: sa.full_match,
        inferred,
    };
    Ok(serde_json::to_string(&out)?)
}
