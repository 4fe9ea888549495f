//! Text rendering of alignments, and the parser that recovers column
//! memberships from the rendered text (used to keep the renderer honest).

use crate::alignment::Alignment;
use crate::error::{Error, Result};
use crate::symbol::SymbolTable;

/// `Cols` places one pattern per display column with the query in column
/// 0 and matched symbols joined by `-` runs. `Rows` prints one pattern
/// per line over a width ruler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Cols,
    Rows,
}

const GUTTER: usize = 3;

/// Structure recovered from a rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedRender {
    /// For each text column, the (row, position) cells it holds.
    pub columns: Vec<Vec<(usize, usize)>>,
    pub symbols: Vec<String>,
}

/// Render an alignment. Symbols whose text is nothing but `-` would be
/// indistinguishable from connector runs in `Cols` style; the pattern
/// formats in use never produce such symbols.
pub fn render_alignment(a: &Alignment, table: &SymbolTable, orientation: Orientation) -> String {
    match orientation {
        Orientation::Cols => render_cols(a, table),
        Orientation::Rows => render_rows(a, table),
    }
}

fn render_cols(a: &Alignment, table: &SymbolTable) -> String {
    let nrows = a.rows().len();
    let mut width = vec![0usize; nrows];
    for (d, w) in width.iter_mut().enumerate() {
        *w = d.to_string().len();
    }
    for (ci, col) in a.columns().iter().enumerate() {
        let len = table.text(a.symbol_at(ci)).chars().count();
        for &(r, _) in &col.members {
            width[r as usize] = width[r as usize].max(len);
        }
    }
    let mut x = vec![0usize; nrows];
    for d in 1..nrows {
        x[d] = x[d - 1] + width[d - 1] + GUTTER;
    }
    let total = x[nrows - 1] + width[nrows - 1];

    let put = |line: &mut Vec<char>, at: usize, text: &str| {
        for (i, ch) in text.chars().enumerate() {
            line[at + i] = ch;
        }
    };

    let mut ruler: Vec<char> = vec![' '; total];
    for d in 0..nrows {
        put(&mut ruler, x[d], &d.to_string());
    }
    let ruler: String = ruler.iter().collect();

    let mut out = String::new();
    out.push_str(ruler.trim_end());
    out.push_str("\n\n");

    for (ci, col) in a.columns().iter().enumerate() {
        let text = table.text(a.symbol_at(ci));
        let len = text.chars().count();
        let mut line: Vec<char> = vec![' '; total];
        let rows_in: Vec<usize> = col.members.iter().map(|&(r, _)| r as usize).collect();
        let d_min = *rows_in.iter().min().unwrap();
        let d_max = *rows_in.iter().max().unwrap();
        if d_min != d_max {
            let from = x[d_min] + len + 1;
            let to = x[d_max].saturating_sub(2);
            for c in line.iter_mut().take(to + 1).skip(from) {
                *c = '-';
            }
        }
        for &d in &rows_in {
            put(&mut line, x[d], text);
            if x[d] > 0 {
                line[x[d] - 1] = ' ';
            }
            if x[d] + len < total {
                line[x[d] + len] = ' ';
            }
        }
        let s: String = line.iter().collect();
        out.push_str(s.trim_end());
        out.push('\n');
    }

    out.push('\n');
    out.push_str(ruler.trim_end());
    out.push('\n');
    out
}

fn render_rows(a: &Alignment, table: &SymbolTable) -> String {
    let widths: Vec<usize> =
        (0..a.columns().len()).map(|ci| table.text(a.symbol_at(ci)).chars().count()).collect();
    let mut out = String::new();
    for (i, w) in widths.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&"=".repeat(*w));
    }
    out.push('\n');
    for (d, _) in a.rows().iter().enumerate() {
        let mut line = String::new();
        for (ci, col) in a.columns().iter().enumerate() {
            if ci > 0 {
                line.push(' ');
            }
            if col.has_row(d as u32) {
                let text = table.text(a.symbol_at(ci));
                line.push_str(&format!("{text:<w$}", w = widths[ci]));
            } else {
                line.push_str(&" ".repeat(widths[ci]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Recover column memberships from rendered text, either orientation.
pub fn parse_rendered(text: &str) -> Result<ParsedRender> {
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Invalid("empty rendering".into()))?;
    if first.starts_with('=') {
        parse_rows(text)
    } else {
        parse_cols(text)
    }
}

fn char_slice(line: &str, start: usize, end: Option<usize>) -> String {
    let chars: Vec<char> = line.chars().collect();
    if start >= chars.len() {
        return String::new();
    }
    let end = end.unwrap_or(chars.len()).min(chars.len());
    chars[start..end].iter().collect()
}

fn parse_cols(text: &str) -> Result<ParsedRender> {
    let lines: Vec<&str> = text.lines().collect();
    let nonblank: Vec<usize> =
        lines.iter().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, _)| i).collect();
    if nonblank.len() < 2 {
        return Err(Error::Invalid("rendering too short".into()));
    }
    let ruler = lines[nonblank[0]];
    // display column starts = offsets of the index tokens
    let mut starts = Vec::new();
    let chars: Vec<char> = ruler.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_whitespace() {
            starts.push(i);
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    if starts.is_empty() {
        return Err(Error::Invalid("no display columns in ruler".into()));
    }

    let body = &nonblank[1..nonblank.len() - 1];
    let mut columns = Vec::new();
    let mut symbols = Vec::new();
    let mut pos_counter = vec![0usize; starts.len()];
    for &li in body {
        let line = lines[li];
        let mut members = Vec::new();
        let mut sym: Option<String> = None;
        for (d, &s) in starts.iter().enumerate() {
            let end = starts.get(d + 1).map(|&e| e - 1);
            let cell = char_slice(line, s, end);
            let token: Vec<&str> = cell
                .split_whitespace()
                .filter(|t| !t.chars().all(|c| c == '-'))
                .collect();
            match token.len() {
                0 => {}
                1 => {
                    members.push((d, pos_counter[d]));
                    pos_counter[d] += 1;
                    sym = Some(token[0].to_string());
                }
                _ => return Err(Error::Invalid(format!("ambiguous cell {cell:?}"))),
            }
        }
        if members.is_empty() {
            return Err(Error::Invalid(format!("line {li} holds no symbol")));
        }
        columns.push(members);
        symbols.push(sym.unwrap());
    }
    Ok(ParsedRender { columns, symbols })
}

fn parse_rows(text: &str) -> Result<ParsedRender> {
    let mut lines = text.lines();
    let ruler = lines.next().ok_or_else(|| Error::Invalid("empty rendering".into()))?;
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let chars: Vec<char> = ruler.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '=' {
            let start = i;
            while i < chars.len() && chars[i] == '=' {
                i += 1;
            }
            spans.push((start, i - start));
        } else {
            i += 1;
        }
    }
    let mut columns: Vec<Vec<(usize, usize)>> = vec![Vec::new(); spans.len()];
    let mut symbols: Vec<String> = vec![String::new(); spans.len()];
    let mut pos_counter: Vec<usize> = Vec::new();
    for (row, line) in lines.enumerate() {
        pos_counter.push(0);
        for (ci, &(start, len)) in spans.iter().enumerate() {
            let cell = char_slice(line, start, Some(start + len));
            let t = cell.trim();
            if !t.is_empty() {
                columns[ci].push((row, pos_counter[row]));
                pos_counter[row] += 1;
                symbols[ci] = t.to_string();
            }
        }
    }
    if columns.iter().any(|c| c.is_empty()) {
        return Err(Error::Invalid("rendering has an empty column".into()));
    }
    Ok(ParsedRender { columns, symbols })
}

/// The alignment's own memberships in the parser's shape, for comparison.
pub fn membership_of(a: &Alignment) -> Vec<Vec<(usize, usize)>> {
    a.columns()
        .iter()
        .map(|c| {
            let mut m: Vec<(usize, usize)> =
                c.members.iter().map(|&(r, p)| (r as usize, p as usize)).collect();
            m.sort_unstable();
            m
        })
        .collect()
}

/// True when the New row of `a` is fully matched in the parse as well;
/// sanity helper for round-trip tests.
pub fn render_round_trips(a: &Alignment, table: &SymbolTable, orientation: Orientation) -> bool {
    let text = render_alignment(a, table, orientation);
    match parse_rendered(&text) {
        Ok(parsed) => parsed.columns == membership_of(a),
        Err(_) => false,
    }
}
