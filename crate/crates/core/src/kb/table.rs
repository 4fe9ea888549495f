//! Tables as patterns. A table row becomes one pattern whose fields sit
//! between `<field>` ... `</field>` bracket symbols; the brackets carry no
//! special meaning inside the engine.

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::symbol::SymbolTable;

/// A named entity with its ordered field names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSchema {
    pub entity: String,
    pub columns: Vec<String>,
}

impl TableSchema {
    pub fn new(entity: impl Into<String>, columns: Vec<String>) -> Result<Self> {
        let entity = entity.into();
        if entity.is_empty() {
            return Err(Error::Invalid("schema entity name is empty".into()));
        }
        for (i, c) in columns.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Invalid(format!("schema column {i} is empty")));
            }
            if columns[..i].contains(c) {
                return Err(Error::Invalid(format!("duplicate schema column {c:?}")));
            }
        }
        Ok(TableSchema { entity, columns })
    }

    /// Parse the CLI form `entity:col1,col2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (entity, cols) = spec
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("schema {spec:?} is not entity:col1,col2,...")))?;
        let columns = cols.split(',').map(|c| c.trim().to_string()).collect();
        TableSchema::new(entity.trim(), columns)
    }
}

/// Encode table rows as patterns: row i becomes
/// `<entity> i <col> value-tokens </col> ... </entity>`.
/// Cell values are tokenized on whitespace; empty cells emit no brackets.
pub fn table_to_patterns(
    schema: &TableSchema,
    rows: &[Vec<String>],
    table: &mut SymbolTable,
) -> Result<Vec<Pattern>> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != schema.columns.len() {
            return Err(Error::RowArity { row: i, got: row.len(), want: schema.columns.len() });
        }
        let mut symbols = Vec::new();
        symbols.push(table.intern(&format!("<{}>", schema.entity))?);
        symbols.push(table.intern(&i.to_string())?);
        for (col, cell) in schema.columns.iter().zip(row) {
            let tokens: Vec<&str> = cell.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            symbols.push(table.intern(&format!("<{col}>"))?);
            for tok in tokens {
                symbols.push(table.intern(tok)?);
            }
            symbols.push(table.intern(&format!("</{col}>"))?);
        }
        symbols.push(table.intern(&format!("</{}>", schema.entity))?);
        out.push(Pattern::new_old(format!("{}{}", schema.entity, i), symbols, 1)?);
    }
    Ok(out)
}

/// Pull the field values of one entity pattern back out, or fail when the
/// pattern does not open and close with the schema's entity brackets.
fn pattern_fields(
    p: &Pattern,
    schema: &TableSchema,
    table: &SymbolTable,
) -> Result<Vec<String>> {
    let texts: Vec<&str> = p.symbols().iter().map(|&s| table.text(s)).collect();
    let open = format!("<{}>", schema.entity);
    let close = format!("</{}>", schema.entity);
    if texts.first() != Some(&open.as_str()) || texts.last() != Some(&close.as_str()) {
        return Err(Error::EntityMismatch { pid: p.pid().to_string(), entity: schema.entity.clone() });
    }
    let mut cells = Vec::with_capacity(schema.columns.len());
    for col in &schema.columns {
        let o = format!("<{col}>");
        let c = format!("</{col}>");
        let cell = match texts.iter().position(|&t| t == o) {
            Some(start) => {
                let end = texts[start + 1..]
                    .iter()
                    .position(|&t| t == c)
                    .map(|e| start + 1 + e)
                    .ok_or_else(|| {
                        Error::Invalid(format!("pattern {:?}: {o} has no closing {c}", p.pid()))
                    })?;
                texts[start + 1..end].join(" ")
            }
            None => String::new(),
        };
        cells.push(cell);
    }
    Ok(cells)
}

/// Render entity patterns in the conventional tabular style: a header, a
/// dashed rule, and one fixed-width row per pattern. Absent fields print
/// as blank cells.
pub fn render_patterns_as_table(
    patterns: &[Pattern],
    schema: &TableSchema,
    table: &SymbolTable,
) -> Result<String> {
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(patterns.len());
    for p in patterns {
        rows.push(pattern_fields(p, schema, table)?);
    }
    let mut widths: Vec<usize> = schema.columns.iter().map(|c| c.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String]| -> String {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(&format!("{cell:<w$}"));
        }
        s.trim_end().to_string()
    };
    let headers: Vec<String> = schema.columns.clone();
    out.push_str(&line(&headers));
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    // keep the full rule width: it anchors the column spans for parsing
    for (i, r) in rule.iter().enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        out.push_str(r);
    }
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    Ok(out)
}

/// Parse text produced by [`render_patterns_as_table`] back into cell rows.
/// The dashed rule on line 2 fixes the column spans.
pub fn parse_table_text(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Invalid("empty table text".into()))?;
    let rule = lines.next().ok_or_else(|| Error::Invalid("table text has no rule line".into()))?;

    let mut spans: Vec<(usize, usize)> = Vec::new();
    let bytes: Vec<char> = rule.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == '-' {
            let start = i;
            while i < bytes.len() && bytes[i] == '-' {
                i += 1;
            }
            spans.push((start, i - start));
        } else {
            i += 1;
        }
    }
    if spans.is_empty() {
        return Err(Error::Invalid("table rule line has no columns".into()));
    }

    let cell = |line: &str, &(start, len): &(usize, usize)| -> String {
        let chars: Vec<char> = line.chars().collect();
        let end = (start + len).min(chars.len());
        if start >= chars.len() {
            return String::new();
        }
        chars[start..end].iter().collect::<String>().trim().to_string()
    };

    let headers: Vec<String> = spans.iter().map(|s| cell(header, s)).collect();
    let mut rows = Vec::new();
    for l in lines {
        if l.trim().is_empty() {
            continue;
        }
        rows.push(spans.iter().map(|s| cell(l, s)).collect());
    }
    Ok((headers, rows))
}
