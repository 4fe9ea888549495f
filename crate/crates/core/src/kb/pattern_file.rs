//! The pattern-file format.
//!
//! ```text
//! // a comment line
//! (<staff> 1 <staff_no> SG37 </staff_no> </staff>)
//! (x y)*5 %rule1
//! ```
//!
//! A file is a sequence of comment lines and patterns. A pattern is `(`,
//! one or more whitespace-separated symbols (newlines included), `)`, an
//! optional `*N` frequency (default 1) and an optional `%pid` tag. Untagged
//! patterns get pids P1..Pn in file order.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::symbol::SymbolTable;

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _text: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        // comment lines drop out before scanning
        let kept: String = text
            .lines()
            .map(|l| if l.trim_start().starts_with("//") { "" } else { l })
            .collect::<Vec<_>>()
            .join("\n");
        Scanner { chars: kept.chars().collect(), pos: 0, line: 1, _text: text }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: msg.into() }
    }
}

/// Parse a whole pattern file, interning every symbol. All patterns come
/// back with the Old role.
pub fn parse_pattern_file(text: &str, table: &mut SymbolTable) -> Result<Vec<Pattern>> {
    let mut sc = Scanner::new(text);
    let mut out: Vec<Pattern> = Vec::new();
    let mut pids: HashSet<String> = HashSet::new();

    loop {
        sc.skip_ws();
        let Some(c) = sc.peek() else { break };
        if c != '(' {
            return Err(sc.err(format!("expected '(' to open a pattern, found {c:?}")));
        }
        let open_line = sc.line;
        sc.bump();

        let mut symbols = Vec::new();
        loop {
            sc.skip_ws();
            match sc.peek() {
                None => {
                    return Err(Error::Parse {
                        line: open_line,
                        msg: "unbalanced parentheses: pattern never closed".into(),
                    })
                }
                Some(')') => {
                    sc.bump();
                    break;
                }
                Some('(') => return Err(sc.err("unbalanced parentheses: nested '('")),
                Some(_) => {
                    let mut tok = String::new();
                    while let Some(c) = sc.peek() {
                        if c.is_whitespace() || c == '(' || c == ')' {
                            break;
                        }
                        tok.push(c);
                        sc.bump();
                    }
                    let line = sc.line;
                    symbols.push(
                        table
                            .intern(&tok)
                            .map_err(|e| Error::Parse { line, msg: e.to_string() })?,
                    );
                }
            }
        }
        if symbols.is_empty() {
            return Err(Error::Parse { line: open_line, msg: "empty pattern".into() });
        }

        let mut frequency: u32 = 1;
        sc.skip_ws();
        if sc.peek() == Some('*') {
            sc.bump();
            sc.skip_ws();
            let mut digits = String::new();
            while matches!(sc.peek(), Some(c) if c.is_ascii_digit()) {
                digits.push(sc.bump().unwrap());
            }
            if digits.is_empty() {
                return Err(sc.err("expected an integer after '*'"));
            }
            frequency = digits
                .parse::<u32>()
                .map_err(|_| sc.err(format!("frequency {digits:?} out of range")))?;
            if frequency == 0 {
                return Err(sc.err("frequency must be positive"));
            }
        }

        let mut pid: Option<String> = None;
        sc.skip_ws();
        if sc.peek() == Some('%') {
            sc.bump();
            let mut tag = String::new();
            while let Some(c) = sc.peek() {
                if c.is_whitespace() || c == '(' || c == ')' {
                    break;
                }
                tag.push(c);
                sc.bump();
            }
            if tag.is_empty() {
                return Err(sc.err("expected a pattern id after '%'"));
            }
            pid = Some(tag);
        }

        let pid = pid.unwrap_or_else(|| format!("P{}", out.len() + 1));
        if !pids.insert(pid.clone()) {
            return Err(Error::Parse { line: open_line, msg: format!("duplicate pid {pid:?}") });
        }
        out.push(
            Pattern::new_old(pid, symbols, frequency)
                .map_err(|e| Error::Parse { line: open_line, msg: e.to_string() })?,
        );
    }

    Ok(out)
}

/// Canonical writer: one pattern per line, with explicit pid tags and
/// frequencies above 1, so parsing the output recovers the input exactly.
pub fn write_pattern_file(patterns: &[Pattern], table: &SymbolTable) -> String {
    let mut out = String::new();
    for p in patterns {
        out.push('(');
        for (i, &s) in p.symbols().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(table.text(s));
        }
        out.push(')');
        if p.frequency() != 1 {
            out.push_str(&format!("*{}", p.frequency()));
        }
        out.push_str(&format!(" %{}", p.pid()));
        out.push('\n');
    }
    out
}
