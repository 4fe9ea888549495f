//! Symbols are atomic marks compared only for same/different. Texts are
//! interned once into dense ids; all matching elsewhere runs on ids.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Characters that the pattern-file grammar claims for itself.
pub const RESERVED: [char; 3] = ['(', ')', '*'];

/// An interned symbol. Equal ids mean equal texts within one table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub(crate) u32);

impl Symbol {
    pub fn sid(self) -> u32 {
        self.0
    }
}

/// Intern table mapping symbol texts to dense ids.
#[derive(Debug, Default, Clone)]
pub struct SymbolTable {
    texts: Vec<String>,
    ids: HashMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern `text`, returning the existing symbol when seen before.
    pub fn intern(&mut self, text: &str) -> Result<Symbol> {
        if text.is_empty()
            || text.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
        {
            return Err(Error::BadSymbol(text.to_string()));
        }
        if let Some(&s) = self.ids.get(text) {
            return Ok(s);
        }
        let s = Symbol(self.texts.len() as u32);
        self.texts.push(text.to_string());
        self.ids.insert(text.to_string(), s);
        Ok(s)
    }

    /// Intern every whitespace-separated token of `line`, in order.
    pub fn intern_seq(&mut self, line: &str) -> Result<Vec<Symbol>> {
        line.split_whitespace().map(|t| self.intern(t)).collect()
    }

    pub fn text(&self, s: Symbol) -> &str {
        &self.texts[s.0 as usize]
    }

    pub fn lookup(&self, text: &str) -> Option<Symbol> {
        self.ids.get(text).copied()
    }

    /// Number of distinct texts interned so far.
    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
