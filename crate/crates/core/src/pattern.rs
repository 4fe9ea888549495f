//! Patterns: flat, ordered symbol sequences with a frequency and a role.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// Whether a pattern is query input (New) or part of the stored corpus (Old).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    New,
    Old,
}

/// An identified, non-empty symbol sequence with an occurrence frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pid: String,
    symbols: Vec<Symbol>,
    frequency: u32,
    role: Role,
}

impl Pattern {
    pub fn new(pid: impl Into<String>, symbols: Vec<Symbol>, frequency: u32, role: Role) -> Result<Self> {
        let pid = pid.into();
        if symbols.is_empty() {
            return Err(Error::Invalid(format!("pattern {pid:?} has no symbols")));
        }
        if frequency == 0 {
            return Err(Error::Invalid(format!("pattern {pid:?} has frequency 0")));
        }
        Ok(Self { pid, symbols, frequency, role })
    }

    pub fn new_old(pid: impl Into<String>, symbols: Vec<Symbol>, frequency: u32) -> Result<Self> {
        Self::new(pid, symbols, frequency, Role::Old)
    }

    pub fn new_query(pid: impl Into<String>, symbols: Vec<Symbol>) -> Result<Self> {
        Self::new(pid, symbols, 1, Role::New)
    }

    pub fn pid(&self) -> &str {
        &self.pid
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn frequency(&self) -> u32 {
        self.frequency
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Copy with a different frequency, keeping pid, symbols and role.
    pub fn with_frequency(&self, frequency: u32) -> Result<Pattern> {
        Pattern::new(self.pid.clone(), self.symbols.clone(), frequency, self.role)
    }
}

/// Shared handle used by stores and alignment rows.
pub type PatternRef = Arc<Pattern>;
