//! User-facing search knobs.

use crate::error::{Error, Result};

/// Bounds on the alignment search. All fields must be at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    /// Candidate alignments retained per search stage.
    pub beam_width: usize,
    /// Alternative pairwise matches explored per (driving, target) pair, and
    /// the number of alternatives kept per cell inside the matcher.
    pub depth: usize,
    /// Maximum number of growth stages.
    pub max_stages: usize,
    /// Maximum number of alignments returned.
    pub max_alignments: usize,
    /// Cap on rows holding the same stored pattern (recursion bound).
    pub max_instances_per_pattern: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            beam_width: 30,
            depth: 8,
            max_stages: 8,
            max_alignments: 10,
            max_instances_per_pattern: 3,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("beam_width", self.beam_width),
            ("depth", self.depth),
            ("max_stages", self.max_stages),
            ("max_alignments", self.max_alignments),
            ("max_instances_per_pattern", self.max_instances_per_pattern),
        ];
        for (name, v) in fields {
            if v < 1 {
                return Err(Error::Invalid(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }
}
