//! Knowledge-base input and output: the pattern-file format, table
//! ingestion into bracketed patterns, and text rendering of patterns,
//! tables, and alignments.

pub mod pattern_file;
pub mod render;
pub mod table;

pub use pattern_file::{parse_pattern_file, write_pattern_file};
pub use render::{membership_of, parse_rendered, render_alignment, render_round_trips, Orientation, ParsedRender};
pub use table::{parse_table_text, render_patterns_as_table, table_to_patterns, TableSchema};
