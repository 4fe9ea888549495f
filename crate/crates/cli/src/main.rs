//! Command line for the pattern-alignment database: load and validate
//! pattern files, turn CSV tables into patterns, run query-by-example,
//! print stored patterns as tables, and benchmark synthetic corpora.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aligndb::bench::run_bench;
use aligndb::kb::{
    parse_pattern_file, render_alignment, render_patterns_as_table, table_to_patterns,
    write_pattern_file, Orientation, TableSchema,
};
use aligndb::{
    build_store, infer_attributes, query_by_example, Pattern, PatternRef, ScoredAlignment,
    SearchParams, Store, SymbolTable,
};

mod jsonout;

/// Exit codes: 0 success, 1 a --full-only query found nothing, 2 bad input
/// or file format, 3 bad arguments.
const EXIT_NO_MATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "aligndb",
    version,
    about = "In-memory pattern database queried by multiple alignment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse pattern files and report what they hold.
    Load {
        /// Pattern files to read.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Validate and print counts (the default behaviour, kept explicit).
        #[arg(long)]
        check: bool,
    },
    /// Convert a CSV table (header row first) into a pattern file.
    IngestCsv {
        /// Entity name for the bracket symbols.
        #[arg(long)]
        entity: String,
        /// CSV file to read.
        file: PathBuf,
        /// Where to write the patterns; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Align a query pattern against stored patterns and rank the results.
    Query {
        #[command(flatten)]
        search: SearchArgs,
        /// Pattern files making up the store.
        #[arg(long, required = true, num_args = 1..)]
        store: Vec<PathBuf>,
        /// The query pattern: whitespace-separated symbols.
        #[arg(long)]
        new: String,
        /// Keep only alignments matching every query symbol.
        #[arg(long)]
        full_only: bool,
        /// Output style for each result.
        #[arg(long, value_enum, default_value_t = RenderMode::Cols)]
        render: RenderMode,
    },
    /// Print entity patterns in conventional tabular form.
    Table {
        /// Pattern file holding the entity patterns.
        #[arg(long)]
        store: PathBuf,
        /// Schema as entity:col1,col2,...
        #[arg(long)]
        schema: String,
    },
    /// Time the search over synthetic corpora; one line per size pair.
    Bench {
        #[command(flatten)]
        search: SearchArgs,
        /// Query sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        /// Store sizes (total symbols), comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        os: Vec<usize>,
        /// Corpus seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Candidates retained per search stage.
    #[arg(long)]
    beam: Option<usize>,
    /// Alternative matches explored per pattern pair.
    #[arg(long)]
    depth: Option<usize>,
    /// Maximum growth stages.
    #[arg(long)]
    stages: Option<usize>,
    /// Maximum alignments returned.
    #[arg(long)]
    max: Option<usize>,
    /// Cap on rows holding the same pattern.
    #[arg(long)]
    instances: Option<usize>,
}

impl SearchArgs {
    fn to_params(&self) -> SearchParams {
        let d = SearchParams::default();
        SearchParams {
            beam_width: self.beam.unwrap_or(d.beam_width),
            depth: self.depth.unwrap_or(d.depth),
            max_stages: self.stages.unwrap_or(d.max_stages),
            max_alignments: self.max.unwrap_or(d.max_alignments),
            max_instances_per_pattern: self.instances.unwrap_or(d.max_instances_per_pattern),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderMode {
    Cols,
    Rows,
    JsonLines,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((code, output)) => {
            if emit(&output).is_err() {
                // downstream closed the pipe; nothing left to say
                return ExitCode::from(code);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit(text: &str) -> std::io::Result<()> {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut handle = stdout.lock();
    handle.write_all(text.as_bytes())?;
    handle.flush()
}

fn run(cli: Cli) -> anyhow::Result<(u8, String)> {
    match cli.command {
        Command::Load { files, check: _ } => cmd_load(&files),
        Command::IngestCsv { entity, file, out } => cmd_ingest(&entity, &file, out.as_deref()),
        Command::Query { search, store, new, full_only, render } => {
            cmd_query(&search.to_params(), &store, &new, full_only, render)
        }
        Command::Table { store, schema } => cmd_table(&store, &schema),
        Command::Bench { search, ns, os, seed } => cmd_bench(&search.to_params(), &ns, &os, seed),
    }
}

fn read_file(path: &std::path::Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn load_patterns(
    files: &[PathBuf],
    table: &mut SymbolTable,
) -> anyhow::Result<Vec<(PathBuf, Vec<Pattern>)>> {
    let mut out = Vec::new();
    for path in files {
        let text = read_file(path)?;
        let patterns = parse_pattern_file(&text, table)
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        out.push((path.clone(), patterns));
    }
    Ok(out)
}

fn build_store_from(files: &[PathBuf], table: &mut SymbolTable) -> anyhow::Result<Store> {
    let loaded = load_patterns(files, table)?;
    let patterns: Vec<Pattern> = loaded.into_iter().flat_map(|(_, ps)| ps).collect();
    build_store(patterns).map_err(|e| anyhow::anyhow!("building store: {e}"))
}

fn cmd_load(files: &[PathBuf]) -> anyhow::Result<(u8, String)> {
    let mut table = SymbolTable::new();
    let loaded = load_patterns(files, &mut table)?;
    let mut out = String::new();
    let mut total_patterns = 0usize;
    let mut total_symbols = 0usize;
    for (path, patterns) in &loaded {
        let symbols: usize = patterns.iter().map(|p| p.len()).sum();
        let _ = writeln!(
            out,
            "{}: {} patterns, {} symbol instances",
            path.display(),
            patterns.len(),
            symbols
        );
        total_patterns += patterns.len();
        total_symbols += symbols;
    }
    // the store build re-checks pid uniqueness across files
    let patterns: Vec<Pattern> = loaded.into_iter().flat_map(|(_, ps)| ps).collect();
    let store = build_store(patterns).map_err(|e| anyhow::anyhow!("validating store: {e}"))?;
    let _ = writeln!(
        out,
        "total: {} patterns, {} symbol instances, {} distinct symbols, total frequency {}",
        total_patterns,
        total_symbols,
        store.distinct_symbols(),
        store.total_freq()
    );
    Ok((0, out))
}

fn cmd_ingest(
    entity: &str,
    file: &std::path::Path,
    out: Option<&std::path::Path>,
) -> anyhow::Result<(u8, String)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(file)
        .map_err(|e| anyhow::anyhow!("{}: {e}", file.display()))?;
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let schema = TableSchema::new(entity, headers)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| anyhow::anyhow!("{}: {e}", file.display()))?;
        rows.push(record.iter().map(|c| c.trim().to_string()).collect());
    }
    let mut table = SymbolTable::new();
    let patterns = table_to_patterns(&schema, &rows, &mut table)?;
    let text = write_pattern_file(&patterns, &table);
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
            Ok((0, format!("{}: {} patterns written\n", path.display(), patterns.len())))
        }
        None => Ok((0, text)),
    }
}

fn cmd_query(
    params: &SearchParams,
    store_files: &[PathBuf],
    new_text: &str,
    full_only: bool,
    render: RenderMode,
) -> anyhow::Result<(u8, String)> {
    let mut table = SymbolTable::new();
    let store = build_store_from(store_files, &mut table)?;
    let symbols =
        table.intern_seq(new_text).map_err(|e| anyhow::anyhow!("query pattern: {e}"))?;
    if symbols.is_empty() {
        anyhow::bail!("query pattern is empty");
    }
    let new = PatternRef::new(Pattern::new_query("query", symbols)?);
    let result = query_by_example(new, &store, params, full_only)?;

    let mut out = String::new();
    match render {
        RenderMode::JsonLines => {
            for sa in &result.results {
                let _ = writeln!(out, "{}", jsonout::result_line(sa, &table)?);
            }
        }
        RenderMode::Cols | RenderMode::Rows => {
            let orientation =
                if render == RenderMode::Cols { Orientation::Cols } else { Orientation::Rows };
            for (i, sa) in result.results.iter().enumerate() {
                let _ = writeln!(out, "{}", header_line(i, sa));
                out.push_str(&render_alignment(&sa.alignment, &table, orientation));
                let inferred = infer_attributes(sa);
                if !inferred.inferred.is_empty() {
                    out.push_str("inferred:");
                    for (sym, pid) in &inferred.inferred {
                        let _ = write!(out, " {}<-{}", table.text(*sym), pid);
                    }
                    out.push('\n');
                }
                out.push('\n');
            }
        }
    }
    if result.results.is_empty() {
        out.push_str("no results\n");
        if full_only {
            return Ok((EXIT_NO_MATCH, out));
        }
    }
    Ok((0, out))
}

fn header_line(i: usize, sa: &ScoredAlignment) -> String {
    let mut pids: Vec<&str> = sa.alignment.old_rows().map(|r| r.pattern.pid()).collect();
    pids.sort();
    format!(
        "result {}: cd={:.4} rel_prob={:.6} full={} rows=[{}]",
        i + 1,
        sa.cd,
        sa.rel_prob.unwrap_or(0.0),
        sa.full_match,
        pids.join(", ")
    )
}

fn cmd_table(store_file: &std::path::Path, schema_text: &str) -> anyhow::Result<(u8, String)> {
    let schema = TableSchema::parse(schema_text)?;
    let mut table = SymbolTable::new();
    let text = read_file(store_file)?;
    let patterns = parse_pattern_file(&text, &mut table)
        .map_err(|e| anyhow::anyhow!("{}: {e}", store_file.display()))?;
    let rendered = render_patterns_as_table(&patterns, &schema, &table)?;
    Ok((0, rendered))
}

fn cmd_bench(
    params: &SearchParams,
    ns: &[usize],
    os: &[usize],
    seed: u64,
) -> anyhow::Result<(u8, String)> {
    let mut out = String::new();
    for &n in ns {
        for &o in os {
            let stats = run_bench(n, o, seed, params)?;
            let _ = writeln!(
                out,
                "ns={} os={} seed={} time_s={:.6} stages={}",
                stats.ns, stats.os, stats.seed, stats.wall_secs, stats.stages_run
            );
        }
    }
    Ok((0, out))
}
