//! Command-line front end: parse a dump into a store, look up word cards,
//! re-export, and verify integrity.
//!
//! Exit codes are stable for scripting: 0 success, 1 usage or configuration
//! error, 2 I/O error, 3 lookup not found.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wikt_mrd::export::{self, ExportFormat, ImportError};
use wikt_mrd::ingest::IngestError;
use wikt_mrd::pipeline::{run_pipeline, ParseSummary, PipelineOptions};
use wikt_mrd::profile::{Profile, ProfileId};
use wikt_mrd::store::{Store, WordCard};
use wikt_mrd::Diagnostics;

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_NOT_FOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "wikt-mrd", version, about = "Wiktionary wikitext to machine-readable dictionary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LookupFormat {
    /// Indented, human-readable word card.
    Text,
    /// One structured JSON document.
    Doc,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a page source into a dictionary store.
    Parse {
        /// Wiktionary edition profile.
        #[arg(long)]
        profile: String,
        /// XML export file, fixture directory, or `-` for stdin.
        #[arg(long)]
        input: String,
        /// Store directory to (over)write.
        #[arg(long)]
        store: PathBuf,
        /// Extraction worker threads.
        #[arg(long, default_value_t = 4)]
        workers: usize,
        /// Directory with registry TSV overrides.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Print the word card for one page title.
    Lookup {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        title: String,
        #[arg(long, value_enum, default_value = "text")]
        format: LookupFormat,
    },
    /// Re-export a store in a chosen format.
    Export {
        #[arg(long)]
        store: PathBuf,
        /// tsv-bundle or sql-dump.
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run all integrity checks on a store.
    Verify {
        #[arg(long)]
        store: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are success, everything else is usage
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(EXIT_USAGE) };
        }
    };
    match cli.command {
        Command::Parse { profile, input, store, workers, registry } => {
            cmd_parse(&profile, &input, &store, workers, registry.as_deref())
        }
        Command::Lookup { store, title, format } => cmd_lookup(&store, &title, format),
        Command::Export { store, format, out } => cmd_export(&store, &format, &out),
        Command::Verify { store } => cmd_verify(&store),
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn print_diags(diags: &Diagnostics) {
    for d in diags.items() {
        eprintln!("DIAG\t{}\t{}\t{}", d.category, d.page, d.detail.replace(['\t', '\n'], " "));
    }
}

fn print_summary(summary: &ParseSummary, store: &Store) {
    println!("pages\t{}", summary.pages);
    println!("pages_kept\t{}", summary.pages_kept);
    println!("lang_sections\t{}", summary.lang_sections);
    println!("lang_pos\t{}", summary.lang_pos);
    println!("meanings\t{}", summary.meanings);
    println!("relations\t{}", summary.relations);
    println!("translation_entries\t{}", summary.translation_entries);
    for (table, n) in store.table_counts() {
        println!("table\t{table}\t{n}");
    }
    for (category, n) in &summary.diag_counts {
        println!("diag\t{category}\t{n}");
    }
}

fn cmd_parse(
    profile_name: &str,
    input: &str,
    store_path: &Path,
    workers: usize,
    registry: Option<&Path>,
) -> ExitCode {
    if workers == 0 {
        return fail(EXIT_USAGE, "--workers must be at least 1");
    }
    let profile_id: ProfileId = match profile_name.parse() {
        Ok(id) => id,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let profile = match registry {
        Some(dir) => match Profile::load(profile_id, dir) {
            Ok(p) => p,
            Err(e) => return fail(EXIT_USAGE, e),
        },
        None => Profile::builtin(profile_id),
    };
    let mut store = Store::new(profile_id);
    let summary = match run_pipeline(
        input,
        &profile,
        &mut store,
        PipelineOptions { workers, ..PipelineOptions::default() },
    ) {
        Ok(s) => s,
        Err(IngestError::Io(e)) => return fail(EXIT_IO, format!("{input}: {e}")),
        Err(e @ IngestError::Xml { .. }) => return fail(EXIT_IO, e),
    };
    if let Err(e) = export::export_tsv_bundle(&store, store_path) {
        return fail(EXIT_IO, format!("{}: {e}", store_path.display()));
    }
    print_diags(&summary.diagnostics);
    print_summary(&summary, &store);
    ExitCode::SUCCESS
}

fn open_store(path: &Path) -> Result<Store, ExitCode> {
    export::import(path).map_err(|e| match e {
        ImportError::Io(e) => fail(EXIT_IO, format!("{}: {e}", path.display())),
        e => fail(EXIT_IO, e),
    })
}

fn render_card(card: &WordCard) {
    println!("{}", card.page_title);
    if card.sections.is_empty() {
        println!("  (stub: known only as a link target, no entry of its own)");
        return;
    }
    for s in &card.sections {
        println!("  {} / {} (Etymology {})", s.language, s.pos, s.etymology_n + 1);
        for m in &s.meanings {
            println!("    {}. {}", m.meaning_n + 1, m.plain_text);
        }
        for group in &s.relations {
            for item in &group.items {
                let summary = item
                    .meaning_summary
                    .as_deref()
                    .map(|g| format!(" ({g})"))
                    .unwrap_or_default();
                let bound = item.meaning_n.map(|n| format!(" -> {}", n + 1)).unwrap_or_default();
                println!("    {}{summary}{bound}: {}", group.relation_type, item.target_plain);
            }
        }
        for block in &s.translations {
            let gloss = block.gloss.as_deref().unwrap_or("(no gloss)");
            let bound = block.meaning_n.map(|n| format!(" -> {}", n + 1)).unwrap_or_default();
            println!("    translations{bound}: {gloss}");
            for term in &block.terms {
                println!("      {}: {}", term.language, term.term);
            }
        }
    }
}

fn cmd_lookup(store_path: &Path, title: &str, format: LookupFormat) -> ExitCode {
    let store = match open_store(store_path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let profile = Profile::builtin(store.profile_id);
    let Some(card) = store.lookup_word_card(title, profile.label_policy()) else {
        return fail(EXIT_NOT_FOUND, format!("no page titled {title:?}"));
    };
    match format {
        LookupFormat::Text => render_card(&card),
        LookupFormat::Doc => match serde_json::to_string_pretty(&card) {
            Ok(doc) => println!("{doc}"),
            Err(e) => return fail(EXIT_IO, e),
        },
    }
    ExitCode::SUCCESS
}

fn cmd_export(store_path: &Path, format: &str, out: &Path) -> ExitCode {
    let format: ExportFormat = match format.parse() {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let store = match open_store(store_path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let result = match format {
        ExportFormat::TsvBundle => export::export_tsv_bundle(&store, out),
        ExportFormat::SqlDump => export::export_sql_dump(&store, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_IO, format!("{}: {e}", out.display())),
    }
}

fn cmd_verify(store_path: &Path) -> ExitCode {
    let store = match open_store(store_path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let findings = store.verify_integrity();
    for f in &findings {
        println!("FINDING\t{}\t{}", f.category.as_str(), f.detail);
    }
    println!("findings\t{}", findings.len());
    ExitCode::SUCCESS
}
