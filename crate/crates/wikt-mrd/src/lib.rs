//! Wiktionary wikitext to machine-readable dictionary.
//!
//! The pipeline turns MediaWiki XML exports of a Wiktionary edition into a
//! relational dictionary: pages, per-language part-of-speech sections,
//! numbered meanings, typed semantic relations bound to meanings, per-meaning
//! translation blocks, and a lemma/inflection index built from internal
//! links. Everything malformed is skipped and diagnosed, never fatal.
//!
//! Modules, roughly in pipeline order:
//!
//! * [`wikitext`]: lossless scanners for headings, templates, links, and
//!   list items, plus markup stripping
//! * [`profile`]: per-edition registries (languages, POS headings, relation
//!   headings, label templates)
//! * [`segment`]: page -> language section -> etymology block -> POS section
//! * [`extract`]: definitions, relation groups, translation blocks, and
//!   gloss-to-meaning binding
//! * [`store`]: the in-memory relational tables with integrity checking
//! * [`export`]: canonical TSV-bundle and SQL-dump serialization
//! * [`ingest`]: streaming page sources (XML dump, fixture dir, stdin)
//! * [`pipeline`]: reader / worker / writer orchestration
//!
//! See the `examples/` directory for a guided tour.

pub mod diag;
pub mod export;
pub mod extract;
pub mod ingest;
pub mod pipeline;
pub mod profile;
pub mod segment;
pub mod store;
mod textutil;
pub mod wikitext;

pub use diag::{Diag, DiagCategory, Diagnostics};
pub use pipeline::{run_pipeline, ParseSummary, PipelineOptions};
pub use profile::{Profile, ProfileId};
pub use store::Store;
