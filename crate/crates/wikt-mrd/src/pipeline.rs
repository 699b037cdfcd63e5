//! End-to-end parsing: page source -> extraction workers -> store writer.
//!
//! One reader thread streams pages, a configurable number of workers do the
//! CPU-heavy extraction, and a single writer applies results to the store.
//! Worker scheduling may reorder results between runs; the canonical export
//! makes the persisted output identical regardless.

use crossbeam_channel::bounded;

use crate::diag::{DiagCategory, Diagnostics};
use crate::extract::{
    extract_definitions, extract_relations, extract_translations, Definition, RelationGroup,
    TranslationBlock,
};
use crate::ingest::{filter_main, stream_pages, IngestError, RawPage};
use crate::profile::Profile;
use crate::segment::{segment_etymologies, segment_languages, segment_pos, LangPosKey};
use crate::store::{Store, StoreError};
use crate::wikitext::{scan_headings, scan_templates_full, strip_html_comments};

/// Everything extracted from one part-of-speech section.
#[derive(Debug, Clone)]
pub struct ExtractedEntry {
    pub key: LangPosKey,
    pub definitions: Vec<Definition>,
    pub relations: Vec<RelationGroup>,
    pub translations: Vec<TranslationBlock>,
}

/// Result of processing one raw page, before it touches the store.
#[derive(Debug, Clone)]
pub struct ExtractedPage {
    pub title: String,
    /// False when the page was dropped by the namespace/redirect filter.
    pub kept: bool,
    pub entries: Vec<ExtractedEntry>,
    pub diags: Diagnostics,
    /// Level-2 headings seen, for conservation accounting.
    pub level2_headings: usize,
    pub lang_sections: usize,
}

/// Totals reported after a parse run.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct ParseSummary {
    pub pages: usize,
    pub pages_kept: usize,
    pub level2_headings: usize,
    pub lang_sections: usize,
    pub lang_pos: usize,
    pub meanings: usize,
    pub relations: usize,
    pub translation_entries: usize,
    pub diag_counts: std::collections::BTreeMap<String, usize>,
    #[serde(skip)]
    pub diagnostics: Diagnostics,
}

/// Segment and extract one page. Pure with respect to the store.
pub fn process_page(page: &RawPage, profile: &Profile) -> ExtractedPage {
    let mut diags = Diagnostics::new();
    let text = strip_html_comments(&page.text);

    let scan = scan_templates_full(&text);
    if scan.unbalanced_sites > 0 {
        diags.push(
            DiagCategory::UnbalancedBraces,
            &page.title,
            format!("{} unbalanced brace sites", scan.unbalanced_sites),
        );
    }
    let level2_headings = scan_headings(&text).iter().filter(|h| h.level == 2).count();

    let sections = segment_languages(&page.title, &text, profile, &mut diags);
    let lang_sections = sections.len();
    let mut entries = Vec::new();
    for section in &sections {
        for block in segment_etymologies(&page.title, section, &mut diags) {
            for pos in segment_pos(&block, profile) {
                let definitions =
                    extract_definitions(&page.title, &pos, profile.label_policy(), &mut diags);
                let relations =
                    extract_relations(&page.title, &pos, &definitions, profile, &mut diags);
                let translations =
                    extract_translations(&page.title, &pos, &definitions, profile, &mut diags);
                entries.push(ExtractedEntry {
                    key: LangPosKey {
                        page_title: page.title.clone(),
                        language: section.language.clone(),
                        pos_name: pos.pos_name.clone(),
                        etymology_n: block.etymology_n,
                    },
                    definitions,
                    relations,
                    translations,
                });
            }
        }
    }
    ExtractedPage {
        title: page.title.clone(),
        kept: true,
        entries,
        diags,
        level2_headings,
        lang_sections,
    }
}

/// Filter then process; filtered pages still yield their diagnostics.
pub fn process_raw(page: &RawPage, profile: &Profile) -> ExtractedPage {
    let mut diags = Diagnostics::new();
    if filter_main(page, &mut diags) {
        process_page(page, profile)
    } else {
        ExtractedPage {
            title: page.title.clone(),
            kept: false,
            entries: Vec::new(),
            diags,
            level2_headings: 0,
            lang_sections: 0,
        }
    }
}

/// Apply one extracted page to the store, updating the running summary.
pub fn apply_page(store: &mut Store, page: ExtractedPage, summary: &mut ParseSummary) {
    summary.pages += 1;
    if page.kept {
        summary.pages_kept += 1;
    }
    summary.level2_headings += page.level2_headings;
    summary.lang_sections += page.lang_sections;
    let mut diags = page.diags;
    for entry in page.entries {
        match store.store_entry(&entry.key, &entry.definitions, &entry.relations, &entry.translations)
        {
            Ok(_) => {
                summary.lang_pos += 1;
                summary.meanings += entry.definitions.len();
                summary.relations += entry.relations.iter().map(|g| g.targets.len()).sum::<usize>();
                summary.translation_entries +=
                    entry.translations.iter().map(|b| b.entries.len()).sum::<usize>();
            }
            Err(StoreError::DuplicateLangPos(detail)) => {
                diags.push(DiagCategory::DuplicateLangPos, &page.title, detail);
            }
            Err(other) => {
                // extractor output violating a store precondition is a bug
                panic!("store rejected extracted entry for {}: {other}", page.title);
            }
        }
    }
    for (category, n) in diags.counts() {
        *summary.diag_counts.entry(category).or_insert(0) += n;
    }
    summary.diagnostics.extend(diags);
}

/// How a parse run is parallelized.
#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub workers: usize,
    pub channel_capacity: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { workers: 4, channel_capacity: 64 }
    }
}

/// Run the full pipeline over a page source.
///
/// `source` is an XML export file, a fixture directory, or `-` for stdin.
pub fn run_pipeline(
    source: &str,
    profile: &Profile,
    store: &mut Store,
    options: PipelineOptions,
) -> Result<ParseSummary, IngestError> {
    let workers = options.workers.max(1);
    let (page_tx, page_rx) = bounded::<RawPage>(options.channel_capacity);
    let (result_tx, result_rx) = bounded::<ExtractedPage>(options.channel_capacity);

    let mut summary = ParseSummary::default();

    let read_result: Result<usize, IngestError> = std::thread::scope(|scope| {
        let reader = scope.spawn(move || {
            stream_pages(source, |page| {
                // send fails only when all workers are gone, i.e. panicked
                let _ = page_tx.send(page);
            })
        });

        for _ in 0..workers {
            let page_rx = page_rx.clone();
            let result_tx = result_tx.clone();
            scope.spawn(move || {
                for page in page_rx.iter() {
                    if result_tx.send(process_raw(&page, profile)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(page_rx);
        drop(result_tx);

        for extracted in result_rx.iter() {
            apply_page(store, extracted, &mut summary);
        }
        reader.join().expect("reader thread panicked")
    });

    read_result?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::export::{canonicalize, export_tsv_bundle};
    use crate::profile::ProfileId;

    const DEAL_PAGE: &str = "\
==English==

===Etymology 1===
From an old word for a plank.

===Etymology 2===
From an old word for sharing out.

====Verb====
{{en-verb}}

# {{transitive}} To [[distribute]] among a number of [[recipient|recipients]], to give out as one's portion or share.
#: ''The fighting is over; now we deal out the spoils of victory.''
# To [[administer]] or give out, as in small portions.

=====Synonyms=====
* {{sense|distribute among a number of recipients}} [[apportion]], [[divvy up]], [[share]], [[share out]], [[portion out]]

=====Translations=====
{{trans-top|give out as one's portion or share}}
* Swedish: {{t|sv|dela}}
{{trans-bottom}}
";

    fn page(title: &str, text: &str) -> RawPage {
        RawPage { title: title.into(), namespace: 0, redirect: false, text: text.into() }
    }

    #[test]
    fn deal_page_end_to_end() {
        let profile = Profile::builtin(ProfileId::En);
        let extracted = process_page(&page("deal", DEAL_PAGE), &profile);
        assert_eq!(extracted.entries.len(), 1);
        let entry = &extracted.entries[0];
        assert_eq!(entry.key.etymology_n, 1);
        assert_eq!(entry.key.pos_name, "verb");
        assert_eq!(entry.definitions.len(), 2);
        assert_eq!(entry.relations.len(), 1);
        assert_eq!(entry.relations[0].targets.len(), 5);
        assert_eq!(entry.relations[0].resolved_meaning_n, Some(0));
        assert_eq!(entry.translations.len(), 1);
        assert_eq!(entry.translations[0].resolved_meaning_n, Some(0));
        assert_eq!(entry.translations[0].entries.len(), 1);
        assert_eq!(entry.translations[0].entries[0].language.code, "sv");
        assert_eq!(entry.translations[0].entries[0].term, "dela");
    }

    #[test]
    fn summary_counts_add_up() {
        let profile = Profile::builtin(ProfileId::En);
        let mut store = Store::new(ProfileId::En);
        let mut summary = ParseSummary::default();
        apply_page(&mut store, process_raw(&page("deal", DEAL_PAGE), &profile), &mut summary);
        apply_page(
            &mut store,
            process_raw(&page("noise", "no headings here"), &profile),
            &mut summary,
        );
        assert_eq!(summary.pages, 2);
        assert_eq!(summary.pages_kept, 2);
        assert_eq!(summary.lang_pos, 1);
        assert_eq!(summary.meanings, 2);
        assert_eq!(summary.relations, 5);
        assert_eq!(summary.translation_entries, 1);
        assert_eq!(summary.diag_counts.get("no_language_sections"), Some(&1));
        assert!(store.verify_integrity().is_empty());
    }

    #[test]
    fn worker_count_does_not_change_canonical_output() {
        let dir = tempfile::tempdir().unwrap();
        let fixtures = dir.path().join("pages");
        std::fs::create_dir(&fixtures).unwrap();
        std::fs::write(fixtures.join("deal.wiki"), DEAL_PAGE).unwrap();
        std::fs::write(
            fixtures.join("mask.wiki"),
            "==English==\n===Noun===\n# A [[cover]] for the [[face]].\n",
        )
        .unwrap();
        let profile = Profile::builtin(ProfileId::En);
        let source = fixtures.to_str().unwrap();

        let mut outputs = Vec::new();
        for workers in [1, 4] {
            let mut store = Store::new(ProfileId::En);
            run_pipeline(
                source,
                &profile,
                &mut store,
                PipelineOptions { workers, channel_capacity: 2 },
            )
            .unwrap();
            let out = dir.path().join(format!("out{workers}"));
            export_tsv_bundle(&store, &out).unwrap();
            let mut bytes = Vec::new();
            for name in crate::export::TABLE_NAMES {
                bytes.extend(std::fs::read(out.join(format!("{name}.tsv"))).unwrap());
            }
            outputs.push(bytes);
        }
        assert_eq!(outputs[0], outputs[1]);

        let mut store = Store::new(ProfileId::En);
        run_pipeline(source, &profile, &mut store, PipelineOptions::default()).unwrap();
        let canon = canonicalize(&store);
        assert!(canon.verify_integrity().is_empty());
    }
}
