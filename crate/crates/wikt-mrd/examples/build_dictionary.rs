//! Parse the bundled fixture corpus into an in-memory dictionary, then pull
//! a word card back out, including the link-derived stubs.

use std::path::Path;

use wikt_mrd::pipeline::{run_pipeline, PipelineOptions};
use wikt_mrd::profile::{Profile, ProfileId};
use wikt_mrd::store::Store;

fn main() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let profile = Profile::builtin(ProfileId::En);
    let mut store = Store::new(ProfileId::En);

    let summary = run_pipeline(
        corpus.to_str().unwrap(),
        &profile,
        &mut store,
        PipelineOptions::default(),
    )
    .expect("fixture corpus should parse");

    println!(
        "{} pages -> {} entries, {} meanings, {} relations, {} translation entries",
        summary.pages, summary.lang_pos, summary.meanings, summary.relations,
        summary.translation_entries
    );
    for (table, n) in store.table_counts() {
        println!("  {table}: {n} rows");
    }

    let card = store.lookup_word_card("deal", profile.label_policy()).unwrap();
    for section in &card.sections {
        println!("{} / {} (etymology_n {})", section.language, section.pos, section.etymology_n);
        for m in &section.meanings {
            println!("  {}. {}", m.meaning_n + 1, m.plain_text);
        }
        for g in &section.relations {
            let targets: Vec<&str> = g.items.iter().map(|i| i.target_plain.as_str()).collect();
            println!("  {}: {}", g.relation_type, targets.join(", "));
        }
        for b in &section.translations {
            for t in &b.terms {
                println!("  {}: {}", t.language, t.term);
            }
        }
    }

    // link targets without entries of their own are page stubs
    let stub = store.lookup_word_card("recipient", profile.label_policy()).unwrap();
    println!("recipient has {} sections (a link stub)", stub.sections.len());

    assert!(store.verify_integrity().is_empty());
    println!("integrity: clean");
}
