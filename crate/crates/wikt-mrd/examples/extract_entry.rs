//! Extract the three kinds of content from one part-of-speech section:
//! numbered definitions, semantic relations bound to meanings through their
//! sense glosses, and translation blocks.

use wikt_mrd::diag::Diagnostics;
use wikt_mrd::extract::{
    extract_definitions, extract_relations, extract_translations, match_sense,
};
use wikt_mrd::profile::{Profile, ProfileId};
use wikt_mrd::segment::PosSection;
use wikt_mrd::wikitext::SourceSpan;

const BODY: &str = "\
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

fn main() {
    let profile = Profile::builtin(ProfileId::En);
    let mut diags = Diagnostics::new();
    let section = PosSection {
        pos_name: "verb".to_string(),
        body: BODY.to_string(),
        span: SourceSpan::new(0, BODY.chars().count()),
    };

    let definitions = extract_definitions("deal", &section, profile.label_policy(), &mut diags);
    for d in &definitions {
        println!("meaning {}: {}", d.meaning_n, d.plain_text);
        println!("  labels: {:?}", d.labels);
    }

    let relations = extract_relations("deal", &section, &definitions, &profile, &mut diags);
    for group in &relations {
        println!(
            "{} group, summary {:?}, bound to meaning {:?}:",
            group.relation_type, group.meaning_summary, group.resolved_meaning_n
        );
        for t in &group.targets {
            println!("  {t}");
        }
    }

    let translations = extract_translations("deal", &section, &definitions, &profile, &mut diags);
    for block in &translations {
        println!("translations {:?}, bound to meaning {:?}:", block.gloss, block.resolved_meaning_n);
        for e in &block.entries {
            println!("  {} ({}): {}", e.language.name, e.language.code, e.term);
        }
    }

    // sense binding is substring-then-Jaccard; an unrelated gloss stays unbound
    println!(
        "unrelated gloss binds to: {:?}",
        match_sense("completely unrelated words here", &definitions)
    );
    println!("diagnostics: {}", diags.len());
}
