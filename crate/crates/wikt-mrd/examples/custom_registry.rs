//! Profiles are data: swap the language registry (and optionally the POS,
//! relation, and label tables) without touching code.

use wikt_mrd::profile::{Profile, ProfileId};

fn main() {
    let en = Profile::builtin(ProfileId::En);
    println!(
        "builtin en profile: {} languages, targets {:?} codes in the full edition",
        en.languages().len(),
        en.target_code_count
    );
    println!("  'Swedish' resolves to {:?}", en.lookup_name("Swedish"));
    println!("  code 'sv' resolves to {:?}", en.lookup_code("sv"));
    println!("  heading 'Synonyms' maps to {:?}", en.relation_type_for_heading("Synonyms"));
    println!("  heading 'Verb' is a POS: {:?}", en.pos_for_heading("Verb"));

    let ru = Profile::builtin(ProfileId::Ru);
    println!("builtin ru profile: {} languages", ru.languages().len());
    println!("  'Шведский' resolves to {:?}", ru.lookup_name("Шведский"));

    // a registry directory overrides the builtin tables file by file
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("languages.en.tsv"),
        "# target_codes: 3\nen\tEnglish\nsv\tSwedish\ntlh\tKlingon\n",
    )
    .unwrap();
    let custom = Profile::load(ProfileId::En, dir.path()).unwrap();
    println!(
        "custom registry: {} languages, 'Klingon' now resolves to {:?}",
        custom.languages().len(),
        custom.lookup_name("Klingon")
    );
}
