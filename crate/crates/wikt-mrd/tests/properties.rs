//! Randomized property checks for the scanners and the canonical export.

use proptest::prelude::*;

use wikt_mrd::export::{export_tsv_bundle, TABLE_NAMES};
use wikt_mrd::extract::{Definition, TranslationBlock, TranslationTerm};
use wikt_mrd::profile::{LanguageInfo, Profile, ProfileId};
use wikt_mrd::segment::LangPosKey;
use wikt_mrd::store::Store;
use wikt_mrd::wikitext::{
    scan_headings, scan_internal_links, scan_templates_full, slice_span, strip_markup,
    Template,
};

fn markup_text() -> impl Strategy<Value = String> {
    proptest::collection::vec(
        prop_oneof![
            8 => Just("a".to_string()),
            3 => Just(" ".to_string()),
            2 => Just("\n".to_string()),
            2 => Just("{{".to_string()),
            2 => Just("}}".to_string()),
            2 => Just("[[".to_string()),
            2 => Just("]]".to_string()),
            2 => Just("|".to_string()),
            1 => Just("=".to_string()),
            1 => Just("#".to_string()),
            1 => Just("*".to_string()),
            1 => Just("'''".to_string()),
            1 => Just("word".to_string()),
            1 => Just("é".to_string()),
        ],
        0..60,
    )
    .prop_map(|parts| parts.concat())
}

fn assert_spans_sound(source: &str, templates: &[Template]) {
    for t in templates {
        let slice = slice_span(source, t.span);
        assert!(slice.starts_with("{{"), "span start off for {:?} in {source:?}", t.name);
        assert!(slice.ends_with("}}"), "span end off for {:?} in {source:?}", t.name);
        assert_spans_sound(source, &t.children);
    }
}

proptest! {
    #[test]
    fn scanners_are_total_and_spans_reproduce_markup(s in markup_text()) {
        let scan = scan_templates_full(&s);
        assert_spans_sound(&s, &scan.templates);
        for h in scan_headings(&s) {
            let slice = slice_span(&s, h.span);
            prop_assert!(slice.starts_with('='));
        }
        for l in scan_internal_links(&s) {
            let slice = slice_span(&s, l.span);
            prop_assert!(slice.starts_with("[["));
            prop_assert!(slice.ends_with("]]"));
        }
    }

    #[test]
    fn strip_markup_is_idempotent(s in markup_text()) {
        let profile = Profile::builtin(ProfileId::En);
        let once = strip_markup(&s, profile.label_policy());
        let twice = strip_markup(&once, profile.label_policy());
        prop_assert_eq!(&once, &twice);
    }

    #[test]
    fn link_label_defaults_to_target(target in "[a-z]{1,8}") {
        let s = format!("[[{target}]] and [[{target}|shown]]");
        let links = scan_internal_links(&s);
        prop_assert_eq!(links.len(), 2);
        prop_assert_eq!(&links[0].label, &target);
        prop_assert_eq!(&links[1].label, "shown");
        prop_assert_eq!(&links[1].target, &target);
    }

    #[test]
    fn canonical_export_is_insertion_order_independent(
        order in Just(()).prop_perturb(|_, mut rng| {
            let mut idx: Vec<usize> = (0..6).collect();
            for i in (1..idx.len()).rev() {
                idx.swap(i, rng.random_range(0..=i));
            }
            idx
        })
    ) {
        let build = |order: &[usize]| {
            let mut store = Store::new(ProfileId::En);
            for &i in order {
                let key = LangPosKey {
                    page_title: format!("word{i}"),
                    language: LanguageInfo { code: "en".into(), name: "English".into() },
                    pos_name: if i % 2 == 0 { "noun".into() } else { "verb".into() },
                    etymology_n: (i % 3) as u32,
                };
                let defs = vec![Definition {
                    meaning_n: 0,
                    raw_wikitext: format!("A [[thing {i}]] among others."),
                    plain_text: format!("A thing {i} among others."),
                    labels: vec![],
                }];
                let blocks = vec![TranslationBlock {
                    gloss: Some(format!("thing {i}")),
                    entries: vec![TranslationTerm {
                        language: LanguageInfo { code: "sv".into(), name: "Swedish".into() },
                        term: format!("sak{i}"),
                    }],
                    resolved_meaning_n: Some(0),
                }];
                store.store_entry(&key, &defs, &[], &blocks).unwrap();
            }
            store
        };
        let sorted: Vec<usize> = (0..6).collect();
        let a = build(&sorted);
        let b = build(&order);
        let dir = tempfile::tempdir().unwrap();
        export_tsv_bundle(&a, &dir.path().join("a")).unwrap();
        export_tsv_bundle(&b, &dir.path().join("b")).unwrap();
        for name in TABLE_NAMES {
            let x = std::fs::read(dir.path().join("a").join(format!("{name}.tsv"))).unwrap();
            let y = std::fs::read(dir.path().join("b").join(format!("{name}.tsv"))).unwrap();
            prop_assert_eq!(x, y, "{}.tsv differs", name);
        }
    }
}
