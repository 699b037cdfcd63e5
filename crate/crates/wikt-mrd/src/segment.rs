//! Splits one entry page into language sections, etymology-numbered homonym
//! blocks, and part-of-speech sections.
//!
//! Spans are char offsets into the text the respective step operated on:
//! language-section spans index the page text, etymology-block spans index
//! the language body, and POS-section spans index the etymology body.

use crate::diag::{DiagCategory, Diagnostics};
use crate::profile::{LanguageInfo, Profile};
use crate::textutil::{next_line_start, CharIndex};
use crate::wikitext::{scan_headings, Heading, SourceSpan};

/// One `==Language==` section with the heading line excluded from the body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSection {
    pub language: LanguageInfo,
    pub body: String,
    pub span: SourceSpan,
}

/// One homonym block; numbering counts from zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtymologyBlock {
    pub etymology_n: u32,
    pub body: String,
    pub span: SourceSpan,
}

/// One part-of-speech section inside an etymology block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosSection {
    pub pos_name: String,
    pub body: String,
    pub span: SourceSpan,
}

/// The central addressing tuple of the dictionary.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LangPosKey {
    pub page_title: String,
    pub language: LanguageInfo,
    pub pos_name: String,
    pub etymology_n: u32,
}

/// Split a page into language sections per the profile registry.
///
/// Every level-2 heading whose title resolves via the registry starts a
/// section running to the next level-2 heading. Unresolvable headings are
/// skipped and diagnosed; a page that yields nothing gets a page-level
/// diagnostic unless unknown-language diagnostics already account for it.
pub fn segment_languages(
    page_title: &str,
    page_text: &str,
    profile: &Profile,
    diags: &mut Diagnostics,
) -> Vec<LanguageSection> {
    let index = CharIndex::new(page_text);
    let headings = scan_headings(page_text);
    let level2: Vec<&Heading> = headings.iter().filter(|h| h.level == 2).collect();
    let mut sections = Vec::new();
    let mut unknown = 0usize;
    for (i, heading) in level2.iter().enumerate() {
        let end = match level2.get(i + 1) {
            Some(next) => next.span.start,
            None => index.len(),
        };
        let body_start = next_line_start(page_text, &index, heading.span.end).min(end);
        match profile.lookup_name(&heading.title) {
            Some(lang) => sections.push(LanguageSection {
                language: lang.clone(),
                body: index.slice(page_text, body_start, end).to_string(),
                span: SourceSpan::new(body_start, end),
            }),
            None => {
                unknown += 1;
                diags.push(DiagCategory::UnknownLanguage, page_title, heading.title.clone());
            }
        }
    }
    if sections.is_empty() && unknown == 0 {
        diags.push(DiagCategory::NoLanguageSections, page_title, "no language headings");
    }
    sections
}

/// Etymology number encoded by a level-3 heading title, if any.
fn etymology_number(title: &str) -> Option<u32> {
    let title = title.trim();
    if title == "Etymology" {
        return Some(0);
    }
    let n: u32 = title.strip_prefix("Etymology ")?.trim().parse().ok()?;
    (n >= 1).then(|| n - 1)
}

/// Split a language section into homonym blocks.
///
/// `Etymology N` yields `etymology_n = N - 1`, a bare `Etymology` yields 0,
/// and a section without etymology headings is a single block numbered 0.
pub fn segment_etymologies(
    page_title: &str,
    section: &LanguageSection,
    diags: &mut Diagnostics,
) -> Vec<EtymologyBlock> {
    let body = &section.body;
    let index = CharIndex::new(body);
    let headings = scan_headings(body);
    let mut markers: Vec<(u32, &Heading)> = Vec::new();
    for h in &headings {
        match etymology_number(&h.title) {
            Some(n) if h.level == 3 => markers.push((n, h)),
            Some(_) => diags.push(
                DiagCategory::MisplacedEtymologyHeading,
                page_title,
                format!("level {} heading {:?}", h.level, h.title),
            ),
            None => {}
        }
    }
    if markers.is_empty() {
        return vec![EtymologyBlock {
            etymology_n: 0,
            body: body.clone(),
            span: SourceSpan::new(0, index.len()),
        }];
    }
    let mut blocks: Vec<EtymologyBlock> = Vec::new();
    for (i, (n, heading)) in markers.iter().enumerate() {
        let end = match markers.get(i + 1) {
            Some((_, next)) => next.span.start,
            None => index.len(),
        };
        if blocks.iter().any(|b| b.etymology_n == *n) {
            diags.push(
                DiagCategory::DuplicateEtymology,
                page_title,
                format!("duplicate etymology number {}", n + 1),
            );
            continue;
        }
        let body_start = next_line_start(body, &index, heading.span.end).min(end);
        blocks.push(EtymologyBlock {
            etymology_n: *n,
            body: index.slice(body, body_start, end).to_string(),
            span: SourceSpan::new(body_start, end),
        });
    }
    blocks
}

/// Split an etymology block into part-of-speech sections.
///
/// Headings of level 3 or 4 whose title is in the profile POS inventory open
/// a section running to the next heading of the same or shallower level;
/// deeper headings (Synonyms, Translations, ...) stay in the body.
pub fn segment_pos(block: &EtymologyBlock, profile: &Profile) -> Vec<PosSection> {
    let body = &block.body;
    let index = CharIndex::new(body);
    let headings = scan_headings(body);
    let mut sections = Vec::new();
    for (i, heading) in headings.iter().enumerate() {
        if heading.level != 3 && heading.level != 4 {
            continue;
        }
        let Some(pos_name) = profile.pos_for_heading(&heading.title) else {
            continue;
        };
        let end = headings[i + 1..]
            .iter()
            .find(|h| h.level <= heading.level)
            .map(|h| h.span.start)
            .unwrap_or_else(|| index.len());
        let body_start = next_line_start(body, &index, heading.span.end).min(end);
        sections.push(PosSection {
            pos_name,
            body: index.slice(body, body_start, end).to_string(),
            span: SourceSpan::new(body_start, end),
        });
    }
    sections
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileId;

    fn en() -> Profile {
        Profile::builtin(ProfileId::En)
    }

    #[test]
    fn single_language_section() {
        let mut d = Diagnostics::new();
        let page = "==English==\nbody text\n";
        let s = segment_languages("deal", page, &en(), &mut d);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].language.code, "en");
        assert_eq!(s[0].body, "body text\n");
        assert!(d.is_empty());
    }

    #[test]
    fn two_language_sections_in_order() {
        let mut d = Diagnostics::new();
        let page = "==English==\nfirst\n==Swedish==\nsecond\n";
        let s = segment_languages("deal", page, &en(), &mut d);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].language.name, "English");
        assert_eq!(s[0].body, "first\n");
        assert_eq!(s[1].language.name, "Swedish");
        assert_eq!(s[1].body, "second\n");
    }

    #[test]
    fn unknown_language_heading_diagnosed() {
        let mut d = Diagnostics::new();
        let s = segment_languages("x", "==Notalanguage==\nbody\n", &en(), &mut d);
        assert!(s.is_empty());
        assert_eq!(d.count(DiagCategory::UnknownLanguage), 1);
        assert_eq!(d.count(DiagCategory::NoLanguageSections), 0);
    }

    #[test]
    fn headingless_page_diagnosed() {
        let mut d = Diagnostics::new();
        let s = segment_languages("x", "just prose, no headings", &en(), &mut d);
        assert!(s.is_empty());
        assert_eq!(d.count(DiagCategory::NoLanguageSections), 1);
    }

    fn lang_section(body: &str) -> LanguageSection {
        LanguageSection {
            language: LanguageInfo { code: "en".into(), name: "English".into() },
            body: body.to_string(),
            span: SourceSpan::new(0, body.chars().count()),
        }
    }

    #[test]
    fn etymology_numbering_counts_from_zero() {
        let mut d = Diagnostics::new();
        let s = lang_section("===Etymology 2===\nsecond homonym\n====Verb====\n# x\n");
        let blocks = segment_etymologies("deal", &s, &mut d);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].etymology_n, 1);
    }

    #[test]
    fn no_etymology_heading_yields_default_block() {
        let mut d = Diagnostics::new();
        let s = lang_section("===Verb===\n# x\n");
        let blocks = segment_etymologies("deal", &s, &mut d);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].etymology_n, 0);
        assert_eq!(blocks[0].body, s.body);
    }

    #[test]
    fn two_etymologies_in_order() {
        let mut d = Diagnostics::new();
        let s = lang_section("===Etymology 1===\nalpha\n===Etymology 2===\nbeta\n");
        let blocks = segment_etymologies("deal", &s, &mut d);
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].etymology_n, 0);
        assert_eq!(blocks[0].body, "alpha\n");
        assert_eq!(blocks[1].etymology_n, 1);
        assert_eq!(blocks[1].body, "beta\n");
    }

    #[test]
    fn duplicate_etymology_number_keeps_first() {
        let mut d = Diagnostics::new();
        let s = lang_section("===Etymology 1===\na\n===Etymology 1===\nb\n");
        let blocks = segment_etymologies("deal", &s, &mut d);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].body, "a\n");
        assert_eq!(d.count(DiagCategory::DuplicateEtymology), 1);
    }

    fn etym_block(body: &str) -> EtymologyBlock {
        EtymologyBlock {
            etymology_n: 0,
            body: body.to_string(),
            span: SourceSpan::new(0, body.chars().count()),
        }
    }

    #[test]
    fn pos_section_level3() {
        let s = segment_pos(&etym_block("===Verb===\n# def\n"), &en());
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].pos_name, "verb");
        assert_eq!(s[0].body, "# def\n");
    }

    #[test]
    fn pos_section_level4_permitted() {
        let s = segment_pos(&etym_block("====Noun====\n# def\n"), &en());
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].pos_name, "noun");
    }

    #[test]
    fn non_pos_headings_yield_nothing() {
        assert!(segment_pos(&etym_block("===Pronunciation===\nipa\n"), &en()).is_empty());
    }

    #[test]
    fn deeper_headings_stay_inside_pos_body() {
        let body = "====Verb====\n# def\n=====Synonyms=====\n* [[x]]\n====Noun====\n# other\n";
        let s = segment_pos(&etym_block(body), &en());
        assert_eq!(s.len(), 2);
        assert!(s[0].body.contains("=====Synonyms====="));
        assert!(!s[0].body.contains("Noun"));
        assert_eq!(s[1].pos_name, "noun");
    }

    #[test]
    fn sibling_sections_are_disjoint_and_ordered() {
        let mut d = Diagnostics::new();
        let page = "==English==\na\n==Swedish==\nb\n==German==\nc\n";
        let s = segment_languages("p", page, &en(), &mut d);
        for pair in s.windows(2) {
            assert!(pair[0].span.end <= pair[1].span.start);
        }
    }
}
