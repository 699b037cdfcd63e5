//! Turns a part-of-speech section into numbered meanings, sense-bound
//! semantic relations, and sense-bound translations.

use std::collections::BTreeSet;

use crate::diag::{DiagCategory, Diagnostics};
use crate::profile::{LanguageInfo, Profile};
use crate::segment::PosSection;
use crate::textutil::CharIndex;
use crate::wikitext::{
    scan_headings, scan_internal_links, scan_list_items, scan_templates, strip_markup, Template,
    TemplateRenderPolicy,
};

/// One numbered sense with its raw and stripped definition text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub meaning_n: u32,
    pub raw_wikitext: String,
    pub plain_text: String,
    pub labels: Vec<String>,
}

/// One relation list item: a typed group of targets, optionally bound to a
/// meaning through its `{{sense}}` gloss.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationGroup {
    pub relation_type: String,
    pub meaning_summary: Option<String>,
    pub targets: Vec<String>,
    pub resolved_meaning_n: Option<u32>,
}

/// One translated term on a translation line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationTerm {
    pub language: LanguageInfo,
    pub term: String,
}

/// One `{{trans-top}}...{{trans-bottom}}` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationBlock {
    pub gloss: Option<String>,
    pub entries: Vec<TranslationTerm>,
    pub resolved_meaning_n: Option<u32>,
}

/// Extract numbered definitions from `#` list items.
///
/// Example and quotation sub-lines (`#:`, `#*`) are skipped. Leading label
/// templates are recorded by name and also rendered into the plain text.
pub fn extract_definitions(
    page_title: &str,
    section: &PosSection,
    policy: &TemplateRenderPolicy,
    diags: &mut Diagnostics,
) -> Vec<Definition> {
    let mut out = Vec::new();
    for item in scan_list_items(&section.body) {
        if item.markers != "#" {
            continue;
        }
        let raw = item.content.trim().to_string();
        if raw.is_empty() {
            continue;
        }
        out.push(Definition {
            meaning_n: out.len() as u32,
            plain_text: strip_markup(&raw, policy),
            labels: leading_labels(&raw, policy),
            raw_wikitext: raw,
        });
    }
    if out.is_empty() {
        diags.push(
            DiagCategory::PosWithoutDefinitions,
            page_title,
            format!("{} section has no definitions", section.pos_name),
        );
    }
    out
}

/// Names of label templates at the very start of a definition line.
fn leading_labels(content: &str, policy: &TemplateRenderPolicy) -> Vec<String> {
    let index = CharIndex::new(content);
    let mut labels = Vec::new();
    let mut pos = 0usize;
    for tpl in scan_templates(content) {
        if tpl.span.start < pos
            || !index.slice(content, pos, tpl.span.start).trim().is_empty()
            || !policy.is_label(&tpl.name)
        {
            break;
        }
        labels.push(tpl.name.trim().to_string());
        pos = tpl.span.end;
    }
    labels
}

/// Extract relation groups from the relation subsections of a POS section.
///
/// Relation headings are matched by title at any level. Each `*` item yields
/// one group; a leading `{{sense|...}}` supplies the meaning summary used to
/// bind the group to a definition.
pub fn extract_relations(
    page_title: &str,
    section: &PosSection,
    definitions: &[Definition],
    profile: &Profile,
    diags: &mut Diagnostics,
) -> Vec<RelationGroup> {
    let body = &section.body;
    let index = CharIndex::new(body);
    let headings = scan_headings(body);
    let mut out = Vec::new();
    for (i, heading) in headings.iter().enumerate() {
        let Some(rel_type) = profile.relation_type_for_heading(&heading.title) else {
            continue;
        };
        let end = headings.get(i + 1).map(|h| h.span.start).unwrap_or_else(|| index.len());
        let region = index.slice(body, heading.span.end.min(end), end);
        for item in scan_list_items(region) {
            if item.markers != "*" {
                continue;
            }
            let (summary, rest) = split_sense_gloss(&item.content);
            let targets = split_top_level_commas(&rest);
            if targets.is_empty() {
                diags.push(
                    DiagCategory::EmptyRelationItem,
                    page_title,
                    format!("{rel_type} item has no targets"),
                );
                continue;
            }
            let resolved = summary.as_deref().and_then(|g| match_sense(g, definitions));
            out.push(RelationGroup {
                relation_type: rel_type.to_string(),
                meaning_summary: summary,
                targets,
                resolved_meaning_n: resolved,
            });
        }
    }
    out
}

/// Split a leading `{{sense|...}}` off a relation item.
fn split_sense_gloss(content: &str) -> (Option<String>, String) {
    let index = CharIndex::new(content);
    let templates = scan_templates(content);
    if let Some(tpl) = templates.first() {
        let before = index.slice(content, 0, tpl.span.start);
        if before.trim().is_empty() && tpl.name.trim().eq_ignore_ascii_case("sense") {
            let gloss = tpl
                .positional_args
                .iter()
                .map(|a| a.trim())
                .filter(|a| !a.is_empty())
                .collect::<Vec<_>>()
                .join("; ");
            let rest = index.slice(content, tpl.span.end, index.len()).to_string();
            let gloss = (!gloss.is_empty()).then_some(gloss);
            return (gloss, rest);
        }
    }
    (None, content.to_string())
}

/// Split on commas outside `{{...}}` and `[[...]]`; pieces are trimmed and
/// empties dropped.
fn split_top_level_commas(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut brace = 0i32;
    let mut bracket = 0i32;
    let mut pieces = Vec::new();
    let mut current = String::new();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let c2 = chars.get(i + 1).copied().unwrap_or('\0');
        match (c, c2) {
            ('{', '{') => {
                brace += 1;
                current.push_str("{{");
                i += 2;
            }
            ('}', '}') => {
                brace -= 1;
                current.push_str("}}");
                i += 2;
            }
            ('[', '[') => {
                bracket += 1;
                current.push_str("[[");
                i += 2;
            }
            (']', ']') => {
                bracket -= 1;
                current.push_str("]]");
                i += 2;
            }
            (',', _) if brace <= 0 && bracket <= 0 => {
                pieces.push(current.clone());
                current.clear();
                i += 1;
            }
            _ => {
                current.push(c);
                i += 1;
            }
        }
    }
    pieces.push(current);
    pieces.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_gap = false;
    for c in text.chars() {
        if c.is_alphanumeric() {
            if in_gap && !out.is_empty() {
                out.push(' ');
            }
            in_gap = false;
            for lc in c.to_lowercase() {
                out.push(lc);
            }
        } else {
            in_gap = true;
        }
    }
    out
}

fn token_set(normalized: &str) -> BTreeSet<&str> {
    normalized.split(' ').filter(|t| !t.is_empty()).collect()
}

/// Bind a sense gloss to a definition.
///
/// A unique substring match on normalized text wins; otherwise the unique
/// maximal token-set Jaccard overlap wins if it reaches 0.5. Ties and weak
/// overlaps stay unbound.
pub fn match_sense(gloss: &str, definitions: &[Definition]) -> Option<u32> {
    let needle = normalize(gloss);
    if needle.is_empty() {
        return None;
    }
    let normalized: Vec<String> = definitions.iter().map(|d| normalize(&d.plain_text)).collect();
    let containing: Vec<usize> = normalized
        .iter()
        .enumerate()
        .filter(|(_, t)| t.contains(&needle))
        .map(|(i, _)| i)
        .collect();
    if containing.len() == 1 {
        return Some(definitions[containing[0]].meaning_n);
    }
    let gloss_tokens = token_set(&needle);
    let mut best: Option<(f64, usize)> = None;
    let mut tie = false;
    for (i, text) in normalized.iter().enumerate() {
        let def_tokens = token_set(text);
        let inter = gloss_tokens.intersection(&def_tokens).count();
        let union = gloss_tokens.union(&def_tokens).count();
        let score = if union == 0 { 0.0 } else { inter as f64 / union as f64 };
        match best {
            Some((b, _)) if score > b => {
                best = Some((score, i));
                tie = false;
            }
            Some((b, _)) if score == b => tie = true,
            None => best = Some((score, i)),
            _ => {}
        }
    }
    match best {
        Some((score, i)) if score >= 0.5 && !tie => Some(definitions[i].meaning_n),
        _ => None,
    }
}

const TRANS_TOP: &str = "trans-top";
const TRANS_BOTTOM: &str = "trans-bottom";
const TERM_TEMPLATES: [&str; 5] = ["t", "t+", "t-", "t0", "tø"];

fn normalized_template_name(tpl: &Template) -> String {
    tpl.name.trim().to_lowercase().replace('_', "-")
}

/// Extract translation blocks from a POS section.
///
/// A block opens at `{{trans-top|gloss}}` (underscore spelling accepted) and
/// closes at `{{trans-bottom}}` or the next block. Lines look like
/// `* LanguageName: {{t|code|word}}` or carry plain links.
pub fn extract_translations(
    page_title: &str,
    section: &PosSection,
    definitions: &[Definition],
    profile: &Profile,
    diags: &mut Diagnostics,
) -> Vec<TranslationBlock> {
    let body = &section.body;
    let index = CharIndex::new(body);
    let templates = scan_templates(body);
    let markers: Vec<(&Template, String)> = templates
        .iter()
        .map(|t| (t, normalized_template_name(t)))
        .filter(|(_, n)| n == TRANS_TOP || n == TRANS_BOTTOM)
        .collect();
    let mut blocks: Vec<TranslationBlock> = Vec::new();
    for (i, (tpl, name)) in markers.iter().enumerate() {
        if name != TRANS_TOP {
            continue;
        }
        let end = markers
            .get(i + 1)
            .map(|(next, _)| next.span.start)
            .unwrap_or_else(|| index.len());
        let gloss = tpl
            .positional_args
            .first()
            .map(|g| g.trim().to_string())
            .filter(|g| !g.is_empty());
        let region = index.slice(body, tpl.span.end.min(end), end);
        let mut entries = Vec::new();
        for item in scan_list_items(region) {
            if item.markers != "*" {
                continue;
            }
            parse_translation_line(page_title, &item.content, profile, &mut entries, diags);
        }
        let resolved = gloss.as_deref().and_then(|g| match_sense(g, definitions));
        push_block(
            page_title,
            &mut blocks,
            TranslationBlock { gloss, entries, resolved_meaning_n: resolved },
            diags,
        );
    }
    blocks
}

/// Append a block, merging it into an earlier block bound to the same
/// meaning.
fn push_block(
    page_title: &str,
    blocks: &mut Vec<TranslationBlock>,
    block: TranslationBlock,
    diags: &mut Diagnostics,
) {
    if let Some(n) = block.resolved_meaning_n {
        if let Some(existing) =
            blocks.iter_mut().find(|b| b.resolved_meaning_n == Some(n))
        {
            diags.push(
                DiagCategory::DuplicateTranslationMeaning,
                page_title,
                format!("second translation block for meaning {n} merged"),
            );
            existing.entries.extend(block.entries);
            return;
        }
    }
    blocks.push(block);
}

fn parse_translation_line(
    page_title: &str,
    content: &str,
    profile: &Profile,
    entries: &mut Vec<TranslationTerm>,
    diags: &mut Diagnostics,
) {
    let Some((name_part, term_part)) = content.split_once(':') else {
        return;
    };
    let lang_name = name_part.trim();
    let by_name = profile.lookup_name(lang_name);
    let scanned = scan_templates(term_part);
    let term_templates: Vec<&Template> = scanned
        .iter()
        .filter(|t| TERM_TEMPLATES.contains(&normalized_template_name(t).as_str()))
        .collect();
    if !term_templates.is_empty() {
        for tpl in term_templates {
            let code = tpl.positional_args.first().map(|c| c.trim()).unwrap_or("");
            let Some(word) = tpl.positional_args.get(1).map(|w| w.trim()).filter(|w| !w.is_empty())
            else {
                continue;
            };
            let by_code = profile.lookup_code(code);
            let language = match (by_name, by_code) {
                (Some(named), Some(coded)) => {
                    if named != coded {
                        diags.push(
                            DiagCategory::TranslationCodeMismatch,
                            page_title,
                            format!("line says {lang_name:?} but code is {code:?}"),
                        );
                    }
                    named.clone()
                }
                (Some(named), None) => named.clone(),
                (None, Some(coded)) => coded.clone(),
                (None, None) => {
                    diags.push(
                        DiagCategory::UnresolvedTranslationLanguage,
                        page_title,
                        format!("{lang_name}: {code}"),
                    );
                    continue;
                }
            };
            entries.push(TranslationTerm { language, term: word.to_string() });
        }
        return;
    }
    let links = scan_internal_links(term_part);
    if links.is_empty() {
        return;
    }
    let Some(language) = by_name else {
        diags.push(DiagCategory::UnresolvedTranslationLanguage, page_title, lang_name.to_string());
        return;
    };
    for link in links {
        entries.push(TranslationTerm { language: language.clone(), term: link.target });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileId;
    use crate::segment::PosSection;
    use crate::wikitext::SourceSpan;

    fn en() -> Profile {
        Profile::builtin(ProfileId::En)
    }

    fn pos_section(body: &str) -> PosSection {
        PosSection {
            pos_name: "verb".to_string(),
            body: body.to_string(),
            span: SourceSpan::new(0, body.chars().count()),
        }
    }

    const DEAL_DEF: &str = "{{transitive}} To [[distribute]] among a number of \
        [[recipient|recipients]], to give out as one's portion or share.";

    fn deal_definitions() -> Vec<Definition> {
        let mut d = Diagnostics::new();
        let body = format!(
            "# {DEAL_DEF}\n#: The fighting is over; now we deal out the spoils of victory.\n\
             # {{{{transitive}}}} To administer or give out, as in small portions.\n"
        );
        extract_definitions("deal", &pos_section(&body), en().label_policy(), &mut d)
    }

    #[test]
    fn definitions_numbered_and_stripped() {
        let defs = deal_definitions();
        assert_eq!(defs.len(), 2);
        assert_eq!(defs[0].meaning_n, 0);
        assert_eq!(defs[1].meaning_n, 1);
        assert_eq!(defs[0].labels, vec!["transitive"]);
        assert_eq!(
            defs[0].plain_text,
            "(transitive) To distribute among a number of recipients, to give out as one's portion or share."
        );
    }

    #[test]
    fn example_and_quotation_lines_skipped() {
        let mut d = Diagnostics::new();
        let body = "# real definition\n#: example sentence\n#* quotation\n";
        let defs = extract_definitions("x", &pos_section(body), en().label_policy(), &mut d);
        assert_eq!(defs.len(), 1);
        assert_eq!(defs[0].raw_wikitext, "real definition");
    }

    #[test]
    fn empty_section_diagnosed() {
        let mut d = Diagnostics::new();
        let defs = extract_definitions("x", &pos_section("prose only\n"), en().label_policy(), &mut d);
        assert!(defs.is_empty());
        assert_eq!(d.count(DiagCategory::PosWithoutDefinitions), 1);
    }

    #[test]
    fn synonym_item_with_sense_gloss() {
        let mut d = Diagnostics::new();
        let defs = deal_definitions();
        let body = "=====Synonyms=====\n* {{sense|distribute among a number of recipients}} \
                    [[apportion]], [[divvy up]], [[share]], [[share out]], [[portion out]]\n";
        let rels = extract_relations("deal", &pos_section(body), &defs, &en(), &mut d);
        assert_eq!(rels.len(), 1);
        let r = &rels[0];
        assert_eq!(r.relation_type, "synonym");
        assert_eq!(r.meaning_summary.as_deref(), Some("distribute among a number of recipients"));
        assert_eq!(
            r.targets,
            vec!["[[apportion]]", "[[divvy up]]", "[[share]]", "[[share out]]", "[[portion out]]"]
        );
        assert_eq!(r.resolved_meaning_n, Some(0));
    }

    #[test]
    fn antonym_without_gloss_is_unbound() {
        let mut d = Diagnostics::new();
        let body = "====Antonyms====\n* [[foo]]\n";
        let rels = extract_relations("x", &pos_section(body), &deal_definitions(), &en(), &mut d);
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].relation_type, "antonym");
        assert_eq!(rels[0].meaning_summary, None);
        assert_eq!(rels[0].resolved_meaning_n, None);
    }

    #[test]
    fn section_without_relation_headings() {
        let mut d = Diagnostics::new();
        let rels = extract_relations("x", &pos_section("# def\n"), &[], &en(), &mut d);
        assert!(rels.is_empty());
    }

    #[test]
    fn empty_relation_item_diagnosed() {
        let mut d = Diagnostics::new();
        let body = "=====Synonyms=====\n* {{sense|some gloss}}\n";
        let rels = extract_relations("x", &pos_section(body), &[], &en(), &mut d);
        assert!(rels.is_empty());
        assert_eq!(d.count(DiagCategory::EmptyRelationItem), 1);
    }

    #[test]
    fn match_sense_examples() {
        let defs = deal_definitions();
        assert_eq!(match_sense("distribute among a number of recipients", &defs), Some(0));
        assert_eq!(match_sense("give out as one's portion or share", &defs), Some(0));
        assert_eq!(match_sense("completely unrelated words here", &defs), None);
    }

    #[test]
    fn match_sense_tie_is_unbound() {
        let mk = |n: u32, text: &str| Definition {
            meaning_n: n,
            raw_wikitext: text.to_string(),
            plain_text: text.to_string(),
            labels: vec![],
        };
        let defs = vec![mk(0, "red apple fruit"), mk(1, "red apple tree")];
        // gloss overlaps both equally; shared tokens keep both above 0.5
        assert_eq!(match_sense("red apple", &defs), None);
    }

    #[test]
    fn translations_basic_block() {
        let mut d = Diagnostics::new();
        let defs = deal_definitions();
        let body = "=====Translations=====\n\
                    {{trans-top|give out as one's portion or share}}\n\
                    * Swedish: {{t|sv|dela}}\n\
                    {{trans-bottom}}\n";
        let blocks = extract_translations("deal", &pos_section(body), &defs, &en(), &mut d);
        assert_eq!(blocks.len(), 1);
        let b = &blocks[0];
        assert_eq!(b.gloss.as_deref(), Some("give out as one's portion or share"));
        assert_eq!(b.entries.len(), 1);
        assert_eq!(b.entries[0].language.code, "sv");
        assert_eq!(b.entries[0].language.name, "Swedish");
        assert_eq!(b.entries[0].term, "dela");
        assert_eq!(b.resolved_meaning_n, Some(0));
    }

    #[test]
    fn underscore_spelling_equivalent() {
        let mut d = Diagnostics::new();
        let defs = deal_definitions();
        let hyphen = "{{trans-top|give out as one's portion or share}}\n* Swedish: {{t|sv|dela}}\n{{trans-bottom}}\n";
        let underscore = "{{trans_top|give out as one's portion or share}}\n* Swedish: {{t|sv|dela}}\n{{trans_bottom}}\n";
        let a = extract_translations("deal", &pos_section(hyphen), &defs, &en(), &mut d);
        let b = extract_translations("deal", &pos_section(underscore), &defs, &en(), &mut d);
        assert_eq!(a, b);
    }

    #[test]
    fn unresolved_language_diagnosed() {
        let mut d = Diagnostics::new();
        let body = "{{trans-top|g}}\n* Martian: {{t|xx-mars|zzz}}\n{{trans-bottom}}\n";
        let blocks = extract_translations("x", &pos_section(body), &[], &en(), &mut d);
        assert_eq!(blocks.len(), 1);
        assert!(blocks[0].entries.is_empty());
        assert_eq!(d.count(DiagCategory::UnresolvedTranslationLanguage), 1);
    }

    #[test]
    fn no_trans_top_no_blocks() {
        let mut d = Diagnostics::new();
        let blocks = extract_translations("x", &pos_section("# def\n"), &[], &en(), &mut d);
        assert!(blocks.is_empty());
    }

    #[test]
    fn plain_link_terms() {
        let mut d = Diagnostics::new();
        let body = "{{trans-top|g}}\n* German: [[teilen]]\n{{trans-bottom}}\n";
        let blocks = extract_translations("x", &pos_section(body), &[], &en(), &mut d);
        assert_eq!(blocks[0].entries.len(), 1);
        assert_eq!(blocks[0].entries[0].language.code, "de");
        assert_eq!(blocks[0].entries[0].term, "teilen");
    }

    #[test]
    fn code_fallback_when_name_unknown() {
        let mut d = Diagnostics::new();
        let body = "{{trans-top|g}}\n* Svenska: {{t|sv|dela}}\n{{trans-bottom}}\n";
        let blocks = extract_translations("x", &pos_section(body), &[], &en(), &mut d);
        assert_eq!(blocks[0].entries[0].language.code, "sv");
    }

    #[test]
    fn code_mismatch_diagnosed_but_kept() {
        let mut d = Diagnostics::new();
        let body = "{{trans-top|g}}\n* Swedish: {{t|de|dela}}\n{{trans-bottom}}\n";
        let blocks = extract_translations("x", &pos_section(body), &[], &en(), &mut d);
        assert_eq!(blocks[0].entries[0].language.code, "sv");
        assert_eq!(d.count(DiagCategory::TranslationCodeMismatch), 1);
    }

    #[test]
    fn duplicate_meaning_blocks_merged() {
        let mut d = Diagnostics::new();
        let defs = deal_definitions();
        let body = "{{trans-top|give out as one's portion or share}}\n* Swedish: {{t|sv|dela}}\n{{trans-bottom}}\n\
                    {{trans-top|give out as one's portion or share}}\n* German: {{t|de|teilen}}\n{{trans-bottom}}\n";
        let blocks = extract_translations("deal", &pos_section(body), &defs, &en(), &mut d);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].entries.len(), 2);
        assert_eq!(d.count(DiagCategory::DuplicateTranslationMeaning), 1);
    }

    #[test]
    fn multiple_terms_per_line_in_order() {
        let mut d = Diagnostics::new();
        let body = "{{trans-top|g}}\n* Swedish: {{t|sv|dela}}, {{t|sv|utdela}}\n{{trans-bottom}}\n";
        let blocks = extract_translations("x", &pos_section(body), &[], &en(), &mut d);
        let terms: Vec<&str> = blocks[0].entries.iter().map(|e| e.term.as_str()).collect();
        assert_eq!(terms, vec!["dela", "utdela"]);
    }
}
