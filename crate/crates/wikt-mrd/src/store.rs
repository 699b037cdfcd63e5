//! The relational machine-readable dictionary.
//!
//! Tables: page, lang, part_of_speech, lang_pos, wiki_text, meaning,
//! inflection, page_inflection, wiki_text_words, relation_type, relation,
//! translation, translation_entry. Wikitext is interned; internal links are
//! indexed into lemma/inflection rows on first interning; per-language
//! translation counters are maintained and independently verifiable.

use std::collections::HashMap;

use serde::Serialize;

use crate::extract::{Definition, RelationGroup, TranslationBlock};
use crate::profile::{LanguageInfo, ProfileId, RELATION_TYPES};
use crate::segment::LangPosKey;
use crate::wikitext::{scan_internal_links, strip_markup, TemplateRenderPolicy};

pub type RowId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageRow {
    pub id: RowId,
    pub page_title: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangRow {
    pub id: RowId,
    pub code: String,
    pub name: String,
    pub n_translation: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartOfSpeechRow {
    pub id: RowId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangPosRow {
    pub id: RowId,
    pub page_id: RowId,
    pub lang_id: RowId,
    pub pos_id: RowId,
    pub etymology_n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WikiTextRow {
    pub id: RowId,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeaningRow {
    pub id: RowId,
    pub lang_pos_id: RowId,
    pub meaning_n: u32,
    pub wiki_text_id: RowId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflectionRow {
    pub id: RowId,
    pub inflected_form: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageInflectionRow {
    pub id: RowId,
    pub page_id: RowId,
    pub inflection_id: RowId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WikiTextWordsRow {
    pub id: RowId,
    pub wiki_text_id: RowId,
    pub page_inflection_id: RowId,
    /// 0-based link ordinal within the wikitext.
    pub position: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTypeRow {
    pub id: RowId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationRow {
    pub id: RowId,
    pub meaning_id: Option<RowId>,
    pub wiki_text_id: RowId,
    pub relation_type_id: RowId,
    pub meaning_summary: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationRow {
    pub id: RowId,
    pub lang_pos_id: RowId,
    pub meaning_id: Option<RowId>,
    pub gloss: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationEntryRow {
    pub id: RowId,
    pub translation_id: RowId,
    pub lang_id: RowId,
    pub wiki_text_id: RowId,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("wiki text must be non-empty")]
    EmptyWikiText,
    #[error("duplicate lang_pos key: {0}")]
    DuplicateLangPos(String),
    #[error("unregistered relation type {0:?}")]
    UnknownRelationType(String),
    #[error("resolved meaning {0} does not index an extracted definition")]
    BadMeaningReference(u32),
}

/// Integrity-check finding categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindingCategory {
    ForeignKey,
    Uniqueness,
    CounterMismatch,
    MeaningDensity,
    RelationTypeCount,
    LinkPosition,
}

impl FindingCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingCategory::ForeignKey => "foreign_key",
            FindingCategory::Uniqueness => "uniqueness",
            FindingCategory::CounterMismatch => "counter_mismatch",
            FindingCategory::MeaningDensity => "meaning_density",
            FindingCategory::RelationTypeCount => "relation_type_count",
            FindingCategory::LinkPosition => "link_position",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Finding {
    pub category: FindingCategory,
    pub detail: String,
}

macro_rules! table {
    ($vec:ident, $map:ident, $row:ty) => {
        pub fn $vec(&self) -> &[$row] {
            &self.$vec
        }
    };
}

/// The in-memory relational store. Single writer, many readers.
#[derive(Debug, Clone)]
pub struct Store {
    pub profile_id: ProfileId,
    pages: Vec<PageRow>,
    page_index: HashMap<RowId, usize>,
    page_by_title: HashMap<String, RowId>,
    langs: Vec<LangRow>,
    lang_index: HashMap<RowId, usize>,
    lang_by_code: HashMap<String, RowId>,
    pos: Vec<PartOfSpeechRow>,
    pos_index: HashMap<RowId, usize>,
    pos_by_name: HashMap<String, RowId>,
    lang_pos: Vec<LangPosRow>,
    lang_pos_index: HashMap<RowId, usize>,
    lang_pos_by_key: HashMap<(RowId, RowId, RowId, u32), RowId>,
    wiki_texts: Vec<WikiTextRow>,
    wiki_text_index: HashMap<RowId, usize>,
    wiki_text_by_text: HashMap<String, RowId>,
    meanings: Vec<MeaningRow>,
    meaning_index: HashMap<RowId, usize>,
    inflections: Vec<InflectionRow>,
    inflection_index: HashMap<RowId, usize>,
    inflection_by_form: HashMap<String, RowId>,
    page_inflections: Vec<PageInflectionRow>,
    page_inflection_index: HashMap<RowId, usize>,
    page_inflection_by_pair: HashMap<(RowId, RowId), RowId>,
    wiki_text_words: Vec<WikiTextWordsRow>,
    relation_types: Vec<RelationTypeRow>,
    relation_type_by_name: HashMap<String, RowId>,
    relations: Vec<RelationRow>,
    translations: Vec<TranslationRow>,
    translation_index: HashMap<RowId, usize>,
    translation_by_meaning: HashMap<RowId, RowId>,
    translation_entries: Vec<TranslationEntryRow>,
}

impl Store {
    /// Fresh store with the nine relation types registered up front.
    pub fn new(profile_id: ProfileId) -> Store {
        let mut store = Store {
            profile_id,
            pages: Vec::new(),
            page_index: HashMap::new(),
            page_by_title: HashMap::new(),
            langs: Vec::new(),
            lang_index: HashMap::new(),
            lang_by_code: HashMap::new(),
            pos: Vec::new(),
            pos_index: HashMap::new(),
            pos_by_name: HashMap::new(),
            lang_pos: Vec::new(),
            lang_pos_index: HashMap::new(),
            lang_pos_by_key: HashMap::new(),
            wiki_texts: Vec::new(),
            wiki_text_index: HashMap::new(),
            wiki_text_by_text: HashMap::new(),
            meanings: Vec::new(),
            meaning_index: HashMap::new(),
            inflections: Vec::new(),
            inflection_index: HashMap::new(),
            inflection_by_form: HashMap::new(),
            page_inflections: Vec::new(),
            page_inflection_index: HashMap::new(),
            page_inflection_by_pair: HashMap::new(),
            wiki_text_words: Vec::new(),
            relation_types: Vec::new(),
            relation_type_by_name: HashMap::new(),
            relations: Vec::new(),
            translations: Vec::new(),
            translation_index: HashMap::new(),
            translation_by_meaning: HashMap::new(),
            translation_entries: Vec::new(),
        };
        for name in RELATION_TYPES {
            let id = store.relation_types.len() as RowId + 1;
            store.relation_types.push(RelationTypeRow { id, name: name.to_string() });
            store.relation_type_by_name.insert(name.to_string(), id);
        }
        store
    }

    table!(pages, page_index, PageRow);
    table!(langs, lang_index, LangRow);
    table!(pos, pos_index, PartOfSpeechRow);
    table!(lang_pos, lang_pos_index, LangPosRow);
    table!(wiki_texts, wiki_text_index, WikiTextRow);
    table!(meanings, meaning_index, MeaningRow);
    table!(inflections, inflection_index, InflectionRow);
    table!(page_inflections, page_inflection_index, PageInflectionRow);

    pub fn wiki_text_words(&self) -> &[WikiTextWordsRow] {
        &self.wiki_text_words
    }

    pub fn relation_types(&self) -> &[RelationTypeRow] {
        &self.relation_types
    }

    pub fn relations(&self) -> &[RelationRow] {
        &self.relations
    }

    pub fn translations(&self) -> &[TranslationRow] {
        &self.translations
    }

    pub fn translation_entries(&self) -> &[TranslationEntryRow] {
        &self.translation_entries
    }

    pub fn page(&self, id: RowId) -> Option<&PageRow> {
        self.page_index.get(&id).map(|&i| &self.pages[i])
    }

    pub fn lang(&self, id: RowId) -> Option<&LangRow> {
        self.lang_index.get(&id).map(|&i| &self.langs[i])
    }

    pub fn pos_row(&self, id: RowId) -> Option<&PartOfSpeechRow> {
        self.pos_index.get(&id).map(|&i| &self.pos[i])
    }

    pub fn lang_pos_row(&self, id: RowId) -> Option<&LangPosRow> {
        self.lang_pos_index.get(&id).map(|&i| &self.lang_pos[i])
    }

    pub fn wiki_text(&self, id: RowId) -> Option<&WikiTextRow> {
        self.wiki_text_index.get(&id).map(|&i| &self.wiki_texts[i])
    }

    pub fn meaning(&self, id: RowId) -> Option<&MeaningRow> {
        self.meaning_index.get(&id).map(|&i| &self.meanings[i])
    }

    pub fn inflection(&self, id: RowId) -> Option<&InflectionRow> {
        self.inflection_index.get(&id).map(|&i| &self.inflections[i])
    }

    pub fn page_inflection(&self, id: RowId) -> Option<&PageInflectionRow> {
        self.page_inflection_index.get(&id).map(|&i| &self.page_inflections[i])
    }

    pub fn relation_type(&self, id: RowId) -> Option<&RelationTypeRow> {
        self.relation_types.iter().find(|r| r.id == id)
    }

    pub fn translation(&self, id: RowId) -> Option<&TranslationRow> {
        self.translation_index.get(&id).map(|&i| &self.translations[i])
    }

    pub fn page_id_by_title(&self, title: &str) -> Option<RowId> {
        self.page_by_title.get(title).copied()
    }

    /// Page row for a title, created as a title-only stub when absent.
    pub fn ensure_page(&mut self, title: &str) -> RowId {
        if let Some(&id) = self.page_by_title.get(title) {
            return id;
        }
        let id = self.next_id(self.pages.len());
        self.page_index.insert(id, self.pages.len());
        self.pages.push(PageRow { id, page_title: title.to_string() });
        self.page_by_title.insert(title.to_string(), id);
        id
    }

    fn next_id(&self, len: usize) -> RowId {
        len as RowId + 1
    }

    pub fn ensure_lang(&mut self, language: &LanguageInfo) -> RowId {
        if let Some(&id) = self.lang_by_code.get(&language.code) {
            return id;
        }
        let id = self.next_id(self.langs.len());
        self.lang_index.insert(id, self.langs.len());
        self.langs.push(LangRow {
            id,
            code: language.code.clone(),
            name: language.name.clone(),
            n_translation: 0,
        });
        self.lang_by_code.insert(language.code.clone(), id);
        id
    }

    pub fn ensure_pos(&mut self, name: &str) -> RowId {
        let name = name.trim().to_lowercase();
        if let Some(&id) = self.pos_by_name.get(&name) {
            return id;
        }
        let id = self.next_id(self.pos.len());
        self.pos_index.insert(id, self.pos.len());
        self.pos.push(PartOfSpeechRow { id, name: name.clone() });
        self.pos_by_name.insert(name, id);
        id
    }

    fn ensure_inflection(&mut self, form: &str) -> RowId {
        if let Some(&id) = self.inflection_by_form.get(form) {
            return id;
        }
        let id = self.next_id(self.inflections.len());
        self.inflection_index.insert(id, self.inflections.len());
        self.inflections.push(InflectionRow { id, inflected_form: form.to_string() });
        self.inflection_by_form.insert(form.to_string(), id);
        id
    }

    fn ensure_page_inflection(&mut self, page_id: RowId, inflection_id: RowId) -> RowId {
        if let Some(&id) = self.page_inflection_by_pair.get(&(page_id, inflection_id)) {
            return id;
        }
        let id = self.next_id(self.page_inflections.len());
        self.page_inflection_index.insert(id, self.page_inflections.len());
        self.page_inflections.push(PageInflectionRow { id, page_id, inflection_id });
        self.page_inflection_by_pair.insert((page_id, inflection_id), id);
        id
    }

    /// Intern raw wikitext; the first insertion also indexes its links.
    pub fn intern_wiki_text(&mut self, text: &str) -> Result<RowId, StoreError> {
        if text.trim().is_empty() {
            return Err(StoreError::EmptyWikiText);
        }
        if let Some(&id) = self.wiki_text_by_text.get(text) {
            return Ok(id);
        }
        let id = self.next_id(self.wiki_texts.len());
        self.wiki_text_index.insert(id, self.wiki_texts.len());
        self.wiki_texts.push(WikiTextRow { id, text: text.to_string() });
        self.wiki_text_by_text.insert(text.to_string(), id);
        self.index_links(id);
        Ok(id)
    }

    /// Record every internal link of an interned text as
    /// page / inflection / page_inflection / wiki_text_words rows.
    ///
    /// Link targets without an entry of their own become title-only page
    /// stubs. Returns the number of link records created.
    pub fn index_links(&mut self, wiki_text_id: RowId) -> usize {
        let Some(row) = self.wiki_text(wiki_text_id) else {
            return 0;
        };
        let links = scan_internal_links(&row.text);
        let mut count = 0usize;
        for (position, link) in links.into_iter().enumerate() {
            let page_id = self.ensure_page(&link.target);
            let inflection_id = self.ensure_inflection(&link.label);
            let page_inflection_id = self.ensure_page_inflection(page_id, inflection_id);
            let id = self.next_id(self.wiki_text_words.len());
            self.wiki_text_words.push(WikiTextWordsRow {
                id,
                wiki_text_id,
                page_inflection_id,
                position: position as u32,
            });
            count += 1;
        }
        count
    }

    /// Store one extracted entry under its (page, lang, pos, etymology) key.
    pub fn store_entry(
        &mut self,
        key: &LangPosKey,
        definitions: &[Definition],
        relations: &[RelationGroup],
        translations: &[TranslationBlock],
    ) -> Result<RowId, StoreError> {
        let page_id = self.ensure_page(&key.page_title);
        let lang_id = self.ensure_lang(&key.language);
        let pos_id = self.ensure_pos(&key.pos_name);
        let tuple = (page_id, lang_id, pos_id, key.etymology_n);
        if self.lang_pos_by_key.contains_key(&tuple) {
            return Err(StoreError::DuplicateLangPos(format!(
                "{}/{}/{}/{}",
                key.page_title, key.language.code, key.pos_name, key.etymology_n
            )));
        }
        let lang_pos_id = self.next_id(self.lang_pos.len());
        self.lang_pos_index.insert(lang_pos_id, self.lang_pos.len());
        self.lang_pos.push(LangPosRow {
            id: lang_pos_id,
            page_id,
            lang_id,
            pos_id,
            etymology_n: key.etymology_n,
        });
        self.lang_pos_by_key.insert(tuple, lang_pos_id);

        let mut meaning_ids: HashMap<u32, RowId> = HashMap::new();
        for def in definitions {
            let wiki_text_id = self.intern_wiki_text(&def.raw_wikitext)?;
            let id = self.next_id(self.meanings.len());
            self.meaning_index.insert(id, self.meanings.len());
            self.meanings.push(MeaningRow {
                id,
                lang_pos_id,
                meaning_n: def.meaning_n,
                wiki_text_id,
            });
            meaning_ids.insert(def.meaning_n, id);
        }

        for group in relations {
            let relation_type_id = *self
                .relation_type_by_name
                .get(&group.relation_type)
                .ok_or_else(|| StoreError::UnknownRelationType(group.relation_type.clone()))?;
            let meaning_id = match group.resolved_meaning_n {
                Some(n) => {
                    Some(*meaning_ids.get(&n).ok_or(StoreError::BadMeaningReference(n))?)
                }
                None => None,
            };
            for target in &group.targets {
                let wiki_text_id = self.intern_wiki_text(target)?;
                let id = self.next_id(self.relations.len());
                self.relations.push(RelationRow {
                    id,
                    meaning_id,
                    wiki_text_id,
                    relation_type_id,
                    meaning_summary: group.meaning_summary.clone(),
                });
            }
        }

        for block in translations {
            let meaning_id = match block.resolved_meaning_n {
                Some(n) => {
                    Some(*meaning_ids.get(&n).ok_or(StoreError::BadMeaningReference(n))?)
                }
                None => None,
            };
            // one translation record per meaning; a rebound block merges
            let translation_id = match meaning_id.and_then(|m| self.translation_by_meaning.get(&m))
            {
                Some(&existing) => existing,
                None => {
                    let id = self.next_id(self.translations.len());
                    self.translation_index.insert(id, self.translations.len());
                    self.translations.push(TranslationRow {
                        id,
                        lang_pos_id,
                        meaning_id,
                        gloss: block.gloss.clone(),
                    });
                    if let Some(m) = meaning_id {
                        self.translation_by_meaning.insert(m, id);
                    }
                    id
                }
            };
            for entry in &block.entries {
                let lang_id = self.ensure_lang(&entry.language);
                let wiki_text_id = self.intern_wiki_text(&entry.term)?;
                let id = self.next_id(self.translation_entries.len());
                self.translation_entries.push(TranslationEntryRow {
                    id,
                    translation_id,
                    lang_id,
                    wiki_text_id,
                });
                let idx = self.lang_index[&lang_id];
                self.langs[idx].n_translation += 1;
            }
        }
        Ok(lang_pos_id)
    }

    /// Assemble the word-card view of one page.
    pub fn lookup_word_card(
        &self,
        page_title: &str,
        policy: &TemplateRenderPolicy,
    ) -> Option<WordCard> {
        let page_id = self.page_id_by_title(page_title)?;
        let mut sections: Vec<CardSection> = Vec::new();
        for lp in self.lang_pos.iter().filter(|lp| lp.page_id == page_id) {
            let lang = self.lang(lp.lang_id)?;
            let pos = self.pos_row(lp.pos_id)?;
            let mut meanings: Vec<&MeaningRow> =
                self.meanings.iter().filter(|m| m.lang_pos_id == lp.id).collect();
            meanings.sort_by_key(|m| m.meaning_n);
            let card_meanings: Vec<CardMeaning> = meanings
                .iter()
                .filter_map(|m| {
                    let raw = &self.wiki_text(m.wiki_text_id)?.text;
                    Some(CardMeaning {
                        meaning_n: m.meaning_n,
                        raw_wikitext: raw.clone(),
                        plain_text: strip_markup(raw, policy),
                    })
                })
                .collect();
            let meaning_ids: Vec<RowId> = meanings.iter().map(|m| m.id).collect();
            let meaning_n_by_id: HashMap<RowId, u32> =
                meanings.iter().map(|m| (m.id, m.meaning_n)).collect();

            let mut relations: Vec<CardRelationGroup> = Vec::new();
            for rt in &self.relation_types {
                let items: Vec<CardRelation> = self
                    .relations
                    .iter()
                    .filter(|r| {
                        r.relation_type_id == rt.id
                            && r.meaning_id.is_some_and(|m| meaning_ids.contains(&m))
                    })
                    .filter_map(|r| {
                        let target = self.wiki_text(r.wiki_text_id)?.text.clone();
                        Some(CardRelation {
                            target_plain: strip_markup(&target, policy),
                            target,
                            meaning_summary: r.meaning_summary.clone(),
                            meaning_n: r.meaning_id.and_then(|m| meaning_n_by_id.get(&m)).copied(),
                        })
                    })
                    .collect();
                if !items.is_empty() {
                    relations.push(CardRelationGroup { relation_type: rt.name.clone(), items });
                }
            }

            let mut translations: Vec<CardTranslationBlock> = Vec::new();
            for tr in self.translations.iter().filter(|t| t.lang_pos_id == lp.id) {
                let mut terms: Vec<CardTranslationTerm> = self
                    .translation_entries
                    .iter()
                    .filter(|e| e.translation_id == tr.id)
                    .filter_map(|e| {
                        Some(CardTranslationTerm {
                            language: self.lang(e.lang_id)?.name.clone(),
                            term: self.wiki_text(e.wiki_text_id)?.text.clone(),
                        })
                    })
                    .collect();
                terms.sort();
                translations.push(CardTranslationBlock {
                    gloss: tr.gloss.clone(),
                    meaning_n: tr.meaning_id.and_then(|m| meaning_n_by_id.get(&m)).copied(),
                    terms,
                });
            }
            translations.sort_by(|a, b| a.gloss.cmp(&b.gloss));

            sections.push(CardSection {
                language: lang.name.clone(),
                language_code: lang.code.clone(),
                pos: pos.name.clone(),
                etymology_n: lp.etymology_n,
                meanings: card_meanings,
                relations,
                translations,
            });
        }
        sections.sort_by(|a, b| {
            (&a.language, a.etymology_n, &a.pos).cmp(&(&b.language, b.etymology_n, &b.pos))
        });
        Some(WordCard { page_title: page_title.to_string(), sections })
    }

    /// Check every store invariant; a healthy store yields no findings.
    pub fn verify_integrity(&self) -> Vec<Finding> {
        let mut findings = Vec::new();
        let mut push = |category: FindingCategory, detail: String| {
            findings.push(Finding { category, detail })
        };

        // relation_type cardinality, checked against the registered set
        if self.relation_types.len() != RELATION_TYPES.len() {
            push(
                FindingCategory::RelationTypeCount,
                format!("expected {} relation types, found {}", RELATION_TYPES.len(), self.relation_types.len()),
            );
        }

        // uniqueness of natural keys
        check_unique(self.pages.iter().map(|r| (&r.page_title, r.id)), "page.page_title", &mut push);
        check_unique(self.langs.iter().map(|r| (&r.code, r.id)), "lang.code", &mut push);
        check_unique(self.langs.iter().map(|r| (&r.name, r.id)), "lang.name", &mut push);
        check_unique(self.pos.iter().map(|r| (&r.name, r.id)), "part_of_speech.name", &mut push);
        check_unique(self.wiki_texts.iter().map(|r| (&r.text, r.id)), "wiki_text.text", &mut push);
        check_unique(
            self.inflections.iter().map(|r| (&r.inflected_form, r.id)),
            "inflection.inflected_form",
            &mut push,
        );
        check_unique_key(
            self.lang_pos.iter().map(|r| ((r.page_id, r.lang_id, r.pos_id, r.etymology_n), r.id)),
            "lang_pos (page,lang,pos,etymology_n)",
            &mut push,
        );
        check_unique_key(
            self.meanings.iter().map(|r| ((r.lang_pos_id, r.meaning_n), r.id)),
            "meaning (lang_pos_id,meaning_n)",
            &mut push,
        );
        check_unique_key(
            self.page_inflections.iter().map(|r| ((r.page_id, r.inflection_id), r.id)),
            "page_inflection (page_id,inflection_id)",
            &mut push,
        );
        check_unique_key(
            self.translations.iter().filter_map(|r| r.meaning_id.map(|m| (m, r.id))),
            "translation.meaning_id",
            &mut push,
        );
        check_unique_key(
            self.wiki_text_words.iter().map(|r| ((r.wiki_text_id, r.position), r.id)),
            "wiki_text_words (wiki_text_id,position)",
            &mut push,
        );

        // referential integrity
        for r in &self.lang_pos {
            if self.page(r.page_id).is_none() {
                push(FindingCategory::ForeignKey, format!("lang_pos {} -> missing page {}", r.id, r.page_id));
            }
            if self.lang(r.lang_id).is_none() {
                push(FindingCategory::ForeignKey, format!("lang_pos {} -> missing lang {}", r.id, r.lang_id));
            }
            if self.pos_row(r.pos_id).is_none() {
                push(FindingCategory::ForeignKey, format!("lang_pos {} -> missing pos {}", r.id, r.pos_id));
            }
        }
        for r in &self.meanings {
            if self.lang_pos_row(r.lang_pos_id).is_none() {
                push(FindingCategory::ForeignKey, format!("meaning {} -> missing lang_pos {}", r.id, r.lang_pos_id));
            }
            if self.wiki_text(r.wiki_text_id).is_none() {
                push(FindingCategory::ForeignKey, format!("meaning {} -> missing wiki_text {}", r.id, r.wiki_text_id));
            }
        }
        for r in &self.page_inflections {
            if self.page(r.page_id).is_none() {
                push(FindingCategory::ForeignKey, format!("page_inflection {} -> missing page {}", r.id, r.page_id));
            }
            if self.inflection(r.inflection_id).is_none() {
                push(FindingCategory::ForeignKey, format!("page_inflection {} -> missing inflection {}", r.id, r.inflection_id));
            }
        }
        for r in &self.wiki_text_words {
            if self.wiki_text(r.wiki_text_id).is_none() {
                push(FindingCategory::ForeignKey, format!("wiki_text_words {} -> missing wiki_text {}", r.id, r.wiki_text_id));
            }
            if self.page_inflection(r.page_inflection_id).is_none() {
                push(FindingCategory::ForeignKey, format!("wiki_text_words {} -> missing page_inflection {}", r.id, r.page_inflection_id));
            }
        }
        for r in &self.relations {
            if let Some(m) = r.meaning_id {
                if self.meaning(m).is_none() {
                    push(FindingCategory::ForeignKey, format!("relation {} -> missing meaning {m}", r.id));
                }
            }
            if self.wiki_text(r.wiki_text_id).is_none() {
                push(FindingCategory::ForeignKey, format!("relation {} -> missing wiki_text {}", r.id, r.wiki_text_id));
            }
            if self.relation_type(r.relation_type_id).is_none() {
                push(FindingCategory::ForeignKey, format!("relation {} -> missing relation_type {}", r.id, r.relation_type_id));
            }
        }
        for r in &self.translations {
            if self.lang_pos_row(r.lang_pos_id).is_none() {
                push(FindingCategory::ForeignKey, format!("translation {} -> missing lang_pos {}", r.id, r.lang_pos_id));
            }
            if let Some(m) = r.meaning_id {
                if self.meaning(m).is_none() {
                    push(FindingCategory::ForeignKey, format!("translation {} -> missing meaning {m}", r.id));
                }
            }
        }
        for r in &self.translation_entries {
            if self.translation(r.translation_id).is_none() {
                push(FindingCategory::ForeignKey, format!("translation_entry {} -> missing translation {}", r.id, r.translation_id));
            }
            if self.lang(r.lang_id).is_none() {
                push(FindingCategory::ForeignKey, format!("translation_entry {} -> missing lang {}", r.id, r.lang_id));
            }
            if self.wiki_text(r.wiki_text_id).is_none() {
                push(FindingCategory::ForeignKey, format!("translation_entry {} -> missing wiki_text {}", r.id, r.wiki_text_id));
            }
        }

        // counter correctness: brute-force recount per language
        let mut recount: HashMap<RowId, u64> = HashMap::new();
        for e in &self.translation_entries {
            *recount.entry(e.lang_id).or_insert(0) += 1;
        }
        for lang in &self.langs {
            let actual = recount.get(&lang.id).copied().unwrap_or(0);
            if lang.n_translation != actual {
                push(
                    FindingCategory::CounterMismatch,
                    format!(
                        "lang {} ({}): n_translation={} but {} entries",
                        lang.id, lang.code, lang.n_translation, actual
                    ),
                );
            }
        }

        // meaning density per lang_pos
        let mut by_lang_pos: HashMap<RowId, Vec<u32>> = HashMap::new();
        for m in &self.meanings {
            by_lang_pos.entry(m.lang_pos_id).or_default().push(m.meaning_n);
        }
        for (lang_pos_id, mut ns) in by_lang_pos {
            ns.sort_unstable();
            if ns.iter().enumerate().any(|(i, &n)| n != i as u32) {
                push(
                    FindingCategory::MeaningDensity,
                    format!("lang_pos {lang_pos_id}: meaning_n not dense 0..{}: {ns:?}", ns.len()),
                );
            }
        }

        findings
    }

    /// Table row counts keyed by table name, for summaries.
    pub fn table_counts(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("page", self.pages.len()),
            ("lang", self.langs.len()),
            ("part_of_speech", self.pos.len()),
            ("lang_pos", self.lang_pos.len()),
            ("wiki_text", self.wiki_texts.len()),
            ("meaning", self.meanings.len()),
            ("inflection", self.inflections.len()),
            ("page_inflection", self.page_inflections.len()),
            ("wiki_text_words", self.wiki_text_words.len()),
            ("relation_type", self.relation_types.len()),
            ("relation", self.relations.len()),
            ("translation", self.translations.len()),
            ("translation_entry", self.translation_entries.len()),
        ]
    }

    /// Rebuild a store from raw rows (used by import). Indexes are rebuilt;
    /// semantic problems are left for `verify_integrity`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_rows(
        profile_id: ProfileId,
        pages: Vec<PageRow>,
        langs: Vec<LangRow>,
        pos: Vec<PartOfSpeechRow>,
        lang_pos: Vec<LangPosRow>,
        wiki_texts: Vec<WikiTextRow>,
        meanings: Vec<MeaningRow>,
        inflections: Vec<InflectionRow>,
        page_inflections: Vec<PageInflectionRow>,
        wiki_text_words: Vec<WikiTextWordsRow>,
        relation_types: Vec<RelationTypeRow>,
        relations: Vec<RelationRow>,
        translations: Vec<TranslationRow>,
        translation_entries: Vec<TranslationEntryRow>,
    ) -> Store {
        let mut store = Store::new(profile_id);
        store.pages = pages;
        store.langs = langs;
        store.pos = pos;
        store.lang_pos = lang_pos;
        store.wiki_texts = wiki_texts;
        store.meanings = meanings;
        store.inflections = inflections;
        store.page_inflections = page_inflections;
        store.wiki_text_words = wiki_text_words;
        store.relation_types = relation_types;
        store.relations = relations;
        store.translations = translations;
        store.translation_entries = translation_entries;
        store.rebuild_indexes();
        store
    }

    fn rebuild_indexes(&mut self) {
        self.page_index = self.pages.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.page_by_title =
            self.pages.iter().map(|r| (r.page_title.clone(), r.id)).collect();
        self.lang_index = self.langs.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.lang_by_code = self.langs.iter().map(|r| (r.code.clone(), r.id)).collect();
        self.pos_index = self.pos.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.pos_by_name = self.pos.iter().map(|r| (r.name.clone(), r.id)).collect();
        self.lang_pos_index = self.lang_pos.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.lang_pos_by_key = self
            .lang_pos
            .iter()
            .map(|r| ((r.page_id, r.lang_id, r.pos_id, r.etymology_n), r.id))
            .collect();
        self.wiki_text_index =
            self.wiki_texts.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.wiki_text_by_text =
            self.wiki_texts.iter().map(|r| (r.text.clone(), r.id)).collect();
        self.meaning_index = self.meanings.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.inflection_index =
            self.inflections.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.inflection_by_form =
            self.inflections.iter().map(|r| (r.inflected_form.clone(), r.id)).collect();
        self.page_inflection_index =
            self.page_inflections.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.page_inflection_by_pair = self
            .page_inflections
            .iter()
            .map(|r| ((r.page_id, r.inflection_id), r.id))
            .collect();
        self.relation_type_by_name =
            self.relation_types.iter().map(|r| (r.name.clone(), r.id)).collect();
        self.translation_index =
            self.translations.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        self.translation_by_meaning = self
            .translations
            .iter()
            .filter_map(|r| r.meaning_id.map(|m| (m, r.id)))
            .collect();
    }
}

fn check_unique<'a, K: Ord + std::fmt::Debug + 'a>(
    items: impl Iterator<Item = (K, RowId)>,
    what: &str,
    push: &mut impl FnMut(FindingCategory, String),
) {
    let mut seen: std::collections::BTreeMap<K, RowId> = std::collections::BTreeMap::new();
    for (key, id) in items {
        if let Some(first) = seen.get(&key) {
            push(
                FindingCategory::Uniqueness,
                format!("{what}: {key:?} shared by rows {first} and {id}"),
            );
        } else {
            seen.insert(key, id);
        }
    }
}

fn check_unique_key<K: Ord + std::fmt::Debug>(
    items: impl Iterator<Item = (K, RowId)>,
    what: &str,
    push: &mut impl FnMut(FindingCategory, String),
) {
    check_unique(items, what, push)
}

/// Per-entry view backing the word-card display.
#[derive(Debug, Clone, Serialize)]
pub struct WordCard {
    pub page_title: String,
    pub sections: Vec<CardSection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CardSection {
    pub language: String,
    pub language_code: String,
    pub pos: String,
    pub etymology_n: u32,
    pub meanings: Vec<CardMeaning>,
    pub relations: Vec<CardRelationGroup>,
    pub translations: Vec<CardTranslationBlock>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CardMeaning {
    pub meaning_n: u32,
    pub raw_wikitext: String,
    pub plain_text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CardRelationGroup {
    pub relation_type: String,
    pub items: Vec<CardRelation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CardRelation {
    pub target: String,
    pub target_plain: String,
    pub meaning_summary: Option<String>,
    pub meaning_n: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CardTranslationBlock {
    pub gloss: Option<String>,
    pub meaning_n: Option<u32>,
    pub terms: Vec<CardTranslationTerm>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct CardTranslationTerm {
    pub language: String,
    pub term: String,
}
