//! Diagnostics collected while parsing.
//!
//! Malformed or unrecognized markup is never fatal. Every skipped construct
//! is recorded as a [`Diag`] so a run can account for everything it saw.

use std::collections::BTreeMap;
use std::fmt;

/// Category of a skipped or suspicious construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagCategory {
    /// A level-2 heading that did not resolve to a registered language.
    UnknownLanguage,
    /// A page with zero resolvable language sections.
    NoLanguageSections,
    /// A repeated etymology number inside one language section.
    DuplicateEtymology,
    /// An etymology heading at a level other than 3.
    MisplacedEtymologyHeading,
    /// A part-of-speech section with no `#` definition lines.
    PosWithoutDefinitions,
    /// Unbalanced `{{`/`}}` sites found while scanning a page.
    UnbalancedBraces,
    /// A relation list item left with no targets after gloss removal.
    EmptyRelationItem,
    /// A translation line whose language could not be resolved.
    UnresolvedTranslationLanguage,
    /// A translation template whose code disagrees with the line's language name.
    TranslationCodeMismatch,
    /// Two translation blocks resolved to the same meaning (merged).
    DuplicateTranslationMeaning,
    /// A second section produced an already-stored (page, lang, pos, etym) key.
    DuplicateLangPos,
    /// A redirect page dropped by the main-namespace filter.
    SkippedRedirect,
    /// A non-main-namespace page dropped by the filter.
    SkippedNamespace,
}

impl DiagCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCategory::UnknownLanguage => "unknown_language",
            DiagCategory::NoLanguageSections => "no_language_sections",
            DiagCategory::DuplicateEtymology => "duplicate_etymology",
            DiagCategory::MisplacedEtymologyHeading => "misplaced_etymology_heading",
            DiagCategory::PosWithoutDefinitions => "pos_without_definitions",
            DiagCategory::UnbalancedBraces => "unbalanced_braces",
            DiagCategory::EmptyRelationItem => "empty_relation_item",
            DiagCategory::UnresolvedTranslationLanguage => "unresolved_translation_language",
            DiagCategory::TranslationCodeMismatch => "translation_code_mismatch",
            DiagCategory::DuplicateTranslationMeaning => "duplicate_translation_meaning",
            DiagCategory::DuplicateLangPos => "duplicate_lang_pos",
            DiagCategory::SkippedRedirect => "skipped_redirect",
            DiagCategory::SkippedNamespace => "skipped_namespace",
        }
    }
}

impl fmt::Display for DiagCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One diagnostic record: what was skipped, on which page, and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diag {
    pub category: DiagCategory,
    pub page: String,
    pub detail: String,
}

impl Diag {
    pub fn new(category: DiagCategory, page: impl Into<String>, detail: impl Into<String>) -> Self {
        Diag { category, page: page.into(), detail: detail.into() }
    }
}

/// An append-only collection of diagnostics with per-category counts.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    items: Vec<Diag>,
}

impl Diagnostics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, category: DiagCategory, page: impl Into<String>, detail: impl Into<String>) {
        self.items.push(Diag::new(category, page, detail));
    }

    pub fn extend(&mut self, other: Diagnostics) {
        self.items.extend(other.items);
    }

    pub fn items(&self) -> &[Diag] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn count(&self, category: DiagCategory) -> usize {
        self.items.iter().filter(|d| d.category == category).count()
    }

    /// Per-category totals keyed by the stable category name.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut map = BTreeMap::new();
        for d in &self.items {
            *map.entry(d.category.as_str().to_string()).or_insert(0) += 1;
        }
        map
    }
}
