//! Per-wiktionary configuration: language registry, part-of-speech heading
//! inventory, relation-heading mapping, and label-template policy.
//!
//! Registries are plain text data files so the language inventory can grow
//! without recompilation. Built-in copies of the shipped files are embedded,
//! and a registry directory can override the language table at startup.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::wikitext::TemplateRenderPolicy;

/// The nine semantic relation types registered before parsing begins.
pub const RELATION_TYPES: [&str; 9] = [
    "synonym",
    "antonym",
    "hypernym",
    "hyponym",
    "holonym",
    "meronym",
    "troponym",
    "coordinate term",
    "see-also",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileId {
    En,
    Ru,
}

impl ProfileId {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileId::En => "en",
            ProfileId::Ru => "ru",
        }
    }
}

impl fmt::Display for ProfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProfileId {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, ProfileError> {
        match s {
            "en" => Ok(ProfileId::En),
            "ru" => Ok(ProfileId::Ru),
            other => Err(ProfileError::UnknownProfile(other.to_string())),
        }
    }
}

/// One registered language: a short lowercase code and a canonical name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageInfo {
    pub code: String,
    pub name: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error("unknown profile {0:?} (expected \"en\" or \"ru\")")]
    UnknownProfile(String),
    #[error("cannot read {file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
}

/// A complete, immutable per-wiktionary configuration.
#[derive(Debug, Clone)]
pub struct Profile {
    pub id: ProfileId,
    languages: Vec<LanguageInfo>,
    by_code: HashMap<String, usize>,
    by_name: HashMap<String, usize>,
    pos_names: BTreeSet<String>,
    relation_headings: HashMap<String, String>,
    label_names: BTreeSet<String>,
    policy: TemplateRenderPolicy,
    /// Full recognized-code count recorded in the registry file header.
    pub target_code_count: Option<usize>,
}

impl Profile {
    /// Profile built from the embedded data files.
    pub fn builtin(id: ProfileId) -> Profile {
        let (langs, pos, rels, labels) = match id {
            ProfileId::En => (
                include_str!("../data/languages.en.tsv"),
                include_str!("../data/pos.en.tsv"),
                include_str!("../data/relations.en.tsv"),
                include_str!("../data/labels.en.tsv"),
            ),
            ProfileId::Ru => (
                include_str!("../data/languages.ru.tsv"),
                include_str!("../data/pos.ru.tsv"),
                include_str!("../data/relations.ru.tsv"),
                include_str!("../data/labels.ru.tsv"),
            ),
        };
        Profile::from_sources(id, langs, pos, rels, labels, "<builtin>")
            .expect("embedded profile data is valid")
    }

    /// Profile with the language table loaded from `registry_dir`
    /// (`languages.<profile>.tsv`); the other tables stay built in unless a
    /// matching override file exists.
    pub fn load(id: ProfileId, registry_dir: &Path) -> Result<Profile, ProfileError> {
        let builtin = Profile::builtin(id);
        let lang_file = registry_dir.join(format!("languages.{id}.tsv"));
        let lang_text = read(&lang_file)?;
        let read_opt = |stem: &str| -> Result<Option<String>, ProfileError> {
            let path = registry_dir.join(format!("{stem}.{id}.tsv"));
            if path.exists() { read(&path).map(Some) } else { Ok(None) }
        };
        let pos = read_opt("pos")?;
        let rels = read_opt("relations")?;
        let labels = read_opt("labels")?;
        let mut profile = Profile::from_sources(
            id,
            &lang_text,
            pos.as_deref().unwrap_or(""),
            rels.as_deref().unwrap_or(""),
            labels.as_deref().unwrap_or(""),
            &lang_file.display().to_string(),
        )?;
        if pos.is_none() {
            profile.pos_names = builtin.pos_names;
        }
        if rels.is_none() {
            profile.relation_headings = builtin.relation_headings;
        }
        if labels.is_none() {
            profile.label_names = builtin.label_names.clone();
            profile.policy = TemplateRenderPolicy::new(builtin.label_names);
        }
        Ok(profile)
    }

    fn from_sources(
        id: ProfileId,
        langs: &str,
        pos: &str,
        rels: &str,
        labels: &str,
        lang_file: &str,
    ) -> Result<Profile, ProfileError> {
        let (languages, target) = parse_language_table(langs, lang_file)?;
        let mut by_code = HashMap::new();
        let mut by_name = HashMap::new();
        for (i, lang) in languages.iter().enumerate() {
            by_code.insert(lang.code.clone(), i);
            by_name.insert(lang.name.clone(), i);
        }
        let pos_names: BTreeSet<String> = data_lines(pos).map(|(_, l)| l.to_lowercase()).collect();
        let mut relation_headings = HashMap::new();
        for (n, line) in data_lines(rels) {
            let (heading, rel_type) = line.split_once('\t').ok_or_else(|| ProfileError::Parse {
                file: format!("relations.{id}.tsv"),
                line: n,
                message: "expected heading<TAB>type".to_string(),
            })?;
            let rel_type = rel_type.trim();
            if !RELATION_TYPES.contains(&rel_type) {
                return Err(ProfileError::Parse {
                    file: format!("relations.{id}.tsv"),
                    line: n,
                    message: format!("unregistered relation type {rel_type:?}"),
                });
            }
            relation_headings.insert(heading.trim().to_lowercase(), rel_type.to_string());
        }
        let label_names: BTreeSet<String> = data_lines(labels).map(|(_, l)| l.to_string()).collect();
        let policy = TemplateRenderPolicy::new(label_names.iter().cloned());
        Ok(Profile {
            id,
            languages,
            by_code,
            by_name,
            pos_names,
            relation_headings,
            label_names,
            policy,
            target_code_count: target,
        })
    }

    pub fn languages(&self) -> &[LanguageInfo] {
        &self.languages
    }

    /// Case-insensitive exact match on language code.
    pub fn lookup_code(&self, code: &str) -> Option<&LanguageInfo> {
        self.by_code.get(&code.trim().to_lowercase()).map(|&i| &self.languages[i])
    }

    /// Exact match on the trimmed canonical language name.
    pub fn lookup_name(&self, name: &str) -> Option<&LanguageInfo> {
        self.by_name.get(name.trim()).map(|&i| &self.languages[i])
    }

    /// Normalized POS name for a heading title, if the title is in the
    /// profile's POS inventory.
    pub fn pos_for_heading(&self, title: &str) -> Option<String> {
        let normalized = title.trim().to_lowercase();
        self.pos_names.contains(&normalized).then_some(normalized)
    }

    pub fn pos_names(&self) -> &BTreeSet<String> {
        &self.pos_names
    }

    /// Relation type name for a relation heading title.
    pub fn relation_type_for_heading(&self, title: &str) -> Option<&str> {
        self.relation_headings.get(&title.trim().to_lowercase()).map(String::as_str)
    }

    pub fn label_policy(&self) -> &TemplateRenderPolicy {
        &self.policy
    }

    pub fn label_names(&self) -> &BTreeSet<String> {
        &self.label_names
    }
}

fn read(path: &Path) -> Result<String, ProfileError> {
    std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
        file: path.display().to_string(),
        source,
    })
}

/// Non-comment, non-empty lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_language_table(
    text: &str,
    file: &str,
) -> Result<(Vec<LanguageInfo>, Option<usize>), ProfileError> {
    let mut target = None;
    for line in text.lines() {
        if let Some(rest) = line.trim().strip_prefix("# target_codes:") {
            target = rest.trim().parse::<usize>().ok();
        }
    }
    let mut languages = Vec::new();
    let mut codes = BTreeSet::new();
    let mut names = BTreeSet::new();
    for (n, line) in data_lines(text) {
        let err = |message: String| ProfileError::Parse { file: file.to_string(), line: n, message };
        let (code, name) = line
            .split_once('\t')
            .ok_or_else(|| err("expected code<TAB>name".to_string()))?;
        let code = code.trim().to_string();
        let name = name.trim().to_string();
        if code.len() < 2
            || code.len() > 12
            || !code.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')
        {
            return Err(err(format!("invalid language code {code:?}")));
        }
        if name.is_empty() {
            return Err(err("empty language name".to_string()));
        }
        if !codes.insert(code.clone()) {
            return Err(err(format!("duplicate language code {code:?}")));
        }
        if !names.insert(name.clone()) {
            return Err(err(format!("duplicate language name {name:?}")));
        }
        languages.push(LanguageInfo { code, name });
    }
    Ok((languages, target))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_profiles_load_and_validate() {
        for id in [ProfileId::En, ProfileId::Ru] {
            let p = Profile::builtin(id);
            assert!(p.languages().len() >= 40, "{id}: shipped registry too small");
        }
        assert_eq!(Profile::builtin(ProfileId::En).target_code_count, Some(169));
        assert_eq!(Profile::builtin(ProfileId::Ru).target_code_count, Some(337));
    }

    #[test]
    fn lookup_code_examples() {
        let p = Profile::builtin(ProfileId::En);
        let sv = p.lookup_code("sv").unwrap();
        assert_eq!(sv.name, "Swedish");
        let en = p.lookup_code("en").unwrap();
        assert_eq!(en.name, "English");
        assert!(p.lookup_code("zz-bogus").is_none());
        // case-insensitive on code
        assert_eq!(p.lookup_code("SV").unwrap().name, "Swedish");
    }

    #[test]
    fn lookup_name_examples() {
        let p = Profile::builtin(ProfileId::En);
        assert_eq!(p.lookup_name("Swedish").unwrap().code, "sv");
        assert_eq!(p.lookup_name("English").unwrap().code, "en");
        assert!(p.lookup_name("Klingonish").is_none());
        // first-letter case matters
        assert!(p.lookup_name("swedish").is_none());
        assert_eq!(p.lookup_name("  Swedish ").unwrap().code, "sv");
    }

    #[test]
    fn code_name_round_trip() {
        for id in [ProfileId::En, ProfileId::Ru] {
            let p = Profile::builtin(id);
            for lang in p.languages() {
                let via_code = p.lookup_code(&lang.code).unwrap();
                let via_name = p.lookup_name(&via_code.name).unwrap();
                assert_eq!(via_name, lang);
            }
        }
    }

    #[test]
    fn duplicate_code_rejected() {
        let text = "aa\tAfar\naa\tOther\n";
        let err = parse_language_table(text, "x.tsv").unwrap_err();
        assert!(err.to_string().contains("duplicate language code"));
    }

    #[test]
    fn duplicate_name_rejected() {
        let text = "aa\tAfar\nbb\tAfar\n";
        let err = parse_language_table(text, "x.tsv").unwrap_err();
        assert!(err.to_string().contains("duplicate language name"));
    }

    #[test]
    fn relation_headings_resolve() {
        let p = Profile::builtin(ProfileId::En);
        assert_eq!(p.relation_type_for_heading("Synonyms"), Some("synonym"));
        assert_eq!(p.relation_type_for_heading("Coordinate terms"), Some("coordinate term"));
        assert_eq!(p.relation_type_for_heading("Pronunciation"), None);
    }

    #[test]
    fn pos_headings_resolve() {
        let p = Profile::builtin(ProfileId::En);
        assert_eq!(p.pos_for_heading("Verb"), Some("verb".to_string()));
        assert_eq!(p.pos_for_heading("Proper noun"), Some("proper noun".to_string()));
        assert_eq!(p.pos_for_heading("Etymology"), None);
    }
}
