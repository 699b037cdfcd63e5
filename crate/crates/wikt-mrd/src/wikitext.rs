//! Structural scanner for wiki markup.
//!
//! Everything here is total: arbitrary input, including adversarial brace and
//! bracket soup, produces a (possibly empty) node list and never an error.
//! Malformed constructs are treated as plain text; the template scanner
//! additionally counts unbalanced-brace sites for diagnostics.
//!
//! All spans are measured in Unicode scalar values (char offsets), not bytes.

use std::collections::{BTreeMap, BTreeSet};

/// Half-open range of char offsets into the scanned source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn strictly_contains(&self, other: &SourceSpan) -> bool {
        self.contains(other) && (self.start < other.start || other.end < self.end)
    }
}

/// Extract `source[span]` where the span is in char offsets.
pub fn slice_span<'a>(source: &'a str, span: SourceSpan) -> &'a str {
    let mut start_byte = source.len();
    let mut end_byte = source.len();
    for (n, (b, _)) in source.char_indices().enumerate() {
        if n == span.start {
            start_byte = b;
        }
        if n == span.end {
            end_byte = b;
            break;
        }
    }
    if span.start == span.end {
        return "";
    }
    &source[start_byte..end_byte]
}

/// A `== title ==` section heading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heading {
    pub level: u8,
    pub title: String,
    pub span: SourceSpan,
}

/// A `{{name|...}}` template call with nested templates in `children`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub positional_args: Vec<String>,
    pub named_args: BTreeMap<String, String>,
    pub children: Vec<Template>,
    pub span: SourceSpan,
}

impl Template {
    /// Total number of templates in this subtree, itself included.
    pub fn subtree_len(&self) -> usize {
        1 + self.children.iter().map(Template::subtree_len).sum::<usize>()
    }
}

/// A `[[target|label]]` internal link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalLink {
    pub target: String,
    pub label: String,
    pub span: SourceSpan,
}

/// A line starting with one or more of `#`, `*`, `:`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListItem {
    pub markers: String,
    pub content: String,
    pub span: SourceSpan,
}

/// Result of a template scan, with the count of unbalanced-brace sites.
#[derive(Debug, Clone, Default)]
pub struct TemplateScan {
    pub templates: Vec<Template>,
    pub unbalanced_sites: usize,
}

/// Rendering rules for `strip_markup`: label templates become `(name)`,
/// everything else is removed.
#[derive(Debug, Clone, Default)]
pub struct TemplateRenderPolicy {
    labels: BTreeSet<String>,
}

impl TemplateRenderPolicy {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TemplateRenderPolicy {
            labels: labels.into_iter().map(|s| s.into().to_lowercase()).collect(),
        }
    }

    pub fn is_label(&self, name: &str) -> bool {
        self.labels.contains(&name.trim().to_lowercase())
    }

    /// `Some("(name)")` for label templates, `None` for everything else.
    pub fn render(&self, name: &str) -> Option<String> {
        let name = name.trim();
        if self.is_label(name) {
            Some(format!("({name})"))
        } else {
            None
        }
    }
}

/// Scan full-line headings `=^k title =^k`, 1 <= k <= 6.
///
/// Lines with unequal `=` counts, empty titles, or leading whitespace are
/// skipped silently.
pub fn scan_headings(source: &str) -> Vec<Heading> {
    let mut out = Vec::new();
    for line in LineIter::new(source) {
        if let Some(h) = parse_heading_line(&line) {
            out.push(h);
        }
    }
    out
}

fn parse_heading_line(line: &Line) -> Option<Heading> {
    let text = line.text;
    if !text.starts_with('=') {
        return None;
    }
    // trailing whitespace after the closing '='s is tolerated
    let trimmed = text.trim_end();
    let trailing_ws = text.chars().count() - trimmed.chars().count();
    let chars: Vec<char> = trimmed.chars().collect();
    let n = chars.len();
    let lead = chars.iter().take_while(|&&c| c == '=').count();
    if lead == n {
        return None; // a bare run of '=' has no title
    }
    let tail = chars.iter().rev().take_while(|&&c| c == '=').count();
    if lead != tail || lead < 1 || lead > 6 {
        return None;
    }
    let title: String = chars[lead..n - tail].iter().collect();
    let title = title.trim().to_string();
    if title.is_empty() {
        return None;
    }
    Some(Heading {
        level: lead as u8,
        title,
        span: SourceSpan::new(line.char_start, line.char_end - trailing_ws),
    })
}

/// Scan top-level templates; nested templates appear in `children`.
pub fn scan_templates(source: &str) -> Vec<Template> {
    scan_templates_full(source).templates
}

struct OpenFrame {
    start: usize,
    inner_start: usize,
    pipes: Vec<usize>,
    bracket_depth: u32,
    children: Vec<Template>,
}

/// Scan templates and count unbalanced-brace sites.
///
/// An unclosed `{{` or a stray `}}` yields no template (the text stays plain)
/// but is counted. Completed templates nested under an unclosed opening are
/// promoted to the enclosing level.
pub fn scan_templates_full(source: &str) -> TemplateScan {
    let chars: Vec<char> = source.chars().collect();
    let n = chars.len();
    let mut stack: Vec<OpenFrame> = Vec::new();
    let mut top: Vec<Template> = Vec::new();
    let mut unbalanced = 0usize;
    let mut i = 0usize;
    while i < n {
        let c = chars[i];
        let c2 = if i + 1 < n { chars[i + 1] } else { '\0' };
        if c == '{' && c2 == '{' {
            stack.push(OpenFrame {
                start: i,
                inner_start: i + 2,
                pipes: Vec::new(),
                bracket_depth: 0,
                children: Vec::new(),
            });
            i += 2;
        } else if c == '}' && c2 == '}' {
            match stack.pop() {
                Some(frame) => {
                    let tpl = finish_template(&chars, frame, i);
                    let dest = match stack.last_mut() {
                        Some(parent) => &mut parent.children,
                        None => &mut top,
                    };
                    match tpl {
                        Finished::Template(t) => dest.push(t),
                        Finished::Promoted(children) => dest.extend(children),
                    }
                }
                None => unbalanced += 1,
            }
            i += 2;
        } else if c == '[' && c2 == '[' {
            if let Some(frame) = stack.last_mut() {
                frame.bracket_depth += 1;
            }
            i += 2;
        } else if c == ']' && c2 == ']' {
            if let Some(frame) = stack.last_mut() {
                frame.bracket_depth = frame.bracket_depth.saturating_sub(1);
            }
            i += 2;
        } else {
            if c == '|' {
                if let Some(frame) = stack.last_mut() {
                    if frame.bracket_depth == 0 {
                        frame.pipes.push(i);
                    }
                }
            }
            i += 1;
        }
    }
    // unwind unclosed openings, innermost first, promoting their children
    while let Some(frame) = stack.pop() {
        unbalanced += 1;
        let dest = match stack.last_mut() {
            Some(parent) => &mut parent.children,
            None => &mut top,
        };
        dest.extend(frame.children);
    }
    TemplateScan { templates: top, unbalanced_sites: unbalanced }
}

enum Finished {
    Template(Template),
    /// Empty template name: the braces are consumed, inner templates survive.
    Promoted(Vec<Template>),
}

fn finish_template(chars: &[char], frame: OpenFrame, close_at: usize) -> Finished {
    let inner = &chars[frame.inner_start..close_at];
    let mut cuts: Vec<usize> = frame.pipes.iter().map(|&p| p - frame.inner_start).collect();
    cuts.push(inner.len());
    let mut segments: Vec<String> = Vec::with_capacity(cuts.len());
    let mut prev = 0usize;
    for &cut in &cuts {
        segments.push(inner[prev..cut].iter().collect());
        prev = (cut + 1).min(inner.len());
    }
    let name = segments[0].trim().to_string();
    if name.is_empty() {
        return Finished::Promoted(frame.children);
    }
    let mut positional = Vec::new();
    let mut named = BTreeMap::new();
    for seg in &segments[1..] {
        match top_level_eq(seg) {
            Some(eq) => {
                let key = seg[..eq].trim().to_string();
                let value = seg[eq + 1..].trim().to_string();
                named.insert(key, value);
            }
            None => positional.push(seg.clone()),
        }
    }
    Finished::Template(Template {
        name,
        positional_args: positional,
        named_args: named,
        children: frame.children,
        span: SourceSpan::new(frame.start, close_at + 2),
    })
}

/// Byte offset of the first `=` outside nested `{{...}}` / `[[...]]`.
fn top_level_eq(segment: &str) -> Option<usize> {
    let bytes = segment.as_bytes();
    let mut brace = 0i32;
    let mut bracket = 0i32;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'{' if bytes.get(i + 1) == Some(&b'{') => {
                brace += 1;
                i += 2;
                continue;
            }
            b'}' if bytes.get(i + 1) == Some(&b'}') => {
                brace -= 1;
                i += 2;
                continue;
            }
            b'[' if bytes.get(i + 1) == Some(&b'[') => {
                bracket += 1;
                i += 2;
                continue;
            }
            b']' if bytes.get(i + 1) == Some(&b']') => {
                bracket -= 1;
                i += 2;
                continue;
            }
            b'=' if brace <= 0 && bracket <= 0 => return Some(i),
            _ => {}
        }
        i += 1;
    }
    None
}

/// Scan `[[target|label]]` links in document order.
///
/// Links spanning newlines are rejected; `[[T]]` defaults the label to the
/// target.
pub fn scan_internal_links(source: &str) -> Vec<InternalLink> {
    let chars: Vec<char> = source.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i + 1 < n {
        if chars[i] == '[' && chars[i + 1] == '[' {
            match try_link(&chars, i) {
                LinkAttempt::Link(link, next) => {
                    out.push(link);
                    i = next;
                }
                LinkAttempt::RetryAt(next) => i = next,
            }
        } else {
            i += 1;
        }
    }
    out
}

enum LinkAttempt {
    Link(InternalLink, usize),
    RetryAt(usize),
}

fn try_link(chars: &[char], start: usize) -> LinkAttempt {
    let n = chars.len();
    let mut j = start + 2;
    while j < n {
        let c = chars[j];
        if c == '\n' {
            return LinkAttempt::RetryAt(start + 2);
        }
        if c == '[' && j + 1 < n && chars[j + 1] == '[' {
            // inner opening wins; the outer brackets are plain text
            return LinkAttempt::RetryAt(j);
        }
        if c == ']' && j + 1 < n && chars[j + 1] == ']' {
            let content: String = chars[start + 2..j].iter().collect();
            let (target, label) = match content.find('|') {
                Some(p) => (content[..p].trim().to_string(), content[p + 1..].to_string()),
                None => {
                    let t = content.trim().to_string();
                    (t.clone(), t)
                }
            };
            if target.is_empty() {
                return LinkAttempt::RetryAt(j + 2);
            }
            return LinkAttempt::Link(
                InternalLink { target, label, span: SourceSpan::new(start, j + 2) },
                j + 2,
            );
        }
        j += 1;
    }
    LinkAttempt::RetryAt(start + 2)
}

/// Scan list-item lines beginning with a run of `#`, `*`, `:`.
pub fn scan_list_items(source: &str) -> Vec<ListItem> {
    let mut out = Vec::new();
    for line in LineIter::new(source) {
        let markers: String = line.text.chars().take_while(|c| matches!(c, '#' | '*' | ':')).collect();
        if markers.is_empty() {
            continue;
        }
        let rest = &line.text[markers.len()..];
        let content = rest.strip_prefix(' ').unwrap_or(rest).to_string();
        out.push(ListItem {
            markers,
            content,
            span: SourceSpan::new(line.char_start, line.char_end),
        });
    }
    out
}

/// Remove `<!-- ... -->` comments; an unterminated comment runs to the end.
pub fn strip_html_comments(source: &str) -> String {
    let mut out = String::with_capacity(source.len());
    let mut rest = source;
    while let Some(open) = rest.find("<!--") {
        out.push_str(&rest[..open]);
        match rest[open + 4..].find("-->") {
            Some(close) => rest = &rest[open + 4 + close + 3..],
            None => return out,
        }
    }
    out.push_str(rest);
    out
}

/// Reduce wikitext to the reader-visible plain text.
///
/// Internal links become their labels, label templates become `(name)`,
/// other templates vanish, quote runs are dropped, and whitespace collapses
/// to single spaces.
pub fn strip_markup(source: &str, policy: &TemplateRenderPolicy) -> String {
    let mut text = collapse_whitespace(&strip_html_comments(source));
    // replaced link labels may themselves carry markup, and collapsing
    // whitespace can make a newline-spanning construct strippable, so
    // iterate the whole pass to a fixpoint
    for _ in 0..8 {
        let next = collapse_whitespace(&strip_once(&text, policy));
        if next == text {
            break;
        }
        text = next;
    }
    text
}

fn strip_once(source: &str, policy: &TemplateRenderPolicy) -> String {
    let templates = scan_templates(source);
    let links = scan_internal_links(source);
    let mut repl: Vec<(SourceSpan, String)> = Vec::new();
    for t in &templates {
        repl.push((t.span, policy.render(&t.name).unwrap_or_default()));
    }
    for l in &links {
        if !templates.iter().any(|t| t.span.contains(&l.span)) {
            repl.push((l.span, l.label.clone()));
        }
    }
    repl.sort_by_key(|(s, _)| s.start);
    let chars: Vec<char> = source.chars().collect();
    let mut out = String::with_capacity(source.len());
    let mut pos = 0usize;
    for (span, text) in repl {
        if span.start < pos {
            continue; // overlapping leftover, keep the earlier replacement
        }
        out.extend(&chars[pos..span.start]);
        out.push_str(&text);
        pos = span.end;
    }
    out.extend(&chars[pos..]);
    out.replace("'''", "").replace("''", "")
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_ws = false;
    for c in text.chars() {
        if c.is_whitespace() {
            in_ws = true;
        } else {
            if in_ws && !out.is_empty() {
                out.push(' ');
            }
            in_ws = false;
            out.push(c);
        }
    }
    out
}

/// A source line with its char-offset range (newline excluded).
struct Line<'a> {
    text: &'a str,
    char_start: usize,
    char_end: usize,
}

struct LineIter<'a> {
    source: &'a str,
    byte: usize,
    char_pos: usize,
}

impl<'a> LineIter<'a> {
    fn new(source: &'a str) -> Self {
        LineIter { source, byte: 0, char_pos: 0 }
    }
}

impl<'a> Iterator for LineIter<'a> {
    type Item = Line<'a>;

    fn next(&mut self) -> Option<Line<'a>> {
        if self.byte >= self.source.len() {
            return None;
        }
        let rest = &self.source[self.byte..];
        let (line_bytes, sep_bytes) = match rest.find('\n') {
            Some(p) => (p, 1),
            None => (rest.len(), 0),
        };
        let mut text = &rest[..line_bytes];
        let mut cr = 0usize;
        if let Some(stripped) = text.strip_suffix('\r') {
            text = stripped;
            cr = 1;
        }
        let char_start = self.char_pos;
        let char_len = text.chars().count();
        let line = Line { text, char_start, char_end: char_start + char_len };
        self.char_pos += char_len + cr + sep_bytes;
        self.byte += line_bytes + sep_bytes;
        Some(line)
    }
}
