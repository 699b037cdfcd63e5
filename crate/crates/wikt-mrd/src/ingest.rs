//! Streaming page sources.
//!
//! A MediaWiki XML export is read page by page with `quick-xml`, so memory
//! use stays proportional to the largest single page rather than the dump.
//! A directory of `<title>.wiki` files serves as a fixture source with the
//! same interface; `-` reads XML from stdin.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use quick_xml::events::Event;
use quick_xml::Reader;

use crate::diag::{DiagCategory, Diagnostics};

/// One page as it comes off the wire, before any filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPage {
    pub title: String,
    pub namespace: i64,
    pub redirect: bool,
    pub text: String,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{path}: XML error at byte {position}: {message}")]
    Xml { path: String, position: u64, message: String },
}

/// Keep main-namespace, non-redirect pages; diagnose everything dropped.
pub fn filter_main(page: &RawPage, diags: &mut Diagnostics) -> bool {
    if page.namespace != 0 {
        diags.push(
            DiagCategory::SkippedNamespace,
            &page.title,
            format!("namespace {}", page.namespace),
        );
        return false;
    }
    if page.redirect {
        diags.push(DiagCategory::SkippedRedirect, &page.title, "redirect page");
        return false;
    }
    true
}

/// Stream pages from an XML export, calling `sink` once per `<page>`.
///
/// Only one page's worth of text is held at a time.
pub fn stream_xml<R: BufRead>(
    reader: R,
    path: &str,
    mut sink: impl FnMut(RawPage),
) -> Result<usize, IngestError> {
    let mut xml = Reader::from_reader(reader);
    xml.config_mut().trim_text(false);
    let mut buf = Vec::new();
    let mut count = 0usize;

    let mut in_page = false;
    let mut in_revision = false;
    let mut capture: Option<&'static str> = None;
    let mut title = String::new();
    let mut namespace: i64 = 0;
    let mut redirect = false;
    let mut text = String::new();

    loop {
        let event = xml.read_event_into(&mut buf).map_err(|e| IngestError::Xml {
            path: path.to_string(),
            position: xml.buffer_position(),
            message: e.to_string(),
        })?;
        match event {
            Event::Start(ref e) => match e.local_name().as_ref() {
                b"page" => {
                    in_page = true;
                    in_revision = false;
                    title.clear();
                    namespace = 0;
                    redirect = false;
                    text.clear();
                }
                b"revision" if in_page => in_revision = true,
                b"title" if in_page && !in_revision => capture = Some("title"),
                b"ns" if in_page && !in_revision => capture = Some("ns"),
                b"text" if in_revision => capture = Some("text"),
                _ => {}
            },
            Event::Empty(ref e) => {
                if in_page && !in_revision && e.local_name().as_ref() == b"redirect" {
                    redirect = true;
                }
            }
            Event::Text(ref t) => {
                if let Some(what) = capture {
                    let chunk = t.unescape().map_err(|e| IngestError::Xml {
                        path: path.to_string(),
                        position: xml.buffer_position(),
                        message: e.to_string(),
                    })?;
                    match what {
                        "title" => title.push_str(&chunk),
                        "ns" => namespace = chunk.trim().parse().unwrap_or(0),
                        "text" => text.push_str(&chunk),
                        _ => unreachable!(),
                    }
                }
            }
            Event::End(ref e) => match e.local_name().as_ref() {
                b"title" | b"ns" | b"text" => capture = None,
                b"revision" => in_revision = false,
                b"page" => {
                    if in_page {
                        sink(RawPage {
                            title: std::mem::take(&mut title),
                            namespace,
                            redirect,
                            text: std::mem::take(&mut text),
                        });
                        count += 1;
                    }
                    in_page = false;
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    Ok(count)
}

/// Stream pages from a fixture directory of `<title>.wiki` files, ordered
/// by file name so runs are reproducible.
pub fn stream_fixture_dir(dir: &Path, mut sink: impl FnMut(RawPage)) -> Result<usize, IngestError> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "wiki"))
        .collect();
    files.sort();
    let mut count = 0usize;
    for path in files {
        let title = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = std::fs::read_to_string(&path)?;
        sink(RawPage { title, namespace: 0, redirect: false, text });
        count += 1;
    }
    Ok(count)
}

/// Stream from any supported source: an XML file, a fixture directory, or
/// stdin when the path is `-`.
pub fn stream_pages(path: &str, sink: impl FnMut(RawPage)) -> Result<usize, IngestError> {
    if path == "-" {
        let stdin = io::stdin();
        return stream_xml(stdin.lock(), "<stdin>", sink);
    }
    let p = Path::new(path);
    if p.is_dir() {
        stream_fixture_dir(p, sink)
    } else {
        let file = BufReader::new(File::open(p)?);
        stream_xml(file, path, sink)
    }
}
