//! Stream a MediaWiki XML export page by page. Memory stays proportional to
//! the largest page, and the namespace/redirect filter explains everything
//! it drops.

use wikt_mrd::diag::Diagnostics;
use wikt_mrd::ingest::{filter_main, stream_xml};

const DUMP: &str = r#"<mediawiki>
  <page>
    <title>deal</title>
    <ns>0</ns>
    <revision><text>==English==
===Verb===
# To distribute.</text></revision>
  </page>
  <page>
    <title>dealt</title>
    <ns>0</ns>
    <redirect title="deal"/>
    <revision><text>#REDIRECT [[deal]]</text></revision>
  </page>
  <page>
    <title>Talk:deal</title>
    <ns>1</ns>
    <revision><text>discussion page</text></revision>
  </page>
</mediawiki>
"#;

fn main() {
    let mut diags = Diagnostics::new();
    let mut kept = 0;
    let total = stream_xml(DUMP.as_bytes(), "<inline>", |page| {
        println!("page {:?} ns={} redirect={}", page.title, page.namespace, page.redirect);
        if filter_main(&page, &mut diags) {
            kept += 1;
            println!("  kept, {} chars of wikitext", page.text.chars().count());
        }
    })
    .unwrap();

    println!("{total} pages streamed, {kept} kept");
    for d in diags.items() {
        println!("dropped: {} {} ({})", d.category, d.page, d.detail);
    }
}
