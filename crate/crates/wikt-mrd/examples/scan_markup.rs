//! Scan a page for the four wikitext constructs the pipeline cares about:
//! headings, templates, internal links, and list items.

use wikt_mrd::wikitext::{
    scan_headings, scan_internal_links, scan_list_items, scan_templates_full, slice_span,
};

const PAGE: &str = "\
==English==
===Verb===
# {{transitive}} To [[distribute]] among a number of [[recipient|recipients]].
#: ''An example line.''
* {{sense|hand out}} [[apportion]], [[divvy up]]
{{trans-top|hand out}}
* Swedish: {{t|sv|dela}}
{{trans-bottom}}
";

fn main() {
    println!("headings:");
    for h in scan_headings(PAGE) {
        println!("  level {} {:?} at chars {}..{}", h.level, h.title, h.span.start, h.span.end);
    }

    println!("templates (top level, with nesting):");
    let scan = scan_templates_full(PAGE);
    for t in &scan.templates {
        println!(
            "  {{{{{}}}}} positional={:?} named={:?} children={}",
            t.name,
            t.positional_args,
            t.named_args,
            t.children.len()
        );
        // every span reproduces its source slice exactly
        assert!(slice_span(PAGE, t.span).starts_with("{{"));
    }
    println!("  unbalanced brace sites: {}", scan.unbalanced_sites);

    println!("internal links:");
    for l in scan_internal_links(PAGE) {
        println!("  target={:?} label={:?}", l.target, l.label);
    }

    println!("list items:");
    for item in scan_list_items(PAGE) {
        println!("  markers={:?} content={:?}", item.markers, item.content);
    }
}
