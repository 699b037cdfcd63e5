//! Turn a definition's wiki markup into the plain text a reader would see.
//!
//! Label templates like {{transitive}} render as a parenthesized note,
//! unknown templates disappear, links keep their display label.

use wikt_mrd::profile::{Profile, ProfileId};
use wikt_mrd::wikitext::{strip_markup, TemplateRenderPolicy};

fn main() {
    let raw = "{{transitive}} To [[distribute]] among a number of [[recipient|recipients]], \
               to give out as one's portion or share.";

    // the en profile ships a label inventory
    let profile = Profile::builtin(ProfileId::En);
    println!("with profile labels:\n  {}", strip_markup(raw, profile.label_policy()));

    // a hand-rolled policy works the same way
    let policy = TemplateRenderPolicy::new(["transitive", "obsolete"]);
    println!("with custom policy:\n  {}", strip_markup(raw, &policy));

    // an empty policy drops every template
    let none = TemplateRenderPolicy::new(Vec::<String>::new());
    println!("with no labels:\n  {}", strip_markup(raw, &none));

    let messy = "'''bold''' and ''italic'' and {{unknown|stuff}} and [[plain link]]";
    println!("quote runs and unknown templates:\n  {}", strip_markup(messy, &none));
}
