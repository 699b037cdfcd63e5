//! Walk one page down the section hierarchy: language sections, etymology
//! blocks (homonyms), and part-of-speech sections.

use wikt_mrd::diag::Diagnostics;
use wikt_mrd::profile::{Profile, ProfileId};
use wikt_mrd::segment::{segment_etymologies, segment_languages, segment_pos};

const PAGE: &str = "\
==English==

===Etymology 1===
A plank of fir or pine.

====Noun====
# A plank of softwood timber.

===Etymology 2===
A part, portion, or share.

====Verb====
# To distribute among a number of recipients.

==Martian==
Not a registered language; segmentation skips it and records a diagnostic.

==Swedish==

===Noun===
# a deal or bargain
";

fn main() {
    let profile = Profile::builtin(ProfileId::En);
    let mut diags = Diagnostics::new();

    for section in segment_languages("deal", PAGE, &profile, &mut diags) {
        println!("language {} ({})", section.language.name, section.language.code);
        for block in segment_etymologies("deal", &section, &mut diags) {
            // numbering counts from zero: "Etymology 2" is block 1
            println!("  etymology_n {}", block.etymology_n);
            for pos in segment_pos(&block, &profile) {
                println!("    pos {:?}, body {:?}", pos.pos_name, pos.body.trim());
            }
        }
    }

    println!("diagnostics:");
    for d in diags.items() {
        println!("  {} page={} {}", d.category, d.page, d.detail);
    }
}
