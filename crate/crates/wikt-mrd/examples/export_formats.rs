//! Export a dictionary as a TSV bundle and as a SQL dump, re-import both,
//! and show that the canonical form is insensitive to how it was produced.

use std::path::Path;

use wikt_mrd::export::{export_sql_dump, export_tsv_bundle, import, TABLE_NAMES};
use wikt_mrd::pipeline::{run_pipeline, PipelineOptions};
use wikt_mrd::profile::{Profile, ProfileId};
use wikt_mrd::store::Store;

fn main() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus");
    let profile = Profile::builtin(ProfileId::En);
    let mut store = Store::new(ProfileId::En);
    run_pipeline(corpus.to_str().unwrap(), &profile, &mut store, PipelineOptions::default())
        .unwrap();

    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle");
    let dump = dir.path().join("dump.sql");

    export_tsv_bundle(&store, &bundle).unwrap();
    export_sql_dump(&store, &dump).unwrap();

    println!("tsv bundle files:");
    for name in TABLE_NAMES {
        let len = std::fs::metadata(bundle.join(format!("{name}.tsv"))).unwrap().len();
        println!("  {name}.tsv ({len} bytes)");
    }
    println!("sql dump: {} bytes", std::fs::metadata(&dump).unwrap().len());

    // both formats import back to the same canonical bytes
    let from_tsv = import(&bundle).unwrap();
    let from_sql = import(&dump).unwrap();
    let second = dir.path().join("bundle2");
    let third = dir.path().join("bundle3");
    export_tsv_bundle(&from_tsv, &second).unwrap();
    export_tsv_bundle(&from_sql, &third).unwrap();
    for name in TABLE_NAMES {
        let a = std::fs::read(bundle.join(format!("{name}.tsv"))).unwrap();
        let b = std::fs::read(second.join(format!("{name}.tsv"))).unwrap();
        let c = std::fs::read(third.join(format!("{name}.tsv"))).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
    println!("round trips are byte-identical");

    assert!(from_tsv.verify_integrity().is_empty());
    assert!(from_sql.verify_integrity().is_empty());
    println!("integrity: clean after both round trips");
}
