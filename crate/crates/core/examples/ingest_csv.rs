//! Read a records file, see which rows were rejected and why, and summarize
//! the accepted covariates.
//!
//!     cargo run --example ingest_csv [path]

use patent_rent::data::{descriptive_stats, parse_records_with, IngestOptions, IpcPrefixMap};
use patent_rent::report;

const SAMPLE: &str = "\
patent_id,application_year,expiry_age,family_size,inventor_count,grant_lag_years,tech_scope,tech_field,ownership,censored
IN001,1999,2,0,1,6,1,chemical,domestic,false
IN002,2000,9,4,3,8,2,electrical,foreign_subsidiary,false
IN003,2001,14,2,2,7,1,C07D,domestic,false
IN004,2001,12,1,2,9,1,G01N,domestic,true
IN005,2002,25,1,1,5,1,mechanical,domestic,false
IN006,2000,6,3,,7,1,instruments,domestic,false
IN002,2000,9,4,3,8,2,electrical,foreign_subsidiary,false
IN007,2000,20,5,4,6,3,others,foreign_subsidiary,false
";

fn main() -> patent_rent::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).expect("readable records file"),
        None => SAMPLE.to_string(),
    };
    // Raw IPC codes can be mapped to technology fields by longest prefix.
    let options = IngestOptions {
        ipc_prefix_map: Some(IpcPrefixMap::parse("C07 = chemical\nG01 = instruments\nH = electrical\n")?),
    };
    let (records, ingest) = parse_records_with(&text, &options)?;
    println!("accepted {} of {} rows", records.len(), ingest.total_rows());
    for r in &ingest.rejected {
        println!("  row {:>2}: {}", r.row, r.reason);
    }
    for w in &ingest.warnings {
        println!("  warning: {w}");
    }
    println!();
    println!("{}", report::render_descriptive(&descriptive_stats(&records)?));
    Ok(())
}
