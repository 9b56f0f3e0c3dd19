//! Built-in renewal fee tables, a custom schedule from config text, and the
//! renewal thresholds they imply.
//!
//!     cargo run --example fee_schedules

use patent_rent::fee_schedule::BUILTIN_NAMES;
use patent_rent::{builtin_schedule, load_schedule, ModelConfig, ThresholdTable};

fn main() -> patent_rent::Result<()> {
    for name in BUILTIN_NAMES {
        let s = builtin_schedule(name)?;
        let fees: Vec<String> = (1..=s.max_term())
            .map(|t| format!("{:.0}", s.cost_at(t).unwrap_or(f64::NAN)))
            .collect();
        println!("{name:<6} {} {}", s.currency(), fees.join(" "));
    }

    let custom = load_schedule(
        "name = \"flat\"\n\
         currency = \"EUR\"\n\
         max_term = 20\n\
         entry = { from = 3, to = 10, cost = 100.0 }\n\
         entry = { from = 11, to = 20, cost = 400.0 }\n",
    )?;
    println!("\nround trip:\n{}", custom.to_config_text());

    // Renewal continues at age t while ln r(0) exceeds th_t = ln(c_t / z_t).
    let config = ModelConfig::default();
    let india = builtin_schedule("india")?;
    for d in [0.1, 0.3, 0.49] {
        let table = ThresholdTable::build(&india, d, &config)?;
        let row: Vec<String> = table.values.iter().map(|v| format!("{v:.2}")).collect();
        println!("d = {d:<4} thresholds (ages {}..): {}", table.ages[0], row.join(" "));
    }

    // The US table charges nothing at ages 15-19, so no threshold exists there.
    let us = builtin_schedule("us")?;
    if let Err(e) = ThresholdTable::build(&us, 0.3, &config) {
        println!("\nus as a model schedule: {e}");
    }
    Ok(())
}
