//! Summary tables for a synthetic cohort drawn at the published Indian
//! estimates: expiry shares by technology, value by technology and
//! ownership, and the value distribution.
//!
//!     cargo run --release --example summary_tables

use patent_rent::data::{descriptive_stats, generate_synthetic};
use patent_rent::report::{self, GroupKey, MoneyField, MoneyScale, DEFAULT_QUANTILES};
use patent_rent::simulate::simulate_batch;
use patent_rent::{builtin_schedule, CovariateSpec, ModelConfig, ModelParams, ValueConfig};

fn main() -> patent_rent::Result<()> {
    let schedule = builtin_schedule("india")?;
    let config = ModelConfig::default();
    let params = ModelParams::published_india();
    let records = generate_synthetic(&params, 2000, &schedule, &config, &CovariateSpec::default(), 2001)?;

    println!("{}", report::render_descriptive(&descriptive_stats(&records)?));
    println!("{}", report::expiry_share_table(&records)?.render());

    let value = ValueConfig {
        draws: 2000,
        seed: 5,
        ..ValueConfig::default()
    };
    let batch = simulate_batch(&params, None, &records, &schedule, &config, &value)?;
    let valued: Vec<_> = {
        let ok = batch.by_id();
        records.iter().filter(|r| ok.contains_key(r.patent_id.as_str())).cloned().collect()
    };
    if !batch.failures.is_empty() {
        println!("{} patents could not be valued\n", batch.failures.len());
    }
    // The published estimates have no intercept, so synthetic returns are small; report in dollars.
    let scale = MoneyScale::identity("$");
    for field in [MoneyField::R0, MoneyField::Npv] {
        let tech = report::value_by_group(&valued, &batch.estimates, GroupKey::Technology, field, &scale)?;
        let own = report::value_by_group(&valued, &batch.estimates, GroupKey::Ownership, field, &scale)?;
        println!("{}", report::render_value_tables(&tech, &own));
    }
    let q = report::quantile_table(&valued, &batch.estimates, &DEFAULT_QUANTILES, &scale)?;
    println!("{}", q.render());

    for p in report::age_trend(&valued, &batch.estimates)? {
        println!("age {:>2}  n {:>5}  mean ln r0 {:>7.3}", p.age, p.count, p.mean_log_r0);
    }
    Ok(())
}
