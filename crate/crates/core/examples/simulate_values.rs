//! Simulated initial return and lifetime value for patents that expired at
//! different ages, under a fixed parameter vector.
//!
//!     cargo run --release --example simulate_values

use patent_rent::data::PatentRecord;
use patent_rent::simulate::{epsilon_bounds, net_present_value, ValueSimulator};
use patent_rent::{builtin_schedule, CovariateVector, ModelConfig, ModelParams, Ownership, TechField, ValueConfig};

fn main() -> patent_rent::Result<()> {
    let schedule = builtin_schedule("india")?;
    let config = ModelConfig::default();
    let params = ModelParams::published_india();
    let sim = ValueSimulator::new(&params, &schedule, &config)?;
    let value = ValueConfig::default();

    let x = CovariateVector {
        family_size: 3.0,
        inventor_size: 2.0,
        grant_lag: 7.0,
        tech_scope: 1.0,
        tech_field: TechField::Mechanical,
        ownership: Ownership::ForeignSubsidiary,
    };
    println!(
        "{:>4} {:>22} {:>12} {:>12} {:>12} {:>12}",
        "T", "epsilon interval", "r0 median", "r0 mean", "NPV mean", "MC s.e."
    );
    for (i, age) in [2, 5, 8, 12, 16, 20].into_iter().enumerate() {
        let record = PatentRecord {
            patent_id: format!("demo-{age}"),
            application_year: 2000,
            expiry_age: age,
            covariates: x,
            tech_field_raw: "mechanical".into(),
            ownership_raw: "foreign_subsidiary".into(),
        };
        let iv = epsilon_bounds(&params, &x, age, &schedule, &config)?;
        let est = sim.simulate(&record, &value, i as u64)?;
        println!(
            "{age:>4} [{:>9.2}, {:>9.2}] {:>12.1} {:>12.1} {:>12.1} {:>12.1}",
            iv.lower, iv.upper, est.r0_median, est.r0_mean, est.npv_mean, est.r0_mean_se
        );
    }

    // A patent with no initial return only pays fees.
    let fees_only = net_present_value(0.0, params.d, &schedule, &config, 5)?;
    println!("\nvalue of r0 = 0 held to age 5: {fees_only:.3}");
    Ok(())
}
