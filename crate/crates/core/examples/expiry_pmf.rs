//! Probability of each expiry age for one patent profile, and how it shifts
//! with the patent's characteristics.
//!
//!     cargo run --example expiry_pmf

use patent_rent::{builtin_schedule, expiry_pmf, CovariateVector, ModelConfig, ModelParams, Ownership, TechField};

fn main() -> patent_rent::Result<()> {
    let schedule = builtin_schedule("india")?;
    let config = ModelConfig::default();
    let params = ModelParams::published_india();

    let base = CovariateVector {
        family_size: 3.0,
        inventor_size: 2.0,
        grant_lag: 7.0,
        tech_scope: 1.0,
        tech_field: TechField::Chemical,
        ownership: Ownership::Domestic,
    };
    let profiles = [
        ("chemical, lag 7", base),
        ("electrical, lag 7", CovariateVector { tech_field: TechField::Electrical, ..base }),
        ("chemical, lag 3", CovariateVector { grant_lag: 3.0, ..base }),
        ("chemical, family 8", CovariateVector { family_size: 8.0, ..base }),
    ];

    print!("{:<20}", "age");
    for age in config.expiry_ages() {
        print!("{age:>6}");
    }
    println!();
    for (label, x) in profiles {
        let pmf = expiry_pmf(&params, &x, &schedule, &config)?;
        print!("{label:<20}");
        for p in &pmf.probs {
            print!("{:>6.3}", p);
        }
        let total: f64 = pmf.probs.iter().sum();
        println!("   sum {total:.12}");
    }
    Ok(())
}
