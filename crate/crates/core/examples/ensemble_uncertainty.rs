//! Parameter uncertainty for per-patent values: fit a synthetic cohort, then
//! re-simulate every patent under each of the elite parameter vectors.
//!
//!     cargo run --release --example ensemble_uncertainty

use patent_rent::data::generate_synthetic;
use patent_rent::simulate::simulate_batch;
use patent_rent::{builtin_schedule, estimate, Beta, CovariateSpec, GaConfig, ModelConfig, ModelParams, ParamBounds, ValueConfig};

fn main() -> patent_rent::Result<()> {
    let truth = ModelParams {
        sigma: 1.5,
        d: 0.30,
        beta: Beta {
            intercept: 6.0,
            chemical: -0.5,
            mechanical: 0.4,
            electrical: 0.6,
            instruments: -0.1,
            family_size: 0.10,
            inventor_size: 0.08,
            grant_lag: -0.20,
            tech_scope: 0.30,
        },
    };
    let schedule = builtin_schedule("india")?;
    let config = ModelConfig::default();
    let records = generate_synthetic(&truth, 1500, &schedule, &config, &CovariateSpec::default(), 11)?;

    let ga = GaConfig {
        population_size: 1000,
        starts: 2,
        ..GaConfig::desk(11)
    };
    let fit = estimate(&records, &schedule, &config, &ga, &ParamBounds::default())?;
    println!("elite of {}, d = {:.3} ± {:.3}", fit.elite.len(), fit.point_estimate.d, fit.std_errors.d);

    let sample = &records[..12];
    let value = ValueConfig {
        draws: 4000,
        ensemble_draws: 300,
        seed: 2,
        ..ValueConfig::default()
    };
    let at_fit = simulate_batch(&fit.point_estimate, Some(&fit.elite_params()), sample, &schedule, &config, &value)?;
    let at_truth = simulate_batch(&truth, None, sample, &schedule, &config, &value)?;

    println!("{:<10} {:>3} {:>9} {:>19} {:>10}", "patent", "T", "ensemble", "5%-95% band", "truth");
    for (e, t) in at_fit.estimates.iter().zip(&at_truth.estimates) {
        let s = e.ensemble.as_ref().expect("ensemble requested");
        let inside = s.band.0 <= t.log_r0_mean && t.log_r0_mean <= s.band.1;
        println!(
            "{:<10} {:>3} {:>9.3} [{:>7.3}, {:>7.3}] {:>10.3}{}",
            e.patent_id,
            e.expiry_age,
            s.log_r0,
            s.band.0,
            s.band.1,
            t.log_r0_mean,
            if inside { "" } else { "  outside" }
        );
    }
    Ok(())
}
