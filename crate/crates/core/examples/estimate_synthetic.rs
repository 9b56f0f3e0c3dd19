//! Fit the model to a synthetic cohort drawn from known parameters and
//! compare the estimate with the truth.
//!
//!     cargo run --release --example estimate_synthetic -- [n] [seed]

use patent_rent::data::generate_synthetic;
use patent_rent::likelihood::LikelihoodEvaluator;
use patent_rent::model::PARAM_NAMES;
use patent_rent::{builtin_schedule, estimate, Beta, CovariateSpec, GaConfig, ModelConfig, ModelParams, ParamBounds};

fn main() -> patent_rent::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(5000, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

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
    let records = generate_synthetic(&truth, n, &schedule, &config, &CovariateSpec::default(), seed)?;

    let ga = GaConfig {
        starts: 3,
        ..GaConfig::desk(seed)
    };
    let t0 = std::time::Instant::now();
    let fit = estimate(&records, &schedule, &config, &ga, &ParamBounds::default())?;
    let eval = LikelihoodEvaluator::new(&records, &schedule, &config)?;
    let ll_truth = eval.evaluate(&truth, true)?.value;

    println!("{n} records, {:.1}s", t0.elapsed().as_secs_f64());
    println!("{:<14}{:>10}{:>10}{:>10}", "parameter", "truth", "estimate", "elite sd");
    let (t, e, s) = (truth.to_array(), fit.point_estimate.to_array(), fit.std_errors.to_array());
    for k in 0..PARAM_NAMES.len() {
        println!("{:<14}{:>10.3}{:>10.3}{:>10.3}", PARAM_NAMES[k], t[k], e[k], s[k]);
    }
    println!("log-likelihood: truth {ll_truth:.2}, estimate {:.2}, best {:.2}", fit.point_log_likelihood, fit.best.log_likelihood);
    println!("boundary hits: {:?}", fit.diagnostics.boundary_hits);
    Ok(())
}
