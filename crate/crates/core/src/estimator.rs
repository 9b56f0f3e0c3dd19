//! Maximum-likelihood estimation of (σ, d, β) with a real-coded genetic
//! algorithm.
//!
//! Each start evolves its own population: uniform initialization inside the
//! parameter box, then per generation tournament selection, blend (BLX-α)
//! crossover, Gaussian mutation clipped to the box, and elitism. The final
//! generations of all starts are pooled; the best `elite_size` individuals
//! form the elite set. The point estimate is their componentwise median and
//! the reported standard errors are their sample standard deviations
//! (elite dispersion, not asymptotic MLE errors).
//!
//! Every offspring draws from its own derived random stream and fitness is
//! evaluated independently per individual, so results are identical for any
//! number of worker threads.

use std::collections::BTreeSet;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::PatentRecord;
use crate::error::{Error, Result};
use crate::fee_schedule::FeeSchedule;
use crate::likelihood::LikelihoodEvaluator;
use crate::model::{ModelConfig, ModelParams, N_PARAMS, PARAM_NAMES};
use crate::seeding;
use crate::stats;

/// Offset turning strict inequalities (σ > 0, β_lag < 0, ...) into closed bounds.
pub const INTERIOR_OFFSET: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub starts: usize,
    pub elite_size: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// Mutation standard deviation as a fraction of each parameter's box width.
    pub mutation_scale: f64,
    /// Multiplier applied to `mutation_scale` after every generation.
    pub mutation_decay: f64,
    /// BLX-α extension of the parents' span.
    pub blend_alpha: f64,
    pub crossover_space: CrossoverSpace,
    /// Fraction of each generation copied unchanged (at least one individual).
    pub elitism_fraction: f64,
    pub seed: u64,
}

/// Coordinates in which blend crossover mixes the parents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverSpace {
    /// (u_a, d, u_b, β_1/σ, …) where u_t = (th_t(d) − β_0)/σ is the
    /// standardized threshold at a reference age. Expiry probabilities depend
    /// on σ, β_0 and d mostly through these, so the likelihood ridge along
    /// which they trade off becomes nearly axis-aligned.
    #[default]
    Ladder,
    /// (σ, d, β) as stored.
    Raw,
}

/// Thresholds at the two reference ages as a function of d.
type LadderFn<'a> = dyn Fn(f64) -> Option<(f64, f64)> + Sync + 'a;

fn to_ladder(g: &Genome, ladder: &LadderFn) -> Option<Genome> {
    let (ta, tb) = ladder(g[1])?;
    let inv = 1.0 / g[0];
    Some(std::array::from_fn(|k| match k {
        0 => (ta - g[2]) * inv,
        1 => g[1],
        2 => (tb - g[2]) * inv,
        _ => g[k] * inv,
    }))
}

fn from_ladder(h: &Genome, lower: &Genome, upper: &Genome, ladder: &LadderFn) -> Option<Genome> {
    let d = h[1].clamp(lower[1], upper[1]);
    let (ta, tb) = ladder(d)?;
    let gap = h[2] - h[0];
    if !(gap > 0.0) {
        return None;
    }
    let sigma = ((tb - ta) / gap).clamp(lower[0], upper[0]);
    let intercept = ta - sigma * h[0];
    Some(std::array::from_fn(|k| match k {
        0 => sigma,
        1 => d,
        2 => intercept,
        _ => h[k] * sigma,
    }))
}

fn blend<R: Rng>(a: &Genome, b: &Genome, alpha: f64, rng: &mut R) -> Genome {
    std::array::from_fn(|k| a[k] + (rng.random::<f64>() * (1.0 + 2.0 * alpha) - alpha) * (b[k] - a[k]))
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 10_000,
            generations: 20,
            starts: 5,
            elite_size: 200,
            tournament_size: 4,
            crossover_rate: 0.9,
            mutation_rate: 0.15,
            mutation_scale: 0.1,
            mutation_decay: 0.7,
            blend_alpha: 0.5,
            crossover_space: CrossoverSpace::Ladder,
            elitism_fraction: 0.01,
            seed: 0,
        }
    }
}

impl GaConfig {
    /// Smaller population for desk-scale runs.
    pub fn desk(seed: u64) -> Self {
        Self {
            population_size: 2_000,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("population_size", self.population_size),
            ("generations", self.generations),
            ("starts", self.starts),
            ("elite_size", self.elite_size),
            ("tournament_size", self.tournament_size),
        ];
        for (name, v) in counts {
            if v < 1 {
                return Err(Error::config(format!("GA {name} must be at least 1")));
            }
        }
        if self.elite_size > self.population_size {
            return Err(Error::config(format!(
                "elite_size {} exceeds population_size {}",
                self.elite_size, self.population_size
            )));
        }
        let probs = [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
            ("elitism_fraction", self.elitism_fraction),
        ];
        for (name, v) in probs {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(format!("GA {name} = {v} outside [0, 1]")));
            }
        }
        if !(self.mutation_scale >= 0.0 && self.mutation_decay > 0.0 && self.blend_alpha >= 0.0) {
            return Err(Error::config("mutation_scale, mutation_decay and blend_alpha must be nonnegative"));
        }
        Ok(())
    }

    fn n_elitist(&self) -> usize {
        ((self.elitism_fraction * self.population_size as f64).ceil() as usize).clamp(1, self.population_size)
    }
}

/// Closed search interval per parameter, named as in [`PARAM_NAMES`].
/// Unlisted parameters keep their default interval when deserializing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamBounds {
    pub sigma: [f64; 2],
    pub d: [f64; 2],
    pub intercept: [f64; 2],
    pub chemical: [f64; 2],
    pub mechanical: [f64; 2],
    pub electrical: [f64; 2],
    pub instruments: [f64; 2],
    pub family_size: [f64; 2],
    pub inventor_size: [f64; 2],
    pub grant_lag: [f64; 2],
    pub tech_scope: [f64; 2],
}

impl Default for ParamBounds {
    fn default() -> Self {
        Self::with_limits(0.5, 20.0, 20.0)
    }
}

impl ParamBounds {
    /// Sign-constrained box: d in [0.1, d_max], σ in (0, σ_max], β_lag ≤ 0,
    /// β_scope, β_family, β_inventors ≥ 0, everything else in [−β_max, β_max].
    pub fn with_limits(d_max: f64, sigma_max: f64, beta_max: f64) -> Self {
        let free = [-beta_max, beta_max];
        let positive = [INTERIOR_OFFSET, beta_max];
        Self {
            sigma: [INTERIOR_OFFSET, sigma_max],
            d: [0.1, d_max],
            intercept: free,
            chemical: free,
            mechanical: free,
            electrical: free,
            instruments: free,
            family_size: positive,
            inventor_size: positive,
            grant_lag: [-beta_max, -INTERIOR_OFFSET],
            tech_scope: positive,
        }
    }

    /// Box collapsed onto a single parameter vector.
    pub fn point(p: &ModelParams) -> Self {
        let v = p.to_array();
        Self::from_arrays(&v, &v)
    }

    pub fn from_arrays(lower: &[f64; N_PARAMS], upper: &[f64; N_PARAMS]) -> Self {
        let b = |i: usize| [lower[i], upper[i]];
        Self {
            sigma: b(0),
            d: b(1),
            intercept: b(2),
            chemical: b(3),
            mechanical: b(4),
            electrical: b(5),
            instruments: b(6),
            family_size: b(7),
            inventor_size: b(8),
            grant_lag: b(9),
            tech_scope: b(10),
        }
    }

    fn pairs(&self) -> [[f64; 2]; N_PARAMS] {
        [
            self.sigma,
            self.d,
            self.intercept,
            self.chemical,
            self.mechanical,
            self.electrical,
            self.instruments,
            self.family_size,
            self.inventor_size,
            self.grant_lag,
            self.tech_scope,
        ]
    }

    pub fn lower(&self) -> [f64; N_PARAMS] {
        self.pairs().map(|p| p[0])
    }

    pub fn upper(&self) -> [f64; N_PARAMS] {
        self.pairs().map(|p| p[1])
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (name, [lo, hi]) in PARAM_NAMES.iter().zip(self.pairs()) {
            if !(lo.is_finite() && hi.is_finite()) {
                problems.push(format!("{name}: bounds must be finite"));
            } else if lo > hi {
                problems.push(format!("{name}: empty interval [{lo}, {hi}]"));
            }
        }
        let [s_lo, _] = self.sigma;
        let [d_lo, _] = self.d;
        if !(s_lo > 0.0) {
            problems.push("sigma: lower bound must be > 0".into());
        }
        if !(d_lo > 0.0) {
            problems.push("d: lower bound must be > 0".into());
        }
        if self.grant_lag[1] > 0.0 {
            problems.push("grant_lag: upper bound must be <= 0".into());
        }
        for (name, [lo, _]) in [
            ("family_size", self.family_size),
            ("inventor_size", self.inventor_size),
            ("tech_scope", self.tech_scope),
        ] {
            if lo < 0.0 {
                problems.push(format!("{name}: lower bound must be >= 0"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::config(format!("infeasible parameter bounds: {}", problems.join("; "))))
        }
    }

    pub fn contains(&self, v: &[f64; N_PARAMS]) -> bool {
        self.pairs()
            .iter()
            .zip(v)
            .all(|([lo, hi], x)| *lo <= *x && *x <= *hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub params: ModelParams,
    pub log_likelihood: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartDiagnostics {
    pub start: usize,
    /// Best log-likelihood after initialization and after each generation.
    pub best_trajectory: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub starts: Vec<StartDiagnostics>,
    /// Parameters whose median lies within 1% of the box width from an edge.
    pub boundary_hits: Vec<String>,
    pub evaluations: usize,
    /// Any evaluated candidate had decreasing thresholds.
    pub non_monotone_seen: bool,
    /// Settings the estimation method leaves open and this run chose.
    pub engineering_defaults: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEcho {
    pub model: ModelConfig,
    pub ga: GaConfig,
    pub bounds: ParamBounds,
    pub schedule: FeeSchedule,
    pub n_records: usize,
    pub seed: u64,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub incumbent: Candidate,
    pub sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    /// Sorted by log-likelihood, best first.
    pub elite: Vec<Candidate>,
    pub point_estimate: ModelParams,
    pub point_log_likelihood: f64,
    /// Standard deviation of each parameter over the elite set.
    #[serde(rename = "std_errors_elite_dispersion")]
    pub std_errors: ModelParams,
    pub best: Candidate,
    pub refined: Option<Refinement>,
    pub diagnostics: Diagnostics,
    pub run: RunEcho,
}

impl EstimationResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("estimation result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn elite_params(&self) -> Vec<ModelParams> {
        self.elite.iter().map(|c| c.params).collect()
    }
}

type Genome = [f64; N_PARAMS];

struct Individual {
    genes: Genome,
    fitness: f64,
}

pub fn estimate(
    records: &[PatentRecord],
    schedule: &FeeSchedule,
    config: &ModelConfig,
    ga: &GaConfig,
    bounds: &ParamBounds,
) -> Result<EstimationResult> {
    ga.validate()?;
    bounds.validate()?;
    config.validate()?;
    if records.len() < 50 {
        return Err(Error::DegenerateData(format!(
            "{} records; at least 50 are needed",
            records.len()
        )));
    }
    let distinct: BTreeSet<u32> = records.iter().map(|r| r.expiry_age).collect();
    if distinct.len() < 2 {
        return Err(Error::DegenerateData(
            "all records share one expiry age; sigma is not identified".into(),
        ));
    }
    let eval = LikelihoodEvaluator::new(records, schedule, config)?;
    // Surface configuration errors (e.g. zero fees at decision ages) before the search.
    eval.thresholds(bounds.d[0])?;
    eval.thresholds(bounds.d[1])?;

    let lower = bounds.lower();
    let upper = bounds.upper();
    let fitness = |g: &Genome| -> (f64, bool) {
        match eval.evaluate(&ModelParams::from_array(g), false) {
            Ok(ll) => (ll.value, ll.non_monotone),
            Err(_) => (f64::NEG_INFINITY, false),
        }
    };

    let ref_ages = (config.min_age, (config.min_age + config.max_term) / 2);
    let ladder = |d: f64| -> Option<(f64, f64)> {
        let t = eval.thresholds(d).ok()?;
        let at = |age: u32| t.ages.iter().position(|&x| x == age).map_or(f64::NAN, |i| t.values[i]);
        let (a, b) = (at(ref_ages.0), at(ref_ages.1));
        (b > a).then_some((a, b))
    };
    let mut pooled = Vec::with_capacity(ga.population_size * ga.starts);
    let mut start_diags = Vec::with_capacity(ga.starts);
    let mut evaluations = 0;
    let mut non_monotone_seen = false;
    for start in 0..ga.starts {
        let run = evolve(start, ga, &lower, &upper, &fitness, &ladder)?;
        evaluations += run.evaluations;
        non_monotone_seen |= run.non_monotone_seen;
        start_diags.push(StartDiagnostics {
            start,
            best_trajectory: run.trajectory,
        });
        pooled.extend(run.population.into_iter().map(|ind| (start, ind)));
    }

    // Global ranking; ties broken by (start, position) for determinism.
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[b].1.fitness.total_cmp(&pooled[a].1.fitness).then(a.cmp(&b)));
    let elite: Vec<Candidate> = order
        .iter()
        .take(ga.elite_size)
        .map(|&i| Candidate {
            params: ModelParams::from_array(&pooled[i].1.genes),
            log_likelihood: pooled[i].1.fitness,
        })
        .collect();

    let mut median = [0.0; N_PARAMS];
    let mut spread = [0.0; N_PARAMS];
    for k in 0..N_PARAMS {
        let column: Vec<f64> = elite.iter().map(|c| c.params.to_array()[k]).collect();
        median[k] = stats::median(&column);
        spread[k] = stats::sample_sd(&column);
    }
    let point_estimate = ModelParams::from_array(&median);
    let point_log_likelihood = fitness(&median).0;
    evaluations += 1;
    let boundary_hits = PARAM_NAMES
        .iter()
        .enumerate()
        .filter(|&(k, _)| {
            let margin = 0.01 * (upper[k] - lower[k]);
            median[k] - lower[k] <= margin || upper[k] - median[k] <= margin
        })
        .map(|(_, name)| name.to_string())
        .collect();

    Ok(EstimationResult {
        best: elite[0],
        elite,
        point_estimate,
        point_log_likelihood,
        std_errors: ModelParams::from_array(&spread),
        refined: None,
        diagnostics: Diagnostics {
            starts: start_diags,
            boundary_hits,
            evaluations,
            non_monotone_seen,
            engineering_defaults: vec![
                format!("starts = {}", ga.starts),
                "selection = tournament".into(),
                format!("crossover = BLX-alpha (alpha = {})", ga.blend_alpha),
                format!(
                    "mutation = gaussian, clipped (scale = {}, decay = {})",
                    ga.mutation_scale, ga.mutation_decay
                ),
                format!("elitism = {} per generation", ga.n_elitist()),
                "pooling = final generations of all starts".into(),
            ],
        },
        run: RunEcho {
            model: config.clone(),
            ga: ga.clone(),
            bounds: bounds.clone(),
            schedule: schedule.clone(),
            n_records: records.len(),
            seed: ga.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

struct StartRun {
    population: Vec<Individual>,
    trajectory: Vec<f64>,
    evaluations: usize,
    non_monotone_seen: bool,
}

fn evolve<F>(
    start: usize,
    ga: &GaConfig,
    lower: &Genome,
    upper: &Genome,
    fitness: &F,
    ladder: &LadderFn,
) -> Result<StartRun>
where
    F: Fn(&Genome) -> (f64, bool) + Sync,
{
    let width: Genome = std::array::from_fn(|k| upper[k] - lower[k]);
    let stream = |generation: usize, i: usize| {
        seeding::rng(ga.seed, &[seeding::TAG_GA, start as u64, generation as u64, i as u64])
    };
    let evaluate = |genomes: Vec<Genome>| -> (Vec<Individual>, bool) {
        let scored: Vec<(Individual, bool)> = genomes
            .into_par_iter()
            .map(|genes| {
                let (f, nm) = fitness(&genes);
                (Individual { genes, fitness: f }, nm)
            })
            .collect();
        let nm = scored.iter().any(|(_, nm)| *nm);
        (scored.into_iter().map(|(ind, _)| ind).collect(), nm)
    };

    let initial: Vec<Genome> = (0..ga.population_size)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(0, i);
            std::array::from_fn(|k| lower[k] + rng.random::<f64>() * width[k])
        })
        .collect();
    let (mut population, mut non_monotone_seen) = evaluate(initial);
    let mut evaluations = population.len();
    let best_of = |pop: &[Individual]| pop.iter().map(|i| i.fitness).fold(f64::NEG_INFINITY, f64::max);
    let mut trajectory = vec![best_of(&population)];
    let n_elitist = ga.n_elitist();

    for generation in 1..=ga.generations {
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| population[b].fitness.total_cmp(&population[a].fitness).then(a.cmp(&b)));
        let sigma_scale = ga.mutation_scale * ga.mutation_decay.powi(generation as i32 - 1);
        let pop = &population;

        let offspring: Vec<Genome> = (n_elitist..ga.population_size)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream(generation, i);
                let a = tournament(pop, ga.tournament_size, &mut rng);
                let b = tournament(pop, ga.tournament_size, &mut rng);
                let mut child = pop[a].genes;
                if rng.random::<f64>() < ga.crossover_rate {
                    let (pa, pb) = (&pop[a].genes, &pop[b].genes);
                    let mixed = match ga.crossover_space {
                        CrossoverSpace::Ladder => match (to_ladder(pa, ladder), to_ladder(pb, ladder)) {
                            (Some(la), Some(lb)) => from_ladder(&blend(&la, &lb, ga.blend_alpha, &mut rng), lower, upper, ladder),
                            _ => None,
                        },
                        CrossoverSpace::Raw => None,
                    };
                    child = mixed.unwrap_or_else(|| blend(pa, pb, ga.blend_alpha, &mut rng));
                }
                for k in 0..N_PARAMS {
                    if rng.random::<f64>() < ga.mutation_rate {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        child[k] += z * sigma_scale * width[k];
                    }
                    child[k] = child[k].clamp(lower[k], upper[k]);
                }
                child
            })
            .collect();

        let (children, nm) = evaluate(offspring);
        non_monotone_seen |= nm;
        evaluations += children.len();
        let mut next: Vec<Individual> = ranked[..n_elitist]
            .iter()
            .map(|&i| Individual {
                genes: population[i].genes,
                fitness: population[i].fitness,
            })
            .collect();
        next.extend(children);
        population = next;
        trajectory.push(best_of(&population));
    }
    Ok(StartRun {
        population,
        trajectory,
        evaluations,
        non_monotone_seen,
    })
}

fn tournament<R: Rng>(pop: &[Individual], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..pop.len());
    for _ in 1..size {
        let c = rng.random_range(0..pop.len());
        if pop[c].fitness > pop[best].fitness || (pop[c].fitness == pop[best].fitness && c < best) {
            best = c;
        }
    }
    best
}

/// Coordinate-wise golden-section ascent inside `[lower, upper]`.
///
/// Each sweep maximizes along every coordinate in turn over its full
/// interval and keeps a move only if it improves the objective. Stops when a
/// sweep gains less than `tol` or after `max_sweeps` sweeps. Returns the final
/// point, its value and the number of sweeps run.
pub fn coordinate_ascent<const N: usize, F>(
    x0: [f64; N],
    lower: &[f64; N],
    upper: &[f64; N],
    f: F,
    tol: f64,
    max_sweeps: usize,
) -> ([f64; N], f64, usize)
where
    F: Fn(&[f64; N]) -> f64,
{
    let mut x = x0;
    let mut fx = f(&x);
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let before = fx;
        for k in 0..N {
            if upper[k] <= lower[k] {
                continue;
            }
            let mut probe = x;
            let mut along = |t: f64| {
                probe[k] = t;
                f(&probe)
            };
            let (t, ft) = golden_max(&mut along, lower[k], upper[k]);
            if ft > fx {
                x[k] = t;
                fx = ft;
            }
        }
        if fx - before < tol {
            break;
        }
    }
    (x, fx, sweeps)
}

fn golden_max(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let tol = 1e-10 * (1.0 + a.abs().max(b.abs()));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    let fm = f(m);
    [(c, fc), (d, fd), (m, fm)]
        .into_iter()
        .fold((m, fm), |acc, p| if p.1 > acc.1 { p } else { acc })
}

/// Polish the best elite member by coordinate-wise golden-section search.
/// Elite set, medians and dispersion are left as estimated; the refined
/// incumbent is reported separately.
pub fn profile_refine(
    result: &EstimationResult,
    records: &[PatentRecord],
    schedule: &FeeSchedule,
    config: &ModelConfig,
) -> Result<EstimationResult> {
    let eval = LikelihoodEvaluator::new(records, schedule, config)?;
    let objective = |g: &Genome| {
        eval.evaluate(&ModelParams::from_array(g), false)
            .map_or(f64::NEG_INFINITY, |ll| ll.value)
    };
    let lower = result.run.bounds.lower();
    let upper = result.run.bounds.upper();
    let start = result.best.params.to_array();
    let (x, fx, sweeps) = coordinate_ascent(start, &lower, &upper, objective, 1e-6, 50);
    let incumbent = if fx > result.best.log_likelihood {
        Candidate {
            params: ModelParams::from_array(&x),
            log_likelihood: fx,
        }
    } else {
        result.best
    };
    let mut out = result.clone();
    out.refined = Some(Refinement { incumbent, sweeps });
    Ok(out)
}
