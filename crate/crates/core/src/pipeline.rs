//! File-level commands: `estimate`, `value`, `synth`, and `rerun` from a
//! manifest.
//!
//! Each command reads its inputs, writes every output under one directory
//! together with a `manifest.json`, and never touches its inputs. The
//! manifest echoes the arguments and SHA-256 digests of all inputs and
//! outputs, so a run can be repeated and compared byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{self, CovariateSpec, IngestReport, PatentRecord};
use crate::error::{Error, Result};
use crate::estimator::{self, EstimationResult, GaConfig, ParamBounds};
use crate::fee_schedule::{self, FeeSchedule};
use crate::model::{ModelConfig, ModelParams};
use crate::report::{self, GroupKey, MoneyField, MoneyScale};
use crate::simulate::{self, ValueConfig};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const THREADS_ENV: &str = "PATENT_RENT_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateArgs {
    pub records: PathBuf,
    /// Built-in schedule name or path to a schedule file.
    pub schedule: String,
    pub ga_config: Option<PathBuf>,
    pub bounds: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub seed: u64,
    /// Also run coordinate-wise refinement of the best individual.
    pub refine: bool,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueArgs {
    pub records: PathBuf,
    pub estimation: PathBuf,
    pub draws: usize,
    pub ensemble: bool,
    pub ensemble_draws: usize,
    pub seed: u64,
    /// Multiplier applied to money cells in the tables.
    pub money_factor: f64,
    pub money_unit: String,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthArgs {
    pub params: PathBuf,
    pub n: usize,
    pub schedule: String,
    pub covariate_spec: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "args", rename_all = "snake_case")]
pub enum Command {
    Estimate(EstimateArgs),
    Value(ValueArgs),
    Synth(SynthArgs),
}

impl Command {
    pub fn out_dir(&self) -> &Path {
        match self {
            Command::Estimate(a) => &a.out,
            Command::Value(a) => &a.out,
            Command::Synth(a) => &a.out,
        }
    }

    pub fn set_out_dir(&mut self, dir: PathBuf) {
        match self {
            Command::Estimate(a) => a.out = dir,
            Command::Value(a) => a.out = dir,
            Command::Synth(a) => a.out = dir,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Command::Estimate(a) => a.seed,
            Command::Value(a) => a.seed,
            Command::Synth(a) => a.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub started_unix: u64,
    pub finished_unix: u64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&read_text(path)?)?)
    }
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn digest_file(role: &str, path: &Path) -> Result<FileDigest> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(FileDigest {
        role: role.into(),
        path: path.to_path_buf(),
        sha256: sha256_hex(&bytes),
    })
}

/// Parse TOML, or JSON when the file name ends in `.json`.
fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
    }
}

fn absolute(path: &Path) -> Result<PathBuf> {
    fs::canonicalize(path).map_err(|e| Error::io(path, e))
}

/// A built-in schedule name or a schedule file. A name that also exists as a
/// file is ambiguous and rejected.
pub fn resolve_schedule(reference: &str) -> Result<(FeeSchedule, Option<PathBuf>)> {
    let path = Path::new(reference);
    let builtin = fee_schedule::BUILTIN_NAMES.contains(&reference);
    match (builtin, path.exists()) {
        (true, true) => Err(Error::config(format!(
            "schedule reference `{reference}` names both a built-in schedule and a file; use ./{reference} for the file"
        ))),
        (true, false) => Ok((fee_schedule::builtin_schedule(reference)?, None)),
        (false, true) => {
            let abs = absolute(path)?;
            Ok((fee_schedule::load_schedule(&read_text(&abs)?)?, Some(abs)))
        }
        (false, false) => Err(Error::config(format!(
            "schedule `{reference}` is neither a built-in ({}) nor an existing file",
            fee_schedule::BUILTIN_NAMES.join(", ")
        ))),
    }
}

fn load_records(path: &Path) -> Result<(Vec<PatentRecord>, IngestReport)> {
    let (records, report) = data::parse_records(&read_text(path)?)?;
    if records.is_empty() {
        return Err(Error::Ingest(format!("{}: no usable records", path.display())));
    }
    Ok((records, report))
}

struct Outputs {
    dir: PathBuf,
    written: Vec<FileDigest>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(FileDigest {
            role: "output".into(),
            path: PathBuf::from(name),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }
}

/// Run a command, optionally inside a pool of `threads` workers. Output
/// bytes do not depend on the thread count.
pub fn run(command: &Command, threads: Option<usize>) -> Result<RunManifest> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::config(format!("thread pool: {e}")))?;
            pool.install(|| run_here(command))
        }
        None => run_here(command),
    }
}

fn run_here(command: &Command) -> Result<RunManifest> {
    let started = now_unix();
    let (command, inputs, outputs) = match command {
        Command::Estimate(a) => {
            let (args, inputs, out) = cmd_estimate(a)?;
            (Command::Estimate(args), inputs, out)
        }
        Command::Value(a) => {
            let (args, inputs, out) = cmd_value(a)?;
            (Command::Value(args), inputs, out)
        }
        Command::Synth(a) => {
            let (args, inputs, out) = cmd_synth(a)?;
            (Command::Synth(args), inputs, out)
        }
    };
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        seed: command.seed(),
        command,
        inputs,
        outputs: outputs.written.clone(),
        started_unix: started,
        finished_unix: now_unix(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    let path = outputs.dir.join(MANIFEST_FILE);
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

fn cmd_estimate(a: &EstimateArgs) -> Result<(EstimateArgs, Vec<FileDigest>, Outputs)> {
    let mut args = a.clone();
    args.records = absolute(&a.records)?;
    let mut inputs = vec![digest_file("records", &args.records)?];
    let (schedule, schedule_path) = resolve_schedule(&a.schedule)?;
    if let Some(p) = schedule_path {
        inputs.push(digest_file("schedule", &p)?);
        args.schedule = p.display().to_string();
    }
    let mut ga = match &a.ga_config {
        Some(p) => {
            let p = absolute(p)?;
            inputs.push(digest_file("ga_config", &p)?);
            args.ga_config = Some(p.clone());
            read_config::<GaConfig>(&p)?
        }
        None => GaConfig::default(),
    };
    ga.seed = a.seed;
    let bounds = match &a.bounds {
        Some(p) => {
            let p = absolute(p)?;
            inputs.push(digest_file("bounds", &p)?);
            args.bounds = Some(p.clone());
            read_config::<ParamBounds>(&p)?
        }
        None => ParamBounds::default(),
    };
    let model = load_model(&a.model, &mut args.model, &mut inputs)?;

    let (records, ingest) = load_records(&args.records)?;
    let mut result = estimator::estimate(&records, &schedule, &model, &ga, &bounds)?;
    if a.refine {
        result = estimator::profile_refine(&result, &records, &schedule, &model)?;
    }

    let mut out = Outputs::new(&a.out)?;
    let mut text = result.to_json();
    text.push('\n');
    out.write("estimation.json", &text)?;
    out.write_json(
        "diagnostics.json",
        &serde_json::json!({
            "diagnostics": result.diagnostics,
            "ingest": ingest,
            "point_log_likelihood": result.point_log_likelihood,
            "best_log_likelihood": result.best.log_likelihood,
        }),
    )?;
    Ok((args, inputs, out))
}

fn load_model(
    given: &Option<PathBuf>,
    echo: &mut Option<PathBuf>,
    inputs: &mut Vec<FileDigest>,
) -> Result<ModelConfig> {
    let model = match given {
        Some(p) => {
            let p = absolute(p)?;
            inputs.push(digest_file("model", &p)?);
            *echo = Some(p.clone());
            read_config::<ModelConfig>(&p)?
        }
        None => ModelConfig::default(),
    };
    model.validate()?;
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSummary {
    pub patents: usize,
    pub valued: usize,
    pub failures: Vec<simulate::ValueFailure>,
    pub draws: usize,
    pub mc_se_reliable: bool,
    pub ensemble: bool,
    pub ensemble_members: usize,
    pub point_estimate: ModelParams,
    pub money_scale: MoneyScale,
    pub ingest: IngestReport,
}

fn cmd_value(a: &ValueArgs) -> Result<(ValueArgs, Vec<FileDigest>, Outputs)> {
    let mut args = a.clone();
    args.records = absolute(&a.records)?;
    args.estimation = absolute(&a.estimation)?;
    let inputs = vec![
        digest_file("records", &args.records)?,
        digest_file("estimation", &args.estimation)?,
    ];
    if a.draws < 1 {
        return Err(Error::domain("--draws must be at least 1"));
    }
    let fit = EstimationResult::from_json(&read_text(&args.estimation)?)?;
    let elite = fit.elite_params();
    if a.ensemble && elite.is_empty() {
        return Err(Error::config("--ensemble needs an elite set in the estimation result"));
    }
    let schedule = &fit.run.schedule;
    let model = &fit.run.model;
    let (records, ingest) = load_records(&args.records)?;
    let value = ValueConfig {
        draws: a.draws,
        ensemble_draws: a.ensemble_draws.max(1),
        seed: a.seed,
        ..ValueConfig::default()
    };
    let batch = simulate::simulate_batch(
        &fit.point_estimate,
        a.ensemble.then_some(elite.as_slice()),
        &records,
        schedule,
        model,
        &value,
    )?;
    let ids = batch.by_id();
    let valued: Vec<PatentRecord> = records
        .iter()
        .filter(|r| ids.contains_key(r.patent_id.as_str()))
        .cloned()
        .collect();
    if valued.is_empty() {
        return Err(Error::Report("no patent could be valued".into()));
    }
    let scale = MoneyScale {
        factor: a.money_factor,
        unit: a.money_unit.clone(),
    };
    let est = &batch.estimates;

    let mut out = Outputs::new(&a.out)?;
    out.write("values.csv", &report::values_csv(est))?;
    let shares = report::expiry_share_table(&valued)?;
    out.write("expiry_shares.csv", &shares.to_csv())?;
    out.write("expiry_shares.txt", &shares.render())?;
    for (stem, field) in [("r0_by_group", MoneyField::R0), ("npv_by_group", MoneyField::Npv)] {
        let tech = report::value_by_group(&valued, est, GroupKey::Technology, field, &scale)?;
        let own = report::value_by_group(&valued, est, GroupKey::Ownership, field, &scale)?;
        out.write(&format!("{stem}_technology.csv"), &tech.to_csv())?;
        out.write(&format!("{stem}_ownership.csv"), &own.to_csv())?;
        out.write(&format!("{stem}.txt"), &report::render_value_tables(&tech, &own))?;
    }
    let quantiles = report::quantile_table(&valued, est, &report::DEFAULT_QUANTILES, &scale)?;
    out.write("npv_quantiles.csv", &quantiles.to_csv())?;
    out.write("npv_quantiles.txt", &quantiles.render())?;
    out.write("age_trend.csv", &report::age_trend_csv(&report::age_trend(&valued, est)?))?;
    out.write_json(
        "value_summary.json",
        &ValueSummary {
            patents: records.len(),
            valued: valued.len(),
            failures: batch.failures.clone(),
            draws: a.draws,
            mc_se_reliable: a.draws >= value.min_reliable_draws,
            ensemble: a.ensemble,
            ensemble_members: if a.ensemble { elite.len() } else { 0 },
            point_estimate: fit.point_estimate,
            money_scale: scale,
            ingest,
        },
    )?;
    Ok((args, inputs, out))
}

fn cmd_synth(a: &SynthArgs) -> Result<(SynthArgs, Vec<FileDigest>, Outputs)> {
    let mut args = a.clone();
    args.params = absolute(&a.params)?;
    let mut inputs = vec![digest_file("params", &args.params)?];
    let params: ModelParams = read_config(&args.params)?;
    params.validate()?;
    let (schedule, schedule_path) = resolve_schedule(&a.schedule)?;
    if let Some(p) = schedule_path {
        inputs.push(digest_file("schedule", &p)?);
        args.schedule = p.display().to_string();
    }
    let spec = match &a.covariate_spec {
        Some(p) => {
            let p = absolute(p)?;
            inputs.push(digest_file("covariate_spec", &p)?);
            args.covariate_spec = Some(p.clone());
            read_config::<CovariateSpec>(&p)?
        }
        None => CovariateSpec::default(),
    };
    let model = load_model(&a.model, &mut args.model, &mut inputs)?;
    let records = data::generate_synthetic(&params, a.n, &schedule, &model, &spec, a.seed)?;
    let mut out = Outputs::new(&a.out)?;
    out.write("records.csv", &data::serialize_records(&records))?;
    Ok((args, inputs, out))
}

/// Repeat a run from its manifest, writing into `out` (default: the
/// original directory). Fails if any input file changed since.
pub fn rerun(manifest_path: &Path, out: Option<PathBuf>, threads: Option<usize>) -> Result<RunManifest> {
    let manifest = RunManifest::load(manifest_path)?;
    for input in &manifest.inputs {
        let now = digest_file(&input.role, &input.path)?;
        if now.sha256 != input.sha256 {
            return Err(Error::config(format!(
                "input {} ({}) changed since the recorded run",
                input.role,
                input.path.display()
            )));
        }
    }
    let mut command = manifest.command;
    if let Some(dir) = out {
        command.set_out_dir(dir);
    }
    run(&command, threads)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_resolve() {
        let (s, path) = resolve_schedule("china").unwrap();
        assert_eq!(s.name(), "china");
        assert!(path.is_none());
        assert!(matches!(resolve_schedule("atlantis"), Err(Error::Config(_))));
    }

    #[test]
    fn manifest_round_trips() {
        let m = RunManifest {
            tool_version: "0".into(),
            command: Command::Synth(SynthArgs {
                params: "p.toml".into(),
                n: 10,
                schedule: "india".into(),
                covariate_spec: None,
                model: None,
                seed: 4,
                out: "o".into(),
            }),
            seed: 4,
            inputs: vec![],
            outputs: vec![],
            started_unix: 1,
            finished_unix: 2,
        };
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"command\":\"synth\""));
        assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Ingest("x".into()).exit_code(), 2);
        assert_eq!(Error::Ensemble { skipped: 1, total: 2 }.exit_code(), 3);
    }
}
