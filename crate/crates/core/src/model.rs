//! Renewal model mathematics: depreciation, the one-year discount factor,
//! renewal thresholds and the covariate index of log initial returns.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fee_schedule::FeeSchedule;

/// How the "never renewed" cutpoint is set when the schedule charges nothing
/// at the youngest decision ages (India charges from age 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadingZeroFees {
    /// Ages before the first fee-bearing age reuse that age's threshold.
    #[default]
    FirstFeeAge,
    /// A zero fee at any decision age is a configuration error.
    Reject,
}

/// Discounting convention of the lifetime value sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NpvConvention {
    /// Σ (r(t) − c(t)) (1+s)^−t
    #[default]
    NetFlow,
    /// Σ r(t) − c(t) (1+s)^−t, discounting only fees.
    CostsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub scale: f64,
    pub shift: f64,
}

impl Default for Affine {
    fn default() -> Self {
        Self {
            scale: 1.0,
            shift: 0.0,
        }
    }
}

impl Affine {
    fn apply(&self, v: f64) -> f64 {
        self.scale * v + self.shift
    }

    fn is_identity(&self) -> bool {
        self.scale == 1.0 && self.shift == 0.0
    }
}

/// Optional per-covariate affine transforms for sensitivity runs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CovariateTransforms {
    pub family_size: Affine,
    pub inventor_size: Affine,
    pub grant_lag: Affine,
    pub tech_scope: Affine,
}

impl CovariateTransforms {
    pub fn is_identity(&self) -> bool {
        self.family_size.is_identity()
            && self.inventor_size.is_identity()
            && self.grant_lag.is_identity()
            && self.tech_scope.is_identity()
    }

    pub fn apply(&self, x: &CovariateVector) -> CovariateVector {
        CovariateVector {
            family_size: self.family_size.apply(x.family_size),
            inventor_size: self.inventor_size.apply(x.inventor_size),
            grant_lag: self.grant_lag.apply(x.grant_lag),
            tech_scope: self.tech_scope.apply(x.tech_scope),
            ..*x
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub discount_rate: f64,
    pub max_term: u32,
    pub min_age: u32,
    pub leading_zero_fees: LeadingZeroFees,
    pub npv_convention: NpvConvention,
    pub transforms: CovariateTransforms,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            discount_rate: 0.10,
            max_term: 20,
            min_age: 2,
            leading_zero_fees: LeadingZeroFees::FirstFeeAge,
            npv_convention: NpvConvention::NetFlow,
            transforms: CovariateTransforms::default(),
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.discount_rate > 0.0 && self.discount_rate < 1.0) {
            return Err(Error::config(format!(
                "discount rate {} outside (0, 1)",
                self.discount_rate
            )));
        }
        if self.min_age < 1 || self.min_age >= self.max_term {
            return Err(Error::config(format!(
                "need 1 <= min_age < max_term, got {} and {}",
                self.min_age, self.max_term
            )));
        }
        Ok(())
    }

    /// Ages at which a renewal decision is taken: `min_age..max_term`.
    pub fn decision_ages(&self) -> std::ops::Range<u32> {
        self.min_age..self.max_term
    }

    /// Possible expiry ages: `min_age..=max_term`.
    pub fn expiry_ages(&self) -> std::ops::RangeInclusive<u32> {
        self.min_age..=self.max_term
    }

    pub fn n_expiry_ages(&self) -> usize {
        (self.max_term - self.min_age + 1) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TechField {
    Chemical,
    Mechanical,
    Instruments,
    Electrical,
    Others,
}

impl TechField {
    /// Report order.
    pub const ALL: [TechField; 5] = [
        TechField::Chemical,
        TechField::Mechanical,
        TechField::Instruments,
        TechField::Electrical,
        TechField::Others,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TechField::Chemical => "chemical",
            TechField::Mechanical => "mechanical",
            TechField::Instruments => "instruments",
            TechField::Electrical => "electrical",
            TechField::Others => "others",
        }
    }
}

impl fmt::Display for TechField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TechField {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chemical" => Ok(TechField::Chemical),
            "mechanical" => Ok(TechField::Mechanical),
            "electrical" => Ok(TechField::Electrical),
            "instruments" => Ok(TechField::Instruments),
            "others" => Ok(TechField::Others),
            other => Err(format!("unknown tech_field `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ownership {
    Domestic,
    ForeignSubsidiary,
}

impl Ownership {
    pub const ALL: [Ownership; 2] = [Ownership::ForeignSubsidiary, Ownership::Domestic];

    pub fn label(self) -> &'static str {
        match self {
            Ownership::Domestic => "domestic",
            Ownership::ForeignSubsidiary => "foreign_subsidiary",
        }
    }
}

impl fmt::Display for Ownership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Ownership {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "domestic" => Ok(Ownership::Domestic),
            "foreign_subsidiary" => Ok(Ownership::ForeignSubsidiary),
            other => Err(format!("unknown ownership `{other}`")),
        }
    }
}

/// Patent characteristics entering the log initial return. Ownership is
/// carried for reporting only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovariateVector {
    pub family_size: f64,
    pub inventor_size: f64,
    pub grant_lag: f64,
    pub tech_scope: f64,
    pub tech_field: TechField,
    pub ownership: Ownership,
}

impl CovariateVector {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let checks = [
            ("family_size", self.family_size, 0.0),
            ("inventor_count", self.inventor_size, 1.0),
            ("grant_lag_years", self.grant_lag, 0.0),
            ("tech_scope", self.tech_scope, 1.0),
        ];
        for (name, v, min) in checks {
            if !v.is_finite() || v < min {
                return Err(format!("{name} = {v} must be finite and >= {min}"));
            }
        }
        Ok(())
    }
}

/// Regression coefficients of the log initial return. "others" is the
/// reference technology field.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Beta {
    pub intercept: f64,
    pub chemical: f64,
    pub mechanical: f64,
    pub electrical: f64,
    pub instruments: f64,
    pub family_size: f64,
    pub inventor_size: f64,
    pub grant_lag: f64,
    pub tech_scope: f64,
}

impl Beta {
    pub fn field_effect(&self, field: TechField) -> f64 {
        match field {
            TechField::Chemical => self.chemical,
            TechField::Mechanical => self.mechanical,
            TechField::Electrical => self.electrical,
            TechField::Instruments => self.instruments,
            TechField::Others => 0.0,
        }
    }
}

pub const N_PARAMS: usize = 11;

/// Parameter order used by flat vectors (estimation, bounds, reports).
pub const PARAM_NAMES: [&str; N_PARAMS] = [
    "sigma",
    "d",
    "intercept",
    "chemical",
    "mechanical",
    "electrical",
    "instruments",
    "family_size",
    "inventor_size",
    "grant_lag",
    "tech_scope",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub sigma: f64,
    pub d: f64,
    pub beta: Beta,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::domain(format!("sigma = {} must be > 0", self.sigma)));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::domain(format!("d = {} must be > 0", self.d)));
        }
        if self.to_array().iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite coefficient"));
        }
        Ok(())
    }

    pub fn to_array(&self) -> [f64; N_PARAMS] {
        let b = &self.beta;
        [
            self.sigma,
            self.d,
            b.intercept,
            b.chemical,
            b.mechanical,
            b.electrical,
            b.instruments,
            b.family_size,
            b.inventor_size,
            b.grant_lag,
            b.tech_scope,
        ]
    }

    pub fn from_array(v: &[f64; N_PARAMS]) -> Self {
        Self {
            sigma: v[0],
            d: v[1],
            beta: Beta {
                intercept: v[2],
                chemical: v[3],
                mechanical: v[4],
                electrical: v[5],
                instruments: v[6],
                family_size: v[7],
                inventor_size: v[8],
                grant_lag: v[9],
                tech_scope: v[10],
            },
        }
    }

    /// Estimates reported for Indian patents (σ = 6.07, d = 0.49), with a zero
    /// intercept since none was published.
    pub fn published_india() -> Self {
        Self {
            sigma: 6.07,
            d: 0.49,
            beta: Beta {
                intercept: 0.0,
                chemical: -2.04,
                mechanical: 1.81,
                electrical: 2.45,
                instruments: -0.40,
                family_size: 0.37,
                inventor_size: 0.21,
                grant_lag: -1.47,
                tech_scope: 0.78,
            },
        }
    }
}

/// Present value at age `t` of one year of unit initial return:
/// `e^{-dt} (1 - e^{-(d+s)}) / (d + s)`.
pub fn z_factor(d: f64, s: f64, t: f64) -> Result<f64> {
    if !(d > 0.0) || !(s > 0.0) {
        return Err(Error::domain(format!("z_factor needs d > 0 and s > 0, got d = {d}, s = {s}")));
    }
    if !(t >= 0.0) {
        return Err(Error::domain(format!("z_factor needs t >= 0, got {t}")));
    }
    let k = d + s;
    Ok((-d * t).exp() * (-(-k).exp_m1() / k))
}

/// Minimum log initial return that makes paying the age-`t` fee worthwhile.
pub fn threshold(schedule: &FeeSchedule, d: f64, config: &ModelConfig, t: u32) -> Result<f64> {
    if t < config.min_age || t >= config.max_term {
        return Err(Error::domain(format!(
            "decision age {t} outside [{}, {})",
            config.min_age, config.max_term
        )));
    }
    let cost = schedule.cost_at(t)?;
    if !(cost > 0.0) {
        return Err(Error::config(format!(
            "schedule `{}` charges nothing at decision age {t}; threshold undefined",
            schedule.name()
        )));
    }
    Ok((cost / z_factor(d, config.discount_rate, f64::from(t))?).ln())
}

/// β · X, with the "others" field contributing nothing beyond the intercept.
pub fn linear_index(beta: &Beta, x: &CovariateVector) -> f64 {
    beta.intercept
        + beta.field_effect(x.tech_field)
        + beta.family_size * x.family_size
        + beta.inventor_size * x.inventor_size
        + beta.grant_lag * x.grant_lag
        + beta.tech_scope * x.tech_scope
}

/// r(t) = r(0) e^{-dt}.
pub fn return_at_age(r0: f64, d: f64, t: f64) -> f64 {
    r0 * (-d * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fee_schedule::{builtin_schedule, FeeEntry};

    // Composite Gauss–Legendre (5 nodes, 64 panels) of ∫_t^{t+1} e^{-dτ - s(τ - t)} dτ.
    fn z_by_quadrature(d: f64, s: f64, t: f64) -> f64 {
        const NODES: [(f64, f64); 5] = [
            (0.0, 0.568_888_888_888_888_9),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let panels = 64;
        let h = 1.0 / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = t + (p as f64 + 0.5) * h;
            for (x, w) in NODES {
                let tau = mid + 0.5 * h * x;
                total += 0.5 * h * w * (-d * tau - s * (tau - t)).exp();
            }
        }
        total
    }

    #[test]
    fn z_factor_against_quadrature() {
        let z = z_factor(0.49, 0.10, 2.0).unwrap();
        let q = z_by_quadrature(0.49, 0.10, 2.0);
        assert!((z - q).abs() < 1e-12);
        // Frozen from the quadrature oracle.
        assert!((z - 0.283_501_553_380_303_5).abs() < 1e-12, "{z}");
    }

    #[test]
    fn z_factor_limits_and_ratio() {
        let z = z_factor(1e-12, 1e-12, 0.0).unwrap();
        assert!((z - 1.0).abs() < 1e-11);
        for t in 0..19 {
            let r = z_factor(0.3, 0.1, f64::from(t + 1)).unwrap() / z_factor(0.3, 0.1, f64::from(t)).unwrap();
            assert!((r - (-0.3f64).exp()).abs() < 1e-14);
        }
        assert!(z_factor(0.0, 0.1, 1.0).is_err());
        assert!(z_factor(0.1, -0.1, 1.0).is_err());
    }

    #[test]
    fn india_threshold_at_three() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let th = threshold(&india, 0.49, &cfg, 3).unwrap();
        let want = (54.81 / z_by_quadrature(0.49, 0.10, 3.0)).ln();
        assert!((th - want).abs() < 1e-10);
        assert!((th - 5.754).abs() < 5e-4, "{th}");
    }

    #[test]
    fn india_thresholds_strictly_increase() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        for d in [0.05, 0.2, 0.49, 0.6] {
            let th: Vec<f64> = (3..20).map(|t| threshold(&india, d, &cfg, t).unwrap()).collect();
            assert_eq!(th.len(), 17);
            assert!(th.windows(2).all(|w| w[1] > w[0]), "d = {d}");
        }
    }

    #[test]
    fn threshold_is_zero_when_fee_equals_z() {
        let cfg = ModelConfig::default();
        let z5 = z_factor(0.3, 0.1, 5.0).unwrap();
        let s = FeeSchedule::new(
            "unit",
            "USD",
            vec![FeeEntry {
                age_from: 5,
                age_to: 5,
                annual_cost: z5,
            }],
            20,
        )
        .unwrap();
        assert!(threshold(&s, 0.3, &cfg, 5).unwrap().abs() < 1e-15);
        assert!(matches!(threshold(&s, 0.3, &cfg, 4), Err(Error::Config(_))));
        assert!(matches!(threshold(&s, 0.3, &cfg, 20), Err(Error::Domain(_))));
    }

    #[test]
    fn linear_index_published_coefficients() {
        let beta = ModelParams::published_india().beta;
        let x = CovariateVector {
            family_size: 1.0,
            inventor_size: 1.0,
            grant_lag: 1.0,
            tech_scope: 1.0,
            tech_field: TechField::Electrical,
            ownership: Ownership::Domestic,
        };
        assert!((linear_index(&beta, &x) - 2.34).abs() < 1e-12);
        let others = CovariateVector {
            tech_field: TechField::Others,
            ..x
        };
        let chem = CovariateVector {
            tech_field: TechField::Chemical,
            ..x
        };
        assert!((linear_index(&beta, &chem) - linear_index(&beta, &others) + 2.04).abs() < 1e-12);
        assert_eq!(linear_index(&Beta::default(), &x), 0.0);
    }

    #[test]
    fn depreciation() {
        assert_eq!(return_at_age(1.0, 0.0, 7.0), 1.0);
        assert_eq!(return_at_age(0.0, 0.49, 3.0), 0.0);
        assert!((return_at_age(100.0, 0.49, 1.0) - 61.262_639_418_441_61).abs() < 1e-9);
    }

    #[test]
    fn param_array_round_trip() {
        let p = ModelParams::published_india();
        assert_eq!(ModelParams::from_array(&p.to_array()), p);
    }
}
