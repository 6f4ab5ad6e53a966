//! Versioned TOML economy configuration. Which fields are required depends
//! on the economy `kind`; parse errors name the offending field.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use infomenu::{
    ChainParams, ContinuumEconomy, Experiment, Payoff, RegionGrid, TwoTypeEconomy, TwoTypePrior,
    TypeDistribution,
};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub schema_version: Option<u32>,
    pub kind: Option<String>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub theta_max: Option<f64>,
    pub rho: Option<f64>,
    pub prior: Option<RawPrior>,
    pub payoff: Option<RawPayoff>,
    pub distribution: Option<RawDistribution>,
    pub grid: Option<RawGrid>,
    pub region_grid: Option<RawRegionGrid>,
    pub simulate: Option<RawSimulate>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPrior {
    pub mu: Option<f64>,
    pub p: Option<f64>,
    pub lambda_b: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPayoff {
    pub family: Option<String>,
    pub u_l: Option<f64>,
    pub u_h: Option<f64>,
    pub intercept: Option<f64>,
    pub slope: Option<f64>,
    pub scale: Option<f64>,
    pub exponent: Option<f64>,
    pub rate: Option<f64>,
    pub level: Option<f64>,
    pub knots: Option<Vec<f64>>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDistribution {
    pub family: Option<String>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub theta_max: Option<f64>,
    pub exponent: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub size: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRegionGrid {
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub u_step: Option<f64>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub p_step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSimulate {
    pub pi_g: Option<f64>,
    pub pi_b: Option<f64>,
    pub u: Option<f64>,
    pub delta: Option<f64>,
    pub n_draws: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    TwoType,
    Continuum,
}

pub fn require<T>(value: Option<T>, field: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Parse(format!("missing field `{field}`")))
}

/// Map a model-construction failure to exit code 2; the message already
/// names the offending parameter.
fn parse_err(err: infomenu::Error) -> CliError {
    CliError::Parse(err.to_string())
}

pub fn load(path: &Path) -> Result<RawConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read `{}`: {e}", path.display())))?;
    let raw: RawConfig = toml::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    let version = require(raw.schema_version, "schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported schema_version {version}; this build reads version {SCHEMA_VERSION}"
        )));
    }
    Ok(raw)
}

pub fn kind(raw: &RawConfig) -> Result<Kind, CliError> {
    match require(raw.kind.as_deref(), "kind")? {
        "two_type" => Ok(Kind::TwoType),
        "continuum" => Ok(Kind::Continuum),
        other => Err(CliError::Parse(format!(
            "field `kind` must be \"two_type\" or \"continuum\", got \"{other}\""
        ))),
    }
}

pub fn two_type_economy(raw: &RawConfig) -> Result<TwoTypeEconomy, CliError> {
    let prior = raw.prior.as_ref().ok_or_else(|| missing("prior"))?;
    let mu = require(prior.mu, "prior.mu")?;
    let p = require(prior.p, "prior.p")?;
    let rho = require(raw.rho, "rho")?;
    let payoff = raw.payoff.as_ref().ok_or_else(|| missing("payoff"))?;
    let u_l = require(payoff.u_l, "payoff.u_l")?;
    let u_h = require(payoff.u_h, "payoff.u_h")?;
    let prior = TwoTypePrior::new(mu, p).map_err(parse_err)?;
    TwoTypeEconomy::new(prior, rho, u_l, u_h).map_err(parse_err)
}

pub fn continuum_economy(raw: &RawConfig) -> Result<ContinuumEconomy, CliError> {
    let prior = raw.prior.as_ref().ok_or_else(|| missing("prior"))?;
    let mu = require(prior.mu, "prior.mu")?;
    let lambda_b = require(prior.lambda_b, "prior.lambda_b")?;
    let theta_max = require(raw.theta_max, "theta_max")?;
    let params = ChainParams::new(mu, lambda_b).map_err(parse_err)?;
    let payoff = payoff_family(raw.payoff.as_ref().ok_or_else(|| missing("payoff"))?)?;
    let dist = distribution(
        raw.distribution
            .as_ref()
            .ok_or_else(|| missing("distribution"))?,
    )?;
    ContinuumEconomy::new(theta_max, params, payoff, dist).map_err(parse_err)
}

fn payoff_family(raw: &RawPayoff) -> Result<Payoff, CliError> {
    match require(raw.family.as_deref(), "payoff.family")? {
        "affine" => Payoff::affine(
            require(raw.intercept, "payoff.intercept")?,
            require(raw.slope, "payoff.slope")?,
        ),
        "power" => Payoff::power(
            require(raw.scale, "payoff.scale")?,
            require(raw.exponent, "payoff.exponent")?,
        ),
        "bounded_exp" => Payoff::bounded_exp(
            require(raw.scale, "payoff.scale")?,
            require(raw.rate, "payoff.rate")?,
        ),
        "constant" => Payoff::constant(require(raw.level, "payoff.level")?),
        "table" => Payoff::table(
            require(raw.knots.clone(), "payoff.knots")?,
            require(raw.values.clone(), "payoff.values")?,
        ),
        other => {
            return Err(CliError::Parse(format!(
                "field `payoff.family` must be one of affine, power, bounded_exp, constant, \
                 table; got \"{other}\""
            )))
        }
    }
    .map_err(parse_err)
}

fn distribution(raw: &RawDistribution) -> Result<TypeDistribution, CliError> {
    match require(raw.family.as_deref(), "distribution.family")? {
        "uniform" => TypeDistribution::uniform(
            require(raw.lower, "distribution.lower")?,
            require(raw.upper, "distribution.upper")?,
        ),
        "power" => TypeDistribution::power(
            require(raw.theta_max, "distribution.theta_max")?,
            require(raw.exponent, "distribution.exponent")?,
        ),
        other => {
            return Err(CliError::Parse(format!(
                "field `distribution.family` must be \"uniform\" or \"power\", got \"{other}\""
            )))
        }
    }
    .map_err(parse_err)
}

pub fn region_grid(raw: &RawConfig) -> Result<RegionGrid, CliError> {
    let grid = raw
        .region_grid
        .as_ref()
        .ok_or_else(|| missing("region_grid"))?;
    Ok(RegionGrid {
        u_min: require(grid.u_min, "region_grid.u_min")?,
        u_max: require(grid.u_max, "region_grid.u_max")?,
        u_step: require(grid.u_step, "region_grid.u_step")?,
        p_min: require(grid.p_min, "region_grid.p_min")?,
        p_max: require(grid.p_max, "region_grid.p_max")?,
        p_step: require(grid.p_step, "region_grid.p_step")?,
    })
}

pub struct SimulateSpec {
    pub experiment: Experiment,
    pub u: f64,
    pub delta: f64,
    pub n_draws: usize,
}

pub fn simulate_spec(raw: &RawConfig) -> Result<SimulateSpec, CliError> {
    let sim = raw.simulate.as_ref().ok_or_else(|| missing("simulate"))?;
    let experiment = Experiment::new(
        require(sim.pi_g, "simulate.pi_g")?,
        require(sim.pi_b, "simulate.pi_b")?,
    )
    .map_err(parse_err)?;
    Ok(SimulateSpec {
        experiment,
        u: require(sim.u, "simulate.u")?,
        delta: sim.delta.unwrap_or(0.0),
        n_draws: sim.n_draws.unwrap_or(100_000),
    })
}

fn missing(field: &str) -> CliError {
    CliError::Parse(format!("missing field `{field}`"))
}
