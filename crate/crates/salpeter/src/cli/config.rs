//! Flat key=value scenario configuration with dotted section names, e.g.
//!
//! ```text
//! scenario=free_massless_lorentzian
//! grid.n=4096
//! grid.l=400
//! grid.x0=-200
//! times=0,1,2,3
//! outputs=rho,j,norm
//! output.path=lorentzian.csv
//! ```

use crate::error::{Result, SalpeterError};
use crate::hamiltonian::PhysicalConstants;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    FreeMasslessLorentzian,
    FreeMasslessMovers,
    FreeMassive,
    LinearPotential,
    PlaneWave,
    Massless3d,
    Custom,
}

impl Scenario {
    fn parse(s: &str) -> Option<Scenario> {
        Some(match s {
            "free_massless_lorentzian" => Scenario::FreeMasslessLorentzian,
            "free_massless_movers" => Scenario::FreeMasslessMovers,
            "free_massive" => Scenario::FreeMassive,
            "linear_potential" => Scenario::LinearPotential,
            "plane_wave" => Scenario::PlaneWave,
            "massless_3d" => Scenario::Massless3d,
            "custom" => Scenario::Custom,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::FreeMasslessLorentzian => "free_massless_lorentzian",
            Scenario::FreeMasslessMovers => "free_massless_movers",
            Scenario::FreeMassive => "free_massive",
            Scenario::LinearPotential => "linear_potential",
            Scenario::PlaneWave => "plane_wave",
            Scenario::Massless3d => "massless_3d",
            Scenario::Custom => "custom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputKind {
    Rho,
    J,
    MeanX,
    MeanV,
    Norm,
    Continuity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub constants: PhysicalConstants,
    /// packet width
    pub a: f64,
    pub lambda: f64,
    pub mu: f64,
    /// plane-wave momentum / custom carrier momentum
    pub k: f64,
    /// split-step time step for the custom scenario
    pub dt: f64,
    pub grid_n: usize,
    pub grid_l: f64,
    pub grid_x0: f64,
    pub times: Vec<f64>,
    pub outputs: Vec<OutputKind>,
    pub out_path: String,
    pub format: OutputFormat,
}

fn config_err(location: &str, message: impl Into<String>) -> SalpeterError {
    SalpeterError::Config {
        location: location.to_string(),
        message: message.into(),
    }
}

fn parse_f64(loc: &str, field: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| config_err(loc, format!("field '{field}': unparseable number '{value}'")))
}

/// Parses a config file body. `origin` labels error locations (file name).
pub fn parse_config(text: &str, origin: &str) -> Result<ScenarioConfig> {
    let mut scenario = None;
    let mut cfg = ScenarioConfig {
        scenario: Scenario::FreeMasslessLorentzian,
        constants: PhysicalConstants::natural(0.0),
        a: 1.0,
        lambda: 1.0,
        mu: 1.0,
        k: 1.0,
        dt: 1e-3,
        grid_n: 4096,
        grid_l: 400.0,
        grid_x0: f64::NAN,
        times: vec![0.0, 1.0, 2.0, 3.0],
        outputs: vec![OutputKind::Rho],
        out_path: String::new(),
        format: OutputFormat::Csv,
    };
    let mut mass_set = false;

    for (lineno, raw) in text.lines().enumerate() {
        let loc = format!("{origin}:{}", lineno + 1);
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(&loc, format!("expected key=value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "scenario" => {
                scenario = Some(Scenario::parse(value).ok_or_else(|| {
                    config_err(&loc, format!("field 'scenario': unknown scenario '{value}'"))
                })?);
            }
            "constants.hbar" => cfg.constants.hbar = parse_f64(&loc, key, value)?,
            "constants.c" => cfg.constants.c = parse_f64(&loc, key, value)?,
            "constants.m" => {
                cfg.constants.m = parse_f64(&loc, key, value)?;
                mass_set = true;
            }
            "params.a" => cfg.a = parse_f64(&loc, key, value)?,
            "params.lambda" => cfg.lambda = parse_f64(&loc, key, value)?,
            "params.mu" => cfg.mu = parse_f64(&loc, key, value)?,
            "params.k" => cfg.k = parse_f64(&loc, key, value)?,
            "params.dt" => cfg.dt = parse_f64(&loc, key, value)?,
            "grid.n" => {
                cfg.grid_n = value.parse().map_err(|_| {
                    config_err(&loc, format!("field 'grid.n': unparseable integer '{value}'"))
                })?;
            }
            "grid.l" => cfg.grid_l = parse_f64(&loc, key, value)?,
            "grid.x0" => cfg.grid_x0 = parse_f64(&loc, key, value)?,
            "times" => {
                cfg.times = value
                    .split(',')
                    .map(|t| parse_f64(&loc, "times", t.trim()))
                    .collect::<Result<_>>()?;
            }
            "outputs" => {
                cfg.outputs = value
                    .split(',')
                    .map(|o| match o.trim() {
                        "rho" => Ok(OutputKind::Rho),
                        "j" => Ok(OutputKind::J),
                        "mean_x" => Ok(OutputKind::MeanX),
                        "mean_v" => Ok(OutputKind::MeanV),
                        "norm" => Ok(OutputKind::Norm),
                        "continuity" => Ok(OutputKind::Continuity),
                        other => Err(config_err(
                            &loc,
                            format!("field 'outputs': unknown output '{other}'"),
                        )),
                    })
                    .collect::<Result<_>>()?;
            }
            "output.path" => cfg.out_path = value.to_string(),
            "output.format" => {
                cfg.format = match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => {
                        return Err(config_err(
                            &loc,
                            format!("field 'output.format': expected csv or json, got '{other}'"),
                        ))
                    }
                };
            }
            other => return Err(config_err(&loc, format!("unknown field '{other}'"))),
        }
    }

    cfg.scenario =
        scenario.ok_or_else(|| config_err(origin, "missing required field 'scenario'"))?;
    if cfg.scenario == Scenario::FreeMassive && !mass_set {
        cfg.constants.m = 0.5;
    }
    if cfg.grid_x0.is_nan() {
        cfg.grid_x0 = -cfg.grid_l / 2.0;
    }
    if cfg.out_path.is_empty() {
        cfg.out_path = format!("{}.csv", cfg.scenario.name());
    }
    validate_config(&cfg, origin)?;
    Ok(cfg)
}

fn validate_config(cfg: &ScenarioConfig, origin: &str) -> Result<()> {
    cfg.constants
        .validate()
        .map_err(|e| config_err(origin, format!("constants: {e}")))?;
    if !(cfg.a > 0.0) {
        return Err(config_err(origin, format!("field 'params.a' must be positive, got {}", cfg.a)));
    }
    if !(cfg.lambda > 0.0) {
        return Err(config_err(
            origin,
            format!("field 'params.lambda' must be positive, got {}", cfg.lambda),
        ));
    }
    if !(cfg.mu > 0.0) {
        return Err(config_err(origin, format!("field 'params.mu' must be positive, got {}", cfg.mu)));
    }
    if !(cfg.dt > 0.0) {
        return Err(config_err(origin, format!("field 'params.dt' must be positive, got {}", cfg.dt)));
    }
    if cfg.grid_n < 2 || !cfg.grid_n.is_power_of_two() {
        return Err(config_err(
            origin,
            format!("field 'grid.n' must be a power of two >= 2, got {}", cfg.grid_n),
        ));
    }
    if !(cfg.grid_l > 0.0) {
        return Err(config_err(origin, format!("field 'grid.l' must be positive, got {}", cfg.grid_l)));
    }
    if cfg.times.is_empty() {
        return Err(config_err(origin, "field 'times' must list at least one time"));
    }
    if cfg.outputs.is_empty() {
        return Err(config_err(origin, "field 'outputs' must list at least one output"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "\
scenario=linear_potential
params.lambda=2
params.mu=1
grid.n=8192
grid.l=800
times=0,0.5,1
outputs=rho,mean_x
output.format=json
";
        let cfg = parse_config(text, "test.cfg").unwrap();
        assert_eq!(cfg.scenario, Scenario::LinearPotential);
        assert_eq!(cfg.lambda, 2.0);
        assert_eq!(cfg.grid_n, 8192);
        assert_eq!(cfg.grid_x0, -400.0);
        assert_eq!(cfg.times, vec![0.0, 0.5, 1.0]);
        assert_eq!(cfg.outputs, vec![OutputKind::Rho, OutputKind::MeanX]);
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.out_path, "linear_potential.csv");
    }

    #[test]
    fn rejects_negative_lambda_naming_the_field() {
        let text = "scenario=linear_potential\nparams.lambda=-1\n";
        let err = parse_config(text, "bad.cfg").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("params.lambda"), "message was: {msg}");
    }

    #[test]
    fn rejects_unknown_key_with_line_number() {
        let text = "scenario=plane_wave\n\ngrid.resolution=10\n";
        let err = parse_config(text, "bad.cfg").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.cfg:3") && msg.contains("grid.resolution"), "message was: {msg}");
    }

    #[test]
    fn massive_scenario_defaults_mass() {
        let cfg = parse_config("scenario=free_massive\n", "t").unwrap();
        assert_eq!(cfg.constants.m, 0.5);
        let cfg = parse_config("scenario=free_massive\nconstants.m=1.5\n", "t").unwrap();
        assert_eq!(cfg.constants.m, 1.5);
    }
}
