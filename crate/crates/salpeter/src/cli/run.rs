//! Scenario execution: builds the requested field and scalar tables and
//! writes them in the configured format.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::cli::config::{OutputFormat, OutputKind, Scenario, ScenarioConfig};
use crate::cli::output::{write_csv, write_json, Table};
use crate::error::{Result, SalpeterError};
use crate::evolve::{evolve_free, evolve_linear_potential, evolve_splitstep};
use crate::exact;
use crate::grid::{forward_transform, inverse_transform, make_grid, RadialGrid, WaveFunction};
use crate::hamiltonian::PotentialSpec;
use crate::observables::{
    continuity_residual, continuity_residual_states, current_spectral_1d, density, mean_position,
    mean_velocity, split_movers,
};

const CONTINUITY_DT: f64 = 1e-4;
const BOUNDARY_WARNING_LEVEL: f64 = 1e-6;

pub struct RunOutcome {
    pub tables: Vec<(PathBuf, Table)>,
    pub warnings: Vec<String>,
}

struct Builder {
    cfg: ScenarioConfig,
    field_cols: Vec<(String, Vec<f64>)>,
    scalar_cols: Vec<(String, Vec<f64>)>,
    warnings: Vec<String>,
}

impl Builder {
    fn new(cfg: &ScenarioConfig) -> Builder {
        Builder {
            cfg: cfg.clone(),
            field_cols: Vec::new(),
            scalar_cols: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn wants(&self, kind: OutputKind) -> bool {
        self.cfg.outputs.contains(&kind)
    }

    fn field(&mut self, name: &str, values: impl IntoIterator<Item = f64>) {
        match self.field_cols.iter_mut().find(|(n, _)| n == name) {
            Some((_, col)) => col.extend(values),
            None => self.field_cols.push((name.to_string(), values.into_iter().collect())),
        }
    }

    fn scalar(&mut self, name: &str, value: f64) {
        match self.scalar_cols.iter_mut().find(|(n, _)| n == name) {
            Some((_, col)) => col.push(value),
            None => self.scalar_cols.push((name.to_string(), vec![value])),
        }
    }

    fn check_boundary(&mut self, psi: &WaveFunction, t: f64) {
        let level = psi.boundary_contamination();
        if level > BOUNDARY_WARNING_LEVEL {
            self.warnings.push(format!(
                "boundary contamination {level:.3e} at t={t} exceeds {BOUNDARY_WARNING_LEVEL:.0e}; \
                 enlarge the box"
            ));
        }
    }

    fn meta(&self) -> Vec<(String, String)> {
        let cfg = &self.cfg;
        vec![
            ("scenario".to_string(), cfg.scenario.name().to_string()),
            ("hbar".to_string(), format!("{}", cfg.constants.hbar)),
            ("c".to_string(), format!("{}", cfg.constants.c)),
            ("m".to_string(), format!("{}", cfg.constants.m)),
            ("a".to_string(), format!("{}", cfg.a)),
            ("lambda".to_string(), format!("{}", cfg.lambda)),
            ("mu".to_string(), format!("{}", cfg.mu)),
            ("k".to_string(), format!("{}", cfg.k)),
            ("grid_n".to_string(), format!("{}", cfg.grid_n)),
            ("grid_l".to_string(), format!("{}", cfg.grid_l)),
            ("grid_x0".to_string(), format!("{}", cfg.grid_x0)),
        ]
    }

    fn finish(self) -> RunOutcome {
        let mut tables = Vec::new();
        let base = PathBuf::from(&self.cfg.out_path);
        if !self.field_cols.is_empty() {
            tables.push((
                base.clone(),
                Table {
                    meta: self.meta(),
                    columns: self.field_cols.clone(),
                },
            ));
        }
        if !self.scalar_cols.is_empty() {
            let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
            let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
            let scalar_path = base.with_file_name(format!("{stem}_scalars.{ext}"));
            tables.push((
                scalar_path,
                Table {
                    meta: self.meta(),
                    columns: self.scalar_cols.clone(),
                },
            ));
        }
        RunOutcome {
            tables,
            warnings: self.warnings,
        }
    }
}

/// Builds all output tables for a scenario without touching the filesystem.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutcome> {
    let mut b = Builder::new(cfg);
    match cfg.scenario {
        Scenario::FreeMasslessLorentzian => free_massless_lorentzian(&mut b)?,
        Scenario::FreeMasslessMovers => free_massless_movers(&mut b)?,
        Scenario::FreeMassive => free_massive(&mut b)?,
        Scenario::LinearPotential => linear_potential(&mut b)?,
        Scenario::PlaneWave => plane_wave(&mut b)?,
        Scenario::Massless3d => massless_3d(&mut b)?,
        Scenario::Custom => custom(&mut b)?,
    }
    Ok(b.finish())
}

/// Runs a scenario and writes its outputs; returns warnings.
pub fn execute(cfg: &ScenarioConfig, base_dir: &Path) -> Result<RunOutcome> {
    let mut outcome = run_scenario(cfg)?;
    for (path, table) in &mut outcome.tables {
        if !path.is_absolute() {
            *path = base_dir.join(&path);
        }
        match cfg.format {
            OutputFormat::Csv => write_csv(table, path)?,
            OutputFormat::Json => write_json(table, path)?,
        }
    }
    Ok(outcome)
}

fn free_massless_lorentzian(b: &mut Builder) -> Result<()> {
    let cfg = b.cfg.clone();
    let g = make_grid(cfg.grid_n, cfg.grid_l, cfg.grid_x0)?;
    let k = cfg.constants;
    let a = cfg.a;
    let psi0 = WaveFunction::from_fn(&g, 0.0, |x| {
        exact::lorentzian_massless_psi(x, 0.0, a).expect("validated width")
    });
    let phi0 = forward_transform(&psi0);
    let xs = g.positions();
    for &t in &cfg.times {
        let phi_t = evolve_free(&phi0, t, &k);
        let psi_t = inverse_transform(&phi_t);
        b.check_boundary(&psi_t, t);
        if b.wants(OutputKind::Rho) || b.wants(OutputKind::J) || b.wants(OutputKind::Continuity) {
            b.field("x", xs.iter().copied());
            b.field("t", xs.iter().map(|_| t));
        }
        if b.wants(OutputKind::Rho) {
            b.field("rho_num", density(&psi_t));
            let exact_col: Result<Vec<f64>> = xs
                .iter()
                .map(|&x| exact::lorentzian_massless_density(x, t, a))
                .collect();
            b.field("rho_exact", exact_col?);
        }
        if b.wants(OutputKind::J) {
            b.field("j_num", current_spectral_1d(&phi_t, &k).values);
            let exact_col: Result<Vec<f64>> = xs
                .iter()
                .map(|&x| exact::lorentzian_massless_current(x, t, a))
                .collect();
            b.field("j_exact", exact_col?);
        }
        if b.wants(OutputKind::Continuity) {
            b.field("continuity", continuity_residual(&phi_t, &k, CONTINUITY_DT));
        }
        if b.wants(OutputKind::Norm) || b.wants(OutputKind::MeanX) || b.wants(OutputKind::MeanV) {
            b.scalar("t", t);
        }
        if b.wants(OutputKind::Norm) {
            b.scalar("norm", psi_t.norm());
        }
        if b.wants(OutputKind::MeanX) {
            b.scalar("mean_x", mean_position(&psi_t));
        }
        if b.wants(OutputKind::MeanV) {
            b.scalar("mean_v", mean_velocity(&phi_t, &k));
        }
    }
    Ok(())
}

fn free_massless_movers(b: &mut Builder) -> Result<()> {
    let cfg = b.cfg.clone();
    let g = make_grid(cfg.grid_n, cfg.grid_l, cfg.grid_x0)?;
    let k = cfg.constants;
    let a = cfg.a;
    let psi0 = WaveFunction::from_fn(&g, 0.0, |x| {
        exact::lorentzian_massless_psi(x, 0.0, a).expect("validated width")
    });
    let (plus0, minus0) = split_movers(&forward_transform(&psi0));
    let xs = g.positions();
    for &t in &cfg.times {
        b.field("x", xs.iter().copied());
        b.field("t", xs.iter().map(|_| t));
        for (label, part, sign) in [
            ("plus", &plus0, exact::MoverSign::Plus),
            ("minus", &minus0, exact::MoverSign::Minus),
        ] {
            let phi_t = evolve_free(part, t, &k);
            let psi_t = inverse_transform(&phi_t);
            b.check_boundary(&psi_t, t);
            if b.wants(OutputKind::Rho) {
                b.field(&format!("rho_{label}_num"), density(&psi_t));
                // each half carries probability 1/2 of the full packet
                let exact_col: Result<Vec<f64>> = xs
                    .iter()
                    .map(|&x| exact::mover_density(x, t, a, sign).map(|d| 0.5 * d))
                    .collect();
                b.field(&format!("rho_{label}_exact"), exact_col?);
            }
            if b.wants(OutputKind::J) {
                b.field(&format!("j_{label}_num"), current_spectral_1d(&phi_t, &k).values);
                let exact_col: Result<Vec<f64>> = xs
                    .iter()
                    .map(|&x| exact::mover_current(x, t, a, sign).map(|j| 0.5 * j))
                    .collect();
                b.field(&format!("j_{label}_exact"), exact_col?);
            }
        }
    }
    Ok(())
}

fn free_massive(b: &mut Builder) -> Result<()> {
    let cfg = b.cfg.clone();
    let g = make_grid(cfg.grid_n, cfg.grid_l, cfg.grid_x0)?;
    let k = cfg.constants;
    let a = cfg.a;
    let phi0 = crate::grid::MomentumWaveFunction::from_fn(&g, 0.0, |p| {
        exact::massive_packet_momentum(p, 0.0, a, &k).expect("validated parameters")
    });
    let xs = g.positions();
    for &t in &cfg.times {
        let phi_t = evolve_free(&phi0, t, &k);
        let psi_t = inverse_transform(&phi_t);
        b.check_boundary(&psi_t, t);
        if b.wants(OutputKind::Rho) || b.wants(OutputKind::J) || b.wants(OutputKind::Continuity) {
            b.field("x", xs.iter().copied());
            b.field("t", xs.iter().map(|_| t));
        }
        if b.wants(OutputKind::Rho) {
            b.field("rho_num", density(&psi_t));
            let exact_col: Result<Vec<f64>> = xs
                .iter()
                .map(|&x| exact::massive_packet_psi(x, t, a, &k).map(|v| v.norm_sqr()))
                .collect();
            b.field("rho_exact", exact_col?);
        }
        if b.wants(OutputKind::J) {
            b.field("j_num", current_spectral_1d(&phi_t, &k).values);
            b.field("j_exact", exact::massive_packet_current_profile(&xs, t, a, &k)?);
        }
        if b.wants(OutputKind::Continuity) {
            b.field("continuity", continuity_residual(&phi_t, &k, CONTINUITY_DT));
        }
        if b.wants(OutputKind::Norm) || b.wants(OutputKind::MeanX) || b.wants(OutputKind::MeanV) {
            b.scalar("t", t);
        }
        if b.wants(OutputKind::Norm) {
            b.scalar("norm", psi_t.norm());
        }
        if b.wants(OutputKind::MeanX) {
            b.scalar("mean_x", mean_position(&psi_t));
        }
        if b.wants(OutputKind::MeanV) {
            b.scalar("mean_v", mean_velocity(&phi_t, &k));
        }
    }
    Ok(())
}

fn linear_potential(b: &mut Builder) -> Result<()> {
    let cfg = b.cfg.clone();
    let g = make_grid(cfg.grid_n, cfg.grid_l, cfg.grid_x0)?;
    let k = cfg.constants;
    if k.m != 0.0 {
        return Err(SalpeterError::InvalidArgument(
            "the linear-potential scenario is massless; set constants.m=0".into(),
        ));
    }
    let (lambda, mu) = (cfg.lambda, cfg.mu);
    let chi = move |q: f64| {
        Complex64::new(
            (lambda / (mu * std::f64::consts::PI)).powf(0.25)
                * (-lambda * q * q / (2.0 * mu)).exp(),
            0.0,
        )
    };
    let xs = g.positions();
    for &t in &cfg.times {
        let phi_t = evolve_linear_potential(&chi, &g, t, mu, &k)?;
        let psi_t = inverse_transform(&phi_t);
        b.check_boundary(&psi_t, t);
        if b.wants(OutputKind::Rho) || b.wants(OutputKind::J) || b.wants(OutputKind::Continuity) {
            b.field("x", xs.iter().copied());
            b.field("t", xs.iter().map(|_| t));
        }
        if b.wants(OutputKind::Rho) {
            b.field("rho_num", density(&psi_t));
            let exact_col: Result<Vec<f64>> = xs
                .iter()
                .map(|&x| exact::linear_potential_psi(x, t, lambda, mu).map(|v| v.norm_sqr()))
                .collect();
            b.field("rho_exact", exact_col?);
        }
        if b.wants(OutputKind::J) {
            b.field("j_num", current_spectral_1d(&phi_t, &k).values);
        }
        if b.wants(OutputKind::Continuity) {
            let pm = evolve_linear_potential(&chi, &g, t - CONTINUITY_DT, mu, &k)?;
            let pp = evolve_linear_potential(&chi, &g, t + CONTINUITY_DT, mu, &k)?;
            b.field(
                "continuity",
                continuity_residual_states(&pm, &phi_t, &pp, &k, CONTINUITY_DT),
            );
        }
        if b.wants(OutputKind::Norm) || b.wants(OutputKind::MeanX) || b.wants(OutputKind::MeanV) {
            b.scalar("t", t);
        }
        if b.wants(OutputKind::Norm) {
            b.scalar("norm", psi_t.norm());
        }
        if b.wants(OutputKind::MeanX) {
            b.scalar("mean_x", mean_position(&psi_t));
            b.scalar("mean_x_exact", exact::linear_potential_mean_x(t, lambda, mu)?);
        }
        if b.wants(OutputKind::MeanV) {
            b.scalar("mean_v", mean_velocity(&phi_t, &k));
            b.scalar("mean_v_exact", exact::linear_potential_mean_v(t, lambda, mu)?);
        }
    }
    Ok(())
}

fn plane_wave(b: &mut Builder) -> Result<()> {
    let cfg = b.cfg.clone();
    let g = make_grid(cfg.grid_n, cfg.grid_l, cfg.grid_x0)?;
    let k = cfg.constants;
    // snap the requested momentum onto the grid ladder
    let p = g.dp() * (cfg.k / g.dp()).round();
    let amp = Complex64::new(1.0, 0.0);
    let psi0 = WaveFunction::from_fn(&g, 0.0, |x| {
        exact::plane_wave(x, 0.0, p, amp, &k).expect("validated constants")
    });
    let phi0 = forward_transform(&psi0);
    let xs = g.positions();
    let rho_exact = amp.norm_sqr();
    let j_exact = exact::plane_wave_current(p, amp, &k)?;
    for &t in &cfg.times {
        let phi_t = evolve_free(&phi0, t, &k);
        let psi_t = inverse_transform(&phi_t);
        b.field("x", xs.iter().copied());
        b.field("t", xs.iter().map(|_| t));
        if b.wants(OutputKind::Rho) {
            b.field("rho_num", density(&psi_t));
            b.field("rho_exact", xs.iter().map(|_| rho_exact));
        }
        if b.wants(OutputKind::J) {
            b.field("j_num", current_spectral_1d(&phi_t, &k).values);
            b.field("j_exact", xs.iter().map(|_| j_exact));
        }
        if b.wants(OutputKind::Continuity) {
            b.field("continuity", continuity_residual(&phi_t, &k, CONTINUITY_DT));
        }
    }
    Ok(())
}

fn massless_3d(b: &mut Builder) -> Result<()> {
    let cfg = b.cfg.clone();
    let rg = RadialGrid::new(cfg.grid_n, cfg.grid_l / 2.0)?;
    let a = cfg.a;
    let rs: Vec<f64> = rg.nodes().to_vec();
    for &t in &cfg.times {
        if b.wants(OutputKind::Rho) || b.wants(OutputKind::J) {
            b.field("r", rs.iter().copied());
            b.field("t", rs.iter().map(|_| t));
        }
        if b.wants(OutputKind::Rho) {
            let col: Result<Vec<f64>> = rs
                .iter()
                .map(|&r| exact::massless_3d_density(r, t, a))
                .collect();
            b.field("rho_exact", col?);
        }
        if b.wants(OutputKind::J) {
            let col: Result<Vec<f64>> = rs
                .iter()
                .map(|&r| exact::massless_3d_current(r, t, a))
                .collect();
            b.field("j_exact", col?);
        }
        if b.wants(OutputKind::Norm) {
            let vals: Result<Vec<f64>> = rs
                .iter()
                .map(|&r| exact::massless_3d_density(r, t, a))
                .collect();
            b.scalar("t", t);
            b.scalar("norm", rg.integrate(&vals?).sqrt());
        }
    }
    Ok(())
}

fn custom(b: &mut Builder) -> Result<()> {
    let cfg = b.cfg.clone();
    let g = make_grid(cfg.grid_n, cfg.grid_l, cfg.grid_x0)?;
    let k = cfg.constants;
    let (a, p0, dt) = (cfg.a, cfg.k, cfg.dt);
    let psi0 = WaveFunction::from_fn(&g, 0.0, |x| {
        Complex64::from_polar(
            (1.0 / (std::f64::consts::PI * a * a)).powf(0.25) * (-x * x / (2.0 * a * a)).exp(),
            p0 * x / k.hbar,
        )
    });
    let potential = PotentialSpec::Linear(cfg.mu);
    let xs = g.positions();
    let mut psi = psi0;
    let mut steps_done = 0usize;
    for &t in &cfg.times {
        let steps_total = (t / dt).round() as i64;
        if steps_total < 0 || (t - steps_total as f64 * dt).abs() > 1e-9 {
            return Err(SalpeterError::InvalidArgument(format!(
                "time {t} is not a nonnegative multiple of params.dt={dt}"
            )));
        }
        let remaining = (steps_total as usize).checked_sub(steps_done).ok_or_else(|| {
            SalpeterError::InvalidArgument(
                "custom-scenario times must be nondecreasing".into(),
            )
        })?;
        if remaining > 0 {
            let run = evolve_splitstep(&psi, &potential, dt, remaining, &k)?;
            psi = run.state;
            b.warnings.extend(run.warnings);
            steps_done = steps_total as usize;
        }
        let phi = forward_transform(&psi);
        if b.wants(OutputKind::Rho) || b.wants(OutputKind::J) {
            b.field("x", xs.iter().copied());
            b.field("t", xs.iter().map(|_| t));
        }
        if b.wants(OutputKind::Rho) {
            b.field("rho_num", density(&psi));
        }
        if b.wants(OutputKind::J) {
            b.field("j_num", current_spectral_1d(&phi, &k).values);
        }
        if b.wants(OutputKind::Norm) || b.wants(OutputKind::MeanX) || b.wants(OutputKind::MeanV) {
            b.scalar("t", t);
        }
        if b.wants(OutputKind::Norm) {
            b.scalar("norm", psi.norm());
        }
        if b.wants(OutputKind::MeanX) {
            b.scalar("mean_x", mean_position(&psi));
        }
        if b.wants(OutputKind::MeanV) {
            b.scalar("mean_v", mean_velocity(&phi, &k));
        }
    }
    Ok(())
}
