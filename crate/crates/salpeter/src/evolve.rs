//! Time evolution of momentum-space states: exact phase evolution for free
//! particles, exact characteristics evolution for the massless particle in a
//! linear potential, and a Strang split-step propagator for arbitrary
//! sampled real potentials.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, SalpeterError};
use crate::grid::{forward_transform, inverse_transform, Grid1D, MomentumWaveFunction, WaveFunction};
use crate::hamiltonian::{symbol, PhysicalConstants, PotentialSpec};
use crate::specfun::sign;

#[derive(Clone, Debug)]
pub enum EvolutionPlan {
    Free,
    /// massless particle in V = mu x, evolved along characteristics
    LinearPotential { mu: f64 },
    SplitStep {
        potential: PotentialSpec,
        dt: f64,
        steps: usize,
    },
}

/// Free evolution by duration t: multiply each ladder mode by
/// exp(-i E(p) t / hbar). Norm is preserved to rounding.
pub fn evolve_free(
    phi0: &MomentumWaveFunction,
    t: f64,
    k: &PhysicalConstants,
) -> MomentumWaveFunction {
    let g = &phi0.grid;
    let samples = phi0
        .samples
        .iter()
        .zip(g.momenta())
        .map(|(&v, &p)| v * Complex64::from_polar(1.0, -symbol(p, k) * t / k.hbar))
        .collect();
    MomentumWaveFunction {
        grid: g.clone(),
        samples,
        time_tag: phi0.time_tag + t,
    }
}

/// Exact solution for the massless particle in the linear potential mu x:
/// phi(p, t) = exp(i c eps(p) p^2 / (2 mu hbar)) chi(p + mu t), sampled on
/// the grid ladder. chi is the momentum profile at t = 0 with the phase
/// factor removed.
pub fn evolve_linear_potential<F: Fn(f64) -> Complex64>(
    chi: F,
    grid: &Arc<Grid1D>,
    t: f64,
    mu: f64,
    k: &PhysicalConstants,
) -> Result<MomentumWaveFunction> {
    if !(mu > 0.0) {
        return Err(SalpeterError::InvalidArgument(format!(
            "linear potential slope must be positive, got {mu}"
        )));
    }
    if k.m != 0.0 {
        return Err(SalpeterError::InvalidArgument(
            "characteristics evolution applies to the massless equation only".into(),
        ));
    }
    let samples: Vec<Complex64> = grid
        .momenta()
        .iter()
        .map(|&p| {
            let phase = k.c * sign(p) * p * p / (2.0 * mu * k.hbar);
            Complex64::from_polar(1.0, phase) * chi(p + mu * t)
        })
        .collect();
    // the profile translates left in p as t grows; flag it leaving the ladder
    let peak = samples.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let n = grid.len();
    let edge = samples[n / 2].norm().max(samples[n / 2 + 1].norm());
    if peak > 0.0 && edge > 1e-8 * peak {
        return Err(SalpeterError::LadderAliasing {
            shift: mu * t,
            p_max: grid.p_max(),
        });
    }
    Ok(MomentumWaveFunction {
        grid: grid.clone(),
        samples,
        time_tag: t,
    })
}

pub struct SplitStepRun {
    pub state: WaveFunction,
    pub warnings: Vec<String>,
}

/// Strang splitting exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2) per step,
/// kinetic factor applied on the momentum ladder.
pub fn evolve_splitstep(
    psi0: &WaveFunction,
    potential: &PotentialSpec,
    dt: f64,
    steps: usize,
    k: &PhysicalConstants,
) -> Result<SplitStepRun> {
    k.validate()?;
    if !(dt > 0.0) || steps == 0 {
        return Err(SalpeterError::InvalidArgument(format!(
            "split-step needs dt > 0 and steps >= 1, got dt={dt}, steps={steps}"
        )));
    }
    let g = &psi0.grid;
    let v = potential.sample(&g.positions())?;
    let vmax = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if dt * vmax / k.hbar >= 0.5 {
        return Err(SalpeterError::InvalidArgument(format!(
            "time step too large: dt max|V|/hbar = {:.3} >= 0.5",
            dt * vmax / k.hbar
        )));
    }
    let half_v: Vec<Complex64> = v
        .iter()
        .map(|&vx| Complex64::from_polar(1.0, -vx * dt / (2.0 * k.hbar)))
        .collect();
    let kin: Vec<Complex64> = g
        .momenta()
        .iter()
        .map(|&p| Complex64::from_polar(1.0, -symbol(p, k) * dt / k.hbar))
        .collect();

    let mut psi = psi0.clone();
    for _ in 0..steps {
        for (s, h) in psi.samples.iter_mut().zip(&half_v) {
            *s *= h;
        }
        let mut phi = forward_transform(&psi);
        for (s, h) in phi.samples.iter_mut().zip(&kin) {
            *s *= h;
        }
        psi = inverse_transform(&phi);
        for (s, h) in psi.samples.iter_mut().zip(&half_v) {
            *s *= h;
        }
    }
    psi.time_tag = psi0.time_tag + dt * steps as f64;

    let mut warnings = Vec::new();
    let contamination = psi.boundary_contamination();
    if contamination > 1e-6 {
        warnings.push(format!(
            "packet reached the box boundary: edge/peak magnitude ratio {contamination:.3e}"
        ));
    }
    Ok(SplitStepRun {
        state: psi,
        warnings,
    })
}
