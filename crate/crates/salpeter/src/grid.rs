//! Uniform 1D grids with matched discrete momentum ladders, the unitary
//! transform pair between position and momentum samples, and a radial
//! quadrature grid for 3D radially symmetric densities.
//!
//! Transform convention is symmetric: a factor (2 pi hbar)^(-1/2) each way,
//! with continuum kernels exp(+-i p x / hbar). The discrete ladder is
//! p_n = 2 pi hbar k_n / L with signed index k_n; the single Nyquist mode is
//! assigned +p_max so |p| is well defined everywhere.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, SalpeterError};

pub struct Grid1D {
    n: usize,
    l: f64,
    x0: f64,
    hbar: f64,
    dx: f64,
    dp: f64,
    /// momentum ladder in DFT storage order
    p: Vec<f64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid1D")
            .field("n", &self.n)
            .field("l", &self.l)
            .field("x0", &self.x0)
            .field("hbar", &self.hbar)
            .finish()
    }
}

pub fn make_grid(n: usize, l: f64, x0: f64) -> Result<Arc<Grid1D>> {
    make_grid_with_hbar(n, l, x0, 1.0)
}

pub fn make_grid_with_hbar(n: usize, l: f64, x0: f64, hbar: f64) -> Result<Arc<Grid1D>> {
    if n < 8 || !n.is_power_of_two() {
        return Err(SalpeterError::InvalidArgument(format!(
            "grid size must be a power of two >= 8, got {n}"
        )));
    }
    if !(l > 0.0) || !l.is_finite() {
        return Err(SalpeterError::InvalidArgument(format!(
            "box length must be positive and finite, got {l}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(SalpeterError::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let dp = 2.0 * std::f64::consts::PI * hbar / l;
    let p = (0..n)
        .map(|i| {
            // signed DFT index, Nyquist mapped to +n/2
            let k = if i <= n / 2 {
                i as f64
            } else {
                i as f64 - n as f64
            };
            dp * k
        })
        .collect();
    let mut planner = FftPlanner::new();
    Ok(Arc::new(Grid1D {
        n,
        l,
        x0,
        hbar,
        dx: l / n as f64,
        dp,
        p,
        fft_fwd: planner.plan_fft_forward(n),
        fft_inv: planner.plan_fft_inverse(n),
    }))
}

impl Grid1D {
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn box_length(&self) -> f64 {
        self.l
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dp(&self) -> f64 {
        self.dp
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }
    /// Momentum ladder in DFT storage order.
    pub fn momenta(&self) -> &[f64] {
        &self.p
    }
    pub fn p_max(&self) -> f64 {
        self.dp * (self.n / 2) as f64
    }
    /// Index of the grid point nearest to x.
    pub fn index_of(&self, x: f64) -> usize {
        let j = ((x - self.x0) / self.dx).round() as i64;
        j.rem_euclid(self.n as i64) as usize
    }
}

#[derive(Clone, Debug)]
pub struct WaveFunction {
    pub grid: Arc<Grid1D>,
    pub samples: Vec<Complex64>,
    pub time_tag: f64,
}

#[derive(Clone, Debug)]
pub struct MomentumWaveFunction {
    pub grid: Arc<Grid1D>,
    /// samples in the ladder (DFT storage) order of `grid.momenta()`
    pub samples: Vec<Complex64>,
    pub time_tag: f64,
}

impl WaveFunction {
    pub fn from_fn(grid: &Arc<Grid1D>, time_tag: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = (0..grid.len()).map(|j| f(grid.x(j))).collect();
        WaveFunction {
            grid: grid.clone(),
            samples,
            time_tag,
        }
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.dx()).sqrt()
    }

    pub fn normalize(&self) -> Result<WaveFunction> {
        let n = self.norm();
        if n == 0.0 {
            return Err(SalpeterError::ZeroState);
        }
        let mut out = self.clone();
        for v in &mut out.samples {
            *v /= n;
        }
        Ok(out)
    }

    /// Peak-to-boundary magnitude ratio diagnostic: |psi| averaged over the
    /// two outermost cells divided by the peak magnitude.
    pub fn boundary_contamination(&self) -> f64 {
        let peak = self
            .samples
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.samples.len();
        let edge = 0.5 * (self.samples[0].norm() + self.samples[n - 1].norm());
        edge / peak
    }
}

impl MomentumWaveFunction {
    pub fn from_fn(grid: &Arc<Grid1D>, time_tag: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = grid.momenta().iter().map(|&p| f(p)).collect();
        MomentumWaveFunction {
            grid: grid.clone(),
            samples,
            time_tag,
        }
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.dp()).sqrt()
    }

    pub fn normalize(&self) -> Result<MomentumWaveFunction> {
        let n = self.norm();
        if n == 0.0 {
            return Err(SalpeterError::ZeroState);
        }
        let mut out = self.clone();
        for v in &mut out.samples {
            *v /= n;
        }
        Ok(out)
    }
}

pub fn forward_transform(psi: &WaveFunction) -> MomentumWaveFunction {
    let g = &psi.grid;
    let mut buf = psi.samples.clone();
    g.fft_fwd.process(&mut buf);
    let scale = g.dx() / (2.0 * std::f64::consts::PI * g.hbar()).sqrt();
    for (v, &p) in buf.iter_mut().zip(g.momenta()) {
        *v *= scale * Complex64::from_polar(1.0, -p * g.x0() / g.hbar());
    }
    MomentumWaveFunction {
        grid: g.clone(),
        samples: buf,
        time_tag: psi.time_tag,
    }
}

pub fn inverse_transform(phi: &MomentumWaveFunction) -> WaveFunction {
    let g = &phi.grid;
    let mut buf: Vec<Complex64> = phi
        .samples
        .iter()
        .zip(g.momenta())
        .map(|(&v, &p)| v * Complex64::from_polar(1.0, p * g.x0() / g.hbar()))
        .collect();
    g.fft_inv.process(&mut buf);
    let scale = g.dp() / (2.0 * std::f64::consts::PI * g.hbar()).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    WaveFunction {
        grid: g.clone(),
        samples: buf,
        time_tag: phi.time_tag,
    }
}

pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    /// Uniform trapezoid nodes on [0, r_max] with 4 pi r^2 volume weights.
    pub fn new(n_r: usize, r_max: f64) -> Result<RadialGrid> {
        if n_r < 2 || !(r_max > 0.0) {
            return Err(SalpeterError::InvalidArgument(format!(
                "radial grid needs n_r >= 2 and r_max > 0, got ({n_r}, {r_max})"
            )));
        }
        let dr = r_max / (n_r - 1) as f64;
        let nodes: Vec<f64> = (0..n_r).map(|k| k as f64 * dr).collect();
        let weights = nodes
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                let trapz = if k == 0 || k == n_r - 1 { 0.5 } else { 1.0 };
                4.0 * std::f64::consts::PI * r * r * dr * trapz
            })
            .collect();
        Ok(RadialGrid { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Integral of a radial density over all space, sum w_k f(r_k).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(values)
            .map(|((_, &w), &f)| w * f)
            .sum()
    }
}
