//! Probability density, the probability current in its three computable
//! forms (momentum-space bilinear, position-space kernel form, truncated
//! derivative series), expectation values, the mover decomposition, and
//! continuity-equation residuals.
//!
//! The bilinear current is
//!   j(x) = (dp^2 / 2 pi hbar) Re sum_{n,m} W(p_n, p_m)
//!          conj(phi_n) phi_m exp(i (p_m - p_n) x / hbar),
//! with W(p, q) = c^2 (p + q) / (E_p + E_q). Evaluated on the full grid it
//! is grouped row by row: each inner sum over m is one inverse FFT, giving
//! O(N^2 log N) work and O(N) memory instead of an N x N matrix.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SalpeterError};
use crate::evolve::evolve_free;
use crate::grid::{inverse_transform, MomentumWaveFunction, WaveFunction};
use crate::hamiltonian::{symbol, PhysicalConstants};

#[derive(Clone, Debug)]
pub struct CurrentField {
    pub values: Vec<f64>,
    pub time_tag: f64,
    /// largest imaginary residue of the bilinear sum, for reality checks
    pub imag_residue: f64,
}

pub fn density(psi: &WaveFunction) -> Vec<f64> {
    psi.samples.iter().map(|v| v.norm_sqr()).collect()
}

/// Symmetrized current weight c^2 (p + q) / (E_p + E_q); the massless
/// p = q = 0 entry carries measure zero and is set to 0.
pub fn current_weight(p: f64, q: f64, k: &PhysicalConstants) -> f64 {
    let den = symbol(p, k) + symbol(q, k);
    if den == 0.0 {
        0.0
    } else {
        k.c * k.c * (p + q) / den
    }
}

/// Bilinear current evaluated on every grid point.
pub fn current_spectral_1d(phi: &MomentumWaveFunction, k: &PhysicalConstants) -> CurrentField {
    let g = &phi.grid;
    let n = g.len();
    let hbar = g.hbar();
    let momenta = g.momenta();
    let ph0: Vec<Complex64> = momenta
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p * g.x0() / hbar))
        .collect();
    // tw[j] = exp(-2 pi i j / N)
    let tw: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect();
    let fft_inv = rustfft::FftPlanner::new().plan_fft_inverse(n);

    // fixed chunking and a sequential final sum keep the floating-point
    // summation order independent of thread scheduling, so repeated runs
    // are bit-identical
    let chunk = n.div_ceil(64);
    let starts: Vec<usize> = (0..n).step_by(chunk).collect();
    let partials: Vec<Vec<Complex64>> = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + chunk).min(n);
            let mut acc = vec![Complex64::new(0.0, 0.0); n];
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for nn in lo..hi {
                let pn = momenta[nn];
                for m in 0..n {
                    row[m] = current_weight(pn, momenta[m], k) * phi.samples[m] * ph0[m];
                }
                fft_inv.process(&mut row);
                let left = (phi.samples[nn] * ph0[nn]).conj();
                for i in 0..n {
                    acc[i] += left * tw[(nn * i) % n] * row[i];
                }
            }
            acc
        })
        .collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for part in partials {
        for (x, y) in acc.iter_mut().zip(part) {
            *x += y;
        }
    }

    let scale = g.dp() * g.dp() / (2.0 * std::f64::consts::PI * hbar);
    let values: Vec<f64> = acc.iter().map(|v| v.re * scale).collect();
    let imag_residue = acc.iter().map(|v| v.im.abs()).fold(0.0f64, f64::max) * scale;
    CurrentField {
        values,
        time_tag: phi.time_tag,
        imag_residue,
    }
}

/// Bilinear current at arbitrary points, O(N^2) per point.
pub fn current_spectral_at(
    phi: &MomentumWaveFunction,
    k: &PhysicalConstants,
    xs: &[f64],
) -> Vec<f64> {
    let g = &phi.grid;
    let momenta = g.momenta();
    let hbar = g.hbar();
    let scale = g.dp() * g.dp() / (2.0 * std::f64::consts::PI * hbar);
    xs.par_iter()
        .map(|&x| {
            let v: Vec<Complex64> = phi
                .samples
                .iter()
                .zip(momenta)
                .map(|(&a, &p)| a * Complex64::from_polar(1.0, p * x / hbar))
                .collect();
            let mut s = 0.0;
            for (nn, &pn) in momenta.iter().enumerate() {
                let mut inner = Complex64::new(0.0, 0.0);
                for (m, &pm) in momenta.iter().enumerate() {
                    inner += current_weight(pn, pm, k) * v[m];
                }
                s += (v[nn].conj() * inner).re;
            }
            s * scale
        })
        .collect()
}

/// Position-space kernel form of the current. The double quadrature over
/// (y, z) is reduced to a convolution plus prefix sums: with
/// f(u) = (m c^2 / 2 pi hbar) K_1(m c |u| / hbar)/|u| (massless limit
/// c / (2 pi u^2)) and C = f * psi, the current is
/// j(x) = 2 Im sum_y conj(psi(y)) eps(x - y) C(y) dy.
/// The sign structure screens the diagonal: f(0) is never used.
pub fn current_kernel_1d(psi: &WaveFunction, k: &PhysicalConstants) -> Result<CurrentField> {
    k.validate()?;
    let g = &psi.grid;
    let n = g.len();
    let dx = g.dx();
    let l = g.box_length();
    let pi = std::f64::consts::PI;

    // minimum-image kernel samples, zero at the singular cell
    let mut fk = vec![Complex64::new(0.0, 0.0); n];
    for (s, slot) in fk.iter_mut().enumerate().skip(1) {
        let u = s as f64 * dx;
        let um = if u > l / 2.0 { u - l } else { u };
        let val = if k.m == 0.0 {
            k.c / (2.0 * pi * um * um)
        } else {
            let z = um.abs() / k.compton_length();
            match crate::specfun::bessel_k_real(1, z) {
                Ok(k1) => k.m * k.c * k.c / (2.0 * pi * k.hbar) * k1 / um.abs(),
                Err(SalpeterError::Overflow { .. }) => 0.0,
                Err(e) => return Err(e),
            }
        };
        *slot = Complex64::new(val, 0.0);
    }

    // circular convolution C = f * psi by FFT
    let mut planner = rustfft::FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut fhat = fk;
    fwd.process(&mut fhat);
    let mut c = psi.samples.clone();
    fwd.process(&mut c);
    for (a, b) in c.iter_mut().zip(&fhat) {
        *a *= b / n as f64;
    }
    inv.process(&mut c);

    // g_j = conj(psi_j) C_j dx dy; eps prefix sums give the sign-weighted
    // sum. The zeroed singular cell leaves a curvature deficit of the same
    // kind as in the operator quadrature; restore it with a centered second
    // difference
    let gj: Vec<Complex64> = psi
        .samples
        .iter()
        .zip(&c)
        .enumerate()
        .map(|(j, (&ps, &cv))| {
            let d2 = psi.samples[(j + 1) % n] + psi.samples[(j + n - 1) % n] - 2.0 * ps;
            ps.conj() * cv * (dx * dx) + k.c / (4.0 * pi) * ps.conj() * d2
        })
        .collect();
    let total: Complex64 = gj.iter().sum();
    let mut prefix = Complex64::new(0.0, 0.0);
    let mut values = Vec::with_capacity(n);
    let mut imag_residue = 0.0f64;
    for &gv in &gj {
        let a = 2.0 * prefix + gv - total;
        values.push(2.0 * a.im);
        imag_residue = imag_residue.max(a.re.abs() * 0.0); // kernel form is real by construction
        prefix += gv;
    }
    Ok(CurrentField {
        values,
        time_tag: psi.time_tag,
        imag_residue,
    })
}

/// Truncated derivative-series current: the n-th term carries
/// (2n-3)!!/(2n)!! (hbar/(m c))^{2n} and 2n-1 spectral derivatives.
pub fn current_series(
    psi: &WaveFunction,
    k: &PhysicalConstants,
    order: usize,
) -> Result<CurrentField> {
    if k.m == 0.0 {
        return Err(SalpeterError::MasslessSeries);
    }
    if order == 0 {
        return Err(SalpeterError::InvalidArgument(
            "series order must be at least 1".into(),
        ));
    }
    let g = &psi.grid;
    let n = g.len();
    let hbar = g.hbar();
    // spectral derivatives up to order 2*order - 1
    let mut phi = crate::grid::forward_transform(psi);
    let max_d = 2 * order - 1;
    let mut derivs: Vec<Vec<Complex64>> = Vec::with_capacity(max_d + 1);
    derivs.push(psi.samples.clone());
    let base = phi.samples.clone();
    for d in 1..=max_d {
        for ((v, &b), &p) in phi.samples.iter_mut().zip(&base).zip(g.momenta()) {
            *v = b * Complex64::new(0.0, p / hbar).powu(d as u32);
        }
        derivs.push(inverse_transform(&phi).samples);
    }

    let lambda = k.compton_length();
    let pre = -Complex64::i() * k.m * k.c * k.c / k.hbar;
    let mut values = vec![0.0f64; n];
    let mut prev_term_max = f64::INFINITY;
    let mut coeff = 1.0f64; // (2n-3)!!/(2n)!!
    for nn in 1..=order {
        let nf = nn as f64;
        coeff *= if nn == 1 {
            0.5
        } else {
            (2.0 * nf - 3.0) / (2.0 * nf)
        };
        let scale = pre * coeff * lambda.powi(2 * nn as i32);
        let mut term_max = 0.0f64;
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for kk in 0..2 * nn {
                let sign = if kk % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * derivs[kk][i].conj() * derivs[2 * nn - 1 - kk][i];
            }
            let contrib = (scale * s).re;
            values[i] += contrib;
            term_max = term_max.max(contrib.abs());
        }
        if nn >= 2 && term_max > prev_term_max {
            return Err(SalpeterError::SeriesDivergence { order: nn });
        }
        prev_term_max = term_max;
    }
    Ok(CurrentField {
        values,
        time_tag: psi.time_tag,
        imag_residue: 0.0,
    })
}

pub fn total_current(j: &CurrentField, dx: f64) -> f64 {
    j.values.iter().sum::<f64>() * dx
}

/// Mean of the relativistic velocity operator c^2 p / E(p).
pub fn mean_velocity(phi: &MomentumWaveFunction, k: &PhysicalConstants) -> f64 {
    let dp = phi.grid.dp();
    phi.samples
        .iter()
        .zip(phi.grid.momenta())
        .map(|(v, &p)| {
            let e = symbol(p, k);
            if e == 0.0 {
                0.0
            } else {
                v.norm_sqr() * k.c * k.c * p / e
            }
        })
        .sum::<f64>()
        * dp
}

pub fn mean_position(psi: &WaveFunction) -> f64 {
    let g = &psi.grid;
    psi.samples
        .iter()
        .enumerate()
        .map(|(j, v)| g.x(j) * v.norm_sqr())
        .sum::<f64>()
        * g.dx()
}

/// Heaviside projection onto positive and negative momenta. The p = 0 node
/// splits with amplitude 1/sqrt(2) on each side so the densities add up.
pub fn split_movers(
    phi: &MomentumWaveFunction,
) -> (MomentumWaveFunction, MomentumWaveFunction) {
    let half_amp = 0.5f64.sqrt();
    let make = |positive: bool| MomentumWaveFunction {
        grid: phi.grid.clone(),
        samples: phi
            .samples
            .iter()
            .zip(phi.grid.momenta())
            .map(|(&v, &p)| {
                if p == 0.0 {
                    v * half_amp
                } else if (p > 0.0) == positive {
                    v
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
        time_tag: phi.time_tag,
    };
    (make(true), make(false))
}

/// Fourier shift of a sampled field by h (exact trigonometric
/// interpolation). The Nyquist mode is dropped to keep real fields real.
fn fourier_shift(values: &[f64], grid: &crate::grid::Grid1D, h: f64) -> Vec<f64> {
    let n = values.len();
    let mut planner = rustfft::FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    for (v, &p) in buf.iter_mut().zip(grid.momenta()) {
        if p == grid.p_max() {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= Complex64::from_polar(1.0 / n as f64, p * h / grid.hbar());
        }
    }
    inv.process(&mut buf);
    buf.iter().map(|v| v.re).collect()
}

/// Continuity residual from states at t - dt, t, t + dt: centered
/// difference in time against a matched centered difference of the current
/// shifted by h = c dt via Fourier interpolation. For rigidly translating
/// states (plane waves, massless movers) the two differences cancel to
/// rounding.
pub fn continuity_residual_states(
    phi_minus: &MomentumWaveFunction,
    phi_center: &MomentumWaveFunction,
    phi_plus: &MomentumWaveFunction,
    k: &PhysicalConstants,
    dt: f64,
) -> Vec<f64> {
    let rho_m = density(&inverse_transform(phi_minus));
    let rho_p = density(&inverse_transform(phi_plus));
    let j = current_spectral_1d(phi_center, k);
    let h = k.c * dt;
    let g = &phi_center.grid;
    let j_right = fourier_shift(&j.values, g, h);
    let j_left = fourier_shift(&j.values, g, -h);
    (0..g.len())
        .map(|i| (rho_p[i] - rho_m[i]) / (2.0 * dt) + (j_right[i] - j_left[i]) / (2.0 * h))
        .collect()
}

/// Continuity residual under free evolution.
pub fn continuity_residual(
    phi: &MomentumWaveFunction,
    k: &PhysicalConstants,
    dt: f64,
) -> Vec<f64> {
    let pm = evolve_free(phi, -dt, k);
    let pp = evolve_free(phi, dt, k);
    continuity_residual_states(&pm, phi, &pp, k, dt)
}

/// Max magnitude of the spatial derivative of the current, used to scale
/// continuity tolerances.
pub fn current_gradient_scale(j: &CurrentField, grid: &crate::grid::Grid1D) -> f64 {
    let h = grid.dx();
    let r = fourier_shift(&j.values, grid, h);
    let l = fourier_shift(&j.values, grid, -h);
    r.iter()
        .zip(&l)
        .map(|(a, b)| ((a - b) / (2.0 * h)).abs())
        .fold(0.0f64, f64::max)
}
