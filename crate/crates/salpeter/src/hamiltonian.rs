//! Two independent realizations of the kinetic operator
//! sqrt(m^2 c^4 - hbar^2 c^2 d^2/dx^2): a Fourier multiplier acting on the
//! momentum ladder, and a singular convolution kernel built from Macdonald
//! functions. The kernel route exists for cross-validation; evolution always
//! goes through the spectral route.
//!
//! The divergent kernel integral is evaluated in subtracted form,
//! int K(x-y) [psi(y) - psi(x)] dy + m c^2 psi(x),
//! where m c^2 is the symbol at p = 0 (the finite part of int K du). The
//! quadrature sums over grid nodes away from the singular cell; the local
//! cell contributes the exactly integrated curvature term
//! -c hbar psi''(x) dx / (2 pi). For m = 0 the kernel is periodized in
//! closed form (sum over images of 1/u^2 gives 1/sin^2), for m > 0 the
//! minimum-image kernel is used and the exponentially small truncated tail
//! is restored as a constant computed by quadrature.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SalpeterError};
use crate::grid::{forward_transform, inverse_transform, WaveFunction};
use crate::quad::adaptive_quad;
use crate::specfun::bessel_k_real;

#[derive(Clone, Copy, Debug)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub m: f64,
}

impl PhysicalConstants {
    /// Natural units hbar = c = 1 with the given mass.
    pub fn natural(m: f64) -> PhysicalConstants {
        PhysicalConstants { hbar: 1.0, c: 1.0, m }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hbar > 0.0 && self.c > 0.0 && self.m >= 0.0 {
            Ok(())
        } else {
            Err(SalpeterError::InvalidArgument(format!(
                "constants require hbar > 0, c > 0, m >= 0, got {self:?}"
            )))
        }
    }

    /// Reduced Compton wavelength hbar / (m c); infinite for m = 0.
    pub fn compton_length(&self) -> f64 {
        if self.m == 0.0 {
            f64::INFINITY
        } else {
            self.hbar / (self.m * self.c)
        }
    }
}

#[derive(Clone, Debug)]
pub enum PotentialSpec {
    None,
    /// V(x) = mu * x
    Linear(f64),
    /// real samples on the evolution grid
    Sampled(Vec<f64>),
}

impl PotentialSpec {
    pub fn sample(&self, positions: &[f64]) -> Result<Vec<f64>> {
        match self {
            PotentialSpec::None => Ok(vec![0.0; positions.len()]),
            PotentialSpec::Linear(mu) => Ok(positions.iter().map(|&x| mu * x).collect()),
            PotentialSpec::Sampled(v) => {
                if v.len() != positions.len() {
                    return Err(SalpeterError::InvalidArgument(format!(
                        "sampled potential length {} does not match grid size {}",
                        v.len(),
                        positions.len()
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(SalpeterError::InvalidArgument(
                        "sampled potential contains non-finite values".into(),
                    ));
                }
                Ok(v.clone())
            }
        }
    }
}

/// Kinetic symbol sqrt(m^2 c^4 + p^2 c^2); exactly c|p| for m = 0.
pub fn symbol(p: f64, k: &PhysicalConstants) -> f64 {
    (k.m * k.c * k.c).hypot(p * k.c)
}

/// Spectral application of the square-root operator.
pub fn apply_sqrt_spectral(psi: &WaveFunction, k: &PhysicalConstants) -> WaveFunction {
    let mut phi = forward_transform(psi);
    for (v, &p) in phi.samples.iter_mut().zip(phi.grid.momenta()) {
        *v *= symbol(p, k);
    }
    let grid = phi.grid.clone();
    let mut out = inverse_transform(&phi);
    out.grid = grid;
    out.time_tag = psi.time_tag;
    out
}

/// Position-space kernel of the 1D square-root operator at separation u.
pub fn kernel_1d(u: f64, k: &PhysicalConstants) -> Result<f64> {
    if u == 0.0 {
        return Err(SalpeterError::KernelSingularity);
    }
    let au = u.abs();
    if k.m == 0.0 {
        return Ok(-k.c * k.hbar / (std::f64::consts::PI * u * u));
    }
    let z = au / k.compton_length();
    match bessel_k_real(1, z) {
        Ok(k1) => Ok(-(k.m * k.c * k.c / std::f64::consts::PI) * k1 / au),
        Err(SalpeterError::Overflow { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Position-space kernel of the 3D square-root operator, u = |x - y|.
pub fn kernel_3d(u: f64, k: &PhysicalConstants) -> Result<f64> {
    if u == 0.0 {
        return Err(SalpeterError::KernelSingularity);
    }
    let pi = std::f64::consts::PI;
    if k.m == 0.0 {
        return Ok(-k.c * k.hbar / (pi * pi * u.powi(4)));
    }
    let z = u / k.compton_length();
    match bessel_k_real(2, z) {
        Ok(k2) => Ok(-k.m * k.m * k.c.powi(3) / (2.0 * pi * pi * k.hbar) * k2 / (u * u)),
        Err(SalpeterError::Overflow { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Weight of the 3D kernel-form current at radial separations (u, w).
pub fn kernel_current_weight_3d(u: f64, w: f64, k: &PhysicalConstants) -> Result<Complex64> {
    if u == 0.0 || w == 0.0 {
        return Err(SalpeterError::KernelSingularity);
    }
    let two_pi_cubed = (2.0 * std::f64::consts::PI).powi(3);
    if k.m == 0.0 {
        let mag = 2.0 * k.c / (two_pi_cubed * u * w * (u + w).powi(3));
        return Ok(Complex64::new(0.0, -mag));
    }
    let z = (u + w) / k.compton_length();
    let k2 = match bessel_k_real(2, z) {
        Ok(v) => v,
        Err(SalpeterError::Overflow { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    let mag = k.m * k.m * k.c.powi(3) / (two_pi_cubed * k.hbar * k.hbar) * k2 / (u * w * (u + w));
    Ok(Complex64::new(0.0, -mag))
}

/// Kernel-route application of the square-root operator (subtracted
/// quadrature, see module docs). O(N^2); validation use only.
pub fn apply_sqrt_kernel(psi: &WaveFunction, k: &PhysicalConstants) -> Result<WaveFunction> {
    k.validate()?;
    let g = &psi.grid;
    let n = g.len();
    let dx = g.dx();
    let l = g.box_length();
    let pi = std::f64::consts::PI;

    if k.m > 0.0 {
        let ratio = dx / k.compton_length();
        if ratio > 1.0 {
            return Err(SalpeterError::ComptonUnderResolved { ratio });
        }
    }

    // kernel values at shifts s = 1..N-1
    let kv: Vec<f64> = if k.m == 0.0 {
        (1..n)
            .map(|s| {
                let u = s as f64 * dx;
                -k.c * k.hbar * pi / (l * l) / (pi * u / l).sin().powi(2)
            })
            .collect()
    } else {
        (1..n)
            .map(|s| {
                let u = s as f64 * dx;
                let um = if u > l / 2.0 { u - l } else { u };
                kernel_1d(um, k)
            })
            .collect::<Result<_>>()?
    };

    let rest_energy = k.m * k.c * k.c;
    let tail = if k.m == 0.0 {
        0.0
    } else {
        let lam = k.compton_length();
        if l / 2.0 / lam > 600.0 {
            0.0
        } else {
            // restore the |u| > L/2 part dropped by minimum-image truncation
            let upper = (l / 2.0 + 50.0 * lam).min(l / 2.0 + 600.0 * lam);
            2.0 * adaptive_quad(
                |s| {
                    (k.m * k.c * k.c / pi) * bessel_k_real(1, s / lam).unwrap_or(0.0) / s
                },
                l / 2.0,
                upper,
                1e-14,
            )?
        }
    };

    let samples = &psi.samples;
    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            let center = samples[i];
            for (s, &kval) in kv.iter().enumerate() {
                let j = (i + s + 1) % n;
                acc += kval * (samples[j] - center);
            }
            acc *= dx;
            // singular-cell curvature term, centered second difference
            let left = samples[(i + n - 1) % n];
            let right = samples[(i + 1) % n];
            let d2 = (right - 2.0 * center + left) / (dx * dx);
            acc += -k.c * k.hbar * d2 * dx / (2.0 * pi);
            acc + (rest_energy + tail) * center
        })
        .collect();

    Ok(WaveFunction {
        grid: g.clone(),
        samples: out,
        time_tag: psi.time_tag,
    })
}
