//! Closed-form reference solutions: the massless Lorentzian packet and its
//! mover decomposition, the massive Bessel packet, the linear-potential
//! Gaussian, plane waves, and the spherical massless packet in three
//! dimensions.
//!
//! Everything here except `plane_wave` is written in natural units; the
//! functions that accept `PhysicalConstants` reject hbar != 1 or c != 1.

use num_complex::Complex64;

use crate::error::{Result, SalpeterError};
use crate::hamiltonian::{symbol, PhysicalConstants};
use crate::quad::adaptive_quad;
use crate::specfun;

const PI: f64 = std::f64::consts::PI;

fn require_natural(k: &PhysicalConstants) -> Result<()> {
    k.validate()?;
    if k.hbar != 1.0 || k.c != 1.0 {
        return Err(SalpeterError::InvalidArgument(
            "closed forms are written in natural units, set hbar = c = 1".into(),
        ));
    }
    Ok(())
}

fn check_width(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(SalpeterError::InvalidArgument(format!(
            "packet width must be positive and finite, got {a}"
        )));
    }
    Ok(())
}

/// Massless Lorentzian packet, position space.
pub fn lorentzian_massless_psi(x: f64, t: f64, a: f64) -> Result<Complex64> {
    check_width(a)?;
    let z = Complex64::new(a, t);
    Ok((2.0 * a / PI).sqrt() * z / (x * x + z * z))
}

/// Its probability density.
pub fn lorentzian_massless_density(x: f64, t: f64, a: f64) -> Result<f64> {
    check_width(a)?;
    let d = (x * x - t * t + a * a).powi(2) + 4.0 * a * a * t * t;
    Ok(2.0 * a / PI * (a * a + t * t) / d)
}

/// Its probability current; the t -> 0 limit is 0 everywhere.
pub fn lorentzian_massless_current(x: f64, t: f64, a: f64) -> Result<f64> {
    check_width(a)?;
    if t.abs() < 1e-6 * a {
        return Ok(0.0);
    }
    let d = (x * x - t * t + a * a).powi(2) + 4.0 * a * a * t * t;
    let log_term = a / (4.0 * PI * t * t)
        * (((x + t).powi(2) + a * a) / ((x - t).powi(2) + a * a)).ln();
    let rational = a * x / (PI * t) * (x * x - 3.0 * t * t + a * a) / d;
    Ok(log_term - rational)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoverSign {
    Plus,
    Minus,
}

impl MoverSign {
    fn as_f64(self) -> f64 {
        match self {
            MoverSign::Plus => 1.0,
            MoverSign::Minus => -1.0,
        }
    }
}

/// Normalized single mover; the full packet is (plus + minus) / sqrt(2).
pub fn mover_psi(x: f64, t: f64, a: f64, sign: MoverSign) -> Result<Complex64> {
    check_width(a)?;
    let s = sign.as_f64();
    Ok((a / PI).sqrt() * Complex64::new(0.0, s) / Complex64::new(x - s * t, s * a))
}

/// Rigidly translating mover density.
pub fn mover_density(x: f64, t: f64, a: f64, sign: MoverSign) -> Result<f64> {
    check_width(a)?;
    let s = sign.as_f64();
    Ok(a / PI / ((x - s * t).powi(2) + a * a))
}

/// The mover current is +- c times its density.
pub fn mover_current(x: f64, t: f64, a: f64, sign: MoverSign) -> Result<f64> {
    Ok(sign.as_f64() * mover_density(x, t, a, sign)?)
}

/// Exact density of the Lorentzian initial state wrapped onto a ring of
/// circumference l (the image sum has a closed form).
pub fn periodized_lorentzian_density(x: f64, a: f64, l: f64) -> Result<f64> {
    check_width(a)?;
    if !(l > 0.0) {
        return Err(SalpeterError::InvalidArgument(
            "ring circumference must be positive".into(),
        ));
    }
    let q = 2.0 * PI * a / l;
    Ok((1.0 / l) * q.sinh() / (q.cosh() - (2.0 * PI * x / l).cos()))
}

fn kv_or_zero(order: u32, z: Complex64) -> Result<Complex64> {
    match specfun::bessel_k(order, z) {
        Ok(v) => Ok(v),
        Err(SalpeterError::Overflow { .. }) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// Massive Bessel packet in momentum space.
pub fn massive_packet_momentum(
    p: f64,
    t: f64,
    a: f64,
    k: &PhysicalConstants,
) -> Result<Complex64> {
    require_natural(k)?;
    check_width(a)?;
    let m = k.m;
    if !(m > 0.0) {
        return Err(SalpeterError::InvalidArgument(
            "the Bessel packet needs a positive mass".into(),
        ));
    }
    let norm = 1.0 / (2.0 * m * specfun::bessel_k_real(1, 2.0 * m * a)?).sqrt();
    let z = Complex64::new(a, t);
    Ok(norm * (-z * symbol(p, k)).exp())
}

/// Massive Bessel packet in position space.
pub fn massive_packet_psi(x: f64, t: f64, a: f64, k: &PhysicalConstants) -> Result<Complex64> {
    require_natural(k)?;
    check_width(a)?;
    let m = k.m;
    if !(m > 0.0) {
        return Err(SalpeterError::InvalidArgument(
            "the Bessel packet needs a positive mass".into(),
        ));
    }
    let z = Complex64::new(a, t);
    let w = (Complex64::new(x * x, 0.0) + z * z).sqrt();
    debug_assert!(w.re >= 0.0);
    let pref = (m / (PI * specfun::bessel_k_real(1, 2.0 * m * a)?)).sqrt();
    Ok(pref * z / w * kv_or_zero(1, m * w)?)
}

fn massive_current_setup(
    t: f64,
    a: f64,
    k: &PhysicalConstants,
) -> Result<(f64, impl Fn(f64) -> f64)> {
    require_natural(k)?;
    check_width(a)?;
    let m = k.m;
    if !(m > 0.0) {
        return Err(SalpeterError::InvalidArgument(
            "the Bessel packet needs a positive mass".into(),
        ));
    }
    let k1 = specfun::bessel_k_real(1, 2.0 * m * a)?;
    let zp = Complex64::new(a, t);
    let zm = Complex64::new(a, -t);
    let integrand = move |s: f64| -> f64 {
        let s2 = Complex64::new(s * s, 0.0);
        let wp = (s2 + zp * zp).sqrt();
        let wm = (s2 + zm * zm).sqrt();
        let k2p = kv_or_zero(2, m * wp).unwrap_or_default();
        let k0p = kv_or_zero(0, m * wp).unwrap_or_default();
        let k1m = kv_or_zero(1, m * wm).unwrap_or_default();
        let term = ((s2 - zp * zp) / (s2 + zp * zp) * k2p - k0p) * (zm / wm) * k1m;
        term.im
    };
    Ok((m * m / (PI * k1), integrand))
}

/// Current of the massive Bessel packet, as a single quadrature from the
/// origin to x.
pub fn massive_packet_current(x: f64, t: f64, a: f64, k: &PhysicalConstants) -> Result<f64> {
    let (pref, integrand) = massive_current_setup(t, a, k)?;
    let val = adaptive_quad(integrand, 0.0, x, 1e-10)?;
    Ok(pref * val)
}

/// Same current on a whole batch of points; the quadrature runs once per
/// gap between neighboring points instead of once from the origin per
/// point.
pub fn massive_packet_current_profile(
    xs: &[f64],
    t: f64,
    a: f64,
    k: &PhysicalConstants,
) -> Result<Vec<f64>> {
    let (pref, integrand) = massive_current_setup(t, a, k)?;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let mut out = vec![0.0; xs.len()];
    // ascending from 0 over the nonnegative points
    let mut anchor = 0.0;
    let mut acc = 0.0;
    for &i in order.iter().filter(|&&i| xs[i] >= 0.0) {
        acc += adaptive_quad(&integrand, anchor, xs[i], 1e-12)?;
        anchor = xs[i];
        out[i] = pref * acc;
    }
    // descending from 0 over the negative points
    anchor = 0.0;
    acc = 0.0;
    for &i in order.iter().rev().filter(|&&i| xs[i] < 0.0) {
        acc += adaptive_quad(&integrand, anchor, xs[i], 1e-12)?;
        anchor = xs[i];
        out[i] = pref * acc;
    }
    Ok(out)
}

fn check_linear(lambda: f64, mu: f64) -> Result<()> {
    if !(lambda > 0.0) || !(mu > 0.0) {
        return Err(SalpeterError::InvalidArgument(format!(
            "linear-potential packet needs positive lambda and mu, got {lambda}, {mu}"
        )));
    }
    Ok(())
}

/// Massless Gaussian in a linear potential mu x, momentum space.
pub fn linear_potential_momentum(p: f64, t: f64, lambda: f64, mu: f64) -> Result<Complex64> {
    check_linear(lambda, mu)?;
    let pref = (lambda / (mu * PI)).powf(0.25);
    let phase = Complex64::new(0.0, specfun::sign(p) * p * p / (2.0 * mu));
    let gauss = -lambda * (p + mu * t) * (p + mu * t) / (2.0 * mu);
    Ok(pref * (phase + gauss).exp())
}

/// exp(w^2) erfc(w) without overflow; the scaled form is used directly in
/// the right half plane and via the reflection identity otherwise.
fn expsq_erfc(w: Complex64) -> Result<Complex64> {
    if w.re >= 0.0 {
        specfun::erfcx_complex(w)
    } else {
        let w2 = w * w;
        if w2.re > 700.0 {
            return Err(SalpeterError::Overflow {
                function: "expsq_erfc",
                detail: format!("exp(w^2) overflows for w = {w}"),
            });
        }
        Ok(2.0 * w2.exp() - specfun::erfcx_complex(-w)?)
    }
}

/// Massless Gaussian in a linear potential, position space.
pub fn linear_potential_psi(x: f64, t: f64, lambda: f64, mu: f64) -> Result<Complex64> {
    check_linear(lambda, mu)?;
    let i = Complex64::i();
    let lp = lambda + i;
    let lm = lambda - i;
    let w1 = (mu / (2.0 * lp)).sqrt() * Complex64::new(-lambda * t, x);
    let w2 = (mu / (2.0 * lm)).sqrt() * Complex64::new(lambda * t, -x);
    let pref = 0.5 * (lambda * mu / PI).powf(0.25) * (-lambda * mu * t * t / 2.0).exp();
    Ok(pref * (expsq_erfc(w1)? / lp.sqrt() + expsq_erfc(w2)? / lm.sqrt()))
}

/// Mean position of the linear-potential packet.
pub fn linear_potential_mean_x(t: f64, lambda: f64, mu: f64) -> Result<f64> {
    check_linear(lambda, mu)?;
    let lm = lambda * mu;
    Ok(-(-lm * t * t).exp() / (lm * PI).sqrt() - t * specfun::erf_real(lm.sqrt() * t))
}

/// Mean velocity of the linear-potential packet.
pub fn linear_potential_mean_v(t: f64, lambda: f64, mu: f64) -> Result<f64> {
    check_linear(lambda, mu)?;
    Ok(-specfun::erf_real((lambda * mu).sqrt() * t))
}

/// Classical light-speed trajectory in the linear potential: uniform motion
/// at +-c with one turning point where the momentum crosses zero.
pub fn classical_linear_trajectory(t: f64, mu: f64, p0: f64, x0: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(SalpeterError::InvalidArgument(
            "linear-potential slope mu must be positive".into(),
        ));
    }
    Ok(-((p0 - mu * t).abs() - p0.abs()) / mu + x0)
}

/// Plane wave in general units.
pub fn plane_wave(
    x: f64,
    t: f64,
    p: f64,
    amplitude: Complex64,
    k: &PhysicalConstants,
) -> Result<Complex64> {
    k.validate()?;
    let e = symbol(p, k);
    Ok(amplitude * Complex64::from_polar(1.0, (p * x - e * t) / k.hbar))
}

/// Uniform current carried by a plane wave.
pub fn plane_wave_current(p: f64, amplitude: Complex64, k: &PhysicalConstants) -> Result<f64> {
    k.validate()?;
    let e = symbol(p, k);
    if e == 0.0 {
        return Ok(0.0);
    }
    Ok(amplitude.norm_sqr() * k.c * k.c * p / e)
}

/// Spherical massless packet in three dimensions, position space.
pub fn massless_3d_psi(r: f64, t: f64, a: f64) -> Result<Complex64> {
    check_width(a)?;
    let z = Complex64::new(a, t);
    let den = Complex64::new(r * r, 0.0) + z * z;
    Ok((2.0 * a).powf(1.5) / PI * z / (den * den))
}

/// Its density.
pub fn massless_3d_density(r: f64, t: f64, a: f64) -> Result<f64> {
    check_width(a)?;
    let d = (r * r - t * t + a * a).powi(2) + 4.0 * a * a * t * t;
    Ok((2.0 * a).powi(3) / (PI * PI) * (a * a + t * t) / (d * d))
}

// The radial current below is one algebraic identity written three ways.
// The plain form subtracts two terms that diverge like 1/r^3 and 1/t^4, so
// near the axis and near t = 0 the cancellation is reorganized analytically
// before any floating-point subtraction happens.

fn j3d_direct(r: f64, t: f64, a: f64) -> f64 {
    let d = (r * r - t * t + a * a).powi(2) + 4.0 * a * a * t * t;
    let num = 32.0 * r * r * t.powi(4)
        + (r * r + t * t + a * a)
            * (3.0 * (r * r - t * t + a * a).powi(2) + 12.0 * a * a * t * t
                - 8.0 * r * r * t * t);
    let term1 = -a.powi(3) / (2.0 * PI * PI * r * r * t.powi(3)) * num / (d * d);
    let term2 = 3.0 * a.powi(3) / (8.0 * PI * PI * r.powi(3) * t.powi(4))
        * (((r + t).powi(2) + a * a) / ((r - t).powi(2) + a * a)).ln();
    (term1 + term2) * r
}

fn j3d_small_r(r: f64, t: f64, a: f64) -> f64 {
    let aa = a.powi(3) / (2.0 * PI * PI * t.powi(3));
    let b = 3.0 * a.powi(3) / (8.0 * PI * PI * t.powi(4));
    let x = a * a - t * t;
    let d0 = (a * a + t * t).powi(2);
    let d = (r * r + x).powi(2) + 4.0 * a * a * t * t;
    let tt = t * t + a * a;
    let u = t * t - a * a;
    let alpha = -6.0 * u - 8.0 * t * t;
    let beta = 3.0 * u * u + 12.0 * a * a * t * t;
    let n0 = tt * beta;
    let n1 = beta + tt * alpha + 32.0 * t.powi(4);
    let n2 = alpha + 3.0 * tt;
    let n3 = 3.0;
    let g = -(r * r + 2.0 * x) * (d + d0) / (d * d * d0 * d0);
    let w = Complex64::new(t, a);
    let mut tail = 0.0;
    let mut rp = 1.0;
    let mut n = 3i32;
    while n < 40 {
        let coef = (4.0 / n as f64) * w.powi(-n).re;
        tail += coef * rp;
        rp *= r * r;
        if n > 5 && (coef * rp).abs() < 1e-20 {
            break;
        }
        n += 2;
    }
    let kappa = -aa * (n0 * g + (n1 + n2 * r * r + n3 * r.powi(4)) / (d * d)) + b * tail;
    kappa * r
}

fn j3d_small_t(r: f64, t: f64, a: f64) -> f64 {
    let q = r * r + a * a;
    let beta2 = 2.0 * (a * a - r * r);
    let s = t * t;
    let alpha = 6.0 * a * a - 14.0 * r * r;
    let m1 = q * alpha + 3.0 * q * q;
    let m2 = 3.0 * q + alpha + 32.0 * r * r;
    let m3 = 3.0;
    let c0 = 3.0 / q;
    let c1 = (m1 - 2.0 * c0 * q * q * beta2) / q.powi(4);
    let p2 = m2 - c0 * (beta2 * beta2 + 2.0 * q * q) - c1 * 2.0 * q * q * beta2;
    let p3 = m3 - c0 * 2.0 * beta2 - c1 * (beta2 * beta2 + 2.0 * q * q);
    let p4 = -c0 - 2.0 * beta2 * c1;
    let p5 = -c1;
    let d = q * q + beta2 * s + s * s;
    let term1 = -(a.powi(3) / (2.0 * PI * PI * r * r)) * t
        * (p2 + p3 * s + p4 * s * s + p5 * s.powi(3))
        / (d * d);
    let w = Complex64::new(r, a);
    let mut tail = 0.0;
    let mut tp = t.powi(5);
    let mut n = 5i32;
    while n < 42 {
        tail += (4.0 / n as f64) * w.powi(-n).re * tp;
        tp *= t * t;
        n += 2;
    }
    let term2 = 3.0 * a.powi(3) / (8.0 * PI * PI * r.powi(3)) * tail / t.powi(4);
    (term1 + term2) * r
}

/// On-axis slope of the radial current: j_r(r -> 0) = kappa0(t) r exactly.
fn j3d_axis_slope(t: f64, a: f64) -> f64 {
    let v = t / a;
    -16.0 * v / (PI * PI * (1.0 + v * v).powi(4)) / a.powi(4)
}

/// Radial current of the spherical massless packet.
pub fn massless_3d_current(r: f64, t: f64, a: f64) -> Result<f64> {
    check_width(a)?;
    if r < 0.0 {
        return Err(SalpeterError::InvalidArgument(
            "radius must be nonnegative".into(),
        ));
    }
    let sgn = specfun::sign(t);
    let tt = t.abs();
    let u = r / a;
    let v = tt / a;
    let val = if u < 1e-14 || v < 1e-14 {
        0.0
    } else if u < 1e-6 {
        j3d_axis_slope(tt, a) * r
    } else if v < 0.05 {
        j3d_small_t(r, tt, a)
    } else if u < 0.45 {
        j3d_small_r(r, tt, a)
    } else if v < 0.35 {
        j3d_small_t(r, tt, a)
    } else {
        j3d_direct(r, tt, a)
    };
    // the two-term bracket above evaluates the inward component; positive
    // j_r means outward flow, which is what the continuity equation and the
    // spreading of the density require
    Ok(-sgn * val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inverse_transform, make_grid, MomentumWaveFunction, RadialGrid};
    use crate::observables::{current_spectral_at, mean_position};

    #[test]
    fn lorentzian_point_values() {
        assert!((lorentzian_massless_density(0.0, 0.0, 1.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!((lorentzian_massless_density(0.0, 1.0, 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        let psi00 = lorentzian_massless_psi(0.0, 0.0, 1.0).unwrap();
        assert!((psi00.re - (2.0 / PI).sqrt()).abs() < 1e-15 && psi00.im == 0.0);
        for (x, t) in [(0.3, 0.7), (-2.0, 1.5), (4.0, 3.0)] {
            let d = lorentzian_massless_psi(x, t, 1.0).unwrap().norm_sqr();
            assert!((d - lorentzian_massless_density(x, t, 1.0).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn mover_structure() {
        assert!((mover_density(1.0, 1.0, 1.0, MoverSign::Plus).unwrap() - 1.0 / PI).abs() < 1e-15);
        for (x, t) in [(0.0, 0.0), (1.2, 0.4), (-3.0, 2.0)] {
            for s in [MoverSign::Plus, MoverSign::Minus] {
                let d = mover_psi(x, t, 1.0, s).unwrap().norm_sqr();
                assert!((d - mover_density(x, t, 1.0, s).unwrap()).abs() < 1e-14);
                let j = mover_current(x, t, 1.0, s).unwrap();
                assert!((j - s.as_f64() * d).abs() < 1e-14);
            }
            let sum = (mover_psi(x, t, 1.0, MoverSign::Plus).unwrap()
                + mover_psi(x, t, 1.0, MoverSign::Minus).unwrap())
                / 2.0f64.sqrt();
            let full = lorentzian_massless_psi(x, t, 1.0).unwrap();
            assert!((sum - full).norm() < 1e-14, "mover sum mismatch at ({x}, {t})");
        }
    }

    #[test]
    fn lorentzian_current_symmetries_and_limits() {
        assert_eq!(lorentzian_massless_current(1.3, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(lorentzian_massless_current(1.3, 1e-9, 1.0).unwrap(), 0.0);
        for (x, t) in [(0.5, 1.0), (2.0, 0.3), (1.0, 3.0)] {
            let j = lorentzian_massless_current(x, t, 1.0).unwrap();
            let jm = lorentzian_massless_current(-x, t, 1.0).unwrap();
            let jt = lorentzian_massless_current(x, -t, 1.0).unwrap();
            assert!((j + jm).abs() < 1e-14, "spatial antisymmetry");
            assert!((j + jt).abs() < 1e-14, "temporal antisymmetry");
        }
        // continuity of the small-t cutoff
        let j = lorentzian_massless_current(1.0, 2e-6, 1.0).unwrap();
        assert!(j.abs() < 1e-5);
    }

    #[test]
    fn lorentzian_current_matches_bilinear_form() {
        let g = make_grid(4096, 400.0, -200.0).unwrap();
        let k = PhysicalConstants::natural(0.0);
        let a = 1.0f64;
        let t = 1.0;
        let phi = MomentumWaveFunction::from_fn(&g, t, |p| {
            a.sqrt() * (-(Complex64::new(a, t)) * p.abs()).exp()
        });
        let xs = [0.5, 1.0, 2.0, -3.0];
        let js = current_spectral_at(&phi, &k, &xs);
        for (&x, &jn) in xs.iter().zip(&js) {
            let je = lorentzian_massless_current(x, t, a).unwrap();
            assert!((jn - je).abs() < 1e-4, "x={x}: numeric {jn} closed {je}");
        }
    }

    #[test]
    fn periodized_density_matches_image_sum() {
        let (a, l) = (1.0, 40.0);
        let n_images = 2000;
        for x in [0.0, 3.7, -12.0, 19.9] {
            let closed = periodized_lorentzian_density(x, a, l).unwrap();
            let mut s = 0.0;
            for n in -n_images..=n_images {
                let xn = x + n as f64 * l;
                s += a / PI / (xn * xn + a * a);
            }
            // midpoint estimate of the truncated 1/x^2 tails
            s += 2.0 * a / (PI * l * l) / (n_images as f64 + 0.5);
            assert!((closed - s).abs() < 1e-10, "image sum mismatch at x={x}");
        }
        // integrates to one over one period
        let n = 20000;
        let dx = l / n as f64;
        let total: f64 = (0..n)
            .map(|i| periodized_lorentzian_density(-l / 2.0 + i as f64 * dx, a, l).unwrap())
            .sum::<f64>()
            * dx;
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn massive_packet_position_form_matches_transform() {
        let g = make_grid(4096, 400.0, -200.0).unwrap();
        let k = PhysicalConstants::natural(0.5);
        let a = 1.0;
        for t in [1.0, 2.0] {
            let phi = MomentumWaveFunction::from_fn(&g, t, |p| {
                massive_packet_momentum(p, t, a, &k).unwrap()
            });
            assert!((phi.norm() - 1.0).abs() < 1e-10, "momentum norm at t={t}");
            let psi = inverse_transform(&phi);
            let mut worst = 0.0f64;
            let mut idxs: Vec<usize> = (0..g.len()).step_by(256).collect();
            idxs.push(g.len() / 2);
            idxs.push(g.len() / 2 + 5);
            for i in idxs {
                let closed = massive_packet_psi(g.x(i), t, a, &k).unwrap();
                worst = worst.max((psi.samples[i] - closed).norm());
            }
            assert!(worst < 1e-8, "t={t}: transform gap {worst}");
        }
    }

    #[test]
    fn massive_packet_current_matches_bilinear_form() {
        let g = make_grid(4096, 400.0, -200.0).unwrap();
        let k = PhysicalConstants::natural(0.5);
        let (a, t) = (1.0, 1.0);
        let phi = MomentumWaveFunction::from_fn(&g, t, |p| {
            massive_packet_momentum(p, t, a, &k).unwrap()
        });
        let xs = [0.5, 1.0, 2.0, 5.0];
        let js = current_spectral_at(&phi, &k, &xs);
        for (&x, &jn) in xs.iter().zip(&js) {
            let je = massive_packet_current(x, t, a, &k).unwrap();
            assert!((jn - je).abs() < 1e-6, "x={x}: numeric {jn} closed {je}");
        }
        assert_eq!(massive_packet_current(0.0, t, a, &k).unwrap(), 0.0);

        let pts = [-2.0, 5.0, 0.5, -0.25, 3.0];
        let prof = massive_packet_current_profile(&pts, t, a, &k).unwrap();
        for (&x, &jp) in pts.iter().zip(&prof) {
            let jd = massive_packet_current(x, t, a, &k).unwrap();
            assert!((jp - jd).abs() < 1e-10, "profile mismatch at x={x}");
        }
    }

    #[test]
    fn massive_packet_rejects_bad_arguments() {
        let k0 = PhysicalConstants::natural(0.0);
        assert!(massive_packet_psi(0.0, 0.0, 1.0, &k0).is_err());
        let ku = PhysicalConstants { hbar: 2.0, c: 1.0, m: 1.0 };
        assert!(massive_packet_psi(0.0, 0.0, 1.0, &ku).is_err());
        let k = PhysicalConstants::natural(1.0);
        assert!(massive_packet_psi(0.0, 0.0, -1.0, &k).is_err());
    }

    #[test]
    fn linear_potential_position_form_matches_transform() {
        let g = make_grid(4096, 800.0, -400.0).unwrap();
        for (lambda, tol) in [(1.0, 1e-9), (2.0, 1e-8)] {
            let mu = 1.0;
            for t in [0.0, 1.0] {
                let phi = MomentumWaveFunction::from_fn(&g, t, |p| {
                    linear_potential_momentum(p, t, lambda, mu).unwrap()
                });
                let psi = inverse_transform(&phi);
                let mut worst = 0.0f64;
                for i in (0..g.len()).step_by(16) {
                    let x = g.x(i);
                    if x.abs() > 20.0 {
                        continue;
                    }
                    let closed = linear_potential_psi(x, t, lambda, mu).unwrap();
                    worst = worst.max((psi.samples[i] - closed).norm());
                }
                assert!(worst < tol, "lambda={lambda} t={t}: gap {worst}");
            }
        }
    }

    #[test]
    fn linear_potential_moments() {
        let v = linear_potential_mean_x(0.0, 1.0, 1.0).unwrap();
        assert!((v + 1.0 / PI.sqrt()).abs() < 1e-14);
        let v5 = linear_potential_mean_x(5.0, 1.0, 1.0).unwrap();
        assert!((v5 + 5.0).abs() < 1e-10, "late-time drift {v5}");
        assert_eq!(linear_potential_mean_v(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert!((linear_potential_mean_v(10.0, 1.0, 1.0).unwrap() + 1.0).abs() < 1e-12);
        // the mean position is even in t, and the mean velocity is its
        // derivative
        let t = 0.7;
        let s = linear_potential_mean_x(t, 2.0, 1.0).unwrap()
            - linear_potential_mean_x(-t, 2.0, 1.0).unwrap();
        assert!(s.abs() < 1e-14);
        let h = 1e-5;
        let dxdt = (linear_potential_mean_x(t + h, 2.0, 1.0).unwrap()
            - linear_potential_mean_x(t - h, 2.0, 1.0).unwrap())
            / (2.0 * h);
        assert!((dxdt - linear_potential_mean_v(t, 2.0, 1.0).unwrap()).abs() < 1e-9);

        // against the grid first moment of the transform
        let g = make_grid(4096, 800.0, -400.0).unwrap();
        for t in [0.0, 1.0, 3.0] {
            let phi = MomentumWaveFunction::from_fn(&g, t, |p| {
                linear_potential_momentum(p, t, 1.0, 1.0).unwrap()
            });
            let psi = inverse_transform(&phi);
            let numeric = mean_position(&psi);
            let closed = linear_potential_mean_x(t, 1.0, 1.0).unwrap();
            assert!((numeric - closed).abs() < 1e-6, "t={t}: {numeric} vs {closed}");
        }
    }

    #[test]
    fn classical_trajectory_turning_point() {
        let x = |t: f64| classical_linear_trajectory(t, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(x(0.0), 0.0);
        assert!((x(0.5) - 0.5).abs() < 1e-15);
        assert!((x(1.0) - 1.0).abs() < 1e-15);
        assert!((x(2.0) - 0.0).abs() < 1e-15);
        assert!((x(4.0) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn plane_wave_three_four_five() {
        let k = PhysicalConstants::natural(4.0);
        let c = Complex64::new(1.0, 0.0);
        let j = plane_wave_current(3.0, c, &k).unwrap();
        assert!((j - 0.6).abs() < 1e-15);
        let psi = plane_wave(2.0, 1.0, 3.0, c, &k).unwrap();
        assert!((psi - Complex64::from_polar(1.0, 3.0 * 2.0 - 5.0)).norm() < 1e-14);
        assert_eq!(
            plane_wave_current(0.0, c, &PhysicalConstants::natural(0.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn spherical_packet_point_values_and_norm() {
        assert!(
            (massless_3d_density(0.0, 0.0, 1.0).unwrap() - 8.0 / (PI * PI)).abs() < 1e-14
        );
        for (r, t) in [(0.5, 0.0), (1.0, 2.0), (3.0, 1.0)] {
            let d = massless_3d_psi(r, t, 1.0).unwrap().norm_sqr();
            assert!((d - massless_3d_density(r, t, 1.0).unwrap()).abs() < 1e-13);
        }
        let rg = RadialGrid::new(4000, 120.0).unwrap();
        for t in [0.0, 1.0, 3.0] {
            let vals: Vec<f64> = rg
                .nodes()
                .iter()
                .map(|&r| massless_3d_density(r, t, 1.0).unwrap())
                .collect();
            let total = rg.integrate(&vals);
            assert!((total - 1.0).abs() < 1e-8, "3d norm at t={t}: {total}");
        }
    }

    #[test]
    fn spherical_current_branches_agree_on_overlaps() {
        // reorganized forms against the plain one where both are stable
        for t in [0.5, 1.0, 3.0] {
            for r in [0.2, 0.3, 0.4] {
                let a = j3d_small_r(r, t, 1.0);
                let b = j3d_direct(r, t, 1.0);
                assert!((a - b).abs() < 1e-10 * b.abs().max(1e-3), "small-r overlap r={r} t={t}");
            }
        }
        for r in [0.6, 1.0, 3.0] {
            for t in [0.2, 0.3] {
                let a = j3d_small_t(r, t, 1.0);
                let b = j3d_direct(r, t, 1.0);
                assert!((a - b).abs() < 1e-10 * b.abs().max(1e-3), "small-t overlap r={r} t={t}");
            }
        }
        // on-axis slope against the reorganized small-r form
        for t in [0.5, 1.0, 2.0] {
            let r = 1e-6;
            let a = j3d_axis_slope(t, 1.0) * r;
            let b = j3d_small_r(r, t, 1.0);
            assert!(
                (a - b).abs() < 1e-8 * a.abs(),
                "axis slope mismatch at t={t}: {a} vs {b}"
            );
        }
        // branch seams are continuous; compare slopes j/r, which vary only
        // at second order across the tiny straddle
        for (lo, hi, t) in [(0.99e-6, 1.01e-6, 1.0), (0.4499, 0.4501, 1.0)] {
            let a = massless_3d_current(lo, t, 1.0).unwrap() / lo;
            let b = massless_3d_current(hi, t, 1.0).unwrap() / hi;
            assert!((a - b).abs() < 1e-3 * a.abs(), "seam near r={lo}: {a} vs {b}");
        }
        for (tlo, thi) in [(0.0499, 0.0501), (0.3499, 0.3501)] {
            let a = massless_3d_current(1.0, tlo, 1.0).unwrap() / tlo;
            let b = massless_3d_current(1.0, thi, 1.0).unwrap() / thi;
            assert!((a - b).abs() < 1e-3 * a.abs(), "seam near t={tlo}: {a} vs {b}");
        }
    }

    #[test]
    fn spherical_current_symmetries_and_scaling() {
        for (r, t) in [(0.7, 1.3), (2.0, 0.4), (0.1, 1.0)] {
            let j = massless_3d_current(r, t, 1.0).unwrap();
            let jt = massless_3d_current(r, -t, 1.0).unwrap();
            assert!((j + jt).abs() < 1e-15, "time oddness");
            // scale covariance j(sr, st; sa) = j(r, t; a)/s^3
            let s = 2.5;
            let js = massless_3d_current(s * r, s * t, s).unwrap();
            assert!((js - j / s.powi(3)).abs() < 1e-12 * j.abs().max(1e-12));
        }
        assert_eq!(massless_3d_current(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(massless_3d_current(0.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn spherical_continuity() {
        // d rho / dt + (1/r^2) d(r^2 j_r)/dr = 0, checked with central
        // differences across every branch of the current
        for (r, t) in [(0.2, 1.0), (1.0, 1.0), (2.0, 0.2), (0.5, 3.0), (3.0, 2.0), (0.01, 0.5)] {
            // the stencil error in the flux divergence grows like h^2/r^2,
            // so shrink h with r
            let h = 1e-4 * (r / 0.1f64).min(1.0).max(0.1);
            let drho = (massless_3d_density(r, t + h, 1.0).unwrap()
                - massless_3d_density(r, t - h, 1.0).unwrap())
                / (2.0 * h);
            let f = |rr: f64| rr * rr * massless_3d_current(rr, t, 1.0).unwrap();
            let div = (f(r + h) - f(r - h)) / (2.0 * h) / (r * r);
            let scale = drho.abs().max(1e-3);
            assert!(
                (drho + div).abs() < 1e-5 * scale.max(1.0),
                "continuity residual {} at (r={r}, t={t})",
                drho + div
            );
        }
    }
}
