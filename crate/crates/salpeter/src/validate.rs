//! Acceptance suite: twelve named checks covering the closed-form oracles,
//! operator-route equivalence, continuity, the velocity bound, series
//! limits, special-function fixtures, and figure-data markers.
//!
//! Two checks are known to sit above their targets because the targets
//! collide with box periodization; both report the measured floor honestly
//! instead of loosening the target (see README):
//!
//! - check 1 (free massless oracle): the grid solution is the periodization
//!   of the free-space packet, and the x^-2 tails of the Lorentzian
//!   contribute wrap-around images of order 1e-4 on the pinned 400-length
//!   box, far above the 1e-6 target;
//! - check 5 (linear potential, split-step part): the gap to the
//!   characteristics solution is the same periodization effect, about
//!   4.3 / L^2, and the step-size guard dt max|V| / hbar < 0.5 caps the box
//!   at L < 1000 for dt = 1e-3, so the floor is about 4.7e-6 against the
//!   1e-6 target.

use num_complex::Complex64;

use crate::cli::figures::figure_data;
use crate::error::Result;
use crate::evolve::{evolve_free, evolve_linear_potential, evolve_splitstep};
use crate::exact;
use crate::grid::{
    forward_transform, inverse_transform, make_grid, MomentumWaveFunction, RadialGrid,
    WaveFunction,
};
use crate::hamiltonian::{
    apply_sqrt_kernel, apply_sqrt_spectral, PhysicalConstants, PotentialSpec,
};
use crate::observables::{
    continuity_residual, continuity_residual_states, current_gradient_scale, current_series,
    current_spectral_1d, density, mean_position, mean_velocity, split_movers, total_current,
};
use crate::specfun;

const PI: f64 = std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    /// worst measured-over-tolerance ratio across the check's parts
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Accumulates named sub-measurements, each against its own tolerance.
struct Parts {
    worst: f64,
    detail: Vec<String>,
}

impl Parts {
    fn new() -> Parts {
        Parts {
            worst: 0.0,
            detail: Vec::new(),
        }
    }

    fn add(&mut self, label: &str, value: f64, tol: f64) {
        let ratio = if value.is_finite() {
            value / tol
        } else {
            f64::INFINITY
        };
        self.worst = self.worst.max(ratio);
        self.detail
            .push(format!("{label} = {value:.3e} (tol {tol:.1e})"));
    }

    fn note(&mut self, text: String) {
        self.detail.push(text);
    }

    fn result(self, name: &'static str) -> CheckResult {
        CheckResult {
            name,
            measured: self.worst,
            tolerance: 1.0,
            passed: self.worst.is_finite() && self.worst <= 1.0,
            detail: self.detail.join("; "),
        }
    }
}

pub fn run_suite(suite: Suite) -> ValidationReport {
    let fast = suite == Suite::Fast;
    type CheckFn = fn(bool) -> Result<CheckResult>;
    let checks: [(&'static str, CheckFn); 12] = [
        ("free_massless_oracle", check_free_massless_oracle),
        ("massless_current_oracle", check_massless_current_oracle),
        ("mover_identities", check_mover_identities),
        ("massive_oracle", check_massive_oracle),
        ("linear_potential", check_linear_potential),
        ("operator_route_equivalence", check_route_equivalence),
        ("continuity", check_continuity),
        ("velocity_bound", check_velocity_bound),
        ("series_limits", check_series_limits),
        ("spherical_closed_forms", check_spherical_closed_forms),
        ("special_function_oracles", check_specfun_oracles),
        ("figure_markers", check_figure_markers),
    ];
    let checks = checks
        .into_iter()
        .map(|(name, f)| match f(fast) {
            Ok(c) => c,
            Err(e) => CheckResult {
                name,
                measured: f64::NAN,
                tolerance: 1.0,
                passed: false,
                detail: format!("check aborted: {e}"),
            },
        })
        .collect();
    ValidationReport { suite, checks }
}

fn lorentzian_states(
    times: &[f64],
) -> Result<(Vec<MomentumWaveFunction>, std::sync::Arc<crate::grid::Grid1D>)> {
    let g = make_grid(4096, 400.0, -200.0)?;
    let psi0 = WaveFunction::from_fn(&g, 0.0, |x| {
        exact::lorentzian_massless_psi(x, 0.0, 1.0).expect("fixed width")
    });
    let phi0 = forward_transform(&psi0);
    let k = PhysicalConstants::natural(0.0);
    Ok((
        times.iter().map(|&t| evolve_free(&phi0, t, &k)).collect(),
        g,
    ))
}

fn check_free_massless_oracle(_fast: bool) -> Result<CheckResult> {
    let times = [1.0, 2.0, 3.0];
    let (states, g) = lorentzian_states(&times)?;
    let l = g.box_length();
    let mut parts = Parts::new();
    for (phi_t, &t) in states.iter().zip(&times) {
        let psi_t = inverse_transform(phi_t);
        let mut wf_err = 0.0f64;
        let mut rho_err = 0.0f64;
        let mut image_size = 0.0f64;
        for i in 0..g.len() {
            let x = g.x(i);
            let closed = exact::lorentzian_massless_psi(x, t, 1.0)?;
            wf_err = wf_err.max((psi_t.samples[i] - closed).norm());
            rho_err = rho_err
                .max((psi_t.samples[i].norm_sqr() - exact::lorentzian_massless_density(x, t, 1.0)?).abs());
            image_size = image_size.max(
                exact::lorentzian_massless_psi(x - l, t, 1.0)?.norm()
                    + exact::lorentzian_massless_psi(x + l, t, 1.0)?.norm(),
            );
        }
        parts.add(&format!("wavefunction Linf t={t}"), wf_err, 1e-6);
        parts.add(&format!("density Linf t={t}"), rho_err, 1e-6);
        parts.note(format!("periodic-image bound at t={t}: {image_size:.3e}"));
    }
    Ok(parts.result("free_massless_oracle"))
}

fn check_massless_current_oracle(fast: bool) -> Result<CheckResult> {
    let times: &[f64] = if fast { &[1.0] } else { &[1.0, 2.0, 3.0] };
    let (states, g) = lorentzian_states(times)?;
    let k = PhysicalConstants::natural(0.0);
    let mut parts = Parts::new();
    let i0 = g.index_of(0.0);
    for (phi_t, &t) in states.iter().zip(times) {
        let j = current_spectral_1d(phi_t, &k);
        let mut err = 0.0f64;
        for i in 0..g.len() {
            err = err.max((j.values[i] - exact::lorentzian_massless_current(g.x(i), t, 1.0)?).abs());
        }
        parts.add(&format!("current Linf t={t}"), err, 1e-4);
        parts.add(&format!("j(0, t={t})"), j.values[i0].abs(), 1e-10);
    }
    let (t0_state, _) = lorentzian_states(&[0.0])?;
    let j0 = current_spectral_1d(&t0_state[0], &k);
    let max0 = j0.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    parts.add("max |j(x, 0)|", max0, 1e-10);
    Ok(parts.result("massless_current_oracle"))
}

fn check_mover_identities(_fast: bool) -> Result<CheckResult> {
    let g = make_grid(2048, 400.0, -200.0)?;
    let k = PhysicalConstants::natural(0.0);
    let phi = MomentumWaveFunction::from_fn(&g, 0.0, |p| {
        Complex64::new((-(p - 3.0) * (p - 3.0)).exp() + (-(p + 3.0) * (p + 3.0)).exp(), 0.0)
    })
    .normalize()?;
    let (plus, minus) = split_movers(&phi);
    let mut parts = Parts::new();
    for (label, part, sign) in [("plus", plus, 1.0), ("minus", minus, -1.0)] {
        let part = part.normalize()?;
        let at = |t: f64| evolve_free(&part, t, &k);
        let phi1 = at(1.0);
        let j = current_spectral_1d(&phi1, &k);
        let rho = density(&inverse_transform(&phi1));
        let gap = j
            .values
            .iter()
            .zip(&rho)
            .map(|(a, b)| (a - sign * b).abs())
            .fold(0.0f64, f64::max);
        parts.add(&format!("{label}: max |j -+ c rho|"), gap, 1e-10);
        let x0 = mean_position(&inverse_transform(&at(0.0)));
        let x1 = mean_position(&inverse_transform(&phi1));
        parts.add(
            &format!("{label}: |mean x(1) - mean x(0) -+ c|"),
            (x1 - x0 - sign).abs(),
            1e-6,
        );
    }
    Ok(parts.result("mover_identities"))
}

fn check_massive_oracle(fast: bool) -> Result<CheckResult> {
    let g = make_grid(4096, 400.0, -200.0)?;
    let k = PhysicalConstants::natural(0.5);
    let a = 1.0;
    let phi0 = MomentumWaveFunction::from_fn(&g, 0.0, |p| {
        exact::massive_packet_momentum(p, 0.0, a, &k).expect("fixed parameters")
    });
    let times: &[f64] = if fast { &[1.0] } else { &[1.0, 2.0] };
    let mut parts = Parts::new();
    for &t in times {
        let phi_t = evolve_free(&phi0, t, &k);
        let psi_t = inverse_transform(&phi_t);
        let mut wf_err = 0.0f64;
        for i in 0..g.len() {
            wf_err = wf_err.max((psi_t.samples[i] - exact::massive_packet_psi(g.x(i), t, a, &k)?).norm());
        }
        parts.add(&format!("wavefunction Linf t={t}"), wf_err, 1e-5);

        let j = current_spectral_1d(&phi_t, &k);
        let stride = if fast { 512 } else { 128 };
        let idxs: Vec<usize> = (0..g.len()).step_by(stride).collect();
        let xs: Vec<f64> = idxs.iter().map(|&i| g.x(i)).collect();
        let j_exact = exact::massive_packet_current_profile(&xs, t, a, &k)?;
        let gap = idxs
            .iter()
            .zip(&j_exact)
            .map(|(&i, &je)| (j.values[i] - je).abs())
            .fold(0.0f64, f64::max);
        parts.add(&format!("current gap t={t}"), gap, 1e-3);
    }
    Ok(parts.result("massive_oracle"))
}

fn check_linear_potential(_fast: bool) -> Result<CheckResult> {
    let k = PhysicalConstants::natural(0.0);
    let (lambda, mu) = (1.0, 1.0);
    let chi = move |q: f64| {
        Complex64::new(
            (lambda / (mu * PI)).powf(0.25) * (-lambda * q * q / (2.0 * mu)).exp(),
            0.0,
        )
    };
    let mut parts = Parts::new();

    // split-step against characteristics; the box is the largest that keeps
    // dt max|V| under the step-size guard, and the gap floor is the box
    // periodization of the packet's power-law tails, about 4.3 / L^2
    let g = make_grid(16384, 960.0, -480.0)?;
    let phi_char0 = evolve_linear_potential(&chi, &g, 0.0, mu, &k)?;
    let psi0 = inverse_transform(&phi_char0);
    let run = evolve_splitstep(&psi0, &PotentialSpec::Linear(mu), 1e-3, 1000, &k)?;
    let phi_char1 = evolve_linear_potential(&chi, &g, 1.0, mu, &k)?;
    let psi_char1 = inverse_transform(&phi_char1);
    let gap_sq: f64 = run
        .state
        .samples
        .iter()
        .zip(&psi_char1.samples)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    parts.add("split-step L2 gap at t=1", (gap_sq * g.dx()).sqrt(), 1e-6);

    let g2 = make_grid(4096, 800.0, -400.0)?;
    for t in [0.5, 1.0, 2.0] {
        let phi = evolve_linear_potential(&chi, &g2, t, mu, &k)?;
        let xm = mean_position(&inverse_transform(&phi));
        parts.add(
            &format!("mean x gap t={t}"),
            (xm - exact::linear_potential_mean_x(t, lambda, mu)?).abs(),
            1e-6,
        );
        let v = mean_velocity(&phi, &k);
        parts.add(&format!("|mean v| t={t}"), v.abs(), 1.0);
        parts.note(format!(
            "mean v t={t}: numeric {v:.9}, closed {:.9}",
            exact::linear_potential_mean_v(t, lambda, mu)?
        ));
    }
    let phi5 = evolve_linear_potential(&chi, &g2, 5.0, mu, &k)?;
    let xm5 = mean_position(&inverse_transform(&phi5));
    parts.add("|mean x(5) + 5|", (xm5 + 5.0).abs(), 1e-6);
    parts.add("|mean v(5)|", mean_velocity(&phi5, &k).abs(), 1.0);
    Ok(parts.result("linear_potential"))
}

fn route_error(n: usize, m: f64, lorentzian: bool) -> Result<f64> {
    let g = make_grid(n, 100.0, -50.0)?;
    let k = PhysicalConstants::natural(m);
    let psi = if lorentzian {
        WaveFunction::from_fn(&g, 0.0, |x| {
            exact::lorentzian_massless_psi(x, 0.0, 1.0).expect("fixed width")
        })
    } else {
        WaveFunction::from_fn(&g, 0.0, |x| Complex64::new((-x * x / 2.0).exp(), 0.0))
    };
    let spectral = apply_sqrt_spectral(&psi, &k);
    let kernel = apply_sqrt_kernel(&psi, &k)?;
    let num: f64 = kernel
        .samples
        .iter()
        .zip(&spectral.samples)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = spectral.samples.iter().map(|v| v.norm_sqr()).sum();
    Ok((num / den).sqrt())
}

fn check_route_equivalence(_fast: bool) -> Result<CheckResult> {
    let mut parts = Parts::new();
    for (label, m, lorentzian) in [("massless Lorentzian", 0.0, true), ("massive Gaussian", 1.0, false)] {
        let errs: Vec<f64> = [1024usize, 2048, 4096]
            .iter()
            .map(|&n| route_error(n, m, lorentzian))
            .collect::<Result<_>>()?;
        parts.add(&format!("{label}: rel L2 at n=4096"), errs[2], 1e-3);
        for w in 0..2 {
            let ratio = errs[w] / errs[w + 1];
            // first-order convergence means the error at least halves per
            // doubling; require most of that
            parts.add(&format!("{label}: 1.8 / doubling ratio {w}"), 1.8 / ratio, 1.0);
        }
        let shown: Vec<String> = errs.iter().map(|e| format!("{e:.3e}")).collect();
        parts.note(format!("{label}: errors {}", shown.join(" -> ")));
    }
    Ok(parts.result("operator_route_equivalence"))
}

fn scaled_residual(resid: &[f64], j: &crate::observables::CurrentField, g: &crate::grid::Grid1D) -> f64 {
    let scale = current_gradient_scale(j, g).max(1e-300);
    resid.iter().fold(0.0f64, |m, &v| m.max(v.abs())) / scale
}

fn check_continuity(_fast: bool) -> Result<CheckResult> {
    let dt = 1e-4;
    let mut parts = Parts::new();

    let (states, g) = lorentzian_states(&[1.0])?;
    let k0 = PhysicalConstants::natural(0.0);
    let resid = continuity_residual(&states[0], &k0, dt);
    let j = current_spectral_1d(&states[0], &k0);
    parts.add("massless packet (scaled)", scaled_residual(&resid, &j, &g), 1e-4);

    let km = PhysicalConstants::natural(0.5);
    let phi_m = MomentumWaveFunction::from_fn(&g, 0.0, |p| {
        exact::massive_packet_momentum(p, 0.0, 1.0, &km).expect("fixed parameters")
    });
    let phi_m1 = evolve_free(&phi_m, 1.0, &km);
    let resid = continuity_residual(&phi_m1, &km, dt);
    let j = current_spectral_1d(&phi_m1, &km);
    parts.add("massive packet (scaled)", scaled_residual(&resid, &j, &g), 1e-4);

    let (lambda, mu) = (1.0, 1.0);
    let chi = move |q: f64| {
        Complex64::new(
            (lambda / (mu * PI)).powf(0.25) * (-lambda * q * q / (2.0 * mu)).exp(),
            0.0,
        )
    };
    let gl = make_grid(4096, 800.0, -400.0)?;
    let center = evolve_linear_potential(&chi, &gl, 1.0, mu, &k0)?;
    let pm = evolve_linear_potential(&chi, &gl, 1.0 - dt, mu, &k0)?;
    let pp = evolve_linear_potential(&chi, &gl, 1.0 + dt, mu, &k0)?;
    let resid = continuity_residual_states(&pm, &center, &pp, &k0, dt);
    let j = current_spectral_1d(&center, &k0);
    parts.add("linear potential (scaled)", scaled_residual(&resid, &j, &gl), 1e-4);

    // exactly translating states; the matched shifts cancel the time
    // truncation, so the raw residual is roundoff over 2 dt and a larger
    // step is more accurate
    let dt_raw = 1e-3;
    let gs = make_grid(512, 100.0, -50.0)?;
    let pk = gs.momenta()[7];
    let plane = forward_transform(
        &WaveFunction::from_fn(&gs, 0.0, |x| Complex64::from_polar(1.0, pk * x))
            .normalize()?,
    );
    let worst = continuity_residual(&plane, &k0, dt_raw)
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    parts.add("plane wave (raw)", worst, 1e-12);
    let mover = MomentumWaveFunction::from_fn(&gs, 0.0, |p| {
        Complex64::new((-4.0 * (p - 3.0) * (p - 3.0)).exp(), 0.0)
    })
    .normalize()?;
    let worst = continuity_residual(&mover, &k0, dt_raw)
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    parts.add("pure mover (raw)", worst, 1e-12);
    Ok(parts.result("continuity"))
}

fn check_velocity_bound(fast: bool) -> Result<CheckResult> {
    let g = make_grid(256, 80.0, -40.0)?;
    let n_states = if fast { 50 } else { 200 };
    let mut seed = 0x3e1f_77aa_10c5_9b2du64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut parts = Parts::new();
    let mut worst_excess = 0.0f64;
    let mut worst_sum_rule = 0.0f64;
    for m in [0.0, 0.5, 2.0] {
        let k = PhysicalConstants::natural(m);
        for _ in 0..n_states {
            let phi = MomentumWaveFunction {
                grid: g.clone(),
                samples: (0..g.len()).map(|_| Complex64::new(next(), next())).collect(),
                time_tag: 0.0,
            }
            .normalize()?;
            let v = mean_velocity(&phi, &k);
            worst_excess = worst_excess.max(v.abs() - 1.0);
            let j = current_spectral_1d(&phi, &k);
            worst_sum_rule = worst_sum_rule.max((total_current(&j, g.dx()) - v).abs());
        }
    }
    parts.add("max(|mean v| - c)", worst_excess.max(0.0), 1e-12);
    parts.add("max |total current - mean v|", worst_sum_rule, 1e-8);
    parts.note(format!("{n_states} states per mass, m in {{0, 0.5, 2}}"));
    Ok(parts.result("velocity_bound"))
}

fn check_series_limits(_fast: bool) -> Result<CheckResult> {
    let mut parts = Parts::new();

    let g = make_grid(512, 100.0, -50.0)?;
    let k = PhysicalConstants::natural(1.0);
    let psi = WaveFunction::from_fn(&g, 0.0, |x| {
        Complex64::from_polar((-x * x / 4.0).exp(), 0.3 * x)
    });
    let j1 = current_series(&psi, &k, 1)?;
    let mut phi = forward_transform(&psi);
    let base = phi.samples.clone();
    for ((v, &b), &p) in phi.samples.iter_mut().zip(&base).zip(g.momenta()) {
        *v = b * Complex64::new(0.0, p);
    }
    let dpsi = inverse_transform(&phi);
    let gap = (0..g.len())
        .map(|i| (j1.values[i] - (psi.samples[i].conj() * dpsi.samples[i]).im).abs())
        .fold(0.0f64, f64::max);
    parts.add("order 1 vs nonrelativistic current", gap, 1e-12);

    let gb = make_grid(2048, 1200.0, -600.0)?;
    let phi = MomentumWaveFunction::from_fn(&gb, 0.0, |p| {
        Complex64::new((-(p - 0.15) * (p - 0.15) / (2.0 * 0.05 * 0.05)).exp(), 0.0)
    })
    .normalize()?;
    let psi = inverse_transform(&phi);
    let j4 = current_series(&psi, &k, 4)?;
    let js = current_spectral_1d(&phi, &k);
    let gap = j4
        .values
        .iter()
        .zip(&js.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    parts.add("order 4 vs spectral, band-limited packet", gap, 1e-8);
    Ok(parts.result("series_limits"))
}

fn check_spherical_closed_forms(fast: bool) -> Result<CheckResult> {
    let mut parts = Parts::new();
    let rg = RadialGrid::new(4000, 120.0)?;
    for t in [0.0, 1.0, 3.0] {
        let vals: Vec<f64> = rg
            .nodes()
            .iter()
            .map(|&r| exact::massless_3d_density(r, t, 1.0))
            .collect::<Result<_>>()?;
        parts.add(&format!("|norm - 1| at t={t}"), (rg.integrate(&vals) - 1.0).abs(), 1e-8);
    }

    let n_lat = if fast { 8 } else { 20 };
    let h = 1e-4;
    let mut worst = 0.0f64;
    for i in 0..n_lat {
        for j in 0..n_lat {
            let r = 0.25 + 4.75 * i as f64 / (n_lat - 1) as f64;
            let t = 0.25 + 4.75 * j as f64 / (n_lat - 1) as f64;
            let drho = (exact::massless_3d_density(r, t + h, 1.0)?
                - exact::massless_3d_density(r, t - h, 1.0)?)
                / (2.0 * h);
            let flux = |rr: f64| -> Result<f64> {
                Ok(rr * rr * exact::massless_3d_current(rr, t, 1.0)?)
            };
            let div = (flux(r + h)? - flux(r - h)?) / (2.0 * h) / (r * r);
            worst = worst.max((drho + div).abs());
        }
    }
    parts.add(
        &format!("continuity residual on {n_lat}x{n_lat} lattice"),
        worst,
        1e-6,
    );
    Ok(parts.result("spherical_closed_forms"))
}

fn check_specfun_oracles(_fast: bool) -> Result<CheckResult> {
    let fixture = include_str!("../tests/fixtures/specfun_oracle.csv");
    let mut parts = Parts::new();
    let mut worst = 0.0f64;
    let mut rows = 0usize;
    let mut failures = Vec::new();
    for line in fixture.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let nu: u32 = f[1].parse().expect("fixture order");
        let z = Complex64::new(f[2].parse().expect("fixture"), f[3].parse().expect("fixture"));
        let reference = Complex64::new(f[4].parse().expect("fixture"), f[5].parse().expect("fixture"));
        let value = match f[0] {
            "bessel_k" if z.im == 0.0 => specfun::bessel_k_real(nu, z.re).map(|v| Complex64::new(v, 0.0)),
            "bessel_k" => specfun::bessel_k(nu, z),
            "erfc" => specfun::erfc_complex(z),
            "erf" => Ok(Complex64::new(specfun::erf_real(z.re), 0.0)),
            other => panic!("unknown fixture kind {other}"),
        };
        rows += 1;
        match value {
            Ok(v) => {
                let rel = (v - reference).norm() / reference.norm().max(1e-300);
                if rel > worst {
                    worst = rel;
                }
            }
            Err(e) => failures.push(format!("{} {z}: {e}", f[0])),
        }
    }
    parts.add("worst relative error", worst, 1e-11);
    parts.add("evaluation failures", failures.len() as f64, 0.5);
    parts.note(format!("{rows} fixture rows"));
    if !failures.is_empty() {
        parts.note(failures.join("; "));
    }
    Ok(parts.result("special_function_oracles"))
}

struct Slices {
    axis: Vec<f64>,
    per_t: Vec<(f64, Vec<f64>)>,
}

fn slices(table: &crate::cli::output::Table, axis: &str, value: &str) -> Slices {
    let ax = table.column(axis).expect("axis column");
    let ts = table.column("t").expect("t column");
    let vs = table.column(value).expect("value column");
    let mut per_t: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut axis_out = Vec::new();
    for i in 0..ax.len() {
        match per_t.last_mut() {
            Some((t, col)) if *t == ts[i] => col.push(vs[i]),
            _ => per_t.push((ts[i], vec![vs[i]])),
        }
        if per_t.len() == 1 {
            axis_out.push(ax[i]);
        }
    }
    Slices {
        axis: axis_out,
        per_t,
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn local_maxima(v: &[f64]) -> Vec<usize> {
    (1..v.len() - 1)
        .filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1])
        .collect()
}

fn check_figure_markers(_fast: bool) -> Result<CheckResult> {
    let mut failed = Vec::new();
    let mut ok = 0usize;
    let mut mark = |name: &str, pass: bool| {
        if pass {
            ok += 1;
        } else {
            failed.push(name.to_string());
        }
    };

    let f1 = figure_data(1, &[])?;
    let s1 = slices(&f1, "x", "rho");
    let cell = s1.axis[1] - s1.axis[0];
    let rho00 = exact::lorentzian_massless_density(0.0, 0.0, 1.0)?;
    let global_max = s1
        .per_t
        .iter()
        .flat_map(|(_, c)| c.iter())
        .fold(0.0f64, |m, &v| m.max(v));
    mark("fig1 peak bounded by the initial peak", global_max <= rho00 * (1.0 + 1e-12));
    mark(
        "fig1 single central peak at t=0",
        s1.axis[argmax(&s1.per_t[0].1)].abs() <= cell,
    );
    let late = &s1.per_t.last().expect("slices").1;
    let peaks = local_maxima(late);
    mark(
        "fig1 peak splits toward +-ct",
        peaks.len() >= 2
            && peaks.iter().any(|&i| (s1.axis[i] - 3.0).abs() <= 3.0 * cell)
            && peaks.iter().any(|&i| (s1.axis[i] + 3.0).abs() <= 3.0 * cell),
    );

    let f2 = figure_data(2, &[])?;
    mark(
        "fig2 current data finite",
        f2.column("j").expect("j column").iter().all(|v| v.is_finite()),
    );

    let f3 = figure_data(3, &[])?;
    let s3 = slices(&f3, "x", "rho_plus");
    let cell3 = s3.axis[1] - s3.axis[0];
    mark(
        "fig3 peak moves at light speed",
        s3.per_t
            .iter()
            .all(|(t, col)| (s3.axis[argmax(col)] - t).abs() <= cell3),
    );

    let f4 = figure_data(4, &[])?;
    let s4 = slices(&f4, "x", "rho");
    let peaks4: Vec<f64> = s4
        .per_t
        .iter()
        .map(|(_, c)| c.iter().fold(0.0f64, |m, &v| m.max(v)))
        .collect();
    mark(
        "fig4 peak decays monotonically",
        peaks4.windows(2).all(|w| w[1] < w[0]),
    );

    let f5 = figure_data(5, &[])?;
    mark(
        "fig5 current data finite",
        f5.column("j").expect("j column").iter().all(|v| v.is_finite()),
    );

    let f6 = figure_data(6, &[])?;
    let s6 = slices(&f6, "x", "rho");
    let cell6 = s6.axis[1] - s6.axis[0];
    mark(
        "fig6 ridge follows the light-cone path for t >= 1",
        s6.per_t
            .iter()
            .filter(|(t, _)| *t >= 1.0)
            .all(|(t, col)| (s6.axis[argmax(col)] + t.abs()).abs() <= 1.5 * cell6),
    );

    let f7 = figure_data(7, &[])?;
    let ts = f7.column("t").expect("t column");
    let mx = f7.column("mean_x").expect("mean_x column");
    let asym = ts
        .iter()
        .zip(mx)
        .filter(|(t, _)| t.abs() >= 4.0)
        .map(|(t, x)| (x + t.abs()).abs())
        .fold(0.0f64, f64::max);
    mark("fig7 asymptote -|t|", asym <= 1e-6);

    let f8 = figure_data(8, &[])?;
    mark(
        "fig8 simulated current finite",
        f8.column("j").expect("j column").iter().all(|v| v.is_finite()),
    );

    let f9 = figure_data(9, &[])?;
    let s9 = slices(&f9, "r", "rho");
    let peaks9: Vec<f64> = s9
        .per_t
        .iter()
        .map(|(_, c)| c.iter().fold(0.0f64, |m, &v| m.max(v)))
        .collect();
    mark(
        "fig9 peak decays monotonically",
        peaks9.windows(2).all(|w| w[1] < w[0]),
    );

    let f10 = figure_data(10, &[])?;
    mark(
        "fig10 current magnitude nonnegative and finite",
        f10.column("j_norm")
            .expect("j_norm column")
            .iter()
            .all(|v| v.is_finite() && *v >= 0.0),
    );

    let detail = if failed.is_empty() {
        format!("{ok} markers checked")
    } else {
        format!("{ok} markers passed; failed: {}", failed.join(", "))
    };
    Ok(CheckResult {
        name: "figure_markers",
        measured: failed.len() as f64,
        tolerance: 0.0,
        passed: failed.is_empty(),
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_injection_is_caught() {
        // flipping the sign of the current weight breaks the mover identity
        // j = +c rho; emulate the fault by comparing against -rho
        let g = make_grid(512, 100.0, -50.0).unwrap();
        let k = PhysicalConstants::natural(0.0);
        let phi = MomentumWaveFunction::from_fn(&g, 0.0, |p| {
            Complex64::new((-(p - 2.0) * (p - 2.0)).exp(), 0.0)
        })
        .normalize()
        .unwrap();
        let j = current_spectral_1d(&phi, &k);
        let rho = density(&inverse_transform(&phi));
        let faulted_gap = j
            .values
            .iter()
            .zip(&rho)
            .map(|(a, b)| (-a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(faulted_gap > 1e-3, "sign fault must be visible");
    }

    #[test]
    fn report_shape() {
        // cheap structural checks that do not run the heavy suite
        let r = ValidationReport {
            suite: Suite::Fast,
            checks: vec![CheckResult {
                name: "x",
                measured: 0.5,
                tolerance: 1.0,
                passed: true,
                detail: String::new(),
            }],
        };
        assert!(r.passed());
    }
}
