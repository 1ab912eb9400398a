//! Randomized invariants of the transforms, special functions, evolution,
//! and observables.

use num_complex::Complex64;
use proptest::prelude::*;
use salpeter::evolve::evolve_free;
use salpeter::grid::{forward_transform, inverse_transform, make_grid, WaveFunction};
use salpeter::hamiltonian::PhysicalConstants;
use salpeter::observables::{current_spectral_1d, mean_velocity, split_movers, total_current};
use salpeter::specfun;

const N: usize = 128;

fn state_strategy() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), N)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn state_from(samples: Vec<Complex64>) -> WaveFunction {
    let g = make_grid(N, 40.0, -20.0).unwrap();
    WaveFunction {
        grid: g,
        samples,
        time_tag: 0.0,
    }
}

proptest! {
    #[test]
    fn parseval_equality(samples in state_strategy()) {
        let psi = state_from(samples);
        let nx = psi.norm();
        let np = forward_transform(&psi).norm();
        prop_assert!((nx - np).abs() <= 1e-12 * nx.max(1.0));
    }

    #[test]
    fn transform_linearity(s1 in state_strategy(), s2 in state_strategy(),
                           a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let psi1 = state_from(s1);
        let psi2 = state_from(s2.clone());
        let combo = state_from(
            psi1.samples.iter().zip(&s2).map(|(x, y)| a * x + b * y).collect(),
        );
        let t1 = forward_transform(&psi1);
        let t2 = forward_transform(&psi2);
        let tc = forward_transform(&combo);
        let worst = tc.samples.iter().zip(t1.samples.iter().zip(&t2.samples))
            .map(|(c, (x, y))| (c - (a * x + b * y)).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(worst <= 1e-12 * (t1.norm() + t2.norm() + 1.0));
    }

    #[test]
    fn transform_round_trip(samples in state_strategy()) {
        let psi = state_from(samples);
        let back = inverse_transform(&forward_transform(&psi));
        let worst = psi.samples.iter().zip(&back.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(worst <= 1e-13);
    }

    #[test]
    fn erfc_reflection(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let z = Complex64::new(re, im);
        let s = specfun::erfc_complex(z).unwrap() + specfun::erfc_complex(-z).unwrap();
        prop_assert!((s - 2.0).norm() <= 1e-12 * s.norm().max(1.0));
    }

    #[test]
    fn bessel_k_conjugation(nu in 0u32..3, re in 0.05f64..8.0, im in -8.0f64..8.0) {
        let z = Complex64::new(re, im);
        let a = specfun::bessel_k(nu, z.conj()).unwrap();
        let b = specfun::bessel_k(nu, z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-13 * b.norm().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn velocity_bound_and_sum_rule(samples in state_strategy(), m in 0.0f64..2.0) {
        let k = PhysicalConstants::natural(m);
        let phi = forward_transform(&state_from(samples).normalize().unwrap());
        let v = mean_velocity(&phi, &k);
        prop_assert!(v.abs() <= k.c * (1.0 + 1e-12));
        let j = current_spectral_1d(&phi, &k);
        let total = total_current(&j, phi.grid.dx());
        prop_assert!((total - v).abs() <= 1e-8);
    }

    #[test]
    fn free_evolution_composes_and_preserves_norm(
        samples in state_strategy(), m in 0.0f64..2.0,
        t1 in -3.0f64..3.0, t2 in -3.0f64..3.0,
    ) {
        let k = PhysicalConstants::natural(m);
        let phi = forward_transform(&state_from(samples).normalize().unwrap());
        let two_steps = evolve_free(&evolve_free(&phi, t1, &k), t2, &k);
        let one_step = evolve_free(&phi, t1 + t2, &k);
        let worst = two_steps.samples.iter().zip(&one_step.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(worst <= 1e-13);
        prop_assert!((one_step.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn time_reversal_of_real_data(samples in state_strategy(), m in 0.0f64..2.0,
                                  t in 0.0f64..3.0) {
        let real_state = state_from(
            samples.into_iter().map(|z| Complex64::new(z.re, 0.0)).collect(),
        );
        let k = PhysicalConstants::natural(m);
        let phi = forward_transform(&real_state);
        let fwd = inverse_transform(&evolve_free(&phi, t, &k));
        let bwd = inverse_transform(&evolve_free(&phi, -t, &k));
        let worst = fwd.samples.iter().zip(&bwd.samples)
            .map(|(a, b)| (a - b.conj()).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(worst <= 1e-12 * real_state.norm().max(1.0));
    }

    #[test]
    fn mover_split_recombines(samples in state_strategy()) {
        let phi = forward_transform(&state_from(samples));
        let (plus, minus) = split_movers(&phi);
        let momenta = phi.grid.momenta().to_vec();
        let worst = (0..phi.grid.len())
            .map(|i| {
                let sum = plus.samples[i] + minus.samples[i];
                // the p=0 node carries 1/sqrt(2) in each half, so the halves
                // recombine to sqrt(2) of the original there
                let want = if momenta[i] == 0.0 {
                    std::f64::consts::SQRT_2 * phi.samples[i]
                } else {
                    phi.samples[i]
                };
                (sum - want).norm()
            })
            .fold(0.0f64, f64::max);
        prop_assert!(worst <= 1e-13);
    }
}
