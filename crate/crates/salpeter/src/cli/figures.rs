//! Lattice data behind the ten reference plots. Each figure is emitted as
//! long-format columns with a metadata header describing the quantity,
//! parameters, and units; no rendering happens here.

use num_complex::Complex64;

use crate::cli::output::Table;
use crate::error::{Result, SalpeterError};
use crate::evolve::evolve_linear_potential;
use crate::exact;
use crate::grid::make_grid;
use crate::hamiltonian::PhysicalConstants;
use crate::observables::current_spectral_1d;

pub const FIGURE_COUNT: usize = 10;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

struct FigureParams {
    a: f64,
    m: f64,
    lambda: f64,
    mu: f64,
}

impl FigureParams {
    fn new(n: usize, overrides: &[(String, f64)]) -> Result<FigureParams> {
        let mut p = FigureParams {
            a: 1.0,
            m: if (4..=5).contains(&n) { 0.5 } else { 0.0 },
            lambda: 1.0,
            mu: 1.0,
        };
        for (key, value) in overrides {
            match key.as_str() {
                "a" => p.a = *value,
                "m" => p.m = *value,
                "lambda" => p.lambda = *value,
                "mu" => p.mu = *value,
                other => {
                    return Err(SalpeterError::InvalidArgument(format!(
                        "unknown figure parameter '{other}' (expected a, m, lambda, mu)"
                    )))
                }
            }
        }
        Ok(p)
    }
}

fn lattice_table(
    meta: Vec<(String, String)>,
    axis_name: &str,
    axis: &[f64],
    times: &[f64],
    value_name: &str,
    mut value: impl FnMut(f64, f64) -> Result<f64>,
) -> Result<Table> {
    let mut col_axis = Vec::with_capacity(axis.len() * times.len());
    let mut col_t = Vec::with_capacity(axis.len() * times.len());
    let mut col_v = Vec::with_capacity(axis.len() * times.len());
    for &t in times {
        for &x in axis {
            col_axis.push(x);
            col_t.push(t);
            col_v.push(value(x, t)?);
        }
    }
    Ok(Table {
        meta,
        columns: vec![
            (axis_name.to_string(), col_axis),
            ("t".to_string(), col_t),
            (value_name.to_string(), col_v),
        ],
    })
}

fn base_meta(n: usize, quantity: &str, params: &[(&str, f64)]) -> Vec<(String, String)> {
    let mut meta = vec![
        ("figure".to_string(), n.to_string()),
        ("quantity".to_string(), quantity.to_string()),
        (
            "units".to_string(),
            "natural (hbar = c = 1), lengths in meters".to_string(),
        ),
    ];
    for (k, v) in params {
        meta.push((k.to_string(), format!("{v}")));
    }
    meta
}

/// Data behind reference plot n (1 through 10).
pub fn figure_data(n: usize, overrides: &[(String, f64)]) -> Result<Table> {
    if !(1..=FIGURE_COUNT).contains(&n) {
        return Err(SalpeterError::FigureOutOfRange(n));
    }
    let p = FigureParams::new(n, overrides)?;
    match n {
        1 => lattice_table(
            base_meta(1, "probability density of the free massless Lorentzian packet", &[("a", p.a)]),
            "x",
            &linspace(-10.0, 10.0, 401),
            &[0.0, 1.0, 2.0, 3.0],
            "rho",
            |x, t| exact::lorentzian_massless_density(x, t, p.a),
        ),
        2 => lattice_table(
            base_meta(2, "probability current of the free massless Lorentzian packet", &[("a", p.a)]),
            "x",
            &linspace(-10.0, 10.0, 401),
            &[1.0, 2.0, 3.0],
            "j",
            |x, t| exact::lorentzian_massless_current(x, t, p.a),
        ),
        3 => lattice_table(
            base_meta(3, "density of the right-moving half of the massless packet", &[("a", p.a)]),
            "x",
            &linspace(-4.0, 10.0, 281),
            &[0.0, 2.0, 4.0, 6.0],
            "rho_plus",
            |x, t| exact::mover_density(x, t, p.a, exact::MoverSign::Plus),
        ),
        4 => {
            let k = PhysicalConstants::natural(p.m);
            lattice_table(
                base_meta(4, "probability density of the free massive Bessel packet", &[("a", p.a), ("m", p.m)]),
                "x",
                &linspace(-10.0, 10.0, 401),
                &[0.0, 1.0, 2.0, 3.0],
                "rho",
                |x, t| Ok(exact::massive_packet_psi(x, t, p.a, &k)?.norm_sqr()),
            )
        }
        5 => {
            let k = PhysicalConstants::natural(p.m);
            lattice_table(
                base_meta(5, "probability current of the free massive Bessel packet", &[("a", p.a), ("m", p.m)]),
                "x",
                &linspace(-10.0, 10.0, 201),
                &[1.0, 2.0],
                "j",
                |x, t| exact::massive_packet_current(x, t, p.a, &k),
            )
        }
        6 => lattice_table(
            base_meta(6, "probability density of the massless packet in the linear potential", &[("lambda", p.lambda), ("mu", p.mu)]),
            "x",
            &linspace(-8.0, 2.0, 201),
            &linspace(0.0, 4.0, 21),
            "rho",
            |x, t| Ok(exact::linear_potential_psi(x, t, p.lambda, p.mu)?.norm_sqr()),
        ),
        7 => {
            let ts = linspace(-5.0, 5.0, 201);
            let mut mean_x = Vec::with_capacity(ts.len());
            let mut classical = Vec::with_capacity(ts.len());
            for &t in &ts {
                mean_x.push(exact::linear_potential_mean_x(t, p.lambda, p.mu)?);
                classical.push(-t.abs());
            }
            Ok(Table {
                meta: base_meta(7, "mean position in the linear potential and the classical light-cone path", &[("lambda", p.lambda), ("mu", p.mu)]),
                columns: vec![
                    ("t".to_string(), ts),
                    ("mean_x".to_string(), mean_x),
                    ("classical".to_string(), classical),
                ],
            })
        }
        8 => {
            // simulated current: characteristics evolution plus the
            // momentum-space bilinear, restricted to the plot window
            let g = make_grid(2048, 200.0, -100.0)?;
            let k = PhysicalConstants::natural(0.0);
            let (lambda, mu) = (p.lambda, p.mu);
            let chi = move |q: f64| {
                Complex64::new(
                    (lambda / (mu * std::f64::consts::PI)).powf(0.25)
                        * (-lambda * q * q / (2.0 * mu)).exp(),
                    0.0,
                )
            };
            let mut col_x = Vec::new();
            let mut col_t = Vec::new();
            let mut col_j = Vec::new();
            for &t in &[0.5, 1.0, 2.0] {
                let phi = evolve_linear_potential(&chi, &g, t, mu, &k)?;
                let j = current_spectral_1d(&phi, &k);
                for i in 0..g.len() {
                    let x = g.x(i);
                    if x.abs() <= 10.0 {
                        col_x.push(x);
                        col_t.push(t);
                        col_j.push(j.values[i]);
                    }
                }
            }
            Ok(Table {
                meta: base_meta(8, "simulated probability current of the massless packet in the linear potential", &[("lambda", p.lambda), ("mu", p.mu)]),
                columns: vec![
                    ("x".to_string(), col_x),
                    ("t".to_string(), col_t),
                    ("j".to_string(), col_j),
                ],
            })
        }
        9 => lattice_table(
            base_meta(9, "probability density of the spherical massless packet", &[("a", p.a)]),
            "r",
            &linspace(0.0, 6.0, 241),
            &[0.0, 1.0, 2.0, 3.0],
            "rho",
            |r, t| exact::massless_3d_density(r, t, p.a),
        ),
        10 => lattice_table(
            base_meta(10, "magnitude of the radial current of the spherical massless packet", &[("a", p.a)]),
            "r",
            &linspace(0.0, 6.0, 241),
            &[1.0, 2.0, 3.0],
            "j_norm",
            |r, t| Ok(exact::massless_3d_current(r, t, p.a)?.abs()),
        ),
        _ => unreachable!(),
    }
}
