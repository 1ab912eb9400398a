//! Checks every row of the special-function fixture table against the
//! implementations. The table was generated with an independent
//! arbitrary-precision library.

use num_complex::Complex64;
use salpeter::specfun;

const FIXTURE: &str = include_str!("fixtures/specfun_oracle.csv");
const REL_TOL: f64 = 1e-11;

#[test]
fn fixture_table() {
    let mut rows = 0usize;
    let mut worst = 0.0f64;
    let mut worst_row = String::new();
    for line in FIXTURE.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 6, "malformed fixture row: {line}");
        let nu: u32 = f[1].parse().unwrap();
        let z = Complex64::new(f[2].parse().unwrap(), f[3].parse().unwrap());
        let want = Complex64::new(f[4].parse().unwrap(), f[5].parse().unwrap());
        let got = match f[0] {
            "bessel_k" if z.im == 0.0 => {
                Complex64::new(specfun::bessel_k_real(nu, z.re).unwrap(), 0.0)
            }
            "bessel_k" => specfun::bessel_k(nu, z).unwrap(),
            "erfc" => specfun::erfc_complex(z).unwrap(),
            "erf" => Complex64::new(specfun::erf_real(z.re), 0.0),
            other => panic!("unknown fixture kind {other}"),
        };
        let rel = (got - want).norm() / want.norm().max(f64::MIN_POSITIVE);
        if rel > worst {
            worst = rel;
            worst_row = line.to_string();
        }
        assert!(
            rel <= REL_TOL,
            "row failed at relative error {rel:.3e}: {line}"
        );
        rows += 1;
    }
    assert!(rows > 300, "fixture unexpectedly small: {rows} rows");
    println!("{rows} rows checked, worst relative error {worst:.3e} ({worst_row})");
}
