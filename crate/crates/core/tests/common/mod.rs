//! Shared helpers for the integration suites.

// Each integration binary uses its own subset of these.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rasec::geometry::{Scenario, Vec3};

/// Random valid scenario: positions anywhere in 3D at 5-200 m, transmit
/// power -10..30 dBm, path-loss exponents 2..4, K-factors 0..8. Rejection
/// sampling keeps only scenarios the validator accepts.
pub fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    loop {
        let point = |r: &mut ChaCha8Rng| {
            let d: f64 = r.gen_range(5.0..200.0);
            let theta: f64 = r.gen_range(0.0..std::f64::consts::PI);
            let phi: f64 = r.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            Vec3::new(
                d * theta.sin() * phi.cos(),
                d * theta.sin() * phi.sin(),
                d * theta.cos(),
            )
        };
        let s = Scenario {
            q_b: point(rng),
            q_e: point(rng),
            beta_b: rng.gen_range(2.0..4.0),
            beta_e: rng.gen_range(2.0..4.0),
            k_b: rng.gen_range(0.0..8.0),
            k_e: rng.gen_range(0.0..8.0),
            p_dbm: rng.gen_range(-10.0..30.0),
            ..Scenario::default()
        };
        if s.validate().is_ok() {
            return s;
        }
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// No increase (beyond `tol`) once a decrease (beyond `tol`) has occurred.
pub fn is_quasiconcave(values: &[f64], tol: f64) -> bool {
    let mut seen_decrease = false;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d > tol && seen_decrease {
            return false;
        }
        if d < -tol {
            seen_decrease = true;
        }
    }
    true
}

/// Quasi-concave with a genuine interior maximum: the first differences show
/// exactly one strict sign change, from positive to negative.
pub fn has_interior_peak(values: &[f64], tol: f64) -> bool {
    let rises = values.windows(2).any(|w| w[1] - w[0] > tol);
    let falls = values.windows(2).any(|w| w[1] - w[0] < -tol);
    rises && falls && is_quasiconcave(values, tol)
}

/// Evenly spaced inclusive grid.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Parse the data rows of a driver CSV into per-row field vectors.
pub fn csv_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1) // column header
        .map(|l| {
            l.split(',')
                .map(|f| f.parse().expect("numeric CSV field"))
                .collect()
        })
        .collect()
}
