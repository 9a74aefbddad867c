//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series below the crossover, large-argument asymptotic expansion
//! `e^x / sqrt(2 pi x) * (1 + c_1/x + ...)` above it. Both are exposed in
//! linear and log form; the log forms never overflow.

/// Argument above which the asymptotic expansion is used.
const SERIES_CUTOFF: f64 = 15.0;

const MAX_TERMS: usize = 200;

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        term *= q / ((k * k) as f64);
        sum += term;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    sum
}

fn i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        term *= q / ((k * (k + 1)) as f64);
        sum += term;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    0.5 * x * sum
}

/// Correction series of the large-x expansion for order `nu` (0 or 1).
/// Summed until the terms stop shrinking, which bounds the truncation error
/// by the first omitted term.
fn asymptotic_correction(nu: u8, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu) * f64::from(nu);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let odd = 2.0 * kf + 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * x * (kf + 1.0));
        if next.abs() >= term.abs() && k > 0 {
            break;
        }
        sum += next;
        term = next;
        if term.abs() < f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

fn asymptotic_ln(nu: u8, x: f64) -> f64 {
    x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + asymptotic_correction(nu, x).ln()
}

/// `I_0(x)` for `x >= 0`.
pub fn bessel_i0(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_CUTOFF {
        i0_series(x)
    } else {
        bessel_i0_ln(x).exp()
    }
}

/// `ln I_0(x)` for `x >= 0`; finite for every finite argument.
pub fn bessel_i0_ln(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_CUTOFF {
        i0_series(x).ln()
    } else {
        asymptotic_ln(0, x)
    }
}

/// `I_1(x)` for `x >= 0`.
pub fn bessel_i1(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_CUTOFF {
        i1_series(x)
    } else {
        bessel_i1_ln(x).exp()
    }
}

/// `ln I_1(x)` for `x > 0` (`-inf` at zero).
pub fn bessel_i1_ln(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_CUTOFF {
        i1_series(x).ln()
    } else {
        asymptotic_ln(1, x)
    }
}
