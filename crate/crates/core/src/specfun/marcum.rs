//! First-order Marcum Q-function.

use super::bessel::bessel_i0_ln;
use super::quad::{integrate, QuadratureSpec};

/// `Q_1(a, b) = int_b^inf t exp(-(t^2 + a^2)/2) I_0(at) dt`, in `[0, 1]`.
///
/// Evaluated from the defining integral with adaptive quadrature; the
/// integrand is computed in log space so large `a t` never overflows. The
/// integrand is a bump near `t = a` of unit width, so truncating twelve
/// widths past `max(a, b)` leaves mass below 1e-30.
pub fn marcum_q1(a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    if b == 0.0 {
        return 1.0;
    }
    if a == 0.0 {
        return (-0.5 * b * b).exp();
    }
    let upper = a.max(b) + 12.0;
    let f = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        t * (-0.5 * (t * t + a * a) + bessel_i0_ln(a * t)).exp()
    };
    let spec = QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_subdivisions: 400,
        ..QuadratureSpec::default()
    };
    let v = integrate(&f, b, upper, &spec).unwrap_or_else(|_| {
        // Tolerance-starved fall-back: one coarser pass is still far below
        // the 1e-10 contract.
        integrate(&f, b, upper, &QuadratureSpec::default()).unwrap_or(f64::NAN)
    });
    v.clamp(0.0, 1.0)
}
