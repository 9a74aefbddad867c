//! Special functions and quadrature primitives used by the channel
//! statistics and outage analysis.

mod bessel;
mod marcum;
mod quad;

pub use bessel::{bessel_i0, bessel_i0_ln, bessel_i1, bessel_i1_ln};
pub use marcum::marcum_q1;
pub use quad::{integrate, integrate_semi_infinite, QuadratureSpec, TailTruncation};
