//! Adaptive Gauss-Kronrod quadrature on finite intervals plus a windowed
//! driver for semi-infinite domains.

use crate::error::{Error, Result};

// 15-point Kronrod nodes (positive half, descending) with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// How the semi-infinite driver decides where the integrand has died out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailTruncation {
    /// Width of the first window; subsequent windows double. Set this to the
    /// natural scale of the integrand (e.g. a distribution mean).
    pub initial_window: f64,
    /// Number of consecutive negligible windows required before truncating.
    pub quiet_windows: usize,
    /// Window budget before giving up.
    pub max_windows: usize,
}

impl Default for TailTruncation {
    fn default() -> Self {
        TailTruncation {
            initial_window: 1.0,
            quiet_windows: 2,
            max_windows: 64,
        }
    }
}

/// Tolerances and budgets for one quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub truncation: TailTruncation,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            max_subdivisions: 400,
            truncation: TailTruncation::default(),
        }
    }
}

impl QuadratureSpec {
    /// Same tolerances with the semi-infinite window scale set to `w`.
    pub fn with_window(mut self, w: f64) -> Self {
        self.truncation.initial_window = w.max(f64::MIN_POSITIVE);
        self
    }

    pub fn with_tols(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// One Gauss-Kronrod evaluation: (kronrod value, |kronrod - gauss|, max |f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut fmax = fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fmax = fmax.max(f1.abs()).max(f2.abs());
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half.abs(), fmax)
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Adaptive integral of `f` over `[a, b]` to the spec's tolerances.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_tracked(f, a, b, spec).map(|(value, _)| value)
}

fn integrate_tracked<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    debug_assert!(a < b, "inverted interval [{a}, {b}]");
    let (v, e, fm) = gk15(f, a, b);
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        err: e,
    }];
    let mut peak = fm;
    for _ in 0..spec.max_subdivisions {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok((total, peak));
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segs.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (v, e, fm) = gk15(f, lo, hi);
            peak = peak.max(fm);
            segs.push(Segment {
                a: lo,
                b: hi,
                value: v,
                err: e,
            });
        }
    }
    let total: f64 = segs.iter().map(|s| s.value).sum();
    let err: f64 = segs.iter().map(|s| s.err).sum();
    if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        Ok((total, peak))
    } else {
        Err(Error::NonConvergent("subdivision budget exhausted"))
    }
}

/// Integral of `f` over `[0, inf)` for integrands with a decaying tail.
///
/// Windows of doubling width are integrated until `quiet_windows` consecutive
/// windows both contribute negligibly and stay below `tol * peak`, where
/// `peak` is the largest integrand magnitude sampled so far.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: &F, spec: &QuadratureSpec) -> Result<f64> {
    let trunc = spec.truncation;
    let cutoff = spec.abs_tol.min(spec.rel_tol);
    let mut lo = 0.0;
    let mut width = trunc.initial_window;
    // Guard against a window scale far above the integrand's: a spike well
    // below `width` would fall between the quadrature nodes of the first
    // window. Probe geometrically toward zero and shrink the window when the
    // probe magnitude dwarfs what the window-scale samples show.
    let coarse = [width, 0.5 * width, 0.25 * width, 0.125 * width]
        .iter()
        .map(|&x| f(x).abs())
        .fold(0.0, f64::max);
    let mut probe_best = (width, 0.0f64);
    let mut x = width;
    for _ in 0..60 {
        x *= 0.5;
        if x < f64::MIN_POSITIVE * 1e10 {
            break;
        }
        let v = f(x).abs();
        if v > probe_best.1 {
            probe_best = (x, v);
        }
    }
    if probe_best.0 < 0.125 * width && probe_best.1 > 100.0 * coarse {
        width = 8.0 * probe_best.0;
    }
    let mut total = 0.0;
    let mut peak = 0.0f64;
    let mut quiet = 0;
    for k in 0..trunc.max_windows {
        let hi = lo + width;
        let (v, fmax) = integrate_tracked(f, lo, hi, spec)?;
        total += v;
        peak = peak.max(fmax);
        let negligible =
            v.abs() <= 0.25 * spec.abs_tol.max(spec.rel_tol * total.abs()) && fmax <= cutoff * peak;
        quiet = if negligible { quiet + 1 } else { 0 };
        if quiet >= trunc.quiet_windows {
            return Ok(total);
        }
        lo = hi;
        if k > 0 {
            width *= 2.0;
        }
    }
    Err(Error::NonConvergent("semi-infinite tail did not die out"))
}
