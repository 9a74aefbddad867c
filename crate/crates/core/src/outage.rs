//! Secrecy outage probability: the high-SNR closed form through the Marcum
//! Q-function, and a general Monte Carlo estimator for validation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{large_scale, LinkFading};
use crate::error::{Error, Result};
use crate::geometry::{sin_bae, End, Scenario, COLLINEAR_SIN_TOL};
use crate::specfun::marcum_q1;

const MC_BLOCK: u64 = 1 << 16;

/// One secrecy-outage measurement at a target rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopPoint {
    /// Target secrecy rate, bps/Hz.
    pub r_s: f64,
    /// Transmit power the point was evaluated at, dBm.
    pub p_dbm: f64,
    /// High-SNR closed form; undefined for collinear terminals.
    pub sop_theory: Option<f64>,
    /// Monte Carlo outage fraction.
    pub sop_mc: f64,
    /// Wilson 95% interval half-width around `sop_mc`.
    pub ci95_halfwidth: f64,
}

/// Outage threshold on the channel power, `(2^r_s - 1) / gamma`.
pub fn gamma_th(r_s: f64, gamma: f64) -> f64 {
    (2f64.powf(r_s) - 1.0) / gamma
}

/// High-SNR secrecy outage probability.
///
/// Assumes the boresight sits at the orthogonal setting, where the
/// eavesdropper is dark and the user's mean gain is `L_b G_0 sin(BAE)`. The
/// user power is then a scaled noncentral chi-square variable with two
/// degrees of freedom and noncentrality `2 K_b`, whose CDF gives
/// `SOP = 1 - Q_1(sqrt(2 K_b), sqrt(2 (1 + K_b) gamma_th / (L_b G_0 sin BAE)))`.
pub fn sop_theory(s: &Scenario, r_s: f64) -> Result<f64> {
    let sb = sin_bae(s)?;
    if sb <= COLLINEAR_SIN_TOL {
        return Err(Error::CollinearGeometry(sb));
    }
    if r_s <= 0.0 {
        return Ok(0.0);
    }
    let gth = gamma_th(r_s, s.snr());
    let mean_power = large_scale(s, End::User) * s.g_0 * sb;
    let b = (2.0 * (1.0 + s.k_b) * gth / mean_power).sqrt();
    Ok((1.0 - marcum_q1((2.0 * s.k_b).sqrt(), b)).clamp(0.0, 1.0))
}

/// Monte Carlo secrecy outage at boresight `alpha`: the fraction of joint
/// fading draws whose instantaneous secrecy capacity falls below `r_s`.
pub fn sop_mc(s: &Scenario, alpha: f64, r_s: f64, n: u64, seed: u64) -> Result<SopPoint> {
    assert!(n >= 1, "need at least one sample");
    let theory = sop_theory(s, r_s).ok();
    if r_s <= 0.0 {
        // The secrecy capacity is never negative, so outage below rate zero
        // has probability exactly zero; no draws needed.
        return Ok(SopPoint {
            r_s,
            p_dbm: s.p_dbm,
            sop_theory: theory,
            sop_mc: 0.0,
            ci95_halfwidth: wilson_halfwidth(0, n),
        });
    }
    let gamma = s.snr();
    // Cs < r_s  <=>  1 + g pb < 2^r_s (1 + g pe); the logs are monotone.
    let threshold = 2f64.powf(r_s);
    let user = LinkFading::new(s, alpha, End::User)?;
    let eve = LinkFading::new(s, alpha, End::Eavesdropper)?;
    let blocks = n.div_ceil(MC_BLOCK);
    let outages: u64 = (0..blocks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let count = MC_BLOCK.min(n - i * MC_BLOCK);
            let mut hits = 0u64;
            for _ in 0..count {
                let pb = user.sample(&mut rng);
                let pe = eve.sample(&mut rng);
                if 1.0 + gamma * pb < threshold * (1.0 + gamma * pe) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(SopPoint {
        r_s,
        p_dbm: s.p_dbm,
        sop_theory: theory,
        sop_mc: outages as f64 / n as f64,
        ci95_halfwidth: wilson_halfwidth(outages, n),
    })
}

/// Wilson-score 95% half-width for `k` successes in `n` trials.
pub fn wilson_halfwidth(k: u64, n: u64) -> f64 {
    let z = 1.959963984540054f64; // two-sided 95%
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / (1.0 + z2 / nf)
}
