//! Rician flat-fading channel model.
//!
//! Each link's channel is `h = sqrt(L G) u` with deterministic large-scale
//! gain `L`, boresight-dependent antenna gain `G`, and unit-power Rician
//! small-scale fading `u`. The channel power `|h|^2` is then a scaled
//! noncentral chi-square variable with two degrees of freedom.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{boresight_from_alpha, effective_gain, phi_inv, End, Scenario};
use crate::specfun::{bessel_i0, bessel_i0_ln};

/// Boresight cosines at or below this are treated as a dark link: the channel
/// power is a point mass at zero and the density of `|h|^2` is undefined.
pub const POINT_MASS_TOL: f64 = 1e-12;

/// `I_0` arguments above this are evaluated in log space to avoid overflow.
const I0_LOG_SWITCH: f64 = 30.0;

/// Deterministic fading constants of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    /// Large-scale gain `zeta_0 |q|^-beta` (linear).
    pub large_scale: f64,
    /// Rician K-factor (linear).
    pub rician_k: f64,
    /// `(1 + K) / (L G_0)`, the rate constant of the power density.
    pub eta: f64,
    /// Deterministic phase of the direct path, `-2 pi |q| / lambda` radians.
    pub los_phase: f64,
}

/// Large-scale gain toward one terminal: `zeta_0 |q|^-beta`.
pub fn large_scale(s: &Scenario, end: End) -> f64 {
    let (q, beta) = match end {
        End::User => (s.q_b, s.beta_b),
        End::Eavesdropper => (s.q_e, s.beta_e),
    };
    s.zeta_0 * q.norm().powf(-beta)
}

pub fn fading_params(s: &Scenario, end: End) -> FadingParams {
    let l = large_scale(s, end);
    let k = match end {
        End::User => s.k_b,
        End::Eavesdropper => s.k_e,
    };
    FadingParams {
        large_scale: l,
        rician_k: k,
        eta: (1.0 + k) / (l * s.g_0),
        los_phase: -2.0 * std::f64::consts::PI * s.position(end).norm() / s.lambda,
    }
}

/// One joint draw of both links' channel powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample {
    pub power_b: f64,
    pub power_e: f64,
}

/// Precomputed per-link sampler for `|h|^2` at a fixed boresight.
///
/// Each draw consumes exactly two standard normals from the generator, so
/// streams stay aligned across boresight settings and a zero-gain link still
/// advances the generator identically.
#[derive(Debug, Clone, Copy)]
pub struct LinkFading {
    /// `L * G(alpha)`; zero when the terminal is outside the forward
    /// hemisphere, making every sample exactly zero.
    gain: f64,
    los_re: f64,
    los_im: f64,
    nlos_std: f64,
}

impl LinkFading {
    pub fn new(s: &Scenario, alpha: f64, end: End) -> Result<Self> {
        let b = boresight_from_alpha(s, alpha)?;
        let g = effective_gain(b.direction, s.position(end), s.g_0)?;
        let p = fading_params(s, end);
        let los_amp = (p.rician_k / (p.rician_k + 1.0)).sqrt();
        Ok(LinkFading {
            gain: p.large_scale * g,
            los_re: los_amp * p.los_phase.cos(),
            los_im: los_amp * p.los_phase.sin(),
            nlos_std: (0.5 / (p.rician_k + 1.0)).sqrt(),
        })
    }

    /// Mean channel power `L G_0 max(phi_inv, 0)`.
    pub fn mean_power(&self) -> f64 {
        self.gain
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let n1: f64 = rng.sample(StandardNormal);
        let n2: f64 = rng.sample(StandardNormal);
        let re = self.los_re + self.nlos_std * n1;
        let im = self.los_im + self.nlos_std * n2;
        self.gain * (re * re + im * im)
    }
}

/// One draw of `|h|^2` toward `end` at adjustment factor `alpha`.
pub fn sample_channel_power<R: Rng + ?Sized>(
    rng: &mut R,
    s: &Scenario,
    alpha: f64,
    end: End,
) -> Result<f64> {
    Ok(LinkFading::new(s, alpha, end)?.sample(rng))
}

/// One joint draw of both links (user drawn first).
pub fn sample_joint<R: Rng + ?Sized>(
    rng: &mut R,
    s: &Scenario,
    alpha: f64,
) -> Result<ChannelSample> {
    let b = LinkFading::new(s, alpha, End::User)?;
    let e = LinkFading::new(s, alpha, End::Eavesdropper)?;
    Ok(ChannelSample {
        power_b: b.sample(rng),
        power_e: e.sample(rng),
    })
}

/// Density of `|h|^2` at `x`:
/// `eta Phi e^-K exp(-eta Phi x) I_0(2 sqrt(K eta Phi x))`
/// with `Phi` the reciprocal boresight cosine toward `end`.
pub fn pdf_channel_power(x: f64, s: &Scenario, alpha: f64, end: End) -> Result<f64> {
    let c = phi_inv(s, alpha, end)?;
    if c <= POINT_MASS_TOL {
        return Err(Error::DegenerateDensity(c));
    }
    let p = fading_params(s, end);
    Ok(power_density(x, p.eta / c, p.rician_k))
}

/// Scaled noncentral chi-square density with rate `eta_phi` and K-factor `k`.
pub(crate) fn power_density(x: f64, eta_phi: f64, k: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let arg = 2.0 * (k * eta_phi * x).sqrt();
    if arg > I0_LOG_SWITCH {
        eta_phi * (-k - eta_phi * x + bessel_i0_ln(arg)).exp()
    } else {
        eta_phi * (-k - eta_phi * x).exp() * bessel_i0(arg)
    }
}

/// Instantaneous secrecy capacity `[log2(1 + g pb) - log2(1 + g pe)]^+`.
#[inline]
pub fn instant_secrecy_capacity(pb: f64, pe: f64, gamma: f64) -> f64 {
    (((gamma * pb).ln_1p() - (gamma * pe).ln_1p()) / std::f64::consts::LN_2).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{alpha_max, Vec3};
    use crate::specfun::{integrate_semi_infinite, QuadratureSpec};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn large_scale_reference_values() {
        let s = Scenario::default();
        assert_relative_eq!(large_scale(&s, End::User), 8e-9, max_relative = 1e-12);
        assert_relative_eq!(
            large_scale(&s, End::Eavesdropper),
            2.915451895043732e-9,
            max_relative = 1e-12
        );
        let unit = Scenario {
            q_b: Vec3::new(0.6, 0.0, 0.8),
            ..Scenario::default()
        };
        assert_relative_eq!(
            large_scale(&unit, End::User),
            unit.zeta_0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn eta_ties_back_to_mean_power() {
        let s = Scenario::default();
        for end in [End::User, End::Eavesdropper] {
            let p = fading_params(&s, end);
            assert_relative_eq!(
                p.eta * p.large_scale * s.g_0,
                1.0 + p.rician_k,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn pure_los_limit() {
        let s = Scenario {
            k_b: 1e12,
            ..Scenario::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let link = LinkFading::new(&s, 1.0, End::User).unwrap();
        let expected = large_scale(&s, End::User) * s.g_0; // boresight cosine 1 at alpha = 1
        for _ in 0..100 {
            let p = link.sample(&mut rng);
            assert_relative_eq!(p, expected, max_relative = 1e-4);
        }
    }

    #[test]
    fn zero_gain_sample_is_exactly_zero() {
        // Orthogonal integer geometry: alpha_max = 1 exactly and the
        // eavesdropper cosine cancels exactly, so the gain clamp yields 0.0.
        let s = Scenario {
            q_b: Vec3::new(1.0, 0.0, 0.0),
            q_e: Vec3::new(0.0, 1.0, 0.0),
            ..Scenario::default()
        };
        assert_eq!(alpha_max(&s).unwrap(), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let p = sample_channel_power(&mut rng, &s, 1.0, End::Eavesdropper).unwrap();
            assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn empirical_mean_matches_average_power() {
        let s = Scenario::default();
        let alpha = 1.7;
        let n = 1_000_000u64;
        let link = LinkFading::new(&s, alpha, End::User).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for _ in 0..n {
            let p = link.sample(&mut rng);
            sum += p;
            sumsq += p * p;
        }
        let mean = sum / n as f64;
        let var = (sumsq - sum * sum / n as f64) / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        let expected = large_scale(&s, End::User) * s.g_0 * phi_inv(&s, alpha, End::User).unwrap();
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "mean {mean} vs expected {expected} (3 SE = {})",
            3.0 * se
        );
    }

    #[test]
    fn density_normalizes_and_reproduces_mean() {
        let s = Scenario::default();
        for (alpha, end) in [(1.3, End::User), (2.0, End::Eavesdropper), (1.0, End::User)] {
            let mean = large_scale(&s, end) * s.g_0 * phi_inv(&s, alpha, end).unwrap();
            let spec = QuadratureSpec::default()
                .with_tols(1e-10, 1e-10)
                .with_window(mean);
            let mass =
                integrate_semi_infinite(&|x| pdf_channel_power(x, &s, alpha, end).unwrap(), &spec)
                    .unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "mass {mass}");
            let m1 = integrate_semi_infinite(
                &|x| x * pdf_channel_power(x, &s, alpha, end).unwrap(),
                &spec,
            )
            .unwrap();
            assert_relative_eq!(m1, mean, max_relative = 1e-8);
        }
    }

    #[test]
    fn rayleigh_limit_is_exponential() {
        let s = Scenario {
            k_b: 0.0,
            ..Scenario::default()
        };
        let alpha = 1.5;
        let c = phi_inv(&s, alpha, End::User).unwrap();
        let eta_phi = fading_params(&s, End::User).eta / c;
        for i in 1..20 {
            let x = i as f64 * 0.2 / eta_phi;
            let expected = eta_phi * (-eta_phi * x).exp();
            assert_relative_eq!(
                pdf_channel_power(x, &s, alpha, End::User).unwrap(),
                expected,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn density_degenerate_when_link_dark() {
        let s = Scenario {
            q_b: Vec3::new(1.0, 0.0, 0.0),
            q_e: Vec3::new(0.0, 1.0, 0.0),
            ..Scenario::default()
        };
        assert!(matches!(
            pdf_channel_power(1e-9, &s, 1.0, End::Eavesdropper),
            Err(Error::DegenerateDensity(_))
        ));
    }

    #[test]
    fn secrecy_capacity_clamps() {
        assert_eq!(instant_secrecy_capacity(1e-9, 1e-9, 1e8), 0.0);
        assert_relative_eq!(instant_secrecy_capacity(1.0, 0.0, 1.0), 1.0);
        assert_eq!(instant_secrecy_capacity(1e-9, 5e-9, 1e8), 0.0);
    }

    #[test]
    fn identical_seeds_reproduce_streams() {
        let s = Scenario::default();
        let mut r1 = ChaCha8Rng::seed_from_u64(99);
        let mut r2 = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let a = sample_joint(&mut r1, &s, 1.4).unwrap();
            let b = sample_joint(&mut r2, &s, 1.4).unwrap();
            assert_eq!(a, b);
        }
    }
}
