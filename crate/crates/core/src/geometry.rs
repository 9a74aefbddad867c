//! Boresight geometry for a single rotatable antenna at the origin.
//!
//! The steerable direction is parameterized by an adjustment factor `alpha`
//! along the line from the eavesdropper position through the user position:
//! `q_a(alpha) = q_e + alpha (q_b - q_e)`. `alpha = 1` points straight at the
//! user; `alpha_max` makes the boresight orthogonal to the eavesdropper
//! direction, which zeroes the eavesdropper's effective antenna gain.

use crate::error::{Error, Result};

/// Norms below this are treated as zero when normalizing.
pub const UNIT_TOL: f64 = 1e-12;

/// Terminal separation angles with sine below this are treated as collinear.
pub const COLLINEAR_SIN_TOL: f64 = 1e-10;

/// 3D position (meters) or unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Point in the x-z plane at distance `d` and elevation `angle` radians
    /// above the x-axis.
    pub fn xz_polar(d: f64, angle: f64) -> Self {
        Self::new(d * angle.cos(), 0.0, d * angle.sin())
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn unit(self) -> Result<Vec3> {
        let n = self.norm();
        if n < UNIT_TOL {
            return Err(Error::DegenerateGeometry("cannot normalize a zero vector"));
        }
        Ok(Vec3::new(self.x / n, self.y / n, self.z / n))
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl std::fmt::Display for Vec3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Zenith/azimuth pair steering the antenna.
///
/// `theta_z` in `[0, pi]` is measured from the z-axis; `theta_a` in
/// `(-pi, pi]` is the angle of the x-y projection from the x-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflectionAngles {
    pub theta_z: f64,
    pub theta_a: f64,
}

impl DeflectionAngles {
    /// Angles of a unit direction. The azimuth uses the two-argument
    /// arctangent so directions with negative x land in the correct quadrant.
    pub fn from_direction(dir: Vec3) -> Self {
        let theta_z = dir.z.clamp(-1.0, 1.0).acos();
        let mut theta_a = dir.y.atan2(dir.x);
        if theta_a <= -std::f64::consts::PI {
            theta_a = std::f64::consts::PI;
        }
        Self { theta_z, theta_a }
    }

    /// Unit direction for this angle pair.
    pub fn direction(&self) -> Vec3 {
        let (sz, cz) = self.theta_z.sin_cos();
        let (sa, ca) = self.theta_a.sin_cos();
        Vec3::new(sz * ca, sz * sa, cz)
    }
}

/// Which terminal of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    User,
    Eavesdropper,
}

/// Boresight state at a given adjustment factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boresight {
    pub alpha: f64,
    /// Unit vector parallel to `q_e + alpha (q_b - q_e)`.
    pub direction: Vec3,
    pub angles: DeflectionAngles,
}

/// Non-urgent conditions detected while validating a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioWarning {
    /// `q_b . q_e < 0`: every boresight with `alpha >= 1` points away from the
    /// eavesdropper, so its effective gain clamps to zero for the whole
    /// adjustment range and `alpha_max < 1`.
    EavesdropperBehindBoresightFamily,
}

/// Full parameterization of one secure link.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// User position, meters.
    pub q_b: Vec3,
    /// Eavesdropper position, meters.
    pub q_e: Vec3,
    /// Linear channel power gain at 1 m reference distance.
    pub zeta_0: f64,
    /// Path-loss exponent toward the user.
    pub beta_b: f64,
    /// Path-loss exponent toward the eavesdropper.
    pub beta_e: f64,
    /// Rician K-factor of the user link (linear).
    pub k_b: f64,
    /// Rician K-factor of the eavesdropper link (linear).
    pub k_e: f64,
    /// Peak boresight gain (linear).
    pub g_0: f64,
    /// Carrier wavelength, meters.
    pub lambda: f64,
    /// Noise power, dBm.
    pub sigma2_dbm: f64,
    /// Transmit power, dBm.
    pub p_dbm: f64,
}

impl Default for Scenario {
    /// Reference 2.4 GHz desk-scale link: user 50 m away at 60 deg elevation,
    /// eavesdropper 70 m away at 30 deg, both in the x-z plane.
    fn default() -> Self {
        Scenario {
            q_b: Vec3::xz_polar(50.0, 60f64.to_radians()),
            q_e: Vec3::xz_polar(70.0, 30f64.to_radians()),
            zeta_0: 1e-3,
            beta_b: 3.0,
            beta_e: 3.0,
            k_b: 1.0,
            k_e: 1.0,
            g_0: 4.0,
            lambda: 0.125,
            sigma2_dbm: -60.0,
            p_dbm: 16.0,
        }
    }
}

impl Scenario {
    /// Linear transmit SNR `10^((P - sigma^2)/10)`; the dBm-to-watt factors
    /// cancel in the ratio.
    pub fn snr(&self) -> f64 {
        10f64.powf((self.p_dbm - self.sigma2_dbm) / 10.0)
    }

    pub fn position(&self, end: End) -> Vec3 {
        match end {
            End::User => self.q_b,
            End::Eavesdropper => self.q_e,
        }
    }

    /// Check all scenario invariants. Returns the warnings for conditions
    /// that are representable but outside the geometry the optimizers assume.
    pub fn validate(&self) -> Result<Vec<ScenarioWarning>> {
        if self.q_b.norm() < UNIT_TOL {
            return Err(Error::DegenerateGeometry("user position is at the array"));
        }
        if self.q_e.norm() < UNIT_TOL {
            return Err(Error::DegenerateGeometry(
                "eavesdropper position is at the array",
            ));
        }
        for (name, v) in [
            ("zeta_0", self.zeta_0),
            ("g_0", self.g_0),
            ("lambda", self.lambda),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Validation(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [("beta_b", self.beta_b), ("beta_e", self.beta_e)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!(
                    "{name} must be a finite nonnegative path-loss exponent, got {v}"
                )));
            }
        }
        for (name, v) in [("k_b", self.k_b), ("k_e", self.k_e)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!(
                    "{name} must be a finite nonnegative Rician factor, got {v}"
                )));
            }
        }
        let snr = self.snr();
        if !snr.is_finite() || snr <= 0.0 {
            return Err(Error::Validation(format!(
                "derived SNR must be finite and > 0, got {snr}"
            )));
        }
        let denom = self.q_e.norm_sq() - self.q_b.dot(self.q_e);
        if denom <= 0.0 {
            return Err(Error::AlphaMaxUndefined(denom));
        }
        let mut warnings = Vec::new();
        if self.q_b.dot(self.q_e) < 0.0 {
            warnings.push(ScenarioWarning::EavesdropperBehindBoresightFamily);
        }
        Ok(warnings)
    }
}

/// Boresight for a given adjustment factor: unit direction of
/// `q_e + alpha (q_b - q_e)` plus its deflection angles.
pub fn boresight_from_alpha(s: &Scenario, alpha: f64) -> Result<Boresight> {
    debug_assert!(alpha >= 1.0, "adjustment factor below 1: {alpha}");
    let raw = s.q_e + (s.q_b - s.q_e) * alpha;
    let direction = raw.unit()?;
    Ok(Boresight {
        alpha,
        direction,
        angles: DeflectionAngles::from_direction(direction),
    })
}

/// Largest useful adjustment factor: `|q_e|^2 / (|q_e|^2 - q_b.q_e)`, the
/// alpha at which the boresight is orthogonal to the eavesdropper direction.
pub fn alpha_max(s: &Scenario) -> Result<f64> {
    let ne2 = s.q_e.norm_sq();
    let denom = ne2 - s.q_b.dot(s.q_e);
    if denom <= 0.0 {
        return Err(Error::AlphaMaxUndefined(denom));
    }
    Ok(ne2 / denom)
}

/// Cosine of the angle between two nonzero vectors, clamped into `[-1, 1]`.
pub fn cos_epsilon(direction: Vec3, q: Vec3) -> Result<f64> {
    let nd = direction.norm();
    let nq = q.norm();
    if nd < UNIT_TOL || nq < UNIT_TOL {
        return Err(Error::DegenerateGeometry(
            "zero vector in angle computation",
        ));
    }
    Ok((direction.dot(q) / (nd * nq)).clamp(-1.0, 1.0))
}

/// Effective antenna gain toward `q`: `g0 cos(eps)` within the forward
/// hemisphere, zero behind it.
pub fn effective_gain(direction: Vec3, q: Vec3, g0: f64) -> Result<f64> {
    let c = cos_epsilon(direction, q)?;
    Ok(if c > 0.0 { g0 * c } else { 0.0 })
}

/// Boresight cosine toward one terminal at adjustment factor `alpha`.
///
/// This is the reciprocal of the channel model's gain-shaping factor, so the
/// average channel power gain toward terminal `i` is `L_i G_0 phi_inv`.
pub fn phi_inv(s: &Scenario, alpha: f64, end: End) -> Result<f64> {
    let b = boresight_from_alpha(s, alpha)?;
    cos_epsilon(b.direction, s.position(end))
}

/// Angle at the array between the user and eavesdropper directions, `[0, pi]`.
pub fn angle_bae(s: &Scenario) -> Result<f64> {
    let nb = s.q_b.norm();
    let ne = s.q_e.norm();
    if nb < UNIT_TOL || ne < UNIT_TOL {
        return Err(Error::DegenerateGeometry("terminal at the array"));
    }
    // atan2 of (|cross|, dot) is accurate for both tiny and near-pi angles.
    Ok(s.q_b.cross(s.q_e).norm().atan2(s.q_b.dot(s.q_e)))
}

/// Sine of the terminal separation angle, computed from the cross product so
/// near-collinear placements resolve well below machine-epsilon-of-cosine.
pub fn sin_bae(s: &Scenario) -> Result<f64> {
    let nb = s.q_b.norm();
    let ne = s.q_e.norm();
    if nb < UNIT_TOL || ne < UNIT_TOL {
        return Err(Error::DegenerateGeometry("terminal at the array"));
    }
    Ok(s.q_b.cross(s.q_e).norm() / (nb * ne))
}
