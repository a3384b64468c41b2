//! Problem instances, strategies and the per-round darting geometry.
//!
//! An instance is stored by its half arc distance `alpha` on the unit disk;
//! the reference distance `rho = 1 / sin(alpha)` is always derived from it.
//! A round of a `k`-step strategy consists of a random `beta`-darting to one
//! of the two candidate bisectors followed by a `gamma`-darting in the
//! opposite direction to the other bisector. Each round either ends in a
//! meeting or leaves both agents at the same arc distance on a disk whose
//! radius has shrunk by the factor `x`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Angles are allowed to overshoot `pi/2 - alpha` by this much, so that
/// boundary strategies computed by different formulas still validate.
pub const ANGLE_SLACK: f64 = 1e-12;

/// A rendezvous instance in the unit-disk parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instance {
    alpha: f64,
}

impl Instance {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < FRAC_PI_4) {
            return Err(Error::InvalidAlpha { alpha });
        }
        Ok(Self { alpha })
    }

    /// Instance whose reference point sits at distance `rho` when the agents
    /// are at distance 2. Requires `rho > sqrt(2)`.
    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(rho > SQRT_2) || !rho.is_finite() {
            return Err(Error::DegenerateInstance { rho });
        }
        let alpha = (1.0 / rho).asin();
        // rho marginally above sqrt(2) can round alpha onto pi/4.
        Self::from_alpha(alpha).map_err(|_| Error::DegenerateInstance { rho })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        1.0 / self.alpha.sin()
    }

    /// Upper bound `pi/2 - alpha` shared by both darting angles.
    pub fn max_angle(&self) -> f64 {
        FRAC_PI_2 - self.alpha
    }
}

/// Number of random rounds before the agents give up and walk to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Steps {
    Finite(u32),
    Unbounded,
}

impl Steps {
    pub fn finite(k: u64) -> Result<Self> {
        match u32::try_from(k) {
            Ok(k) if k >= 1 => Ok(Steps::Finite(k)),
            _ => Err(Error::InvalidSteps(k)),
        }
    }

    pub fn as_finite(&self) -> Option<u32> {
        match *self {
            Steps::Finite(k) => Some(k),
            Steps::Unbounded => None,
        }
    }
}

impl fmt::Display for Steps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Steps::Finite(k) => write!(f, "{k}"),
            Steps::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Steps {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "unbounded" | "∞" => Ok(Steps::Unbounded),
            other => {
                let k: u64 = other
                    .parse()
                    .map_err(|_| Error::Domain(format!("cannot parse step count {other:?}")))?;
                Steps::finite(k)
            }
        }
    }
}

/// A `k`-RB strategy with darting angles `beta` and `gamma` (radians).
///
/// Angle bounds depend on the instance and are checked where the strategy is
/// evaluated, not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    pub steps: Steps,
    pub beta: f64,
    pub gamma: f64,
}

impl Strategy {
    pub fn new(steps: Steps, beta: f64, gamma: f64) -> Self {
        Self { steps, beta, gamma }
    }

    /// Single random darting followed by a walk to the origin.
    pub fn one_rb(beta: f64) -> Self {
        Self::new(Steps::Finite(1), beta, 0.0)
    }

    /// Walk straight to the reference point.
    pub fn go_to_origin() -> Self {
        Self::one_rb(0.0)
    }

    /// Greedy bisector strategy: both dartings hit the bisector at a right
    /// angle, shrinking the disk by `cos(alpha)` each round.
    pub fn greedy_bisector(instance: &Instance) -> Self {
        let a = instance.max_angle();
        Self::new(Steps::Unbounded, a, a)
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        let bound = instance.max_angle();
        for (angle, value) in [("beta", self.beta), ("gamma", self.gamma)] {
            if !(value >= 0.0 && value <= bound + ANGLE_SLACK) {
                return Err(Error::InvalidStrategy {
                    angle,
                    value,
                    bound,
                });
            }
        }
        Ok(())
    }
}

/// Per-round lengths on a unit disk: first darting `w`, radius after the
/// first darting `y`, second darting `d`, radius after a failed round `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DartingGeometry {
    pub w: f64,
    pub y: f64,
    pub d: f64,
    pub x: f64,
}

impl DartingGeometry {
    /// Law-of-sines evaluation without any bound checks. Meaningful whenever
    /// `alpha + beta < pi` and `2 alpha + gamma < pi`.
    pub fn from_angles(alpha: f64, beta: f64, gamma: f64) -> Self {
        let csc_theta = 1.0 / (alpha + beta).sin();
        let csc_delta = 1.0 / (2.0 * alpha + gamma).sin();
        let w = alpha.sin() * csc_theta;
        let y = beta.sin() * csc_theta;
        let x = y * gamma.sin() * csc_delta;
        let d = y * (2.0 * alpha).sin() * csc_delta;
        Self { w, y, d, x }
    }

    /// Distance walked in a round that ends without a meeting.
    pub fn round_length(&self) -> f64 {
        self.w + self.d
    }
}

pub fn darting_geometry(instance: &Instance, strategy: &Strategy) -> Result<DartingGeometry> {
    strategy.validate(instance)?;
    Ok(DartingGeometry::from_angles(
        instance.alpha(),
        strategy.beta,
        strategy.gamma,
    ))
}

/// Trigonometric form of the shrink condition `x < 1`:
/// `sin(beta) sin(gamma) < sin(alpha + beta) sin(2 alpha + gamma)`.
pub fn shrink_condition(alpha: f64, beta: f64, gamma: f64) -> bool {
    beta.sin() * gamma.sin() < (alpha + beta).sin() * (2.0 * alpha + gamma).sin()
}
