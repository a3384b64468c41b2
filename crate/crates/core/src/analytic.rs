//! Closed-form expected rendezvous time, competitive ratio and energy.
//!
//! All lengths are measured on the unit disk (agents at arc distance
//! `2 alpha`). Dividing by `sin(alpha)` converts to the normalization where
//! the agents start at distance 2, which is also the competitive ratio since
//! the offline optimum is `sin(alpha)`.

use std::fmt;

use crate::error::Result;
use crate::geometry::{darting_geometry, DartingGeometry, Instance, Steps, Strategy};

/// Competitive ratio of the best known line strategy (15-Markovian), used
/// as a constant benchmark only.
pub const BEST_LINE_RATIO: f64 = 4.2574;

/// Conjectured optimal expected rendezvous time on the line.
pub const LINE_CONJECTURE: f64 = 4.25;

/// Above this step count the finite-k closed form is evaluated in a rescaled
/// form that never forms `2^k`.
const DIRECT_FORM_MAX_STEPS: u32 = 60;

/// Worst-case rendezvous time, which is unbounded for strategies whose
/// disk does not shrink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Energy {
    Finite(f64),
    Infinite,
}

impl Energy {
    pub fn is_finite(&self) -> bool {
        matches!(self, Energy::Finite(_))
    }

    /// `f64::INFINITY` for the infinite case.
    pub fn value(&self) -> f64 {
        match *self {
            Energy::Finite(e) => e,
            Energy::Infinite => f64::INFINITY,
        }
    }

    pub fn scale(self, factor: f64) -> Energy {
        match self {
            Energy::Finite(e) => Energy::Finite(e * factor),
            Energy::Infinite => Energy::Infinite,
        }
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Energy::Finite(e) => write!(f, "{e}"),
            Energy::Infinite => f.write_str("inf"),
        }
    }
}

/// Expected time in unit-disk units for an already computed geometry.
///
/// No bound checks: for `Unbounded` the value is the `k -> infinity` limit,
/// finite whenever `x < 2`.
pub fn expected_time_from(geom: &DartingGeometry, steps: Steps) -> f64 {
    let DartingGeometry { w, d, x, .. } = *geom;
    let meet = 3.0 * d + 4.0 * w;
    match steps {
        Steps::Unbounded => {
            if x < 2.0 {
                meet / (2.0 * (2.0 - x))
            } else {
                f64::INFINITY
            }
        }
        Steps::Finite(k) if k <= DIRECT_FORM_MAX_STEPS => {
            let k = k as i32;
            0.5f64.powi(k + 1) * (x.powi(k) * (meet + 2.0 * x - 4.0) - 2f64.powi(k) * meet)
                / (x - 2.0)
        }
        Steps::Finite(k) => {
            let half_x = (0.5 * x).powi(k as i32);
            0.5 * (half_x * (meet + 2.0 * x - 4.0) - meet) / (x - 2.0)
        }
    }
}

/// One-step expected time written directly as `w + 3d/4 + x/2`.
pub fn one_step_time(geom: &DartingGeometry) -> f64 {
    geom.w + 0.75 * geom.d + 0.5 * geom.x
}

/// One-step expected time in its trigonometric form.
pub fn one_step_time_trig(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let csc_theta = 1.0 / (alpha + beta).sin();
    let csc_delta = 1.0 / (2.0 * alpha + gamma).sin();
    0.5 * csc_theta
        * (beta.sin() * csc_delta * (3.0 * alpha.sin() * alpha.cos() + gamma.sin())
            + 2.0 * alpha.sin())
}

/// Unbounded-step expected time in its trigonometric form.
pub fn unbounded_time_trig(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let num = alpha.sin()
        * (3.0 * (alpha - beta).sin()
            - 3.0 * (alpha + beta).sin()
            - 4.0 * (2.0 * alpha + gamma).sin());
    let den = -2.0 * (alpha - beta + gamma).cos()
        + 2.0 * (3.0 * alpha + beta + gamma).cos()
        + (beta - gamma).cos()
        - (beta + gamma).cos();
    num / den
}

pub fn expected_time(instance: &Instance, strategy: &Strategy) -> Result<f64> {
    let geom = darting_geometry(instance, strategy)?;
    Ok(expected_time_from(&geom, strategy.steps))
}

pub fn competitive_ratio(instance: &Instance, strategy: &Strategy) -> Result<f64> {
    Ok(expected_time(instance, strategy)? / instance.alpha().sin())
}

/// Worst-case time in unit-disk units: every round fails until the walk to
/// the origin (finite `k`), or forever (unbounded).
pub fn energy_from(geom: &DartingGeometry, steps: Steps) -> Energy {
    let DartingGeometry { x, .. } = *geom;
    let round = geom.round_length();
    match steps {
        Steps::Unbounded => {
            if x < 1.0 {
                Energy::Finite(round / (1.0 - x))
            } else {
                Energy::Infinite
            }
        }
        Steps::Finite(k) => {
            let xk = x.powi(k as i32);
            if (1.0 - x).abs() < 1e-12 {
                Energy::Finite(k as f64 * round + 1.0)
            } else {
                Energy::Finite(round * (1.0 - xk) / (1.0 - x) + xk)
            }
        }
    }
}

pub fn energy(instance: &Instance, strategy: &Strategy) -> Result<Energy> {
    let geom = darting_geometry(instance, strategy)?;
    Ok(energy_from(&geom, strategy.steps))
}

/// Evaluated performance of one strategy on one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceReport {
    pub expected_time_alpha: f64,
    pub competitive_ratio: f64,
    pub energy_alpha: Energy,
    pub rho: f64,
}

impl PerformanceReport {
    /// Energy in the distance-2 normalization.
    pub fn energy_rho(&self) -> Energy {
        self.energy_alpha.scale(self.rho)
    }
}

pub fn evaluate(instance: &Instance, strategy: &Strategy) -> Result<PerformanceReport> {
    let geom = darting_geometry(instance, strategy)?;
    let time = expected_time_from(&geom, strategy.steps);
    let rho = instance.rho();
    Ok(PerformanceReport {
        expected_time_alpha: time,
        competitive_ratio: time * rho,
        energy_alpha: energy_from(&geom, strategy.steps),
        rho,
    })
}

/// Competitive ratios of the simple benchmark algorithms at one `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkCurves {
    pub naive: f64,
    pub best_line: f64,
    pub greedy_bisector: f64,
    pub one_rb: f64,
}

pub fn greedy_bisector_ratio(rho: f64) -> f64 {
    let r2 = rho * rho;
    (7.0 * r2 + 8.0 * rho * (r2 - 1.0).sqrt() - 3.0) / (3.0 * r2 + 1.0)
}

pub fn one_rb_ratio(rho: f64) -> f64 {
    (3.0 * (rho * rho - 1.0).sqrt() + 7f64.sqrt()) / 4.0
}

pub fn benchmark_curves(rho: f64) -> Result<BenchmarkCurves> {
    Instance::from_rho(rho)?;
    Ok(BenchmarkCurves {
        naive: rho,
        best_line: BEST_LINE_RATIO,
        greedy_bisector: greedy_bisector_ratio(rho),
        one_rb: one_rb_ratio(rho),
    })
}

/// A one-line Markov recursion `f = constant + slope * f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearRecursion {
    pub constant: f64,
    pub slope: f64,
}

impl LinearRecursion {
    pub fn fixed_point(&self) -> f64 {
        self.constant / (1.0 - self.slope)
    }

    pub fn residual(&self, f: f64) -> f64 {
        f - (self.constant + self.slope * f)
    }
}

/// Expected times of the two warm-up line strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrlReference {
    pub two_markov: f64,
    pub three_markov: f64,
}

/// `f = 1/4 + 3/4 (2 + f)`: meet after time 1 w.p. 1/4, otherwise restart
/// after walking 2.
pub const TWO_MARKOV: LinearRecursion = LinearRecursion {
    constant: 0.25 + 0.75 * 2.0,
    slope: 0.75,
};

/// `f = 1/4 + 3/4 + 1/2 (3 + f)`: meet at time 1 or 3 w.p. 1/4 each,
/// otherwise restart after walking 3.
pub const THREE_MARKOV: LinearRecursion = LinearRecursion {
    constant: 0.25 + 0.25 * 3.0 + 0.5 * 3.0,
    slope: 0.5,
};

pub fn srl_reference_times() -> SrlReference {
    let two_markov = TWO_MARKOV.fixed_point();
    let three_markov = THREE_MARKOV.fixed_point();
    debug_assert!(TWO_MARKOV.residual(two_markov).abs() < 1e-12);
    debug_assert!(THREE_MARKOV.residual(three_markov).abs() < 1e-12);
    SrlReference {
        two_markov,
        three_markov,
    }
}
