//! Effectiveness thresholds, large-`rho` constants and time/energy tradeoffs.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::fmt;

use rayon::prelude::*;

use crate::analytic::{
    competitive_ratio, evaluate, greedy_bisector_ratio, Energy, BEST_LINE_RATIO, LINE_CONJECTURE,
};
use crate::error::{Error, Result};
use crate::geometry::{Instance, Steps, Strategy};
use crate::optimize::{optimal_1rb, optimal_1rb2, optimal_inf};

/// Smallest `rho` probed by [`effectiveness`].
pub const EFFECTIVENESS_FLOOR: f64 = SQRT_2 + 1e-6;
/// Largest `rho` probed by [`effectiveness`].
pub const EFFECTIVENESS_CEILING: f64 = 1e6;
/// Bisection stops once the bracket is narrower than this.
pub const EFFECTIVENESS_TOLERANCE: f64 = 1e-6;

/// Competitive-ratio curves of the strategy families compared in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    /// Walk straight to the reference point.
    Naive,
    /// Cited constant of the best known line strategy.
    BestLine,
    GreedyBisector,
    OneRb,
    OneStep,
    Unbounded,
}

impl Curve {
    pub const ALL: [Curve; 6] = [
        Curve::Naive,
        Curve::BestLine,
        Curve::OneRb,
        Curve::OneStep,
        Curve::GreedyBisector,
        Curve::Unbounded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Curve::Naive => "naive",
            Curve::BestLine => "best_line",
            Curve::GreedyBisector => "greedy_bisector",
            Curve::OneRb => "one_rb",
            Curve::OneStep => "one_step",
            Curve::Unbounded => "unbounded",
        }
    }

    /// Optimal member of the family at `instance`, if the family is a
    /// darting strategy.
    pub fn strategy(self, instance: &Instance) -> Result<Option<Strategy>> {
        Ok(match self {
            Curve::Naive => Some(Strategy::go_to_origin()),
            Curve::BestLine => None,
            Curve::GreedyBisector => Some(Strategy::greedy_bisector(instance)),
            Curve::OneRb => Some(optimal_1rb(instance)),
            Curve::OneStep => Some(optimal_1rb2(instance)),
            Curve::Unbounded => Some(optimal_inf(instance)?.strategy),
        })
    }

    pub fn ratio(self, rho: f64) -> Result<f64> {
        let instance = Instance::from_rho(rho)?;
        match self {
            Curve::Naive => Ok(rho),
            Curve::BestLine => Ok(BEST_LINE_RATIO),
            Curve::GreedyBisector => Ok(greedy_bisector_ratio(rho)),
            _ => {
                let strategy = self.strategy(&instance)?.expect("darting family");
                competitive_ratio(&instance, &strategy)
            }
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest `rho` at which a curve stays within the line conjecture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Effectiveness {
    /// The curve is at or above the threshold already at `rho -> sqrt(2)`.
    Zero,
    At(f64),
    /// Still below the threshold at [`EFFECTIVENESS_CEILING`].
    Beyond,
}

impl Effectiveness {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Effectiveness::At(rho) => Some(rho),
            Effectiveness::Zero => Some(0.0),
            Effectiveness::Beyond => None,
        }
    }
}

impl fmt::Display for Effectiveness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effectiveness::Zero => f.write_str("0"),
            Effectiveness::At(rho) => write!(f, "{rho}"),
            Effectiveness::Beyond => write!(f, ">{EFFECTIVENESS_CEILING:e}"),
        }
    }
}

/// Solves `curve(rho) = 4.25` for an increasing curve: doubling bracket from
/// just above `sqrt(2)`, then bisection.
pub fn effectiveness(curve: impl Fn(f64) -> Result<f64>) -> Result<Effectiveness> {
    let below = |rho: f64| -> Result<bool> { Ok(curve(rho)? < LINE_CONJECTURE) };
    let mut lo = EFFECTIVENESS_FLOOR;
    if !below(lo)? {
        return Ok(Effectiveness::Zero);
    }
    let mut hi = lo;
    loop {
        hi = (2.0 * hi).min(EFFECTIVENESS_CEILING);
        if !below(hi)? {
            break;
        }
        if hi >= EFFECTIVENESS_CEILING {
            return Ok(Effectiveness::Beyond);
        }
        lo = hi;
    }
    while hi - lo >= EFFECTIVENESS_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if below(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Effectiveness::At(0.5 * (lo + hi)))
}

pub fn curve_effectiveness(curve: Curve) -> Result<Effectiveness> {
    effectiveness(|rho| curve.ratio(rho))
}

/// Whether `curve` is non-decreasing on `samples` (sorted ascending).
pub fn is_nondecreasing(curve: impl Fn(f64) -> Result<f64>, samples: &[f64]) -> Result<bool> {
    let values = samples
        .iter()
        .map(|&r| curve(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(values.windows(2).all(|w| w[1] >= w[0] - 1e-12))
}

/// Scaled quantities of the optimal unbounded strategy at a large `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsReport {
    pub rho: f64,
    /// `(pi/2 - beta) / arcsin(1/rho)`.
    pub beta_slope: f64,
    /// `(pi/2 - gamma) / arcsin(1/rho)`.
    pub gamma_slope: f64,
    /// `rho^2 (5 - CR)`.
    pub cr_gap_scaled: f64,
    /// Energy in distance-2 units over `rho^2`.
    pub energy_scaled: f64,
}

/// Limits of the four [`AsymptoticsReport`] fields as `rho -> infinity`.
pub const ASYMPTOTIC_LIMITS: AsymptoticsReport = AsymptoticsReport {
    rho: f64::INFINITY,
    beta_slope: 5.0,
    gamma_slope: 16.0 / 3.0,
    cr_gap_scaled: 289.0 / 6.0,
    energy_scaled: 18.0 / 79.0,
};

impl AsymptoticsReport {
    /// Absolute distances to [`ASYMPTOTIC_LIMITS`], in field order.
    pub fn gaps(&self) -> [f64; 4] {
        let l = ASYMPTOTIC_LIMITS;
        [
            (self.beta_slope - l.beta_slope).abs(),
            (self.gamma_slope - l.gamma_slope).abs(),
            (self.cr_gap_scaled - l.cr_gap_scaled).abs(),
            (self.energy_scaled - l.energy_scaled).abs(),
        ]
    }
}

pub fn asymptotics_report(rho_probe: f64) -> Result<AsymptoticsReport> {
    if !(rho_probe >= 1e3) {
        return Err(Error::Domain(format!(
            "asymptotics probe rho = {rho_probe} must be at least 1e3"
        )));
    }
    let instance = Instance::from_rho(rho_probe)?;
    let strategy = optimal_inf(&instance)?.strategy;
    let report = evaluate(&instance, &strategy)?;
    let a = instance.alpha();
    let rho = instance.rho();
    let energy = match report.energy_alpha {
        Energy::Finite(e) => e,
        Energy::Infinite => f64::INFINITY,
    };
    Ok(AsymptoticsReport {
        rho,
        beta_slope: (FRAC_PI_2 - strategy.beta) / a,
        gamma_slope: (FRAC_PI_2 - strategy.gamma) / a,
        cr_gap_scaled: rho * rho * (5.0 - report.competitive_ratio),
        energy_scaled: energy / rho,
    })
}

/// How the energy of a tradeoff family is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// Distance-2 energy over `rho^2`.
    EnergyOverRhoSquared,
    /// Distance-2 energy over `rho`.
    EnergyOverRho,
}

impl Scaling {
    pub fn apply(self, energy_rho: f64, rho: f64) -> f64 {
        match self {
            Scaling::EnergyOverRhoSquared => energy_rho / (rho * rho),
            Scaling::EnergyOverRho => energy_rho / rho,
        }
    }
}

/// Angle rule of a tradeoff family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TradeoffAngles {
    /// `beta = pi/2 - k alpha`, `gamma = pi/2 - m alpha`.
    Linear { k: f64, m: f64 },
    /// `beta = arcsin(b)`, `gamma = arcsin(c)`.
    Sine { b: f64, c: f64 },
}

/// Which member of the second family to build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SineVariant {
    /// `b = c = 5 / (5 + epsilon)`.
    Equal,
    /// `b = 2 / (lambda eps + 2)`, `c = 3 / ((1 - lambda) eps + 3)`.
    Lambda(f64),
}

pub const DEFAULT_LAMBDA: f64 = 3.0 / 11.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub epsilon: f64,
    pub angles: TradeoffAngles,
    pub limit_competitive_ratio: f64,
    pub limit_scaled_energy: f64,
    pub scaling: Scaling,
    /// Limit of `rho^2 (CR - 5)`, known for the linear family only.
    pub limit_cr_gap_scaled: Option<f64>,
}

/// Exact performance of a tradeoff strategy at a finite instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffEvaluation {
    pub rho: f64,
    pub competitive_ratio: f64,
    pub scaled_energy: f64,
    /// `rho^2 (CR - 5)`, linear family only.
    pub cr_gap_scaled: Option<f64>,
}

impl TradeoffPoint {
    pub fn strategy_of(&self, instance: &Instance) -> Strategy {
        let (beta, gamma) = match self.angles {
            TradeoffAngles::Linear { k, m } => {
                let a = instance.alpha();
                (FRAC_PI_2 - k * a, FRAC_PI_2 - m * a)
            }
            TradeoffAngles::Sine { b, c } => (b.asin(), c.asin()),
        };
        Strategy::new(Steps::Unbounded, beta, gamma)
    }

    pub fn evaluate_at(&self, instance: &Instance) -> Result<TradeoffEvaluation> {
        let report = evaluate(instance, &self.strategy_of(instance))?;
        let rho = report.rho;
        let energy = match report.energy_rho() {
            Energy::Finite(e) => e,
            Energy::Infinite => f64::INFINITY,
        };
        Ok(TradeoffEvaluation {
            rho,
            competitive_ratio: report.competitive_ratio,
            scaled_energy: self.scaling.apply(energy, rho),
            cr_gap_scaled: self
                .limit_cr_gap_scaled
                .map(|_| rho * rho * (report.competitive_ratio - 5.0)),
        })
    }
}

/// Multipliers `(k, m)` of the linear family.
pub fn linear_multipliers(epsilon: f64) -> (f64, f64) {
    (
        (31.0 * epsilon + 18.0) / (22.0 * epsilon),
        (6.0 * epsilon + 12.0) / (11.0 * epsilon),
    )
}

/// Linear family: energy of order `epsilon rho^2` at competitive ratio
/// `5 - O(1/rho^2)`. Admissible angles require `epsilon <= 12/5`.
pub fn tradeoff_family_a(epsilon: f64) -> Result<TradeoffPoint> {
    positive_epsilon(epsilon)?;
    let (k, m) = linear_multipliers(epsilon);
    let e2 = epsilon * epsilon;
    Ok(TradeoffPoint {
        epsilon,
        angles: TradeoffAngles::Linear { k, m },
        limit_competitive_ratio: 5.0,
        limit_scaled_energy: 6.0 / (2.0 * k + 4.0 * m - 5.0),
        scaling: Scaling::EnergyOverRhoSquared,
        limit_cr_gap_scaled: Some(27.0 / (11.0 * e2) - 237.0 / (11.0 * epsilon) - 39.0 / 44.0),
    })
}

/// Limit of distance-2 energy over `rho` for fixed sines `b`, `c`.
pub fn sine_energy_limit(b: f64, c: f64) -> f64 {
    (c + 2.0 * b) / ((1.0 - b * b).sqrt() * c + 2.0 * (1.0 - c * c).sqrt() * b)
}

/// Closed form of [`sine_energy_limit`] at `lambda = 3/11`.
pub fn default_lambda_energy_limit(epsilon: f64) -> f64 {
    let e = epsilon;
    (41.0 * e + 198.0)
        / (3.0 * 3f64.sqrt() * (e * (3.0 * e + 44.0)).sqrt() + 16.0 * (e * (4.0 * e + 33.0)).sqrt())
}

/// Closed form of [`sine_energy_limit`] for `b = c`.
pub fn equal_sines_energy_limit(epsilon: f64) -> f64 {
    (epsilon + 5.0) / (epsilon * (epsilon + 10.0)).sqrt()
}

/// Largest `epsilon` for which the equal-sines energy limit stays below
/// `2 / sqrt(epsilon)`: the positive root of `e^2 + 6 e - 15`.
pub fn equal_sines_bound_limit() -> f64 {
    2.0 * 6f64.sqrt() - 3.0
}

/// Sine family: competitive ratio `5 + epsilon` with energy linear in `rho`.
pub fn tradeoff_family_b(epsilon: f64, variant: SineVariant) -> Result<TradeoffPoint> {
    positive_epsilon(epsilon)?;
    let (b, c) = match variant {
        SineVariant::Equal => {
            let s = 5.0 / (5.0 + epsilon);
            (s, s)
        }
        SineVariant::Lambda(lambda) => {
            if !(0.0..=1.0).contains(&lambda) {
                return Err(Error::Domain(format!("lambda = {lambda} outside [0, 1]")));
            }
            (
                2.0 / (lambda * epsilon + 2.0),
                3.0 / ((1.0 - lambda) * epsilon + 3.0),
            )
        }
    };
    Ok(TradeoffPoint {
        epsilon,
        angles: TradeoffAngles::Sine { b, c },
        limit_competitive_ratio: 2.0 / b + 3.0 / c,
        limit_scaled_energy: sine_energy_limit(b, c),
        scaling: Scaling::EnergyOverRho,
        limit_cr_gap_scaled: None,
    })
}

fn positive_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "epsilon = {epsilon} must be positive"
        )))
    }
}

/// Competitive ratios of the five compared strategies at one `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub rho: f64,
    pub naive: f64,
    pub one_rb: f64,
    pub one_step: f64,
    pub greedy_bisector: f64,
    pub unbounded: f64,
}

pub fn curve_row(rho: f64) -> Result<CurveRow> {
    Ok(CurveRow {
        rho,
        naive: Curve::Naive.ratio(rho)?,
        one_rb: Curve::OneRb.ratio(rho)?,
        one_step: Curve::OneStep.ratio(rho)?,
        greedy_bisector: Curve::GreedyBisector.ratio(rho)?,
        unbounded: Curve::Unbounded.ratio(rho)?,
    })
}

/// One [`CurveRow`] per input, in input order.
pub fn comparison_table(rho_values: &[f64]) -> Result<Vec<CurveRow>> {
    rho_values.par_iter().map(|&rho| curve_row(rho)).collect()
}
