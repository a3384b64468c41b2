//! Optimal darting angles for each strategy class.
//!
//! Closed forms are provided for the one-bit strategy, the one-step
//! two-darting strategy and the unbounded strategy. Each closed form has an
//! independent check: residuals of the critical-point equations, a
//! finite-difference Hessian, and a brute-force grid search over the
//! admissible box (`grid_refine`).

use rayon::prelude::*;

use crate::analytic::{expected_time_from, one_step_time};
use crate::error::{Error, Result};
use crate::geometry::{DartingGeometry, Instance, Steps, Strategy};

/// Below this `rho` the unbounded closed form is not claimed to be optimal.
pub fn unbounded_validity_rho() -> f64 {
    1.0 / 0.5f64.sin()
}

/// `rho` at which the one-step optimum leaves the `gamma = 0` boundary.
pub fn one_step_regime_rho() -> f64 {
    1.0 / (0.5 * (2.0f64 / 3.0).acos()).sin()
}

/// Optimal single random darting followed by a walk to the origin.
pub fn optimal_1rb(instance: &Instance) -> Strategy {
    let beta = (0.75f64.acos() - instance.alpha()).max(0.0);
    Strategy::one_rb(beta)
}

/// Optimal one-step strategy with two dartings.
pub fn optimal_1rb2(instance: &Instance) -> Strategy {
    let alpha = instance.alpha();
    let gamma = (2.0f64 / 3.0).acos() - 2.0 * alpha;
    if gamma <= 0.0 {
        return optimal_1rb(instance);
    }
    let beta = (0.75 * gamma.cos()).acos() - alpha;
    Strategy::new(Steps::Finite(1), beta, gamma)
}

/// Signed defects of the one-step critical-point equations:
/// `(cos(2a + g) - 2/3, cos(a + b) - 3/4 cos(g))`.
pub fn residuals_1rb2(instance: &Instance, strategy: &Strategy) -> (f64, f64) {
    let a = instance.alpha();
    let (b, g) = (strategy.beta, strategy.gamma);
    (
        (2.0 * a + g).cos() - 2.0 / 3.0,
        (a + b).cos() - 0.75 * g.cos(),
    )
}

/// Signed defects of the unbounded critical-point equations:
/// `(3/4 cos(g) - cos(a + b), 2/3 cos(b) - cos(2a + g))`.
pub fn residuals_inf(instance: &Instance, strategy: &Strategy) -> (f64, f64) {
    residuals_inf_at(instance.alpha(), strategy.beta, strategy.gamma)
}

fn residuals_inf_at(a: f64, b: f64, g: f64) -> (f64, f64) {
    (
        0.75 * g.cos() - (a + b).cos(),
        2.0 / 3.0 * b.cos() - (2.0 * a + g).cos(),
    )
}

/// Interior critical point of the unbounded expected time.
///
/// `gamma` is available through both critical-point equations; the two
/// agree whenever the critical point has `gamma >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfCriticalPoint {
    pub beta: f64,
    /// `arccos(4/3 cos(alpha + beta))`, always non-negative.
    pub gamma_from_first: f64,
    /// `arccos(2/3 cos(beta)) - 2 alpha`, carries the sign of the true
    /// critical point.
    pub gamma_from_second: f64,
}

impl InfCriticalPoint {
    pub fn gamma_disagreement(&self) -> f64 {
        (self.gamma_from_first - self.gamma_from_second).abs()
    }
}

/// Solves the critical-point system of the unbounded expected time.
///
/// Eliminating `gamma` leaves a quadratic in `t = tan(beta)`:
/// `c t^2 + 2 v t + (5/4 cos^2 a - v^2) = 0` with `c = 9/4 cos^2 a - 1` and
/// `v = (2 cos a - cos 2a) / (2 sin a)`; the larger root is the admissible one.
pub fn critical_point_inf(instance: &Instance) -> Result<InfCriticalPoint> {
    let a = instance.alpha();
    let cos2 = a.cos() * a.cos();
    let c = 2.25 * cos2 - 1.0;
    let v = (2.0 * a.cos() - (2.0 * a).cos()) / (2.0 * a.sin());
    let disc = v * v - c * (1.25 * cos2 - v * v);
    if disc < 0.0 || c <= 0.0 {
        return Err(Error::NumericDomain {
            context: "critical_point_inf",
            detail: format!("alpha = {a}: discriminant {disc}, leading coefficient {c}"),
        });
    }
    let beta = ((-v + disc.sqrt()) / c).atan();
    let first = 4.0 / 3.0 * (a + beta).cos();
    let second = 2.0 / 3.0 * beta.cos();
    if first.abs() > 1.0 || second.abs() > 1.0 {
        return Err(Error::NumericDomain {
            context: "critical_point_inf",
            detail: format!("alpha = {a}: arccos arguments {first}, {second} outside [-1, 1]"),
        });
    }
    Ok(InfCriticalPoint {
        beta,
        gamma_from_first: first.acos(),
        gamma_from_second: second.acos() - 2.0 * a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimumSource {
    ClosedForm,
    /// Closed form not applicable at this instance; the result is the
    /// numerical optimum over the admissible box.
    GridFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfOptimum {
    pub strategy: Strategy,
    pub source: OptimumSource,
}

/// Optimal unbounded strategy.
///
/// Uses the closed-form critical point when `rho >= 1/sin(1/2)` and the
/// critical point lies in the admissible box (true up to
/// `alpha ~ 0.438235`); otherwise falls back to [`grid_refine`].
pub fn optimal_inf(instance: &Instance) -> Result<InfOptimum> {
    let fallback = || InfOptimum {
        strategy: grid_refine(instance, Steps::Unbounded),
        source: OptimumSource::GridFallback,
    };
    if instance.rho() < unbounded_validity_rho() {
        return Ok(fallback());
    }
    let cp = critical_point_inf(instance)?;
    let strategy = Strategy::new(Steps::Unbounded, cp.beta, cp.gamma_from_first);
    if cp.gamma_from_second < 0.0 || strategy.validate(instance).is_err() {
        return Ok(fallback());
    }
    if cp.gamma_disagreement() > 1e-10 {
        return Err(Error::NumericDomain {
            context: "optimal_inf",
            detail: format!(
                "gamma routes disagree by {} at alpha = {}",
                cp.gamma_disagreement(),
                instance.alpha()
            ),
        });
    }
    Ok(InfOptimum {
        strategy,
        source: OptimumSource::ClosedForm,
    })
}

/// Threshold above which a finite-difference eigenvalue counts as positive.
pub const POSITIVE_EIGENVALUE: f64 = 1e-8;

/// Critical point of the unbounded expected time with its local curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPointReport {
    pub beta_bar: f64,
    pub gamma_bar: f64,
    pub residual_1: f64,
    pub residual_2: f64,
    /// Ascending.
    pub hessian_eigenvalues: (f64, f64),
    pub gradient_norm: f64,
}

impl CriticalPointReport {
    pub fn is_local_minimum(&self) -> bool {
        self.hessian_eigenvalues.0 > POSITIVE_EIGENVALUE
    }
}

const HESSIAN_STEP: f64 = 1e-5;

/// Finite-difference curvature of the unbounded expected time at its
/// critical point. Validated for `alpha < 1/2`.
pub fn hessian_check_inf(instance: &Instance) -> Result<CriticalPointReport> {
    let a = instance.alpha();
    if a >= 0.5 {
        return Err(Error::OutOfValidatedRange {
            alpha: a,
            range: "(0, 1/2)",
        });
    }
    let cp = critical_point_inf(instance)?;
    let (b, g) = (cp.beta, cp.gamma_from_second);
    let f = |p: [f64; 2]| {
        expected_time_from(
            &DartingGeometry::from_angles(a, p[0], p[1]),
            Steps::Unbounded,
        )
    };
    let h = richardson(|s| fd::hessian(&f, [b, g], s), HESSIAN_STEP);
    let grad = richardson2(|s| fd::gradient(&f, [b, g], s), HESSIAN_STEP);
    let (r1, r2) = residuals_inf_at(a, b, g);
    Ok(CriticalPointReport {
        beta_bar: b,
        gamma_bar: g,
        residual_1: r1,
        residual_2: r2,
        hessian_eigenvalues: fd::symmetric_eigenvalues(h),
        gradient_norm: grad[0].hypot(grad[1]),
    })
}

/// One Richardson step for a second-order accurate difference.
fn richardson(eval: impl Fn(f64) -> [[f64; 2]; 2], h: f64) -> [[f64; 2]; 2] {
    let coarse = eval(h);
    let fine = eval(0.5 * h);
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
        }
    }
    out
}

fn richardson2(eval: impl Fn(f64) -> [f64; 2], h: f64) -> [f64; 2] {
    let coarse = eval(h);
    let fine = eval(0.5 * h);
    [
        (4.0 * fine[0] - coarse[0]) / 3.0,
        (4.0 * fine[1] - coarse[1]) / 3.0,
    ]
}

pub mod fd {
    //! Central finite differences in two variables.

    pub fn gradient(f: &impl Fn([f64; 2]) -> f64, p: [f64; 2], h: f64) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (i, gi) in g.iter_mut().enumerate() {
            let mut plus = p;
            let mut minus = p;
            plus[i] += h;
            minus[i] -= h;
            *gi = (f(plus) - f(minus)) / (2.0 * h);
        }
        g
    }

    pub fn hessian(f: &impl Fn([f64; 2]) -> f64, p: [f64; 2], h: f64) -> [[f64; 2]; 2] {
        let at = |db: f64, dg: f64| f([p[0] + db, p[1] + dg]);
        let center = at(0.0, 0.0);
        let bb = (at(h, 0.0) - 2.0 * center + at(-h, 0.0)) / (h * h);
        let gg = (at(0.0, h) - 2.0 * center + at(0.0, -h)) / (h * h);
        let bg = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
        [[bb, bg], [bg, gg]]
    }

    /// Eigenvalues of a symmetric 2x2 matrix, ascending.
    pub fn symmetric_eigenvalues(m: [[f64; 2]; 2]) -> (f64, f64) {
        let mean = 0.5 * (m[0][0] + m[1][1]);
        let spread = (0.5 * (m[0][0] - m[1][1])).hypot(0.5 * (m[0][1] + m[1][0]));
        (mean - spread, mean + spread)
    }
}

const GRID_POINTS: usize = 200;
const REFINE_TOLERANCE: f64 = 1e-10;

/// Numerical minimizer of the expected time over `[0, pi/2 - alpha]^2`.
pub fn grid_refine(instance: &Instance, steps: Steps) -> Strategy {
    grid_refine_with_value(instance, steps).0
}

/// Like [`grid_refine`], also returning the minimal expected time.
///
/// A 200x200 grid locates the basin; compass search with step halving then
/// refines to a step of 1e-10. Ties resolve to the lowest `beta`, then the
/// lowest `gamma`.
pub fn grid_refine_with_value(instance: &Instance, steps: Steps) -> (Strategy, f64) {
    let a = instance.alpha();
    let max = instance.max_angle();
    let objective = |b: f64, g: f64| match steps {
        Steps::Finite(1) => one_step_time(&DartingGeometry::from_angles(a, b, g)),
        _ => expected_time_from(&DartingGeometry::from_angles(a, b, g), steps),
    };
    let cell = max / (GRID_POINTS - 1) as f64;
    let node = |i: usize| {
        if i == GRID_POINTS - 1 {
            max
        } else {
            i as f64 * cell
        }
    };

    let row_minima: Vec<(f64, usize, usize)> = (0..GRID_POINTS)
        .into_par_iter()
        .map(|i| {
            let b = node(i);
            let mut best = (f64::INFINITY, i, 0);
            for j in 0..GRID_POINTS {
                let v = objective(b, node(j));
                if v < best.0 {
                    best = (v, i, j);
                }
            }
            best
        })
        .collect();
    let (mut best, i, j) =
        row_minima.into_iter().fold(
            (f64::INFINITY, 0, 0),
            |acc, row| if row.0 < acc.0 { row } else { acc },
        );
    let (mut b, mut g) = (node(i), node(j));

    let mut step = cell;
    while step >= REFINE_TOLERANCE {
        let mut improved = false;
        let candidates = [
            ((b - step).max(0.0), g),
            ((b + step).min(max), g),
            (b, (g - step).max(0.0)),
            (b, (g + step).min(max)),
        ];
        let mut next = (best, b, g);
        for (cb, cg) in candidates {
            let v = objective(cb, cg);
            if v < next.0 {
                next = (v, cb, cg);
                improved = true;
            }
        }
        if improved {
            (best, b, g) = next;
        } else {
            step *= 0.5;
        }
    }
    (Strategy::new(steps, b, g), best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{competitive_ratio, expected_time};

    #[test]
    fn one_rb_at_effectiveness_threshold() {
        let inst = Instance::from_rho(4.88813).unwrap();
        let cr = competitive_ratio(&inst, &optimal_1rb(&inst)).unwrap();
        assert!((cr - 4.25).abs() < 1e-4, "{cr}");
    }

    #[test]
    fn one_rb_clamp() {
        let inst = Instance::from_alpha(0.75f64.acos()).unwrap();
        assert_eq!(optimal_1rb(&inst).beta, 0.0);
        let inst = Instance::from_alpha(0.75).unwrap();
        assert_eq!(optimal_1rb(&inst).beta, 0.0);
        let inst = Instance::from_alpha(0.7).unwrap();
        assert!(optimal_1rb(&inst).beta > 0.0);
    }

    #[test]
    fn one_rb_rho_ten() {
        let inst = Instance::from_rho(10.0).unwrap();
        let s = optimal_1rb(&inst);
        assert!((s.beta - (0.75f64.acos() - 0.1f64.asin())).abs() < 1e-15);
        let cr = competitive_ratio(&inst, &s).unwrap();
        assert!((cr - (3.0 * 99f64.sqrt() + 7f64.sqrt()) / 4.0).abs() < 1e-12);
        let grid = grid_refine(&inst, Steps::Finite(1));
        // The one-bit family is the gamma = 0 slice; compare on that slice.
        let slice = |b: f64| expected_time(&inst, &Strategy::one_rb(b)).unwrap();
        assert!(slice(s.beta) <= slice(s.beta + 1e-4) && slice(s.beta) <= slice(s.beta - 1e-4));
        assert!(expected_time(&inst, &grid).unwrap() <= slice(s.beta) + 1e-15);
    }

    #[test]
    fn one_step_regime_boundary() {
        let rho = one_step_regime_rho();
        assert!((rho - 2.44949).abs() < 1e-5);
        let inst = Instance::from_rho(rho).unwrap();
        let s = optimal_1rb2(&inst);
        assert!(s.gamma.abs() < 1e-12);
        assert!((s.beta - optimal_1rb(&inst).beta).abs() < 1e-7);
        let below = Instance::from_rho(2.3).unwrap();
        assert_eq!(optimal_1rb2(&below), optimal_1rb(&below));
    }

    #[test]
    fn one_step_effectiveness_point() {
        let inst = Instance::from_rho(5.32366).unwrap();
        let cr = competitive_ratio(&inst, &optimal_1rb2(&inst)).unwrap();
        assert!((cr - 4.25).abs() < 1e-4, "{cr}");
    }

    #[test]
    fn one_step_critical_point() {
        let inst = Instance::from_rho(10.0).unwrap();
        let s = optimal_1rb2(&inst);
        let (r1, r2) = residuals_1rb2(&inst, &s);
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
        let t = expected_time(&inst, &s).unwrap();
        assert!((t - s.beta.cos()).abs() < 1e-12);
    }

    #[test]
    fn one_step_explicit_ratio() {
        // Competitive ratio written directly in rho.
        let explicit = |r: f64| {
            let r2 = r * r;
            let s5 = 5f64.sqrt();
            let inner = r * ((5.0 - 5.0 / r2).sqrt() + r) - 2.0;
            0.5 * (-s5 / r2 + (r2 - 1.0).sqrt() - 2.0 * (r2 - 1.0).sqrt() / r2
                + 2.0 * (1.0 - inner * inner / (4.0 * r2 * r2)).sqrt()
                + s5)
        };
        for rho in [2.5, 3.0, 5.32366, 10.0, 100.0] {
            let inst = Instance::from_rho(rho).unwrap();
            let cr = competitive_ratio(&inst, &optimal_1rb2(&inst)).unwrap();
            assert!(
                (cr - explicit(rho)).abs() < 1e-9 * rho,
                "rho={rho}: {cr} vs {}",
                explicit(rho)
            );
        }
    }

    #[test]
    fn one_step_boundary_residuals() {
        let a = 0.05;
        let inst = Instance::from_alpha(a).unwrap();
        let s = Strategy::one_rb(0.75f64.acos() - a);
        let (r1, r2) = residuals_1rb2(&inst, &s);
        assert!(r2.abs() < 1e-12);
        assert!((r1 - ((2.0 * a).cos() - 2.0 / 3.0)).abs() < 1e-15 && r1.abs() > 0.1);
        let (r1, r2) = residuals_1rb2(&inst, &Strategy::new(Steps::Finite(1), 0.4, 0.9));
        assert!(r1.abs() > 1e-3 && r2.abs() > 1e-3);
    }

    #[test]
    fn unbounded_residuals_vanish() {
        for rho in [2.4, 3.0, 5.0, 7.13678, 100.0, 1e5] {
            let inst = Instance::from_rho(rho).unwrap();
            let opt = optimal_inf(&inst).unwrap();
            assert_eq!(opt.source, OptimumSource::ClosedForm);
            let (r1, r2) = residuals_inf(&inst, &opt.strategy);
            assert!(r1.abs() < 1e-10 && r2.abs() < 1e-10, "rho={rho}: {r1} {r2}");
            let cp = critical_point_inf(&inst).unwrap();
            assert!(cp.gamma_disagreement() < 1e-10);
        }
    }

    #[test]
    fn unbounded_perturbed_and_greedy_residuals() {
        let inst = Instance::from_rho(3.0).unwrap();
        let mut s = optimal_inf(&inst).unwrap().strategy;
        s.beta += 0.1;
        assert!(residuals_inf(&inst, &s).0.abs() > 1e-3);
        for a in [0.01, 0.05, 0.1] {
            let inst = Instance::from_alpha(a).unwrap();
            let (r1, r2) = residuals_inf(&inst, &Strategy::greedy_bisector(&inst));
            assert!(r1.abs() > 1e-4 || r2.abs() > 1e-4);
        }
    }

    #[test]
    fn unbounded_asymptotic_slopes() {
        let inst = Instance::from_rho(1e5).unwrap();
        let s = optimal_inf(&inst).unwrap().strategy;
        let a = inst.alpha();
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(((half_pi - s.beta) / a - 5.0).abs() < 1e-3);
        assert!(((half_pi - s.gamma) / a - 16.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn unbounded_fallback_regions() {
        // Below 1/sin(1/2) and in the band where the critical point has gamma < 0.
        for rho in [1.6, 2.0, 2.2, 2.3] {
            let inst = Instance::from_rho(rho).unwrap();
            let opt = optimal_inf(&inst).unwrap();
            assert_eq!(opt.source, OptimumSource::GridFallback, "rho={rho}");
            assert!(opt.strategy.validate(&inst).is_ok());
        }
        let inst = Instance::from_alpha(0.45).unwrap();
        let cp = critical_point_inf(&inst).unwrap();
        assert!(cp.gamma_from_second < 0.0);
    }

    #[test]
    fn unbounded_hessian_positive() {
        for a in [0.1, 0.4] {
            let inst = Instance::from_alpha(a).unwrap();
            let rep = hessian_check_inf(&inst).unwrap();
            assert!(rep.is_local_minimum(), "{rep:?}");
            assert!(rep.hessian_eigenvalues.0 <= rep.hessian_eigenvalues.1);
            assert!(rep.gradient_norm < 1e-6, "{rep:?}");
        }
        let inst = Instance::from_alpha(0.6).unwrap();
        assert!(matches!(
            hessian_check_inf(&inst),
            Err(Error::OutOfValidatedRange { .. })
        ));
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        let (lo, hi) = fd::symmetric_eigenvalues([[2.0, 1.0], [1.0, 2.0]]);
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 3.0).abs() < 1e-15);
    }

    #[test]
    fn grid_refine_matches_unbounded_closed_form() {
        let inst = Instance::from_rho(5.0).unwrap();
        let closed = optimal_inf(&inst).unwrap().strategy;
        let (grid, value) = grid_refine_with_value(&inst, Steps::Unbounded);
        assert!((grid.beta - closed.beta).abs() < 1e-4);
        assert!((grid.gamma - closed.gamma).abs() < 1e-4);
        assert!((value - expected_time(&inst, &closed).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn grid_refine_matches_one_step_closed_form() {
        let inst = Instance::from_rho(5.0).unwrap();
        let closed = optimal_1rb2(&inst);
        let (grid, value) = grid_refine_with_value(&inst, Steps::Finite(1));
        assert!((grid.beta - closed.beta).abs() < 1e-4);
        assert!((grid.gamma - closed.gamma).abs() < 1e-4);
        assert!((value - expected_time(&inst, &closed).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn grid_refine_finds_gamma_boundary_below_regime() {
        let inst = Instance::from_rho(2.1).unwrap();
        let grid = grid_refine(&inst, Steps::Finite(1));
        assert!(grid.gamma < 1e-6, "{grid:?}");
    }

    #[test]
    fn grid_refine_is_deterministic() {
        let inst = Instance::from_rho(3.3).unwrap();
        let a = grid_refine_with_value(&inst, Steps::Finite(4));
        let b = grid_refine_with_value(&inst, Steps::Finite(4));
        assert_eq!(a, b);
    }
}
