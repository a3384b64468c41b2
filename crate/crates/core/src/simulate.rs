//! Trajectory-level simulation of both agents.
//!
//! Nothing here uses the closed-form lengths. Each agent keeps its own
//! planar position and clock; a darting is executed by intersecting the
//! agent's heading (tilted from the direction to the origin by the darting
//! angle) with the target bisector ray. A meeting is declared only when the
//! two agents are at the same point at the same time.
//!
//! Agent A starts at angle 0 and agent B at angle `2 alpha`, so B is always
//! counter-clockwise of A (this is preserved by every failed round). Agents
//! never see this; each one only reads its own coin.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::Energy;
use crate::error::{Error, Result};
use crate::geometry::{Instance, Steps, Strategy};

/// Per-trial round limit for unbounded strategies.
pub const ROUND_CAP: u64 = 1_000_000;

/// Positions closer than this (relative to the current disk radius) coincide.
pub const MEETING_TOLERANCE: f64 = 1e-9;

/// Largest finite step count accepted by [`exact_enumeration`].
pub const MAX_ENUMERATION_STEPS: u32 = 12;

const CHUNK_TRIALS: u64 = 4096;

/// Direction of the random darting, relative to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    Ccw,
    Cw,
}

impl Rotation {
    fn sign(self) -> f64 {
        match self {
            Rotation::Ccw => 1.0,
            Rotation::Cw => -1.0,
        }
    }

    pub fn opposite(self) -> Rotation {
        match self {
            Rotation::Ccw => Rotation::Cw,
            Rotation::Cw => Rotation::Ccw,
        }
    }
}

/// A stream of fair coins.
pub trait CoinSource {
    fn flip(&mut self) -> Rotation;
}

/// Coins drawn one bit at a time from a random number generator.
#[derive(Debug, Clone)]
pub struct RngCoins<R> {
    rng: R,
    bits: u64,
    left: u32,
}

impl<R: RngCore> RngCoins<R> {
    pub fn new(rng: R) -> Self {
        Self {
            rng,
            bits: 0,
            left: 0,
        }
    }
}

impl<R: RngCore> CoinSource for RngCoins<R> {
    fn flip(&mut self) -> Rotation {
        if self.left == 0 {
            self.bits = self.rng.next_u64();
            self.left = 64;
        }
        let bit = self.bits & 1;
        self.bits >>= 1;
        self.left -= 1;
        if bit == 1 {
            Rotation::Ccw
        } else {
            Rotation::Cw
        }
    }
}

/// A fixed coin sequence, replayed cyclically. Trials draw agent A's coin
/// then agent B's coin in every round.
#[derive(Debug, Clone)]
pub struct ScriptedCoins {
    script: Vec<Rotation>,
    next: usize,
}

impl ScriptedCoins {
    pub fn new(script: Vec<Rotation>) -> Self {
        assert!(!script.is_empty(), "coin script must not be empty");
        Self { script, next: 0 }
    }

    /// One `(agent A, agent B)` pair per round.
    pub fn rounds(pairs: &[(Rotation, Rotation)]) -> Self {
        Self::new(pairs.iter().flat_map(|&(a, b)| [a, b]).collect())
    }
}

impl CoinSource for ScriptedCoins {
    fn flip(&mut self) -> Rotation {
        let c = self.script[self.next];
        self.next = (self.next + 1) % self.script.len();
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn polar(radius: f64, angle: f64) -> Self {
        Point {
            x: radius * angle.cos(),
            y: radius * angle.sin(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A darting move: head off the inward radial direction by `tilt`, towards
/// one side, until reaching the ray rotated by `turn` to that side.
#[derive(Debug, Clone, Copy)]
struct Darting {
    cos_tilt: f64,
    sin_tilt: f64,
    cos_turn: f64,
    sin_turn: f64,
}

impl Darting {
    fn new(tilt: f64, turn: f64) -> Self {
        Self {
            cos_tilt: tilt.cos(),
            sin_tilt: tilt.sin(),
            cos_turn: turn.cos(),
            sin_turn: turn.sin(),
        }
    }

    /// Endpoint and length of the darting from `from`.
    fn apply(&self, from: Point, side: Rotation) -> Result<(Point, f64)> {
        let r = from.norm();
        if r == 0.0 {
            return Ok((from, 0.0));
        }
        let s = side.sign();
        let (c, sn) = (from.x / r, from.y / r);
        // Heading: inward radial (-c, -sn) tilted toward the tangent s(-sn, c).
        let dir = Point {
            x: -self.cos_tilt * c - self.sin_tilt * s * sn,
            y: -self.cos_tilt * sn + self.sin_tilt * s * c,
        };
        // Target ray: radial direction rotated by `turn` towards the same side.
        let ray = Point {
            x: c * self.cos_turn - s * sn * self.sin_turn,
            y: sn * self.cos_turn + s * c * self.sin_turn,
        };
        // from + len * dir = reach * ray
        let det = ray.x * dir.y - dir.x * ray.y;
        let len = (from.x * ray.y - ray.x * from.y) / det;
        let reach = (from.x * dir.y - dir.x * from.y) / det;
        if !(len >= -1e-12 * r && reach >= -1e-12 * r) || !det.is_finite() {
            return Err(Error::NumericDomain {
                context: "darting",
                detail: format!("heading misses the bisector ray (length {len}, reach {reach})"),
            });
        }
        let reach = reach.max(0.0);
        Ok((
            Point {
                x: reach * ray.x,
                y: reach * ray.y,
            },
            len.max(0.0),
        ))
    }
}

#[derive(Debug, Clone, Copy)]
struct Agent {
    pos: Point,
    clock: f64,
}

impl Agent {
    fn at(pos: Point) -> Self {
        Self { pos, clock: 0.0 }
    }

    fn dart(&mut self, darting: &Darting, side: Rotation) -> Result<f64> {
        let (to, len) = darting.apply(self.pos, side)?;
        self.pos = to;
        self.clock += len;
        Ok(len)
    }

    fn walk_to_origin(&mut self) -> f64 {
        let len = self.pos.norm();
        self.pos = Point::ORIGIN;
        self.clock += len;
        len
    }

    fn meets(&self, other: &Agent, radius: f64) -> bool {
        let tol = MEETING_TOLERANCE * radius;
        self.pos.distance(&other.pos) <= tol
            && (self.clock - other.clock).abs() <= MEETING_TOLERANCE * self.clock.max(1.0)
    }
}

/// The two darting moves of one round.
#[derive(Debug, Clone, Copy)]
struct Round {
    first: Darting,
    second: Darting,
}

impl Round {
    fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            first: Darting::new(beta, alpha),
            second: Darting::new(gamma, 2.0 * alpha),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeetingPoint {
    FirstDarting,
    SecondDarting,
    /// Every round failed and both agents walked to the origin.
    Origin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// Round in which the meeting happened (`k` for the origin walk).
    pub rounds_elapsed: u64,
    pub met_at: MeetingPoint,
    /// Unit-disk time units.
    pub total_time: f64,
}

/// Plays one trial of `strategy` with both agents reading from `coins`
/// (agent A first, then agent B, each round).
pub fn simulate_trial(
    instance: &Instance,
    strategy: &Strategy,
    coins: &mut impl CoinSource,
) -> Result<TrialOutcome> {
    strategy.validate(instance)?;
    let alpha = instance.alpha();
    let round = Round::new(alpha, strategy.beta, strategy.gamma);
    let mut a = Agent::at(Point::polar(1.0, 0.0));
    let mut b = Agent::at(Point::polar(1.0, 2.0 * alpha));
    let limit = match strategy.steps {
        Steps::Finite(k) => k as u64,
        Steps::Unbounded => ROUND_CAP,
    };

    for n in 1..=limit {
        let radius = a.pos.norm();
        let (side_a, side_b) = (coins.flip(), coins.flip());
        a.dart(&round.first, side_a)?;
        b.dart(&round.first, side_b)?;
        if a.meets(&b, radius) {
            return Ok(TrialOutcome {
                rounds_elapsed: n,
                met_at: MeetingPoint::FirstDarting,
                total_time: a.clock,
            });
        }
        a.dart(&round.second, side_a.opposite())?;
        b.dart(&round.second, side_b.opposite())?;
        if a.meets(&b, radius) {
            return Ok(TrialOutcome {
                rounds_elapsed: n,
                met_at: MeetingPoint::SecondDarting,
                total_time: a.clock,
            });
        }
    }

    if let Steps::Finite(k) = strategy.steps {
        a.walk_to_origin();
        b.walk_to_origin();
        debug_assert!((a.clock - b.clock).abs() <= MEETING_TOLERANCE * a.clock.max(1.0));
        return Ok(TrialOutcome {
            rounds_elapsed: k as u64,
            met_at: MeetingPoint::Origin,
            total_time: a.clock,
        });
    }
    Err(Error::RoundCapExceeded {
        rounds: ROUND_CAP,
        elapsed: a.clock,
    })
}

/// Aggregate of many independent trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub mean_time: f64,
    /// Sample standard deviation over `sqrt(completed trials)`.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    /// Meeting round -> number of trials. Sums to `trials - truncated`.
    pub round_histogram: BTreeMap<u64, u64>,
    pub meetings: BTreeMap<MeetingPoint, u64>,
    /// Trials stopped by [`ROUND_CAP`]; excluded from the mean.
    pub truncated: u64,
}

impl SimulationSummary {
    pub fn completed(&self) -> u64 {
        self.trials - self.truncated
    }

    /// Whether `value` lies within `sigmas` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, sigmas: f64) -> bool {
        (self.mean_time - value).abs() <= sigmas * self.std_error
    }
}

#[derive(Debug, Clone, Default)]
struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
    rounds: BTreeMap<u64, u64>,
    meetings: BTreeMap<MeetingPoint, u64>,
    truncated: u64,
}

impl Accumulator {
    fn push(&mut self, outcome: &TrialOutcome) {
        self.n += 1;
        let delta = outcome.total_time - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (outcome.total_time - self.mean);
        *self.rounds.entry(outcome.rounds_elapsed).or_default() += 1;
        *self.meetings.entry(outcome.met_at).or_default() += 1;
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        let n = self.n + other.n;
        if n > 0 {
            let delta = other.mean - self.mean;
            let (na, nb) = (self.n as f64, other.n as f64);
            self.mean += delta * nb / n as f64;
            self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        }
        self.n = n;
        for (k, v) in other.rounds {
            *self.rounds.entry(k).or_default() += v;
        }
        for (k, v) in other.meetings {
            *self.meetings.entry(k).or_default() += v;
        }
        self.truncated += other.truncated;
        self
    }
}

/// Random stream of trial `index`: ChaCha8 seeded from `seed` with the
/// stream number set to the trial index.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Monte Carlo estimate of the expected rendezvous time.
///
/// Trial `i` draws its coins from [`trial_rng`]`(seed, i)`. Trials are
/// grouped in fixed chunks whose statistics are merged in index order, so
/// the summary does not depend on the number of threads.
pub fn monte_carlo(
    instance: &Instance,
    strategy: &Strategy,
    trials: u64,
    seed: u64,
) -> Result<SimulationSummary> {
    if trials == 0 {
        return Err(Error::Domain("monte_carlo needs at least one trial".into()));
    }
    strategy.validate(instance)?;
    let base = ChaCha8Rng::seed_from_u64(seed);
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let parts: Vec<Result<Accumulator>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Accumulator::default();
            let end = ((c + 1) * CHUNK_TRIALS).min(trials);
            for i in c * CHUNK_TRIALS..end {
                let mut rng = base.clone();
                rng.set_stream(i);
                match simulate_trial(instance, strategy, &mut RngCoins::new(rng)) {
                    Ok(outcome) => acc.push(&outcome),
                    Err(Error::RoundCapExceeded { .. }) => acc.truncated += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = Accumulator::default();
    for part in parts {
        total = total.merge(part?);
    }
    let std_error = if total.n > 1 {
        (total.m2 / (total.n - 1) as f64).sqrt() / (total.n as f64).sqrt()
    } else {
        0.0
    };
    Ok(SimulationSummary {
        mean_time: total.mean,
        std_error,
        trials,
        seed,
        round_histogram: total.rounds,
        meetings: total.meetings,
        truncated: total.truncated,
    })
}

/// Exact expected time of a finite-step strategy by summing the probability
/// tree of coin pairs, round by round.
pub fn exact_enumeration(instance: &Instance, strategy: &Strategy) -> Result<f64> {
    let k = match strategy.steps {
        Steps::Finite(k) if k <= MAX_ENUMERATION_STEPS => k,
        Steps::Finite(k) => {
            return Err(Error::EnumerationTooDeep {
                requested: k as u64,
                max: MAX_ENUMERATION_STEPS as u64,
            })
        }
        Steps::Unbounded => {
            return Err(Error::EnumerationTooDeep {
                requested: u64::MAX,
                max: MAX_ENUMERATION_STEPS as u64,
            })
        }
    };
    let g = crate::geometry::darting_geometry(instance, strategy)?;

    fn expand(
        round: u32,
        k: u32,
        radius: f64,
        elapsed: f64,
        prob: f64,
        g: &crate::geometry::DartingGeometry,
    ) -> f64 {
        const PAIRS: [(Rotation, Rotation); 4] = [
            (Rotation::Ccw, Rotation::Ccw),
            (Rotation::Ccw, Rotation::Cw),
            (Rotation::Cw, Rotation::Ccw),
            (Rotation::Cw, Rotation::Cw),
        ];
        let p = 0.25 * prob;
        let mut sum = 0.0;
        for pair in PAIRS {
            let after_round = elapsed + radius * (g.w + g.d);
            sum += match pair {
                // A heads towards B and B towards A.
                (Rotation::Ccw, Rotation::Cw) => p * (elapsed + radius * g.w),
                // Both head away; they meet on the way back.
                (Rotation::Cw, Rotation::Ccw) => p * after_round,
                _ if round == k => p * (after_round + radius * g.x),
                _ => expand(round + 1, k, radius * g.x, after_round, p, g),
            };
        }
        sum
    }

    Ok(expand(1, k, 1.0, 0.0, 1.0, &g))
}

/// Length of a single agent's path when no round ever succeeds, built by
/// walking the trajectory (all coins counter-clockwise).
///
/// Unbounded strategies are walked until the remaining geometric tail,
/// extrapolated from the measured per-round shrink, is negligible; a
/// measured shrink of at least 1 gives `Energy::Infinite`.
pub fn worst_case_time(instance: &Instance, strategy: &Strategy) -> Result<Energy> {
    strategy.validate(instance)?;
    worst_case_time_unvalidated(
        instance.alpha(),
        strategy.beta,
        strategy.gamma,
        strategy.steps,
    )
}

/// [`worst_case_time`] without the admissible-box check, for probing the
/// finiteness boundary. Needs `alpha + beta < pi` and `2 alpha + gamma < pi`.
pub fn worst_case_time_unvalidated(
    alpha: f64,
    beta: f64,
    gamma: f64,
    steps: Steps,
) -> Result<Energy> {
    let round = Round::new(alpha, beta, gamma);
    let mut agent = Agent::at(Point::polar(1.0, 0.0));
    match steps {
        Steps::Finite(k) => {
            for _ in 0..k {
                agent.dart(&round.first, Rotation::Ccw)?;
                agent.dart(&round.second, Rotation::Cw)?;
            }
            agent.walk_to_origin();
            Ok(Energy::Finite(agent.clock))
        }
        Steps::Unbounded => {
            for _ in 0..ROUND_CAP {
                let start = agent.pos.norm();
                if start == 0.0 {
                    return Ok(Energy::Finite(agent.clock));
                }
                let before = agent.clock;
                agent.dart(&round.first, Rotation::Ccw)?;
                agent.dart(&round.second, Rotation::Cw)?;
                let shrink = agent.pos.norm() / start;
                if shrink >= 1.0 {
                    return Ok(Energy::Infinite);
                }
                let per_unit = (agent.clock - before) / start;
                let tail = agent.pos.norm() * per_unit / (1.0 - shrink);
                if tail <= 1e-17 * agent.clock {
                    return Ok(Energy::Finite(agent.clock + tail));
                }
            }
            Err(Error::RoundCapExceeded {
                rounds: ROUND_CAP,
                elapsed: agent.clock,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryMode {
    /// Always counter-clockwise first: the spiral.
    Spiral,
    /// Coins from [`trial_rng`]`(seed, 0)`.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub x: f64,
    pub y: f64,
    /// Path length walked so far.
    pub elapsed: f64,
}

/// Path of one agent whose rounds never succeed. Unbounded strategies stop
/// once the disk radius falls below `min_radius`.
pub fn agent_trajectory(
    instance: &Instance,
    strategy: &Strategy,
    mode: TrajectoryMode,
    min_radius: f64,
) -> Result<Vec<TrajectoryPoint>> {
    strategy.validate(instance)?;
    let round = Round::new(instance.alpha(), strategy.beta, strategy.gamma);
    let mut coins: Box<dyn CoinSource> = match mode {
        TrajectoryMode::Spiral => Box::new(ScriptedCoins::new(vec![Rotation::Ccw])),
        TrajectoryMode::Random { seed } => Box::new(RngCoins::new(trial_rng(seed, 0))),
    };
    let mut agent = Agent::at(Point::polar(1.0, 0.0));
    let record = |a: &Agent| TrajectoryPoint {
        x: a.pos.x,
        y: a.pos.y,
        elapsed: a.clock,
    };
    let mut points = vec![record(&agent)];
    let rounds = match strategy.steps {
        Steps::Finite(k) => k as u64,
        Steps::Unbounded => ROUND_CAP,
    };
    for _ in 0..rounds {
        if strategy.steps == Steps::Unbounded && agent.pos.norm() < min_radius {
            break;
        }
        let side = coins.flip();
        agent.dart(&round.first, side)?;
        points.push(record(&agent));
        agent.dart(&round.second, side.opposite())?;
        points.push(record(&agent));
    }
    if let Steps::Finite(_) = strategy.steps {
        agent.walk_to_origin();
        points.push(record(&agent));
    }
    Ok(points)
}

impl CoinSource for Box<dyn CoinSource> {
    fn flip(&mut self) -> Rotation {
        (**self).flip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{energy, expected_time};
    use crate::geometry::darting_geometry;
    use std::f64::consts::PI;

    use Rotation::{Ccw, Cw};

    fn setup() -> (Instance, Strategy) {
        let inst = Instance::from_alpha(0.3).unwrap();
        (inst, Strategy::new(Steps::Finite(3), 1.0, 0.8))
    }

    #[test]
    fn first_darting_meeting() {
        let (inst, s) = setup();
        let g = darting_geometry(&inst, &s).unwrap();
        let out = simulate_trial(&inst, &s, &mut ScriptedCoins::rounds(&[(Ccw, Cw)])).unwrap();
        assert_eq!(out.met_at, MeetingPoint::FirstDarting);
        assert_eq!(out.rounds_elapsed, 1);
        assert!((out.total_time - g.w).abs() < 1e-12);
    }

    #[test]
    fn second_darting_meeting() {
        let (inst, s) = setup();
        let g = darting_geometry(&inst, &s).unwrap();
        let out = simulate_trial(&inst, &s, &mut ScriptedCoins::rounds(&[(Cw, Ccw)])).unwrap();
        assert_eq!(out.met_at, MeetingPoint::SecondDarting);
        assert!((out.total_time - (g.w + g.d)).abs() < 1e-12);
    }

    #[test]
    fn all_rounds_fail_then_origin() {
        let (inst, s) = setup();
        let g = darting_geometry(&inst, &s).unwrap();
        for script in [[(Ccw, Ccw)], [(Cw, Cw)]] {
            let out = simulate_trial(&inst, &s, &mut ScriptedCoins::rounds(&script)).unwrap();
            assert_eq!(out.met_at, MeetingPoint::Origin);
            assert_eq!(out.rounds_elapsed, 3);
            let xk = g.x.powi(3);
            let expect = (g.w + g.d) * (1.0 - xk) / (1.0 - g.x) + xk;
            assert!((out.total_time - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn later_round_meeting_on_shrunk_disk() {
        let (inst, s) = setup();
        let g = darting_geometry(&inst, &s).unwrap();
        let out = simulate_trial(
            &inst,
            &s,
            &mut ScriptedCoins::rounds(&[(Cw, Cw), (Ccw, Ccw), (Cw, Ccw)]),
        )
        .unwrap();
        assert_eq!(out.met_at, MeetingPoint::SecondDarting);
        assert_eq!(out.rounds_elapsed, 3);
        let expect = (g.w + g.d) * (1.0 + g.x + g.x * g.x);
        assert!((out.total_time - expect).abs() < 1e-12);
    }

    #[test]
    fn go_to_origin_is_deterministic() {
        let inst = Instance::from_alpha(PI / 6.0).unwrap();
        let sum = monte_carlo(&inst, &Strategy::go_to_origin(), 5000, 3).unwrap();
        assert!((sum.mean_time - 1.0).abs() < 1e-12);
        assert!(sum.std_error < 1e-12);
        assert_eq!(sum.meetings.get(&MeetingPoint::FirstDarting), Some(&5000));
    }

    #[test]
    fn zero_gamma_meets_at_origin_after_second_darting() {
        let inst = Instance::from_alpha(0.2).unwrap();
        let s = Strategy::one_rb(0.4);
        let g = darting_geometry(&inst, &s).unwrap();
        let out = simulate_trial(&inst, &s, &mut ScriptedCoins::rounds(&[(Ccw, Ccw)])).unwrap();
        assert_eq!(out.met_at, MeetingPoint::SecondDarting);
        assert!((out.total_time - (g.w + g.y)).abs() < 1e-12);
    }

    #[test]
    fn meeting_follows_coin_rule() {
        let inst = Instance::from_alpha(0.25).unwrap();
        let s = Strategy::new(Steps::Unbounded, 0.9, 0.7);
        for i in 0..200 {
            let mut coins = RngCoins::new(trial_rng(11, i));
            let mut replay = coins.clone();
            let out = simulate_trial(&inst, &s, &mut coins).unwrap();
            for _ in 1..out.rounds_elapsed {
                let (a, b) = (replay.flip(), replay.flip());
                assert_eq!(a, b, "a failed round needs equal coins");
            }
            let pair = (replay.flip(), replay.flip());
            let expect = match pair {
                (Ccw, Cw) => MeetingPoint::FirstDarting,
                (Cw, Ccw) => MeetingPoint::SecondDarting,
                _ => panic!("meeting with equal coins"),
            };
            assert_eq!(out.met_at, expect);
        }
    }

    #[test]
    fn exact_enumeration_one_step() {
        let inst = Instance::from_alpha(0.3).unwrap();
        let s = Strategy::new(Steps::Finite(1), 1.0, 0.8);
        let g = darting_geometry(&inst, &s).unwrap();
        let e = exact_enumeration(&inst, &s).unwrap();
        assert!((e - (g.w + 0.75 * g.d + 0.5 * g.x)).abs() < 1e-15);
    }

    #[test]
    fn exact_enumeration_matches_closed_form() {
        let inst = Instance::from_alpha(0.3).unwrap();
        for k in 1..=12 {
            let s = Strategy::new(Steps::Finite(k), 1.0, 0.8);
            let e = exact_enumeration(&inst, &s).unwrap();
            let t = expected_time(&inst, &s).unwrap();
            assert!((e - t).abs() < 1e-12, "k={k}: {e} vs {t}");
        }
        let s = Strategy::new(Steps::Finite(5), 1.0, 0.9);
        assert!(
            (exact_enumeration(&inst, &s).unwrap() - expected_time(&inst, &s).unwrap()).abs()
                < 1e-10
        );
    }

    #[test]
    fn exact_enumeration_refuses_deep_trees() {
        let inst = Instance::from_alpha(0.3).unwrap();
        for steps in [Steps::Finite(13), Steps::Unbounded] {
            let s = Strategy::new(steps, 1.0, 0.8);
            assert!(matches!(
                exact_enumeration(&inst, &s),
                Err(Error::EnumerationTooDeep { .. })
            ));
        }
    }

    #[test]
    fn worst_case_matches_energy() {
        let inst = Instance::from_alpha(0.3).unwrap();
        for s in [
            Strategy::go_to_origin(),
            Strategy::new(Steps::Finite(4), 0.9, 0.6),
            Strategy::new(Steps::Unbounded, 0.9, 0.6),
            Strategy::greedy_bisector(&inst),
        ] {
            let walked = worst_case_time(&inst, &s).unwrap().value();
            let closed = energy(&inst, &s).unwrap().value();
            assert!(
                (walked - closed).abs() < 1e-12 * closed.max(1.0),
                "{s:?}: {walked} vs {closed}"
            );
        }
        assert_eq!(
            worst_case_time(&inst, &Strategy::go_to_origin()).unwrap(),
            Energy::Finite(1.0)
        );
    }

    #[test]
    fn worst_case_infinite_when_disk_grows() {
        // Outside the admissible box: sin(b) sin(g) >= sin(a+b) sin(2a+g).
        let (a, b, g) = (0.2, 2.5, 2.4);
        assert!(!crate::geometry::shrink_condition(a, b, g));
        assert_eq!(
            worst_case_time_unvalidated(a, b, g, Steps::Unbounded).unwrap(),
            Energy::Infinite
        );
    }

    #[test]
    fn determinism_and_chunk_independence() {
        let (inst, s) = setup();
        let a = monte_carlo(&inst, &s, 10_000, 42).unwrap();
        let b = monte_carlo(&inst, &s, 10_000, 42).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let c = pool.install(|| monte_carlo(&inst, &s, 10_000, 42).unwrap());
        assert_eq!(a.mean_time.to_bits(), c.mean_time.to_bits());
        assert_eq!(a, c);
        let d = monte_carlo(&inst, &s, 10_000, 43).unwrap();
        assert_ne!(a.mean_time, d.mean_time);
    }

    #[test]
    fn histogram_accounts_for_every_trial() {
        let inst = Instance::from_alpha(0.4).unwrap();
        let s = Strategy::new(Steps::Unbounded, 0.7, 0.5);
        let sum = monte_carlo(&inst, &s, 20_000, 0).unwrap();
        assert_eq!(
            sum.round_histogram.values().sum::<u64>() + sum.truncated,
            sum.trials
        );
        assert_eq!(sum.meetings.values().sum::<u64>(), sum.completed());
        assert!(sum.agrees_with(expected_time(&inst, &s).unwrap(), 4.0));
    }

    #[test]
    fn zero_trials_rejected() {
        let (inst, s) = setup();
        assert!(monte_carlo(&inst, &s, 0, 0).is_err());
    }

    #[test]
    fn spiral_length_equals_energy() {
        let inst = Instance::from_alpha(0.2).unwrap();
        let s = Strategy::new(Steps::Unbounded, 1.0, 0.9);
        let pts = agent_trajectory(&inst, &s, TrajectoryMode::Spiral, 1e-12).unwrap();
        let total = pts.last().unwrap().elapsed;
        let e = energy(&inst, &s).unwrap().value();
        assert!((total - e).abs() < 1e-10, "{total} vs {e}");
        let random =
            agent_trajectory(&inst, &s, TrajectoryMode::Random { seed: 9 }, 1e-12).unwrap();
        assert!((random.last().unwrap().elapsed - e).abs() < 1e-10);
        // Points lie on the shrinking disks.
        let r = Point {
            x: pts[2].x,
            y: pts[2].y,
        }
        .norm();
        let g = darting_geometry(&inst, &s).unwrap();
        assert!((r - g.x).abs() < 1e-12);
    }
}
