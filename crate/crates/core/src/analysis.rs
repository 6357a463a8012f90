//! Verification machinery: brute-force geometric oracles, checks of the
//! classical SEC/hull properties, runtime lemma monitors, the even-`n`
//! livelock witness and sweep bookkeeping.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;
use thiserror::Error;

use crate::geometry::{
    circumcircle, convex_hull, make_sector_pair, points_coincide, sector_contains, smallest_enclosing_circle, Circle,
    GeometryError, Hull, Point, SectorKind, Tolerance,
};
use crate::model::{max_points, normalize, Configuration, Frame};
use crate::protocol::ActionKind;
use crate::sampling::random_team;
use crate::simulator::{
    run, Monitor, Robot, RunOutcome, RunStatus, SchedulerSpec, SimConfig, SimError, Strategy, TraceSink, Transition,
};
use crate::streams::{stream_rng, Stream};

/// Largest input accepted by [`brute_force_sec`].
pub const BRUTE_FORCE_MAX_POINTS: usize = 15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("brute-force oracle accepts at most {max} points, got {len}")]
    TooManyPoints { len: usize, max: usize },
    #[error("input is degenerate: {0}")]
    Degenerate(&'static str),
    #[error("point set is collinear")]
    CollinearSet,
    #[error("probe lies outside the convex hull")]
    ProbeOutsideHull,
    #[error("the livelock witness needs an even robot count >= 2, got {0}")]
    NotEven(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Result of a property check or a monitor evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub monitor: &'static str,
    pub violated: bool,
    /// Step of the violating transition, for run monitors.
    pub step: Option<u64>,
    pub description: String,
    /// Configuration at the violation; absent when nothing was violated.
    pub snapshot: Option<Configuration>,
}

impl MonitorReport {
    pub fn clean(monitor: &'static str) -> Self {
        MonitorReport {
            monitor,
            violated: false,
            step: None,
            description: String::new(),
            snapshot: None,
        }
    }

    pub fn violation(monitor: &'static str, step: Option<u64>, description: String, snapshot: Configuration) -> Self {
        MonitorReport {
            monitor,
            violated: true,
            step,
            description,
            snapshot: Some(snapshot),
        }
    }
}

fn singletons(pts: &[Point]) -> Configuration {
    Configuration::from_counts(pts.iter().map(|&p| (p, 1)), Tolerance::new(0.0).unwrap()).unwrap_or_default()
}

fn encloses_all(c: &Circle, pts: &[Point]) -> bool {
    let slack = 1e-12 * c.radius.max(1.0);
    pts.iter().all(|&p| c.center.dist(p) <= c.radius + slack)
}

/// Minimum enclosing circle over every pair-diameter and triple circumcircle
/// that encloses the set. Cubic-times-linear; a test oracle only.
pub fn brute_force_sec(pts: &[Point]) -> Result<Circle, AnalysisError> {
    if pts.is_empty() {
        return Err(GeometryError::Empty.into());
    }
    if pts.len() > BRUTE_FORCE_MAX_POINTS {
        return Err(AnalysisError::TooManyPoints {
            len: pts.len(),
            max: BRUTE_FORCE_MAX_POINTS,
        });
    }
    if pts.len() == 1 {
        return Ok(Circle::new(pts[0], 0.0));
    }
    let mut best: Option<Circle> = None;
    let mut consider = |c: Circle| {
        if encloses_all(&c, pts) && best.is_none_or(|b| c.radius < b.radius) {
            best = Some(c);
        }
    };
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let center = pts[i].midpoint(pts[j]);
            consider(Circle::new(center, pts[i].dist(pts[j]) / 2.0));
            for k in j + 1..pts.len() {
                if let Some(c) = circumcircle(pts[i], pts[j], pts[k]) {
                    consider(c);
                }
            }
        }
    }
    best.ok_or(AnalysisError::Degenerate("no candidate circle encloses the set"))
}

/// The circle passes through two diametrically opposite points of `pts`, or
/// through at least three of them.
pub fn has_boundary_support(pts: &[Point], sec: &Circle, tol: Tolerance) -> bool {
    if pts.len() == 1 {
        return sec.radius <= tol.eps();
    }
    let on: Vec<Point> = pts.iter().copied().filter(|&p| sec.on_boundary(p, tol)).collect();
    if on.len() >= 3 {
        return true;
    }
    on.len() == 2 && points_coincide(on[0].midpoint(on[1]), sec.center, tol)
}

/// Pushes every point on the enclosing circle toward its center by the
/// fraction `lambda` and reports whether the radius strictly shrank.
pub fn check_radius_decrease(pts: &[Point], lambda: f64, tol: Tolerance) -> Result<bool, AnalysisError> {
    if pts.len() < 2 {
        return Err(AnalysisError::Degenerate("need at least two points"));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(AnalysisError::Degenerate("lambda must lie in (0, 1]"));
    }
    let sec = smallest_enclosing_circle(pts)?;
    if sec.radius <= tol.eps() {
        return Err(AnalysisError::Degenerate("points are all at one location"));
    }
    let pushed: Vec<Point> = pts
        .iter()
        .map(|&p| {
            if sec.on_boundary(p, tol) {
                p + (sec.center - p) * lambda
            } else {
                p
            }
        })
        .collect();
    let moved = normalize(&pushed, Tolerance::new(0.0).unwrap()).point_vec();
    let shrunk = smallest_enclosing_circle(&moved)?;
    Ok(shrunk.radius < sec.radius)
}

/// With `c` the center of the smallest enclosing circle, no two points of
/// `pts` bound an empty concave sector at `c`.
pub fn check_no_empty_concave_sector(pts: &[Point], tol: Tolerance) -> Result<MonitorReport, AnalysisError> {
    const NAME: &str = "no_empty_concave_sector";
    if pts.len() < 2 {
        return Err(AnalysisError::Degenerate("need at least two points"));
    }
    let c = smallest_enclosing_circle(pts)?.center;
    for (i, &p) in pts.iter().enumerate() {
        for &pp in &pts[i + 1..] {
            if points_coincide(p, c, tol) || points_coincide(pp, c, tol) {
                continue;
            }
            let Some(pair) = make_sector_pair(p, pp, c, tol)? else {
                continue;
            };
            for side in pair.non_convex_sides() {
                if pair.kind(side) != SectorKind::Concave {
                    continue;
                }
                if !pts.iter().any(|&q| sector_contains(&pair, side, q, tol)) {
                    return Ok(MonitorReport::violation(
                        NAME,
                        None,
                        format!("empty concave sector at {c:?} bounded by {p:?} and {pp:?}"),
                        singletons(pts),
                    ));
                }
            }
        }
    }
    Ok(MonitorReport::clean(NAME))
}

/// Whether some concave or straight sector at `probe`, bounded by two points
/// of `pts`, contains no point of `pts`.
pub fn has_empty_non_convex_sector(pts: &[Point], probe: Point, tol: Tolerance) -> Result<bool, AnalysisError> {
    let rays: Vec<Point> = pts
        .iter()
        .copied()
        .filter(|&p| !points_coincide(p, probe, tol))
        .collect();
    for (i, &r) in rays.iter().enumerate() {
        for &rp in &rays[i + 1..] {
            if points_coincide(r, rp, tol) {
                continue;
            }
            let Some(pair) = make_sector_pair(r, rp, probe, tol)? else {
                continue;
            };
            for side in pair.non_convex_sides() {
                if !pts.iter().any(|&q| sector_contains(&pair, side, q, tol)) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// For `probe` in the closed hull of non-collinear `pts`: "probe is on the
/// hull boundary" agrees with "an empty concave-or-straight sector exists at
/// probe". Returns whether the two sides agree.
pub fn check_hull_sector_equivalence(pts: &[Point], probe: Point, tol: Tolerance) -> Result<bool, AnalysisError> {
    let hull = convex_hull(pts)?;
    if !matches!(hull, Hull::Polygon(_)) {
        return Err(AnalysisError::CollinearSet);
    }
    if !hull.contains(probe, tol) {
        return Err(AnalysisError::ProbeOutsideHull);
    }
    let on_hull = hull.on_boundary(probe, tol);
    Ok(on_hull == has_empty_non_convex_sector(pts, probe, tol)?)
}

/// Every point on the smallest enclosing circle is on the hull boundary.
pub fn check_sec_points_on_hull(pts: &[Point], tol: Tolerance) -> Result<bool, AnalysisError> {
    if pts.len() < 2 {
        return Err(AnalysisError::Degenerate("need at least two points"));
    }
    let sec = smallest_enclosing_circle(pts)?;
    let hull = convex_hull(pts)?;
    Ok(pts
        .iter()
        .filter(|&&p| sec.on_boundary(p, tol))
        .all(|&p| hull.on_boundary(p, tol)))
}

fn sec_of(cfg: &Configuration) -> Option<Circle> {
    smallest_enclosing_circle(&cfg.point_vec()).ok()
}

fn max_of(cfg: &Configuration) -> Vec<Point> {
    max_points(cfg).unwrap_or_default()
}

/// Once gathered, robots stay gathered on the same point.
pub struct ClosureMonitor;

impl Monitor for ClosureMonitor {
    fn name(&self) -> &'static str {
        "closure"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        if !tr.before_cfg.is_gathered() {
            return None;
        }
        let p = tr.before_cfg.occupied()[0].point;
        let held = tr.after_cfg.is_gathered() && points_coincide(tr.after_cfg.occupied()[0].point, p, tr.tol);
        (!held).then(|| {
            MonitorReport::violation(
                self.name(),
                Some(tr.before.t),
                format!("gathered at {p:?} but split into {} points", tr.after_cfg.len()),
                tr.after_cfg.clone(),
            )
        })
    }
}

/// A unique maximal point stays the unique maximal point.
pub struct UniqueMaxPersistence;

impl Monitor for UniqueMaxPersistence {
    fn name(&self) -> &'static str {
        "unique_max_persistence"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        let before = max_of(tr.before_cfg);
        if before.len() != 1 {
            return None;
        }
        let after = max_of(tr.after_cfg);
        let held = after.len() == 1 && points_coincide(after[0], before[0], tr.tol);
        (!held).then(|| {
            MonitorReport::violation(
                self.name(),
                Some(tr.before.t),
                format!("unique max {:?} became {:?}", before[0], after),
                tr.after_cfg.clone(),
            )
        })
    }
}

/// A step starting with two maximal points never ends with three or more.
pub struct TwoMaxNoEscalation;

impl Monitor for TwoMaxNoEscalation {
    fn name(&self) -> &'static str {
        "two_max_no_escalation"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        if max_of(tr.before_cfg).len() != 2 {
            return None;
        }
        let after = max_of(tr.after_cfg).len();
        (after >= 3).then(|| {
            MonitorReport::violation(
                self.name(),
                Some(tr.before.t),
                format!("two maximal points escalated to {after}"),
                tr.after_cfg.clone(),
            )
        })
    }
}

/// While `|MaxP| ≥ 3` persists, robots strictly inside the enclosing circle
/// stay strictly inside the next one.
pub struct InsideStaysInside;

impl Monitor for InsideStaysInside {
    fn name(&self) -> &'static str {
        "inside_stays_inside"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        if max_of(tr.before_cfg).len() < 3 || max_of(tr.after_cfg).len() < 3 {
            return None;
        }
        let (sec_b, sec_a) = (sec_of(tr.before_cfg)?, sec_of(tr.after_cfg)?);
        let escaped = tr
            .before
            .robots
            .iter()
            .zip(&tr.after.robots)
            .position(|(b, a)| sec_b.strictly_inside(b.pos, tr.tol) && !sec_a.strictly_inside(a.pos, tr.tol))?;
        Some(MonitorReport::violation(
            self.name(),
            Some(tr.before.t),
            format!("robot {escaped} left the interior of the enclosing circle"),
            tr.after_cfg.clone(),
        ))
    }
}

/// When boundary robots move straight toward the center `c` while some
/// robot is inside, and every boundary point keeps a robot short of `c`,
/// then `c` is strictly inside the next enclosing circle. Steps where the
/// hypotheses do not hold are skipped.
pub struct CenterContainment;

impl CenterContainment {
    /// The old center when the monitor's hypotheses hold on `tr`.
    pub fn hypotheses_hold(tr: &Transition<'_>) -> Option<Point> {
        let tol = tr.tol;
        if max_of(tr.before_cfg).len() < 3 {
            return None;
        }
        let sec = sec_of(tr.before_cfg)?;
        let c = sec.center;
        if !tr.before_cfg.points().any(|p| sec.strictly_inside(p, tol)) {
            return None;
        }
        let boundary: Vec<Point> = tr.before_cfg.points().filter(|&p| sec.on_boundary(p, tol)).collect();
        let on_boundary = |pos: Point| boundary.iter().any(|&b| points_coincide(b, pos, tol));

        let boundary_mover = tr.events.iter().zip(&tr.before.robots).any(|(e, r)| {
            on_boundary(r.pos)
                && e.action == Some(ActionKind::MoveDirect)
                && e.target.is_some_and(|t| points_coincide(t, c, tol))
                && e.new_pos != r.pos
        });
        let every_point_keeps_one = boundary.iter().all(|&b| {
            tr.before
                .robots
                .iter()
                .zip(&tr.after.robots)
                .any(|(rb, ra)| points_coincide(rb.pos, b, tol) && !points_coincide(ra.pos, c, tol))
        });
        (boundary_mover && every_point_keeps_one).then_some(c)
    }
}

impl Monitor for CenterContainment {
    fn name(&self) -> &'static str {
        "center_containment"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        let c = Self::hypotheses_hold(tr)?;
        let next = sec_of(tr.after_cfg)?;
        (!next.strictly_inside(c, tr.tol)).then(|| {
            MonitorReport::violation(
                self.name(),
                Some(tr.before.t),
                format!("old center {c:?} is not strictly inside the new circle {next:?}"),
                tr.after_cfg.clone(),
            )
        })
    }
}

/// With `|MaxP| ≥ 3` and a nonempty interior, the enclosing radius never
/// grows, and shrinks strictly when every robot on the circle moved inward.
pub struct RadiusProgress;

impl Monitor for RadiusProgress {
    fn name(&self) -> &'static str {
        "radius_progress"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        let tol = tr.tol;
        if max_of(tr.before_cfg).len() < 3 {
            return None;
        }
        let sec = sec_of(tr.before_cfg)?;
        if !tr.before_cfg.points().any(|p| sec.strictly_inside(p, tol)) {
            return None;
        }
        let next = sec_of(tr.after_cfg)?;
        if next.radius > sec.radius + tol.eps() {
            return Some(MonitorReport::violation(
                self.name(),
                Some(tr.before.t),
                format!("radius grew from {} to {}", sec.radius, next.radius),
                tr.after_cfg.clone(),
            ));
        }
        let all_boundary_moved = tr
            .before
            .robots
            .iter()
            .zip(&tr.after.robots)
            .filter(|(b, _)| sec.on_boundary(b.pos, tol))
            .all(|(b, a)| a.pos.dist(sec.center) < b.pos.dist(sec.center));
        (all_boundary_moved && next.radius >= sec.radius).then(|| {
            MonitorReport::violation(
                self.name(),
                Some(tr.before.t),
                format!("every boundary robot moved inward but radius stayed {}", sec.radius),
                tr.after_cfg.clone(),
            )
        })
    }
}

/// With one or two maximal points, robots on distinct points never merge
/// anywhere except on a maximal point.
pub struct CarefulMoveSeparation;

impl Monitor for CarefulMoveSeparation {
    fn name(&self) -> &'static str {
        "careful_move_separation"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        let tol = tr.tol;
        let max_pts = max_of(tr.before_cfg);
        if !(1..=2).contains(&max_pts.len()) {
            return None;
        }
        let at_max = |q: Point| max_pts.iter().any(|&m| points_coincide(m, q, tol));
        let robots: Vec<(Point, Point)> = tr
            .before
            .robots
            .iter()
            .zip(&tr.after.robots)
            .map(|(b, a)| (b.pos, a.pos))
            .collect();
        for (i, &(bi, ai)) in robots.iter().enumerate() {
            for (j, &(bj, aj)) in robots.iter().enumerate().skip(i + 1) {
                if points_coincide(bi, bj, tol) || at_max(ai) || at_max(aj) {
                    continue;
                }
                if points_coincide(ai, aj, tol) {
                    return Some(MonitorReport::violation(
                        self.name(),
                        Some(tr.before.t),
                        format!("robots {i} and {j} merged at {ai:?} off the maximal points"),
                        tr.after_cfg.clone(),
                    ));
                }
            }
        }
        None
    }
}

/// The even-`n` witness keeps exactly two occupied points.
pub struct TwoPointWitness;

impl Monitor for TwoPointWitness {
    fn name(&self) -> &'static str {
        "two_point_witness"
    }

    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport> {
        (tr.after_cfg.len() != 2).then(|| {
            MonitorReport::violation(
                self.name(),
                Some(tr.before.t),
                format!("witness has {} occupied points", tr.after_cfg.len()),
                tr.after_cfg.clone(),
            )
        })
    }
}

/// Which lemma monitors to attach to a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonitorToggles {
    pub closure: bool,
    pub unique_max_persistence: bool,
    pub two_max_no_escalation: bool,
    pub inside_stays_inside: bool,
    pub center_containment: bool,
    pub radius_progress: bool,
    pub careful_move_separation: bool,
}

impl MonitorToggles {
    pub const ALL: MonitorToggles = MonitorToggles {
        closure: true,
        unique_max_persistence: true,
        two_max_no_escalation: true,
        inside_stays_inside: true,
        center_containment: true,
        radius_progress: true,
        careful_move_separation: true,
    };

    pub const NONE: MonitorToggles = MonitorToggles {
        closure: false,
        unique_max_persistence: false,
        two_max_no_escalation: false,
        inside_stays_inside: false,
        center_containment: false,
        radius_progress: false,
        careful_move_separation: false,
    };
}

impl Default for MonitorToggles {
    fn default() -> Self {
        MonitorToggles::ALL
    }
}

pub fn attach_lemma_monitors(toggles: &MonitorToggles) -> Vec<Box<dyn Monitor>> {
    let mut monitors: Vec<Box<dyn Monitor>> = Vec::new();
    if toggles.closure {
        monitors.push(Box::new(ClosureMonitor));
    }
    if toggles.unique_max_persistence {
        monitors.push(Box::new(UniqueMaxPersistence));
    }
    if toggles.two_max_no_escalation {
        monitors.push(Box::new(TwoMaxNoEscalation));
    }
    if toggles.inside_stays_inside {
        monitors.push(Box::new(InsideStaysInside));
    }
    if toggles.center_containment {
        monitors.push(Box::new(CenterContainment));
    }
    if toggles.radius_progress {
        monitors.push(Box::new(RadiusProgress));
    }
    if toggles.careful_move_separation {
        monitors.push(Box::new(CarefulMoveSeparation));
    }
    monitors
}

/// The symmetric even-`n` start: `n/2` robots on each of two points, with
/// frames mirrored across the perpendicular bisector.
pub fn even_witness_team(n: usize) -> Result<Vec<Robot>, AnalysisError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(AnalysisError::NotEven(n));
    }
    let (rotation, scale) = (0.3, 1.3);
    let left = Frame::new(rotation, scale, Point::ORIGIN, false).expect("valid frame");
    // mirroring x -> -x equals a half-turn composed with the y-flip
    let right = Frame::new(rotation + core::f64::consts::PI, scale, Point::ORIGIN, true).expect("valid frame");
    let mut team = Vec::with_capacity(n);
    for _ in 0..n / 2 {
        team.push(Robot {
            pos: Point::new(-0.5, 0.0),
            sigma: 1.0,
            frame: left,
        });
        team.push(Robot {
            pos: Point::new(0.5, 0.0),
            sigma: 1.0,
            frame: right,
        });
    }
    Ok(team)
}

/// Runs the even-`n` witness synchronously for `steps` steps with every
/// lemma monitor plus the two-point monitor attached.
pub fn even_livelock_demo(n_even: usize, steps: u64, sink: &mut dyn TraceSink) -> Result<RunOutcome, AnalysisError> {
    let team = even_witness_team(n_even)?;
    let spec = SchedulerSpec::with_default_bound(Strategy::Synchronous, 0, n_even);
    let config = SimConfig {
        max_steps: steps,
        ..SimConfig::for_robots(n_even)
    };
    let mut monitors = attach_lemma_monitors(&MonitorToggles::ALL);
    monitors.push(Box::new(TwoPointWitness));
    Ok(run(team, spec, &config, &mut monitors, sink)?)
}

/// How a sweep builds its initial configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initializer {
    Random,
    EvenWitness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub init: Initializer,
    pub tol: Tolerance,
    /// Defaults to `10000 · n` when unset.
    pub max_steps: Option<u64>,
    pub monitors: MonitorToggles,
}

impl SweepPlan {
    pub fn new(n: usize, runs: usize, seed: u64, strategy: Strategy) -> Self {
        SweepPlan {
            n,
            runs,
            seed,
            strategy,
            init: Initializer::Random,
            tol: Tolerance::default(),
            max_steps: None,
            monitors: MonitorToggles::ALL,
        }
    }

    /// One seed per run, drawn in order from the sweep stream.
    pub fn run_seeds(&self) -> Vec<u64> {
        let mut rng = stream_rng(self.seed, Stream::Sweep);
        (0..self.runs).map(|_| rng.next_u64()).collect()
    }

    /// Executes run `index` with the given per-run seed. Independent of
    /// every other run.
    pub fn run_one(&self, index: usize, run_seed: u64) -> Result<RunRecord, AnalysisError> {
        let team = match self.init {
            Initializer::Random => random_team(&mut stream_rng(run_seed, Stream::Initializer), self.n, self.tol),
            Initializer::EvenWitness => even_witness_team(self.n)?,
        };
        let spec = SchedulerSpec::with_default_bound(self.strategy.clone(), run_seed, self.n);
        let mut config = SimConfig::for_robots(self.n);
        config.step.tol = self.tol;
        if let Some(m) = self.max_steps {
            config.max_steps = m;
        }
        let mut monitors = attach_lemma_monitors(&self.monitors);
        if self.init == Initializer::EvenWitness {
            monitors.push(Box::new(TwoPointWitness));
        }
        let outcome = run(team, spec, &config, &mut monitors, &mut crate::simulator::NullSink)?;
        let mut violations: BTreeMap<&'static str, usize> = BTreeMap::new();
        for v in &outcome.violations {
            *violations.entry(v.monitor).or_default() += 1;
        }
        Ok(RunRecord {
            index,
            seed: run_seed,
            n: self.n,
            scheduler: self.strategy.name(),
            status: outcome.status,
            steps: outcome.final_t,
            violations,
        })
    }

    /// Runs every index sequentially.
    pub fn execute(&self) -> Result<(Vec<RunRecord>, SweepSummary), AnalysisError> {
        let records = self
            .run_seeds()
            .into_iter()
            .enumerate()
            .map(|(i, s)| self.run_one(i, s))
            .collect::<Result<Vec<_>, _>>()?;
        let summary = SweepSummary::from_records(&records);
        Ok((records, summary))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub scheduler: &'static str,
    pub status: RunStatus,
    /// Steps to gather, or the step limit.
    pub steps: u64,
    pub violations: BTreeMap<&'static str, usize>,
}

impl RunRecord {
    pub fn violation_count(&self) -> usize {
        self.violations.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSummary {
    pub runs: usize,
    pub gathered: usize,
    pub step_limit: usize,
    pub max_steps_to_gather: Option<u64>,
    pub violations: BTreeMap<&'static str, usize>,
}

impl SweepSummary {
    pub fn from_records(records: &[RunRecord]) -> Self {
        let mut s = SweepSummary {
            runs: records.len(),
            ..SweepSummary::default()
        };
        for r in records {
            match r.status {
                RunStatus::Gathered => {
                    s.gathered += 1;
                    s.max_steps_to_gather = Some(s.max_steps_to_gather.map_or(r.steps, |m| m.max(r.steps)));
                }
                RunStatus::StepLimitReached => s.step_limit += 1,
            }
            for (&k, &v) in &r.violations {
                *s.violations.entry(k).or_default() += v;
            }
        }
        s
    }

    pub fn total_violations(&self) -> usize {
        self.violations.values().sum()
    }
}
