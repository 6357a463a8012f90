//! Semi-synchronous execution: fair schedulers, capped motion, snapshot
//! steps, trace events and monitored runs.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::MonitorReport;
use crate::geometry::{smallest_enclosing_circle, GeometryError, Point, Tolerance};
use crate::model::{normalize_with_assignment, observe, Configuration, DetectionMode, Frame};
use crate::protocol::{decide, path_is_clear, Action, ActionKind, Branch, ProtocolError};
use crate::sampling::random_frame;
use crate::streams::{stream_rng, Stream};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("robot {index}: sigma must be finite and positive, got {sigma}")]
    InvalidSigma { index: usize, sigma: f64 },
    #[error("robot position must be finite")]
    NonFinitePosition,
    #[error("a run needs at least one robot")]
    NoRobots,
    #[error("activation set is empty")]
    EmptyActiveSet,
    #[error("robot index {0} out of range")]
    UnknownRobot(usize),
    #[error("fairness bound must be at least 1")]
    ZeroFairnessBound,
    #[error("max_steps must be at least 1")]
    ZeroMaxSteps,
    #[error("robot {robot}: {source}")]
    Protocol {
        robot: usize,
        #[source]
        source: ProtocolError,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Robot {
    pub pos: Point,
    /// Maximum distance travelled in one activation.
    pub sigma: f64,
    pub frame: Frame,
}

impl Robot {
    pub fn new(pos: Point, sigma: f64, frame: Frame) -> Result<Self, SimError> {
        if !pos.is_finite() {
            return Err(SimError::NonFinitePosition);
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(SimError::InvalidSigma { index: 0, sigma });
        }
        Ok(Robot { pos, sigma, frame })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Synchronous,
    RoundRobin,
    RandomSubset,
    /// Activates only robots on the smallest enclosing circle, unless
    /// fairness forces someone else in.
    BoundaryOnlyAdversary,
    /// Cycles through the given activation sets.
    Scripted(Vec<Vec<usize>>),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Synchronous => "synchronous",
            Strategy::RoundRobin => "round_robin",
            Strategy::RandomSubset => "random_subset",
            Strategy::BoundaryOnlyAdversary => "boundary_only_adversary",
            Strategy::Scripted(_) => "scripted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulerSpec {
    pub strategy: Strategy,
    pub seed: u64,
    /// Every robot is activated at least once in any window of this many
    /// consecutive steps.
    pub fairness_bound: usize,
}

impl SchedulerSpec {
    pub fn new(strategy: Strategy, seed: u64, fairness_bound: usize) -> Result<Self, SimError> {
        if fairness_bound == 0 {
            return Err(SimError::ZeroFairnessBound);
        }
        Ok(SchedulerSpec {
            strategy,
            seed,
            fairness_bound,
        })
    }

    /// Default fairness window: `3n`.
    pub fn with_default_bound(strategy: Strategy, seed: u64, n: usize) -> Self {
        SchedulerSpec {
            strategy,
            seed,
            fairness_bound: (3 * n).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: u64,
    pub robots: Vec<Robot>,
    /// Step at which each robot was last activated.
    pub last_active: Vec<Option<u64>>,
}

impl SimState {
    pub fn new(robots: Vec<Robot>) -> Result<Self, SimError> {
        if robots.is_empty() {
            return Err(SimError::NoRobots);
        }
        for (index, r) in robots.iter().enumerate() {
            if !(r.sigma.is_finite() && r.sigma > 0.0) {
                return Err(SimError::InvalidSigma { index, sigma: r.sigma });
            }
            if !r.pos.is_finite() {
                return Err(SimError::NonFinitePosition);
            }
        }
        let n = robots.len();
        Ok(SimState {
            t: 0,
            robots,
            last_active: alloc::vec![None; n],
        })
    }

    pub fn positions(&self) -> Vec<Point> {
        self.robots.iter().map(|r| r.pos).collect()
    }

    pub fn configuration(&self, tol: Tolerance) -> Configuration {
        normalize_with_assignment(&self.positions(), tol).0
    }

    /// Consecutive steps robot `i` has gone without activation.
    pub fn idle_steps(&self, i: usize) -> u64 {
        match self.last_active[i] {
            Some(last) => self.t - last - 1,
            None => self.t,
        }
    }

    /// Moves every robot onto its cluster representative so that coinciding
    /// robots share bit-identical coordinates.
    fn snap(&mut self, tol: Tolerance) -> Configuration {
        let (cfg, assignment) = normalize_with_assignment(&self.positions(), tol);
        for (r, &k) in self.robots.iter_mut().zip(&assignment) {
            r.pos = cfg.occupied()[k].point;
        }
        cfg
    }
}

pub struct Scheduler {
    spec: SchedulerSpec,
    rng: ChaCha8Rng,
}

impl Scheduler {
    pub fn new(spec: SchedulerSpec) -> Self {
        let rng = stream_rng(spec.seed, Stream::Scheduler);
        Scheduler { spec, rng }
    }

    pub fn spec(&self) -> &SchedulerSpec {
        &self.spec
    }

    /// Activation set for the step starting at `state.t`: the strategy's
    /// choice, plus every robot idle for `K - 1` steps. Never empty; sorted.
    pub fn next_active(&mut self, state: &SimState, tol: Tolerance) -> Vec<usize> {
        let n = state.robots.len();
        let mut chosen = alloc::vec![false; n];
        match &self.spec.strategy {
            Strategy::Synchronous => chosen.iter_mut().for_each(|c| *c = true),
            Strategy::RoundRobin => chosen[(state.t % n as u64) as usize] = true,
            Strategy::RandomSubset => {
                for c in chosen.iter_mut() {
                    *c = self.rng.random_bool(0.5);
                }
            }
            Strategy::BoundaryOnlyAdversary => {
                let cfg = state.configuration(tol);
                match smallest_enclosing_circle(&cfg.point_vec()) {
                    Ok(sec) if cfg.len() > 1 => {
                        for (c, r) in chosen.iter_mut().zip(&state.robots) {
                            *c = sec.on_boundary(r.pos, tol);
                        }
                    }
                    _ => chosen.iter_mut().for_each(|c| *c = true),
                }
            }
            Strategy::Scripted(script) => {
                if !script.is_empty() {
                    let entry = &script[(state.t % script.len() as u64) as usize];
                    for &i in entry.iter().filter(|&&i| i < n) {
                        chosen[i] = true;
                    }
                }
            }
        }

        let bound = self.spec.fairness_bound as u64;
        for (i, c) in chosen.iter_mut().enumerate() {
            if state.idle_steps(i) + 1 >= bound {
                *c = true;
            }
        }
        if !chosen.iter().any(|&c| c) {
            let longest = (0..n).max_by_key(|&i| (state.idle_steps(i), core::cmp::Reverse(i)));
            chosen[longest.unwrap_or(0)] = true;
        }
        (0..n).filter(|&i| chosen[i]).collect()
    }
}

/// Moves toward `target` by at most `sigma`; lands exactly on the target
/// when it is within reach.
pub fn apply_motion(robot: &Robot, target: Point) -> Point {
    let d = robot.pos.dist(target);
    if d <= robot.sigma {
        target
    } else {
        robot.pos + (target - robot.pos) * (robot.sigma / d)
    }
}

/// One robot's record for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub t: u64,
    pub robot: usize,
    pub activated: bool,
    pub branch: Option<Branch>,
    pub action: Option<ActionKind>,
    /// Target in global coordinates.
    pub target: Option<Point>,
    pub new_pos: Point,
}

pub trait TraceSink {
    fn record(&mut self, event: &TraceEvent);
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: &TraceEvent) {
        self.push(*event);
    }
}

/// Discards every event.
pub struct NullSink;

impl TraceSink for NullSink {
    fn record(&mut self, _event: &TraceEvent) {}
}

/// Knobs that shape how a robot looks and moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub mode: DetectionMode,
    pub tol: Tolerance,
    /// Each robot sees itself at its local origin.
    pub observer_at_origin: bool,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions {
            mode: DetectionMode::Strong,
            tol: Tolerance::default(),
            observer_at_origin: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub state: SimState,
    pub events: Vec<TraceEvent>,
}

/// Executes one look-compute-move step. Every active robot observes the same
/// pre-step configuration; new positions are committed together.
pub fn step(state: &SimState, active: &[usize], opts: &StepOptions) -> Result<StepResult, SimError> {
    if active.is_empty() {
        return Err(SimError::EmptyActiveSet);
    }
    let n = state.robots.len();
    if let Some(&bad) = active.iter().find(|&&i| i >= n) {
        return Err(SimError::UnknownRobot(bad));
    }
    let tol = opts.tol;
    let cfg = state.configuration(tol);

    let mut next = state.clone();
    let mut events = Vec::with_capacity(n);
    for (i, robot) in state.robots.iter().enumerate() {
        let mut event = TraceEvent {
            t: state.t,
            robot: i,
            activated: false,
            branch: None,
            action: None,
            target: None,
            new_pos: robot.pos,
        };
        if active.contains(&i) {
            let frame = if opts.observer_at_origin {
                robot.frame.with_origin(robot.pos)
            } else {
                robot.frame
            };
            let view = observe(&cfg, &frame, opts.mode);
            let decision = decide(&view, frame.to_local(robot.pos), opts.mode, tol)
                .map_err(|source| SimError::Protocol { robot: i, source })?;
            let target = decision.action.target().map(|t| frame.to_global(t));
            let new_pos = match (decision.action, target) {
                (Action::MoveCareful(_), Some(t)) if !path_is_clear(cfg.points(), robot.pos, t, tol) => robot.pos,
                (_, Some(t)) => apply_motion(robot, t),
                (_, None) => robot.pos,
            };
            next.robots[i].pos = new_pos;
            next.last_active[i] = Some(state.t);
            event = TraceEvent {
                activated: true,
                branch: Some(decision.branch),
                action: Some(decision.action.kind()),
                target,
                new_pos,
                ..event
            };
        }
        events.push(event);
    }
    next.t = state.t + 1;
    next.snap(tol);
    for (e, r) in events.iter_mut().zip(&next.robots) {
        e.new_pos = r.pos;
    }
    Ok(StepResult { state: next, events })
}

/// A state transition handed to monitors.
pub struct Transition<'a> {
    pub before: &'a SimState,
    pub after: &'a SimState,
    pub before_cfg: &'a Configuration,
    pub after_cfg: &'a Configuration,
    pub events: &'a [TraceEvent],
    pub tol: Tolerance,
}

/// A runtime check evaluated on every transition of a run.
pub trait Monitor {
    fn name(&self) -> &'static str;
    /// Returns a report when the transition violates the monitored property.
    fn check(&mut self, tr: &Transition<'_>) -> Option<MonitorReport>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Gathered,
    StepLimitReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub final_t: u64,
    pub final_config: Configuration,
    pub violations: Vec<MonitorReport>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub step: StepOptions,
    pub max_steps: u64,
    /// Stop as soon as the robots have gathered.
    pub stop_when_gathered: bool,
    /// Draw a fresh frame for each robot at every activation.
    pub rerandomize_frames: bool,
}

impl SimConfig {
    /// Defaults for `n` robots: strong detection, default tolerance,
    /// `10000 · n` steps.
    pub fn for_robots(n: usize) -> Self {
        SimConfig {
            step: StepOptions::default(),
            max_steps: 10_000 * n.max(1) as u64,
            stop_when_gathered: true,
            rerandomize_frames: false,
        }
    }
}

/// Runs from `initial` until gathered or `max_steps` steps have elapsed.
/// Monitor violations are collected, never fatal.
pub fn run(
    initial: Vec<Robot>,
    spec: SchedulerSpec,
    config: &SimConfig,
    monitors: &mut [Box<dyn Monitor>],
    sink: &mut dyn TraceSink,
) -> Result<RunOutcome, SimError> {
    if config.max_steps == 0 {
        return Err(SimError::ZeroMaxSteps);
    }
    if spec.fairness_bound == 0 {
        return Err(SimError::ZeroFairnessBound);
    }
    let tol = config.step.tol;
    let mut state = SimState::new(initial)?;
    if state.robots.len() % 2 == 0 {
        log::warn!(
            "running {} robots: gathering is only guaranteed for an odd count",
            state.robots.len()
        );
    }
    let frame_seed = spec.seed;
    let mut scheduler = Scheduler::new(spec);
    let mut frame_rng = stream_rng(frame_seed, Stream::Frames);
    let mut cfg = state.snap(tol);
    let mut violations = Vec::new();

    while state.t < config.max_steps && !(config.stop_when_gathered && cfg.is_gathered()) {
        let active = scheduler.next_active(&state, tol);
        if config.rerandomize_frames {
            for &i in &active {
                state.robots[i].frame = random_frame(&mut frame_rng);
            }
        }
        let StepResult { state: next, events } = step(&state, &active, &config.step)?;
        let next_cfg = next.configuration(tol);
        for e in &events {
            sink.record(e);
        }
        let tr = Transition {
            before: &state,
            after: &next,
            before_cfg: &cfg,
            after_cfg: &next_cfg,
            events: &events,
            tol,
        };
        for m in monitors.iter_mut() {
            if let Some(report) = m.check(&tr) {
                violations.push(report);
            }
        }
        state = next;
        cfg = next_cfg;
    }

    Ok(RunOutcome {
        status: if cfg.is_gathered() {
            RunStatus::Gathered
        } else {
            RunStatus::StepLimitReached
        },
        final_t: state.t,
        final_config: cfg,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn robot(x: f64, y: f64, sigma: f64) -> Robot {
        Robot::new(p(x, y), sigma, Frame::identity()).unwrap()
    }

    fn state(robots: Vec<Robot>) -> SimState {
        SimState::new(robots).unwrap()
    }

    #[test]
    fn motion_cap() {
        let r = robot(0.0, 0.0, 1.0);
        assert_eq!(apply_motion(&r, p(0.5, 0.0)), p(0.5, 0.0));
        assert_eq!(apply_motion(&r, p(3.0, 0.0)), p(1.0, 0.0));
        let m = apply_motion(&r, p(3.0, 4.0));
        assert!((m.x - 0.6).abs() < 1e-15 && (m.y - 0.8).abs() < 1e-15);
    }

    #[test]
    fn robot_rejects_bad_sigma() {
        assert!(Robot::new(p(0.0, 0.0), 0.0, Frame::identity()).is_err());
        assert!(matches!(
            SimState::new(vec![
                robot(0.0, 0.0, 1.0),
                Robot {
                    sigma: -1.0,
                    ..robot(0.0, 0.0, 1.0)
                }
            ]),
            Err(SimError::InvalidSigma { index: 1, .. })
        ));
        assert_eq!(SimState::new(vec![]), Err(SimError::NoRobots));
    }

    #[test]
    fn synchronous_and_round_robin() {
        let tol = Tolerance::default();
        let s = state((0..5).map(|i| robot(i as f64, 0.0, 1.0)).collect());
        let mut sync = Scheduler::new(SchedulerSpec::new(Strategy::Synchronous, 0, 15).unwrap());
        assert_eq!(sync.next_active(&s, tol), vec![0, 1, 2, 3, 4]);

        let mut s3 = state((0..3).map(|i| robot(i as f64, 0.0, 1.0)).collect());
        s3.t = 4;
        s3.last_active = vec![Some(3), Some(3), Some(3)];
        let mut rr = Scheduler::new(SchedulerSpec::new(Strategy::RoundRobin, 0, 9).unwrap());
        assert_eq!(rr.next_active(&s3, tol), vec![1]);
    }

    #[test]
    fn fairness_forces_idle_robot() {
        let tol = Tolerance::default();
        let k = 4;
        let mut s = state((0..3).map(|i| robot(i as f64, 0.0, 1.0)).collect());
        s.t = 10;
        s.last_active = vec![Some(9), Some(9), Some(6)];
        assert_eq!(s.idle_steps(2), k as u64 - 1);
        let spec = SchedulerSpec::new(Strategy::Scripted(vec![vec![0]]), 3, k).unwrap();
        let mut sched = Scheduler::new(spec);
        assert_eq!(sched.next_active(&s, tol), vec![0, 2]);
    }

    #[test]
    fn empty_script_still_activates_someone() {
        let tol = Tolerance::default();
        let s = state((0..3).map(|i| robot(i as f64, 0.0, 1.0)).collect());
        let mut sched = Scheduler::new(SchedulerSpec::new(Strategy::Scripted(vec![vec![]]), 0, 100).unwrap());
        assert_eq!(sched.next_active(&s, tol), vec![0]);
    }

    #[test]
    fn step_collinear_trio() {
        let s = state(vec![robot(0.0, 0.0, 1.0), robot(2.0, 0.0, 1.0), robot(4.0, 0.0, 1.0)]);
        let r = step(&s, &[0, 1, 2], &StepOptions::default()).unwrap();
        let pos = r.state.positions();
        assert!(pos[0].dist(p(1.0, 0.0)) < 1e-12);
        assert_eq!(pos[1], p(2.0, 0.0));
        assert!(pos[2].dist(p(3.0, 0.0)) < 1e-12);
        assert_eq!(r.state.t, 1);
        assert_eq!(r.events[1].branch, Some(Branch::InsideAtCenter));
        assert_eq!(r.events[1].action, Some(ActionKind::Stay));
    }

    #[test]
    fn step_gathered_is_fixed_point() {
        let s = state(vec![robot(1.0, 1.0, 1.0); 3]);
        let r = step(&s, &[0, 2], &StepOptions::default()).unwrap();
        assert_eq!(r.state.positions(), s.positions());
        assert_eq!(r.state.t, 1);
    }

    #[test]
    fn careful_move_blocked_behind_robot() {
        // unique max at the origin; the robot at (4,0) is blocked by (2,0)
        let mut robots = vec![robot(0.0, 0.0, 10.0); 3];
        robots.push(robot(2.0, 0.0, 10.0));
        robots.push(robot(4.0, 0.0, 10.0));
        let s = state(robots);
        let r = step(&s, &[4], &StepOptions::default()).unwrap();
        assert_eq!(r.state.robots[4].pos, p(4.0, 0.0));
        assert_eq!(r.events[4].action, Some(ActionKind::MoveCareful));
        let r = step(&s, &[3, 4], &StepOptions::default()).unwrap();
        assert_eq!(r.state.robots[3].pos, p(0.0, 0.0));
        assert_eq!(r.state.robots[4].pos, p(4.0, 0.0));
    }

    #[test]
    fn step_rejects_bad_active_sets() {
        let s = state(vec![robot(0.0, 0.0, 1.0)]);
        assert!(matches!(
            step(&s, &[], &StepOptions::default()),
            Err(SimError::EmptyActiveSet)
        ));
        assert!(matches!(
            step(&s, &[3], &StepOptions::default()),
            Err(SimError::UnknownRobot(3))
        ));
    }

    #[test]
    fn weak_mode_is_refused() {
        let s = state(vec![robot(0.0, 0.0, 1.0), robot(1.0, 0.0, 1.0), robot(2.0, 0.0, 1.0)]);
        let opts = StepOptions {
            mode: DetectionMode::Weak,
            ..StepOptions::default()
        };
        assert!(matches!(
            step(&s, &[0], &opts),
            Err(SimError::Protocol { robot: 0, .. })
        ));
    }

    #[test]
    fn single_robot_gathered_at_start() {
        let spec = SchedulerSpec::with_default_bound(Strategy::Synchronous, 1, 1);
        let out = run(
            vec![robot(0.3, 0.3, 1.0)],
            spec,
            &SimConfig::for_robots(1),
            &mut [],
            &mut NullSink,
        )
        .unwrap();
        assert_eq!(out.status, RunStatus::Gathered);
        assert_eq!(out.final_t, 0);
    }

    #[test]
    fn collinear_trio_gathers_quickly() {
        let robots = vec![robot(0.0, 0.0, 10.0), robot(1.0, 0.0, 10.0), robot(3.0, 0.0, 10.0)];
        let spec = SchedulerSpec::with_default_bound(Strategy::Synchronous, 1, 3);
        let mut trace = Vec::new();
        let out = run(robots, spec, &SimConfig::for_robots(3), &mut [], &mut trace).unwrap();
        assert_eq!(out.status, RunStatus::Gathered);
        assert!(out.final_t <= 5, "took {} steps", out.final_t);
        assert_eq!(trace.len(), 3 * out.final_t as usize);
    }
}
