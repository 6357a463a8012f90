//! Oracle, property and lemma suites behind `gathering check`.

use std::fmt;

use gathering_core::analysis::{
    brute_force_sec, check_hull_sector_equivalence, check_no_empty_concave_sector, check_radius_decrease,
    check_sec_points_on_hull, even_livelock_demo, has_boundary_support, ClosureMonitor, SweepPlan,
};
use gathering_core::geometry::{convex_hull, smallest_enclosing_circle, Hull, Point, Tolerance};
use gathering_core::sampling::{random_frame, random_points, random_sigma};
use gathering_core::simulator::{run, Monitor, NullSink, Robot, RunStatus, SchedulerSpec, SimConfig};
use gathering_core::streams::{stream_rng, Stream};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::StrategyName;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Properties,
    Lemmas,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "geometry" => Some(Suite::Geometry),
            "properties" => Some(Suite::Properties),
            "lemmas" => Some(Suite::Lemmas),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

/// One named check: how many instances passed out of how many.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl CheckLine {
    pub fn ok(&self) -> bool {
        self.passed == self.total && self.detail.is_none()
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({}/{})", self.name, self.passed, self.total)?;
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        Ok(())
    }
}

struct Tally {
    line: CheckLine,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            line: CheckLine {
                name: name.to_owned(),
                passed: 0,
                total: 0,
                detail: None,
            },
        }
    }

    fn add(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.line.total += 1;
        if ok {
            self.line.passed += 1;
        } else if self.line.detail.is_none() {
            self.line.detail = Some(detail());
        }
    }

    fn done(self) -> CheckLine {
        self.line
    }
}

fn random_set(rng: &mut ChaCha8Rng, lo: usize, hi: usize, tol: Tolerance) -> Vec<Point> {
    let k = rng.random_range(lo..=hi);
    random_points(rng, k, tol)
}

/// Smallest enclosing circle against the brute-force oracle, plus boundary
/// support of the result.
pub fn sec_oracle(rng: &mut ChaCha8Rng, sets: usize, tol: Tolerance) -> Vec<CheckLine> {
    let mut agree = Tally::new("sec matches brute-force oracle within 1e-9");
    let mut support = Tally::new("sec has boundary support");
    for _ in 0..sets {
        let pts = random_set(rng, 3, 12, tol);
        let fast = smallest_enclosing_circle(&pts).expect("non-empty");
        let slow = brute_force_sec(&pts).expect("small set");
        let ok = fast.center.dist(slow.center) <= 1e-9 && (fast.radius - slow.radius).abs() <= 1e-9;
        agree.add(ok, || format!("{fast:?} vs {slow:?} on {pts:?}"));
        support.add(has_boundary_support(&pts, &fast, tol), || {
            format!("{fast:?} on {pts:?}")
        });
    }
    vec![agree.done(), support.done()]
}

/// Probes for the hull-boundary property: set points, hull vertices, edge
/// midpoints and random interior combinations.
fn hull_probes(rng: &mut ChaCha8Rng, pts: &[Point], hull: &Hull) -> Vec<Point> {
    let mut probes: Vec<Point> = pts.to_vec();
    if let Hull::Polygon(poly) = hull {
        probes.extend(poly.edges().map(|(a, b)| a.midpoint(b)));
    }
    for _ in 0..3 {
        let w: Vec<f64> = pts.iter().map(|_| rng.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let q = pts
            .iter()
            .zip(&w)
            .fold(Point::ORIGIN, |acc, (&p, &wi)| acc + p * (wi / s));
        probes.push(q);
    }
    probes
}

pub fn property_suite(rng: &mut ChaCha8Rng, sets: usize, tol: Tolerance) -> Vec<CheckLine> {
    let mut p2 = Tally::new("no empty concave sector at the sec center");
    let mut p3 = Tally::new("hull boundary iff empty non-convex sector");
    let mut p4 = Tally::new("sec points lie on the hull boundary");
    let mut l1 = Tally::new("radius strictly shrinks when the sec points move inward");
    for _ in 0..sets {
        let pts = random_set(rng, 2, 12, tol);
        let report = check_no_empty_concave_sector(&pts, tol).expect("at least two points");
        p2.add(!report.violated, || report.description.clone());

        let pts = random_set(rng, 3, 12, tol);
        match convex_hull(&pts) {
            Ok(hull @ Hull::Polygon(_)) => {
                let probes = hull_probes(rng, &pts, &hull);
                let bad = probes
                    .iter()
                    .find(|&&q| !check_hull_sector_equivalence(&pts, q, tol).unwrap_or(false));
                p3.add(bad.is_none(), || format!("probe {bad:?} on {pts:?}"));
            }
            _ => p3.add(false, || format!("degenerate sample {pts:?}")),
        }

        let pts = random_set(rng, 2, 12, tol);
        p4.add(check_sec_points_on_hull(&pts, tol).unwrap_or(false), || {
            format!("{pts:?}")
        });

        let pts = random_set(rng, 2, 12, tol);
        let lambda = 1.0 - rng.random::<f64>();
        l1.add(check_radius_decrease(&pts, lambda, tol).unwrap_or(false), || {
            format!("lambda {lambda} on {pts:?}")
        });
    }
    vec![p2.done(), p3.done(), p4.done(), l1.done()]
}

/// `runs` gathered starts held for `steps` steps under random schedulers.
pub fn closure_runs(rng: &mut ChaCha8Rng, runs: usize, steps: u64) -> CheckLine {
    let mut t = Tally::new("gathered starts stay gathered");
    for _ in 0..runs {
        let n = rng.random_range(1..=11);
        let p = Point::new(rng.random(), rng.random());
        let team: Vec<Robot> = (0..n)
            .map(|_| Robot {
                pos: p,
                sigma: random_sigma(rng),
                frame: random_frame(rng),
            })
            .collect();
        let strategy = StrategyName::FAIR[rng.random_range(0..4)].to_strategy(None);
        let spec = SchedulerSpec::with_default_bound(strategy, rng.random(), n);
        let config = SimConfig {
            max_steps: steps,
            stop_when_gathered: false,
            ..SimConfig::for_robots(n)
        };
        let mut monitors: Vec<Box<dyn Monitor>> = vec![Box::new(ClosureMonitor)];
        let out = run(team, spec, &config, &mut monitors, &mut NullSink).expect("valid run");
        let ok = out.violations.is_empty() && out.final_config.is_gathered() && out.final_t == steps;
        t.add(ok, || format!("{:?}", out.violations.first()));
    }
    t.done()
}

/// Sweeps with every lemma monitor attached.
pub fn monitored_sweeps(ns: &[usize], runs: usize, seed: u64) -> Vec<CheckLine> {
    let mut gathered = Tally::new("odd-n sweeps gather");
    let mut silent = Tally::new("lemma monitors silent");
    for &n in ns {
        for name in StrategyName::FAIR {
            let plan = SweepPlan::new(n, runs, seed, name.to_strategy(None));
            let (records, _) = crate::sweep::run_parallel(&plan).expect("valid sweep");
            for r in records {
                gathered.add(r.status == RunStatus::Gathered, || {
                    format!("n={n} {} run {} seed {}", r.scheduler, r.index, r.seed)
                });
                silent.add(r.violation_count() == 0, || {
                    format!("n={n} {} run {}: {:?}", r.scheduler, r.index, r.violations)
                });
            }
        }
    }
    vec![gathered.done(), silent.done()]
}

pub fn livelock(ns: &[usize], steps: u64) -> CheckLine {
    let mut t = Tally::new("even witness keeps two points and never gathers");
    for &n in ns {
        let out = even_livelock_demo(n, steps, &mut NullSink).expect("even n");
        let ok = out.status == RunStatus::StepLimitReached && out.violations.is_empty();
        t.add(ok, || format!("n={n}: {:?}", out.violations.first()));
    }
    t.done()
}

/// Runs a suite with fixed sample sizes from one seed.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckLine> {
    let tol = Tolerance::default();
    let mut rng = stream_rng(seed, Stream::Checks);
    let mut lines = Vec::new();
    if matches!(suite, Suite::Geometry | Suite::All) {
        lines.extend(sec_oracle(&mut rng, 1000, tol));
    }
    if matches!(suite, Suite::Properties | Suite::All) {
        lines.extend(property_suite(&mut rng, 500, tol));
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        lines.push(closure_runs(&mut rng, 20, 200));
        lines.extend(monitored_sweeps(&[3, 5, 7], 20, seed));
        lines.push(livelock(&[2, 4, 6], 1000));
    }
    lines
}
