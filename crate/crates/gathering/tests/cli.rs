use std::path::Path;
use std::process::{Command, Output};

use gathering::config::{RunConfig, StrategyName};
use gathering::sweep::SweepReport;
use gathering::trace::read_trace;
use gathering_core::geometry::Point;
use gathering_core::model::Frame;
use gathering_core::simulator::Robot;

fn gathering(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gathering"))
        .args(args)
        .current_dir(dir)
        .env_remove("GATHER_EPS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn team(pts: &[(f64, f64)]) -> Vec<Robot> {
    pts.iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let f = Frame::new(1.1 * i as f64, 0.5 + 0.4 * i as f64, Point::new(0.3, 0.1), i % 2 == 0).unwrap();
            Robot::new(Point::new(x, y), 0.8, f).unwrap()
        })
        .collect()
}

fn write_config(dir: &Path, cfg: &RunConfig) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, cfg.dump()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn run_gathered_start_exits_zero_at_t0() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(&team(&[(0.2, 0.2); 3]), StrategyName::Synchronous, 0);
    let out = gathering(&["run", "--config", &write_config(dir.path(), &cfg)], dir.path());
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "gathered");
    assert_eq!(v["final_t"], 0);
}

#[test]
fn run_five_singletons_gathers_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [(0.1, 0.1), (0.9, 0.2), (0.4, 0.8), (0.6, 0.5), (0.2, 0.6)];
    let mut cfg = RunConfig::new(&team(&pts), StrategyName::Synchronous, 0);
    cfg.trace = Some("from_config.jsonl".into());
    let out = gathering(&["run", "--config", &write_config(dir.path(), &cfg)], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "gathered");
    assert_eq!(v["occupied"].as_array().unwrap().len(), 1);
    assert_eq!(v["occupied"][0]["count"], 5);
    let trace = read_trace(
        std::fs::File::open(dir.path().join("from_config.jsonl"))
            .map(std::io::BufReader::new)
            .unwrap(),
    )
    .unwrap();
    let steps = v["final_t"].as_u64().unwrap() as usize;
    assert_eq!(trace.len(), 5 * steps);
    assert!(trace
        .iter()
        .enumerate()
        .all(|(i, r)| r.robot_id == i % 5 && r.t as usize == i / 5));
}

#[test]
fn run_rejects_bad_configs_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(&team(&[(0.0, 0.0), (1.0, 0.0)]), StrategyName::RoundRobin, 0);
    cfg.robots[1].sigma = 0.0;
    let out = gathering(&["run", "--config", &write_config(dir.path(), &cfg)], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("robots[1].sigma"));

    std::fs::write(dir.path().join("broken.json"), "{\"robots\": [}").unwrap();
    assert_eq!(code(&gathering(&["run", "--config", "broken.json"], dir.path())), 2);
    assert_eq!(code(&gathering(&["run", "--config", "missing.json"], dir.path())), 2);
}

#[test]
fn run_honours_the_eps_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(
        &team(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)]),
        StrategyName::Synchronous,
        0,
    );
    let path = write_config(dir.path(), &cfg);
    let run = |eps: &str| {
        Command::new(env!("CARGO_BIN_EXE_gathering"))
            .args(["run", "--config", &path])
            .env("GATHER_EPS", eps)
            .output()
            .unwrap()
    };
    let bad = run("lots");
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("GATHER_EPS"));
    assert_eq!(code(&run("1e-8")), 0);
}

#[test]
fn run_traces_replay_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let pts = [
        (0.0, 0.0),
        (0.3, 0.9),
        (0.8, 0.1),
        (0.8, 0.1),
        (0.5, 0.4),
        (0.1, 0.7),
        (0.9, 0.9),
    ];
    let cfg = RunConfig::new(&team(&pts), StrategyName::BoundaryOnlyAdversary, 17);
    let path = write_config(dir.path(), &cfg);
    for name in ["a.jsonl", "b.jsonl"] {
        assert_eq!(
            code(&gathering(&["run", "--config", &path, "--trace", name], dir.path())),
            0
        );
    }
    let a = std::fs::read(dir.path().join("a.jsonl")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(dir.path().join("b.jsonl")).unwrap());
}

fn sweep(dir: &Path, args: &[&str]) -> (i32, SweepReport) {
    let mut all = vec!["sweep", "--out", "sweep.json"];
    all.extend_from_slice(args);
    let out = gathering(&all, dir);
    let report = serde_json::from_slice(&std::fs::read(dir.join("sweep.json")).unwrap()).unwrap();
    (code(&out), report)
}

#[test]
fn sweeps_of_odd_n_gather() {
    let dir = tempfile::tempdir().unwrap();
    for (n, scheduler) in [("3", "random-subset"), ("7", "boundary_only_adversary")] {
        let (status, report) = sweep(
            dir.path(),
            &["--n", n, "--runs", "100", "--seed", "5", "--scheduler", scheduler],
        );
        assert_eq!(status, 0);
        assert_eq!(report.summary.gathered, 100);
        assert!(report.summary.violations.is_empty());
        assert_eq!(report.records.len(), 100);
        assert!(report.records.iter().enumerate().all(|(i, r)| r.index == i));
    }
}

#[test]
fn witness_sweep_never_gathers() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--n",
        "4",
        "--runs",
        "50",
        "--scheduler",
        "synchronous",
        "--init",
        "witness",
        "--max-steps",
        "200",
    ];
    let (status, report) = sweep(dir.path(), &args);
    assert_eq!(status, 1);
    assert_eq!(report.summary.gathered, 0);
    assert_eq!(report.summary.step_limit, 50);
    assert!(report.summary.violations.is_empty());
}

#[test]
fn sweep_rejects_zero_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = gathering(
        &[
            "sweep",
            "--n",
            "3",
            "--runs",
            "0",
            "--scheduler",
            "synchronous",
            "--out",
            "x.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn check_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = gathering(&["check", "--suite", "geometry"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    let out = gathering(&["check", "--suite", "properties"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 4);
    assert_eq!(code(&gathering(&["check", "--suite", "nonsense"], dir.path())), 2);
}

#[test]
fn demo_even() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["2", "4"] {
        let out = gathering(&["demo-even", "--n", n, "--steps", "1000"], dir.path());
        assert_eq!(code(&out), 0);
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(
            text.contains("not gathered after 1000 steps with 2 occupied points"),
            "{text}"
        );
        assert_eq!(text.lines().filter(|l| l.starts_with("t=")).count(), 11);
        assert!(text
            .lines()
            .filter(|l| l.starts_with("t="))
            .all(|l| l.contains("points=2")));
    }
    assert_eq!(code(&gathering(&["demo-even", "--n", "3"], dir.path())), 2);
}

#[test]
fn init_config_round_trips_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = gathering(
        &[
            "init-config",
            "--n",
            "9",
            "--seed",
            "4",
            "--scheduler",
            "round-robin",
            "--out",
            "c.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("c.json")).unwrap();
    let cfg = RunConfig::parse(&text).unwrap();
    assert_eq!(cfg.robots.len(), 9);
    assert_eq!(RunConfig::parse(&cfg.dump()).unwrap(), cfg);
    assert_eq!(code(&gathering(&["run", "--config", "c.json"], dir.path())), 0);
}
