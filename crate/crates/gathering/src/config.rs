//! JSON run configuration.

use std::path::Path;

use gathering_core::analysis::MonitorToggles;
use gathering_core::geometry::{Point, Tolerance};
use gathering_core::model::{DetectionMode, Frame};
use gathering_core::simulator::{Robot, SchedulerSpec, SimConfig, Strategy};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable overriding the default `eps` of configs that omit it.
pub const EPS_ENV: &str = "GATHER_EPS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// The offending field path, for validation and syntax errors.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { field, .. } => Some(field),
            ConfigError::Io { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub rotation: f64,
    pub scale: f64,
    pub tx: f64,
    pub ty: f64,
    pub reflected: bool,
}

impl Default for FrameSpec {
    fn default() -> Self {
        FrameSpec {
            rotation: 0.0,
            scale: 1.0,
            tx: 0.0,
            ty: 0.0,
            reflected: false,
        }
    }
}

impl From<&Frame> for FrameSpec {
    fn from(f: &Frame) -> Self {
        FrameSpec {
            rotation: f.rotation(),
            scale: f.scale(),
            tx: f.translation().x,
            ty: f.translation().y,
            reflected: f.reflected(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotSpec {
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
    #[serde(default)]
    pub frame: FrameSpec,
}

impl From<&Robot> for RobotSpec {
    fn from(r: &Robot) -> Self {
        RobotSpec {
            x: r.pos.x,
            y: r.pos.y,
            sigma: r.sigma,
            frame: FrameSpec::from(&r.frame),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    Synchronous,
    RoundRobin,
    RandomSubset,
    BoundaryOnlyAdversary,
    Scripted,
}

impl StrategyName {
    pub const FAIR: [StrategyName; 4] = [
        StrategyName::Synchronous,
        StrategyName::RoundRobin,
        StrategyName::RandomSubset,
        StrategyName::BoundaryOnlyAdversary,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned())).ok()
    }

    /// The simulator strategy; `Scripted` needs its script.
    pub fn to_strategy(self, script: Option<&[Vec<usize>]>) -> Strategy {
        match self {
            StrategyName::Synchronous => Strategy::Synchronous,
            StrategyName::RoundRobin => Strategy::RoundRobin,
            StrategyName::RandomSubset => Strategy::RandomSubset,
            StrategyName::BoundaryOnlyAdversary => Strategy::BoundaryOnlyAdversary,
            StrategyName::Scripted => Strategy::Scripted(script.map(<[_]>::to_vec).unwrap_or_default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchedulerConfig {
    pub strategy: StrategyName,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to `3n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fairness_bound: Option<usize>,
    /// Activation sets cycled by the `scripted` strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub script: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionName {
    Strong,
    Weak,
    PresenceOnly,
}

impl From<DetectionName> for DetectionMode {
    fn from(d: DetectionName) -> Self {
        match d {
            DetectionName::Strong => DetectionMode::Strong,
            DetectionName::Weak => DetectionMode::Weak,
            DetectionName::PresenceOnly => DetectionMode::PresenceOnly,
        }
    }
}

fn yes() -> bool {
    true
}

fn strong() -> DetectionName {
    DetectionName::Strong
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    #[serde(default = "yes")]
    pub closure: bool,
    #[serde(default = "yes")]
    pub unique_max_persistence: bool,
    #[serde(default = "yes")]
    pub two_max_no_escalation: bool,
    #[serde(default = "yes")]
    pub inside_stays_inside: bool,
    #[serde(default = "yes")]
    pub center_containment: bool,
    #[serde(default = "yes")]
    pub radius_progress: bool,
    #[serde(default = "yes")]
    pub careful_move_separation: bool,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorToggles::ALL.into()
    }
}

impl From<MonitorToggles> for MonitorConfig {
    fn from(t: MonitorToggles) -> Self {
        MonitorConfig {
            closure: t.closure,
            unique_max_persistence: t.unique_max_persistence,
            two_max_no_escalation: t.two_max_no_escalation,
            inside_stays_inside: t.inside_stays_inside,
            center_containment: t.center_containment,
            radius_progress: t.radius_progress,
            careful_move_separation: t.careful_move_separation,
        }
    }
}

impl From<MonitorConfig> for MonitorToggles {
    fn from(m: MonitorConfig) -> Self {
        MonitorToggles {
            closure: m.closure,
            unique_max_persistence: m.unique_max_persistence,
            two_max_no_escalation: m.two_max_no_escalation,
            inside_stays_inside: m.inside_stays_inside,
            center_containment: m.center_containment,
            radius_progress: m.radius_progress,
            careful_move_separation: m.careful_move_separation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub robots: Vec<RobotSpec>,
    pub scheduler: SchedulerConfig,
    #[serde(default = "strong")]
    pub detection: DetectionName,
    /// Falls back to `GATHER_EPS`, then to the library default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Defaults to `10000 · n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    #[serde(default)]
    pub monitors: MonitorConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default = "yes")]
    pub observer_at_origin: bool,
    #[serde(default)]
    pub rerandomize_frames: bool,
}

/// Everything the simulator needs, resolved from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub robots: Vec<Robot>,
    pub spec: SchedulerSpec,
    pub sim: SimConfig,
    pub monitors: MonitorToggles,
}

/// The eps used when a config leaves it out.
pub fn default_eps() -> Result<f64, ConfigError> {
    match std::env::var(EPS_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|e| e.is_finite() && *e >= 0.0)
            .ok_or_else(|| ConfigError::invalid(EPS_ENV, format!("not a non-negative number: {raw:?}"))),
        Err(_) => Ok(Tolerance::DEFAULT_EPS),
    }
}

impl RunConfig {
    /// A config for `robots` with every optional field at its default.
    pub fn new(robots: &[Robot], strategy: StrategyName, seed: u64) -> Self {
        RunConfig {
            robots: robots.iter().map(RobotSpec::from).collect(),
            scheduler: SchedulerConfig {
                strategy,
                seed,
                fairness_bound: None,
                script: None,
            },
            detection: DetectionName::Strong,
            eps: None,
            max_steps: None,
            monitors: MonitorConfig::default(),
            trace: None,
            observer_at_origin: true,
            rerandomize_frames: false,
        }
    }

    /// Parses and validates a JSON document. Errors name the offending field.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<root>".to_owned() } else { path };
            ConfigError::invalid(field, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn dump(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.robots.is_empty() {
            return Err(ConfigError::invalid("robots", "at least one robot is required"));
        }
        for (i, r) in self.robots.iter().enumerate() {
            let field = |name: &str| format!("robots[{i}].{name}");
            if !r.x.is_finite() {
                return Err(ConfigError::invalid(field("x"), "must be finite"));
            }
            if !r.y.is_finite() {
                return Err(ConfigError::invalid(field("y"), "must be finite"));
            }
            if !(r.sigma.is_finite() && r.sigma > 0.0) {
                return Err(ConfigError::invalid(
                    field("sigma"),
                    format!("must be > 0, got {}", r.sigma),
                ));
            }
            if !(r.frame.scale.is_finite() && r.frame.scale > 0.0) {
                return Err(ConfigError::invalid(
                    field("frame.scale"),
                    format!("must be > 0, got {}", r.frame.scale),
                ));
            }
            for (name, v) in [("rotation", r.frame.rotation), ("tx", r.frame.tx), ("ty", r.frame.ty)] {
                if !v.is_finite() {
                    return Err(ConfigError::invalid(field(&format!("frame.{name}")), "must be finite"));
                }
            }
        }
        if self.scheduler.fairness_bound == Some(0) {
            return Err(ConfigError::invalid("scheduler.fairness_bound", "must be >= 1"));
        }
        match (&self.scheduler.strategy, &self.scheduler.script) {
            (StrategyName::Scripted, None) => {
                return Err(ConfigError::invalid(
                    "scheduler.script",
                    "required by the scripted strategy",
                ));
            }
            (StrategyName::Scripted, Some(script)) => {
                if script.is_empty() {
                    return Err(ConfigError::invalid("scheduler.script", "must not be empty"));
                }
                for (k, set) in script.iter().enumerate() {
                    if let Some(&bad) = set.iter().find(|&&i| i >= self.robots.len()) {
                        return Err(ConfigError::invalid(
                            format!("scheduler.script[{k}]"),
                            format!("robot {bad} does not exist"),
                        ));
                    }
                }
            }
            (_, Some(_)) => {
                return Err(ConfigError::invalid(
                    "scheduler.script",
                    "only valid with the scripted strategy",
                ));
            }
            _ => {}
        }
        if let Some(eps) = self.eps {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(ConfigError::invalid("eps", format!("must be >= 0, got {eps}")));
            }
        }
        if self.max_steps == Some(0) {
            return Err(ConfigError::invalid("max_steps", "must be >= 1"));
        }
        Ok(())
    }

    /// Builds the simulator inputs.
    pub fn resolve(&self) -> Result<ResolvedRun, ConfigError> {
        self.validate()?;
        let n = self.robots.len();
        let eps = match self.eps {
            Some(e) => e,
            None => default_eps()?,
        };
        let tol = Tolerance::new(eps).map_err(|e| ConfigError::invalid("eps", e.to_string()))?;
        let robots = self
            .robots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let f = &r.frame;
                let frame = Frame::new(f.rotation, f.scale, Point::new(f.tx, f.ty), f.reflected)
                    .map_err(|e| ConfigError::invalid(format!("robots[{i}].frame"), e.to_string()))?;
                Robot::new(Point::new(r.x, r.y), r.sigma, frame)
                    .map_err(|e| ConfigError::invalid(format!("robots[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let strategy = self.scheduler.strategy.to_strategy(self.scheduler.script.as_deref());
        let spec = match self.scheduler.fairness_bound {
            Some(k) => SchedulerSpec::new(strategy, self.scheduler.seed, k)
                .map_err(|e| ConfigError::invalid("scheduler.fairness_bound", e.to_string()))?,
            None => SchedulerSpec::with_default_bound(strategy, self.scheduler.seed, n),
        };
        let mut sim = SimConfig::for_robots(n);
        sim.step.mode = self.detection.into();
        sim.step.tol = tol;
        sim.step.observer_at_origin = self.observer_at_origin;
        sim.rerandomize_frames = self.rerandomize_frames;
        if let Some(m) = self.max_steps {
            sim.max_steps = m;
        }
        Ok(ResolvedRun {
            robots,
            spec,
            sim,
            monitors: self.monitors.into(),
        })
    }
}
