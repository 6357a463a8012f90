//! Configurations of robots, multiplicity detection, local frames and views.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{points_coincide, Point, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("configuration is empty")]
    Empty,
    #[error("occupied point has zero multiplicity")]
    ZeroCount,
    #[error("occupied points ({0:?}) and ({1:?}) coincide")]
    Coinciding(Point, Point),
    #[error("frame scale must be finite and positive, got {0}")]
    InvalidScale(f64),
    #[error("frame parameters must be finite")]
    NonFiniteFrame,
}

/// An occupied point and the number of robots on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupied {
    pub point: Point,
    pub count: usize,
}

/// Multiset of robot positions, stored as distinct occupied points in
/// first-encountered order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Configuration {
    occupied: Vec<Occupied>,
}

impl Configuration {
    /// Builds a configuration from explicit `(point, count)` entries.
    pub fn from_counts<I>(entries: I, tol: Tolerance) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (Point, usize)>,
    {
        let mut occupied: Vec<Occupied> = Vec::new();
        for (point, count) in entries {
            if count == 0 {
                return Err(ModelError::ZeroCount);
            }
            if let Some(o) = occupied.iter().find(|o| points_coincide(o.point, point, tol)) {
                return Err(ModelError::Coinciding(o.point, point));
            }
            occupied.push(Occupied { point, count });
        }
        Ok(Configuration { occupied })
    }

    pub fn occupied(&self) -> &[Occupied] {
        &self.occupied
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.occupied.iter().map(|o| o.point)
    }

    pub fn point_vec(&self) -> Vec<Point> {
        self.points().collect()
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    /// Total number of robots `n`.
    pub fn robot_count(&self) -> usize {
        self.occupied.iter().map(|o| o.count).sum()
    }

    /// All robots on one point.
    pub fn is_gathered(&self) -> bool {
        self.occupied.len() == 1
    }

    pub fn index_of(&self, p: Point, tol: Tolerance) -> Option<usize> {
        self.occupied.iter().position(|o| points_coincide(o.point, p, tol))
    }

    /// Multiplicity `|p|`; zero when `p` is unoccupied.
    pub fn count_at(&self, p: Point, tol: Tolerance) -> usize {
        self.index_of(p, tol).map_or(0, |i| self.occupied[i].count)
    }
}

/// Clusters raw positions into a configuration. Returns the configuration
/// and, for each input position, the index of the occupied point it joined.
pub fn normalize_with_assignment(raw: &[Point], tol: Tolerance) -> (Configuration, Vec<usize>) {
    let mut occupied: Vec<Occupied> = Vec::new();
    let mut assignment = Vec::with_capacity(raw.len());
    for &p in raw {
        match occupied.iter().position(|o| points_coincide(o.point, p, tol)) {
            Some(i) => {
                occupied[i].count += 1;
                assignment.push(i);
            }
            None => {
                assignment.push(occupied.len());
                occupied.push(Occupied { point: p, count: 1 });
            }
        }
    }
    (Configuration { occupied }, assignment)
}

/// Positions within `tol` of a cluster's first member merge into it.
pub fn normalize(raw: &[Point], tol: Tolerance) -> Configuration {
    normalize_with_assignment(raw, tol).0
}

/// `MaxP`: the occupied points of maximal multiplicity, in configuration order.
pub fn max_points(cfg: &Configuration) -> Result<Vec<Point>, ModelError> {
    let top = cfg.occupied.iter().map(|o| o.count).max().ok_or(ModelError::Empty)?;
    Ok(cfg
        .occupied
        .iter()
        .filter(|o| o.count == top)
        .map(|o| o.point)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionMode {
    /// Exact robot count per point.
    Strong,
    /// One robot, or more than one.
    Weak,
    /// Occupancy only.
    PresenceOnly,
}

/// What a sensor reports about one occupied point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Exact(usize),
    One,
    Many,
    Present,
}

impl Multiplicity {
    pub fn sensed(count: usize, mode: DetectionMode) -> Self {
        match mode {
            DetectionMode::Strong => Multiplicity::Exact(count),
            DetectionMode::Weak if count > 1 => Multiplicity::Many,
            DetectionMode::Weak => Multiplicity::One,
            DetectionMode::PresenceOnly => Multiplicity::Present,
        }
    }

    /// Degrades a reading to what a sensor of the given mode would report.
    /// Degrading never recovers information.
    pub fn degrade(self, mode: DetectionMode) -> Self {
        match (self, mode) {
            (Multiplicity::Exact(c), m) => Multiplicity::sensed(c, m),
            (_, DetectionMode::PresenceOnly) => Multiplicity::Present,
            (m, _) => m,
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            Multiplicity::Exact(c) => Some(c),
            _ => None,
        }
    }
}

/// A robot's private similarity transform. Local coordinates of a global
/// point `q` are `scale · R(rotation) · F · (q − translation)`, where `F`
/// mirrors the y axis when `reflected` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    rotation: f64,
    scale: f64,
    translation: Point,
    reflected: bool,
    cos: f64,
    sin: f64,
}

impl Frame {
    pub fn new(rotation: f64, scale: f64, translation: Point, reflected: bool) -> Result<Self, ModelError> {
        if !rotation.is_finite() || !translation.is_finite() {
            return Err(ModelError::NonFiniteFrame);
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(ModelError::InvalidScale(scale));
        }
        Ok(Frame {
            rotation,
            scale,
            translation,
            reflected,
            cos: libm::cos(rotation),
            sin: libm::sin(rotation),
        })
    }

    pub fn identity() -> Self {
        Frame {
            rotation: 0.0,
            scale: 1.0,
            translation: Point::ORIGIN,
            reflected: false,
            cos: 1.0,
            sin: 0.0,
        }
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn translation(&self) -> Point {
        self.translation
    }
    pub fn reflected(&self) -> bool {
        self.reflected
    }

    /// Same orientation, unit and chirality, with the local origin moved to
    /// the global point `origin`.
    pub fn with_origin(&self, origin: Point) -> Self {
        Frame {
            translation: origin,
            ..*self
        }
    }

    pub fn to_local(&self, q: Point) -> Point {
        let d = q - self.translation;
        let d = if self.reflected { Point::new(d.x, -d.y) } else { d };
        Point::new(
            self.scale * (self.cos * d.x - self.sin * d.y),
            self.scale * (self.sin * d.x + self.cos * d.y),
        )
    }

    pub fn to_global(&self, p: Point) -> Point {
        let (x, y) = (p.x / self.scale, p.y / self.scale);
        let d = Point::new(self.cos * x + self.sin * y, -self.sin * x + self.cos * y);
        let d = if self.reflected { Point::new(d.x, -d.y) } else { d };
        d + self.translation
    }
}

impl Default for Frame {
    fn default() -> Self {
        Frame::identity()
    }
}

/// The configuration in one robot's local coordinates, with multiplicities
/// as its sensors report them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct View {
    entries: Vec<(Point, Multiplicity)>,
}

impl View {
    pub fn new(entries: Vec<(Point, Multiplicity)>) -> Self {
        View { entries }
    }

    /// A strong-mode view in global coordinates.
    pub fn global(cfg: &Configuration) -> Self {
        observe(cfg, &Frame::identity(), DetectionMode::Strong)
    }

    pub fn entries(&self) -> &[(Point, Multiplicity)] {
        &self.entries
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Re-reads the view through a weaker sensor.
    pub fn degrade(&self, mode: DetectionMode) -> View {
        View {
            entries: self.entries.iter().map(|&(p, m)| (p, m.degrade(mode))).collect(),
        }
    }
}

pub fn observe(cfg: &Configuration, frame: &Frame, mode: DetectionMode) -> View {
    View {
        entries: cfg
            .occupied
            .iter()
            .map(|o| (frame.to_local(o.point), Multiplicity::sensed(o.count, mode)))
            .collect(),
    }
}

pub fn to_global(frame: &Frame, p_local: Point) -> Point {
    frame.to_global(p_local)
}

pub fn to_local(frame: &Frame, q: Point) -> Point {
    frame.to_local(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_PI_2;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn cfg(entries: &[((f64, f64), usize)]) -> Configuration {
        Configuration::from_counts(entries.iter().map(|&((x, y), c)| (p(x, y), c)), tol()).unwrap()
    }

    #[test]
    fn max_points_examples() {
        assert_eq!(
            max_points(&cfg(&[((0.0, 0.0), 3), ((1.0, 1.0), 2)])).unwrap(),
            vec![p(0.0, 0.0)]
        );
        assert_eq!(
            max_points(&cfg(&[((0.0, 0.0), 2), ((1.0, 1.0), 2), ((2.0, 2.0), 1)])).unwrap(),
            vec![p(0.0, 0.0), p(1.0, 1.0)]
        );
        assert_eq!(
            max_points(&cfg(&[((0.0, 0.0), 1), ((1.0, 0.0), 1), ((0.0, 1.0), 1)]))
                .unwrap()
                .len(),
            3
        );
        assert_eq!(max_points(&Configuration::default()), Err(ModelError::Empty));
    }

    #[test]
    fn from_counts_rejects_bad_entries() {
        assert_eq!(
            Configuration::from_counts([(p(0.0, 0.0), 0)], tol()),
            Err(ModelError::ZeroCount)
        );
        assert!(matches!(
            Configuration::from_counts([(p(0.0, 0.0), 1), (p(0.0, 1e-12), 1)], tol()),
            Err(ModelError::Coinciding(..))
        ));
    }

    #[test]
    fn observe_examples() {
        let v = observe(&cfg(&[((0.0, 0.0), 3)]), &Frame::identity(), DetectionMode::Strong);
        assert_eq!(v.entries(), &[(p(0.0, 0.0), Multiplicity::Exact(3))]);

        let rot = Frame::new(FRAC_PI_2, 1.0, Point::ORIGIN, false).unwrap();
        let v = observe(&cfg(&[((1.0, 0.0), 2)]), &rot, DetectionMode::Strong);
        let (q, m) = v.entries()[0];
        assert_abs_diff_eq!(q.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.y, 1.0, epsilon = 1e-15);
        assert_eq!(m, Multiplicity::Exact(2));

        let v = observe(
            &cfg(&[((0.0, 0.0), 5), ((1.0, 0.0), 1)]),
            &Frame::identity(),
            DetectionMode::Weak,
        );
        assert_eq!(
            v.entries(),
            &[(p(0.0, 0.0), Multiplicity::Many), (p(1.0, 0.0), Multiplicity::One)]
        );
        let v = v.degrade(DetectionMode::PresenceOnly);
        assert!(v.entries().iter().all(|e| e.1 == Multiplicity::Present));
    }

    #[test]
    fn to_global_examples() {
        assert_eq!(Frame::identity().to_global(p(3.0, 4.0)), p(3.0, 4.0));
        let scaled = Frame::new(0.0, 2.0, Point::ORIGIN, false).unwrap();
        assert_eq!(scaled.to_global(p(2.0, 0.0)), p(1.0, 0.0));
        let mirror = Frame::new(0.0, 1.0, Point::ORIGIN, true).unwrap();
        assert_eq!(mirror.to_global(p(0.0, 1.0)), p(0.0, -1.0));
    }

    #[test]
    fn frame_rejects_bad_scale() {
        assert_eq!(
            Frame::new(0.0, 0.0, Point::ORIGIN, false),
            Err(ModelError::InvalidScale(0.0))
        );
        assert!(Frame::new(f64::NAN, 1.0, Point::ORIGIN, false).is_err());
    }

    #[test]
    fn frame_round_trip() {
        let f = Frame::new(1.234, 0.37, p(-2.0, 5.5), true).unwrap();
        let q = p(0.3, -7.1);
        let back = f.to_global(f.to_local(q));
        assert_abs_diff_eq!(back.x, q.x, epsilon = 1e-12);
        assert_abs_diff_eq!(back.y, q.y, epsilon = 1e-12);
        assert_eq!(f.with_origin(q).to_local(q), Point::ORIGIN);
    }

    #[test]
    fn normalize_examples() {
        let c = normalize(&[p(0.0, 0.0), p(0.0, 0.0), p(1.0, 0.0)], tol());
        assert_eq!(c, cfg(&[((0.0, 0.0), 2), ((1.0, 0.0), 1)]));
        let c = normalize(&[p(0.0, 0.0), p(0.0, 5e-10)], tol());
        assert_eq!(
            c.occupied(),
            &[Occupied {
                point: p(0.0, 0.0),
                count: 2
            }]
        );
        let c = normalize(&[p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)], tol());
        assert_eq!(c.len(), 3);
        assert!(c.occupied().iter().all(|o| o.count == 1));
    }
}
