//! Planar primitives: points, tolerances, circles, sectors, smallest
//! enclosing circle and convex hull.
//!
//! All predicates share one absolute tolerance ([`Tolerance`]) so that
//! coincidence, collinearity, on-segment and on-circle decisions agree with
//! each other.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{PI, TAU};
use core::ops::{Add, Mul, Sub};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point set is empty")]
    Empty,
    #[error("point ({x}, {y}) appears more than once")]
    DuplicatePoint { x: f64, y: f64 },
    #[error("point ({x}, {y}) has a non-finite coordinate")]
    NonFinite { x: f64, y: f64 },
    #[error("two of the sector-defining points coincide")]
    DegenerateSector,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),
}

/// A position in the Euclidean plane. Also used as a displacement vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let d = self - other;
        d.dot(d)
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product of two displacement vectors.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    /// Lexicographic order: `x` first, then `y`. Total over finite values.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x.total_cmp(&other.x).then_with(|| self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Orientation of `c` relative to the directed line `a -> b` (twice the
/// signed triangle area).
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Absolute distance threshold shared by every predicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self, GeometryError> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Tolerance { eps })
        } else {
            Err(GeometryError::InvalidTolerance(eps))
        }
    }

    pub fn eps(self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: Self::DEFAULT_EPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Circle { center, radius }
    }

    /// Closed-disk membership within `tol`.
    pub fn encloses(&self, p: Point, tol: Tolerance) -> bool {
        self.center.dist(p) <= self.radius + tol.eps
    }

    pub fn on_boundary(&self, p: Point, tol: Tolerance) -> bool {
        libm::fabs(self.center.dist(p) - self.radius) <= tol.eps
    }

    /// Open-disk membership: farther than `tol` from the circumference.
    pub fn strictly_inside(&self, p: Point, tol: Tolerance) -> bool {
        self.center.dist(p) < self.radius - tol.eps
    }
}

pub fn points_coincide(a: Point, b: Point, tol: Tolerance) -> bool {
    a.dist(b) <= tol.eps
}

/// Distance from `q` to the closed segment `[a, b]`.
pub fn segment_distance(q: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return q.dist(a);
    }
    let t = ((q - a).dot(ab) / len2).clamp(0.0, 1.0);
    q.dist(a + ab * t)
}

pub fn point_on_segment(q: Point, a: Point, b: Point, tol: Tolerance) -> bool {
    segment_distance(q, a, b) <= tol.eps
}

/// Whether `q` lies within `tol` of the closed half-line starting at `apex`
/// and passing through `through`.
pub fn point_on_half_line(q: Point, apex: Point, through: Point, tol: Tolerance) -> bool {
    let u = through - apex;
    let w = q - apex;
    let len2 = u.dot(u);
    if len2 == 0.0 {
        return q.dist(apex) <= tol.eps;
    }
    let t = w.dot(u) / len2;
    if t <= 0.0 {
        q.dist(apex) <= tol.eps
    } else {
        q.dist(apex + u * t) <= tol.eps
    }
}

/// Collinearity as a length test: the height of the triangle `abc` over its
/// longest side is at most `tol`.
pub fn are_collinear(a: Point, b: Point, c: Point, tol: Tolerance) -> bool {
    let longest = a.dist(b).max(a.dist(c)).max(b.dist(c));
    if longest <= tol.eps {
        return true;
    }
    libm::fabs(orient(a, b, c)) / longest <= tol.eps
}

/// For collinear `c`, `r`, `rp`: is `c` strictly between `r` and `rp`?
pub fn point_between_collinear(c: Point, r: Point, rp: Point, tol: Tolerance) -> Result<bool, GeometryError> {
    if !are_collinear(c, r, rp, tol) {
        return Err(GeometryError::NotCollinear);
    }
    Ok(point_on_segment(c, r, rp, tol) && !points_coincide(c, r, tol) && !points_coincide(c, rp, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorKind {
    Convex,
    Concave,
    Straight,
}

/// Selects one of the two sectors of a [`SectorPair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorSide {
    /// Swept counterclockwise from the ray through `r` to the ray through `r'`.
    First,
    /// The complementary sector.
    Second,
}

/// The two open sectors into which the half-lines `[c, r)` and `[c, r')`
/// divide the plane. The half-lines themselves belong to neither sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPair {
    apex: Point,
    ray1_through: Point,
    ray2_through: Point,
    kind1: SectorKind,
    kind2: SectorKind,
    /// Counterclockwise angle of the first sector, in `(0, 2π)`.
    sweep: f64,
}

impl SectorPair {
    pub fn apex(&self) -> Point {
        self.apex
    }
    pub fn ray1_through(&self) -> Point {
        self.ray1_through
    }
    pub fn ray2_through(&self) -> Point {
        self.ray2_through
    }
    pub fn kind1(&self) -> SectorKind {
        self.kind1
    }
    pub fn kind2(&self) -> SectorKind {
        self.kind2
    }
    pub fn kind(&self, side: SectorSide) -> SectorKind {
        match side {
            SectorSide::First => self.kind1,
            SectorSide::Second => self.kind2,
        }
    }

    /// Sides whose kind is concave or straight.
    pub fn non_convex_sides(&self) -> impl Iterator<Item = SectorSide> + '_ {
        [SectorSide::First, SectorSide::Second]
            .into_iter()
            .filter(|&s| self.kind(s) != SectorKind::Convex)
    }

    /// Whether `q` lies on one of the two bounding half-lines.
    pub fn on_bounding_rays(&self, q: Point, tol: Tolerance) -> bool {
        point_on_half_line(q, self.apex, self.ray1_through, tol)
            || point_on_half_line(q, self.apex, self.ray2_through, tol)
    }
}

/// Counterclockwise angle from `u` to `w`, in `[0, 2π)`.
fn ccw_angle(u: Point, w: Point) -> f64 {
    let a = libm::atan2(u.cross(w), u.dot(w));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Builds the sector pair `{rcr', r̄cr̄'}` when the half-lines from `c`
/// through `r` and `r'` divide the plane, `None` otherwise.
pub fn make_sector_pair(r: Point, rp: Point, c: Point, tol: Tolerance) -> Result<Option<SectorPair>, GeometryError> {
    if points_coincide(r, rp, tol) || points_coincide(r, c, tol) || points_coincide(rp, c, tol) {
        return Err(GeometryError::DegenerateSector);
    }
    if are_collinear(r, rp, c, tol) {
        if !point_between_collinear(c, r, rp, tol)? {
            return Ok(None);
        }
        return Ok(Some(SectorPair {
            apex: c,
            ray1_through: r,
            ray2_through: rp,
            kind1: SectorKind::Straight,
            kind2: SectorKind::Straight,
            sweep: PI,
        }));
    }
    let sweep = ccw_angle(r - c, rp - c);
    let (kind1, kind2) = if sweep <= PI {
        (SectorKind::Convex, SectorKind::Concave)
    } else {
        (SectorKind::Concave, SectorKind::Convex)
    };
    Ok(Some(SectorPair {
        apex: c,
        ray1_through: r,
        ray2_through: rp,
        kind1,
        kind2,
        sweep,
    }))
}

/// Strict membership of `q` in the selected open sector.
pub fn sector_contains(s: &SectorPair, side: SectorSide, q: Point, tol: Tolerance) -> bool {
    if s.on_bounding_rays(q, tol) {
        return false;
    }
    let u = s.ray1_through - s.apex;
    let w = q - s.apex;
    let in_first = if s.kind1 == SectorKind::Straight {
        u.cross(w) > 0.0
    } else {
        ccw_angle(u, w) < s.sweep
    };
    match side {
        SectorSide::First => in_first,
        SectorSide::Second => !in_first,
    }
}

fn validate_distinct(pts: &[Point]) -> Result<(), GeometryError> {
    if pts.is_empty() {
        return Err(GeometryError::Empty);
    }
    if let Some(p) = pts.iter().find(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite { x: p.x, y: p.y });
    }
    let mut sorted: Vec<Point> = pts.to_vec();
    sorted.sort_by(Point::lex_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(GeometryError::DuplicatePoint { x: w[0].x, y: w[0].y });
    }
    Ok(())
}

/// Seed for the shuffle in [`smallest_enclosing_circle`], folded from the
/// coordinate bits so equal inputs always shuffle identically.
fn input_seed(pts: &[Point]) -> u64 {
    pts.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, p| {
        let h = (h ^ p.x.to_bits()).wrapping_mul(0x0000_0100_0000_01b3);
        (h ^ p.y.to_bits()).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn sec_contains(c: &Circle, p: Point) -> bool {
    c.center.dist(p) <= c.radius + 1e-12 * c.radius.max(1.0)
}

fn circle_from_two(a: Point, b: Point) -> Circle {
    let center = a.midpoint(b);
    Circle::new(center, center.dist(a).max(center.dist(b)))
}

/// Circumcircle of three points, or `None` when they are collinear.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<Circle> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if d == 0.0 {
        return None;
    }
    let ab2 = ab.dot(ab);
    let ac2 = ac.dot(ac);
    let ux = (ac.y * ab2 - ab.y * ac2) / d;
    let uy = (ab.x * ac2 - ac.x * ab2) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    if !center.is_finite() {
        return None;
    }
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Circle::new(center, radius))
}

fn circle_from_three(a: Point, b: Point, c: Point) -> Circle {
    circumcircle(a, b, c).unwrap_or_else(|| {
        // collinear: the two extreme points span the circle
        let (ab, ac, bc) = (a.dist_sq(b), a.dist_sq(c), b.dist_sq(c));
        if ab >= ac && ab >= bc {
            circle_from_two(a, b)
        } else if ac >= bc {
            circle_from_two(a, c)
        } else {
            circle_from_two(b, c)
        }
    })
}

/// Smallest circle enclosing `pts`, by randomized incremental construction
/// (expected linear time). The insertion order is a shuffle seeded from the
/// input itself, so the result is reproducible.
pub fn smallest_enclosing_circle(pts: &[Point]) -> Result<Circle, GeometryError> {
    validate_distinct(pts)?;
    let mut order: Vec<Point> = pts.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(input_seed(pts));
    order.shuffle(&mut rng);

    let mut circle = Circle::new(order[0], 0.0);
    for i in 1..order.len() {
        if sec_contains(&circle, order[i]) {
            continue;
        }
        let p = order[i];
        circle = Circle::new(p, 0.0);
        for j in 0..i {
            if sec_contains(&circle, order[j]) {
                continue;
            }
            let q = order[j];
            circle = circle_from_two(p, q);
            for &r in &order[..j] {
                if !sec_contains(&circle, r) {
                    circle = circle_from_three(p, q, r);
                }
            }
        }
    }
    Ok(circle)
}

/// Counterclockwise convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

/// Result of [`convex_hull`]. Collinear inputs do not form a polygon and are
/// reported explicitly.
#[derive(Debug, Clone, PartialEq)]
pub enum Hull {
    Point(Point),
    /// All inputs collinear; carries the two extreme points.
    Segment(Point, Point),
    Polygon(Polygon),
}

impl Hull {
    pub fn on_boundary(&self, q: Point, tol: Tolerance) -> bool {
        match self {
            Hull::Point(p) => points_coincide(*p, q, tol),
            Hull::Segment(a, b) => point_on_segment(q, *a, *b, tol),
            Hull::Polygon(poly) => poly.edges().any(|(a, b)| point_on_segment(q, a, b, tol)),
        }
    }

    /// Closed-region membership.
    pub fn contains(&self, q: Point, tol: Tolerance) -> bool {
        match self {
            Hull::Polygon(poly) => self.on_boundary(q, tol) || poly.edges().all(|(a, b)| orient(a, b, q) > 0.0),
            _ => self.on_boundary(q, tol),
        }
    }

    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Hull::Point(p) => alloc::vec![*p],
            Hull::Segment(a, b) => alloc::vec![*a, *b],
            Hull::Polygon(poly) => poly.vertices.clone(),
        }
    }
}

/// Convex hull by Andrew's monotone chain; collinear boundary points are
/// dropped so no three consecutive vertices are collinear.
pub fn convex_hull(pts: &[Point]) -> Result<Hull, GeometryError> {
    validate_distinct(pts)?;
    let mut sorted: Vec<Point> = pts.to_vec();
    sorted.sort_by(Point::lex_cmp);
    if sorted.len() == 1 {
        return Ok(Hull::Point(sorted[0]));
    }

    let mut hull: Vec<Point> = Vec::with_capacity(2 * sorted.len());
    for &p in &sorted {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in sorted.iter().rev().skip(1) {
        while hull.len() >= lower_len && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 {
        Ok(Hull::Segment(sorted[0], sorted[sorted.len() - 1]))
    } else {
        Ok(Hull::Polygon(Polygon { vertices: hull }))
    }
}

/// Whether `p` and `pp` are adjacent on `sec`: both on the circle, and one
/// of the sectors they bound at the center holds no point of `pts` on its
/// arc.
pub fn is_adjacent_on_sec(p: Point, pp: Point, pts: &[Point], sec: &Circle, tol: Tolerance) -> bool {
    if !sec.on_boundary(p, tol) || !sec.on_boundary(pp, tol) {
        return false;
    }
    let pair = match make_sector_pair(p, pp, sec.center, tol) {
        Ok(Some(pair)) => pair,
        _ => return false,
    };
    [SectorSide::First, SectorSide::Second].into_iter().any(|side| {
        !pts.iter()
            .any(|&q| sec.on_boundary(q, tol) && sector_contains(&pair, side, q, tol))
    })
}
