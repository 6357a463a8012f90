//! The gathering protocol for an odd number of robots with strong
//! multiplicity detection.
//!
//! [`decide`] is a pure function of one robot's view and its own local
//! position. Everything is expressed in that robot's local frame.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{point_on_segment, points_coincide, smallest_enclosing_circle, GeometryError, Point, Tolerance};
use crate::model::{DetectionMode, View};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("the protocol needs strong multiplicity detection, got {0:?}")]
    NotStrong(DetectionMode),
    #[error("view is empty")]
    EmptyView,
    #[error("view entry carries no exact count")]
    MissingCount,
    #[error("observer position is not an occupied point of its view")]
    SelfNotInView,
    #[error("closest-position candidates are identical")]
    IdenticalCandidates,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Stay,
    MoveCareful,
    MoveDirect,
}

impl ActionKind {
    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Stay => "stay",
            ActionKind::MoveCareful => "move_careful",
            ActionKind::MoveDirect => "move_direct",
        }
    }
}

/// A robot's decision for one activation. Targets are local coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Action {
    Stay,
    /// Move toward the target only if no other occupied point lies on the
    /// way.
    MoveCareful(Point),
    /// Move toward the target unconditionally.
    MoveDirect(Point),
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::Stay => ActionKind::Stay,
            Action::MoveCareful(_) => ActionKind::MoveCareful,
            Action::MoveDirect(_) => ActionKind::MoveDirect,
        }
    }

    pub fn target(&self) -> Option<Point> {
        match *self {
            Action::Stay => None,
            Action::MoveCareful(t) | Action::MoveDirect(t) => Some(t),
        }
    }
}

/// Which case of the protocol produced a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `|MaxP| = 1`.
    UniqueMax,
    /// `|MaxP| = 2`.
    TwoMax,
    /// `|MaxP| ≥ 3`, every occupied point on the enclosing circle.
    NoInside,
    /// `|MaxP| ≥ 3`, every interior point sits at the circle's center.
    InsideAtCenter,
    /// `|MaxP| ≥ 3`, some interior point away from the center.
    InsideOffCenter,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::UniqueMax => "unique_max",
            Branch::TwoMax => "two_max",
            Branch::NoInside => "no_inside",
            Branch::InsideAtCenter => "inside_at_center",
            Branch::InsideOffCenter => "inside_off_center",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub branch: Branch,
    pub action: Action,
}

/// The closer of two candidate points; ties go to the lexicographically
/// smaller candidate regardless of argument order.
pub fn choose_closest_position(self_pos: Point, p1: Point, p2: Point) -> Result<Point, ProtocolError> {
    if p1 == p2 {
        return Err(ProtocolError::IdenticalCandidates);
    }
    let (first, second) = if p1.lex_cmp(&p2).is_le() { (p1, p2) } else { (p2, p1) };
    if self_pos.dist(first) <= self_pos.dist(second) {
        Ok(first)
    } else {
        Ok(second)
    }
}

/// True iff no occupied point other than the endpoints lies on `[from, to]`.
pub fn path_is_clear<I>(occupied: I, from: Point, to: Point, tol: Tolerance) -> bool
where
    I: IntoIterator<Item = Point>,
{
    occupied
        .into_iter()
        .all(|q| points_coincide(q, from, tol) || points_coincide(q, to, tol) || !point_on_segment(q, from, to, tol))
}

fn move_to(self_pos: Point, target: Point, careful: bool, tol: Tolerance) -> Action {
    if points_coincide(self_pos, target, tol) {
        Action::Stay
    } else if careful {
        Action::MoveCareful(target)
    } else {
        Action::MoveDirect(target)
    }
}

pub fn decide(view: &View, self_pos: Point, mode: DetectionMode, tol: Tolerance) -> Result<Decision, ProtocolError> {
    if mode != DetectionMode::Strong {
        return Err(ProtocolError::NotStrong(mode));
    }
    if view.is_empty() {
        return Err(ProtocolError::EmptyView);
    }
    let counts = view
        .entries()
        .iter()
        .map(|&(p, m)| m.exact().map(|c| (p, c)).ok_or(ProtocolError::MissingCount))
        .collect::<Result<Vec<_>, _>>()?;
    let at = |p: Point| points_coincide(self_pos, p, tol);
    if !counts.iter().any(|&(p, _)| at(p)) {
        return Err(ProtocolError::SelfNotInView);
    }

    let top = counts.iter().map(|e| e.1).max().unwrap_or(0);
    let mut max_pts: Vec<Point> = counts.iter().filter(|e| e.1 == top).map(|e| e.0).collect();

    match max_pts.len() {
        1 => {
            let action = move_to(self_pos, max_pts[0], true, tol);
            Ok(Decision {
                branch: Branch::UniqueMax,
                action,
            })
        }
        2 => {
            max_pts.sort_by(Point::lex_cmp);
            let action = if at(max_pts[0]) || at(max_pts[1]) {
                Action::Stay
            } else {
                let target = choose_closest_position(self_pos, max_pts[0], max_pts[1])?;
                move_to(self_pos, target, true, tol)
            };
            Ok(Decision {
                branch: Branch::TwoMax,
                action,
            })
        }
        _ => {
            let pts: Vec<Point> = counts.iter().map(|e| e.0).collect();
            let sec = smallest_enclosing_circle(&pts)?;
            let c = sec.center;
            let inside: Vec<Point> = pts.iter().copied().filter(|&p| !sec.on_boundary(p, tol)).collect();
            let self_inside = inside.iter().any(|&p| at(p));

            if inside.is_empty() {
                return Ok(Decision {
                    branch: Branch::NoInside,
                    action: move_to(self_pos, c, false, tol),
                });
            }
            if inside.iter().all(|&p| points_coincide(p, c, tol)) {
                let on_boundary_max = !self_inside && max_pts.iter().any(|&p| at(p));
                let action = if on_boundary_max {
                    move_to(self_pos, c, false, tol)
                } else {
                    Action::Stay
                };
                return Ok(Decision {
                    branch: Branch::InsideAtCenter,
                    action,
                });
            }
            let action = if self_inside {
                move_to(self_pos, c, false, tol)
            } else {
                Action::Stay
            };
            Ok(Decision {
                branch: Branch::InsideOffCenter,
                action,
            })
        }
    }
}

pub fn compute_action(
    view: &View,
    self_pos: Point,
    mode: DetectionMode,
    tol: Tolerance,
) -> Result<Action, ProtocolError> {
    decide(view, self_pos, mode, tol).map(|d| d.action)
}
