//! Circle–circle and circle–line intersections with an explicit branch.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point;

/// Poses whose normalized discriminant falls below this are treated as
/// branch-ambiguous.
pub const EPS_BRANCH: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("constraints cannot be met")]
    Infeasible,
    #[error("near-singular pose (discriminant {discriminant:.3e})")]
    NearSingular { discriminant: f64 },
    #[error("parent points coincide")]
    Degenerate,
}

/// Which of the two intersection points to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Self {
        if sign < 0.0 {
            Branch::Negative
        } else {
            Branch::Positive
        }
    }
}

impl From<Branch> for i8 {
    fn from(b: Branch) -> i8 {
        match b {
            Branch::Positive => 1,
            Branch::Negative => -1,
        }
    }
}

impl TryFrom<i8> for Branch {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Branch::Positive),
            -1 => Ok(Branch::Negative),
            other => Err(format!("branch must be 1 or -1, got {other}")),
        }
    }
}

/// A straight rail through `origin` along the unit vector `direction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rail {
    pub origin: Point,
    pub direction: Point,
}

impl Rail {
    /// Rail along `angle`, normalized.
    pub fn new(origin: Point, angle: f64) -> Self {
        Self { origin, direction: Point::from_angle(angle) }
    }

    pub fn normal(&self) -> Point {
        self.direction.perp()
    }

    /// The parallel rail shifted by `offset` along the left normal.
    pub fn shifted(&self, offset: f64) -> Rail {
        Rail { origin: self.origin + self.normal() * offset, direction: self.direction }
    }

    pub fn signed_distance(&self, p: Point) -> f64 {
        (p - self.origin).dot(self.normal())
    }

    pub fn parameter(&self, p: Point) -> f64 {
        (p - self.origin).dot(self.direction)
    }
}

/// Point at distance `len_p` from `p` and `len_q` from `q`, on the side
/// where `cross(q - p, r - p)` has the sign of `branch`.
pub fn solve_dyad(p: Point, q: Point, len_p: f64, len_q: f64, branch: Branch) -> Result<Point, SolveError> {
    let pq = q - p;
    let d = pq.norm();
    if d == 0.0 {
        return Err(SolveError::Degenerate);
    }
    if d > len_p + len_q || d < (len_p - len_q).abs() {
        return Err(SolveError::Infeasible);
    }
    let a = (len_p * len_p - len_q * len_q + d * d) / (2.0 * d);
    let h_sq = len_p * len_p - a * a;
    let discriminant = h_sq / (len_p * len_q);
    if discriminant < EPS_BRANCH {
        return Err(SolveError::NearSingular { discriminant });
    }
    let u = pq * (1.0 / d);
    Ok(p + u * a + u.perp() * (branch.sign() * h_sq.sqrt()))
}

/// Point on `rail` at distance `len` from `p`. `Positive` takes the root
/// with the larger rail parameter.
pub fn solve_slider(p: Point, rail: &Rail, len: f64, branch: Branch) -> Result<Point, SolveError> {
    let t = rail.parameter(p);
    let foot = rail.origin + rail.direction * t;
    let dist_sq = (p - foot).norm_sq();
    let h_sq = len * len - dist_sq;
    if h_sq < 0.0 {
        return Err(SolveError::Infeasible);
    }
    let discriminant = h_sq / (len * len);
    if discriminant < EPS_BRANCH {
        return Err(SolveError::NearSingular { discriminant });
    }
    Ok(foot + rail.direction * (branch.sign() * h_sq.sqrt()))
}
