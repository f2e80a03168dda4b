//! Planar test domains and their geometric queries.
//!
//! Three shapes are supported: balls, axis-aligned boxes and simple polygons
//! (counterclockwise, no self-intersection). All queries treat the domain as
//! an open set: `contains` is false on the topological boundary, and
//! `dist_to_boundary` is the Euclidean distance to ∂D from either side.
//!
//! The dimension is fixed at n = 2; everything downstream (grids, killing
//! integrals, Whitney decompositions) relies on the exact ray-crossing and
//! boundary-distance primitives implemented here.

mod holder;
mod whitney;

pub use holder::{holder0_fit, quasihyperbolic_estimate, Holder0Fit};
pub use whitney::{whitney_decompose, WhitneyCube, WhitneyGraph};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance under which a point counts as lying on the boundary.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        (self.x - other.x).powi(2) + (self.y - other.y).powi(2)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Open planar domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Domain {
    Ball { center: Point, radius: f64 },
    #[serde(rename = "box")]
    Rect { lo: Point, hi: Point },
    Polygon { vertices: Vec<Point> },
}

impl Domain {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "ball radius must be finite and positive, got {radius}"
            )));
        }
        Ok(Domain::Ball { center, radius })
    }

    pub fn rect(lo: Point, hi: Point) -> Result<Self> {
        if !(lo.x < hi.x && lo.y < hi.y) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "box corners must satisfy lo < hi componentwise, got lo=({}, {}), hi=({}, {})",
                lo.x, lo.y, hi.x, hi.y
            )));
        }
        Ok(Domain::Rect { lo, hi })
    }

    /// Simple counterclockwise polygon with at least 3 vertices.
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain(format!(
                "polygon needs >= 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain("polygon vertex not finite".into()));
        }
        if signed_area(&vertices) <= 0.0 {
            return Err(Error::InvalidDomain(
                "polygon vertices must be in counterclockwise order".into(),
            ));
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidDomain("polygon is self-intersecting".into()));
        }
        Ok(Domain::Polygon { vertices })
    }

    /// Standard L-shaped test polygon: the unit square with the open upper-right
    /// quadrant removed (reentrant corner at (0.5, 0.5)).
    pub fn l_shape() -> Self {
        Domain::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(0.5, 0.5),
            Point::new(0.5, 1.0),
            Point::new(0.0, 1.0),
        ])
        .expect("fixed vertices form a simple ccw polygon")
    }

    /// True iff `p` lies in the open domain; boundary points return false.
    pub fn contains(&self, p: Point) -> bool {
        if !p.is_finite() {
            return false;
        }
        match self {
            Domain::Ball { center, radius } => p.dist(*center) < radius - BOUNDARY_EPS,
            Domain::Rect { lo, hi } => {
                p.x > lo.x + BOUNDARY_EPS
                    && p.x < hi.x - BOUNDARY_EPS
                    && p.y > lo.y + BOUNDARY_EPS
                    && p.y < hi.y - BOUNDARY_EPS
            }
            Domain::Polygon { vertices } => {
                // points within BOUNDARY_EPS of an edge classify as boundary
                let m = vertices.len();
                for i in 0..m {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % m];
                    if seg_point_dist(a, b, p) <= BOUNDARY_EPS {
                        return false;
                    }
                }
                winding_number(vertices, p) != 0
            }
        }
    }

    /// Euclidean distance from `p` to ∂D (zero on the boundary, positive on
    /// both sides).
    pub fn dist_to_boundary(&self, p: Point) -> f64 {
        match self {
            Domain::Ball { center, radius } => (radius - p.dist(*center)).abs(),
            Domain::Rect { lo, hi } => {
                let inside =
                    p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
                if inside {
                    let mx = (p.x - lo.x).min(hi.x - p.x);
                    let my = (p.y - lo.y).min(hi.y - p.y);
                    mx.min(my)
                } else {
                    let dx = (lo.x - p.x).max(0.0).max(p.x - hi.x);
                    let dy = (lo.y - p.y).max(0.0).max(p.y - hi.y);
                    (dx * dx + dy * dy).sqrt()
                }
            }
            Domain::Polygon { vertices } => {
                let m = vertices.len();
                let mut best = f64::INFINITY;
                for i in 0..m {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % m];
                    best = best.min(seg_point_dist(a, b, p));
                }
                best
            }
        }
    }

    /// Tight axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            Domain::Ball { center, radius } => (
                Point::new(center.x - radius, center.y - radius),
                Point::new(center.x + radius, center.y + radius),
            ),
            Domain::Rect { lo, hi } => (*lo, *hi),
            Domain::Polygon { vertices } => {
                let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    lo.x = lo.x.min(v.x);
                    lo.y = lo.y.min(v.y);
                    hi.x = hi.x.max(v.x);
                    hi.y = hi.y.max(v.y);
                }
                (lo, hi)
            }
        }
    }

    /// Lebesgue measure of the domain.
    pub fn area(&self) -> f64 {
        match self {
            Domain::Ball { radius, .. } => std::f64::consts::PI * radius * radius,
            Domain::Rect { lo, hi } => (hi.x - lo.x) * (hi.y - lo.y),
            Domain::Polygon { vertices } => signed_area(vertices),
        }
    }

    /// A canonical interior point of maximal boundary distance (scanned on a
    /// fixed lattice, so the result is deterministic).
    pub fn anchor(&self) -> Point {
        match self {
            Domain::Ball { center, .. } => *center,
            Domain::Rect { lo, hi } => Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)),
            Domain::Polygon { .. } => {
                let (lo, hi) = self.bounding_box();
                let n = 64;
                let mut best = Point::new(f64::NAN, f64::NAN);
                let mut best_d = -1.0;
                for i in 0..n {
                    for j in 0..n {
                        let p = Point::new(
                            lo.x + (i as f64 + 0.5) * (hi.x - lo.x) / n as f64,
                            lo.y + (j as f64 + 0.5) * (hi.y - lo.y) / n as f64,
                        );
                        if self.contains(p) {
                            let d = self.dist_to_boundary(p);
                            if d > best_d {
                                best_d = d;
                                best = p;
                            }
                        }
                    }
                }
                best
            }
        }
    }

    /// Parameters `s` in `(0, s_max]` at which the ray `origin + s*dir`
    /// crosses ∂D, sorted increasingly. `dir` must be a unit vector.
    ///
    /// Crossings are exact (quadratic roots for the ball, segment
    /// intersections for box and polygon). Tangential touches may be reported
    /// twice at the same `s`; callers that need in/out classification should
    /// test midpoints between consecutive crossings rather than rely on
    /// parity.
    pub fn ray_crossings(&self, origin: Point, dir: Point, s_max: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match self {
            Domain::Ball { center, radius } => {
                // |o + s d - c|^2 = r^2
                let oc = origin - *center;
                let b = oc.x * dir.x + oc.y * dir.y;
                let c = oc.x * oc.x + oc.y * oc.y - radius * radius;
                let disc = b * b - c;
                if disc > 0.0 {
                    let sq = disc.sqrt();
                    for s in [-b - sq, -b + sq] {
                        if s > 1e-14 && s <= s_max {
                            out.push(s);
                        }
                    }
                }
            }
            Domain::Rect { lo, hi } => {
                let corners = [
                    Point::new(lo.x, lo.y),
                    Point::new(hi.x, lo.y),
                    Point::new(hi.x, hi.y),
                    Point::new(lo.x, hi.y),
                ];
                for i in 0..4 {
                    if let Some(s) =
                        ray_segment_crossing(origin, dir, corners[i], corners[(i + 1) % 4])
                    {
                        if s > 1e-14 && s <= s_max {
                            out.push(s);
                        }
                    }
                }
            }
            Domain::Polygon { vertices } => {
                let m = vertices.len();
                for i in 0..m {
                    if let Some(s) =
                        ray_segment_crossing(origin, dir, vertices[i], vertices[(i + 1) % m])
                    {
                        if s > 1e-14 && s <= s_max {
                            out.push(s);
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

/// Shoelace signed area (positive for counterclockwise orientation).
fn signed_area(vertices: &[Point]) -> f64 {
    let m = vertices.len();
    let mut acc = 0.0;
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

fn is_simple(vertices: &[Point]) -> bool {
    let m = vertices.len();
    for i in 0..m {
        let (a1, a2) = (vertices[i], vertices[(i + 1) % m]);
        for j in (i + 1)..m {
            // skip edges sharing a vertex
            if j == i || (j + 1) % m == i || j == (i + 1) % m {
                continue;
            }
            let (b1, b2) = (vertices[j], vertices[(j + 1) % m]);
            if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_intersect(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0
            && p.x >= a.x.min(b.x)
            && p.x <= a.x.max(b.x)
            && p.y >= a.y.min(b.y)
            && p.y <= a.y.max(b.y)
    };
    on(b1, b2, a1, d1) || on(b1, b2, a2, d2) || on(a1, a2, b1, d3) || on(a1, a2, b2, d4)
}

/// Winding number of `p` with respect to the closed polygon.
fn winding_number(vertices: &[Point], p: Point) -> i32 {
    let m = vertices.len();
    let mut wn = 0i32;
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Distance from point `p` to the closed segment `[a, b]`.
pub(crate) fn seg_point_dist(a: Point, b: Point, p: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.x * ab.x + ab.y * ab.y;
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len_sq;
    let t = t.clamp(0.0, 1.0);
    p.dist(Point::new(a.x + t * ab.x, a.y + t * ab.y))
}

/// Distance between the closed segments `[a1,a2]` and `[b1,b2]`.
pub(crate) fn seg_seg_dist(a1: Point, a2: Point, b1: Point, b2: Point) -> f64 {
    if segments_intersect(a1, a2, b1, b2) {
        return 0.0;
    }
    seg_point_dist(a1, a2, b1)
        .min(seg_point_dist(a1, a2, b2))
        .min(seg_point_dist(b1, b2, a1))
        .min(seg_point_dist(b1, b2, a2))
}

/// Ray/segment crossing parameter: smallest `s >= 0` with
/// `origin + s*dir` on `[a, b]`, if any.
fn ray_segment_crossing(origin: Point, dir: Point, a: Point, b: Point) -> Option<f64> {
    // solve origin + s dir = a + u (b - a), u in [0, 1]
    let e = b - a;
    let denom = dir.x * e.y - dir.y * e.x;
    if denom.abs() < 1e-300 {
        return None; // parallel (collinear overlap handled by neighbors)
    }
    let ao = a - origin;
    let s = (ao.x * e.y - ao.y * e.x) / denom;
    let u = (ao.x * dir.y - ao.y * dir.x) / (-denom);
    if (0.0..=1.0).contains(&u) && s >= 0.0 {
        Some(s)
    } else {
        None
    }
}
