//! Planar points and the segment predicates the rest of the crate leans on.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Componentwise `self <= other`, the order underlying the quadrant filtration.
    pub fn le(self, other: Point) -> bool {
        self.x <= other.x && self.y <= other.y
    }
}

impl From<[f64; 2]> for Point {
    fn from(p: [f64; 2]) -> Self {
        Point::new(p[0], p[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Sign of the turn a -> b -> c: positive for counterclockwise.
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentHit {
    /// Single intersection point with parameters along each segment, both in [0, 1].
    Point { t: f64, u: f64, at: Point },
    /// Collinear segments sharing more than one point.
    Overlap,
}

/// Intersects segments `p0p1` and `q0q1`. Endpoint contacts are reported as
/// points with `t` or `u` equal to exactly 0 or 1.
pub fn segment_intersection(p0: Point, p1: Point, q0: Point, q1: Point) -> Option<SegmentHit> {
    let o1 = orient2d(p0, p1, q0);
    let o2 = orient2d(p0, p1, q1);
    let o3 = orient2d(q0, q1, p0);
    let o4 = orient2d(q0, q1, p1);

    if o1 == 0.0 && o2 == 0.0 {
        return collinear_contact(p0, p1, q0, q1);
    }
    if (o1 > 0.0 && o2 > 0.0) || (o1 < 0.0 && o2 < 0.0) {
        return None;
    }
    if (o3 > 0.0 && o4 > 0.0) || (o3 < 0.0 && o4 < 0.0) {
        return None;
    }

    // Snap parameters of exact endpoint contacts so callers can dedupe by t == 0.
    let t = if o3 == 0.0 {
        0.0
    } else if o4 == 0.0 {
        1.0
    } else {
        o3 / (o3 - o4)
    };
    let u = if o1 == 0.0 {
        0.0
    } else if o2 == 0.0 {
        1.0
    } else {
        o1 / (o1 - o2)
    };
    let at = if o1 == 0.0 {
        q0
    } else if o2 == 0.0 {
        q1
    } else if o3 == 0.0 {
        p0
    } else if o4 == 0.0 {
        p1
    } else {
        p0 + (p1 - p0) * t
    };
    Some(SegmentHit::Point { t, u, at })
}

fn param_on(a: Point, b: Point, p: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(d) / len2).clamp(0.0, 1.0)
    }
}

fn collinear_contact(p0: Point, p1: Point, q0: Point, q1: Point) -> Option<SegmentHit> {
    let d = p1 - p0;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return None;
    }
    let a = (q0 - p0).dot(d) / len2;
    let b = (q1 - p0).dot(d) / len2;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let lo = lo.max(0.0);
    let hi = hi.min(1.0);
    if lo > hi {
        None
    } else if lo < hi {
        Some(SegmentHit::Overlap)
    } else {
        let at = p0 + d * lo;
        let u = param_on(q0, q1, at);
        Some(SegmentHit::Point { t: lo, u, at })
    }
}

/// Closest point on segment `ab` to `p`, as (parameter in [0, 1], distance).
pub fn project_onto_segment(p: Point, a: Point, b: Point) -> (f64, f64) {
    if p == a {
        return (0.0, 0.0);
    }
    if p == b {
        return (1.0, 0.0);
    }
    let t = param_on(a, b, p);
    (t, p.dist(a + (b - a) * t))
}

/// Angle between two undirected lines, in [0, pi/2].
pub fn line_angle(d1: Point, d2: Point) -> f64 {
    let c = d1.cross(d2).abs();
    let s = d1.dot(d2).abs();
    c.atan2(s)
}

/// Whether segment `ab` meets the closed axis-aligned box.
pub fn segment_meets_box(a: Point, b: Point, min: Point, max: Point) -> bool {
    // Liang-Barsky clipping.
    let d = b - a;
    let mut t0 = 0.0_f64;
    let mut t1 = 1.0_f64;
    for (p, q) in [
        (-d.x, a.x - min.x),
        (d.x, max.x - a.x),
        (-d.y, a.y - min.y),
        (d.y, max.y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    t0 <= t1
}
