//! Plane geometry in centimetres, y pointing down the panel.

use serde::{Deserialize, Serialize};

pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

pub fn pt(x: f64, y: f64) -> Point {
    Point { x, y }
}

impl Point {
    pub fn sub(self, o: Point) -> Point {
        pt(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point) -> Point {
        pt(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, k: f64) -> Point {
        pt(self.x * k, self.y * k)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        self.sub(o).norm()
    }

    /// Rotation by `deg` degrees, clockwise on a y-down panel.
    pub fn rotate(self, deg: f64) -> Point {
        let (s, c) = deg.to_radians().sin_cos();
        pt(self.x * c - self.y * s, self.x * s + self.y * c)
    }
}

pub fn polyline_length(points: &[Point]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a.add(ab.scale(t)))
}

/// Common point of two closed segments: the crossing point, a touching
/// endpoint, or the midpoint of a collinear overlap.
pub fn segment_intersection(a: Point, b: Point, c: Point, d: Point) -> Option<Point> {
    let r = b.sub(a);
    let s = d.sub(c);
    let denom = r.cross(s);
    let qp = c.sub(a);
    let scale = r.norm().max(s.norm()).max(1.0);
    if denom.abs() <= EPS * scale * scale {
        if qp.cross(r).abs() > EPS * scale * scale {
            return None;
        }
        let rr = r.dot(r);
        if rr == 0.0 {
            return (point_segment_distance(a, c, d) <= EPS).then_some(a);
        }
        let t0 = qp.dot(r) / rr;
        let t1 = t0 + s.dot(r) / rr;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        if lo > hi + EPS {
            return None;
        }
        return Some(a.add(r.scale((lo + hi) / 2.0)));
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let tol = EPS * scale;
    if (-tol..=1.0 + tol).contains(&t) && (-tol..=1.0 + tol).contains(&u) {
        Some(a.add(r.scale(t.clamp(0.0, 1.0))))
    } else {
        None
    }
}

pub fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segment_intersection(a, b, c, d).is_some() {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Arc-length position of `p` along the polyline, if it lies within `tol`.
pub fn arc_position(points: &[Point], p: Point, tol: f64) -> Option<f64> {
    let mut walked = 0.0;
    let mut best: Option<(f64, f64)> = None;
    for w in points.windows(2) {
        let ab = w[1].sub(w[0]);
        let len = ab.norm();
        let t = if len == 0.0 {
            0.0
        } else {
            (p.sub(w[0]).dot(ab) / (len * len)).clamp(0.0, 1.0)
        };
        let d = p.dist(w[0].add(ab.scale(t)));
        if d <= tol && best.is_none_or(|(bd, _)| d < bd - EPS) {
            best = Some((d, walked + t * len));
        }
        walked += len;
    }
    best.map(|(_, s)| s)
}

fn axes(poly: &[Point]) -> impl Iterator<Item = Point> + '_ {
    (0..poly.len()).map(move |i| {
        let e = poly[(i + 1) % poly.len()].sub(poly[i]);
        pt(-e.y, e.x)
    })
}

/// Separating-axis test for convex polygons; touching edges do not count
/// as overlap.
pub fn convex_overlap(p: &[Point], q: &[Point]) -> bool {
    for axis in axes(p).chain(axes(q)) {
        let proj = |poly: &[Point]| {
            poly.iter()
                .map(|v| v.dot(axis))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                    (lo.min(x), hi.max(x))
                })
        };
        let (a0, a1) = proj(p);
        let (b0, b1) = proj(q);
        let tol = 1e-7 * axis.norm();
        if a1 <= b0 + tol || b1 <= a0 + tol {
            return false;
        }
    }
    true
}
