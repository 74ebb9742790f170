//! Exact rational geometric primitives: orientation, strict containment,
//! triangle-interior intersection (separating axis), exact point-segment
//! distance, and position certification.
//!
//! No floating point anywhere in this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. Always reduced, denominator positive.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders `n/d`, or just `n` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat_int(x), rat_int(y))
    }

    pub fn origin() -> Self {
        Point::new(Rat::zero(), Rat::zero())
    }

    /// Exact squared Euclidean norm.
    pub fn norm_sq(&self) -> Rat {
        &self.x * &self.x + &self.y * &self.y
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

/// Sign of the cross product `(q - p) x (r - p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

fn cross(p: &Point, q: &Point, r: &Point) -> Rat {
    (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x)
}

/// Exact orientation of the ordered triple `(p, q, r)`.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Orientation {
    let c = cross(p, q, r);
    if c.is_zero() {
        Orientation::Collinear
    } else if c.is_positive() {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    }
}

/// Strict interior containment. `a, b, c` may be given in either
/// orientation; errors on a degenerate triangle.
pub fn point_in_triangle_interior(x: &Point, a: &Point, b: &Point, c: &Point) -> Result<bool> {
    let s = orient(a, b, c).sign();
    if s == 0 {
        return Err(Error::DegenerateTriangle);
    }
    Ok(orient(a, b, x).sign() == s && orient(b, c, x).sign() == s && orient(c, a, x).sign() == s)
}

/// Intersection mode for triangle pairs: open interiors or closed sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntersectMode {
    #[default]
    Open,
    Closed,
}

/// Separating-axis test over the six edge-supporting lines.
///
/// Open mode: the open interiors are disjoint iff some edge line of one
/// triangle has that triangle on one closed side and all vertices of the
/// other on the opposite closed side. Closed mode: disjoint iff some edge
/// line strictly separates.
pub fn triangles_interiors_intersect(
    t1: &[Point; 3],
    t2: &[Point; 3],
    mode: IntersectMode,
) -> Result<bool> {
    for (u, v) in [(t1, t2), (t2, t1)] {
        for e in 0..3 {
            let a = &u[e];
            let b = &u[(e + 1) % 3];
            let c = &u[(e + 2) % 3];
            let s = orient(a, b, c).sign();
            if s == 0 {
                return Err(Error::DegenerateTriangle);
            }
            let separated = v.iter().all(|w| {
                let t = orient(a, b, w).sign();
                match mode {
                    IntersectMode::Open => s * t <= 0,
                    IntersectMode::Closed => s * t < 0,
                }
            });
            if separated {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact squared distance from `x` to the closed segment `ab`.
pub fn sqdist_point_segment(x: &Point, a: &Point, b: &Point) -> Result<Rat> {
    if a == b {
        return Err(Error::DegenerateSegment);
    }
    let dx = &x.x - &a.x;
    let dy = &x.y - &a.y;
    let ex = &b.x - &a.x;
    let ey = &b.y - &a.y;
    let dot = &dx * &ex + &dy * &ey;
    let len_sq = &ex * &ex + &ey * &ey;
    if !dot.is_positive() {
        return Ok(&dx * &dx + &dy * &dy);
    }
    if dot >= len_sq {
        let fx = &x.x - &b.x;
        let fy = &x.y - &b.y;
        return Ok(&fx * &fx + &fy * &fy);
    }
    // Perpendicular foot lies on the segment: |d|^2 - dot^2 / |e|^2.
    Ok(&dx * &dx + &dy * &dy - &dot * &dot / len_sq)
}

/// Zero when `x` lies in the closed triangle, otherwise the minimum
/// squared distance over the three sides.
pub fn sqdist_point_triangle(x: &Point, t: &[Point; 3]) -> Result<Rat> {
    if orient(&t[0], &t[1], &t[2]) == Orientation::Collinear {
        return Err(Error::DegenerateTriangle);
    }
    if point_in_triangle_interior(x, &t[0], &t[1], &t[2])? {
        return Ok(Rat::zero());
    }
    let mut best: Option<Rat> = None;
    for e in 0..3 {
        let d = sqdist_point_segment(x, &t[e], &t[(e + 1) % 3])?;
        best = Some(match best {
            Some(b) if b <= d => b,
            _ => d,
        });
    }
    Ok(best.unwrap())
}

/// Returns the first collinear triple (lexicographic), if any.
pub fn find_collinear_triple(points: &[Point]) -> Option<(usize, usize, usize)> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(&points[i], &points[j], &points[k]) == Orientation::Collinear {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// True iff no three points are collinear (duplicates count as collinear
/// with any third point only if a genuine collinear triple exists, so
/// duplicate points are rejected separately).
pub fn certify_general_position(points: &[Point]) -> bool {
    if has_duplicate(points) {
        return false;
    }
    find_collinear_triple(points).is_none()
}

fn has_duplicate(points: &[Point]) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return true;
            }
        }
    }
    false
}

/// If every point is a vertex of the convex hull, returns the clockwise
/// cyclic order (rotated to start at the smallest index); otherwise `None`.
///
/// Precondition: general position.
pub fn certify_convex_position(points: &[Point]) -> Result<Option<Vec<usize>>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewPoints { need: 3, got: n });
    }
    let hull = convex_hull_ccw(points);
    if hull.len() < n {
        return Ok(None);
    }
    // Reverse counterclockwise hull to clockwise, start at smallest index.
    let mut order: Vec<usize> = hull.into_iter().rev().collect();
    let pos = order.iter().position(|&i| i == *order.iter().min().unwrap()).unwrap();
    order.rotate_left(pos);
    Ok(Some(order))
}

/// Andrew's monotone chain; returns hull vertex indices counterclockwise.
/// Assumes general position (no three collinear), so all hull turns are strict.
pub fn convex_hull_ccw(points: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| (&points[a].x, &points[a].y).cmp(&(&points[b].x, &points[b].y)));
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 {
            let a = lower[lower.len() - 2];
            let b = lower[lower.len() - 1];
            if orient(&points[a], &points[b], &points[i]) != Orientation::CounterClockwise {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 {
            let a = upper[upper.len() - 2];
            let b = upper[upper.len() - 1];
            if orient(&points[a], &points[b], &points[i]) != Orientation::CounterClockwise {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
