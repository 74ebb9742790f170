//! Point-set generators (near-regular inscribed n-gons, random
//! general-position sets, three-cluster convex sets), anchor selection,
//! and the text interchange format.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::geom::{
    certify_convex_position, find_collinear_triple, fmt_rat, orient, Orientation, Point, Rat,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    /// Rational unit-circle points within angular tolerance pi/(8 n^2) of
    /// the regular n-gon positions, indexed in clockwise order.
    NearRegular,
    RandomGeneral,
    ThreeCluster,
    Custom,
}

#[derive(Debug, Clone)]
pub struct PointSet {
    pub points: Vec<Point>,
    /// Clockwise cyclic order of the indices, present iff the set is in
    /// convex position. The generators produce points whose clockwise
    /// order is the identity permutation.
    pub convex_order: Option<Vec<usize>>,
    pub kind: Kind,
}

impl PointSet {
    /// Certifies general position (error names the first collinear triple
    /// or duplicate) and records the convex order when the set is convex.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if let Some((i, j, k)) = find_duplicate_or_collinear(&points) {
            return Err(Error::CollinearTriple(i, j, k));
        }
        let convex_order = if points.len() >= 3 {
            certify_convex_position(&points)?
        } else {
            None
        };
        let mut ps = PointSet { points, convex_order, kind: Kind::Custom };
        if ps.detect_near_regular() {
            ps.kind = Kind::NearRegular;
        }
        Ok(ps)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn is_convex(&self) -> bool {
        self.convex_order.is_some()
    }

    /// rank\[i\] = position of point i in the clockwise cyclic order.
    pub fn ranks(&self) -> Result<Vec<usize>> {
        let order = self.convex_order.as_ref().ok_or(Error::RequiresConvexOrder)?;
        let mut rank = vec![0usize; self.n()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        Ok(rank)
    }

    /// Point index at a given clockwise rank.
    pub fn index_at_rank(&self, r: usize) -> Result<usize> {
        let order = self.convex_order.as_ref().ok_or(Error::RequiresConvexOrder)?;
        Ok(order[r])
    }

    /// All points exactly on the unit circle, with clockwise order the
    /// identity and every point within the near-regular angular tolerance
    /// of its regular position. Float math only gates classification; the
    /// margin is far wider than any rounding error.
    fn detect_near_regular(&mut self) -> bool {
        let n = self.n();
        if n < 3 {
            return false;
        }
        match &self.convex_order {
            Some(order) if order.iter().enumerate().all(|(r, &i)| r == i) => {}
            _ => return false,
        }
        let one = Rat::one();
        if !self.points.iter().all(|p| p.norm_sq() == one) {
            return false;
        }
        let tol = 1.2 * std::f64::consts::PI / (8.0 * (n * n) as f64);
        self.points.iter().enumerate().all(|(k, p)| {
            let x = rat_to_f64(&p.x);
            let y = rat_to_f64(&p.y);
            let theta = y.atan2(x);
            let want = -2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let mut d = (theta - want) % (2.0 * std::f64::consts::PI);
            if d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            if d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            d.abs() <= tol
        })
    }
}

fn find_duplicate_or_collinear(points: &[Point]) -> Option<(usize, usize, usize)> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Some((i, j, j));
            }
        }
    }
    find_collinear_triple(points)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back for extreme denominators: sign * exp-scaled quotient.
        let digits = r.denom().to_string().len() as i32 - r.numer().to_string().len() as i32;
        if digits > 300 {
            0.0
        } else {
            f64::NAN
        }
    })
}

/// A near-center (or near-centroid) point in general position with
/// respect to its host set.
#[derive(Debug, Clone)]
pub struct AnchorPoint {
    pub point: Point,
}

/// Rational point on the unit circle at angle `theta` (radians, in
/// (-pi, pi)), within 1/denom radians of it, via the tangent half-angle
/// parametrization.
fn circle_point(theta: f64, denom: u64) -> Point {
    let t = (theta / 2.0).tan();
    let scaled = (t * denom as f64).round();
    let tq = Rat::new(BigInt::from(scaled as i128), BigInt::from(denom));
    let one = Rat::one();
    let t2 = &tq * &tq;
    let den = &one + &t2;
    Point::new((&one - &t2) / &den, (&tq + &tq) / den)
}

/// Near-regular n-gon inscribed in the unit circle, clockwise from (1,0).
///
/// Every coordinate is rational with x^2 + y^2 = 1 exactly; each point is
/// within pi/(8 n^2) of its regular position, which preserves the regular
/// n-gon's cyclic order, majority side of every chord, and the order of
/// chord distances to the center whenever step counts differ.
pub fn gen_near_regular(n: usize) -> PointSet {
    assert!(n >= 3, "need n >= 3");
    let denom = 64 * (n * n) as u64;
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        if 2 * k == n {
            points.push(Point::new(-Rat::one(), Rat::zero()));
            continue;
        }
        let mut theta = -2.0 * std::f64::consts::PI * k as f64 / n as f64;
        if theta <= -std::f64::consts::PI {
            theta += 2.0 * std::f64::consts::PI;
        }
        points.push(circle_point(theta, denom));
    }
    let ps = PointSet::new(points).expect("near-regular generation is general position");
    debug_assert_eq!(ps.kind, Kind::NearRegular);
    debug_assert_eq!(ps.convex_order.as_deref(), Some(&(0..n).collect::<Vec<_>>()[..]));
    ps
}

fn on_spanned_line(ps: &PointSet, x: &Point) -> bool {
    let n = ps.n();
    for i in 0..n {
        for j in i + 1..n {
            if orient(ps.point(i), ps.point(j), x) == Orientation::Collinear {
                return true;
            }
        }
    }
    false
}

/// Deterministic perturbation schedule: target + (1/2^k, 1/3^k) for
/// k = 4 n^2, 4 n^2 + 1, ... Terminates because only finitely many lines
/// are forbidden.
pub fn perturb_to_general(ps: &PointSet, target: &Point) -> Point {
    if !on_spanned_line(ps, target) {
        return target.clone();
    }
    let n = ps.n();
    let mut k = 4 * n * n;
    loop {
        let dx = Rat::new(BigInt::one(), BigInt::from(2u32).pow(k as u32));
        let dy = Rat::new(BigInt::one(), BigInt::from(3u32).pow(k as u32));
        let cand = Point::new(&target.x + dx, &target.y + dy);
        if !on_spanned_line(ps, &cand) {
            return cand;
        }
        k += 1;
    }
}

/// Anchor near the circle center for near-regular hosts (|x| < 1/(8 n^2)),
/// or near the centroid otherwise.
pub fn choose_anchor(ps: &PointSet) -> AnchorPoint {
    let target = match ps.kind {
        Kind::NearRegular => Point::origin(),
        _ => centroid(&ps.points),
    };
    AnchorPoint { point: perturb_to_general(ps, &target) }
}

pub fn centroid(points: &[Point]) -> Point {
    let n = Rat::from_integer(BigInt::from(points.len()));
    let mut sx = Rat::zero();
    let mut sy = Rat::zero();
    for p in points {
        sx += &p.x;
        sy += &p.y;
    }
    Point::new(sx / &n, sy / n)
}

/// Random integer-coordinate general-position set, deterministic per seed.
pub fn gen_random_general(n: usize, bound: i64, seed: u64) -> Result<PointSet> {
    assert!(n >= 1 && bound >= 1);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    let budget = 5000 + 500 * n;
    let mut attempts = 0usize;
    while pts.len() < n {
        attempts += 1;
        if attempts > budget {
            return Err(Error::RetryBudget);
        }
        let x = rng.random_range(-bound..=bound);
        let y = rng.random_range(-bound..=bound);
        let cand = Point::from_ints(x, y);
        if pts.iter().any(|p| *p == cand) {
            continue;
        }
        let mut ok = true;
        'outer: for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if orient(&pts[i], &pts[j], &cand) == Orientation::Collinear {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            pts.push(cand);
        }
    }
    let mut ps = PointSet::new(pts)?;
    if ps.kind == Kind::Custom {
        ps.kind = Kind::RandomGeneral;
    }
    Ok(ps)
}

/// Convex-position set of n points (n divisible by 3) in three tight
/// arcs near the vertices of an equilateral-ish triangle on the unit
/// circle. `spread` is the angular width of each cluster in turns.
pub fn gen_three_cluster(n: usize, spread: f64) -> Result<PointSet> {
    if n < 3 || n % 3 != 0 {
        return Err(Error::InvalidArg(format!("n = {n} is not a positive multiple of 3")));
    }
    if !(spread > 0.0 && spread < 0.1) {
        return Err(Error::InvalidArg("spread must be in (0, 0.1) turns".into()));
    }
    let per = n / 3;
    let width = 2.0 * std::f64::consts::PI * spread;
    let delta = if per > 1 { width / (per - 1) as f64 } else { 0.0 };
    // Enough angular resolution to keep cluster points distinct and ordered.
    let denom = ((16.0 / (delta.max(1e-9))).ceil() as u64).max(64 * (n * n) as u64);
    let mut points = Vec::with_capacity(n);
    for c in 0..3 {
        let center = std::f64::consts::FRAC_PI_2 - 2.0 * std::f64::consts::PI * c as f64 / 3.0;
        for j in 0..per {
            // Clockwise within the cluster: angles decreasing with j.
            let theta = center + ((per - 1) as f64 / 2.0 - j as f64) * delta;
            points.push(circle_point(theta, denom));
        }
    }
    let mut ps = PointSet::new(points)?;
    let identity: Vec<usize> = (0..n).collect();
    if ps.convex_order.as_deref() != Some(&identity[..]) {
        return Err(Error::ProofViolation(
            "three-cluster generator produced an out-of-order set".into(),
        ));
    }
    ps.kind = Kind::ThreeCluster;
    Ok(ps)
}

pub fn parse_rat(tok: &str, line: usize) -> Result<Rat> {
    let bad = |msg: &str| Error::Parse { line, msg: msg.to_string() };
    if let Some((a, b)) = tok.split_once('/') {
        let num: BigInt = a.parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = b.parse().map_err(|_| bad("bad denominator"))?;
        if !den.is_positive() {
            return Err(bad("denominator must be positive"));
        }
        Ok(Rat::new(num, den))
    } else {
        let num: BigInt = tok.parse().map_err(|_| bad("bad integer coordinate"))?;
        Ok(Rat::from_integer(num))
    }
}

/// Reads the point-set interchange format:
/// `points <n>`, then n lines `<x> <y>` (`<int>` or `<int>/<posint>`),
/// `#` comments, optional trailing `convex-order i0 i1 ...`.
pub fn read_pointset<R: BufRead>(reader: R) -> Result<PointSet> {
    let mut lines = Vec::new();
    for (no, l) in reader.lines().enumerate() {
        let l = l?;
        let stripped = match l.split_once('#') {
            Some((head, _)) => head.trim().to_string(),
            None => l.trim().to_string(),
        };
        if !stripped.is_empty() {
            lines.push((no + 1, stripped));
        }
    }
    let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let (first_no, header) =
        lines.first().ok_or_else(|| bad(1, "empty input, expected `points <n>`"))?;
    let n: usize = header
        .strip_prefix("points ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad(*first_no, "expected `points <n>`"))?;
    if lines.len() < n + 1 {
        return Err(bad(*first_no, "fewer coordinate lines than declared"));
    }
    let mut points = Vec::with_capacity(n);
    for (no, l) in &lines[1..=n] {
        let mut it = l.split_whitespace();
        let x = it.next().ok_or_else(|| bad(*no, "missing x coordinate"))?;
        let y = it.next().ok_or_else(|| bad(*no, "missing y coordinate"))?;
        if it.next().is_some() {
            return Err(bad(*no, "trailing tokens on coordinate line"));
        }
        points.push(Point::new(parse_rat(x, *no)?, parse_rat(y, *no)?));
    }
    let mut declared_order: Option<Vec<usize>> = None;
    for (no, l) in &lines[n + 1..] {
        if let Some(rest) = l.strip_prefix("convex-order") {
            let order: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(*no, "bad convex-order index")))
                .collect::<Result<_>>()?;
            if order.len() != n {
                return Err(bad(*no, "convex-order length does not match point count"));
            }
            declared_order = Some(order);
        } else {
            return Err(bad(*no, "unexpected trailing line"));
        }
    }
    let ps = PointSet::new(points)?;
    if let Some(declared) = declared_order {
        match &ps.convex_order {
            Some(actual) if cyclic_equal(actual, &declared) => {}
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    msg: "declared convex-order does not match the certified cyclic order".into(),
                })
            }
        }
    }
    Ok(ps)
}

fn cyclic_equal(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    let n = a.len();
    let Some(shift) = a.iter().position(|&v| v == b[0]) else { return false };
    (0..n).all(|i| a[(shift + i) % n] == b[i])
}

pub fn write_pointset<W: Write>(ps: &PointSet, mut w: W) -> std::io::Result<()> {
    writeln!(w, "points {}", ps.n())?;
    for p in &ps.points {
        writeln!(w, "{} {}", fmt_rat(&p.x), fmt_rat(&p.y))?;
    }
    if let Some(order) = &ps.convex_order {
        let toks: Vec<String> = order.iter().map(|i| i.to_string()).collect();
        writeln!(w, "convex-order {}", toks.join(" "))?;
    }
    Ok(())
}

pub fn pointset_to_string(ps: &PointSet) -> String {
    let mut buf = Vec::new();
    write_pointset(ps, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

/// True iff the anchor lies on no line through two host points.
pub fn anchor_in_general_position(ps: &PointSet, x: &Point) -> bool {
    !on_spanned_line(ps, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn near_regular_on_circle_identity_order() {
        for n in [3usize, 4, 5, 6, 7, 12, 21] {
            let ps = gen_near_regular(n);
            assert_eq!(ps.n(), n);
            let one = Rat::one();
            assert!(ps.points.iter().all(|p| p.norm_sq() == one), "n={n}: off circle");
            assert_eq!(ps.convex_order.as_deref(), Some(&(0..n).collect::<Vec<_>>()[..]));
            assert_eq!(ps.kind, Kind::NearRegular);
        }
        // t = 0 gives (1,0) exactly.
        let ps = gen_near_regular(4);
        assert_eq!(*ps.point(0), Point::from_ints(1, 0));
        assert_eq!(*ps.point(2), Point::from_ints(-1, 0));
    }

    #[test]
    fn near_regular_majority_side_contains_center() {
        // For every chord with unequal step counts, the open half-plane
        // with more remaining points contains the circle center.
        for n in [5usize, 6, 7, 8, 9] {
            let ps = gen_near_regular(n);
            let center = Point::origin();
            for i in 0..n {
                for j in i + 1..n {
                    let s = (j - i) - 1;
                    let other = n - 2 - s;
                    if s == other {
                        continue;
                    }
                    let mut pos = 0usize;
                    let mut neg = 0usize;
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        match orient(ps.point(i), ps.point(j), ps.point(k)).sign() {
                            1 => pos += 1,
                            -1 => neg += 1,
                            _ => panic!("collinear"),
                        }
                    }
                    let center_sign = orient(ps.point(i), ps.point(j), &center).sign();
                    let majority_sign = if pos > neg { 1 } else { -1 };
                    assert_eq!(center_sign, majority_sign, "n={n} chord=({i},{j})");
                }
            }
        }
    }

    #[test]
    fn anchor_general_position() {
        for n in [4usize, 5, 6, 8] {
            let ps = gen_near_regular(n);
            let a = choose_anchor(&ps);
            assert!(anchor_in_general_position(&ps, &a.point), "n={n}");
        }
        // n=4: the anchor must avoid both diagonals.
        let ps = gen_near_regular(4);
        let a = choose_anchor(&ps);
        assert_ne!(orient(ps.point(0), ps.point(2), &a.point), Orientation::Collinear);
        assert_ne!(orient(ps.point(1), ps.point(3), &a.point), Orientation::Collinear);
    }

    #[test]
    fn random_general_deterministic() {
        let a = gen_random_general(9, 100, 7).unwrap();
        let b = gen_random_general(9, 100, 7).unwrap();
        assert_eq!(pointset_to_string(&a), pointset_to_string(&b));
        assert!(crate::geom::certify_general_position(&a.points));
        let c = gen_random_general(4, 10, 1).unwrap();
        assert_eq!(c.n(), 4);
        assert!(crate::geom::certify_general_position(&c.points));
        assert!(gen_random_general(3, 1, 0).is_ok());
    }

    #[test]
    fn three_cluster_props() {
        let ps = gen_three_cluster(9, 0.02).unwrap();
        assert_eq!(ps.kind, Kind::ThreeCluster);
        assert!(ps.is_convex());
        assert!(gen_three_cluster(8, 0.02).is_err());
        // Blocks are contiguous in the cyclic order by construction.
        let ps6 = gen_three_cluster(6, 0.02).unwrap();
        assert_eq!(ps6.convex_order.as_deref(), Some(&[0, 1, 2, 3, 4, 5][..]));
    }

    #[test]
    fn roundtrip_and_errors() {
        let ps = gen_random_general(6, 50, 3).unwrap();
        let text = pointset_to_string(&ps);
        let back = read_pointset(text.as_bytes()).unwrap();
        assert_eq!(pointset_to_string(&back), text);

        let collinear = "points 3\n0 0\n1 1\n2 2\n";
        match read_pointset(collinear.as_bytes()) {
            Err(Error::CollinearTriple(0, 1, 2)) => {}
            other => panic!("expected collinear error, got {other:?}"),
        }

        let shorthand = "points 3\n3 4\n0 0\n1 0\n";
        let ps = read_pointset(shorthand.as_bytes()).unwrap();
        assert_eq!(*ps.point(0), Point::from_ints(3, 4));
    }
}
