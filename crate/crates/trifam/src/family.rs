//! Triangles as index triples, families, the intersection predicates,
//! depth, and the closed forms F(n) and F_d(n).

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geom::{point_in_triangle_interior, triangles_interiors_intersect, Point};
use crate::pointset::{anchor_in_general_position, AnchorPoint, PointSet};

pub use crate::geom::IntersectMode as Mode;

/// Canonical index triple i < j < k into a host point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriangleId(pub usize, pub usize, pub usize);

impl TriangleId {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        assert!(v[0] < v[1] && v[1] < v[2], "triangle indices must be distinct");
        TriangleId(v[0], v[1], v[2])
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.0, self.1, self.2]
    }

    pub fn contains_vertex(&self, p: usize) -> bool {
        self.0 == p || self.1 == p || self.2 == p
    }

    pub fn points(&self, ps: &PointSet) -> [Point; 3] {
        [ps.point(self.0).clone(), ps.point(self.1).clone(), ps.point(self.2).clone()]
    }
}

impl std::fmt::Display for TriangleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0, self.1, self.2)
    }
}

/// A set of spanned triangles over a host point set, with the
/// intersection mode its claims refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub members: BTreeSet<TriangleId>,
    pub mode: Mode,
}

impl Family {
    pub fn new(mode: Mode) -> Self {
        Family { members: BTreeSet::new(), mode }
    }

    pub fn from_members<I: IntoIterator<Item = TriangleId>>(members: I, mode: Mode) -> Self {
        Family { members: members.into_iter().collect(), mode }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn validate_indices(&self, ps: &PointSet) -> Result<()> {
        for t in &self.members {
            if t.2 >= ps.n() {
                return Err(Error::InvalidArg(format!(
                    "triangle {t} out of range for {} points",
                    ps.n()
                )));
            }
        }
        Ok(())
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// F(n) = C(ceil((n+2)/2), 3) + C(floor((n+2)/2), 3), the extremal
/// intersecting-family size in convex position.
pub fn f_count(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::InvalidArg(format!("F(n) needs n >= 3, got {n}")));
    }
    Ok(binomial((n + 3) / 2, 3) + binomial((n + 2) / 2, 3))
}

/// F(n) as usize, for desk-scale n.
pub fn f_count_usize(n: usize) -> Result<usize> {
    Ok(f_count(n)?.to_usize().expect("F(n) fits usize at desk scale"))
}

/// F_d(n) = C(floor((n+2)/2), d+1) + C(ceil((n+2)/2), d+1).
pub fn f_d_count(n: usize, d: usize) -> Result<BigUint> {
    if d < 1 {
        return Err(Error::InvalidArg("F_d needs d >= 1".into()));
    }
    if n < d + 1 {
        return Err(Error::InvalidArg(format!("F_d(n) needs n >= d+1, got n={n}, d={d}")));
    }
    Ok(binomial((n + 2) / 2, d + 1) + binomial((n + 3) / 2, d + 1))
}

fn exact_div(a: BigUint, b: u32) -> BigUint {
    let b = BigUint::from(b);
    let (q, r) = num_integer::Integer::div_rem(&a, &b);
    assert!(r.is_zero(), "non-exact division in arc count");
    q
}

/// Independent recomputation of F(n) by the arc-counting summation:
/// odd n sums (n/3)(1 + 2 + ... + (n-1)/2); even n first excludes
/// triangles with a diameter side, then adds back the half of them that
/// contain the near-center point.
pub fn count_center_triangles_via_arcs(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::InvalidArg(format!("need n >= 3, got {n}")));
    }
    let big = BigUint::from;
    if n % 2 == 1 {
        // sum_{i=1}^{(n-1)/2} i, counted from each vertex, each triangle 3x.
        let h = (n - 1) / 2;
        let s = big(h) * big(h + 1) / big(2usize);
        Ok(exact_div(big(n) * s, 3))
    } else {
        let h = (n - 4) / 2;
        let s = big(h) * big(h + 1) / big(2usize);
        let non_diameter = exact_div(big(n) * s, 3);
        let diameter_half = exact_div(big(n) * big(n - 2), 4);
        Ok(non_diameter + diameter_half)
    }
}

/// Open-interior intersection of two triangles on a convex point set,
/// decided purely from cyclic ranks (0..n clockwise).
///
/// Cases: identical triangles intersect; a shared edge intersects iff the
/// third vertices lie on the same open arc of the chord; a single shared
/// vertex intersects iff the far arcs overlap; disjoint vertex sets are
/// separable iff one triangle sits inside a single cyclic gap of the other.
pub fn convex_intersects(n: usize, t1: [usize; 3], t2: [usize; 3]) -> bool {
    let s1: BTreeSet<usize> = t1.iter().copied().collect();
    let s2: BTreeSet<usize> = t2.iter().copied().collect();
    let shared: Vec<usize> = s1.intersection(&s2).copied().collect();
    match shared.len() {
        3 => true,
        2 => {
            let a = shared[0];
            let b = shared[1];
            let c1 = *s1.iter().find(|&&v| !shared.contains(&v)).unwrap();
            let c2 = *s2.iter().find(|&&v| !shared.contains(&v)).unwrap();
            let rel = |v: usize| (v + n - a) % n;
            (rel(c1) < rel(b)) == (rel(c2) < rel(b))
        }
        1 => {
            let p = shared[0];
            let rel = |v: usize| (v + n - p) % n;
            let mut o1: Vec<usize> = s1.iter().filter(|&&v| v != p).map(|&v| rel(v)).collect();
            let mut o2: Vec<usize> = s2.iter().filter(|&&v| v != p).map(|&v| rel(v)).collect();
            o1.sort_unstable();
            o2.sort_unstable();
            // Far arcs (o[0], o[1]), continuous open intervals in (0, n).
            o1[0].max(o2[0]) < o1[1].min(o2[1])
        }
        _ => {
            // Disjoint vertex sets: separable iff all of t2 lies strictly
            // inside one cyclic gap between consecutive vertices of t1.
            let mut v1: Vec<usize> = s1.into_iter().collect();
            v1.sort_unstable();
            for g in 0..3 {
                let lo = v1[g];
                let hi = v1[(g + 1) % 3];
                let gap_len = (hi + n - lo) % n;
                if s2.iter().all(|&v| {
                    let d = (v + n - lo) % n;
                    d > 0 && d < gap_len
                }) {
                    return false;
                }
            }
            true
        }
    }
}

/// Decides intersection of two member triangles in the family's mode.
pub fn triangle_pair_intersects(
    ps: &PointSet,
    ranks: Option<&[usize]>,
    mode: Mode,
    a: &TriangleId,
    b: &TriangleId,
) -> Result<bool> {
    if mode == Mode::Open {
        if let Some(rk) = ranks {
            let n = ps.n();
            let t1 = [rk[a.0], rk[a.1], rk[a.2]];
            let t2 = [rk[b.0], rk[b.1], rk[b.2]];
            return Ok(convex_intersects(n, t1, t2));
        }
    }
    triangles_interiors_intersect(&a.points(ps), &b.points(ps), mode)
}

/// `Ok(None)` when every pair of members intersects in the family's mode;
/// otherwise the lexicographically first violating pair.
pub fn is_intersecting_family(
    ps: &PointSet,
    family: &Family,
) -> Result<Option<(TriangleId, TriangleId)>> {
    family.validate_indices(ps)?;
    let ranks = if family.mode == Mode::Open { ps.ranks().ok() } else { None };
    let members: Vec<&TriangleId> = family.members.iter().collect();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if !triangle_pair_intersects(ps, ranks.as_deref(), family.mode, members[i], members[j])?
            {
                return Ok(Some((*members[i], *members[j])));
            }
        }
    }
    Ok(None)
}

/// All spanned triangles strictly containing the anchor.
pub fn trivial_family(ps: &PointSet, anchor: &AnchorPoint) -> Result<Family> {
    if !anchor_in_general_position(ps, &anchor.point) {
        return Err(Error::AnchorNotGeneral);
    }
    let n = ps.n();
    let mut members = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if point_in_triangle_interior(
                    &anchor.point,
                    ps.point(i),
                    ps.point(j),
                    ps.point(k),
                )? {
                    members.insert(TriangleId(i, j, k));
                }
            }
        }
    }
    Ok(Family { members, mode: Mode::Open })
}

/// Number of spanned triangles strictly containing `x`, by exhaustive
/// enumeration. Errors when `x` lies on a spanned line.
pub fn depth(ps: &PointSet, x: &Point) -> Result<usize> {
    let anchor = AnchorPoint { point: x.clone() };
    Ok(trivial_family(ps, &anchor)?.len())
}

/// Family file format: `family <m>`, then m lines `<i> <j> <k>`.
/// Lines after the m member rows are ignored so solver output (family
/// plus a summary line) can be piped straight back in.
pub fn read_family<R: BufRead>(reader: R, mode: Mode) -> Result<Family> {
    let mut rows = Vec::new();
    for (no, l) in reader.lines().enumerate() {
        let l = l?;
        let stripped = match l.split_once('#') {
            Some((head, _)) => head.trim().to_string(),
            None => l.trim().to_string(),
        };
        if !stripped.is_empty() {
            rows.push((no + 1, stripped));
        }
    }
    let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let (first_no, header) =
        rows.first().ok_or_else(|| bad(1, "empty input, expected `family <m>`"))?;
    let m: usize = header
        .strip_prefix("family ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad(*first_no, "expected `family <m>`"))?;
    if rows.len() < m + 1 {
        return Err(bad(*first_no, "fewer member lines than declared"));
    }
    let mut members = BTreeSet::new();
    for (no, l) in &rows[1..=m] {
        let idx: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(*no, "bad triangle index")))
            .collect::<Result<_>>()?;
        if idx.len() != 3 || !(idx[0] < idx[1] && idx[1] < idx[2]) {
            return Err(bad(*no, "expected `<i> <j> <k>` with i < j < k"));
        }
        members.insert(TriangleId(idx[0], idx[1], idx[2]));
    }
    Ok(Family { members, mode })
}

pub fn write_family<W: Write>(family: &Family, mut w: W) -> std::io::Result<()> {
    writeln!(w, "family {}", family.len())?;
    for t in &family.members {
        writeln!(w, "{} {} {}", t.0, t.1, t.2)?;
    }
    Ok(())
}

pub fn family_to_string(family: &Family) -> String {
    let mut buf = Vec::new();
    write_family(family, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{choose_anchor, gen_near_regular};

    #[test]
    fn f_values() {
        let want = [(3, 1u64), (4, 2), (5, 5), (6, 8), (7, 14), (8, 20), (9, 30), (10, 40)];
        for (n, v) in want {
            assert_eq!(f_count(n).unwrap(), BigUint::from(v), "F({n})");
        }
        assert!(f_count(2).is_err());
    }

    #[test]
    fn f_matches_parity_closed_forms() {
        for n in 3..=2000usize {
            let f = f_count(n).unwrap();
            let closed = if n % 2 == 1 {
                BigUint::from((n - 1) * n * (n + 1) / 24)
            } else {
                BigUint::from(n * (n - 2) * (n + 2) / 24)
            };
            assert_eq!(f, closed, "n={n}");
        }
    }

    #[test]
    fn f_d_values() {
        for n in 3..=100usize {
            assert_eq!(f_d_count(n, 2).unwrap(), f_count(n).unwrap());
        }
        assert_eq!(f_d_count(5, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(f_d_count(3, 1).unwrap(), BigUint::from(4u32));
        assert!(f_d_count(3, 3).is_err());
    }

    #[test]
    fn arc_count_examples() {
        assert_eq!(count_center_triangles_via_arcs(5).unwrap(), BigUint::from(5u32));
        assert_eq!(count_center_triangles_via_arcs(6).unwrap(), BigUint::from(8u32));
        assert_eq!(count_center_triangles_via_arcs(3).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn f_recursion() {
        for n in 5..=300usize {
            let lhs = f_count(n).unwrap();
            let rhs = f_count(n - 2).unwrap()
                + binomial((n + 1) / 2, 2)
                + binomial(n / 2, 2);
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn convex_intersects_examples() {
        assert!(!convex_intersects(6, [0, 1, 2], [3, 4, 5]));
        assert!(convex_intersects(6, [0, 2, 4], [1, 3, 5]));
        // Shared vertex, non-interleaved far arcs: disjoint.
        assert!(!convex_intersects(5, [0, 1, 2], [0, 3, 4]));
        // Shared edge, third vertices on opposite arcs: disjoint.
        assert!(!convex_intersects(6, [0, 3, 1], [0, 3, 4]));
        // Shared edge, same arc: intersecting.
        assert!(convex_intersects(6, [0, 3, 1], [0, 3, 2]));
        assert!(convex_intersects(6, [0, 1, 2], [0, 1, 2]));
    }

    #[test]
    fn trivial_family_and_depth() {
        for (n, want) in [(3usize, 1usize), (5, 5), (7, 14)] {
            let ps = gen_near_regular(n);
            let anchor = choose_anchor(&ps);
            let fam = trivial_family(&ps, &anchor).unwrap();
            assert_eq!(fam.len(), want, "n={n}");
            assert_eq!(is_intersecting_family(&ps, &fam).unwrap(), None);
        }
        let ps = gen_near_regular(5);
        assert_eq!(depth(&ps, &Point::from_ints(10, 10)).unwrap(), 0);
    }

    #[test]
    fn violating_pair_reported() {
        let ps = gen_near_regular(5);
        let fam = Family::from_members([TriangleId(0, 1, 2), TriangleId(0, 3, 4)], Mode::Open);
        let viol = is_intersecting_family(&ps, &fam).unwrap();
        assert_eq!(viol, Some((TriangleId(0, 1, 2), TriangleId(0, 3, 4))));
    }

    #[test]
    fn family_roundtrip() {
        let fam = Family::from_members([TriangleId(0, 1, 2), TriangleId(1, 3, 4)], Mode::Open);
        let text = family_to_string(&fam);
        let back = read_family(text.as_bytes(), Mode::Open).unwrap();
        assert_eq!(back, fam);
    }
}
