//! Zigzag strips on convex hosts: maximal alternating paths, step counts,
//! strip enumeration, membership classification, and the double-counting
//! certificate bounding an intersecting family by the trivial one.
//!
//! "Parallel" is combinatorial: chords {a,b} and {c,d} in rank space are
//! parallel iff a + b = c + d (mod n), i.e. they subtend equal step
//! counts on corresponding sides. On a near-regular (not exactly regular)
//! polygon geometric parallelism fails by tolerance; the combinatorial
//! reading keeps the construction exact.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::family::{is_intersecting_family, trivial_family, Family, TriangleId};
use crate::pointset::{AnchorPoint, Kind, PointSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    /// Seed edges (point-index pairs) sharing one vertex.
    pub seed: ((usize, usize), (usize, usize)),
    /// Point indices along the maximal zigzag path.
    pub path: Vec<usize>,
    /// Convex hulls of consecutive edge pairs, in path order.
    pub triangles: Vec<TriangleId>,
    /// Vertices on the open arc gamma (far side of the seed path).
    pub step: usize,
}

impl Strip {
    pub fn is_nontrivial(&self) -> bool {
        self.triangles.len() >= 2
    }

    /// Canonical dedup key: the path up to direction reversal. Two
    /// distinct maximal paths can span the same triangle set (even n has
    /// chords parallel in both pairings), and those count as distinct
    /// strips.
    fn key(&self) -> Vec<usize> {
        let mut rev = self.path.clone();
        rev.reverse();
        self.path.clone().min(rev)
    }
}

/// Vertices strictly between ranks `a` and `b` on the side not containing
/// rank `x`.
fn arc_count_excluding(n: usize, a: usize, b: usize, x: usize) -> usize {
    let d_ab = (b + n - a) % n;
    let d_ax = (x + n - a) % n;
    if d_ax < d_ab {
        n - d_ab - 1
    } else {
        d_ab - 1
    }
}

/// Rank triple (u, v, w) of a 2-path: v is the vertex shared by e1 and e2.
fn seed_ranks(
    ps: &PointSet,
    e1: (usize, usize),
    e2: (usize, usize),
) -> Result<(usize, usize, usize)> {
    let verts: BTreeSet<usize> = [e1.0, e1.1, e2.0, e2.1].into_iter().collect();
    if verts.len() != 3 || e1.0 == e1.1 || e2.0 == e2.1 {
        return Err(Error::BadSeedEdges);
    }
    let shared = if e1.0 == e2.0 || e1.0 == e2.1 { e1.0 } else { e1.1 };
    if !(e2.0 == shared || e2.1 == shared) {
        return Err(Error::BadSeedEdges);
    }
    let u = if e1.0 == shared { e1.1 } else { e1.0 };
    let w = if e2.0 == shared { e2.1 } else { e2.0 };
    let ranks = ps.ranks()?;
    Ok((ranks[u], ranks[shared], ranks[w]))
}

/// Number of vertices on the open arc between the 2-path's endpoints on
/// the far side from the path.
pub fn step_count(ps: &PointSet, e1: (usize, usize), e2: (usize, usize)) -> Result<usize> {
    let (u, v, w) = seed_ranks(ps, e1, e2)?;
    Ok(arc_count_excluding(ps.n(), u, w, v))
}

fn build_strip_ranks(ps: &PointSet, u: usize, v: usize, w: usize) -> Strip {
    let n = ps.n();
    let order = ps.convex_order.as_ref().expect("checked by caller");
    let step = arc_count_excluding(n, u, w, v);

    let mut path: VecDeque<usize> = VecDeque::from([u, v, w]);
    // Extend at an end: the new edge is parallel to the second edge from
    // that end, and the new vertex must fall strictly inside the open arc
    // between the endpoint and its path neighbor, on the side away from
    // the rest of the path.
    let try_extend = |path: &VecDeque<usize>, at_tail: bool| -> Option<usize> {
        let k = path.len();
        let (endpoint, neighbor, back2) = if at_tail {
            (path[k - 1], path[k - 2], path[k - 3])
        } else {
            (path[0], path[1], path[2])
        };
        let z = (neighbor + back2 + n - endpoint) % n;
        if path.contains(&z) {
            return None;
        }
        // Free side of the chord {neighbor, endpoint}: away from back2.
        let d_arc = (endpoint + n - neighbor) % n;
        let d_b2 = (back2 + n - neighbor) % n;
        let d_z = (z + n - neighbor) % n;
        let z_on_free_side = if d_b2 < d_arc {
            // back2 on the cw arc neighbor -> endpoint; free arc is the other.
            !(d_z < d_arc)
        } else {
            d_z < d_arc
        };
        if !z_on_free_side {
            return None;
        }
        // The free arc must contain no other path vertex.
        debug_assert!(path.iter().all(|&p| {
            p == endpoint || p == neighbor || {
                let d = (p + n - neighbor) % n;
                (d < d_arc) == (d_b2 < d_arc)
            }
        }));
        Some(z)
    };
    loop {
        let mut grew = false;
        if let Some(z) = try_extend(&path, true) {
            path.push_back(z);
            grew = true;
        }
        if let Some(z) = try_extend(&path, false) {
            path.push_front(z);
            grew = true;
        }
        if !grew {
            break;
        }
    }

    let path: Vec<usize> = path.into_iter().collect();
    let triangles: Vec<TriangleId> = path
        .windows(3)
        .map(|t| TriangleId::new(order[t[0]], order[t[1]], order[t[2]]))
        .collect();
    let path_idx: Vec<usize> = path.iter().map(|&r| order[r]).collect();
    Strip {
        seed: ((order[u], order[v]), (order[v], order[w])),
        path: path_idx,
        triangles,
        step,
    }
}

/// The maximal path seeded by `e1`, `e2` and its triangle list.
pub fn build_strip(ps: &PointSet, e1: (usize, usize), e2: (usize, usize)) -> Result<Strip> {
    let (u, v, w) = seed_ranks(ps, e1, e2)?;
    if !ps.is_convex() {
        return Err(Error::RequiresConvexOrder);
    }
    Ok(build_strip_ranks(ps, u, v, w))
}

/// Open-arc counts a1, a2 for a seed 2-path (used by the extendability
/// criterion max(a1, a2) > step).
pub fn seed_arc_counts(
    ps: &PointSet,
    e1: (usize, usize),
    e2: (usize, usize),
) -> Result<(usize, usize)> {
    let (u, v, w) = seed_ranks(ps, e1, e2)?;
    let n = ps.n();
    Ok((arc_count_excluding(n, u, v, w), arc_count_excluding(n, v, w, u)))
}

/// Every distinct nontrivial strip exactly once, ordered by triangle list.
pub fn enumerate_nontrivial_strips(ps: &PointSet) -> Result<Vec<Strip>> {
    if !ps.is_convex() {
        return Err(Error::RequiresConvexOrder);
    }
    let n = ps.n();
    let mut seen: BTreeMap<(Vec<TriangleId>, Vec<usize>), Strip> = BTreeMap::new();
    for v in 0..n {
        for u in 0..n {
            if u == v {
                continue;
            }
            for w in u + 1..n {
                if w == v {
                    continue;
                }
                let mut strip = build_strip_ranks(ps, u, v, w);
                if strip.is_nontrivial() {
                    let key = strip.key();
                    if strip.path != key {
                        strip.path.reverse();
                        strip.triangles.reverse();
                    }
                    let mut tris = strip.triangles.clone();
                    tris.sort_unstable();
                    seen.entry((tris, key)).or_insert(strip);
                }
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// Number of nontrivial strips containing `t` (0, 1, or 2 by the
/// membership claim).
pub fn strip_membership(strips: &[Strip], t: &TriangleId) -> usize {
    strips.iter().filter(|s| s.triangles.contains(t)).count()
}

pub fn membership_counts(strips: &[Strip]) -> HashMap<TriangleId, usize> {
    let mut m = HashMap::new();
    for s in strips {
        for t in &s.triangles {
            *m.entry(*t).or_insert(0usize) += 1;
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripRow {
    pub strip: usize,
    pub f_count: usize,
    pub c_count: usize,
}

/// Machine-checkable double-counting certificate: per-strip counts, the
/// membership partition of the trivial family, the counting identity, and
/// the concluded bound |F| <= |C|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcCertificate {
    pub n: usize,
    pub family_size: usize,
    pub trivial_size: usize,
    pub strip_rows: Vec<StripRow>,
    /// |C_0|, |C_1|, |C_2|: trivial-family members in i nontrivial strips.
    pub c_sizes: [usize; 3],
    /// |F ∩ C_0|, |F ∩ C_1|, members of F in two strips (= F \ (C_0 ∪ C_1)).
    pub f_sizes: [usize; 3],
    pub sum_strip_family: usize,
    pub sum_strip_trivial: usize,
}

impl DcCertificate {
    pub fn concludes(&self) -> (usize, usize) {
        (self.family_size, self.trivial_size)
    }

    /// Re-derives every count from the inputs; the certificate must
    /// reproduce itself exactly.
    pub fn verify(
        &self,
        ps: &PointSet,
        anchor: &AnchorPoint,
        family: &Family,
    ) -> Result<bool> {
        let fresh = double_count_certificate(ps, anchor, family)?;
        Ok(fresh == *self)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n: {}\n", self.n));
        out.push_str(&format!("family-size: {}\n", self.family_size));
        out.push_str(&format!("trivial-size: {}\n", self.trivial_size));
        out.push_str(&format!("nontrivial-strips: {}\n", self.strip_rows.len()));
        for row in &self.strip_rows {
            out.push_str(&format!("strip {}: f={} c={}\n", row.strip, row.f_count, row.c_count));
        }
        out.push_str(&format!(
            "c-partition: c0={} c1={} c2={}\n",
            self.c_sizes[0], self.c_sizes[1], self.c_sizes[2]
        ));
        out.push_str(&format!(
            "f-partition: f0={} f1={} f2={}\n",
            self.f_sizes[0], self.f_sizes[1], self.f_sizes[2]
        ));
        out.push_str(&format!("sum-strip-family: {}\n", self.sum_strip_family));
        out.push_str(&format!("sum-strip-trivial: {}\n", self.sum_strip_trivial));
        out.push_str(&format!("conclusion: {} <= {}\n", self.family_size, self.trivial_size));
        out
    }
}

/// Builds and self-checks the double-counting certificate for an
/// intersecting family on a near-regular host with a near-center anchor.
pub fn double_count_certificate(
    ps: &PointSet,
    anchor: &AnchorPoint,
    family: &Family,
) -> Result<DcCertificate> {
    if ps.kind != Kind::NearRegular {
        return Err(Error::RequiresNearRegular);
    }
    if family.mode != crate::family::Mode::Open {
        return Err(Error::InvalidArg(
            "the double-count certificate applies to open-interior intersection".into(),
        ));
    }
    if let Some((a, b)) = is_intersecting_family(ps, family)? {
        return Err(Error::NotIntersecting(a, b));
    }
    let trivial = trivial_family(ps, anchor)?;
    let strips = enumerate_nontrivial_strips(ps)?;
    let counts = membership_counts(&strips);

    let mut strip_rows = Vec::with_capacity(strips.len());
    let mut sum_sf = 0usize;
    let mut sum_sc = 0usize;
    for (i, s) in strips.iter().enumerate() {
        let f_count = s.triangles.iter().filter(|t| family.members.contains(t)).count();
        if f_count >= 2 {
            return Err(Error::StripOverlap { strip: i, count: f_count });
        }
        let c_count = s.triangles.iter().filter(|t| trivial.members.contains(t)).count();
        if c_count != 1 {
            return Err(Error::ProofViolation(format!(
                "strip {i} contains {c_count} anchor triangles, expected exactly 1"
            )));
        }
        sum_sf += f_count;
        sum_sc += c_count;
        strip_rows.push(StripRow { strip: i, f_count, c_count });
    }

    let membership = |t: &TriangleId| counts.get(t).copied().unwrap_or(0);
    let mut c_sizes = [0usize; 3];
    for t in &trivial.members {
        let m = membership(t);
        if m > 2 {
            return Err(Error::ProofViolation(format!("triangle {t} lies in {m} strips")));
        }
        c_sizes[m] += 1;
    }
    let mut f_sizes = [0usize; 3];
    for t in &family.members {
        let m = membership(t);
        if m > 2 {
            return Err(Error::ProofViolation(format!("triangle {t} lies in {m} strips")));
        }
        if m < 2 && !trivial.members.contains(t) {
            return Err(Error::ProofViolation(format!(
                "non-anchor triangle {t} lies in {m} strips, expected exactly 2"
            )));
        }
        f_sizes[m] += 1;
    }
    // Counting identity: sum over strips of |S ∩ F| counts every member
    // once per strip containing it.
    if sum_sf != 2 * f_sizes[2] + f_sizes[1] {
        return Err(Error::ProofViolation("strip-family double count mismatch".into()));
    }
    if sum_sc != 2 * c_sizes[2] + c_sizes[1] {
        return Err(Error::ProofViolation("strip-trivial double count mismatch".into()));
    }
    // 2|F| = sum + |F∩C1| + 2|F∩C0| <= sum_c + |C1| + 2|C0| = 2|C|.
    debug_assert_eq!(2 * family.len(), sum_sf + f_sizes[1] + 2 * f_sizes[0]);
    if family.len() > trivial.len() {
        return Err(Error::ProofViolation(format!(
            "double count concluded {} > {}",
            family.len(),
            trivial.len()
        )));
    }
    Ok(DcCertificate {
        n: ps.n(),
        family_size: family.len(),
        trivial_size: trivial.len(),
        strip_rows,
        c_sizes,
        f_sizes,
        sum_strip_family: sum_sf,
        sum_strip_trivial: sum_sc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{f_count_usize, Mode};
    use crate::pointset::{choose_anchor, gen_near_regular};

    #[test]
    fn figure_one_strip() {
        // n = 21, seed edges {1,4} and {4,18}: step 3, path on 6 vertices,
        // 4 triangles.
        let ps = gen_near_regular(21);
        assert_eq!(step_count(&ps, (1, 4), (4, 18)).unwrap(), 3);
        let strip = build_strip(&ps, (1, 4), (4, 18)).unwrap();
        assert_eq!(strip.path.len(), 6);
        assert_eq!(strip.triangles.len(), 4);
        assert_eq!(strip.path, vec![1, 4, 18, 8, 14, 12]);
    }

    #[test]
    fn step_examples() {
        let ps = gen_near_regular(5);
        assert_eq!(step_count(&ps, (0, 1), (1, 2)).unwrap(), 2);
        let ps4 = gen_near_regular(4);
        assert_eq!(step_count(&ps4, (0, 1), (1, 2)).unwrap(), 1);
        assert!(step_count(&ps4, (0, 1), (2, 3)).is_err());
    }

    #[test]
    fn extendability_iff_criterion() {
        // build_strip gives >= 2 triangles iff max(a1, a2) > step.
        for n in 4..=10usize {
            let ps = gen_near_regular(n);
            for v in 0..n {
                for u in 0..n {
                    for w in 0..n {
                        if u >= w || u == v || w == v {
                            continue;
                        }
                        let e1 = (u.min(v), u.max(v));
                        let e2 = (v.min(w), v.max(w));
                        let (a1, a2) = seed_arc_counts(&ps, e1, e2).unwrap();
                        let step = step_count(&ps, e1, e2).unwrap();
                        let strip = build_strip(&ps, e1, e2).unwrap();
                        assert_eq!(
                            strip.is_nontrivial(),
                            a1.max(a2) > step,
                            "n={n} seed=({u},{v},{w}) a1={a1} a2={a2} step={step}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn strip_triangles_interior_disjoint() {
        use crate::geom::{triangles_interiors_intersect, IntersectMode};
        for n in [5usize, 7, 8] {
            let ps = gen_near_regular(n);
            for s in enumerate_nontrivial_strips(&ps).unwrap() {
                for i in 0..s.triangles.len() {
                    for j in i + 1..s.triangles.len() {
                        let a = s.triangles[i].points(&ps);
                        let b = s.triangles[j].points(&ps);
                        assert!(
                            !triangles_interiors_intersect(&a, &b, IntersectMode::Open).unwrap(),
                            "n={n} strip triangles overlap"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn strip_union_is_triangulation() {
        // Consecutive strip triangles share an edge; non-consecutive pairs
        // share at most a vertex.
        for n in [6usize, 7, 9] {
            let ps = gen_near_regular(n);
            for s in enumerate_nontrivial_strips(&ps).unwrap() {
                for i in 0..s.triangles.len() {
                    for j in i + 1..s.triangles.len() {
                        let a: std::collections::BTreeSet<usize> =
                            s.triangles[i].vertices().into_iter().collect();
                        let b: std::collections::BTreeSet<usize> =
                            s.triangles[j].vertices().into_iter().collect();
                        let shared = a.intersection(&b).count();
                        if j == i + 1 {
                            assert_eq!(shared, 2);
                        } else {
                            assert!(shared <= 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dc_certificate_trivial_family_tight() {
        let ps = gen_near_regular(7);
        let anchor = choose_anchor(&ps);
        let fam = trivial_family(&ps, &anchor).unwrap();
        let cert = double_count_certificate(&ps, &anchor, &fam).unwrap();
        assert_eq!(cert.concludes(), (14, 14));
        assert_eq!(cert.family_size, f_count_usize(7).unwrap());
        assert!(cert.verify(&ps, &anchor, &fam).unwrap());
    }

    #[test]
    fn dc_certificate_single_triangle() {
        let ps = gen_near_regular(6);
        let anchor = choose_anchor(&ps);
        let fam = Family::from_members([TriangleId(0, 2, 4)], Mode::Open);
        let cert = double_count_certificate(&ps, &anchor, &fam).unwrap();
        assert_eq!(cert.family_size, 1);
        assert!(cert.trivial_size <= f_count_usize(6).unwrap());
        assert!(cert.render().contains("conclusion: 1 <= 8"));
    }

    #[test]
    fn dc_rejects_non_intersecting() {
        let ps = gen_near_regular(6);
        let anchor = choose_anchor(&ps);
        let fam = Family::from_members([TriangleId(0, 1, 2), TriangleId(3, 4, 5)], Mode::Open);
        assert!(matches!(
            double_count_certificate(&ps, &anchor, &fam),
            Err(Error::NotIntersecting(..))
        ));
    }
}
