//! Certified inductive upper bound for intersecting families on convex
//! hosts: Helly arcs, mutual pairs, the pair-degree bound, and recursive
//! peeling that concludes |F| <= F(n) with a machine-checkable transcript.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::family::{f_count_usize, is_intersecting_family, Family, Mode, TriangleId};
use crate::pointset::PointSet;

/// The arc A_{p1 p2}: host points met going clockwise from `p1` to `p2`,
/// both inclusive. Membership is pure rank arithmetic; callers intersect
/// it with whatever live subset they are working on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub p1: usize,
    pub p2: usize,
}

impl Arc {
    pub fn contains(&self, ranks: &[usize], n: usize, v: usize) -> bool {
        let d_end = (ranks[self.p2] + n - ranks[self.p1]) % n;
        let d_v = (ranks[v] + n - ranks[self.p1]) % n;
        d_v <= d_end
    }

    pub fn live_len(&self, ranks: &[usize], n: usize, live: &BTreeSet<usize>) -> usize {
        live.iter().filter(|&&v| self.contains(ranks, n, v)).count()
    }
}

/// Distance clockwise from `p` to `v` in rank space.
fn cw_dist(ranks: &[usize], n: usize, p: usize, v: usize) -> usize {
    (ranks[v] + n - ranks[p]) % n
}

/// The member triangle `t` (which contains `p`) as (p, x, y) in clockwise
/// order.
fn clockwise_from(ranks: &[usize], n: usize, t: &TriangleId, p: usize) -> (usize, usize) {
    let others: Vec<usize> = t.vertices().into_iter().filter(|&v| v != p).collect();
    let (u, v) = (others[0], others[1]);
    if cw_dist(ranks, n, p, u) < cw_dist(ranks, n, p, v) {
        (u, v)
    } else {
        (v, u)
    }
}

/// The common intersection C(p) of the far arcs A_xy over all members pxy,
/// restricted to the live points. Guaranteed to hold at least two live
/// points for an intersecting family; fewer is a hard error.
pub fn helly_arc(
    ps: &PointSet,
    live: &BTreeSet<usize>,
    family: &Family,
    p: usize,
) -> Result<Arc> {
    let ranks = ps.ranks()?;
    let n = ps.n();
    // Linearize the live points clockwise starting just after p.
    let mut line: Vec<usize> = live.iter().copied().filter(|&v| v != p).collect();
    line.sort_by_key(|&v| cw_dist(&ranks, n, p, v));
    let pos = |v: usize| line.iter().position(|&u| u == v).expect("live vertex");

    let mut lo = 0usize;
    let mut hi = line.len().checked_sub(1).ok_or_else(|| {
        Error::InvalidArg("helly arc needs at least two points besides p".into())
    })?;
    let mut seen = false;
    for t in &family.members {
        if !t.contains_vertex(p) {
            continue;
        }
        seen = true;
        let (x, y) = clockwise_from(&ranks, n, t, p);
        lo = lo.max(pos(x));
        hi = hi.min(pos(y));
    }
    if !seen {
        return Err(Error::InvalidArg(format!("link of point {p} is empty; drop it")));
    }
    if lo > hi || hi - lo + 1 < 2 {
        return Err(Error::ProofViolation(format!(
            "common arc at point {p} has fewer than two points; family is not intersecting"
        )));
    }
    Ok(Arc { p1: line[lo], p2: line[hi] })
}

/// A pair with p in C(q) and q in C(p), found by maximizing the live size
/// of A_pq over member arcs; the mutual-membership property is verified
/// via `helly_arc` before returning.
pub fn find_mutual_pair(
    ps: &PointSet,
    live: &BTreeSet<usize>,
    family: &Family,
) -> Result<(usize, usize)> {
    let ranks = ps.ranks()?;
    let n = ps.n();
    let mut best: Option<(usize, (usize, usize))> = None;
    for t in &family.members {
        let [i, j, k] = t.vertices();
        debug_assert!(live.contains(&i) && live.contains(&j) && live.contains(&k));
        let (x, y) = clockwise_from(&ranks, n, t, i);
        for (p, q) in [(i, x), (x, y), (y, i)] {
            let len = Arc { p1: p, p2: q }.live_len(&ranks, n, live);
            let better = match &best {
                Some((blen, bpair)) => len > *blen || (len == *blen && (p, q) < *bpair),
                None => true,
            };
            if better {
                best = Some((len, (p, q)));
            }
        }
    }
    let (_, (p, q)) =
        best.ok_or_else(|| Error::InvalidArg("cannot pick a pair from an empty family".into()))?;
    let cp = helly_arc(ps, live, family, p)?;
    let cq = helly_arc(ps, live, family, q)?;
    if !cp.contains(&ranks, n, q) || !cq.contains(&ranks, n, p) {
        return Err(Error::ProofViolation(format!(
            "pair ({p},{q}) failed the mutual-arc check"
        )));
    }
    Ok((p, q))
}

/// Tie-break note: `best` keeps the pair with larger live arc, and among
/// equals the lexicographically smallest ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairBound {
    pub count: usize,
    pub bound: usize,
    pub f1: usize,
    pub f2: usize,
    pub f3: usize,
    pub a: usize,
    pub b: usize,
}

/// Counts |F(p) ∪ F(q)| against the pair-degree bound
/// ceil((m−1)/2)·floor((m−1)/2) on a live set of m points, verifying the
/// partition into F1 (both p and q), F2 (at p, others separated by the
/// line pq) and F3 (same at q) together with |F1| <= b and
/// |F2|+|F3| <= a·b.
pub fn pair_degree_bound(
    ps: &PointSet,
    live: &BTreeSet<usize>,
    family: &Family,
    p: usize,
    q: usize,
) -> Result<PairBound> {
    let ranks = ps.ranks()?;
    let n = ps.n();
    let m = live.len();
    // Sides of the line through p and q are the two open rank arcs.
    let side = |v: usize| -> u8 {
        let d_q = cw_dist(&ranks, n, p, q);
        let d_v = cw_dist(&ranks, n, p, v);
        if d_v < d_q {
            0
        } else {
            1
        }
    };
    let a_side = live.iter().filter(|&&v| v != p && v != q && side(v) == 0).count();
    let b_side = m - 2 - a_side;
    let (a, b) = (a_side.min(b_side), a_side.max(b_side));

    let (mut f1, mut f2, mut f3) = (0usize, 0usize, 0usize);
    let mut count = 0usize;
    for t in &family.members {
        let has_p = t.contains_vertex(p);
        let has_q = t.contains_vertex(q);
        if !has_p && !has_q {
            continue;
        }
        count += 1;
        if has_p && has_q {
            f1 += 1;
            continue;
        }
        let pivot = if has_p { p } else { q };
        let others: Vec<usize> = t.vertices().into_iter().filter(|&v| v != pivot).collect();
        if side(others[0]) == side(others[1]) {
            return Err(Error::ProofViolation(format!(
                "triangle {t} at the mutual pair ({p},{q}) has both free vertices on one side"
            )));
        }
        if has_p {
            f2 += 1;
        } else {
            f3 += 1;
        }
    }
    let bound = (m - 1).div_ceil(2) * ((m - 1) / 2);
    if f1 > b || f2 + f3 > a * b || count > bound {
        return Err(Error::ProofViolation(format!(
            "pair-degree bound failed at ({p},{q}): |F1|={f1} |F2|={f2} |F3|={f3} a={a} b={b} bound={bound}"
        )));
    }
    Ok(PairBound { count, bound, f1, f2, f3, a, b })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeelEvent {
    Pair { p: usize, q: usize, count: usize, bound: usize },
    Drop { p: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelCertificate {
    pub n: usize,
    pub family_size: usize,
    pub events: Vec<PeelEvent>,
    pub base_points: usize,
    pub base_size: usize,
    pub f_n: usize,
}

impl PeelCertificate {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            match e {
                PeelEvent::Pair { p, q, count, bound } => {
                    out.push_str(&format!("peel pair p={p} q={q} count={count} bound={bound}\n"))
                }
                PeelEvent::Drop { p } => out.push_str(&format!("peel drop p={p}\n")),
            }
        }
        let base_bound = f_count_usize(self.base_points).expect("small base");
        out.push_str(&format!("base n={} bound={}\n", self.base_points, base_bound));
        out.push_str(&format!(
            "conclusion |F|={} <= F({})={}\n",
            self.family_size, self.n, self.f_n
        ));
        out
    }

    /// Arithmetic re-check: the counts account for every member, each
    /// count respects its bound, the bounds telescope to at most F(n)
    /// (exactly F(n) when no drops occurred), and the conclusion holds.
    pub fn verify(&self) -> Result<()> {
        let mut sum_counts = 0usize;
        let mut sum_bounds = 0usize;
        let mut drops = 0usize;
        let mut m = self.n;
        for e in &self.events {
            match e {
                PeelEvent::Pair { count, bound, .. } => {
                    if count > bound {
                        return Err(Error::ProofViolation("peel count exceeds bound".into()));
                    }
                    let expect = (m - 1).div_ceil(2) * ((m - 1) / 2);
                    if *bound != expect {
                        return Err(Error::ProofViolation("peel bound mismatch".into()));
                    }
                    sum_counts += count;
                    sum_bounds += bound;
                    m -= 2;
                }
                PeelEvent::Drop { .. } => {
                    drops += 1;
                    m -= 1;
                }
            }
        }
        if m != self.base_points || !(3..=4).contains(&self.base_points) {
            return Err(Error::ProofViolation("peel base-point count mismatch".into()));
        }
        let base_bound = f_count_usize(self.base_points)?;
        if self.base_size > base_bound {
            return Err(Error::ProofViolation("base family exceeds its bound".into()));
        }
        if sum_counts + self.base_size != self.family_size {
            return Err(Error::ProofViolation("peel counts do not sum to |F|".into()));
        }
        let total = sum_bounds + base_bound;
        if total > self.f_n || (drops == 0 && total != self.f_n) {
            return Err(Error::ProofViolation("peel bounds do not telescope to F(n)".into()));
        }
        if self.family_size > self.f_n {
            return Err(Error::ProofViolation("conclusion |F| <= F(n) failed".into()));
        }
        Ok(())
    }
}

/// Runs the peel loop: drop empty-link points, otherwise peel a verified
/// mutual pair; stops at 3 or 4 points and checks the base directly.
pub fn certified_upper_bound(ps: &PointSet, family: &Family) -> Result<PeelCertificate> {
    if !ps.is_convex() {
        return Err(Error::RequiresConvexOrder);
    }
    if family.mode != Mode::Open {
        return Err(Error::InvalidArg(
            "the inductive bound applies to open-interior intersection".into(),
        ));
    }
    let n = ps.n();
    if let Some((x, y)) = is_intersecting_family(ps, family)? {
        return Err(Error::NotIntersecting(x, y));
    }

    let mut live: BTreeSet<usize> = (0..n).collect();
    let mut current = family.members.clone();
    let mut events: Vec<PeelEvent> = Vec::new();
    while live.len() > 4 {
        let empty = live
            .iter()
            .copied()
            .find(|&p| !current.iter().any(|t| t.contains_vertex(p)));
        if let Some(p) = empty {
            live.remove(&p);
            events.push(PeelEvent::Drop { p });
            continue;
        }
        let fam = Family { members: current.clone(), mode: family.mode };
        let (p, q) = find_mutual_pair(ps, &live, &fam)?;
        let pb = pair_degree_bound(ps, &live, &fam, p, q)?;
        events.push(PeelEvent::Pair { p, q, count: pb.count, bound: pb.bound });
        current.retain(|t| !t.contains_vertex(p) && !t.contains_vertex(q));
        live.remove(&p);
        live.remove(&q);
    }
    let base_points = live.len();
    let base_size = current.len();
    if base_size > f_count_usize(base_points)? {
        return Err(Error::ProofViolation(format!(
            "{base_size} pairwise-intersecting triangles on {base_points} convex points"
        )));
    }
    let cert = PeelCertificate {
        n,
        family_size: family.len(),
        events,
        base_points,
        base_size,
        f_n: f_count_usize(n)?,
    };
    cert.verify()?;
    Ok(cert)
}
