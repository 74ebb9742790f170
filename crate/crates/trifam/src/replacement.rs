//! The replacement procedure: repeatedly take the family member farthest
//! from the anchor, find its side closest to the anchor, and swap every
//! member on that side for all triangles on the same side lying toward
//! the anchor. Each step is validated to be size-monotone and to keep the
//! family intersecting; the run terminates inside the trivial family.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::{is_intersecting_family, trivial_family, Family, TriangleId};
use crate::geom::{
    orient, point_in_triangle_interior, sqdist_point_segment, sqdist_point_triangle, Rat,
};
use crate::pointset::{AnchorPoint, Kind, PointSet};

#[derive(Debug, Clone)]
pub struct ReplacementStep {
    pub triangle: TriangleId,
    pub side: (usize, usize),
    pub removed: Vec<TriangleId>,
    pub inserted: Vec<TriangleId>,
    pub size_before: usize,
    pub size_after: usize,
}

#[derive(Debug, Clone)]
pub struct ReplacementTrace {
    pub initial: Family,
    pub steps: Vec<ReplacementStep>,
    pub final_family: Family,
}

impl ReplacementTrace {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("initial-size: {}\n", self.initial.len()));
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: T=({},{},{}) side=({},{}) removed={} inserted={} size={}\n",
                k,
                s.triangle.0,
                s.triangle.1,
                s.triangle.2,
                s.side.0,
                s.side.1,
                s.removed.len(),
                s.inserted.len(),
                s.size_after,
            ));
        }
        out.push_str(&format!("final-size: {}\n", self.final_family.len()));
        out
    }
}

/// The member at maximal squared distance from `x`, ties to the
/// lexicographically smallest id. Errors if every member contains `x`.
pub fn farthest_triangle(ps: &PointSet, family: &Family, x: &AnchorPoint) -> Result<TriangleId> {
    let mut best: Option<(Rat, TriangleId)> = None;
    for t in &family.members {
        let d = sqdist_point_triangle(&x.point, &t.points(ps))?;
        match &best {
            Some((bd, _)) if *bd >= d => {}
            _ => best = Some((d, *t)),
        }
    }
    match best {
        Some((d, t)) if !d.is_zero() => Ok(t),
        Some(_) => Err(Error::AlreadyTrivial),
        None => Err(Error::InvalidArg("empty family".into())),
    }
}

/// The side of `t` at minimal squared distance from `x`, ties to the
/// lexicographically smallest pair. Errors if `t` contains `x`.
pub fn closest_side(ps: &PointSet, t: &TriangleId, x: &AnchorPoint) -> Result<(usize, usize)> {
    let [i, j, k] = t.vertices();
    if point_in_triangle_interior(&x.point, ps.point(i), ps.point(j), ps.point(k))? {
        return Err(Error::InvalidArg(format!("triangle {t} contains the anchor")));
    }
    let mut best: Option<(Rat, (usize, usize))> = None;
    for side in [(i, j), (i, k), (j, k)] {
        let d = sqdist_point_segment(&x.point, ps.point(side.0), ps.point(side.1))?;
        match &best {
            Some((bd, _)) if *bd <= d => {}
            _ => best = Some((d, side)),
        }
    }
    Ok(best.expect("three sides").1)
}

fn step_on_side(
    ps: &PointSet,
    family: &Family,
    x: &AnchorPoint,
    t: TriangleId,
    (a, b): (usize, usize),
) -> Result<ReplacementStep> {
    let n = ps.n();
    let anchor_sign = orient(ps.point(a), ps.point(b), &x.point).sign();
    if anchor_sign == 0 {
        return Err(Error::AnchorNotGeneral);
    }
    // The counting property the monotonicity argument relies on: the open
    // halfplane containing the anchor holds at least as many host points
    // as the other one.
    let mut near = 0usize;
    let mut far = 0usize;
    for c in 0..n {
        if c == a || c == b {
            continue;
        }
        if orient(ps.point(a), ps.point(b), ps.point(c)).sign() == anchor_sign {
            near += 1;
        } else {
            far += 1;
        }
    }
    if near < far {
        return Err(Error::ProofViolation(format!(
            "side ({a},{b}) has {near} points toward the anchor but {far} away"
        )));
    }

    let removed: Vec<TriangleId> = family
        .members
        .iter()
        .filter(|m| m.contains_vertex(a) && m.contains_vertex(b))
        .copied()
        .collect();
    let mut inserted: Vec<TriangleId> = Vec::new();
    for c in 0..n {
        if c == a || c == b {
            continue;
        }
        if orient(ps.point(a), ps.point(b), ps.point(c)).sign() == anchor_sign {
            inserted.push(TriangleId::new(a, b, c));
        }
    }
    // Inserted triangles lie on the anchor side of ab while T's interior
    // lies on the other side, so ab cannot be their closest side.
    for g in &inserted {
        if !point_in_triangle_interior(
            &x.point,
            ps.point(g.0),
            ps.point(g.1),
            ps.point(g.2),
        )? && closest_side(ps, g, x)? == (a.min(b), a.max(b))
        {
            return Err(Error::ProofViolation(format!(
                "inserted triangle {g} has the replaced side ({a},{b}) closest to the anchor"
            )));
        }
    }

    let mut members = family.members.clone();
    for r in &removed {
        members.remove(r);
    }
    for g in &inserted {
        members.insert(*g);
    }
    let next = Family { members, mode: family.mode };

    if next.len() < family.len() {
        return Err(Error::ProofViolation(format!(
            "replacement step shrank the family: {} -> {}",
            family.len(),
            next.len()
        )));
    }
    if let Some((p, q)) = is_intersecting_family(ps, &next)? {
        return Err(Error::ProofViolation(format!(
            "replacement step broke intersection: {p} and {q}"
        )));
    }
    Ok(ReplacementStep {
        triangle: t,
        side: (a.min(b), a.max(b)),
        removed,
        inserted,
        size_before: family.len(),
        size_after: next.len(),
    })
}

fn apply(family: &Family, step: &ReplacementStep) -> Family {
    let mut members = family.members.clone();
    for r in &step.removed {
        members.remove(r);
    }
    for g in &step.inserted {
        members.insert(*g);
    }
    Family { members, mode: family.mode }
}

/// One replacement step on the farthest member's closest side. Returns the
/// family unchanged when it already lies inside the trivial family.
pub fn replacement_step(ps: &PointSet, family: &Family, x: &AnchorPoint) -> Result<Family> {
    check_host(ps, family, x)?;
    let t = match farthest_triangle(ps, family, x) {
        Ok(t) => t,
        Err(Error::AlreadyTrivial) => return Ok(family.clone()),
        Err(e) => return Err(e),
    };
    let side = closest_side(ps, &t, x)?;
    let step = step_on_side(ps, family, x, t, side)?;
    Ok(apply(family, &step))
}

fn check_host(ps: &PointSet, family: &Family, x: &AnchorPoint) -> Result<()> {
    if ps.kind != Kind::NearRegular {
        return Err(Error::RequiresNearRegular);
    }
    let _ = x;
    if let Some((p, q)) = is_intersecting_family(ps, family)? {
        return Err(Error::NotIntersecting(p, q));
    }
    Ok(())
}

/// Runs replacement steps until the family lies inside the trivial family.
/// Validates size monotonicity, intersection preservation, the step budget
/// C(n, 2), and that no side is chosen twice.
pub fn run_replacement(
    ps: &PointSet,
    family: &Family,
    x: &AnchorPoint,
) -> Result<ReplacementTrace> {
    check_host(ps, family, x)?;
    let n = ps.n();
    let budget = n * (n - 1) / 2;
    let mut used_sides: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut steps: Vec<ReplacementStep> = Vec::new();
    let mut current = family.clone();
    loop {
        let t = match farthest_triangle(ps, &current, x) {
            Ok(t) => t,
            Err(Error::AlreadyTrivial) => break,
            Err(e) => return Err(e),
        };
        if steps.len() == budget {
            return Err(Error::ProofViolation(format!(
                "replacement exceeded the step budget C({n},2) = {budget}"
            )));
        }
        let side = closest_side(ps, &t, x)?;
        if !used_sides.insert(side) {
            return Err(Error::ProofViolation(format!(
                "side ({},{}) chosen twice during replacement",
                side.0, side.1
            )));
        }
        let step = step_on_side(ps, &current, x, t, side)?;
        current = apply(&current, &step);
        steps.push(step);
    }
    let trivial = trivial_family(ps, x)?;
    if !current.members.is_subset(&trivial.members) {
        return Err(Error::ProofViolation(
            "replacement terminated outside the trivial family".into(),
        ));
    }
    Ok(ReplacementTrace { initial: family.clone(), steps, final_family: current })
}
