//! A common interface over the upper-bound certification strategies:
//! double counting over strips, the replacement procedure, inductive
//! peeling, and exact search. Strategies are registered by name and
//! selected at the CLI, so new mechanisms slot in without touching the
//! front end.

use crate::clique::{build_graph, max_clique};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::inductive::certified_upper_bound;
use crate::pointset::{AnchorPoint, PointSet};
use crate::replacement::run_replacement;
use crate::strips::double_count_certificate;

/// What a strategy certifies: |F| = `family_size` is at most `bound`,
/// with a human-readable transcript of the evidence.
#[derive(Debug, Clone)]
pub struct BoundOutcome {
    pub family_size: usize,
    pub bound: usize,
    pub transcript: String,
}

pub trait BoundMethod {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn certify(
        &self,
        ps: &PointSet,
        anchor: &AnchorPoint,
        family: &Family,
    ) -> Result<BoundOutcome>;
}

struct DoubleCount;

impl BoundMethod for DoubleCount {
    fn name(&self) -> &'static str {
        "double-count"
    }
    fn description(&self) -> &'static str {
        "strip double counting on near-regular hosts: |F| <= |trivial family|"
    }
    fn certify(
        &self,
        ps: &PointSet,
        anchor: &AnchorPoint,
        family: &Family,
    ) -> Result<BoundOutcome> {
        let cert = double_count_certificate(ps, anchor, family)?;
        let (size, bound) = cert.concludes();
        Ok(BoundOutcome { family_size: size, bound, transcript: cert.render() })
    }
}

struct Replace;

impl BoundMethod for Replace {
    fn name(&self) -> &'static str {
        "replace"
    }
    fn description(&self) -> &'static str {
        "monotone replacement into the trivial family on near-regular hosts"
    }
    fn certify(
        &self,
        ps: &PointSet,
        anchor: &AnchorPoint,
        family: &Family,
    ) -> Result<BoundOutcome> {
        let trace = run_replacement(ps, family, anchor)?;
        let trivial = crate::family::trivial_family(ps, anchor)?;
        let mut transcript = trace.render();
        transcript.push_str(&format!("trivial-size: {}\n", trivial.len()));
        Ok(BoundOutcome {
            family_size: family.len(),
            bound: trivial.len(),
            transcript,
        })
    }
}

struct Peel;

impl BoundMethod for Peel {
    fn name(&self) -> &'static str {
        "peel"
    }
    fn description(&self) -> &'static str {
        "inductive pair peeling on arbitrary convex hosts: |F| <= F(n)"
    }
    fn certify(
        &self,
        ps: &PointSet,
        _anchor: &AnchorPoint,
        family: &Family,
    ) -> Result<BoundOutcome> {
        let cert = certified_upper_bound(ps, family)?;
        Ok(BoundOutcome {
            family_size: cert.family_size,
            bound: cert.f_n,
            transcript: cert.render(),
        })
    }
}

struct ExactSearch;

impl BoundMethod for ExactSearch {
    fn name(&self) -> &'static str {
        "exact"
    }
    fn description(&self) -> &'static str {
        "exact maximum intersecting family by branch and bound (any host)"
    }
    fn certify(
        &self,
        ps: &PointSet,
        _anchor: &AnchorPoint,
        family: &Family,
    ) -> Result<BoundOutcome> {
        if let Some((a, b)) = crate::family::is_intersecting_family(ps, family)? {
            return Err(Error::NotIntersecting(a, b));
        }
        let g = build_graph(ps, family.mode)?;
        let res = max_clique(ps, &g, 200_000_000)?;
        if !res.optimal {
            return Err(Error::InvalidArg(
                "search budget exhausted before optimality; no upper bound certified".into(),
            ));
        }
        let mut transcript = res.summary();
        transcript.push('\n');
        Ok(BoundOutcome { family_size: family.len(), bound: res.best.len(), transcript })
    }
}

/// All registered strategies, in presentation order.
pub fn registry() -> Vec<Box<dyn BoundMethod>> {
    vec![
        Box::new(DoubleCount),
        Box::new(Replace),
        Box::new(Peel),
        Box::new(ExactSearch),
    ]
}

pub fn lookup(name: &str) -> Result<Box<dyn BoundMethod>> {
    registry()
        .into_iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| {
            let names: Vec<&str> = registry().iter().map(|m| m.name()).collect();
            Error::InvalidArg(format!(
                "unknown bound method '{name}'; available: {}",
                names.join(", ")
            ))
        })
}
