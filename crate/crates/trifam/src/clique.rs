//! Exact maximum intersecting family search as a maximum clique problem:
//! bit-packed triangle intersection graph, branch-and-bound with greedy
//! coloring bounds, a Bron–Kerbosch reference oracle, DIMACS export, and
//! seeded random maximal families for test corpora.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::family::{triangle_pair_intersects, Family, Mode, TriangleId};
use crate::pointset::{choose_anchor, perturb_to_general, AnchorPoint, PointSet};

#[derive(Debug, Clone)]
pub struct IntersectionGraph {
    /// All C(n,3) triangles in lexicographic order.
    pub vertices: Vec<TriangleId>,
    pub mode: Mode,
    words: usize,
    adj: Vec<u64>,
}

impl IntersectionGraph {
    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.v()).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    pub fn vertex_index(&self, t: &TriangleId) -> Option<usize> {
        self.vertices.binary_search(t).ok()
    }
}

/// The intersection graph over all spanned triangles. On convex hosts the
/// open-mode adjacency comes from the combinatorial predicate; elsewhere
/// (and in closed mode) from the exact geometric one.
pub fn build_graph(ps: &PointSet, mode: Mode) -> Result<IntersectionGraph> {
    let n = ps.n();
    let mut vertices = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                vertices.push(TriangleId(i, j, k));
            }
        }
    }
    let v = vertices.len();
    let words = v.div_ceil(64).max(1);
    let mut adj = vec![0u64; v * words];
    let ranks = if mode == Mode::Open { ps.ranks().ok() } else { None };
    for a in 0..v {
        for b in a + 1..v {
            if triangle_pair_intersects(ps, ranks.as_deref(), mode, &vertices[a], &vertices[b])? {
                adj[a * words + b / 64] |= 1 << (b % 64);
                adj[b * words + a / 64] |= 1 << (a % 64);
            }
        }
    }
    Ok(IntersectionGraph { vertices, mode, words, adj })
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub best: Family,
    pub optimal: bool,
    pub nodes: u64,
    /// Largest greedy-coloring bound observed at each search depth.
    pub bound_trace: Vec<usize>,
    pub wall_time: Duration,
}

impl SolveResult {
    pub fn summary(&self) -> String {
        format!("max={} optimal={} nodes={}", self.best.len(), self.optimal, self.nodes)
    }
}

struct Searcher<'g> {
    g: &'g IntersectionGraph,
    /// Static color order: descending degree, ties lexicographic.
    order: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
    bound_trace: Vec<usize>,
}

impl Searcher<'_> {
    /// Greedy coloring of `p`; returns (vertex, color) pairs sorted by
    /// ascending color, so popping from the back visits high colors first.
    fn color_sort(&self, p: &[u64]) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for &v in &self.order {
            if p[v / 64] >> (v % 64) & 1 == 0 {
                continue;
            }
            let mut c = 0;
            while c < classes.len() {
                let row = self.g.row(v);
                if (0..self.g.words).all(|w| classes[c][w] & row[w] == 0) {
                    break;
                }
                c += 1;
            }
            if c == classes.len() {
                classes.push(vec![0u64; self.g.words]);
            }
            classes[c][v / 64] |= 1 << (v % 64);
            out.push((v, c + 1));
        }
        out.sort_by_key(|&(_, c)| c);
        out
    }

    fn expand(&mut self, r: &mut Vec<usize>, p: &[u64], depth: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let mut ordered = self.color_sort(p);
        if let Some(&(_, top)) = ordered.last() {
            if depth >= self.bound_trace.len() {
                self.bound_trace.resize(depth + 1, 0);
            }
            self.bound_trace[depth] = self.bound_trace[depth].max(top);
        }
        let mut p = p.to_vec();
        while let Some((v, c)) = ordered.pop() {
            if r.len() + c <= self.best.len() {
                return;
            }
            r.push(v);
            let row = self.g.row(v);
            let next: Vec<u64> = (0..self.g.words).map(|w| p[w] & row[w]).collect();
            if next.iter().all(|&w| w == 0) {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, &next, depth + 1);
                if self.aborted {
                    r.pop();
                    return;
                }
            }
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Exact maximum clique via branch and bound with greedy-coloring upper
/// bounds; `budget` caps the node count (exhaustion clears the optimality
/// flag). The initial lower bound is the best trivial family.
pub fn max_clique(ps: &PointSet, g: &IntersectionGraph, budget: u64) -> Result<SolveResult> {
    let start = Instant::now();
    let v = g.v();
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(g.degree(i)), g.vertices[i]));

    let seed_family = best_trivial(ps)?.1;
    let mut best: Vec<usize> = seed_family
        .members
        .iter()
        .filter_map(|t| g.vertex_index(t))
        .collect();
    if g.mode == Mode::Closed {
        // The trivial family intersects openly, hence also closedly.
        debug_assert!(best.iter().all(|&a| best.iter().all(|&b| a == b || g.adjacent(a, b))));
    }
    if v > 0 && best.is_empty() {
        best.push(0);
    }

    let mut s = Searcher {
        g,
        order,
        best,
        nodes: 0,
        budget,
        aborted: false,
        bound_trace: Vec::new(),
    };
    let mut full = vec![0u64; g.words];
    for i in 0..v {
        full[i / 64] |= 1 << (i % 64);
    }
    let mut r = Vec::new();
    if v > 0 {
        s.expand(&mut r, &full, 0);
    }
    let members = s.best.iter().map(|&i| g.vertices[i]);
    Ok(SolveResult {
        best: Family::from_members(members, g.mode),
        optimal: !s.aborted,
        nodes: s.nodes,
        bound_trace: s.bound_trace,
        wall_time: start.elapsed(),
    })
}

/// Reference maximum clique size by Bron–Kerbosch enumeration with
/// pivoting. Guarded to at most 300 vertices; test use only.
pub fn bron_kerbosch_oracle(g: &IntersectionGraph) -> Result<usize> {
    if g.v() > 300 {
        return Err(Error::OracleGuard(format!(
            "{} vertices exceed the 300-vertex oracle limit",
            g.v()
        )));
    }
    fn bk(g: &IntersectionGraph, r: usize, p: &mut Vec<u64>, x: &mut Vec<u64>, best: &mut usize) {
        let count = |s: &[u64]| s.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        if count(p) == 0 && count(x) == 0 {
            *best = (*best).max(r);
            return;
        }
        // Pivot: vertex of P ∪ X with most neighbors in P.
        let mut pivot = None;
        let mut pivot_deg = 0usize;
        for v in 0..g.v() {
            let in_p = p[v / 64] >> (v % 64) & 1 == 1;
            let in_x = x[v / 64] >> (v % 64) & 1 == 1;
            if !(in_p || in_x) {
                continue;
            }
            let row = g.row(v);
            let d = (0..g.words).map(|w| (row[w] & p[w]).count_ones() as usize).sum();
            if pivot.is_none() || d > pivot_deg {
                pivot = Some(v);
                pivot_deg = d;
            }
        }
        let pivot_row = pivot.map(|v| g.row(v).to_vec()).unwrap_or_default();
        let cands: Vec<usize> = (0..g.v())
            .filter(|&v| {
                p[v / 64] >> (v % 64) & 1 == 1 && pivot_row[v / 64] >> (v % 64) & 1 == 0
            })
            .collect();
        for v in cands {
            let row = g.row(v);
            let mut np: Vec<u64> = (0..g.words).map(|w| p[w] & row[w]).collect();
            let mut nx: Vec<u64> = (0..g.words).map(|w| x[w] & row[w]).collect();
            bk(g, r + 1, &mut np, &mut nx, best);
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }
    let mut p = vec![0u64; g.words];
    for i in 0..g.v() {
        p[i / 64] |= 1 << (i % 64);
    }
    let mut x = vec![0u64; g.words];
    let mut best = 0;
    bk(g, 0, &mut p, &mut x, &mut best);
    Ok(best)
}

/// The maximum-depth anchor among perturbed triple centroids, with its
/// trivial family: a structural lower bound for the maximum clique.
pub fn best_trivial(ps: &PointSet) -> Result<(AnchorPoint, Family)> {
    let n = ps.n();
    let mut best: Option<(AnchorPoint, Family)> = None;
    let mut consider = |anchor: AnchorPoint| -> Result<()> {
        let fam = crate::family::trivial_family(ps, &anchor)?;
        if best.as_ref().map_or(true, |(_, b)| fam.len() > b.len()) {
            best = Some((anchor, fam));
        }
        Ok(())
    };
    consider(choose_anchor(ps))?;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let c = crate::pointset::centroid(&[
                    ps.point(i).clone(),
                    ps.point(j).clone(),
                    ps.point(k).clone(),
                ]);
                consider(AnchorPoint { point: perturb_to_general(ps, &c) })?;
            }
        }
    }
    best.ok_or(Error::TooFewPoints { need: 3, got: n })
}

/// DIMACS graph format: `p edge <V> <E>` then `e <u> <v>`, 1-indexed,
/// vertex i+1 being the i-th lexicographic triangle.
pub fn dimacs_string(g: &IntersectionGraph) -> String {
    let mut out = format!("p edge {} {}\n", g.v(), g.edge_count());
    for i in 0..g.v() {
        for j in i + 1..g.v() {
            if g.adjacent(i, j) {
                out.push_str(&format!("e {} {}\n", i + 1, j + 1));
            }
        }
    }
    out
}

/// Seeded greedy random maximal clique: a maximal intersecting family for
/// randomized test corpora.
pub fn random_maximal_family(ps: &PointSet, mode: Mode, seed: u64) -> Result<Family> {
    let g = build_graph(ps, mode)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut members: Vec<usize> = Vec::new();
    let mut cands: Vec<usize> = (0..g.v()).collect();
    while !cands.is_empty() {
        let v = cands[rng.random_range(0..cands.len())];
        members.push(v);
        cands.retain(|&u| u != v && g.adjacent(u, v));
    }
    Ok(Family::from_members(members.iter().map(|&i| g.vertices[i]), mode))
}
