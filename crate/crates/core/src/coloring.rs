//! Edge colorings, monochromatic crossing counts, the crossing graph and the
//! heuristic search (MAX-k-CUT local search alternated with point perturbation).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{
    check_insertion, enumerate_crossings, num_pairs, pair_index, OrientationOracle, Point, PointSet, Segment,
};

/// A total map from the `C(n,2)` edges of `K_n` to colors `1..=k`, indexed by
/// the lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: usize,
    k: u32,
    colors: Vec<u32>,
}

impl EdgeColoring {
    pub fn new(n: usize, k: u32, colors: Vec<u32>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidColoring("k must be at least 1".into()));
        }
        if colors.len() != num_pairs(n) {
            return Err(Error::InvalidColoring(format!(
                "expected {} edge colors for n = {n}, got {}",
                num_pairs(n),
                colors.len()
            )));
        }
        if let Some((i, &c)) = colors.iter().enumerate().find(|(_, &c)| c == 0 || c > k) {
            let s = Segment::from_index(n, i);
            return Err(Error::InvalidColoring(format!(
                "edge ({}, {}) has color {c} outside 1..={k}",
                s.a(),
                s.b()
            )));
        }
        Ok(EdgeColoring { n, k, colors })
    }

    pub fn uniform(n: usize, k: u32, color: u32) -> Result<Self> {
        Self::new(n, k, vec![color; num_pairs(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, s: Segment) -> u32 {
        self.colors[s.index(self.n)]
    }

    /// Color of the edge `uv`, `u != v`.
    pub fn color_of(&self, u: usize, v: usize) -> u32 {
        debug_assert_ne!(u, v);
        self.colors[pair_index(self.n, u.min(v), u.max(v))]
    }

    pub fn set(&mut self, s: Segment, color: u32) -> Result<()> {
        if color == 0 || color > self.k {
            return Err(Error::InvalidColoring(format!("color {color} outside 1..={}", self.k)));
        }
        let idx = s.index(self.n);
        self.colors[idx] = color;
        Ok(())
    }

    /// Applies a relabelling `perm[c - 1]` to every edge.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        Self::new(self.n, self.k, self.colors.iter().map(|&c| perm[c as usize - 1]).collect())
    }

    pub(crate) fn check_matches(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::InvalidColoring(format!(
                "coloring is for {} points but the drawing has {n}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Number of crossing pairs of equal color in the drawing.
pub fn count_monochromatic(points: &PointSet, chi: &EdgeColoring) -> Result<u64> {
    count_monochromatic_with(points, chi)
}

pub fn count_monochromatic_with<O: OrientationOracle + ?Sized>(oracle: &O, chi: &EdgeColoring) -> Result<u64> {
    let n = oracle.len();
    chi.check_matches(n)?;
    let mut classes: Vec<Vec<Segment>> = vec![Vec::new(); chi.k as usize];
    for (i, &c) in chi.colors.iter().enumerate() {
        classes[c as usize - 1].push(Segment::from_index(n, i));
    }
    let mut count = 0u64;
    for class in &classes {
        for (i, &s) in class.iter().enumerate() {
            for &t in &class[i + 1..] {
                if !s.shares_endpoint(t) && oracle.crosses(s, t) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Vertices are the segments of the drawing (by pair index), adjacent iff they cross.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingGraph {
    points: usize,
    adjacency: Vec<Vec<usize>>,
    edges: usize,
}

impl CrossingGraph {
    pub fn from_edges(points: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let m = num_pairs(points);
        let mut adjacency = vec![Vec::new(); m];
        let mut count = 0;
        for (u, v) in edges {
            if u >= m || v >= m || u == v {
                return Err(Error::OutOfRange(format!("crossing-graph edge ({u}, {v}) with {m} vertices")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            count += 1;
        }
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            count -= before - list.len();
        }
        Ok(CrossingGraph { points, adjacency, edges: count })
    }

    /// A graph on an arbitrary vertex count, for exercising the cut heuristic
    /// outside of drawings. `points` is then the smallest `n` with `C(n,2) >= vertices`.
    pub fn abstract_graph(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut n = 2;
        while num_pairs(n) < vertices {
            n += 1;
        }
        let mut g = Self::from_edges(n, edges.iter().copied())?;
        g.adjacency.truncate(vertices.max(1).min(g.adjacency.len()));
        g.adjacency.resize(vertices, Vec::new());
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Adjacent vertex pairs with equal color; `colors` is indexed by vertex.
    pub fn monochromatic_edges(&self, colors: &[u32]) -> u64 {
        let mut count = 0;
        for (v, list) in self.adjacency.iter().enumerate() {
            count += list.iter().filter(|&&u| u > v && colors[u] == colors[v]).count() as u64;
        }
        count
    }
}

pub fn build_crossing_graph<O: OrientationOracle + ?Sized>(oracle: &O) -> CrossingGraph {
    let n = oracle.len();
    let edges = enumerate_crossings(oracle).into_iter().map(|(s, t)| (s.index(n), t.index(n)));
    CrossingGraph::from_edges(n, edges).expect("crossing pairs index valid segments")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub restarts: u32,
    pub max_stale_iterations: u32,
    pub perturbation_radius: i64,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { restarts: 8, max_stale_iterations: 3, perturbation_radius: 8, rng_seed: 0 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_stale_iterations == 0 {
            return Err(Error::OutOfRange("restarts and max_stale_iterations must be at least 1".into()));
        }
        if self.perturbation_radius < 1 {
            return Err(Error::OutOfRange("perturbation radius must be at least 1".into()));
        }
        Ok(())
    }

    fn with_seed(&self, seed: u64) -> Self {
        SearchConfig { rng_seed: seed, ..*self }
    }
}

/// Per-vertex counts of neighbors in each color, kept in sync with `colors`.
struct CutState<'g> {
    graph: &'g CrossingGraph,
    k: usize,
    colors: Vec<u32>,
    tally: Vec<u32>,
}

impl<'g> CutState<'g> {
    fn new(graph: &'g CrossingGraph, k: usize, colors: Vec<u32>) -> Self {
        let mut tally = vec![0u32; graph.vertex_count() * k];
        for (v, list) in graph.adjacency.iter().enumerate() {
            for &u in list {
                tally[v * k + colors[u] as usize] += 1;
            }
        }
        CutState { graph, k, colors, tally }
    }

    fn recolor(&mut self, v: usize, to: u32) {
        let from = self.colors[v];
        for &u in &self.graph.adjacency[v] {
            self.tally[u * self.k + from as usize] -= 1;
            self.tally[u * self.k + to as usize] += 1;
        }
        self.colors[v] = to;
    }

    /// First-improvement single-vertex moves until none improves.
    fn descend(&mut self) {
        loop {
            let mut improved = false;
            for v in 0..self.colors.len() {
                let row = &self.tally[v * self.k..(v + 1) * self.k];
                let current = row[self.colors[v] as usize];
                let (best, &best_conflicts) = row.iter().enumerate().min_by_key(|&(c, &t)| (t, c)).unwrap();
                if best_conflicts < current {
                    self.recolor(v, best as u32);
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    }
}

fn greedy_colors(graph: &CrossingGraph, k: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let m = graph.vertex_count();
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut colors = vec![UNSET; m];
    let mut counts = vec![0u32; k];
    for v in order {
        counts.iter_mut().for_each(|c| *c = 0);
        for &u in graph.neighbors(v) {
            if colors[u] != UNSET {
                counts[colors[u] as usize] += 1;
            }
        }
        let (best, _) = counts.iter().enumerate().min_by_key(|&(c, &t)| (t, c)).unwrap();
        colors[v] = best as u32;
    }
    colors
}

fn to_coloring(graph: &CrossingGraph, k: u32, zero_based: Vec<u32>) -> EdgeColoring {
    let mut colors: Vec<u32> = zero_based.into_iter().map(|c| c + 1).collect();
    colors.resize(num_pairs(graph.points), 1);
    EdgeColoring { n: graph.points, k, colors }
}

/// Greedy start plus first-improvement descent, best of `cfg.restarts` runs.
/// The result is 1-move optimal: no single recolor lowers the monochromatic count.
pub fn max_k_cut_local_search(graph: &CrossingGraph, k: u32, cfg: &SearchConfig) -> Result<EdgeColoring> {
    if k == 0 {
        return Err(Error::InvalidColoring("k must be at least 1".into()));
    }
    let mut best: Option<(u64, Vec<u32>)> = None;
    for r in 0..cfg.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(r as u64));
        let start = greedy_colors(graph, k as usize, &mut rng);
        let mut state = CutState::new(graph, k as usize, start);
        state.descend();
        let value = graph.monochromatic_edges(&state.colors);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, state.colors));
        }
    }
    Ok(to_coloring(graph, k, best.unwrap().1))
}

/// Descent from an existing coloring; never increases the monochromatic count.
pub fn improve_coloring(graph: &CrossingGraph, chi: &EdgeColoring) -> Result<EdgeColoring> {
    chi.check_matches(graph.points)?;
    let start: Vec<u32> = chi.colors[..graph.vertex_count()].iter().map(|&c| c - 1).collect();
    let mut state = CutState::new(graph, chi.k as usize, start);
    state.descend();
    Ok(to_coloring(graph, chi.k, state.colors))
}

/// Monochromatic crossings between an edge at `v` and an edge not at `v`.
fn incident_monochromatic(points: &[Point], chi: &EdgeColoring, classes: &[Vec<Segment>], v: usize) -> u64 {
    let set = PointsView(points);
    let n = points.len();
    let mut count = 0;
    for a in (0..n).filter(|&a| a != v) {
        let s = Segment::new(v, a).unwrap();
        for &t in &classes[chi.color(s) as usize - 1] {
            if !t.shares_endpoint(s) && set.crosses(s, t) {
                count += 1;
            }
        }
    }
    count
}

struct PointsView<'a>(&'a [Point]);

impl OrientationOracle for PointsView<'_> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn orient(&self, a: usize, b: usize, c: usize) -> crate::geom::Orientation {
        crate::geom::orientation(self.0[a], self.0[b], self.0[c])
    }
}

const MAX_PERTURBATION_PASSES: usize = 64;
const SAMPLED_MOVES: usize = 48;

fn candidate_moves(radius: i64, rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    if (2 * radius + 1) * (2 * radius + 1) - 1 <= SAMPLED_MOVES as i64 {
        let mut all = Vec::new();
        for dx in -radius..=radius {
            for dy in -radius..=radius {
                if (dx, dy) != (0, 0) {
                    all.push((dx, dy));
                }
            }
        }
        return all;
    }
    let mut moves: Vec<(i64, i64)> = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (1, 1), (-1, 1), (1, -1)].to_vec();
    while moves.len() < SAMPLED_MOVES {
        let m = (rng.random_range(-radius..=radius), rng.random_range(-radius..=radius));
        if m != (0, 0) {
            moves.push(m);
        }
    }
    moves
}

/// Single-point integer moves within Chebyshev radius `cfg.perturbation_radius`,
/// accepting only strictly improving moves that keep general position.
pub fn perturb_points(points: &PointSet, chi: &EdgeColoring, cfg: &SearchConfig) -> Result<PointSet> {
    cfg.validate()?;
    chi.check_matches(points.points().len())?;
    let n = points.points().len();
    let mut classes: Vec<Vec<Segment>> = vec![Vec::new(); chi.k as usize];
    for (i, &c) in chi.colors.iter().enumerate() {
        classes[c as usize - 1].push(Segment::from_index(n, i));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut current: Vec<Point> = points.points().to_vec();
    for _ in 0..MAX_PERTURBATION_PASSES {
        let mut improved = false;
        for v in 0..n {
            let mut base = incident_monochromatic(&current, chi, &classes, v);
            if base == 0 {
                continue;
            }
            for (dx, dy) in candidate_moves(cfg.perturbation_radius, &mut rng) {
                let old = current[v];
                let (Some(x), Some(y)) = (old.x.checked_add(dx), old.y.checked_add(dy)) else {
                    continue;
                };
                let to = Point::new(x, y);
                if check_insertion(&current, v, to).is_err() {
                    continue;
                }
                current[v] = to;
                let moved = incident_monochromatic(&current, chi, &classes, v);
                if moved < base {
                    base = moved;
                    improved = true;
                } else {
                    current[v] = old;
                }
            }
        }
        if !improved {
            break;
        }
    }
    PointSet::new(current)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub points: PointSet,
    pub coloring: EdgeColoring,
    pub monochromatic: u64,
    pub rounds: u32,
    /// Monochromatic count after the initial coloring and after each round.
    pub history: Vec<u64>,
}

/// Alternates recoloring (descent from the current coloring, and fresh
/// restarts, keeping the better) with point perturbation under the fixed
/// coloring. Stops after `max_stale_iterations` consecutive rounds without
/// improvement, or when no monochromatic crossing is left.
pub fn alternate_search(start: &PointSet, k: u32, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut points = start.clone();
    let graph = build_crossing_graph(&points);
    let mut coloring = max_k_cut_local_search(&graph, k, cfg)?;
    let mut best = count_monochromatic(&points, &coloring)?;
    let mut history = vec![best];
    let mut stale = 0;
    let mut rounds = 0;
    while best > 0 {
        rounds += 1;
        let round_cfg = cfg.with_seed(cfg.rng_seed.wrapping_add(1_000_003 * rounds as u64));
        let moved = perturb_points(&points, &coloring, &round_cfg)?;
        let graph = build_crossing_graph(&moved);
        let descended = improve_coloring(&graph, &coloring)?;
        let fresh = max_k_cut_local_search(&graph, k, &round_cfg)?;
        let d = graph.monochromatic_edges(&descended.colors);
        let f = graph.monochromatic_edges(&fresh.colors);
        let (next, value) = if f < d { (fresh, f) } else { (descended, d) };
        debug_assert!(value <= best);
        points = moved;
        coloring = next;
        history.push(value);
        if value < best {
            best = value;
            stale = 0;
        } else {
            stale += 1;
        }
        if stale >= cfg.max_stale_iterations {
            break;
        }
    }
    Ok(SearchOutcome { points, coloring, monochromatic: best, rounds, history })
}

/// Random integer points in `[0, side)^2` in general position.
pub fn random_point_set(n: usize, side: i64, seed: u64) -> Result<PointSet> {
    if side <= 0 || (side as u128) * (side as u128) < n as u128 * 4 {
        return Err(Error::OutOfRange(format!("grid side {side} too small for {n} points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point::new(rng.random_range(0..side), rng.random_range(0..side));
        pts.push(p);
        let last = pts.len() - 1;
        if check_insertion(&pts, last, p).is_err() {
            pts.pop();
        }
    }
    PointSet::new(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::num_pairs;
    use proptest::prelude::*;

    fn convex(n: usize) -> PointSet {
        PointSet::new((0..n as i64).map(|i| Point::new(i, i * i)).collect()).unwrap()
    }

    fn square() -> PointSet {
        PointSet::new(vec![Point::new(0, 0), Point::new(1, 0), Point::new(1, 1), Point::new(0, 1)]).unwrap()
    }

    #[test]
    fn square_diagonal_colors() {
        let p = square();
        let mut chi = EdgeColoring::uniform(4, 2, 1).unwrap();
        assert_eq!(count_monochromatic(&p, &chi).unwrap(), 1);
        chi.set(Segment::new(1, 3).unwrap(), 2).unwrap();
        assert_eq!(count_monochromatic(&p, &chi).unwrap(), 0);
    }

    #[test]
    fn convex_hexagon_single_color() {
        let chi = EdgeColoring::uniform(6, 1, 1).unwrap();
        assert_eq!(count_monochromatic(&convex(6), &chi).unwrap(), 15);
    }

    #[test]
    fn coloring_validation() {
        assert!(EdgeColoring::new(4, 2, vec![1; 5]).is_err());
        assert!(EdgeColoring::new(4, 2, vec![1, 1, 1, 3, 1, 1]).is_err());
        assert!(EdgeColoring::new(4, 0, vec![]).is_err());
        let chi = EdgeColoring::uniform(5, 1, 1).unwrap();
        assert!(count_monochromatic(&square(), &chi).is_err());
    }

    #[test]
    fn crossing_graph_small_cases() {
        let g = build_crossing_graph(&convex(4));
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 1));
        let inner = PointSet::new(vec![Point::new(0, 0), Point::new(10, 0), Point::new(0, 10), Point::new(2, 3)]).unwrap();
        let g = build_crossing_graph(&inner);
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 0));
    }

    #[test]
    fn cut_on_tiny_graphs() {
        let cfg = SearchConfig { restarts: 4, ..Default::default() };
        let single = CrossingGraph::abstract_graph(2, &[(0, 1)]).unwrap();
        let chi = max_k_cut_local_search(&single, 2, &cfg).unwrap();
        assert_eq!(single.monochromatic_edges(chi.colors()), 0);

        let triangle = CrossingGraph::abstract_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let chi = max_k_cut_local_search(&triangle, 2, &cfg).unwrap();
        assert_eq!(triangle.monochromatic_edges(chi.colors()), 1);
        let chi = max_k_cut_local_search(&triangle, 3, &cfg).unwrap();
        assert_eq!(triangle.monochromatic_edges(chi.colors()), 0);
    }

    fn is_one_move_optimal(g: &CrossingGraph, colors: &[u32], k: u32) -> bool {
        let base = g.monochromatic_edges(colors);
        let mut c = colors.to_vec();
        for v in 0..g.vertex_count() {
            let orig = c[v];
            for color in 1..=k {
                c[v] = color;
                if g.monochromatic_edges(&c) < base {
                    return false;
                }
            }
            c[v] = orig;
        }
        true
    }

    #[test]
    fn local_search_is_one_move_optimal() {
        let p = random_point_set(8, 60, 3).unwrap();
        let g = build_crossing_graph(&p);
        for k in 1..=3 {
            let chi = max_k_cut_local_search(&g, k, &SearchConfig { restarts: 3, ..Default::default() }).unwrap();
            assert!(is_one_move_optimal(&g, chi.colors(), k));
            assert_eq!(g.monochromatic_edges(chi.colors()), count_monochromatic(&p, &chi).unwrap());
        }
    }

    /// Exhaustive optimum over all colorings of the crossing graph; colors of
    /// isolated vertices do not matter and are fixed, and the first
    /// non-isolated vertex is pinned to color 0 by symmetry.
    fn exhaustive_optimum(g: &CrossingGraph, k: u32) -> u64 {
        let active: Vec<usize> = (0..g.vertex_count()).filter(|&v| !g.neighbors(v).is_empty()).collect();
        let mut colors = vec![0u32; g.vertex_count()];
        let mut best = u64::MAX;
        let total = (k as u64).pow(active.len().saturating_sub(1) as u32);
        for code in 0..total {
            let mut c = code;
            for &v in active.iter().skip(1) {
                colors[v] = (c % k as u64) as u32;
                c /= k as u64;
            }
            best = best.min(g.monochromatic_edges(&colors));
        }
        best
    }

    #[test]
    fn best_of_restarts_reaches_exhaustive_optimum_on_small_drawings() {
        for seed in 0..4 {
            let p = random_point_set(6, 40, 100 + seed).unwrap();
            let g = build_crossing_graph(&p);
            for k in 2..=3u32 {
                if k == 3 && g.edge_count() > 12 {
                    continue;
                }
                let opt = exhaustive_optimum(&g, k);
                let chi = max_k_cut_local_search(&g, k, &SearchConfig { restarts: 16, rng_seed: seed, ..Default::default() }).unwrap();
                assert_eq!(g.monochromatic_edges(chi.colors()), opt, "seed {seed}, k {k}");
            }
        }
    }

    #[test]
    fn perturbation_never_increases() {
        let p = random_point_set(9, 50, 11).unwrap();
        let g = build_crossing_graph(&p);
        let chi = max_k_cut_local_search(&g, 2, &SearchConfig::default()).unwrap();
        let before = count_monochromatic(&p, &chi).unwrap();
        let q = perturb_points(&p, &chi, &SearchConfig { perturbation_radius: 3, ..Default::default() }).unwrap();
        assert!(count_monochromatic(&q, &chi).unwrap() <= before);
    }

    #[test]
    fn perturbation_leaves_zero_instances_alone() {
        let p = convex(4);
        let mut chi = EdgeColoring::uniform(4, 2, 1).unwrap();
        chi.set(Segment::new(1, 3).unwrap(), 2).unwrap();
        let q = perturb_points(&p, &chi, &SearchConfig::default()).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn five_convex_points_perturb_toward_rectilinear_optimum() {
        // spread out convex pentagon: one unit of freedom is not enough to
        // change the order type, a wide radius is
        let p = PointSet::new(vec![
            Point::new(0, 0),
            Point::new(8, 0),
            Point::new(11, 7),
            Point::new(4, 12),
            Point::new(-3, 7),
        ])
        .unwrap();
        let chi = EdgeColoring::uniform(5, 1, 1).unwrap();
        assert_eq!(count_monochromatic(&p, &chi).unwrap(), 5);
        let q = perturb_points(&p, &chi, &SearchConfig { perturbation_radius: 12, rng_seed: 5, ..Default::default() }).unwrap();
        let after = count_monochromatic(&q, &chi).unwrap();
        assert!(after <= 5);
        // five points always have at least one convex quadrilateral
        assert!(after >= 1);
    }

    #[test]
    fn alternate_search_is_monotone() {
        let p = random_point_set(10, 80, 21).unwrap();
        let cfg = SearchConfig { restarts: 2, max_stale_iterations: 2, perturbation_radius: 4, rng_seed: 9 };
        let out = alternate_search(&p, 2, &cfg).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(out.monochromatic, count_monochromatic(&out.points, &out.coloring).unwrap());
        assert_eq!(*out.history.last().unwrap(), out.monochromatic);
    }

    #[test]
    fn alternate_search_with_many_colors_is_crossing_free() {
        let p = random_point_set(6, 40, 2).unwrap();
        let cfg = SearchConfig { restarts: 1, max_stale_iterations: 1, perturbation_radius: 2, rng_seed: 1 };
        let out = alternate_search(&p, num_pairs(6) as u32, &cfg).unwrap();
        assert_eq!(out.monochromatic, 0);
        assert!(out.rounds <= 1);
    }

    #[test]
    fn alternate_search_round_limit() {
        let p = random_point_set(7, 40, 4).unwrap();
        let cfg = SearchConfig { restarts: 1, max_stale_iterations: 1, perturbation_radius: 1, rng_seed: 4 };
        let out = alternate_search(&p, 2, &cfg).unwrap();
        // every round but the last improved
        let improving = out.history.windows(2).filter(|w| w[1] < w[0]).count() as u32;
        assert!(out.rounds == improving + 1 || out.monochromatic == 0);
    }

    fn instance(max_n: usize) -> impl Strategy<Value = (PointSet, EdgeColoring)> {
        (4..=max_n, 1u32..=3, any::<u64>()).prop_map(|(n, k, seed)| {
            let p = random_point_set(n, 64, seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let colors = (0..num_pairs(n)).map(|_| rng.random_range(1..=k)).collect();
            (p, EdgeColoring::new(n, k, colors).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn mono_plus_bichromatic_is_total((p, chi) in instance(9)) {
            let all = enumerate_crossings(&p);
            let bi = all.iter().filter(|(s, t)| chi.color(*s) != chi.color(*t)).count() as u64;
            prop_assert_eq!(count_monochromatic(&p, &chi).unwrap() + bi, all.len() as u64);
            let g = build_crossing_graph(&p);
            prop_assert_eq!(g.edge_count(), all.len());
            prop_assert_eq!(g.monochromatic_edges(chi.colors()), count_monochromatic(&p, &chi).unwrap());
        }

        #[test]
        fn relabelling_preserves_count((p, chi) in instance(8), rot in 0u32..3) {
            let k = chi.k();
            let perm: Vec<u32> = (0..k).map(|c| (c + rot) % k + 1).collect();
            let relabelled = chi.relabel(&perm).unwrap();
            prop_assert_eq!(count_monochromatic(&p, &chi).unwrap(), count_monochromatic(&p, &relabelled).unwrap());
        }

        #[test]
        fn splitting_a_class_never_increases((p, chi) in instance(8), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = chi.k();
            let colors = chi.colors().iter().map(|&c| if c == 1 && rng.random_bool(0.5) { k + 1 } else { c }).collect();
            let refined = EdgeColoring::new(chi.n(), k + 1, colors).unwrap();
            prop_assert!(count_monochromatic(&p, &refined).unwrap() <= count_monochromatic(&p, &chi).unwrap());
        }
    }
}
