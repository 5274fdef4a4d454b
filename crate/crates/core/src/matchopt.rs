//! Optimal matchings and details: the weight table, the assignment problem
//! between vertices and vertex pairs, and an exhaustive oracle for small `n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::asymptotics::{baseline_alpha, term_a, Rational, VertexProfile};
use crate::coloring::{count_monochromatic, EdgeColoring};
use crate::doubling::{side_counts_toward, Details, Matching};
use crate::error::{Error, Result};
use crate::geom::{num_pairs, pair_index, PointSet, Segment};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEntry {
    pub weight: Rational,
    pub details: Details,
}

/// `w(p, q)`: the least local α at `p` over all details when `ĥ(p) = q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    n: usize,
    entries: Vec<Option<WeightEntry>>,
    /// `cr_k(P_0) + A(|P_0|).c4`, the part of α no matching can change.
    pub base_alpha: Rational,
}

impl WeightTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, p: usize, q: usize) -> Option<&WeightEntry> {
        if p >= self.n || q >= self.n {
            return None;
        }
        self.entries[p * self.n + q].as_ref()
    }

    pub fn weight(&self, p: usize, q: usize) -> &Rational {
        &self.entry(p, q).expect("weight for p != q").weight
    }
}

/// Local α at `p` for target `q` and every detail choice, in [`Details::all`] order.
pub fn detail_alphas(points: &PointSet, chi: &EdgeColoring, p: usize, q: usize) -> Result<Vec<(Details, Rational)>> {
    let counts = side_counts_toward(points, chi, p, q);
    let a = chi.color_of(p, q);
    // colors outside {c̄, c'} grow with zero offsets under every detail
    let baseline: Vec<Rational> = (1..=chi.k())
        .map(|c| baseline_alpha(counts.get(c, crate::geom::Side::Left) as i64)
            + baseline_alpha(counts.get(c, crate::geom::Side::Right) as i64))
        .collect();
    let total_baseline: Rational = baseline.iter().sum();
    Details::all(chi.k())
        .map(|d| {
            let prof = VertexProfile::new(&counts, a, d)?;
            let touched: &[u32] = if d.sibling_color == a { &[a] } else { &[a, d.sibling_color] };
            let mut alpha = total_baseline.clone();
            for &c in touched {
                alpha -= &baseline[c as usize - 1];
            }
            alpha += prof.alpha_restricted(touched)?;
            Ok((d, alpha))
        })
        .collect()
}

pub fn build_weights(points: &PointSet, chi: &EdgeColoring) -> Result<WeightTable> {
    let n = points.points().len();
    chi.check_matches(n)?;
    if n < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 points, got {n}")));
    }
    let mut entries = vec![None; n * n];
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            let mut best: Option<WeightEntry> = None;
            for (d, alpha) in detail_alphas(points, chi, p, q)? {
                if best.as_ref().is_none_or(|b| alpha < b.weight) {
                    best = Some(WeightEntry { weight: alpha, details: d });
                }
            }
            entries[p * n + q] = best;
        }
    }
    let cr = count_monochromatic(points, chi)?;
    let base_alpha = Rational::from_integer(BigInt::from(cr)) + term_a(n as i64).c4;
    Ok(WeightTable { n, entries, base_alpha })
}

/// Left side: vertices; right side: unordered pairs; `p` is joined to every pair containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteInstance {
    pub n: usize,
    /// `cost[p][pair]`, `None` when `p` is not an endpoint of the pair.
    pub cost: Vec<Vec<Option<i128>>>,
    /// Common denominator the integer costs are scaled by.
    pub scale: BigInt,
}

impl BipartiteInstance {
    pub fn from_weights(w: &WeightTable) -> Result<Self> {
        let n = w.n;
        let mut scale = BigInt::one();
        for e in w.entries.iter().flatten() {
            scale = scale.lcm(e.weight.denom());
        }
        let scale_q = Rational::from_integer(scale.clone());
        let limit = i128::MAX / (4 * (n as i128 + 1));
        let mut cost = vec![vec![None; num_pairs(n)]; n];
        for (p, row) in cost.iter_mut().enumerate() {
            for q in (0..n).filter(|&q| q != p) {
                let scaled = (w.weight(p, q) * &scale_q).to_integer();
                let v = scaled.to_i128().filter(|v| v.abs() < limit).ok_or_else(|| {
                    Error::TooLarge("scaled matching weights exceed the solver's integer range".into())
                })?;
                row[pair_index(n, p.min(q), p.max(q))] = Some(v);
            }
        }
        Ok(BipartiteInstance { n, cost, scale })
    }

    pub fn left_degree(&self, p: usize) -> usize {
        self.cost[p].iter().filter(|c| c.is_some()).count()
    }

    pub fn right_degree(&self, pair: usize) -> usize {
        self.cost.iter().filter(|row| row[pair].is_some()).count()
    }

    /// Minimum-cost assignment of every left vertex to a distinct pair
    /// (shortest augmenting paths with potentials). Returns the pair per vertex.
    pub fn solve(&self) -> Result<Vec<usize>> {
        let (n, m) = (self.n, num_pairs(self.n));
        if n > m {
            return Err(Error::Invariant(format!("no saturating matching for {n} vertices")));
        }
        let max = self.cost.iter().flatten().flatten().map(|c| c.abs()).max().unwrap_or(0);
        let inf = max.saturating_mul(4 * (n as i128 + 1)).saturating_add(1).max(1);
        let cost = |i: usize, j: usize| self.cost[i - 1][j - 1].unwrap_or(inf);
        let mut u = vec![0i128; n + 1];
        let mut v = vec![0i128; m + 1];
        let mut owner = vec![0usize; m + 1];
        let mut way = vec![0usize; m + 1];
        for i in 1..=n {
            owner[0] = i;
            let mut j0 = 0usize;
            let mut minv = vec![i128::MAX; m + 1];
            let mut used = vec![false; m + 1];
            loop {
                used[j0] = true;
                let i0 = owner[j0];
                let mut delta = i128::MAX;
                let mut j1 = 0usize;
                for j in 1..=m {
                    if used[j] {
                        continue;
                    }
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=m {
                    if used[j] {
                        u[owner[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
                if owner[j0] == 0 {
                    break;
                }
            }
            loop {
                let j1 = way[j0];
                owner[j0] = owner[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }
        let mut assigned = vec![usize::MAX; n];
        for j in 1..=m {
            if owner[j] != 0 {
                assigned[owner[j] - 1] = j - 1;
            }
        }
        for (p, &pair) in assigned.iter().enumerate() {
            if pair == usize::MAX || self.cost[p][pair].is_none() {
                return Err(Error::Invariant(format!("assignment left vertex {p} without an incident pair")));
            }
        }
        Ok(assigned)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalMatching {
    pub matching: Matching,
    pub details: Vec<Details>,
    /// `Σ_p w(p, ĥ(p))`.
    pub local_total: Rational,
    /// `base_alpha + local_total`.
    pub alpha: Rational,
}

fn assemble(w: &WeightTable, target: Vec<usize>) -> Result<OptimalMatching> {
    let details = target.iter().enumerate().map(|(p, &q)| w.entry(p, q).unwrap().details).collect();
    let local_total: Rational = target.iter().enumerate().map(|(p, &q)| w.weight(p, q)).sum();
    let matching = Matching::new(target).map_err(|e| Error::Invariant(format!("solver produced {e}")))?;
    Ok(OptimalMatching { matching, details, alpha: &w.base_alpha + &local_total, local_total })
}

/// The matching minimizing `Σ_p w(p, ĥ(p))` with no pair used from both ends.
pub fn optimal_matching(w: &WeightTable) -> Result<OptimalMatching> {
    let inst = BipartiteInstance::from_weights(w)?;
    let pairs = inst.solve()?;
    let target = pairs
        .iter()
        .enumerate()
        .map(|(p, &pair)| {
            let s = Segment::from_index(w.n, pair);
            if s.a() == p {
                s.b()
            } else {
                s.a()
            }
        })
        .collect();
    assemble(w, target)
}

pub const MAX_BRUTE_FORCE: usize = 7;

/// Visits every map without fixed points (and, unless allowed, without
/// 2-cycles) in lexicographic order.
fn for_each_map(n: usize, allow_two_cycles: bool, mut visit: impl FnMut(&[usize])) {
    fn rec(p: usize, n: usize, allow: bool, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if p == n {
            visit(cur);
            return;
        }
        for q in 0..n {
            if q == p || (!allow && q < p && cur[q] == p) {
                continue;
            }
            cur.push(q);
            rec(p + 1, n, allow, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, allow_two_cycles, &mut Vec::with_capacity(n), &mut visit);
}

pub fn count_matchings(n: usize, allow_two_cycles: bool) -> u64 {
    let mut count = 0;
    for_each_map(n, allow_two_cycles, |_| count += 1);
    count
}

/// Exhaustive minimum over all matchings, with details minimized per vertex.
pub fn brute_force_matching(points: &PointSet, chi: &EdgeColoring) -> Result<OptimalMatching> {
    let n = points.points().len();
    if n > MAX_BRUTE_FORCE {
        return Err(Error::TooLarge(format!("brute force limited to {MAX_BRUTE_FORCE} points, got {n}")));
    }
    if n < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 points, got {n}")));
    }
    chi.check_matches(n)?;
    let mut best_local = vec![None; n * n];
    for p in 0..n {
        for q in (0..n).filter(|&q| q != p) {
            let mut best: Option<(Details, Rational)> = None;
            for (d, alpha) in detail_alphas(points, chi, p, q)? {
                if best.as_ref().is_none_or(|(_, b)| alpha < *b) {
                    best = Some((d, alpha));
                }
            }
            best_local[p * n + q] = best;
        }
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for_each_map(n, false, |target| {
        let total: Rational = target.iter().enumerate().map(|(p, &q)| &best_local[p * n + q].as_ref().unwrap().1).sum();
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, target.to_vec()));
        }
    });
    let (_, target) = best.ok_or_else(|| Error::Invariant("no valid matching".into()))?;
    let cr = count_monochromatic(points, chi)?;
    let table = WeightTable {
        n,
        entries: best_local
            .into_iter()
            .map(|e| e.map(|(details, weight)| WeightEntry { weight, details }))
            .collect(),
        base_alpha: Rational::from_integer(BigInt::from(cr)) + term_a(n as i64).c4,
    };
    assemble(&table, target)
}

/// α of an explicitly given matching with the best details at every vertex.
pub fn alpha_for_matching(w: &WeightTable, m: &Matching) -> Result<Rational> {
    if m.len() != w.n {
        return Err(Error::InvalidMatching(format!("{} targets for {} points", m.len(), w.n)));
    }
    let local: Rational = (0..w.n).map(|p| w.weight(p, m.target(p))).sum();
    Ok(&w.base_alpha + local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::asymptotics::coefficients;
    use crate::coloring::random_point_set;
    use crate::doubling::DoublingInstance;
    use crate::geom::Point;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coloring(n: usize, k: u32, seed: u64) -> EdgeColoring {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        EdgeColoring::new(n, k, (0..num_pairs(n)).map(|_| rng.random_range(1..=k)).collect()).unwrap()
    }

    #[test]
    fn matching_counts() {
        assert_eq!(count_matchings(3, false), 2);
        assert_eq!(count_matchings(3, true), 8);
        for n in 3..7 {
            assert!(count_matchings(n, true) > count_matchings(n, false));
        }
    }

    #[test]
    fn triangle_picks_cheaper_cycle() {
        let p = PointSet::new(vec![Point::new(0, 0), Point::new(9, 2), Point::new(4, 7)]).unwrap();
        let chi = EdgeColoring::uniform(3, 1, 1).unwrap();
        let w = build_weights(&p, &chi).unwrap();
        let best = optimal_matching(&w).unwrap();
        let cw = alpha_for_matching(&w, &Matching::new(vec![1, 2, 0]).unwrap()).unwrap();
        let ccw = alpha_for_matching(&w, &Matching::new(vec![2, 0, 1]).unwrap()).unwrap();
        assert_eq!(best.alpha, cw.clone().min(ccw));
        assert!(best.alpha > Rational::zero());
        assert_eq!(brute_force_matching(&p, &chi).unwrap().alpha, best.alpha);
    }

    #[test]
    fn weights_are_minima() {
        let p = random_point_set(5, 30, 2).unwrap();
        let chi = random_coloring(5, 2, 2);
        let w = build_weights(&p, &chi).unwrap();
        for a in 0..5 {
            for b in (0..5).filter(|&b| b != a) {
                let counts = side_counts_toward(&p, &chi, a, b);
                for d in Details::all(2) {
                    let prof = VertexProfile::new(&counts, chi.color_of(a, b), d).unwrap();
                    assert!(*w.weight(a, b) <= prof.alpha().unwrap());
                }
            }
        }
    }

    #[test]
    fn restricted_alpha_matches_full() {
        let p = random_point_set(6, 40, 9).unwrap();
        let chi = random_coloring(6, 3, 9);
        for (a, b) in [(0, 1), (2, 5), (4, 3)] {
            let counts = side_counts_toward(&p, &chi, a, b);
            for (d, alpha) in detail_alphas(&p, &chi, a, b).unwrap() {
                let prof = VertexProfile::new(&counts, chi.color_of(a, b), d).unwrap();
                assert_eq!(alpha, prof.alpha().unwrap(), "{d}");
            }
        }
    }

    #[test]
    fn solver_matches_brute_force_and_coefficients() {
        for seed in 0..4u64 {
            let n = 5 + (seed % 2) as usize;
            let p = random_point_set(n, 40, 40 + seed).unwrap();
            let chi = random_coloring(n, 2, seed);
            let w = build_weights(&p, &chi).unwrap();
            let best = optimal_matching(&w).unwrap();
            assert_eq!(best.alpha, brute_force_matching(&p, &chi).unwrap().alpha);
            let inst = DoublingInstance::new(&p, &chi, &best.matching, &best.details).unwrap();
            assert_eq!(coefficients(&inst).unwrap().alpha, best.alpha);
            let bip = BipartiteInstance::from_weights(&w).unwrap();
            for v in 0..n {
                assert_eq!(bip.left_degree(v), n - 1);
            }
            for pair in 0..num_pairs(n) {
                assert_eq!(bip.right_degree(pair), 2);
            }
        }
    }

    #[test]
    fn brute_force_guard() {
        let p = random_point_set(8, 40, 1).unwrap();
        let chi = EdgeColoring::uniform(8, 1, 1).unwrap();
        assert!(matches!(brute_force_matching(&p, &chi), Err(Error::TooLarge(_))));
    }
}
