//! Matchings, details, side counts and the explicit doubling construction.
//!
//! The doubled drawing is built geometrically with exact big-integer
//! coordinates. It is the brute-force reference against which every closed
//! form in [`crate::asymptotics`] is tested.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::coloring::{count_monochromatic_with, EdgeColoring};
use crate::error::{Error, Result};
use crate::geom::{num_pairs, OrderType, Orientation, OrientationOracle, PointSet, Segment, Side};

/// `ĥ`: every vertex points at another vertex, without fixed points or 2-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    target: Vec<usize>,
}

impl Matching {
    pub fn new(target: Vec<usize>) -> Result<Self> {
        let n = target.len();
        for (p, &q) in target.iter().enumerate() {
            if q >= n {
                return Err(Error::InvalidMatching(format!("target {q} of vertex {p} out of range")));
            }
            if q == p {
                return Err(Error::InvalidMatching(format!("vertex {p} is matched to itself")));
            }
            if target[q] == p {
                return Err(Error::InvalidMatching(format!("vertices {p} and {q} are matched to each other")));
            }
        }
        Ok(Matching { target })
    }

    /// `p -> p + 1 mod n`, valid for `n >= 3`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new((0..n).map(|p| (p + 1) % n).collect())
    }

    pub fn target(&self, p: usize) -> usize {
        self.target[p]
    }

    pub fn targets(&self) -> &[usize] {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }
}

/// Target of `ĥ₁(p₁)`: left or right child of `ĥ₀(p)` (seen from `p`), or the sibling `p₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FirstTarget {
    Left,
    Right,
    Sibling,
}

/// Target of `ĥ₁(p₂)`; the sibling is not allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SecondTarget {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Details {
    /// `c'(p)`, the color of the sibling edge `p₁p₂`.
    pub sibling_color: u32,
    pub first: FirstTarget,
    pub second: SecondTarget,
}

impl Details {
    pub fn new(sibling_color: u32, first: FirstTarget, second: SecondTarget) -> Self {
        Details { sibling_color, first, second }
    }

    /// All `6k` detail choices, ordered by color, then first, then second target.
    pub fn all(k: u32) -> impl Iterator<Item = Details> {
        (1..=k).flat_map(|c| {
            [FirstTarget::Left, FirstTarget::Right, FirstTarget::Sibling].into_iter().flat_map(move |f| {
                [SecondTarget::Left, SecondTarget::Right].into_iter().map(move |s| Details::new(c, f, s))
            })
        })
    }

    fn check(&self, k: u32) -> Result<()> {
        if self.sibling_color == 0 || self.sibling_color > k {
            return Err(Error::InvalidDetails(format!("sibling color {} outside 1..={k}", self.sibling_color)));
        }
        Ok(())
    }

    /// Matching color of the first child, given the parent's matching color.
    pub fn first_child_color(&self, matching_color: u32) -> u32 {
        match self.first {
            FirstTarget::Sibling => self.sibling_color,
            _ => matching_color,
        }
    }
}

impl fmt::Display for Details {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.first {
            FirstTarget::Left => 'L',
            FirstTarget::Right => 'R',
            FirstTarget::Sibling => 'S',
        };
        let b = match self.second {
            SecondTarget::Left => 'L',
            SecondTarget::Right => 'R',
        };
        write!(f, "{}:{a}:{b}", self.sibling_color)
    }
}

/// `S^d_c(p)`: edges at `p` of color `c` strictly left/right of the directed
/// matching edge. The matching edge itself is not counted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SideCounts {
    counts: Vec<[u32; 2]>,
}

impl SideCounts {
    pub fn zeros(k: u32) -> Self {
        SideCounts { counts: vec![[0, 0]; k as usize] }
    }

    pub fn get(&self, color: u32, side: Side) -> u32 {
        self.counts[color as usize - 1][side.index()]
    }

    pub fn k(&self) -> u32 {
        self.counts.len() as u32
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().map(|c| c[0] + c[1]).sum()
    }

    fn bump(&mut self, color: u32, side: Side) {
        self.counts[color as usize - 1][side.index()] += 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, Side, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(c, pair)| Side::BOTH.into_iter().map(move |d| (c as u32 + 1, d, pair[d.index()])))
    }
}

/// Side counts at `p` with respect to the directed line `p -> toward`.
pub fn side_counts_toward<O: OrientationOracle + ?Sized>(
    oracle: &O,
    chi: &EdgeColoring,
    p: usize,
    toward: usize,
) -> SideCounts {
    let mut sc = SideCounts::zeros(chi.k());
    for r in 0..oracle.len() {
        if r == p || r == toward {
            continue;
        }
        let side = match oracle.orient(p, toward, r) {
            Orientation::CounterClockwise => Side::Left,
            _ => Side::Right,
        };
        sc.bump(chi.color_of(p, r), side);
    }
    sc
}

pub fn side_counts<O: OrientationOracle + ?Sized>(oracle: &O, chi: &EdgeColoring, m: &Matching, p: usize) -> SideCounts {
    side_counts_toward(oracle, chi, p, m.target(p))
}

/// Per-(p, c, d) growth offsets: `S(p₁) = 2 S(p) + o1`, `S(p₂) = 2 S(p) + o2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OffsetPair {
    o1: u8,
    o2: u8,
}

impl OffsetPair {
    pub const ALL: [OffsetPair; 5] = [
        OffsetPair { o1: 0, o2: 0 },
        OffsetPair { o1: 0, o2: 1 },
        OffsetPair { o1: 1, o2: 0 },
        OffsetPair { o1: 1, o2: 1 },
        OffsetPair { o1: 2, o2: 1 },
    ];

    pub fn new(o1: i64, o2: i64) -> Result<Self> {
        match (o1, o2) {
            (0..=2, 0..=1) if (o1, o2) != (2, 0) => Ok(OffsetPair { o1: o1 as u8, o2: o2 as u8 }),
            _ => Err(Error::InvalidOffsets(o1, o2)),
        }
    }

    pub fn o1(self) -> i64 {
        self.o1 as i64
    }

    pub fn o2(self) -> i64 {
        self.o2 as i64
    }

    pub fn get(self, slot: ChildSlot) -> i64 {
        match slot {
            ChildSlot::First => self.o1(),
            ChildSlot::Second => self.o2(),
        }
    }
}

/// Offsets of the five non-sibling-reversed local edges at the children of a
/// vertex whose matching edge has color `matching_color`, as `[color - 1][side]`.
///
/// At `p₁`: with target left child, the edge to the right child and the
/// sibling edge both lie to the right (mirrored for the right child); with the
/// sibling as target the two edges to `ĥ(p)`'s children straddle the line.
/// At `p₂`: the edge to the other child of `ĥ(p)` lies on that child's side and
/// the edge back to `p₁` on the opposite side.
pub fn local_offsets(details: &Details, matching_color: u32, k: u32) -> Vec<[OffsetPair; 2]> {
    let mut raw = vec![[[0i64; 2]; 2]; k as usize];
    let mc = matching_color as usize - 1;
    let sc = details.sibling_color as usize - 1;
    let (l, r) = (Side::Left.index(), Side::Right.index());
    match details.first {
        FirstTarget::Left => {
            raw[mc][r][0] += 1;
            raw[sc][r][0] += 1;
        }
        FirstTarget::Right => {
            raw[mc][l][0] += 1;
            raw[sc][l][0] += 1;
        }
        FirstTarget::Sibling => {
            raw[mc][l][0] += 1;
            raw[mc][r][0] += 1;
        }
    }
    match details.second {
        SecondTarget::Left => {
            raw[mc][r][1] += 1;
            raw[sc][l][1] += 1;
        }
        SecondTarget::Right => {
            raw[mc][l][1] += 1;
            raw[sc][r][1] += 1;
        }
    }
    raw.into_iter()
        .map(|sides| sides.map(|[a, b]| OffsetPair::new(a, b).expect("local edge pattern yields valid offsets")))
        .collect()
}

/// Bundles one drawing with its matching and per-vertex details.
#[derive(Debug, Clone, Copy)]
pub struct DoublingInstance<'a> {
    pub points: &'a PointSet,
    pub coloring: &'a EdgeColoring,
    pub matching: &'a Matching,
    pub details: &'a [Details],
}

impl<'a> DoublingInstance<'a> {
    pub fn new(
        points: &'a PointSet,
        coloring: &'a EdgeColoring,
        matching: &'a Matching,
        details: &'a [Details],
    ) -> Result<Self> {
        let n = points.points().len();
        if coloring.n() != n {
            return Err(Error::InvalidColoring(format!("coloring has {} vertices, drawing {n}", coloring.n())));
        }
        if matching.len() != n {
            return Err(Error::InvalidMatching(format!("matching has {} vertices, drawing {n}", matching.len())));
        }
        if details.len() != n {
            return Err(Error::InvalidDetails(format!("{} details for {n} vertices", details.len())));
        }
        for d in details {
            d.check(coloring.k())?;
        }
        Ok(DoublingInstance { points, coloring, matching, details })
    }

    pub fn n(&self) -> usize {
        self.points.points().len()
    }

    pub fn k(&self) -> u32 {
        self.coloring.k()
    }

    /// Color of `p`'s matching edge, `c̄(p)`.
    pub fn matching_color(&self, p: usize) -> u32 {
        self.coloring.color_of(p, self.matching.target(p))
    }

    pub fn side_counts(&self, p: usize) -> SideCounts {
        side_counts(self.points, self.coloring, self.matching, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChildSlot {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactPoint {
    pub x: BigInt,
    pub y: BigInt,
}

fn cross(ux: &BigInt, uy: &BigInt, vx: &BigInt, vy: &BigInt) -> BigInt {
    ux * vy - uy * vx
}

/// One level of the construction: exact coordinates plus everything needed to
/// double it again. Vertex `v` of the parent level has children `2v` (first,
/// farther from the matching target) and `2v + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledDrawing {
    pub points: Vec<ExactPoint>,
    pub order: OrderType,
    pub coloring: EdgeColoring,
    pub matching: Matching,
    pub details: Vec<Details>,
    /// Parent index and slot of every vertex; empty for the base level.
    pub parent: Vec<(usize, ChildSlot)>,
    /// The children were placed at parameter `2^-epsilon_shift` along the matching edge.
    pub epsilon_shift: u32,
}

impl DoubledDrawing {
    /// Level 0 of the construction.
    pub fn base(inst: &DoublingInstance<'_>) -> Self {
        DoubledDrawing {
            points: inst
                .points
                .points()
                .iter()
                .map(|p| ExactPoint { x: BigInt::from(p.x), y: BigInt::from(p.y) })
                .collect(),
            order: inst.points.order_type(),
            coloring: inst.coloring.clone(),
            matching: inst.matching.clone(),
            details: inst.details.to_vec(),
            parent: Vec::new(),
            epsilon_shift: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn monochromatic(&self) -> u64 {
        count_monochromatic_with(&self.order, &self.coloring).expect("coloring sized to the drawing")
    }

    pub fn side_counts(&self, v: usize) -> SideCounts {
        side_counts(&self.order, &self.coloring, &self.matching, v)
    }

    pub fn matching_color(&self, v: usize) -> u32 {
        self.coloring.color_of(v, self.matching.target(v))
    }

    /// Converts to `i64` coordinates when they fit.
    pub fn to_point_set(&self) -> Result<PointSet> {
        let pts = self
            .points
            .iter()
            .map(|p| {
                let x = i64::try_from(&p.x).map_err(|_| Error::TooLarge("coordinate exceeds i64".into()))?;
                let y = i64::try_from(&p.y).map_err(|_| Error::TooLarge("coordinate exceeds i64".into()))?;
                Ok(crate::geom::Point::new(x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(pts)
    }

    /// Splits every vertex once along its matching edge.
    pub fn split(&self) -> Result<DoubledDrawing> {
        let n = self.len();
        let k = self.coloring.k();
        // child 2p = P - eps D, child 2p+1 = P + eps D
        let dirs: Vec<(BigInt, BigInt)> = (0..n)
            .map(|p| {
                let q = &self.points[self.matching.target(p)];
                let pp = &self.points[p];
                (&q.x - &pp.x, &q.y - &pp.y)
            })
            .collect();
        let base = |v: usize| &self.points[v / 2];
        let offset = |v: usize| -> (BigInt, BigInt) {
            let (dx, dy) = &dirs[v / 2];
            if v.is_multiple_of(2) {
                (-dx, -dy)
            } else {
                (dx.clone(), dy.clone())
            }
        };
        let m = 2 * n;
        let offsets: Vec<(BigInt, BigInt)> = (0..m).map(offset).collect();

        // orientation of children a,b,c as polynomial e0 + e1 eps + e2 eps^2
        let mut limit = vec![0i8; 0];
        let mut shift: u64 = 1;
        let mut triples = Vec::with_capacity(m * m * m / 6);
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    triples.push((a, b, c));
                }
            }
        }
        limit.reserve(triples.len());
        for &(a, b, c) in &triples {
            let (pa, pb, pc) = (base(a), base(b), base(c));
            let (da, db, dc) = (&offsets[a], &offsets[b], &offsets[c]);
            let u0 = (&pb.x - &pa.x, &pb.y - &pa.y);
            let v0 = (&pc.x - &pa.x, &pc.y - &pa.y);
            let u1 = (&db.0 - &da.0, &db.1 - &da.1);
            let v1 = (&dc.0 - &da.0, &dc.1 - &da.1);
            let e = [
                cross(&u0.0, &u0.1, &v0.0, &v0.1),
                cross(&u0.0, &u0.1, &v1.0, &v1.1) + cross(&u1.0, &u1.1, &v0.0, &v0.1),
                cross(&u1.0, &u1.1, &v1.0, &v1.1),
            ];
            let Some(lead) = e.iter().position(|x| !x.is_zero()) else {
                return Err(Error::Invariant(format!(
                    "children {a}, {b}, {c} stay collinear for every split distance"
                )));
            };
            limit.push(if e[lead].is_positive() { 1 } else { -1 });
            let lead_abs = e[lead].abs();
            let rest: BigInt = e[lead..].iter().map(|x| x.abs()).sum();
            let ratio = rest.div_ceil(&lead_abs);
            shift = shift.max(ratio.bits());
        }
        let shift = u32::try_from(shift).map_err(|_| Error::TooLarge("split distance exponent".into()))?;

        let scale = BigInt::from(1) << shift;
        let points: Vec<ExactPoint> = (0..m)
            .map(|v| {
                let p = base(v);
                let (dx, dy) = &offsets[v];
                ExactPoint { x: &p.x * &scale + dx, y: &p.y * &scale + dy }
            })
            .collect();

        let mut idx = 0;
        let order = OrderType::from_fn(m, |a, b, c| {
            let s = limit[idx];
            idx += 1;
            let (pa, pb, pc) = (&points[a], &points[b], &points[c]);
            let actual = cross(&(&pb.x - &pa.x), &(&pb.y - &pa.y), &(&pc.x - &pa.x), &(&pc.y - &pa.y));
            let actual = if actual.is_positive() {
                1
            } else if actual.is_negative() {
                -1
            } else {
                0
            };
            debug_assert_eq!(actual, s);
            Orientation::from_sign(if actual == s { s } else { 0 })
        });
        order.check_general_position().map_err(|e| {
            Error::Invariant(format!("doubled drawing does not realize the limit order type: {e}"))
        })?;

        let mut colors = Vec::with_capacity(num_pairs(m));
        for a in 0..m {
            for b in a + 1..m {
                let (pa, pb) = (a / 2, b / 2);
                colors.push(if pa == pb { self.details[pa].sibling_color } else { self.coloring.color_of(pa, pb) });
            }
        }
        let coloring = EdgeColoring::new(m, k, colors)?;

        let mut target = vec![0usize; m];
        for p in 0..n {
            let q = self.matching.target(p);
            // left child of q as seen from p: child 2q+1 lies on the side of ĥ(q)
            let (left, right) = match self.order.orient(p, q, self.matching.target(q)) {
                Orientation::CounterClockwise => (2 * q + 1, 2 * q),
                _ => (2 * q, 2 * q + 1),
            };
            let d = &self.details[p];
            target[2 * p] = match d.first {
                FirstTarget::Left => left,
                FirstTarget::Right => right,
                FirstTarget::Sibling => 2 * p + 1,
            };
            target[2 * p + 1] = match d.second {
                SecondTarget::Left => left,
                SecondTarget::Right => right,
            };
        }
        let matching = Matching::new(target)
            .map_err(|e| Error::Invariant(format!("doubled matching is invalid: {e}")))?;

        let details = (0..m).map(|v| self.details[v / 2]).collect();
        let parent = (0..m).map(|v| (v / 2, if v % 2 == 0 { ChildSlot::First } else { ChildSlot::Second })).collect();
        Ok(DoubledDrawing { points, order, coloring, matching, details, parent, epsilon_shift: shift })
    }
}

pub fn double_once(inst: &DoublingInstance<'_>) -> Result<DoubledDrawing> {
    DoubledDrawing::base(inst).split()
}

pub const MAX_EXPLICIT_LEVELS: u32 = 4;

/// All levels `0..=t` of the iterated construction; descendants inherit the
/// details of their root.
pub fn double_levels(inst: &DoublingInstance<'_>, t: u32) -> Result<Vec<DoubledDrawing>> {
    if t > MAX_EXPLICIT_LEVELS || (inst.n() << t) > 256 {
        return Err(Error::TooLarge(format!("explicit construction of {} points", inst.n() << t)));
    }
    let mut levels = vec![DoubledDrawing::base(inst)];
    for _ in 0..t {
        let next = levels.last().unwrap().split()?;
        levels.push(next);
    }
    Ok(levels)
}

pub fn double_iterate(inst: &DoublingInstance<'_>, t: u32) -> Result<DoubledDrawing> {
    if t == 0 {
        return Err(Error::OutOfRange("double_iterate needs t >= 1".into()));
    }
    Ok(double_levels(inst, t)?.pop().unwrap())
}

/// Offsets of every (color, side) at `v`, measured between `level` and its split `child`.
pub fn measured_offsets(level: &DoubledDrawing, child: &DoubledDrawing, v: usize) -> Result<Vec<[OffsetPair; 2]>> {
    let parent = level.side_counts(v);
    let s1 = child.side_counts(2 * v);
    let s2 = child.side_counts(2 * v + 1);
    (1..=level.coloring.k())
        .map(|c| {
            let mut pair = [OffsetPair::ALL[0]; 2];
            for d in Side::BOTH {
                let base = 2 * parent.get(c, d) as i64;
                pair[d.index()] = OffsetPair::new(s1.get(c, d) as i64 - base, s2.get(c, d) as i64 - base)?;
            }
            Ok(pair)
        })
        .collect()
}

/// `(o1, o2)` at `p` for color `c` and side `d`, read off one explicit doubling step.
pub fn extract_offsets(inst: &DoublingInstance<'_>, p: usize, color: u32, side: Side) -> Result<OffsetPair> {
    if p >= inst.n() {
        return Err(Error::VertexOutOfRange { index: p, n: inst.n() });
    }
    if color == 0 || color > inst.k() {
        return Err(Error::OutOfRange(format!("color {color}")));
    }
    let base = DoubledDrawing::base(inst);
    let child = base.split()?;
    Ok(measured_offsets(&base, &child, p)?[color as usize - 1][side.index()])
}

/// Monochromatic crossings of a split drawing by how many parents their four
/// endpoints have: two (I), three with or without the doubled vertex's
/// matching target among the others (IIb / IIa), four (III).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CrossingClasses {
    pub type_i: u64,
    pub type_iia: u64,
    pub type_iib: u64,
    pub type_iii: u64,
}

impl CrossingClasses {
    pub fn total(&self) -> u64 {
        self.type_i + self.type_iia + self.type_iib + self.type_iii
    }

    pub fn named(&self) -> [(&'static str, u64); 4] {
        [("I", self.type_i), ("IIa", self.type_iia), ("IIb", self.type_iib), ("III", self.type_iii)]
    }
}

pub fn classify_crossings(level: &DoubledDrawing, child: &DoubledDrawing) -> CrossingClasses {
    let m = child.len();
    let mut out = CrossingClasses::default();
    let segs: Vec<Segment> = (0..num_pairs(m)).map(|i| Segment::from_index(m, i)).collect();
    for (i, &s) in segs.iter().enumerate() {
        let cs = child.coloring.color(s);
        for &t in &segs[i + 1..] {
            if s.shares_endpoint(t) || child.coloring.color(t) != cs || !child.order.crosses(s, t) {
                continue;
            }
            let mut parents = [s.a() / 2, s.b() / 2, t.a() / 2, t.b() / 2];
            parents.sort_unstable();
            let mut distinct = parents.to_vec();
            distinct.dedup();
            match distinct.len() {
                2 => out.type_i += 1,
                4 => out.type_iii += 1,
                _ => {
                    let doubled = (0..3).find(|&i| parents[i] == parents[i + 1]).map(|i| parents[i]).unwrap();
                    let others: Vec<usize> = distinct.iter().copied().filter(|&x| x != doubled).collect();
                    if others.contains(&level.matching.target(doubled)) {
                        out.type_iib += 1;
                    } else {
                        out.type_iia += 1;
                    }
                }
            }
        }
    }
    out
}

/// Per-class counts the one-step crossing formula predicts for splitting `level`.
pub fn predicted_classes(level: &DoubledDrawing) -> CrossingClasses {
    let n = level.len() as u64;
    let mut iia = 0;
    let mut iib = 0;
    for v in 0..level.len() {
        let sc = level.side_counts(v);
        let mc = level.matching_color(v);
        for (_, _, s) in sc.iter() {
            let s = s as u64;
            iia += 4 * (s * s.saturating_sub(1) / 2);
        }
        iib += 2 * (sc.get(mc, Side::Left) + sc.get(mc, Side::Right)) as u64;
    }
    CrossingClasses { type_i: n * (n - 1) / 2 - n, type_iia: iia, type_iib: iib, type_iii: 16 * level.monochromatic() }
}
