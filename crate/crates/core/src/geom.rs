//! Exact planar predicates over integer coordinates and crossing enumeration
//! for straight-line drawings of complete graphs.
//!
//! Every predicate is evaluated in `i128`, so coordinates up to `2^62` in
//! magnitude never round. Drawings with larger coordinates (the output of the
//! doubling construction) go through [`OrderType`], which only stores the
//! orientation signs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

/// Sign of the signed area of an ordered point triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn from_sign(sign: i8) -> Self {
        match sign.signum() {
            1 => Orientation::CounterClockwise,
            -1 => Orientation::Clockwise,
            _ => Orientation::Collinear,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    pub fn reversed(self) -> Self {
        Orientation::from_sign(-self.sign())
    }
}

/// Side of a directed line. The line through `p` and `q` is directed from
/// `p` toward `q`; `Left` means positive orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    let ux = q.x as i128 - p.x as i128;
    let uy = q.y as i128 - p.y as i128;
    let vx = r.x as i128 - p.x as i128;
    let vy = r.y as i128 - p.y as i128;
    let det = ux * vy - uy * vx;
    Orientation::from_sign(det.signum() as i8)
}

pub fn side_of_directed_line(p: Point, q: Point, r: Point) -> Result<Side> {
    match orientation(p, q, r) {
        Orientation::CounterClockwise => Ok(Side::Left),
        Orientation::Clockwise => Ok(Side::Right),
        Orientation::Collinear => Err(Error::InvalidMatching(format!(
            "point {r:?} lies on the line through {p:?} and {q:?}"
        ))),
    }
}

/// An edge of `K_n`, stored as a canonical pair `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    a: usize,
    b: usize,
}

impl Segment {
    pub fn new(u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::OutOfRange(format!("segment with equal endpoints {u}")));
        }
        Ok(Segment { a: u.min(v), b: u.max(v) })
    }

    pub fn a(self) -> usize {
        self.a
    }

    pub fn b(self) -> usize {
        self.b
    }

    pub fn has_endpoint(self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    pub fn shares_endpoint(self, other: Segment) -> bool {
        self.has_endpoint(other.a) || self.has_endpoint(other.b)
    }

    /// Index of this segment in the lexicographic order of all pairs of `0..n`.
    pub fn index(self, n: usize) -> usize {
        pair_index(n, self.a, self.b)
    }

    pub fn from_index(n: usize, index: usize) -> Segment {
        let mut a = 0;
        let mut start = 0;
        while start + (n - a - 1) <= index {
            start += n - a - 1;
            a += 1;
        }
        Segment { a, b: a + 1 + (index - start) }
    }
}

#[inline]
pub(crate) fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Anything that can answer orientation queries on vertex indices.
pub trait OrientationOracle {
    fn len(&self) -> usize;

    fn orient(&self, a: usize, b: usize, c: usize) -> Orientation;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether two endpoint-disjoint segments cross. Assumes general position.
    fn crosses(&self, s: Segment, t: Segment) -> bool {
        let o1 = self.orient(s.a, s.b, t.a);
        let o2 = self.orient(s.a, s.b, t.b);
        if o1 == o2 {
            return false;
        }
        self.orient(t.a, t.b, s.a) != self.orient(t.a, t.b, s.b)
    }
}

/// Integer points in general position, one per vertex of `K_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Validates distinctness and general position (no three collinear).
    pub fn new(points: Vec<Point>) -> Result<Self> {
        check_general_position(&points)?;
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.points.len();
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| Segment { a, b }))
    }

    /// Replaces point `i`, keeping general position. The set is left unchanged
    /// when the move is rejected.
    pub fn try_move(&mut self, i: usize, to: Point) -> Result<()> {
        self.check_index(i)?;
        check_insertion(&self.points, i, to)?;
        self.points[i] = to;
        Ok(())
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.points.len() {
            return Err(Error::VertexOutOfRange { index: i, n: self.points.len() });
        }
        Ok(())
    }

    pub fn order_type(&self) -> OrderType {
        OrderType::from_oracle(self)
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

impl OrientationOracle for PointSet {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn orient(&self, a: usize, b: usize, c: usize) -> Orientation {
        orientation(self.points[a], self.points[b], self.points[c])
    }
}

/// Checks that `points[i]` could be replaced by `p` without two points
/// coinciding or three becoming collinear.
pub(crate) fn check_insertion(points: &[Point], i: usize, p: Point) -> Result<()> {
    let n = points.len();
    for a in 0..n {
        if a == i {
            continue;
        }
        if points[a] == p {
            return Err(Error::DuplicatePoint(a.min(i), a.max(i)));
        }
        for b in a + 1..n {
            if b == i {
                continue;
            }
            if orientation(points[a], points[b], p) == Orientation::Collinear {
                let mut t = [a, b, i];
                t.sort_unstable();
                return Err(Error::Collinear(t[0], t[1], t[2]));
            }
        }
    }
    Ok(())
}

/// O(n^3) scan reporting the first coinciding pair or collinear triple.
pub fn check_general_position(points: &[Point]) -> Result<()> {
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            if points[a] == points[b] {
                return Err(Error::DuplicatePoint(a, b));
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if orientation(points[a], points[b], points[c]) == Orientation::Collinear {
                    return Err(Error::Collinear(a, b, c));
                }
            }
        }
    }
    Ok(())
}

/// Orientation signs of every ordered triple, independent of coordinate size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderType {
    n: usize,
    signs: Vec<i8>,
}

impl OrderType {
    pub fn from_oracle<O: OrientationOracle + ?Sized>(oracle: &O) -> Self {
        Self::from_fn(oracle.len(), |a, b, c| oracle.orient(a, b, c))
    }

    /// Builds the table from a function evaluated on sorted triples `a < b < c`;
    /// the remaining permutations follow by antisymmetry.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Orientation) -> Self {
        let mut signs = vec![0i8; n * n * n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = f(a, b, c).sign();
                    for (x, y, z, sign) in [
                        (a, b, c, s),
                        (b, c, a, s),
                        (c, a, b, s),
                        (b, a, c, -s),
                        (a, c, b, -s),
                        (c, b, a, -s),
                    ] {
                        signs[(x * n + y) * n + z] = sign;
                    }
                }
            }
        }
        OrderType { n, signs }
    }

    pub fn check_general_position(&self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if self.signs[(a * n + b) * n + c] == 0 {
                        return Err(Error::Collinear(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }
}

impl OrientationOracle for OrderType {
    fn len(&self) -> usize {
        self.n
    }

    fn orient(&self, a: usize, b: usize, c: usize) -> Orientation {
        Orientation::from_sign(self.signs[(a * self.n + b) * self.n + c])
    }
}

pub fn segments_cross<O: OrientationOracle + ?Sized>(s: Segment, t: Segment, oracle: &O) -> Result<bool> {
    let n = oracle.len();
    for v in [s.a, s.b, t.a, t.b] {
        if v >= n {
            return Err(Error::VertexOutOfRange { index: v, n });
        }
    }
    if s.shares_endpoint(t) {
        return Err(Error::SharedEndpoint((s.a, s.b), (t.a, t.b)));
    }
    Ok(oracle.crosses(s, t))
}

/// All unordered pairs of endpoint-disjoint crossing segments, each pair
/// listed once with the lexicographically smaller segment first.
pub fn enumerate_crossings<O: OrientationOracle + ?Sized>(oracle: &O) -> Vec<(Segment, Segment)> {
    let n = oracle.len();
    let segs: Vec<Segment> = (0..n).flat_map(|a| (a + 1..n).map(move |b| Segment { a, b })).collect();
    let mut out = Vec::new();
    for (i, &s) in segs.iter().enumerate() {
        for &t in &segs[i + 1..] {
            if !s.shares_endpoint(t) && oracle.crosses(s, t) {
                out.push((s, t));
            }
        }
    }
    out
}

/// Validates general position first so that callers get the offending triple.
pub fn checked_crossings(points: &PointSet) -> Result<Vec<(Segment, Segment)>> {
    check_general_position(points.points())?;
    Ok(enumerate_crossings(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().copied().map(Point::from).collect()
    }

    fn convex(n: usize) -> PointSet {
        // points on the parabola y = x^2 are in convex position and general position
        PointSet::new((0..n as i64).map(|i| Point::new(i, i * i)).collect()).unwrap()
    }

    fn seg(a: usize, b: usize) -> Segment {
        Segment::new(a, b).unwrap()
    }

    #[test]
    fn orientation_examples() {
        let o = Point::new(0, 0);
        assert_eq!(orientation(o, Point::new(1, 0), Point::new(0, 1)).sign(), 1);
        assert_eq!(orientation(o, Point::new(1, 0), Point::new(2, 0)).sign(), 0);
        assert_eq!(orientation(o, Point::new(0, 1), Point::new(1, 0)).sign(), -1);
    }

    #[test]
    fn orientation_does_not_overflow() {
        let big = i64::MAX / 2;
        let o = orientation(Point::new(-big, -big), Point::new(big, -big), Point::new(0, big));
        assert_eq!(o, Orientation::CounterClockwise);
    }

    #[test]
    fn side_examples() {
        let p = Point::new(0, 0);
        assert_eq!(side_of_directed_line(p, Point::new(1, 0), Point::new(0, 1)).unwrap(), Side::Left);
        assert_eq!(side_of_directed_line(p, Point::new(1, 0), Point::new(0, -1)).unwrap(), Side::Right);
        assert_eq!(side_of_directed_line(p, Point::new(2, 2), Point::new(3, 0)).unwrap(), Side::Right);
        assert!(side_of_directed_line(p, Point::new(1, 1), Point::new(2, 2)).is_err());
    }

    #[test]
    fn unit_square_crossings() {
        let sq = PointSet::new(pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        // diagonals (0,2) and (1,3)
        assert!(segments_cross(seg(0, 2), seg(1, 3), &sq).unwrap());
        // opposite sides
        assert!(!segments_cross(seg(0, 1), seg(2, 3), &sq).unwrap());
        assert!(!segments_cross(seg(1, 2), seg(0, 3), &sq).unwrap());
        assert!(matches!(segments_cross(seg(0, 1), seg(1, 2), &sq), Err(Error::SharedEndpoint(..))));
    }

    #[test]
    fn five_convex_points_have_five_crossings() {
        let p = convex(5);
        let segs: Vec<Segment> = p.segments().collect();
        assert_eq!(segs.len(), 10);
        let mut count = 0;
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if !segs[i].shares_endpoint(segs[j]) && segments_cross(segs[i], segs[j], &p).unwrap() {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 5);
        assert_eq!(enumerate_crossings(&p).len(), 5);
    }

    #[test]
    fn four_point_cases() {
        assert_eq!(enumerate_crossings(&convex(4)).len(), 1);
        let inner = PointSet::new(pts(&[(0, 0), (10, 0), (0, 10), (2, 3)])).unwrap();
        assert!(enumerate_crossings(&inner).is_empty());
    }

    #[test]
    fn general_position_violations_name_the_triple() {
        let err = PointSet::new(pts(&[(0, 0), (5, 7), (1, 1), (3, 3)])).unwrap_err();
        assert_eq!(err, Error::Collinear(0, 2, 3));
        let err = PointSet::new(pts(&[(0, 0), (1, 2), (0, 0)])).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint(0, 2));
    }

    #[test]
    fn try_move_rejects_collinear_and_keeps_state() {
        let mut p = PointSet::new(pts(&[(0, 0), (4, 0), (0, 4), (3, 2)])).unwrap();
        assert!(p.try_move(3, Point::new(2, 2)).is_err());
        assert_eq!(p.point(3), Point::new(3, 2));
        p.try_move(3, Point::new(1, 2)).unwrap();
        assert_eq!(p.point(3), Point::new(1, 2));
    }

    #[test]
    fn segment_index_roundtrip() {
        for n in 2..9 {
            let mut idx = 0;
            for a in 0..n {
                for b in a + 1..n {
                    let s = seg(b, a);
                    assert_eq!(s.index(n), idx);
                    assert_eq!(Segment::from_index(n, idx), s);
                    idx += 1;
                }
            }
            assert_eq!(idx, num_pairs(n));
        }
    }

    #[test]
    fn order_type_matches_points() {
        let p = PointSet::new(pts(&[(0, 0), (7, 1), (3, 9), (-4, 5), (2, 2)])).unwrap();
        let ot = p.order_type();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    if a != b && b != c && a != c {
                        assert_eq!(ot.orient(a, b, c), p.orient(a, b, c));
                    }
                }
            }
        }
        assert_eq!(enumerate_crossings(&ot), enumerate_crossings(&p));
    }

    /// Independent oracle: a 4-set is in convex position iff no point lies
    /// inside the triangle of the other three.
    fn convex_quadruples(p: &[Point]) -> usize {
        let inside = |t: [Point; 3], q: Point| {
            let s0 = orientation(t[0], t[1], q);
            s0 == orientation(t[1], t[2], q) && s0 == orientation(t[2], t[0], q)
        };
        let n = p.len();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let q = [p[a], p[b], p[c], p[d]];
                        let any_inside = (0..4).any(|i| {
                            let rest: Vec<Point> = (0..4).filter(|&j| j != i).map(|j| q[j]).collect();
                            inside([rest[0], rest[1], rest[2]], q[i])
                        });
                        if !any_inside {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    fn general_position_points(max_n: usize) -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-40i64..40, -40i64..40), 4..=max_n)
            .prop_map(|v| v.into_iter().map(Point::from).collect::<Vec<_>>())
            .prop_filter("general position", |v| check_general_position(v).is_ok())
    }

    proptest! {
        #[test]
        fn orientation_is_antisymmetric(a in (-1000i64..1000, -1000i64..1000),
                                        b in (-1000i64..1000, -1000i64..1000),
                                        c in (-1000i64..1000, -1000i64..1000)) {
            let (a, b, c) = (Point::from(a), Point::from(b), Point::from(c));
            let o = orientation(a, b, c);
            prop_assert_eq!(orientation(b, a, c), o.reversed());
            prop_assert_eq!(orientation(a, c, b), o.reversed());
            prop_assert_eq!(orientation(c, b, a), o.reversed());
            prop_assert_eq!(orientation(b, c, a), o);
        }

        #[test]
        fn crossings_equal_convex_quadruples(p in general_position_points(10)) {
            let set = PointSet::new(p.clone()).unwrap();
            prop_assert_eq!(enumerate_crossings(&set).len(), convex_quadruples(&p));
        }

        #[test]
        fn crossing_is_symmetric(p in general_position_points(7)) {
            let set = PointSet::new(p).unwrap();
            let segs: Vec<Segment> = set.segments().collect();
            for &s in &segs {
                for &t in &segs {
                    if !s.shares_endpoint(t) {
                        prop_assert_eq!(segments_cross(s, t, &set).unwrap(), segments_cross(t, s, &set).unwrap());
                    }
                }
            }
        }

        #[test]
        fn translation_and_scaling_preserve_predicates(p in general_position_points(7),
                                                       dx in -500i64..500, dy in -500i64..500,
                                                       scale in 1i64..50) {
            let set = PointSet::new(p.clone()).unwrap();
            let moved = PointSet::new(p.iter().map(|q| Point::new(q.x * scale + dx, q.y * scale + dy)).collect()).unwrap();
            prop_assert_eq!(set.order_type(), moved.order_type());
            prop_assert_eq!(enumerate_crossings(&set), enumerate_crossings(&moved));
        }
    }
}
