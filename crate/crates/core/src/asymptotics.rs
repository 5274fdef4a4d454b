//! Closed forms for the crossing count of the iterated doubling construction.
//!
//! Every quantity that grows with the number of doublings `t` is stored as an
//! exponential polynomial `Σ_e a_e 2^{e t}` with `e ∈ 0..=4` and exact
//! rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coloring::count_monochromatic;
use crate::doubling::{local_offsets, CrossingClasses, Details, DoublingInstance, FirstTarget, OffsetPair, SideCounts};
use crate::error::{Error, Result};
use crate::geom::Side;

pub type Rational = BigRational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::from(1) << e)
}

/// Coefficients of `2^{4t}, 2^{3t}, 2^{2t}, 2^t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermCoeffs {
    pub c4: Rational,
    pub c3: Rational,
    pub c2: Rational,
    pub c1: Rational,
}

impl TermCoeffs {
    pub fn evaluate(&self, t: u32) -> Rational {
        &self.c4 * pow2(4 * t) + &self.c3 * pow2(3 * t) + &self.c2 * pow2(2 * t) + &self.c1 * pow2(t)
    }

    pub fn sum(&self) -> Rational {
        &self.c4 + &self.c3 + &self.c2 + &self.c1
    }
}

// [2^{4t}, 2^{3t}, 2^{2t}, 2^t] x [1, x, x^2]
type Table = [[(i64, i64); 3]; 4];

const Z: (i64, i64) = (0, 1);

const A_TABLE: Table = [[Z, (-3, 28), (1, 24)], [Z, Z, Z], [Z, Z, (-1, 24)], [Z, (3, 28), Z]];

const B_TABLES: [Table; 4] = [
    // (0,0)
    [[Z, (-1, 24), (1, 16)], [Z, Z, (-1, 16)], [Z, (1, 24), Z], [Z, Z, Z]],
    // (0,1) and (1,0)
    [[(1, 336), (-1, 48), (1, 16)], [(-1, 48), (-1, 16), (-1, 16)], [(1, 24), (1, 12), Z], [(-1, 42), Z, Z]],
    // (1,1)
    [[(1, 112), Z, (1, 16)], [(-1, 16), (-1, 8), (-1, 16)], [(1, 8), (1, 8), Z], [(-1, 14), Z, Z]],
    // (2,1)
    [[(3, 112), (1, 48), (1, 16)], [(-7, 48), (-3, 16), (-1, 16)], [(1, 4), (1, 6), Z], [(-11, 84), Z, Z]],
];

const C_TABLES: [Table; 4] = [
    [[Z, (1, 12), Z], [Z, Z, Z], [Z, (-1, 12), Z], [Z, Z, Z]],
    [[(1, 168), (1, 12), Z], [Z, Z, Z], [(-1, 24), (-1, 12), Z], [(1, 28), Z, Z]],
    [[(1, 84), (1, 12), Z], [Z, Z, Z], [(-1, 12), (-1, 12), Z], [(1, 14), Z, Z]],
    [[(1, 56), (1, 12), Z], [Z, Z, Z], [(-1, 8), (-1, 12), Z], [(3, 28), Z, Z]],
];

fn table_index(o: OffsetPair) -> usize {
    match (o.o1(), o.o2()) {
        (0, 0) => 0,
        (0, 1) | (1, 0) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

/// Coefficient polynomials of one table row, as `[1, x, x^2]`.
fn row(table: &Table, r: usize) -> [Rational; 3] {
    table[r].map(|(n, d)| rat(n, d))
}

fn eval_row(table: &Table, r: usize, x: &Rational) -> Rational {
    let [a, b, c] = row(table, r);
    a + b * x + c * x * x
}

fn term_from(table: &Table, x: i64) -> TermCoeffs {
    let x = int(x);
    TermCoeffs {
        c4: eval_row(table, 0, &x),
        c3: eval_row(table, 1, &x),
        c2: eval_row(table, 2, &x),
        c1: eval_row(table, 3, &x),
    }
}

/// `A(x) = Σ_{i<t} 16^{t-i-1} (C(2^i x, 2) - 2^i x)`.
pub fn term_a(x: i64) -> TermCoeffs {
    term_from(&A_TABLE, x)
}

/// `B_o(x) = Σ_{i<t} 16^{t-i-1} Σ_j C(f_o(x, i, j), 2)`.
pub fn term_b(o: OffsetPair, x: i64) -> TermCoeffs {
    term_from(&B_TABLES[table_index(o)], x)
}

/// `C_o(x) = Σ_{i<t} 16^{t-i-1} Σ_j f_o(x, i, j)`.
pub fn term_c(o: OffsetPair, x: i64) -> TermCoeffs {
    term_from(&C_TABLES[table_index(o)], x)
}

/// Side count at `p^i_j` (1-based `j`) when every ancestor grows by `o`.
pub fn f_closed(o: OffsetPair, x: i64, i: u32, j: u64) -> Result<i64> {
    if i > 40 {
        return Err(Error::OutOfRange(format!("level {i}")));
    }
    let width = 1u64 << i;
    if j == 0 || j > width {
        return Err(Error::OutOfRange(format!("position {j} at level {i} (must be 1..={width})")));
    }
    let (w, j) = (width as i64, j as i64);
    x.checked_mul(w)
        .and_then(|v| v.checked_add(o.o1() * (w - j) + o.o2() * (j - 1)))
        .ok_or_else(|| Error::TooLarge("side count overflows i64".into()))
}

/// `a_0 + a_1 2^t + ... + a_4 2^{4t}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpPoly([Rational; 5]);

impl Default for ExpPoly {
    fn default() -> Self {
        ExpPoly(std::array::from_fn(|_| Rational::zero()))
    }
}

impl ExpPoly {
    pub fn coeff(&self, e: usize) -> &Rational {
        &self.0[e]
    }

    pub fn evaluate(&self, t: u32) -> Rational {
        (0..5).map(|e| &self.0[e] * pow2(e as u32 * t)).sum()
    }

    fn add_term(&mut self, c: &TermCoeffs, scale: &Rational) {
        self.0[4] += &c.c4 * scale;
        self.0[3] += &c.c3 * scale;
        self.0[2] += &c.c2 * scale;
        self.0[1] += &c.c1 * scale;
    }

    fn add(&mut self, other: &ExpPoly) {
        for e in 0..5 {
            self.0[e] += &other.0[e];
        }
    }

    /// Adds `Σ_{i<t} 2^{e(t-1-i)} · (u_0 + u_1 2^i + u_2 4^i)`.
    fn add_level_sum(&mut self, e: usize, poly: &[Rational; 3]) -> Result<()> {
        for (m, a) in poly.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if m == e {
                return Err(Error::Invariant(format!("resonant level sum at exponent {e}")));
            }
            // Σ_{i<t} 2^{e(t-1-i)} 2^{m i} = (2^{e t} - 2^{m t}) / (2^e - 2^m)
            let denom = int((1i64 << e) - (1i64 << m));
            let c = a / denom;
            self.0[e] += &c;
            self.0[m] -= &c;
        }
        Ok(())
    }
}

/// Everything about one root vertex `p` the iterated construction depends on:
/// its side counts, the color of its matching edge and its details.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexProfile {
    counts: Vec<[i64; 2]>,
    matching_color: u32,
    details: Details,
}

/// Matching color of the first child of a node.
fn first_child_state(details: &Details, state: u32) -> u32 {
    details.first_child_color(state)
}

impl VertexProfile {
    pub fn new(counts: &SideCounts, matching_color: u32, details: Details) -> Result<Self> {
        let k = counts.k();
        if matching_color == 0 || matching_color > k || details.sibling_color == 0 || details.sibling_color > k {
            return Err(Error::OutOfRange(format!("color outside 1..={k}")));
        }
        let counts = (1..=k).map(|c| Side::BOTH.map(|d| counts.get(c, d) as i64)).collect();
        Ok(VertexProfile { counts, matching_color, details })
    }

    pub fn of_vertex(inst: &DoublingInstance<'_>, p: usize) -> Result<Self> {
        Self::new(&inst.side_counts(p), inst.matching_color(p), inst.details[p])
    }

    pub fn k(&self) -> u32 {
        self.counts.len() as u32
    }

    /// Whether left descendants switch to the sibling color for their matching edge.
    pub fn is_two_state(&self) -> bool {
        self.details.first == FirstTarget::Sibling && self.details.sibling_color != self.matching_color
    }

    fn offsets(&self, state: u32) -> Vec<[OffsetPair; 2]> {
        local_offsets(&self.details, state, self.k())
    }

    /// Side counts and matching color of descendant `p^i_j` (1-based `j`).
    pub fn node(&self, i: u32, j: u64) -> Result<(Vec<[i64; 2]>, u32)> {
        if i > 40 || j == 0 || j > 1u64 << i {
            return Err(Error::OutOfRange(format!("node ({i}, {j})")));
        }
        let a = self.matching_color;
        let oa = self.offsets(a);
        let map = |f: &dyn Fn(usize, usize) -> Result<i64>| -> Result<Vec<[i64; 2]>> {
            (0..self.counts.len()).map(|c| Ok([f(c, 0)?, f(c, 1)?])).collect()
        };
        let leading = (!((j - 1) << (64 - i.max(1)))).leading_zeros().min(i);
        if !self.is_two_state() || leading == i {
            let counts = map(&|c, d| f_closed(oa[c][d], self.counts[c][d], i, j))?;
            let state = if self.is_two_state() { a } else { self.uniform_state() };
            return Ok((counts, state));
        }
        // `leading` second-child steps along the spine, then one first-child step into a uniform subtree
        let b = self.details.sibling_color;
        let ob = self.offsets(b);
        let spine = 1u64 << leading;
        let rel = i - leading - 1;
        let rel_j = ((j - 1) & ((1u64 << rel) - 1)) + 1;
        let counts = map(&|c, d| {
            let s = f_closed(oa[c][d], self.counts[c][d], leading, spine)?;
            f_closed(ob[c][d], 2 * s + oa[c][d].o1(), rel, rel_j)
        })?;
        Ok((counts, b))
    }

    fn uniform_state(&self) -> u32 {
        first_child_state(&self.details, self.matching_color)
    }

    /// Contribution of this vertex's subtree to `cr_k(P_t)`, excluding the
    /// global `16^t cr_k(P_0)` and `A(|P_0|)` parts.
    pub fn contribution(&self) -> Result<ExpPoly> {
        self.contribution_over(|_| true, false)
    }

    /// Sum over the side counts of colors accepted by `keep` only; with
    /// `leading_only` just the `2^{4t}` coefficient is exact.
    fn contribution_over(&self, keep: impl Fn(u32) -> bool, leading_only: bool) -> Result<ExpPoly> {
        let rows = if leading_only { 1 } else { 4 };
        let mut out = ExpPoly::default();
        let a = self.matching_color as usize - 1;
        let oa = self.offsets(self.matching_color);
        let (four, two) = (int(4), int(2));
        if !self.is_two_state() {
            for (c, sides) in self.counts.iter().enumerate() {
                if !keep(c as u32 + 1) {
                    continue;
                }
                for d in 0..2 {
                    out.add_term(&term_b(oa[c][d], sides[d]), &four);
                    if c == a {
                        out.add_term(&term_c(oa[c][d], sides[d]), &two);
                    }
                }
            }
            return Ok(out);
        }
        let b = self.details.sibling_color as usize - 1;
        let ob = self.offsets(self.details.sibling_color);
        for (c, sides) in self.counts.iter().enumerate() {
            if !keep(c as u32 + 1) {
                continue;
            }
            for d in 0..2 {
                let (o1, o2) = (oa[c][d].o1(), oa[c][d].o2());
                // spine: s_i = (x + o2) 2^i - o2
                let (p, q) = (int(sides[d] + o2), int(-o2));
                let half = rat(1, 2);
                let mut spine = [
                    (&q * &q - &q) * &half * &four,
                    (int(2) * &p * &q - &p) * &half * &four,
                    &p * &p * &half * &four,
                ];
                if c == a {
                    spine[0] += &q * &two;
                    spine[1] += &p * &two;
                }
                out.add_level_sum(4, &spine)?;
                // subtree rooted at the first child of spine node i, depth t-1-i:
                // y_i = 2(x + o2) 2^i + o1 - 2 o2
                let (p, q) = (int(2 * (sides[d] + o2)), int(o1 - 2 * o2));
                let mut tables = vec![(&B_TABLES[table_index(ob[c][d])], four.clone())];
                if c == b {
                    tables.push((&C_TABLES[table_index(ob[c][d])], two.clone()));
                }
                for (table, w) in tables {
                    for r in 0..rows {
                        let [c0, c1, c2] = row(table, r);
                        let poly = [
                            (&c0 + &c1 * &q + &c2 * &q * &q) * &w,
                            (&c1 * &p + int(2) * &c2 * &p * &q) * &w,
                            (&c2 * &p * &p) * &w,
                        ];
                        out.add_level_sum(4 - r, &poly)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The `2^{4t}` coefficient of [`Self::contribution`].
    pub fn alpha(&self) -> Result<Rational> {
        Ok(self.contribution_over(|_| true, true)?.0[4].clone())
    }

    /// The part of [`Self::alpha`] coming from the side counts of `colors`.
    pub fn alpha_restricted(&self, colors: &[u32]) -> Result<Rational> {
        Ok(self.contribution_over(|c| colors.contains(&c), true)?.0[4].clone())
    }
}

/// Local α at a vertex with the given side counts (toward its matching
/// target), matching-edge color and details.
pub fn local_alpha(counts: &SideCounts, matching_color: u32, details: Details) -> Result<Rational> {
    VertexProfile::new(counts, matching_color, details)?.alpha()
}

/// Leading coefficient of a uniform `B` contribution, `16^t`-part of `4 B_(0,0)(x)`.
pub(crate) fn baseline_alpha(x: i64) -> Rational {
    int(4) * term_b(OffsetPair::ALL[0], x).c4
}

/// `cr_k(P_t) = α 2^{4t} + β 2^{3t} + γ 2^{2t} + δ 2^t + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AsymptoticCoeffs {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    /// Nonzero only when some vertex matches its first child to the sibling
    /// with a sibling color different from its matching color.
    pub constant: Rational,
}

impl AsymptoticCoeffs {
    pub fn from_poly(p: &ExpPoly) -> Self {
        AsymptoticCoeffs {
            alpha: p.0[4].clone(),
            beta: p.0[3].clone(),
            gamma: p.0[2].clone(),
            delta: p.0[1].clone(),
            constant: p.0[0].clone(),
        }
    }

    pub fn evaluate(&self, t: u32) -> Rational {
        &self.alpha * pow2(4 * t) + &self.beta * pow2(3 * t) + &self.gamma * pow2(2 * t) + &self.delta * pow2(t)
            + &self.constant
    }

    pub fn four_term_sum(&self) -> Rational {
        &self.alpha + &self.beta + &self.gamma + &self.delta
    }
}

impl fmt::Display for AsymptoticCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} gamma={} delta={} constant={}",
            self.alpha, self.beta, self.gamma, self.delta, self.constant
        )
    }
}

/// The full exponential polynomial of the construction.
pub fn count_poly(inst: &DoublingInstance<'_>) -> Result<ExpPoly> {
    let n = inst.n();
    if n < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 points, got {n}")));
    }
    let cr = count_monochromatic(inst.points, inst.coloring)?;
    let mut poly = ExpPoly::default();
    poly.0[4] += int(cr as i64);
    poly.add_term(&term_a(n as i64), &Rational::one());
    for p in 0..n {
        poly.add(&VertexProfile::of_vertex(inst, p)?.contribution()?);
    }
    Ok(poly)
}

pub fn coefficients(inst: &DoublingInstance<'_>) -> Result<AsymptoticCoeffs> {
    Ok(AsymptoticCoeffs::from_poly(&count_poly(inst)?))
}

pub const MAX_FORMULA_LEVELS: u32 = 20;

/// Monochromatic crossings after `t` doublings, summed level by level over
/// every descendant's side counts.
pub fn theorem1_count(inst: &DoublingInstance<'_>, t: u32) -> Result<u128> {
    theorem1_count_weighted(inst, t, |t, i| 4 * (t - 1 - i))
}

/// [`theorem1_count`] with the level weight `2^{exponent(t, i)}` replaced;
/// used as a negative control.
#[doc(hidden)]
pub fn theorem1_count_weighted(inst: &DoublingInstance<'_>, t: u32, exponent: impl Fn(u32, u32) -> u32) -> Result<u128> {
    let n = inst.n();
    if t > MAX_FORMULA_LEVELS || (n as u128) << t > 1 << 26 {
        return Err(Error::TooLarge(format!("{n} points after {t} doublings")));
    }
    let overflow = || Error::TooLarge("crossing count overflows u128".into());
    let cr = count_monochromatic(inst.points, inst.coloring)? as u128;
    let mut total = cr.checked_shl(4 * t).filter(|v| v >> (4 * t) == cr).ok_or_else(overflow)?;
    let profiles = (0..n).map(|p| VertexProfile::of_vertex(inst, p)).collect::<Result<Vec<_>>>()?;
    let choose2 = |s: i64| -> u128 {
        let s = s as u128;
        s * s.saturating_sub(1) / 2
    };
    for i in 0..t {
        let mut level: u128 = 0;
        let m = (n as u128) << i;
        level += m * (m - 1) / 2 - m;
        for prof in &profiles {
            for j in 1..=(1u64 << i) {
                let (counts, state) = prof.node(i, j)?;
                if counts.iter().flatten().any(|&s| s < 0) {
                    return Err(Error::Invariant(format!("negative side count at ({i}, {j})")));
                }
                for (c, sides) in counts.iter().enumerate() {
                    level += 4 * (choose2(sides[0]) + choose2(sides[1]));
                    if c + 1 == state as usize {
                        level += 2 * (sides[0] + sides[1]) as u128;
                    }
                }
            }
        }
        let w = exponent(t, i);
        let weighted = level.checked_shl(w).filter(|v| v >> w == level).ok_or_else(overflow)?;
        total = total.checked_add(weighted).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// Crossings the formula attributes to each class when level `i` is split,
/// from the closed-form side counts of that level.
pub fn formula_classes(inst: &DoublingInstance<'_>, i: u32) -> Result<CrossingClasses> {
    let n = inst.n() as u64;
    if i >= MAX_FORMULA_LEVELS {
        return Err(Error::TooLarge(format!("level {i}")));
    }
    let m = n << i;
    let mut out = CrossingClasses { type_i: m * (m - 1) / 2 - m, ..Default::default() };
    for p in 0..inst.n() {
        let prof = VertexProfile::of_vertex(inst, p)?;
        for j in 1..=(1u64 << i) {
            let (counts, state) = prof.node(i, j)?;
            for (c, sides) in counts.iter().enumerate() {
                for s in sides.map(|s| s.max(0) as u64) {
                    out.type_iia += 4 * (s * s.saturating_sub(1) / 2);
                    if c + 1 == state as usize {
                        out.type_iib += 2 * s;
                    }
                }
            }
        }
    }
    let below = theorem1_count(inst, i)?;
    out.type_iii = u64::try_from(16 * below).map_err(|_| Error::TooLarge("crossing count".into()))?;
    Ok(out)
}

/// `24 α / n^4`.
pub fn bound_from_alpha(alpha: &Rational, n: usize) -> Result<Rational> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 points, got {n}")));
    }
    if !alpha.is_positive() {
        return Err(Error::Invariant(format!("alpha must be positive, got {alpha}")));
    }
    let n4 = BigInt::from(n).pow(4);
    Ok(alpha * int(24) / Rational::from_integer(n4))
}

/// Solves for `a_e` in `v_t = Σ_e a_e 2^{e t}` from samples `t = 0..exponents.len()`.
pub fn fit_exponential(values: &[Rational], exponents: &[u32]) -> Result<Vec<Rational>> {
    let m = exponents.len();
    if values.len() < m {
        return Err(Error::OutOfRange(format!("{} samples for {m} unknowns", values.len())));
    }
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|t| {
            let mut r: Vec<Rational> = exponents.iter().map(|&e| pow2(e * t as u32)).collect();
            r.push(values[t].clone());
            r
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| Error::Invariant("singular fitting system".into()))?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot = rows[col].clone();
                for (dst, src) in rows[r].iter_mut().zip(&pivot).skip(col) {
                    *dst -= src * &f;
                }
            }
        }
    }
    Ok(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn predict_exponential(coeffs: &[Rational], exponents: &[u32], t: u32) -> Rational {
    coeffs.iter().zip(exponents).map(|(a, &e)| a * pow2(e * t)).sum()
}

/// Decimal rendering with `digits` significant digits, rounding half to even.
/// Trailing zeros after the decimal point are dropped.
pub fn render_decimal(q: &Rational, digits: usize) -> String {
    assert!(digits >= 1);
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let ten = BigInt::from(10);
    // exponent e with 10^e <= a < 10^{e+1}
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(ten.pow(k as u32))
        } else {
            Rational::new(BigInt::one(), ten.pow((-k) as u32))
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let (fl, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2;
    let mut n = fl;
    if twice > *scaled.denom() || (twice == *scaled.denom() && n.is_odd()) {
        n += 1;
    }
    let mut shift = shift;
    if n.to_string().len() > digits {
        n /= 10;
        shift -= 1;
    }
    let s = n.to_string();
    let body = if shift <= 0 {
        let mut s = s;
        s.push_str(&"0".repeat((-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        let padded = if s.len() <= shift { format!("{}{}", "0".repeat(shift - s.len() + 1), s) } else { s };
        let (int_part, frac) = padded.split_at(padded.len() - shift);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
