#![allow(dead_code)]

use kcolor::asymptotics::{f_closed, Rational};
use kcolor::coloring::{random_point_set, EdgeColoring};
use kcolor::doubling::{Details, Matching, OffsetPair};
use kcolor::geom::{num_pairs, PointSet};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Owned {
    pub points: PointSet,
    pub coloring: EdgeColoring,
    pub matching: Matching,
    pub details: Vec<Details>,
}

impl Owned {
    pub fn view(&self) -> kcolor::doubling::DoublingInstance<'_> {
        kcolor::doubling::DoublingInstance::new(&self.points, &self.coloring, &self.matching, &self.details).unwrap()
    }
}

pub fn random_matching(n: usize, rng: &mut ChaCha8Rng) -> Matching {
    loop {
        let t: Vec<usize> = (0..n)
            .map(|p| {
                let q = rng.random_range(0..n - 1);
                if q >= p {
                    q + 1
                } else {
                    q
                }
            })
            .collect();
        if let Ok(m) = Matching::new(t) {
            return m;
        }
    }
}

pub fn random_coloring(n: usize, k: u32, rng: &mut ChaCha8Rng) -> EdgeColoring {
    EdgeColoring::new(n, k, (0..num_pairs(n)).map(|_| rng.random_range(1..=k)).collect()).unwrap()
}

pub fn random_details(n: usize, k: u32, rng: &mut ChaCha8Rng) -> Vec<Details> {
    let all: Vec<Details> = Details::all(k).collect();
    (0..n).map(|_| all[rng.random_range(0..all.len())]).collect()
}

pub fn random_instance(n: usize, k: u32, seed: u64) -> Owned {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_point_set(n, 64, seed ^ 0x9e37).unwrap();
    let coloring = random_coloring(n, k, &mut rng);
    let matching = random_matching(n, &mut rng);
    let details = random_details(n, k, &mut rng);
    Owned { points, coloring, matching, details }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::from(1) << e)
}

fn choose2(s: i64) -> Rational {
    int(s * (s - 1) / 2)
}

pub fn direct_a(x: i64, t: u32) -> Rational {
    (0..t).map(|i| pow2(4 * (t - i - 1)) * (choose2(x << i) - int(x << i))).sum()
}

fn level_sum(o: OffsetPair, x: i64, t: u32, f: impl Fn(i64) -> Rational) -> Rational {
    let mut total = Rational::zero();
    for i in 0..t {
        let w = pow2(4 * (t - i - 1));
        for j in 1..=(1u64 << i) {
            total += &w * f(f_closed(o, x, i, j).unwrap());
        }
    }
    total
}

pub fn direct_b(o: OffsetPair, x: i64, t: u32) -> Rational {
    level_sum(o, x, t, choose2)
}

pub fn direct_c(o: OffsetPair, x: i64, t: u32) -> Rational {
    level_sum(o, x, t, int)
}

/// Side count at `p^i_j` by walking the recurrence `x -> 2x + o` from the root.
pub fn recurrence(o: OffsetPair, x: i64, i: u32, j: u64) -> i64 {
    let mut v = x;
    for bit in (0..i).rev() {
        let second = ((j - 1) >> bit) & 1 == 1;
        v = 2 * v + if second { o.o2() } else { o.o1() };
    }
    v
}
