//! The four top-level commands behind the `kcolor` binary.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::asymptotics::{
    coefficients, count_poly, fit_exponential, formula_classes, predict_exponential, theorem1_count, Rational,
};
use crate::coloring::{alternate_search, count_monochromatic, random_point_set, SearchConfig, SearchOutcome};
use crate::doubling::{classify_crossings, double_levels, Details, DoublingInstance, Matching};
use crate::error::{Error, Result};
use crate::geom::enumerate_crossings;
use crate::instance::{Instance, InstanceFile};
use crate::matchopt::{build_weights, optimal_matching};
use crate::report::{BoundReport, MatchingSource};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub k: u32,
    pub total_crossings: u64,
    pub monochromatic: u64,
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n                  {}", self.n)?;
        writeln!(f, "k                  {}", self.k)?;
        writeln!(f, "crossings          {}", self.total_crossings)?;
        writeln!(f, "monochromatic      {}", self.monochromatic)
    }
}

pub fn cmd_count(inst: &Instance) -> Result<CountReport> {
    Ok(CountReport {
        n: inst.n(),
        k: inst.k(),
        total_crossings: enumerate_crossings(&inst.points).len() as u64,
        monochromatic: count_monochromatic(&inst.points, &inst.coloring)?,
    })
}

/// Side of the random starting grid.
pub fn grid_side(n: usize) -> i64 {
    (16 * n as i64).max(64)
}

/// Runs the alternating search from a seeded random point set and returns
/// the best instance (with the seed recorded) and the search trace.
pub fn cmd_search(n: usize, k: u32, cfg: &SearchConfig) -> Result<(InstanceFile, SearchOutcome)> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 points, got {n}")));
    }
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let start = random_point_set(n, grid_side(n), cfg.rng_seed)?;
    let out = alternate_search(&start, k, cfg)?;
    let check = count_monochromatic(&out.points, &out.coloring)?;
    if check != out.monochromatic {
        return Err(Error::Invariant(format!("search reported {} crossings, recount gives {check}", out.monochromatic)));
    }
    let file = InstanceFile {
        k,
        points: out.points.points().to_vec(),
        colors: out.coloring.colors().to_vec(),
        matching: None,
        details: None,
        seed: Some(cfg.rng_seed),
    };
    Ok((file, out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundOutcome {
    pub report: BoundReport,
    pub matching: Matching,
    pub details: Vec<Details>,
}

/// Coefficients and bound, with the optimal matching or the one in the file.
pub fn cmd_bound(inst: &Instance, use_given_matching: bool) -> Result<BoundOutcome> {
    let n = inst.n();
    if n < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 points, got {n}")));
    }
    let (matching, details, source) = if use_given_matching {
        let m = inst.matching.clone().ok_or_else(|| Error::InvalidMatching("instance has no matching".into()))?;
        let d = inst.details.clone().ok_or_else(|| Error::InvalidDetails("instance has no details".into()))?;
        (m, d, MatchingSource::Given)
    } else {
        let w = build_weights(&inst.points, &inst.coloring)?;
        let best = optimal_matching(&w)?;
        let view = DoublingInstance::new(&inst.points, &inst.coloring, &best.matching, &best.details)?;
        let alpha = coefficients(&view)?.alpha;
        if alpha != best.alpha {
            return Err(Error::Invariant(format!("solver alpha {} differs from recomputed {alpha}", best.alpha)));
        }
        (best.matching, best.details, MatchingSource::Optimal)
    };
    let view = DoublingInstance::new(&inst.points, &inst.coloring, &matching, &details)?;
    let coeffs = coefficients(&view)?;
    let bound = crate::asymptotics::bound_from_alpha(&coeffs.alpha, n)?;
    let report = BoundReport {
        k: inst.k(),
        n,
        total_crossings: enumerate_crossings(&inst.points).len() as u64,
        monochromatic: count_monochromatic(&inst.points, &inst.coloring)?,
        coeffs,
        bound,
        source,
    };
    report.check_gates()?;
    Ok(BoundOutcome { report, matching, details })
}

pub const MAX_VERIFY_POINTS: usize = 8;
pub const MAX_VERIFY_LEVELS: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckLine>,
    /// Informational lines that do not affect the outcome.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "note {n}")?;
        }
        writeln!(f, "{}", if self.passed() { "verify: pass" } else { "verify: FAIL" })
    }
}

fn big(v: u128) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Explicit construction against the level-sum formula for `t = 0..=t_max`,
/// plus the exponential-polynomial structure of the count. Uses the file's
/// matching and details, or the optimal ones when absent.
pub fn cmd_verify(inst: &Instance, t_max: u32) -> Result<VerifyReport> {
    let n = inst.n();
    if !(3..=MAX_VERIFY_POINTS).contains(&n) {
        return Err(Error::TooLarge(format!("verify needs 3..={MAX_VERIFY_POINTS} points, got {n}")));
    }
    if t_max > MAX_VERIFY_LEVELS {
        return Err(Error::TooLarge(format!("verify supports t_max <= {MAX_VERIFY_LEVELS}")));
    }
    let mut report = VerifyReport::default();
    let (matching, details) = match (&inst.matching, &inst.details) {
        (Some(m), Some(d)) => (m.clone(), d.clone()),
        _ => {
            let best = optimal_matching(&build_weights(&inst.points, &inst.coloring)?)?;
            report.notes.push("matching and details taken from the optimal matching".into());
            (best.matching, best.details)
        }
    };
    let view = DoublingInstance::new(&inst.points, &inst.coloring, &matching, &details)?;

    let levels = double_levels(&view, t_max)?;
    for (t, level) in levels.iter().enumerate() {
        let explicit = level.monochromatic() as u128;
        let formula = theorem1_count(&view, t as u32)?;
        let mut detail = format!("explicit {explicit}, formula {formula}");
        if explicit != formula && t > 0 {
            let got = classify_crossings(&levels[t - 1], level);
            let want = formula_classes(&view, t as u32 - 1)?;
            if let Some(((name, g), (_, w))) =
                got.named().into_iter().zip(want.named()).find(|((_, g), (_, w))| g != w)
            {
                detail.push_str(&format!("; first differing class {name}: explicit {g}, predicted {w}"));
            }
        }
        report.push(format!("crossings t={t}"), explicit == formula, detail);
    }

    // the count is an exponential polynomial in 2^t with exponents 4..0
    let poly = count_poly(&view)?;
    let coeffs = coefficients(&view)?;
    let samples: Vec<Rational> = (0..7).map(|t| theorem1_count(&view, t).map(big)).collect::<Result<_>>()?;
    let exps = [4, 3, 2, 1, 0];
    let fit = fit_exponential(&samples[..5], &exps)?;
    let fit_ok = (5..7).all(|t| predict_exponential(&fit, &exps, t as u32) == samples[t]);
    let closed_ok = fit == [&coeffs.alpha, &coeffs.beta, &coeffs.gamma, &coeffs.delta, &coeffs.constant].map(Clone::clone);
    report.push("exponential fit", fit_ok && closed_ok, format!("t=0..4 predicts t=5,6: {fit_ok}; equals closed form: {closed_ok}"));
    let cr = big(count_monochromatic(&inst.points, &inst.coloring)? as u128);
    let sum = &coeffs.four_term_sum() + &coeffs.constant;
    report.push("coefficient sum", sum == cr && poly.evaluate(0) == cr, format!("{sum} vs cr {cr}"));
    report.push(
        "coefficient signs",
        coeffs.alpha.is_positive() && coeffs.beta.is_negative(),
        format!("alpha {} beta {}", coeffs.alpha, coeffs.beta),
    );
    let four = fit_exponential(&samples[..4], &exps[..4])?;
    let four_ok = predict_exponential(&four, &exps[..4], 4) == samples[4];
    report.notes.push(format!(
        "four-term fit at t=0..3 predicts t=4: {four_ok} (constant term {})",
        coeffs.constant
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceFile;

    const SQUARE: &str = "kcolor-instance 1\nk 2\nn 4\npoint 0 0\npoint 4 0\npoint 4 4\npoint 0 4\ncolors 1 1 1 1 2 1\n";

    #[test]
    fn count_square() {
        let inst = InstanceFile::parse(SQUARE).unwrap().validate().unwrap();
        let r = cmd_count(&inst).unwrap();
        assert_eq!((r.total_crossings, r.monochromatic), (1, 0));
        let one = InstanceFile::parse(&SQUARE.replace("colors 1 1 1 1 2 1", "colors 1 1 1 1 1 1").replace("k 2", "k 1"))
            .unwrap()
            .validate()
            .unwrap();
        assert_eq!(cmd_count(&one).unwrap().monochromatic, 1);
    }

    #[test]
    fn search_many_colors_is_crossing_free() {
        let cfg = SearchConfig { restarts: 2, max_stale_iterations: 1, perturbation_radius: 2, rng_seed: 3 };
        let (file, out) = cmd_search(6, 15, &cfg).unwrap();
        assert_eq!(out.monochromatic, 0);
        assert_eq!(file.seed, Some(3));
    }

    #[test]
    fn verify_optimal_square() {
        let inst = InstanceFile::parse(SQUARE).unwrap().validate().unwrap();
        let r = cmd_verify(&inst, 2).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn given_matching_never_beats_optimal() {
        let text = format!("{SQUARE}matching 1 2 3 0\ndetails 1:L:R 1:S:L 2:R:R 1:L:L\n");
        let inst = InstanceFile::parse(&text).unwrap().validate().unwrap();
        let given = cmd_bound(&inst, true).unwrap();
        let best = cmd_bound(&inst, false).unwrap();
        assert!(best.report.bound <= given.report.bound);
    }
}
