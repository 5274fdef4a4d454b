//! Bound reports and their sanity gates.

use std::fmt;

use num_bigint::BigInt;

use crate::asymptotics::{render_decimal, AsymptoticCoeffs, Rational};
use crate::error::{Error, Result};

pub const DIGITS: usize = 17;

/// Best known lower bound on the uncolored constant.
pub fn rectilinear_lower_bound() -> Rational {
    Rational::new(BigInt::from(37997), BigInt::from(100000))
}

/// `3 / (29 k^2)`.
pub fn lower_bound(k: u32) -> Rational {
    Rational::new(BigInt::from(3), BigInt::from(29) * BigInt::from(k).pow(2))
}

/// `2/k^2 - 1/k^3`, from convex drawings.
pub fn book_bound(k: u32) -> Rational {
    let k = BigInt::from(k);
    Rational::new(BigInt::from(2), k.pow(2)) - Rational::new(BigInt::from(1), k.pow(3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingSource {
    Optimal,
    Given,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub k: u32,
    pub n: usize,
    pub total_crossings: u64,
    pub monochromatic: u64,
    pub coeffs: AsymptoticCoeffs,
    pub bound: Rational,
    pub source: MatchingSource,
}

impl BoundReport {
    pub fn book_bound(&self) -> Rational {
        book_bound(self.k)
    }

    pub fn lower_bound(&self) -> Rational {
        lower_bound(self.k)
    }

    /// `book / bound`; above 1 when the bound improves on convex drawings.
    pub fn improvement_factor(&self) -> Rational {
        self.book_bound() / &self.bound
    }

    pub fn beats_book_bound(&self) -> bool {
        self.bound < self.book_bound()
    }

    /// Fails when the bound is below a proven lower bound, which can only
    /// happen through a bug.
    pub fn check_gates(&self) -> Result<()> {
        if self.bound < self.lower_bound() {
            return Err(Error::Invariant(format!(
                "bound {} is below the lower bound 3/(29k^2) = {}",
                render_decimal(&self.bound, DIGITS),
                render_decimal(&self.lower_bound(), DIGITS)
            )));
        }
        if self.k == 1 && self.bound < rectilinear_lower_bound() {
            return Err(Error::Invariant(format!(
                "k = 1 bound {} is below 0.37997",
                render_decimal(&self.bound, DIGITS)
            )));
        }
        Ok(())
    }
}

fn row(f: &mut fmt::Formatter<'_>, name: &str, q: &Rational) -> fmt::Result {
    writeln!(f, "{name:<18} {:<24} {q}", render_decimal(q, DIGITS))
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k                  {}", self.k)?;
        writeln!(f, "n                  {}", self.n)?;
        writeln!(f, "crossings          {}", self.total_crossings)?;
        writeln!(f, "monochromatic      {}", self.monochromatic)?;
        let src = match self.source {
            MatchingSource::Optimal => "optimal",
            MatchingSource::Given => "given",
        };
        writeln!(f, "matching           {src}")?;
        row(f, "alpha", &self.coeffs.alpha)?;
        row(f, "beta", &self.coeffs.beta)?;
        row(f, "gamma", &self.coeffs.gamma)?;
        row(f, "delta", &self.coeffs.delta)?;
        row(f, "constant", &self.coeffs.constant)?;
        row(f, "bound", &self.bound)?;
        row(f, "book bound", &self.book_bound())?;
        row(f, "lower bound", &self.lower_bound())?;
        row(f, "improvement", &self.improvement_factor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_bounds() {
        assert_eq!(render_decimal(&book_bound(2), DIGITS), "0.375");
        assert_eq!(book_bound(1), Rational::from_integer(BigInt::from(1)));
        assert_eq!(lower_bound(1), Rational::new(BigInt::from(3), BigInt::from(29)));
    }
}
