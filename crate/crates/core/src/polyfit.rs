//! Exact polynomial interpolation in `N` with holdout checks.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GlowError, Result};

pub const EVIDENCE_NOTE: &str = "holdout agreement is evidence of polynomiality, not a proof";

/// Rational coefficients, lowest degree first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            match k {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coef}")?;
                    }
                    write!(f, "N")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoldoutCheck {
    pub n: BigInt,
    pub observed: BigRational,
    pub predicted: BigRational,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitReport {
    pub polynomial: Polynomial,
    pub fitted_points: usize,
    pub holdout: Vec<HoldoutCheck>,
    pub note: &'static str,
}

impl FitReport {
    /// All holdout points agree (vacuously true without holdout points).
    pub fn all_match(&self) -> bool {
        self.holdout.iter().all(|h| h.matches)
    }
}

/// Interpolates the first `degree + 1` points exactly and checks the rest.
pub fn polynomial_fit_in_n(points: &[(BigInt, BigRational)], degree: usize) -> Result<FitReport> {
    let mut seen = HashSet::new();
    for (n, _) in points {
        if !seen.insert(n) {
            return Err(GlowError::argument(format!("duplicate N = {n}")));
        }
    }
    let m = degree + 1;
    if points.len() < m {
        return Err(GlowError::argument(format!(
            "degree {degree} needs {m} points, got {}",
            points.len()
        )));
    }
    let xs: Vec<BigRational> = points[..m]
        .iter()
        .map(|(n, _)| BigRational::from_integer(n.clone()))
        .collect();
    // Newton divided differences, then expansion into the monomial basis.
    let mut dd: Vec<BigRational> = points[..m].iter().map(|(_, y)| y.clone()).collect();
    for level in 1..m {
        for k in (level..m).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&xs[k] - &xs[k - level]);
        }
    }
    let mut coeffs = vec![BigRational::zero(); m];
    for k in (0..m).rev() {
        // coeffs ← coeffs·(x − x_k) + dd[k]
        let mut next = vec![BigRational::zero(); m];
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < m {
                next[d + 1] += c;
            }
            next[d] -= c * &xs[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    let polynomial = Polynomial::new(coeffs);
    let holdout = points[m..]
        .iter()
        .map(|(n, y)| {
            let predicted = polynomial.eval(&BigRational::from_integer(n.clone()));
            HoldoutCheck {
                n: n.clone(),
                observed: y.clone(),
                matches: predicted == *y,
                predicted,
            }
        })
        .collect();
    Ok(FitReport {
        polynomial,
        fitted_points: m,
        holdout,
        note: EVIDENCE_NOTE,
    })
}
