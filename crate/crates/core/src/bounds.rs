//! Closed-form sufficient conditions for nonpositive intercommunity curvature.
//!
//! For communities of sizes `m` and `n` joined by `k` edges, every
//! intercommunity edge has `kappa <= 0` as long as
//! `k^2 + m k - (m - 1)(2n - 1) <= 0`, i.e. `k` is at most the positive root
//! `(-m + sqrt(m^2 + 4(m - 1)(2n - 1))) / 2`.
//!
//! The inequality is not symmetric in `m` and `n`. [`bound_holds`] requires
//! it in both orientations so the verdict never depends on labelling.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Positive root of `k^2 + m k - (m - 1)(2n - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    /// Floating-point value of the root.
    pub value: f64,
    /// Largest integer `k` at or below the root, computed without rounding.
    pub floor: u64,
    /// The root itself when the discriminant is a perfect square.
    pub exact: Option<BigRational>,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

fn discriminant(m: u64, n: u64) -> u128 {
    let (m, n) = (u128::from(m), u128::from(n));
    m * m + 4 * (m - 1) * (2 * n - 1)
}

/// Theorem threshold for sizes `(m, n)`; both must be positive.
pub fn threshold(m: u64, n: u64) -> Result<Threshold> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidSize(
            "community sizes must be positive".into(),
        ));
    }
    let disc = discriminant(m, n);
    let root = disc.sqrt();
    let m128 = u128::from(m);
    // root >= m because the discriminant is at least m^2.
    let floor = ((root - m128) / 2) as u64;
    let exact = (root * root == disc)
        .then(|| BigRational::new(BigInt::from(root) - BigInt::from(m), BigInt::from(2)));
    let value = ((disc as f64).sqrt() - m as f64) / 2.0;
    Ok(Threshold {
        value,
        floor,
        exact,
    })
}

/// Sign of `k^2 + m k - (m - 1)(2n - 1)`; nonpositive means `k` is covered.
pub fn quadratic(m: u64, n: u64, k: u64) -> i128 {
    let (m, n, k) = (i128::from(m), i128::from(n), i128::from(k));
    k * k + m * k - (m - 1) * (2 * n - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Guaranteed,
    NotGuaranteed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Guaranteed => "GUARANTEED",
            Verdict::NotGuaranteed => "NOT_GUARANTEED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether `k` intercommunity edges are few enough to force `kappa <= 0`
/// on every one of them.
///
/// `k` counts the edges between the two communities plus every edge from
/// either of them into any further community. With only two communities it
/// is just the number of intercommunity edges.
pub fn bound_holds(m: u64, n: u64, k: u64) -> Result<Verdict> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidSize(
            "community sizes must be positive".into(),
        ));
    }
    Ok(if quadratic(m, n, k) <= 0 && quadratic(n, m, k) <= 0 {
        Verdict::Guaranteed
    } else {
        Verdict::NotGuaranteed
    })
}

/// Largest `k` for which [`bound_holds`] answers `Guaranteed`.
pub fn max_guaranteed_k(m: u64, n: u64) -> Result<u64> {
    Ok(threshold(m, n)?.floor.min(threshold(n, m)?.floor))
}

/// `min(sizes) - 1`, the simpler sufficient bound for any number of
/// communities.
pub fn min_community_bound(sizes: &[u64]) -> Result<u64> {
    let smallest = *sizes.iter().min().ok_or(Error::EmptyInput)?;
    if smallest == 0 {
        return Err(Error::InvalidSize(
            "community sizes must be positive".into(),
        ));
    }
    Ok(smallest - 1)
}

pub const BOUND_CSV_HEADER: &str = "m,n,k,threshold,threshold_swapped,max_k,verdict";

/// One CSV row describing the bound for `(m, n, k)`.
pub fn bound_csv_row(m: u64, n: u64, k: u64) -> Result<String> {
    let t = threshold(m, n)?;
    let s = threshold(n, m)?;
    let verdict = bound_holds(m, n, k)?;
    Ok(format!(
        "{m},{n},{k},{t},{s},{},{verdict}",
        t.floor.min(s.floor)
    ))
}
