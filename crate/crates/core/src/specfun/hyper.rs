//! Gauss hypergeometric function on the real half-line z < 1.

use crate::error::{domain, Result};
use crate::specfun::series::{SeriesConfig, TruncatedSum};

/// Term cap for the hypergeometric series; arguments near 1 need thousands.
pub const HYPERGEOMETRIC_SERIES: SeriesConfig = SeriesConfig {
    rel_tol: 1e-16,
    max_terms: 200_000,
};

/// 2F1(a, b; c; z) for real z < 1.
///
/// Sums the power series directly for `0 <= z < 1`; negative arguments are
/// first mapped into `(0, 1)` with the Pfaff transformation.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_with(a, b, c, z, HYPERGEOMETRIC_SERIES)
}

pub fn gauss_2f1_with(a: f64, b: f64, c: f64, z: f64, cfg: SeriesConfig) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(domain("2F1 parameters must be finite"));
    }
    if c <= 0.0 && c == c.round() {
        return Err(domain(format!("2F1 requires c not a non-positive integer, got {c}")));
    }
    if !(z < 1.0) {
        return Err(domain(format!("2F1 requires z < 1, got {z}")));
    }
    if z < 0.0 {
        // Pfaff: (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
        let w = z / (z - 1.0);
        return Ok((1.0 - z).powf(-a) * series(a, c - b, c, w, cfg)?);
    }
    series(a, b, c, z, cfg)
}

fn series(a: f64, b: f64, c: f64, z: f64, cfg: SeriesConfig) -> Result<f64> {
    let mut sum = TruncatedSum::new(cfg);
    let mut term = 1.0;
    let mut n = 0.0;
    loop {
        if sum.push(term)? {
            return Ok(sum.sum());
        }
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        n += 1.0;
    }
}

/// Natural log of 2F1(a, b; c; z) for `a, b, c > 0` and `0 <= z < 1`.
///
/// Every series term is positive there, so the sum is carried with a
/// running exponent and stays finite where the function itself overflows.
pub fn ln_gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0 && a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(domain("ln 2F1 needs finite positive a, b, c"));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("ln 2F1 needs 0 <= z < 1, got {z}")));
    }
    let cfg = HYPERGEOMETRIC_SERIES;
    let mut ln_term = 0.0f64;
    let mut shift = 0.0f64;
    let mut sum = 1.0f64;
    let mut quiet = 0;
    for k in 1..cfg.max_terms {
        let n = (k - 1) as f64;
        ln_term += ((a + n) * (b + n) / ((c + n) * (n + 1.0)) * z).ln();
        if ln_term > shift + 300.0 {
            sum *= (shift - ln_term).exp();
            shift = ln_term;
        }
        let term = (ln_term - shift).exp();
        sum += term;
        let next_ratio = (a + n + 1.0) * (b + n + 1.0) / ((c + n + 1.0) * (n + 2.0)) * z;
        if term <= cfg.rel_tol * sum && next_ratio < 1.0 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(shift + sum.ln());
            }
        } else {
            quiet = 0;
        }
    }
    Err(crate::error::Error::Convergence { partial_sum: shift + sum.ln(), terms: cfg.max_terms })
}

/// Partial sums S_0..S_{count-1} and the terms t_0..t_{count-1} of the 2F1 series.
pub fn gauss_2f1_partial_sums(a: f64, b: f64, c: f64, z: f64, count: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(count);
    let mut term = 1.0;
    let mut acc = 0.0;
    for n in 0..count {
        acc += term;
        out.push((acc, term));
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    }
    out
}
