use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation rule for the infinite sums.
///
/// A sum stops once `|term| <= rel_tol * |running sum|` holds for three
/// consecutive terms. Hitting `max_terms` first is a convergence error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 500,
        }
    }
}

const CONSECUTIVE_SMALL: usize = 3;

/// Running sum that applies the [`SeriesConfig`] stopping rule.
#[derive(Debug, Clone)]
pub(crate) struct TruncatedSum {
    cfg: SeriesConfig,
    sum: f64,
    terms: usize,
    small_run: usize,
}

impl TruncatedSum {
    pub fn new(cfg: SeriesConfig) -> Self {
        Self {
            cfg,
            sum: 0.0,
            terms: 0,
            small_run: 0,
        }
    }

    /// Adds a term. `Ok(true)` means the series has converged.
    pub fn push(&mut self, term: f64) -> Result<bool> {
        self.sum += term;
        self.terms += 1;
        if term.abs() <= self.cfg.rel_tol * self.sum.abs() {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        if self.small_run >= CONSECUTIVE_SMALL {
            return Ok(true);
        }
        if self.terms >= self.cfg.max_terms {
            return Err(Error::Convergence {
                partial_sum: self.sum,
                terms: self.terms,
            });
        }
        Ok(false)
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_stops() {
        let mut s = TruncatedSum::new(SeriesConfig::default());
        let mut term = 1.0;
        while !s.push(term).unwrap() {
            term *= 0.5;
        }
        assert!((s.sum() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn cap_is_a_convergence_error() {
        let mut s = TruncatedSum::new(SeriesConfig {
            rel_tol: 1e-14,
            max_terms: 10,
        });
        let mut out = Ok(false);
        for _ in 0..10 {
            out = s.push(1.0);
        }
        assert!(matches!(out, Err(Error::Convergence { terms: 10, .. })));
    }

    #[test]
    fn all_zero_series_converges_to_zero() {
        let mut s = TruncatedSum::new(SeriesConfig::default());
        assert!(!s.push(0.0).unwrap());
        assert!(!s.push(0.0).unwrap());
        assert!(s.push(0.0).unwrap());
        assert_eq!(s.sum(), 0.0);
    }
}
