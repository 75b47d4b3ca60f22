//! Meijer G-function by numerical Mellin-Barnes integration.
//!
//! With the convention
//!
//! ```text
//! G^{m,n}_{p,q}(z | a; b) = 1/(2 pi i) * integral over L of
//!     prod_{j<=m} Gamma(b_j - t) prod_{j<=n} Gamma(1 - a_j + t)
//!   / (prod_{j>m} Gamma(1 - b_j + t) prod_{j>n} Gamma(a_j - t)) * z^t dt
//! ```
//!
//! the contour L is the vertical line Re t = c with
//! `max_{k<=n}(a_k - 1) < c < min_{j<=m} b_j`. Conjugate symmetry of the
//! integrand for real parameters folds the line onto `[0, half_length]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_generic, Evaluation, QuadratureConfig};
use crate::specfun::contour::golden_min;
use crate::specfun::gamma::ln_gamma_complex;

const MAX_ORDER: usize = 4;
const POLE_EPS: f64 = 1e-12;
// Search half-width when the strip is unbounded on one side.
const SEARCH_REACH: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    m: usize,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl MeijerGSpec {
    /// Builds `G^{m,n}_{p,q}` with `p = a.len()`, `q = b.len()`.
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let (p, q) = (a.len(), b.len());
        if p > MAX_ORDER || q > MAX_ORDER {
            return Err(Error::Spec(format!("orders p={p}, q={q} exceed {MAX_ORDER}")));
        }
        if m > q || n > p {
            return Err(Error::Spec(format!("need m <= q and n <= p, got m={m} n={n} p={p} q={q}")));
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::Spec("parameters must be finite".into()));
        }
        for ak in &a[..n] {
            for bj in &b[..m] {
                let d = ak - bj;
                if d > 0.5 && (d - d.round()).abs() < POLE_EPS {
                    return Err(Error::Spec(format!(
                        "poles of Gamma(b - t) and Gamma(1 - a + t) collide (a - b = {d})"
                    )));
                }
            }
        }
        Ok(Self { m, n, a, b })
    }

    pub fn orders(&self) -> (usize, usize, usize, usize) {
        (self.m, self.n, self.a.len(), self.b.len())
    }

    pub fn a_params(&self) -> &[f64] {
        &self.a
    }

    pub fn b_params(&self) -> &[f64] {
        &self.b
    }

    /// Abscissa of a straight contour separating the two pole families.
    pub fn contour_abscissa(&self) -> Result<f64> {
        let lower = self.a[..self.n].iter().map(|a| a - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let upper = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        if lower >= upper {
            return Err(Error::Spec(format!(
                "no vertical contour separates the poles (need {lower} < c < {upper})"
            )));
        }
        Ok(match (lower.is_finite(), upper.is_finite()) {
            (true, true) => 0.5 * (lower + upper),
            (false, true) => upper - 0.5,
            (true, false) => lower + 0.5,
            (false, false) => 0.0,
        })
    }

    /// Abscissa inside the strip where the real-axis integrand at `z` is
    /// smallest; falls back to [`Self::contour_abscissa`] when the search
    /// meets a non-finite kernel.
    pub fn contour_for(&self, z: f64) -> Result<f64> {
        let mid = self.contour_abscissa()?;
        let lower = self.a[..self.n].iter().map(|a| a - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let upper = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        let lo = if lower.is_finite() { lower } else { mid - SEARCH_REACH };
        let hi = if upper.is_finite() { upper } else { mid + SEARCH_REACH };
        let ln_z = z.ln();
        let (c, v) = golden_min(|c| self.ln_kernel(Complex64::new(c, 0.0)).re + c * ln_z, lo, hi);
        Ok(if v.is_finite() && c > lo && c < hi { c } else { mid })
    }

    /// Exponential decay rate of the integrand along the contour, in units of pi.
    fn decay(&self) -> f64 {
        (self.m + self.n) as f64 - 0.5 * (self.a.len() + self.b.len()) as f64
    }

    fn ln_kernel(&self, t: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &b) in self.b.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_complex(b - t);
            } else {
                acc -= ln_gamma_complex(one - b + t);
            }
        }
        for (j, &a) in self.a.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_complex(one - a + t);
            } else {
                acc -= ln_gamma_complex(a - t);
            }
        }
        acc
    }
}

/// Value of the Meijer G-function at `z > 0` with an error estimate.
pub fn meijer_g(spec: &MeijerGSpec, z: f64, quad: &QuadratureConfig) -> Result<Evaluation> {
    meijer_g_scaled(spec, z, 0.0, quad)
}

/// `exp(ln_scale) * G(z)`, with the scale folded into the integrand so that
/// large Gamma factors cancel before exponentiation.
pub fn meijer_g_scaled(spec: &MeijerGSpec, z: f64, ln_scale: f64, quad: &QuadratureConfig) -> Result<Evaluation> {
    quad.validate()?;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!("Meijer G argument must be > 0, got {z}")));
    }
    let decay = spec.decay();
    if decay <= 0.0 {
        return Err(Error::Spec(format!(
            "straight contour diverges for orders {:?} (need 2(m+n) > p+q)",
            spec.orders()
        )));
    }
    let c = spec.contour_for(z)?;
    let ln_z = z.ln();
    let integrand = |y: f64| -> f64 {
        let t = Complex64::new(c, y);
        (spec.ln_kernel(t) + t * ln_z + ln_scale).exp().re
    };
    let (raw, err) = integrate_generic(integrand, 0.0, quad.half_length, quad)?;
    let tail = integrand(quad.half_length).abs() / (PI * decay) / PI;
    let value = raw / PI;
    let error = err / PI + tail;
    let target = quad.abs_tol.max(quad.rel_tol * value.abs());
    if !value.is_finite() || tail > target {
        return Err(Error::Accuracy { estimate: value, error });
    }
    Ok(Evaluation::new(value, error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::ln_gamma;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn power_identity() {
        // G^{1,1}_{1,1}(z | 1-eta; 0) = Gamma(eta) (1+z)^{-eta}
        let spec = MeijerGSpec::new(1, 1, vec![1.0 - 2.0], vec![0.0]).unwrap();
        let v = meijer_g(&spec, 1.0, &cfg()).unwrap();
        assert!(close(v.value, 0.25, 1e-10), "{v:?}");
        let eta: f64 = 3.5;
        let spec = MeijerGSpec::new(1, 1, vec![1.0 - eta], vec![0.0]).unwrap();
        let v = meijer_g(&spec, 2.0, &cfg()).unwrap();
        // reference value
        assert!(close(v.value, 0.071_064_354_718_506_15, 1e-10));
        assert!(close(v.value, ln_gamma(eta).unwrap().exp() * 3f64.powf(-eta), 1e-10));
    }

    #[test]
    fn log_identity() {
        let spec = MeijerGSpec::new(1, 2, vec![1.0, 1.0], vec![1.0, 0.0]).unwrap();
        let v = meijer_g(&spec, 1.0, &cfg()).unwrap();
        assert!(close(v.value, std::f64::consts::LN_2, 1e-10), "{v:?}");
    }

    #[test]
    fn scaled_matches_unscaled() {
        let spec = MeijerGSpec::new(1, 2, vec![1.0, 1.0], vec![1.0, 0.0]).unwrap();
        let a = meijer_g(&spec, 3.0, &cfg()).unwrap().value;
        let b = meijer_g_scaled(&spec, 3.0, 5.0, &cfg()).unwrap().value;
        assert!(close(b, a * 5f64.exp(), 1e-12));
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(matches!(MeijerGSpec::new(2, 0, vec![], vec![0.0]), Err(Error::Spec(_))));
        assert!(matches!(MeijerGSpec::new(1, 1, vec![2.0], vec![0.0]), Err(Error::Spec(_))));
        assert!(MeijerGSpec::new(0, 0, vec![0.0; 5], vec![]).is_err());
        // separable only by a curved contour
        let spec = MeijerGSpec::new(1, 1, vec![1.5], vec![0.0]).unwrap();
        assert!(matches!(meijer_g(&spec, 1.0, &cfg()), Err(Error::Spec(_))));
        let spec = MeijerGSpec::new(1, 1, vec![0.0], vec![0.0]).unwrap();
        assert!(matches!(meijer_g(&spec, -1.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn deterministic() {
        let spec = MeijerGSpec::new(1, 2, vec![1.0, 1.0], vec![1.0, 0.0]).unwrap();
        let a = meijer_g(&spec, 0.37, &cfg()).unwrap();
        let b = meijer_g(&spec, 0.37, &cfg()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
