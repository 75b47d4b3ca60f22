//! The one bivariate Fox H-function instance needed for the eavesdropper
//! ergodic capacity:
//!
//! ```text
//! H^{1,0;1,1;1,1}_{0,1;1,1;1,1}( x, y | (-n;1,1) ; - | (0,1);(0,1) | (1-Omega,1);(0,1) )
//!   = 1/(2 pi i)^2 double integral of
//!     Gamma(1 + n + s1 + s2) Gamma(-s1) Gamma(1 + s1) Gamma(-s2) Gamma(Omega + s2) x^s1 y^s2
//! ```
//!
//! Both contours are vertical lines inside `-1 < Re s1 < 0`, `-Omega < Re s2 < 0`
//! and `Re(1 + n + s1 + s2) > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_generic, Evaluation, QuadratureConfig};
use crate::specfun::contour::golden_min;
use crate::specfun::gamma::{ln_gamma_complex, ln_gamma_unchecked};

const MAX_WIDENING: f64 = 16.0;
const EDGE_LN_RATIO: f64 = -40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateFoxHSpec {
    n: u32,
    omega: f64,
}

impl BivariateFoxHSpec {
    pub fn new(n: u32, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Spec(format!("Omega must be > 0, got {omega}")));
        }
        Ok(Self { n, omega })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Log-modulus of the integrand at real `(c1, c2)`.
    fn ln_real_kernel(&self, c1: f64, c2: f64, ln_x: f64, ln_y: f64) -> f64 {
        let n1 = 1.0 + self.n as f64;
        ln_gamma_unchecked(n1 + c1 + c2)
            + ln_gamma_unchecked(-c1)
            + ln_gamma_unchecked(1.0 + c1)
            + ln_gamma_unchecked(-c2)
            + ln_gamma_unchecked(self.omega + c2)
            + c1 * ln_x
            + c2 * ln_y
    }

    /// Saddle point of the real-axis integrand inside the strip
    /// `-1 < c1 < 0`, `-Omega < c2 < 0`, `c1 + c2 > -(n + 1)`.
    fn contours(&self, ln_x: f64, ln_y: f64) -> (f64, f64) {
        let n1 = 1.0 + self.n as f64;
        let inner = |c1: f64| {
            let lo = (-self.omega).max(-n1 - c1);
            golden_min(|c2| self.ln_real_kernel(c1, c2, ln_x, ln_y), lo, 0.0)
        };
        let (c1, _) = golden_min(|c1| inner(c1).1, -1.0, 0.0);
        (c1, inner(c1).0)
    }
}

// log of Gamma(-s) Gamma(1+s) = log(-pi / sin(pi s))
fn ln_reflected_pair(s: Complex64) -> Complex64 {
    ln_gamma_complex(-s) + ln_gamma_complex(s + 1.0)
}

/// Value of the bivariate instance at `(x, y)`, both positive.
pub fn fox_h_bivariate(spec: &BivariateFoxHSpec, x: f64, y: f64, quad: &QuadratureConfig) -> Result<Evaluation> {
    fox_h_bivariate_scaled(spec, x, y, 0.0, quad)
}

/// `exp(ln_scale) * H(x, y)` with the scale applied inside the integrand.
pub fn fox_h_bivariate_scaled(
    spec: &BivariateFoxHSpec,
    x: f64,
    y: f64,
    ln_scale: f64,
    quad: &QuadratureConfig,
) -> Result<Evaluation> {
    quad.validate()?;
    if !(x.is_finite() && x > 0.0 && y.is_finite() && y > 0.0) {
        return Err(Error::Domain(format!("Fox H arguments must be > 0, got ({x}, {y})")));
    }
    let (ln_x, ln_y) = (x.ln(), y.ln());
    let (c1, c2) = spec.contours(ln_x, ln_y);
    let shift = 1.0 + spec.n as f64;
    let omega = spec.omega;
    // Widen the truncation box until the integrand at its edges is
    // negligible next to its value at the saddle.
    let ln_modulus = |s1: Complex64, s2: Complex64| -> f64 {
        (ln_reflected_pair(s1)
            + ln_gamma_complex(s1 + s2 + shift)
            + ln_gamma_complex(-s2)
            + ln_gamma_complex(s2 + omega)
            + s1 * ln_x
            + s2 * ln_y)
            .re
    };
    let centre = spec.ln_real_kernel(c1, c2, ln_x, ln_y);
    let mut len = quad.half_length;
    while len < MAX_WIDENING * quad.half_length {
        let edge = ln_modulus(Complex64::new(c1, len), Complex64::new(c2, 0.0))
            .max(ln_modulus(Complex64::new(c1, 0.0), Complex64::new(c2, len)));
        if edge - centre < EDGE_LN_RATIO {
            break;
        }
        len *= 2.0;
    }

    let inner_cfg = QuadratureConfig {
        abs_tol: quad.abs_tol / (4.0 * len),
        rel_tol: quad.rel_tol * 0.1,
        ..*quad
    };

    let term = |s1: Complex64, ln_first: Complex64, y2: f64| -> Complex64 {
        let s2 = Complex64::new(c2, y2);
        (ln_first
            + ln_gamma_complex(s1 + s2 + shift)
            + ln_gamma_complex(-s2)
            + ln_gamma_complex(s2 + omega)
            + s2 * ln_y)
            .exp()
    };

    let mut inner_failure: Option<Error> = None;
    let outer = |y1: f64| -> f64 {
        let s1 = Complex64::new(c1, y1);
        let ln_first = ln_reflected_pair(s1) + s1 * ln_x + ln_scale;
        match integrate_generic(|y2| term(s1, ln_first, y2), -len, len, &inner_cfg) {
            Ok((v, _)) => v.re,
            Err(err) => {
                if inner_failure.is_none() {
                    inner_failure = Some(err);
                }
                f64::NAN
            }
        }
    };
    let outer_result = integrate_generic(outer, 0.0, len, quad);
    if let Some(err) = inner_failure {
        return Err(err);
    }
    let (raw, err) = outer_result?;

    // Tails beyond the truncation box: both factor pairs decay like e^{-pi |y|}.
    let s1_edge = Complex64::new(c1, len);
    let ln_edge = ln_reflected_pair(s1_edge) + s1_edge * ln_x + ln_scale;
    let edge = term(s1_edge, ln_edge, 0.0).norm().max(
        term(Complex64::new(c1, 0.0), ln_reflected_pair(Complex64::new(c1, 0.0)) + c1 * ln_x + ln_scale, len).norm(),
    );
    let tail = 2.0 * edge / PI;

    let norm = 1.0 / (2.0 * PI * PI);
    let value = raw * norm;
    let error = (err + tail) * norm;
    if !value.is_finite() {
        return Err(Error::Accuracy { estimate: value, error });
    }
    Ok(Evaluation::new(value, error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_semi_infinite;
    use crate::specfun::gamma::ln_gamma;

    // Mellin-Barnes definition reduces to the real integral
    // H(x, y) = beta_J^Omega Gamma(Omega) beta_I^{n+1}
    //           * int_0^inf e^{-beta_I g} g^n (beta_I g + beta_J)^{-Omega} / (1 + g) dg
    // with beta_I = 1/x and beta_J = 1/y.
    fn oracle(n: u32, omega: f64, x: f64, y: f64) -> f64 {
        let (bi, bj) = (1.0 / x, 1.0 / y);
        let cfg = QuadratureConfig::default().with_tolerances(1e-16, 1e-12);
        let j = integrate_semi_infinite(
            |g: f64| (-bi * g).exp() * g.powi(n as i32) * (bi * g + bj).powf(-omega) / (1.0 + g),
            1.0,
            &cfg,
        )
        .unwrap()
        .value;
        bj.powf(omega) * ln_gamma(omega).unwrap().exp() * bi.powi(n as i32 + 1) * j
    }

    #[test]
    fn matches_real_line_oracle() {
        let cfg = QuadratureConfig::default();
        for &(n, omega, x, y) in &[(0u32, 1.0, 1.0, 1.0), (2, 3.0, 0.5, 2.0), (1, 2.5, 4.0, 0.3), (3, 1.0, 10.0, 10.0)] {
            let spec = BivariateFoxHSpec::new(n, omega).unwrap();
            let h = fox_h_bivariate(&spec, x, y, &cfg).unwrap();
            let o = oracle(n, omega, x, y);
            assert!((h.value - o).abs() <= 1e-8 * o.abs(), "n={n} omega={omega} x={x} y={y}: {} vs {o}", h.value);
        }
    }

    #[test]
    fn deterministic_bits() {
        let spec = BivariateFoxHSpec::new(1, 2.0).unwrap();
        let cfg = QuadratureConfig::default();
        let a = fox_h_bivariate(&spec, 1.3, 0.7, &cfg).unwrap();
        let b = fox_h_bivariate(&spec, 1.3, 0.7, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BivariateFoxHSpec::new(0, 0.0).is_err());
        let spec = BivariateFoxHSpec::new(0, 1.0).unwrap();
        assert!(fox_h_bivariate(&spec, -1.0, 1.0, &QuadratureConfig::default()).is_err());
    }
}
