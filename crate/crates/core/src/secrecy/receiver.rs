//! Legitimate receiver: outage with blockage and ergodic capacity.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fading::{mixture_cdf, DoubleKappaMuShadowedParams, GammaSnrParams, RicianShadowedParams};
use crate::quad::{integrate_semi_infinite, Evaluation, QuadratureConfig};
use crate::specfun::gamma::{ln_gamma, ln_gamma_unchecked};
use crate::specfun::meijer::{meijer_g_scaled, MeijerGSpec};
use crate::specfun::series::SeriesConfig;

use super::Threshold;

/// Truncation for the receiver capacity series. Its terms follow a negative
/// binomial law in `i`, which for strong, lightly shadowed dominant
/// components needs several hundred terms.
pub const RECEIVER_SERIES: SeriesConfig = SeriesConfig {
    rel_tol: 1e-10,
    max_terms: 5000,
};

/// Receiver outage query: a threshold and a LOS/NLOS pair of Rician
/// shadowed links mixed by the LOS probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageQuery {
    pub threshold: Threshold,
    pub p_los: f64,
    pub los: RicianShadowedParams,
    pub nlos: RicianShadowedParams,
}

/// `p_los F_los(zeta) + (1 - p_los) F_nlos(zeta)` for a single-antenna receiver.
pub fn outage_receiver(q: &OutageQuery) -> Result<f64> {
    let th = q.threshold.linear();
    if !(th > 0.0) {
        return Err(domain(format!("threshold must be > 0, got {th}")));
    }
    if !(0.0..=1.0).contains(&q.p_los) {
        return Err(domain(format!("p_los must lie in [0, 1], got {}", q.p_los)));
    }
    mixture_cdf(q.p_los, q.los.cdf(th)?, q.nlos.cdf(th)?)
}

fn capacity_quadrature_config() -> QuadratureConfig {
    QuadratureConfig::default().with_tolerances(1e-13, 1e-9)
}

/// `E[log2(1 + SNR)]` by adaptive quadrature of the density.
pub fn capacity_receiver_quadrature(p: &DoubleKappaMuShadowedParams) -> Result<Evaluation> {
    let r = p.integrate_against_all(|g| g.ln_1p(), &capacity_quadrature_config())?;
    Ok(r.scale(1.0 / LN_2))
}

pub fn capacity_receiver_series(p: &DoubleKappaMuShadowedParams) -> Result<Evaluation> {
    capacity_receiver_series_with(p, &RECEIVER_SERIES, &QuadratureConfig::default())
}

/// Ergodic capacity as a series of Meijer G-functions.
///
/// Expanding the 2F1 in the density gives components
/// `g^(alpha - 1) (T g + Phi)^(-eta)` with `alpha = mu + i`,
/// `eta = s + mu + i`, `Phi = (s - 1) mean_snr`. Each integrates against
/// `ln(1 + g)` to
/// `Phi^(-eta) / Gamma(eta) * G^{3,2}_{3,3}(T / Phi | 1 - eta, -alpha, 1 - alpha; 0, -alpha, -alpha)`.
/// The series stops once the negative binomial mass not yet summed, times
/// the last term's capacity, falls below `series.rel_tol` of the sum.
pub fn capacity_receiver_series_with(
    p: &DoubleKappaMuShadowedParams,
    series: &SeriesConfig,
    quad: &QuadratureConfig,
) -> Result<Evaluation> {
    let (c, s, mu, kappa) = (p.c(), p.s(), p.mu(), p.kappa());
    let t = p.t();
    let phi = p.phi();
    let z = t / phi;
    let mk = mu * kappa;
    let frac = mk / (c + mk);
    let ln_prefactor =
        s * phi.ln() + mu * t.ln() - ln_gamma(s)? - ln_gamma(mu)? + ln_gamma(s + mu)? - c * (mk / c).ln_1p() - LN_2.ln();
    // Weight of component i is the negative binomial probability
    // (c)_i / i! frac^i (1 - frac)^c, tracked for the stopping rule.
    let ln_weight0 = c * (-frac).ln_1p();
    let mut ln_coef = 0.0;
    let mut ln_weight = ln_weight0;
    let mut mass = 0.0;
    let mut total = Evaluation::exact(0.0);
    for i in 0..series.max_terms {
        let fi = i as f64;
        if i > 0 {
            let prev = fi - 1.0;
            let step = ((c + prev) * (s + mu + prev) * p.k() * mk / ((mu + prev) * fi)).ln();
            ln_coef += step;
            ln_weight += ((c + prev) / fi * frac).ln();
        }
        let alpha = mu + fi;
        let eta = s + mu + fi;
        let spec = MeijerGSpec::new(3, 2, vec![1.0 - eta, -alpha, 1.0 - alpha], vec![0.0, -alpha, -alpha])?;
        let ln_scale = ln_prefactor + ln_coef - eta * phi.ln() - ln_gamma_unchecked(eta);
        let term = meijer_g_scaled(&spec, z, ln_scale, quad)?;
        total = total + term;
        if kappa == 0.0 {
            return Ok(total);
        }
        mass += ln_weight.exp();
        let remaining = (1.0 - mass).max(0.0);
        let weight = ln_weight.exp();
        if weight > 0.0 && term.value / weight * remaining <= series.rel_tol * total.value && i > 0 {
            return Ok(total);
        }
    }
    Err(Error::Convergence {
        partial_sum: total.value,
        terms: series.max_terms,
    })
}

/// Ergodic capacity of a Gamma-distributed SNR with integer shape `nu`:
/// `1/ln 2 * sum_{n < nu} beta^n / n! * int e^(-beta g) g^n / (1 + g) dg`, where
/// each integral is `beta^(-n-1) G^{1,2}_{2,1}(1 / beta | -n, 0; 0)`.
pub fn capacity_gamma_closed_form(p: &GammaSnrParams, quad: &QuadratureConfig) -> Result<Evaluation> {
    let nu = p.integer_nu()?;
    let beta = p.beta();
    let mut total = Evaluation::exact(0.0);
    for n in 0..nu {
        let fnn = n as f64;
        let spec = MeijerGSpec::new(1, 2, vec![-fnn, 0.0], vec![0.0])?;
        let ln_scale = -beta.ln() - ln_gamma_unchecked(fnn + 1.0) - LN_2.ln();
        total = total + meijer_g_scaled(&spec, 1.0 / beta, ln_scale, quad)?;
    }
    Ok(total)
}

/// Ergodic capacity of a Gamma-distributed SNR by quadrature of
/// `log2(1 + g)` against the density.
pub fn capacity_gamma_quadrature(p: &GammaSnrParams) -> Result<Evaluation> {
    let mut failure = None;
    let r = integrate_semi_infinite(
        |g| {
            if g == 0.0 {
                return 0.0;
            }
            p.pdf(g).map(|f| f * g.ln_1p()).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                0.0
            })
        },
        p.mean(),
        &capacity_quadrature_config(),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r.scale(1.0 / LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn exponential_capacity() {
        // e E1(1) / ln 2, with e E1(1) = 0.5963473623231940743...
        let oracle = 0.596_347_362_323_194_1 / LN_2;
        let p = DoubleKappaMuShadowedParams::new(1e4, 1e4, 1.0, 1e-12, 1.0).unwrap();
        let q = capacity_receiver_quadrature(&p).unwrap().value;
        assert!((q - oracle).abs() < 1e-2, "{q} vs {oracle}");
        let g = GammaSnrParams::integer(1, 1.0).unwrap();
        assert!(rel(capacity_gamma_quadrature(&g).unwrap().value, oracle) < 1e-9);
        let cf = capacity_gamma_closed_form(&g, &QuadratureConfig::default()).unwrap().value;
        assert!(rel(cf, oracle) < 1e-9, "{cf}");
    }

    #[test]
    fn gamma_closed_form_matches_quadrature() {
        for &(nu, beta) in &[(2u32, 0.5), (4, 2.0), (8, 0.05), (3, 30.0)] {
            let p = GammaSnrParams::integer(nu, beta).unwrap();
            let a = capacity_gamma_closed_form(&p, &QuadratureConfig::default()).unwrap().value;
            let b = capacity_gamma_quadrature(&p).unwrap().value;
            assert!(rel(a, b) < 1e-8, "nu={nu} beta={beta}: {a} vs {b}");
        }
    }

    #[test]
    fn series_matches_quadrature() {
        for &(c, s, mu, kappa, g) in &[
            (3.0, 4.0, 2.0, 1.5, 1.0),
            (0.5, 1.6, 0.5, 3.0, 10.0),
            (5.0, 6.0, 5.0, 3.0, 0.3),
            (1.2, 2.5, 1.0, 0.0, 3.0),
            (0.5, 3.0, 5.0, 3.0, 100.0),
        ] {
            let p = DoubleKappaMuShadowedParams::new(c, s, mu, kappa, g).unwrap();
            let a = capacity_receiver_series(&p).unwrap().value;
            let b = capacity_receiver_quadrature(&p).unwrap().value;
            assert!(rel(a, b) < 1e-6, "{p:?}: {a} vs {b}");
        }
    }

    #[test]
    fn capacity_increases_with_mean_snr() {
        let mut prev = 0.0;
        for db in [-20.0, -10.0, 0.0, 10.0, 20.0] {
            let p = DoubleKappaMuShadowedParams::new(2.0, 3.0, 1.5, 1.0, super::super::db_to_linear(db)).unwrap();
            let v = capacity_receiver_quadrature(&p).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
        let tiny = DoubleKappaMuShadowedParams::new(2.0, 3.0, 1.5, 1.0, 1e-9).unwrap();
        assert!(capacity_receiver_quadrature(&tiny).unwrap().value < 1e-8);
    }

    #[test]
    fn outage_examples() {
        let good = RicianShadowedParams::new(10.0, 1.0, 0.05, 10.0).unwrap();
        let bad = RicianShadowedParams::new(1.0, 0.01, 0.5, 10.0).unwrap();
        let q = |p_los| OutageQuery { threshold: Threshold::Db(5.0), p_los, los: good, nlos: bad };
        assert!(outage_receiver(&q(1.0)).unwrap() < outage_receiver(&q(0.0)).unwrap());
        let tiny = OutageQuery { threshold: Threshold::Linear(1e-12), ..q(0.5) };
        assert!(outage_receiver(&tiny).unwrap() < 1e-10);
        assert!(outage_receiver(&q(1.5)).is_err());
    }
}
