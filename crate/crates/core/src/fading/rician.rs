//! Rician shadowed SNR distribution.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::specfun::gamma::gamma_p;
use crate::specfun::series::SeriesConfig;

/// Rician shadowed SNR: a Rician envelope whose LOS amplitude is
/// Nakagami-m distributed with average power `xi`, and scatter power
/// `2 sigma2`.
///
/// The SNR is `mean_snr * |h|^2`, so its mean is `mean_snr * (2 sigma2 + xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicianShadowedParams {
    m: f64,
    xi: f64,
    sigma2: f64,
    mean_snr: f64,
}

impl RicianShadowedParams {
    pub fn new(m: f64, xi: f64, sigma2: f64, mean_snr: f64) -> Result<Self> {
        ensure_positive("m", m)?;
        ensure_positive("xi", xi)?;
        ensure_positive("sigma2", sigma2)?;
        ensure_positive("mean_snr", mean_snr)?;
        Ok(Self { m, xi, sigma2, mean_snr })
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self> {
        Self::new(self.m, self.xi, self.sigma2, mean_snr)
    }

    /// Mean of the SNR, `mean_snr * (2 sigma2 + xi)`.
    pub fn snr_mean(&self) -> f64 {
        self.mean_snr * (2.0 * self.sigma2 + self.xi)
    }

    pub fn cdf(&self, g: f64) -> Result<f64> {
        self.cdf_with(g, &SeriesConfig::default())
    }

    /// CDF as the negative-binomial mixture
    /// `sum_i P(i) P(i + 1, g / (2 sigma2 mean_snr))` with
    /// `P(i) = (m)_i / i! * p^i (1 - p)^m`, `p = xi / (xi + 2 sigma2 m)`.
    pub fn cdf_with(&self, g: f64, cfg: &SeriesConfig) -> Result<f64> {
        ensure_non_negative("gamma", g)?;
        if g == 0.0 {
            return Ok(0.0);
        }
        if g.is_infinite() {
            return Ok(1.0);
        }
        let two_s2 = 2.0 * self.sigma2;
        let p = self.xi / (self.xi + two_s2 * self.m);
        let x = g / (self.mean_snr * two_s2);
        let mut weight = (self.m * (-p).ln_1p()).exp();
        let mut mass = 0.0;
        let mut sum = 0.0;
        for i in 0..cfg.max_terms {
            let reg = gamma_p(i as f64 + 1.0, x)?;
            sum += weight * reg;
            mass += weight;
            // P(j + 1, x) decreases in j, so the tail is at most the current
            // regularized gamma times the mixture mass not yet summed.
            if reg * (1.0 - mass).max(0.0) <= cfg.rel_tol * sum {
                return Ok(sum.clamp(0.0, 1.0));
            }
            weight *= (self.m + i as f64) / (i as f64 + 1.0) * p;
        }
        Err(Error::Convergence { partial_sum: sum, terms: cfg.max_terms })
    }

    pub fn sampler(&self) -> RicianShadowedSampler {
        RicianShadowedSampler {
            los: Gamma::new(self.m, self.xi / self.m).expect("validated m and xi"),
            sigma: self.sigma2.sqrt(),
            mean_snr: self.mean_snr,
        }
    }
}

/// Draws `mean_snr * ((sqrt(A) + sigma n1)^2 + (sigma n2)^2)` with
/// `A ~ Gamma(m, xi / m)` and standard normals `n1`, `n2`.
#[derive(Debug, Clone, Copy)]
pub struct RicianShadowedSampler {
    los: Gamma<f64>,
    sigma: f64,
    mean_snr: f64,
}

impl RicianShadowedSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.los.sample(rng).sqrt();
        let n1: f64 = StandardNormal.sample(rng);
        let n2: f64 = StandardNormal.sample(rng);
        let re = a + self.sigma * n1;
        let im = self.sigma * n2;
        self.mean_snr * (re * re + im * im)
    }
}

pub fn rician_shadowed_cdf(p: &RicianShadowedParams, g: f64) -> Result<f64> {
    p.cdf(g)
}

/// Nakagami-m envelope density with RMS value `rms`.
pub fn nakagami_limit_pdf(m: f64, rms: f64, x: f64) -> Result<f64> {
    ensure_positive("m", m)?;
    ensure_positive("rms", rms)?;
    ensure_non_negative("x", x)?;
    if x == 0.0 {
        return Ok(match m {
            m if m < 0.5 => f64::INFINITY,
            m if m == 0.5 => 2.0 * (m / (rms * rms)).sqrt() / std::f64::consts::PI.sqrt(),
            _ => 0.0,
        });
    }
    let ratio = m / (rms * rms);
    let ln = std::f64::consts::LN_2 - crate::specfun::gamma::ln_gamma(m)? + m * ratio.ln() - ratio * x * x
        + (2.0 * m - 1.0) * x.ln();
    Ok(ln.exp())
}
