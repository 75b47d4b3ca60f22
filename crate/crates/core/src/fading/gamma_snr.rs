use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_non_negative, ensure_positive, Result};
use crate::specfun::gamma::{gamma_p, ln_gamma_unchecked};

/// Gamma-distributed SNR with shape `nu` and rate `beta` (mean `nu / beta`).
///
/// This is the Nakagami-m special case: an SNR with fading figure `m` and
/// mean `g` has `nu = m`, `beta = m / g`. Any positive shape is accepted;
/// the finite-sum CDF requires an integer shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSnrParams {
    nu: f64,
    beta: f64,
}

impl GammaSnrParams {
    pub fn new(nu: f64, beta: f64) -> Result<Self> {
        ensure_positive("nu", nu)?;
        ensure_positive("beta", beta)?;
        Ok(Self { nu, beta })
    }

    pub fn integer(nu: u32, beta: f64) -> Result<Self> {
        if nu == 0 {
            return Err(domain("nu must be >= 1"));
        }
        Self::new(nu as f64, beta)
    }

    /// Shape `m` and mean SNR.
    pub fn from_mean(m: f64, mean_snr: f64) -> Result<Self> {
        ensure_positive("mean_snr", mean_snr)?;
        Self::new(m, m / mean_snr)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.nu / self.beta
    }

    pub fn integer_nu(&self) -> Result<u32> {
        if self.nu == self.nu.round() && self.nu >= 1.0 && self.nu < u32::MAX as f64 {
            Ok(self.nu as u32)
        } else {
            Err(domain(format!("finite-sum Gamma CDF needs an integer shape, got {}", self.nu)))
        }
    }

    pub fn pdf(&self, g: f64) -> Result<f64> {
        ensure_non_negative("gamma", g)?;
        if g == 0.0 {
            return Ok(match self.nu {
                nu if nu < 1.0 => f64::INFINITY,
                1.0 => self.beta,
                _ => 0.0,
            });
        }
        let ln = self.nu * self.beta.ln() + (self.nu - 1.0) * g.ln() - self.beta * g - ln_gamma_unchecked(self.nu);
        Ok(ln.exp())
    }

    /// CDF through the regularized incomplete gamma function.
    pub fn cdf(&self, g: f64) -> Result<f64> {
        ensure_non_negative("gamma", g)?;
        gamma_p(self.nu, self.beta * g)
    }

    /// CDF as `1 - sum_{n < nu} (beta g)^n e^{-beta g} / n!`.
    pub fn cdf_series(&self, g: f64) -> Result<f64> {
        ensure_non_negative("gamma", g)?;
        let nu = self.integer_nu()?;
        let x = self.beta * g;
        let mut term = (-x).exp();
        let mut acc = 0.0;
        for n in 0..nu {
            if n > 0 {
                term *= x / n as f64;
            }
            acc += term;
        }
        Ok((1.0 - acc).clamp(0.0, 1.0))
    }

    pub fn sampler(&self) -> GammaSnrSampler {
        GammaSnrSampler {
            dist: Gamma::new(self.nu, 1.0 / self.beta).expect("validated shape and rate"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GammaSnrSampler {
    dist: Gamma<f64>,
}

impl GammaSnrSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.dist.sample(rng)
    }
}

pub fn gamma_pdf(p: &GammaSnrParams, g: f64) -> Result<f64> {
    p.pdf(g)
}

pub fn gamma_cdf(p: &GammaSnrParams, g: f64) -> Result<f64> {
    p.cdf(g)
}

pub fn gamma_cdf_series(p: &GammaSnrParams, g: f64) -> Result<f64> {
    p.cdf_series(g)
}
