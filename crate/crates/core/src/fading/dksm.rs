//! Double kappa-mu shadowed SNR distribution.
//!
//! A kappa-mu envelope whose dominant components fluctuate with a
//! Nakagami-m shadowing of shape `c`, and whose total power is divided by an
//! independent Nakagami power of shape `s` (inverse-Nakagami shadowing). The
//! SNR density is
//!
//! ```text
//! f(g) = (s-1)^s c^c T^mu g^(mu-1) gbar^s
//!        / ((c + mu kappa)^c B(s, mu) (T g + (s-1) gbar)^(s+mu))
//!        * 2F1(c, s+mu; mu; K mu kappa g / (T g + (s-1) gbar))
//! ```
//!
//! with `T = mu (1 + kappa)` and `K = T / (c + mu kappa)`.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_non_negative, ensure_positive, Result};
use crate::quad::{integrate, Evaluation, QuadratureConfig};
use crate::specfun::gamma::ln_beta;
use crate::specfun::hyper::ln_gauss_2f1;

use super::sampling::SamplerSeed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleKappaMuShadowedParams {
    c: f64,
    s: f64,
    mu: f64,
    kappa: f64,
    mean_snr: f64,
}

impl DoubleKappaMuShadowedParams {
    pub fn new(c: f64, s: f64, mu: f64, kappa: f64, mean_snr: f64) -> Result<Self> {
        ensure_positive("c", c)?;
        ensure_positive("mu", mu)?;
        ensure_non_negative("kappa", kappa)?;
        ensure_positive("mean_snr", mean_snr)?;
        if !(s.is_finite() && s > 1.0) {
            return Err(domain(format!("s must be > 1 for a finite mean, got {s}")));
        }
        Ok(Self { c, s, mu, kappa, mean_snr })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self> {
        Self::new(self.c, self.s, self.mu, self.kappa, mean_snr)
    }

    /// `T = mu (1 + kappa)`.
    pub fn t(&self) -> f64 {
        self.mu * (1.0 + self.kappa)
    }

    /// `K = T / (c + mu kappa)`.
    pub fn k(&self) -> f64 {
        self.t() / (self.c + self.mu * self.kappa)
    }

    /// `(s - 1) * mean_snr`.
    pub fn phi(&self) -> f64 {
        (self.s - 1.0) * self.mean_snr
    }

    // Negative-binomial success probability mu kappa / (c + mu kappa).
    pub(crate) fn dominant_fraction(&self) -> f64 {
        let mk = self.mu * self.kappa;
        mk / (self.c + mk)
    }

    fn ln_pdf_positive(&self, g: f64) -> Result<f64> {
        let (c, s, mu) = (self.c, self.s, self.mu);
        let t = self.t();
        let phi = self.phi();
        let u = t * g / phi;
        let z = self.dominant_fraction() * u / (1.0 + u);
        let ln_hyper = ln_gauss_2f1(c, s + mu, mu, z)?;
        Ok(-c * (self.mu * self.kappa / c).ln_1p() + mu * t.ln() + (mu - 1.0) * g.ln()
            - mu * phi.ln()
            - (s + mu) * u.ln_1p()
            - ln_beta(s, mu)?
            + ln_hyper)
    }

    pub fn pdf(&self, g: f64) -> Result<f64> {
        ensure_non_negative("gamma", g)?;
        if g > 0.0 {
            return Ok(self.ln_pdf_positive(g)?.exp());
        }
        if self.mu > 1.0 {
            Ok(0.0)
        } else if self.mu < 1.0 {
            Ok(f64::INFINITY)
        } else {
            let ln = -self.c * (self.kappa / self.c).ln_1p() + self.t().ln() - self.phi().ln() - ln_beta(self.s, 1.0)?;
            Ok(ln.exp())
        }
    }

    /// Density of the envelope `sqrt(g)` when `mean_snr` is read as the mean square envelope.
    pub fn envelope_pdf(&self, x: f64) -> Result<f64> {
        ensure_non_negative("x", x)?;
        if x == 0.0 {
            return Ok(if self.mu > 0.5 { 0.0 } else { 2.0 * x * self.pdf(0.0)? });
        }
        Ok(2.0 * x * self.pdf(x * x)?)
    }

    /// Integral of `weight(g) * pdf(g)` over `[0, upper]`.
    ///
    /// For `mu < 1` the substitution `g = upper * v^(1/mu)` removes the
    /// `g^(mu-1)` singularity at the origin.
    pub fn integrate_against<F>(&self, weight: F, upper: f64, cfg: &QuadratureConfig) -> Result<Evaluation>
    where
        F: Fn(f64) -> f64,
    {
        ensure_non_negative("upper", upper)?;
        if upper == 0.0 {
            return Ok(Evaluation::exact(0.0));
        }
        let power = if self.mu < 1.0 { 1.0 / self.mu } else { 1.0 };
        let mut failure = None;
        let r = integrate(
            |v| {
                let g = upper * v.powf(power);
                let jac = upper * power * v.powf(power - 1.0);
                match self.pdf(g) {
                    Ok(f) if f > 0.0 => weight(g) * f * jac,
                    Ok(_) => 0.0,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            1.0,
            cfg,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        r
    }

    /// Integral of `weight(g) * pdf(g)` over `[0, inf)`.
    pub fn integrate_against_all<F>(&self, weight: F, cfg: &QuadratureConfig) -> Result<Evaluation>
    where
        F: Fn(f64) -> f64,
    {
        let scale = self.mean_snr;
        let power = if self.mu < 1.0 { 1.0 / self.mu } else { 1.0 };
        let mut failure = None;
        let r = integrate(
            |t| {
                let r = t / (1.0 - t);
                let g = scale * r.powf(power);
                let jac = scale * power * r.powf(power - 1.0) / ((1.0 - t) * (1.0 - t));
                if !g.is_finite() {
                    return 0.0;
                }
                match self.pdf(g) {
                    Ok(f) if f > 0.0 => weight(g) * f * jac,
                    Ok(_) => 0.0,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            1.0,
            cfg,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        r
    }

    /// CDF by adaptive quadrature of the density.
    pub fn cdf(&self, g: f64) -> Result<f64> {
        ensure_non_negative("gamma", g)?;
        if g.is_infinite() {
            return Ok(1.0);
        }
        let cfg = cdf_quadrature();
        if g <= self.mean_snr {
            Ok(self.integrate_against(|_| 1.0, g, &cfg)?.value.clamp(0.0, 1.0))
        } else {
            Ok((1.0 - self.upper_tail(g, &cfg)?).clamp(0.0, 1.0))
        }
    }

    /// `P(SNR > g)` by quadrature of the density over `[g, inf)`.
    pub fn ccdf(&self, g: f64) -> Result<f64> {
        ensure_non_negative("gamma", g)?;
        if g.is_infinite() {
            return Ok(0.0);
        }
        let cfg = cdf_quadrature();
        if g <= self.mean_snr {
            Ok((1.0 - self.integrate_against(|_| 1.0, g, &cfg)?.value).clamp(0.0, 1.0))
        } else {
            Ok(self.upper_tail(g, &cfg)?.clamp(0.0, 1.0))
        }
    }

    fn upper_tail(&self, g: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let mut failure = None;
        let scale = g.max(self.mean_snr);
        let r = integrate(
            |t| {
                let x = g + scale * t / (1.0 - t);
                if !x.is_finite() {
                    return 0.0;
                }
                let jac = scale / ((1.0 - t) * (1.0 - t));
                self.pdf(x).map(|f| f * jac).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    0.0
                })
            },
            0.0,
            1.0,
            cfg,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(r.value),
        }
    }

    /// CDF at every point of an ascending slice, accumulating the density
    /// integral gap by gap.
    pub fn cdf_sorted(&self, points: &[f64]) -> Result<Vec<f64>> {
        let cfg = cdf_quadrature();
        let mut out = Vec::with_capacity(points.len());
        let mut prev = 0.0;
        let mut acc = 0.0;
        for (i, &x) in points.iter().enumerate() {
            ensure_non_negative("gamma", x)?;
            if x < prev {
                return Err(domain("cdf_sorted needs ascending points"));
            }
            if i == 0 {
                acc = self.integrate_against(|_| 1.0, x, &cfg)?.value;
            } else if x > prev {
                let mut failure = None;
                let gap = integrate(
                    |g| {
                        self.pdf(g).unwrap_or_else(|e| {
                            failure.get_or_insert(e);
                            0.0
                        })
                    },
                    prev,
                    x,
                    &cfg,
                )?;
                if let Some(e) = failure {
                    return Err(e);
                }
                acc += gap.value;
            }
            prev = x;
            out.push(acc.clamp(0.0, 1.0));
        }
        Ok(out)
    }

    pub fn sampler(&self) -> DksmSampler {
        DksmSampler {
            shadow: Gamma::new(self.c, 1.0 / self.c).expect("validated c"),
            inverse: Gamma::new(self.s, 1.0 / (self.s - 1.0)).expect("validated s"),
            mu: self.mu,
            mu_kappa: self.mu * self.kappa,
            scale: self.mean_snr / self.t(),
        }
    }
}

fn cdf_quadrature() -> QuadratureConfig {
    QuadratureConfig::default().with_tolerances(1e-14, 1e-12)
}

/// Generative sampler for [`DoubleKappaMuShadowedParams`].
///
/// `xi2 ~ Gamma(c, rate c)` shadows the dominant power; conditioned on it the
/// kappa-mu power is a Poisson(mu kappa xi2) mixture of Gamma(mu + N) terms
/// (a scaled noncentral chi-square with 2 mu degrees of freedom); the result
/// is divided by `W ~ Gamma(s, rate s - 1)`, which has `E[1/W] = 1`.
#[derive(Debug, Clone, Copy)]
pub struct DksmSampler {
    shadow: Gamma<f64>,
    inverse: Gamma<f64>,
    mu: f64,
    mu_kappa: f64,
    scale: f64,
}

impl DksmSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let xi2 = self.shadow.sample(rng);
        let lambda = self.mu_kappa * xi2;
        let count = if lambda > 0.0 {
            Poisson::new(lambda).map(|p| p.sample(rng)).unwrap_or(0.0)
        } else {
            0.0
        };
        let power = Gamma::new(self.mu + count, 1.0).expect("positive shape").sample(rng);
        let w = self.inverse.sample(rng);
        self.scale * power / w
    }
}

pub fn dksm_pdf(p: &DoubleKappaMuShadowedParams, g: f64) -> Result<f64> {
    p.pdf(g)
}

pub fn dksm_cdf(p: &DoubleKappaMuShadowedParams, g: f64) -> Result<f64> {
    p.cdf(g)
}

/// `n` i.i.d. draws from the stream identified by `seed`.
pub fn dksm_sample(p: &DoubleKappaMuShadowedParams, seed: SamplerSeed, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(crate::Error::Usage("sample count must be >= 1".into()));
    }
    let sampler = p.sampler();
    let mut rng = seed.rng();
    Ok((0..n).map(|_| sampler.draw(&mut rng)).collect())
}
