//! Fading distributions: densities, CDFs and samplers.

pub mod dksm;
pub mod gamma_snr;
pub mod rician;
pub mod sampling;

pub use dksm::{dksm_cdf, dksm_pdf, dksm_sample, DksmSampler, DoubleKappaMuShadowedParams};
pub use gamma_snr::{gamma_cdf, gamma_cdf_series, gamma_pdf, GammaSnrParams, GammaSnrSampler};
pub use rician::{nakagami_limit_pdf, rician_shadowed_cdf, RicianShadowedParams, RicianShadowedSampler};
pub use sampling::SamplerSeed;

use crate::error::{domain, Result};

/// LOS/NLOS mixture `p_los * cdf_los + (1 - p_los) * cdf_nlos`.
pub fn mixture_cdf(p_los: f64, cdf_los: f64, cdf_nlos: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_los) {
        return Err(domain(format!("p_los must lie in [0, 1], got {p_los}")));
    }
    for (name, v) in [("cdf_los", cdf_los), ("cdf_nlos", cdf_nlos)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(domain(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    Ok(p_los * cdf_los + (1.0 - p_los) * cdf_nlos)
}

/// Two-sided Kolmogorov-Smirnov statistic of ascending `samples` against
/// CDF values `cdf` taken at those samples.
pub fn ks_statistic(cdf: &[f64]) -> f64 {
    let n = cdf.len() as f64;
    cdf.iter().enumerate().fold(0.0, |d: f64, (i, &f)| {
        let lo = f - i as f64 / n;
        let hi = (i + 1) as f64 / n - f;
        d.max(lo).max(hi)
    })
}

/// Asymptotic 1% critical value of the KS statistic for `n` samples.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.627_624_0 / (n as f64).sqrt()
}
