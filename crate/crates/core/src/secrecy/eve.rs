//! Eavesdropper link: SINR distribution under friendly jamming and its
//! ergodic capacity.
//!
//! The eavesdropper sees `gamma_I / (1 + gamma_J)` with
//! `gamma_I ~ Gamma(nu_I, rate beta_I)` from the source and
//! `gamma_J ~ Gamma(nu_J, rate beta_J)` from the jammer.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fading::GammaSnrParams;
use crate::quad::{integrate, integrate_semi_infinite, Evaluation, QuadratureConfig};
use crate::specfun::foxh::{fox_h_bivariate_scaled, BivariateFoxHSpec};
use crate::specfun::gamma::{binomial, gamma_p, ln_gamma_unchecked};

use super::receiver::{capacity_gamma_closed_form, capacity_gamma_quadrature};
use super::NetworkGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveLinkParams {
    nu_i: u32,
    beta_i: f64,
    nu_j: u32,
    beta_j: f64,
}

impl EveLinkParams {
    pub fn new(nu_i: u32, beta_i: f64, nu_j: u32, beta_j: f64) -> Result<Self> {
        if nu_i == 0 || nu_j == 0 {
            return Err(domain("Gamma shapes nu_I and nu_J must be >= 1"));
        }
        for (name, v) in [("beta_I", beta_i), ("beta_J", beta_j)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { nu_i, beta_i, nu_j, beta_j })
    }

    pub fn nu_i(&self) -> u32 {
        self.nu_i
    }
    pub fn beta_i(&self) -> f64 {
        self.beta_i
    }
    pub fn nu_j(&self) -> u32 {
        self.nu_j
    }
    pub fn beta_j(&self) -> f64 {
        self.beta_j
    }

    pub fn source(&self) -> GammaSnrParams {
        GammaSnrParams::integer(self.nu_i, self.beta_i).expect("validated")
    }

    pub fn jammer(&self) -> GammaSnrParams {
        GammaSnrParams::integer(self.nu_j, self.beta_j).expect("validated")
    }
}

/// Eavesdropper channel with or without an active jammer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EveChannel {
    Jammed(EveLinkParams),
    Unjammed(GammaSnrParams),
}

impl EveChannel {
    pub fn cdf(&self, g: f64) -> Result<f64> {
        match self {
            EveChannel::Jammed(p) => eve_sinr_cdf(p, g),
            EveChannel::Unjammed(p) => p.cdf(g),
        }
    }

    pub fn cdf_integral(&self, g: f64) -> Result<Evaluation> {
        match self {
            EveChannel::Jammed(p) => eve_sinr_cdf_integral(p, g),
            EveChannel::Unjammed(p) => {
                if !(g >= 0.0) {
                    return Err(domain(format!("SINR threshold must be >= 0, got {g}")));
                }
                let cfg = QuadratureConfig::default().with_tolerances(1e-16, 1e-12);
                integrate(|x| p.pdf(x).unwrap_or(f64::NAN), 0.0, g, &cfg)
            }
        }
    }

    pub fn capacity_closed_form(&self, quad: &QuadratureConfig) -> Result<Evaluation> {
        match self {
            EveChannel::Jammed(p) => capacity_eve_foxh(p, quad),
            EveChannel::Unjammed(p) => capacity_gamma_closed_form(p, quad),
        }
    }

    pub fn capacity_quadrature(&self) -> Result<Evaluation> {
        match self {
            EveChannel::Jammed(p) => capacity_eve_quadrature(p),
            EveChannel::Unjammed(p) => capacity_gamma_quadrature(p),
        }
    }
}

/// Gamma parameters of the source and jammer links at the eavesdropper.
///
/// Per-antenna links are Nakagami with shapes `m_i`, `m_j`; summing `N`
/// (resp. `K`) of them adds the shapes and keeps the rate
/// `m / mean SNR`. Fails when the geometry has no active jammer.
pub fn eve_link_params_from_geometry(g: &NetworkGeometry, m_i: u32, m_j: u32) -> Result<EveLinkParams> {
    g.validate()?;
    if m_i == 0 || m_j == 0 {
        return Err(domain("Nakagami shapes must be >= 1"));
    }
    if !g.is_jammed() {
        return Err(domain("geometry has no active jammer (K = 0 or P_J = 0)"));
    }
    let snr_i = g.eve_mean_snr()?;
    let inr_j = g.jammer_mean_inr()?;
    if !(snr_i > 0.0) {
        return Err(domain("source power must be > 0"));
    }
    EveLinkParams::new(g.n * m_i, m_i as f64 / snr_i, g.k * m_j, m_j as f64 / inr_j)
}

/// Like [`eve_link_params_from_geometry`] but falls back to the jammer-free
/// Gamma SNR when there is no active jammer.
pub fn eve_channel_from_geometry(g: &NetworkGeometry, m_i: u32, m_j: u32) -> Result<EveChannel> {
    if g.is_jammed() {
        return eve_link_params_from_geometry(g, m_i, m_j).map(EveChannel::Jammed);
    }
    g.validate()?;
    if m_i == 0 {
        return Err(domain("Nakagami shapes must be >= 1"));
    }
    let snr_i = g.eve_mean_snr()?;
    if !(snr_i > 0.0) {
        return Err(domain("source power must be > 0"));
    }
    Ok(EveChannel::Unjammed(GammaSnrParams::integer(g.n * m_i, m_i as f64 / snr_i)?))
}

/// `P(SINR > g)` as the finite double sum
/// `e^(-bI g) bJ^nuJ / Gamma(nuJ) sum_{n < nuI} (bI g)^n / n! sum_{q <= n} C(n, q) Gamma(q + nuJ) (bI g + bJ)^-(q + nuJ)`.
pub fn eve_sinr_ccdf(p: &EveLinkParams, g: f64) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(domain(format!("gamma must be >= 0, got {g}")));
    }
    if g.is_infinite() {
        return Ok(0.0);
    }
    let (bi, bj) = (p.beta_i, p.beta_j);
    let nu_j = p.nu_j as f64;
    let x = bi * g;
    let ln_base = -x + nu_j * bj.ln() - ln_gamma_unchecked(nu_j);
    let ln_den = (x + bj).ln();
    let mut total = 0.0;
    for n in 0..p.nu_i {
        let fnn = n as f64;
        let ln_outer = if n == 0 { 0.0 } else { fnn * x.ln() } - ln_gamma_unchecked(fnn + 1.0);
        if ln_outer == f64::NEG_INFINITY {
            continue;
        }
        for q in 0..=n {
            let omega = q as f64 + nu_j;
            let ln_term = ln_base + ln_outer + binomial(n, q).ln() + ln_gamma_unchecked(omega) - omega * ln_den;
            total += ln_term.exp();
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// CDF of the eavesdropper SINR in closed form.
pub fn eve_sinr_cdf(p: &EveLinkParams, g: f64) -> Result<f64> {
    Ok((1.0 - eve_sinr_ccdf(p, g)?).clamp(0.0, 1.0))
}

/// CDF of the eavesdropper SINR as
/// `int_0^inf F_I(g (1 + y)) f_J(y) dy` by adaptive quadrature.
pub fn eve_sinr_cdf_integral(p: &EveLinkParams, g: f64) -> Result<Evaluation> {
    if !(g >= 0.0) {
        return Err(domain(format!("gamma must be >= 0, got {g}")));
    }
    if g == 0.0 {
        return Ok(Evaluation::exact(0.0));
    }
    let jam = p.jammer();
    let nu_i = p.nu_i as f64;
    let cfg = QuadratureConfig::default().with_tolerances(1e-16, 1e-12);
    let mut failure = None;
    let r = integrate_semi_infinite(
        |y| {
            let inner = gamma_p(nu_i, p.beta_i * g * (1.0 + y));
            let f = jam.pdf(y);
            match (inner, f) {
                (Ok(a), Ok(b)) => a * b,
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        jam.mean(),
        &cfg,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r)
}

/// Ergodic capacity `int (1 - F(g)) / (1 + g) dg / ln 2` with one adaptive
/// quadrature per `(n, q)` term of the complementary CDF.
pub fn capacity_eve_quadrature(p: &EveLinkParams) -> Result<Evaluation> {
    let (bi, bj) = (p.beta_i, p.beta_j);
    let nu_j = p.nu_j as f64;
    let cfg = QuadratureConfig::default().with_tolerances(1e-15, 1e-10);
    let mut total = Evaluation::exact(0.0);
    for n in 0..p.nu_i {
        let fnn = n as f64;
        for q in 0..=n {
            let omega = q as f64 + nu_j;
            let ln_coef = binomial(n, q).ln() + nu_j * bj.ln() - ln_gamma_unchecked(nu_j) + ln_gamma_unchecked(omega)
                + fnn * bi.ln()
                - ln_gamma_unchecked(fnn + 1.0)
                - LN_2.ln();
            let scale = (fnn.max(1.0) / bi).min(1e6);
            let term = integrate_semi_infinite(
                |g| {
                    if g == 0.0 {
                        return if n == 0 { (ln_coef - omega * bj.ln()).exp() } else { 0.0 };
                    }
                    let ln = ln_coef - bi * g + fnn * g.ln() - omega * (bi * g + bj).ln() - g.ln_1p();
                    ln.exp()
                },
                scale,
                &cfg,
            )?;
            total = total + term;
        }
    }
    Ok(total)
}

/// Ergodic capacity as a double sum of bivariate Fox H-functions:
/// `sum_{n < nuI} sum_{q <= n} C(n, q) / (ln 2 Gamma(nuJ) n! bI bJ^q) H_{n, q + nuJ}(1 / bI, 1 / bJ)`.
pub fn capacity_eve_foxh(p: &EveLinkParams, quad: &QuadratureConfig) -> Result<Evaluation> {
    let (bi, bj) = (p.beta_i, p.beta_j);
    let nu_j = p.nu_j as f64;
    let mut total = Evaluation::exact(0.0);
    for n in 0..p.nu_i {
        for q in 0..=n {
            let spec = BivariateFoxHSpec::new(n, q as f64 + nu_j)?;
            let ln_scale = binomial(n, q).ln()
                - LN_2.ln()
                - ln_gamma_unchecked(nu_j)
                - ln_gamma_unchecked(n as f64 + 1.0)
                - bi.ln()
                - q as f64 * bj.ln();
            total = total + fox_h_bivariate_scaled(&spec, 1.0 / bi, 1.0 / bj, ln_scale, quad)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn unit_case() {
        let p = EveLinkParams::new(1, 1.0, 1, 1.0).unwrap();
        let v = eve_sinr_cdf(&p, 1.0).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp() / 2.0)).abs() < 1e-15);
        assert_eq!(eve_sinr_cdf(&p, 0.0).unwrap(), 0.0);
        assert!((eve_sinr_cdf(&p, 1e6).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_integral() {
        for &(ni, bi, nj, bj) in &[(1, 1.0, 1, 1.0), (3, 0.4, 2, 1.5), (8, 2.0, 4, 0.2), (5, 0.05, 1, 3.0)] {
            let p = EveLinkParams::new(ni, bi, nj, bj).unwrap();
            for &g in &[0.05, 0.3, 1.0, 4.0, 20.0] {
                let a = eve_sinr_cdf(&p, g).unwrap();
                let b = eve_sinr_cdf_integral(&p, g).unwrap().value;
                assert!(rel(a, b) < 1e-8 || (a - b).abs() < 1e-14, "{p:?} g={g}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn stronger_jamming_raises_cdf() {
        let mut prev = 0.0;
        for &bj in &[10.0, 3.0, 1.0, 0.3, 0.1] {
            let p = EveLinkParams::new(2, 0.5, 2, bj).unwrap();
            let v = eve_sinr_cdf(&p, 1.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn foxh_matches_quadrature() {
        let quad = QuadratureConfig::default();
        for &(ni, bi, nj, bj) in &[(1, 1.0, 1, 1.0), (2, 0.3, 2, 1.5), (3, 0.1, 1, 0.5)] {
            let p = EveLinkParams::new(ni, bi, nj, bj).unwrap();
            let a = capacity_eve_foxh(&p, &quad).unwrap().value;
            let b = capacity_eve_quadrature(&p).unwrap().value;
            assert!(rel(a, b) < 1e-6, "{p:?}: {a} vs {b}");
        }
    }

    #[test]
    fn capacity_limits_and_trend() {
        let weak = EveLinkParams::new(2, 1e6, 1, 1.0).unwrap();
        assert!(capacity_eve_quadrature(&weak).unwrap().value < 1e-5);
        let mut prev = 0.0;
        for &bj in &[0.1, 0.5, 2.0, 10.0] {
            let p = EveLinkParams::new(2, 0.5, 2, bj).unwrap();
            let v = capacity_eve_quadrature(&p).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn geometry_mapping() {
        let mut g = NetworkGeometry {
            n: 1,
            k: 1,
            r_sr: 1.0,
            r_se: 1.0,
            r_je: 1.0,
            delta: 2.0,
            p_s: 1.0,
            p_j: 1.0,
            noise_var_r: 1.0,
            noise_var_e: 1.0,
        };
        let p = eve_link_params_from_geometry(&g, 1, 1).unwrap();
        assert_eq!((p.nu_i(), p.beta_i()), (1, 1.0));
        g.n = 4;
        let p = eve_link_params_from_geometry(&g, 2, 1).unwrap();
        assert_eq!(p.nu_i(), 8);
        assert!((p.source().mean() - 4.0).abs() < 1e-12);
        g.k = 0;
        assert!(eve_link_params_from_geometry(&g, 2, 1).is_err());
        assert!(matches!(eve_channel_from_geometry(&g, 2, 1).unwrap(), EveChannel::Unjammed(_)));
    }
}
