//! Link budgets, outage probabilities, ergodic and secrecy capacities.

pub mod eve;
pub mod receiver;

pub use eve::{
    capacity_eve_foxh, capacity_eve_quadrature, eve_channel_from_geometry, eve_link_params_from_geometry,
    eve_sinr_ccdf, eve_sinr_cdf, eve_sinr_cdf_integral, EveChannel, EveLinkParams,
};
pub use receiver::{
    capacity_gamma_closed_form, capacity_gamma_quadrature, capacity_receiver_quadrature, capacity_receiver_series,
    capacity_receiver_series_with, outage_receiver, OutageQuery, RECEIVER_SERIES,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_non_negative, ensure_positive, Result};

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// An SNR threshold tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "unit", content = "value", rename_all = "lowercase")]
pub enum Threshold {
    Db(f64),
    Linear(f64),
}

impl Threshold {
    pub fn linear(&self) -> f64 {
        match *self {
            Threshold::Db(db) => db_to_linear(db),
            Threshold::Linear(x) => x,
        }
    }

    pub fn db(&self) -> f64 {
        match *self {
            Threshold::Db(db) => db,
            Threshold::Linear(x) => linear_to_db(x),
        }
    }
}

/// Mean SNR `p * r^(-delta) / noise_var` of a link.
pub fn mean_snr(p: f64, r: f64, delta: f64, noise_var: f64) -> Result<f64> {
    ensure_non_negative("power", p)?;
    ensure_positive("distance", r)?;
    ensure_non_negative("delta", delta)?;
    ensure_positive("noise variance", noise_var)?;
    Ok(p * r.powf(-delta) / noise_var)
}

/// Node placement, antenna counts and powers of the source S, receiver R,
/// eavesdropper E and jammer J.
///
/// Powers are linear watts per antenna. `k = 0` or `p_j = 0` describes a
/// network without jamming.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkGeometry {
    pub n: u32,
    pub k: u32,
    pub r_sr: f64,
    pub r_se: f64,
    pub r_je: f64,
    pub delta: f64,
    pub p_s: f64,
    pub p_j: f64,
    pub noise_var_r: f64,
    pub noise_var_e: f64,
}

impl NetworkGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(domain("n_bs_antennas must be >= 1"));
        }
        ensure_positive("r_sr", self.r_sr)?;
        ensure_positive("r_se", self.r_se)?;
        ensure_positive("r_je", self.r_je)?;
        ensure_non_negative("delta", self.delta)?;
        ensure_non_negative("p_s", self.p_s)?;
        ensure_non_negative("p_j", self.p_j)?;
        ensure_positive("noise_var_r", self.noise_var_r)?;
        ensure_positive("noise_var_e", self.noise_var_e)?;
        Ok(())
    }

    /// Per-antenna mean SNR of the S-R link.
    pub fn receiver_mean_snr(&self) -> Result<f64> {
        mean_snr(self.p_s, self.r_sr, self.delta, self.noise_var_r)
    }

    /// Per-antenna mean SNR of the S-E link.
    pub fn eve_mean_snr(&self) -> Result<f64> {
        mean_snr(self.p_s, self.r_se, self.delta, self.noise_var_e)
    }

    /// Per-antenna mean interference-to-noise ratio of the J-E link.
    pub fn jammer_mean_inr(&self) -> Result<f64> {
        mean_snr(self.p_j, self.r_je, self.delta, self.noise_var_e)
    }

    pub fn is_jammed(&self) -> bool {
        self.k > 0 && self.p_j > 0.0
    }
}

/// `max(c_r - c_e, 0)`.
pub fn secrecy_capacity(c_r: f64, c_e: f64) -> f64 {
    (c_r - c_e).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    OutageR,
    OutageE,
    CapacityR,
    CapacityE,
    Secrecy,
}

impl Metric {
    pub const ALL: [Metric; 5] = [Metric::OutageR, Metric::OutageE, Metric::CapacityR, Metric::CapacityE, Metric::Secrecy];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::OutageR => "outage_r",
            Metric::OutageE => "outage_e",
            Metric::CapacityR => "capacity_r",
            Metric::CapacityE => "capacity_e",
            Metric::Secrecy => "secrecy",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    pub fn is_probability(&self) -> bool {
        matches!(self, Metric::OutageR | Metric::OutageE)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::ClosedForm, Method::Quadrature, Method::MonteCarlo];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.tag() == s)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One metric value and how it was obtained. For Monte Carlo entries the
/// error is the standard error; otherwise it is the numerical error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub metric: Metric,
    pub method: Method,
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    entries: Vec<ReportEntry>,
}

impl SecrecyReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry, rejecting probabilities outside `[0, 1]` and negative capacities.
    pub fn push(&mut self, entry: ReportEntry) -> Result<()> {
        let ok = if entry.metric.is_probability() {
            (0.0..=1.0).contains(&entry.value)
        } else {
            entry.value >= 0.0 && entry.value.is_finite()
        };
        if !ok {
            return Err(domain(format!("{} value {} out of range", entry.metric, entry.value)));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[ReportEntry] {
        &self.entries
    }

    pub fn get(&self, metric: Metric, method: Method) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.metric == metric && e.method == method)
    }

    /// Appends a secrecy entry computed from the receiver and eavesdropper
    /// capacities obtained with `method`, if both are present.
    pub fn derive_secrecy(&mut self, method: Method) -> Result<()> {
        let (Some(r), Some(e)) = (self.get(Metric::CapacityR, method), self.get(Metric::CapacityE, method)) else {
            return Ok(());
        };
        let entry = ReportEntry {
            metric: Metric::Secrecy,
            method,
            value: secrecy_capacity(r.value, e.value),
            error: r.error + e.error,
        };
        self.push(entry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_geometry() -> NetworkGeometry {
        NetworkGeometry {
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
        }
    }

    #[test]
    fn mean_snr_examples() {
        assert_eq!(mean_snr(1.0, 1.0, 2.0, 1.0).unwrap(), 1.0);
        assert!((mean_snr(2.0, 10.0, 2.0, 0.5).unwrap() - 0.04).abs() < 1e-15);
        let a = mean_snr(3.0, 7.0, 2.0, 1.0).unwrap();
        let b = mean_snr(3.0, 14.0, 2.0, 1.0).unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
        assert!(mean_snr(1.0, 0.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn geometry_validation() {
        assert!(unit_geometry().validate().is_ok());
        let mut g = unit_geometry();
        g.r_je = 0.0;
        assert!(g.validate().is_err());
        let mut g = unit_geometry();
        g.n = 0;
        assert!(g.validate().is_err());
        let mut g = unit_geometry();
        g.k = 0;
        assert!(g.validate().is_ok());
        assert!(!g.is_jammed());
    }

    #[test]
    fn secrecy_examples() {
        assert_eq!(secrecy_capacity(2.0, 2.0), 0.0);
        assert_eq!(secrecy_capacity(5.5, 1.5), 4.0);
        assert_eq!(secrecy_capacity(1.0, 3.0), 0.0);
    }

    #[test]
    fn report_checks_ranges() {
        let mut r = SecrecyReport::new();
        let e = ReportEntry { metric: Metric::OutageE, method: Method::ClosedForm, value: 1.2, error: 0.0 };
        assert!(r.push(e).is_err());
        r.push(ReportEntry { metric: Metric::CapacityR, method: Method::Quadrature, value: 3.0, error: 1e-9 }).unwrap();
        r.push(ReportEntry { metric: Metric::CapacityE, method: Method::Quadrature, value: 1.0, error: 1e-9 }).unwrap();
        r.derive_secrecy(Method::Quadrature).unwrap();
        assert_eq!(r.get(Metric::Secrecy, Method::Quadrature).unwrap().value, 2.0);
        r.derive_secrecy(Method::MonteCarlo).unwrap();
        assert!(r.get(Metric::Secrecy, Method::MonteCarlo).is_none());
    }

    #[test]
    fn tags_round_trip() {
        for m in Metric::ALL {
            assert_eq!(Metric::parse(m.name()), Some(m));
        }
        for m in Method::ALL {
            assert_eq!(Method::parse(m.tag()), Some(m));
        }
    }

    proptest! {
        #[test]
        fn db_round_trip(db in -80.0f64..80.0) {
            let t = Threshold::Db(db);
            prop_assert!((Threshold::Linear(t.linear()).db() - db).abs() < 1e-12);
        }

        #[test]
        fn secrecy_is_nonnegative_and_lipschitz(a in 0.0f64..20.0, b in 0.0f64..20.0, d in -1.0f64..1.0) {
            let s = secrecy_capacity(a, b);
            prop_assert!(s >= 0.0);
            let a2 = (a + d).max(0.0);
            prop_assert!((secrecy_capacity(a2, b) - s).abs() <= (a2 - a).abs() + 1e-12);
            let b2 = (b + d).max(0.0);
            prop_assert!((secrecy_capacity(a, b2) - s).abs() <= (b2 - b).abs() + 1e-12);
        }
    }
}
