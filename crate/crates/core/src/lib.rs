//! Physical-layer secrecy metrics for a base-station link protected by a
//! friendly jammer, under double kappa-mu shadowed fading and its special
//! cases (Rician shadowed, Nakagami-m).
//!
//! Every closed form has an independent numerical route next to it:
//! Mellin-Barnes contour integrals against real-line quadrature, and both
//! against the Monte Carlo simulator in [`montecarlo`].

pub mod error;
pub mod fading;
pub mod montecarlo;
pub mod quad;
pub mod secrecy;
pub mod specfun;

pub use error::{Error, Result};
pub use quad::{Evaluation, QuadratureConfig};
pub use fading::{DoubleKappaMuShadowedParams, GammaSnrParams, RicianShadowedParams, SamplerSeed};
pub use montecarlo::{Estimate, FadingSpec, LinkFading, SimConfig};
pub use secrecy::{EveChannel, EveLinkParams, Method, Metric, NetworkGeometry, OutageQuery, SecrecyReport, Threshold};
