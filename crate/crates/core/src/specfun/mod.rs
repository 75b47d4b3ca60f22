//! Special functions required by the closed-form secrecy metrics.

mod contour;
pub mod foxh;
pub mod gamma;
pub mod hyper;
pub mod meijer;
pub mod series;

pub use foxh::{fox_h_bivariate, BivariateFoxHSpec};
pub use gamma::{beta, binomial, gamma, gamma_lower, gamma_p, gamma_q, gamma_upper, ln_beta, ln_gamma, ln_gamma_complex, pochhammer};
pub use hyper::{gauss_2f1, ln_gauss_2f1};
pub use meijer::{meijer_g, MeijerGSpec};
pub use series::SeriesConfig;
