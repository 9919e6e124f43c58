//! Complete character and exponential sums, each with a brute-force
//! evaluator and the structural evaluation or bound it is checked against.

pub mod gauss;
pub mod quadform;
pub mod rho;

pub use gauss::{gauss_sum, gauss_vanishing_check, GaussTable};
pub use quadform::{quadratic_gauss, QuadraticFormModP};
pub use rho::{rho, rho_brute, rho_lemma_bound};
pub mod gsum;
pub use gsum::{g_bound, g_bound_check, g_sum, GKernel, GMethod};
pub mod kl3;
pub use kl3::{kl3, kl3_expansion};
pub mod tchi;
pub use tchi::{tchi, tchi_structural_check};
pub mod hhat;
pub use hhat::lemma_hhat_sum;
pub mod stationary;
pub use stationary::{stationary_reduction_check, Family};
pub mod ramanujan;
pub use ramanujan::{ramanujan_series, ramanujan_series_check, RamanujanSeries};
