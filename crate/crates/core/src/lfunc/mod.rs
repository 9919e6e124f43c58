//! Numerical L-values and the experiments built on them.

pub mod afe;
pub mod diagnostics;
pub mod dirichlet;
pub mod gamma;
pub mod hurwitz;
pub mod moment;

pub use afe::{divisor_afe_check, AfeKernel, Quadrature};
pub use diagnostics::{partial_sum_profile, weyl_ratio, PartialSumProfile};
pub use dirichlet::{dirichlet_l, euler_factor_residual, functional_equation_residual, HurwitzTable, LValue};
pub use hurwitz::{hurwitz_zeta, zeta, zeta_borwein};
pub use moment::{fourth_moment_coset, partition_check};
