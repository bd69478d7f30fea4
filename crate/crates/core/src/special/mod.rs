//! Gamma-family functions, Fox H / Meijer G and adaptive quadrature.

mod fox_h;
mod gamma;
mod incgamma;
mod quad;
mod solve;

pub use fox_h::{fox_h, fox_h_ln_arg, fox_h_scaled, meijer_g, FoxHSpec, MeijerReduction};
pub use gamma::{digamma, ln_gamma_complex, log_gamma};
pub use incgamma::{erfc, lower_inc_gamma, reg_lower_inc_gamma, reg_upper_inc_gamma, upper_inc_gamma};
pub use quad::{adaptive_quad, adaptive_quad_points, integrate, QuadEstimate, QuadratureConfig};

pub(crate) use gamma::{lgamma, psi, trigamma};
pub(crate) use incgamma::{inc_gamma_pair, inc_gamma_pair_ln};
pub(crate) use solve::{brent, golden_min};
