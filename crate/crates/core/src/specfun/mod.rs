//! Complex special functions with explicit branch conventions.

mod branch;
mod eta;
mod gamma;
mod hyper;
mod lerch;
mod whittaker;

pub use branch::{arg, cpow, cpow_principal, ln, BranchSpec};
pub use eta::{eta_pow_2k, ln_eta_pow_2k};
pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub use hyper::{hyp1f1, hyp2f1, hyp2f1_with_derivative};
pub use lerch::{lerch, lerch_asymptotic_coeffs, lerch_continued, LerchMode, LERCH_DEFAULT_TERMS, LERCH_SWITCH_RADIUS};
pub use whittaker::{
    whittaker, whittaker_w_by, whittaker_w_with_derivative, WhittakerKind, WhittakerMethod, WHITTAKER_SERIES_LIMIT,
};
