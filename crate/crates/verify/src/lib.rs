//! Numerical verification suites for `maass-core`, one per acceptance criterion.

use serde::Serialize;
use std::fmt;
use std::str::FromStr;

mod analysis;
mod forms;
mod groups;
mod theta;

pub use theta::{chi12_jacobi_data, theta_checks};

/// One verified quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual < tolerance`; a NaN residual fails.
    pub fn below(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, pass: residual < tolerance }
    }

    /// Exact check, recorded with residual 0 or 1.
    pub fn exact(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), residual: if ok { 0.0 } else { 1.0 }, tolerance: 0.5, pass: ok }
    }

    /// A failure caused by an error in the computation itself.
    pub fn failed(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self { name: format!("{}: {err}", name.into()), residual: f64::INFINITY, tolerance: 0.0, pass: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Cover,
    Multipliers,
    Rho,
    Prs,
    Lerch,
    Averages,
    Scan,
    Periods,
    Reproducing,
    Restriction,
    Theta,
    Jacobi,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Cover,
        Suite::Multipliers,
        Suite::Rho,
        Suite::Prs,
        Suite::Lerch,
        Suite::Averages,
        Suite::Scan,
        Suite::Periods,
        Suite::Reproducing,
        Suite::Restriction,
        Suite::Theta,
        Suite::Jacobi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cover => "cover",
            Suite::Multipliers => "multipliers",
            Suite::Rho => "rho",
            Suite::Prs => "prs",
            Suite::Lerch => "lerch",
            Suite::Averages => "averages",
            Suite::Scan => "scan",
            Suite::Periods => "periods",
            Suite::Reproducing => "reproducing",
            Suite::Restriction => "restriction",
            Suite::Theta => "theta",
            Suite::Jacobi => "jacobi",
        }
    }

    /// Number of the acceptance criterion the suite covers.
    pub fn criterion(self) -> usize {
        Suite::ALL.iter().position(|&s| s == self).unwrap() + 1
    }

    pub fn run(self) -> Vec<Check> {
        match self {
            Suite::Cover => groups::cover(),
            Suite::Multipliers => groups::multipliers(),
            Suite::Rho => groups::rho(),
            Suite::Prs => groups::prs(),
            Suite::Lerch => analysis::lerch_suite(),
            Suite::Averages => analysis::averages(),
            Suite::Scan => analysis::scan(),
            Suite::Periods => forms::periods(),
            Suite::Reproducing => forms::reproducing(),
            Suite::Restriction => forms::restriction(),
            Suite::Theta => theta::theta_laws(),
            Suite::Jacobi => theta::jacobi_roundtrip(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite '{s}', expected one of {}", names.join(", "))
            })
    }
}

/// Record the result of a fallible measurement.
pub(crate) fn measured(name: &str, tol: f64, r: maass_core::Result<f64>) -> Check {
    match r {
        Ok(v) => Check::below(name, v, tol),
        Err(e) => Check::failed(name, e),
    }
}

pub(crate) fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn max_diff(a: &[maass_core::C64], b: &[maass_core::C64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}
