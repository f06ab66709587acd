//! Characters of the cover, the eta multiplier system `v_k` and the
//! representations `rho_{a,m}`.

use crate::covergroup::{CoverElement, Gen, SL2Z};
use crate::linalg::{max_abs, unitary_eigen, unitarity_defect, CMatrix};
use crate::specfun::{ln_eta_pow_2k, ln, BranchSpec};
use crate::{c64, Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A character of the cover group, fixed by its values on `tau~` and `sigma~`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Character {
    pub value_on_t: C64,
    pub value_on_s: C64,
    pub weight_tag: f64,
}

impl Character {
    /// `chi_k`: `tau~ -> e^{pi i k/6}`, `sigma~ -> e^{-pi i k/2}`.
    pub fn chi(k: f64) -> Self {
        Self {
            value_on_t: C64::from_polar(1.0, PI * k / 6.0),
            value_on_s: C64::from_polar(1.0, -PI * k / 2.0),
            weight_tag: k,
        }
    }

    /// `phi_a`: `tau~ -> e^{pi i a/6}`, `sigma~ -> e^{-pi i a/2}`.
    pub fn phi(a: i64) -> Self {
        let mut c = Self::chi(a as f64);
        c.weight_tag = a as f64;
        c
    }

    fn powi(z: C64, n: i64) -> C64 {
        if n >= 0 {
            z.powi(n as i32)
        } else {
            z.conj().powi((-n) as i32)
        }
    }

    /// `chi(l(gamma))`.
    pub fn on_lift(&self, gamma: &SL2Z) -> C64 {
        let word = gamma.word();
        let (t, s) = word.letter_counts();
        let w = word.lift_product().winding;
        // l(-I) = sigma~^2 and kappa~(2 pi) = sigma~^{-4}
        let s_total = s + if word.neg { 2 } else { 0 } + 4 * w;
        Self::powi(self.value_on_t, t) * Self::powi(self.value_on_s, s_total)
    }

    /// Value on a cover element whose base lies in `SL2(Z)`.
    pub fn on_cover(&self, g: &CoverElement) -> Result<C64> {
        let gamma = integral_base(g)?;
        Ok(self.on_lift(&gamma) * Self::powi(self.value_on_s, -4 * g.winding))
    }
}

fn integral_base(g: &CoverElement) -> Result<SL2Z> {
    let b = g.base;
    let r = |x: f64| -> Result<i64> {
        if (x - x.round()).abs() > 1e-12 {
            Err(Error::Domain("cover element does not lie over SL2(Z)".into()))
        } else {
            Ok(x.round() as i64)
        }
    };
    SL2Z::new(r(b.a)?, r(b.b)?, r(b.c)?, r(b.d)?)
}

/// Serializable description of a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RepDescriptor {
    Trivial { dim: usize },
    RhoAm { a: i64, m: u32 },
}

/// Which phase sign enters the matrix of `sigma~` in `rho_{a,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RhoSign {
    /// `e^{-pi i j j'/m}`.
    Minus,
    /// `e^{+pi i j j'/m}`.
    Plus,
}

/// Finite-dimensional unitary representation of `SL2(Z)` given on generators.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryRep {
    pub dim: usize,
    pub r_t: CMatrix,
    pub r_s: CMatrix,
    pub label: RepDescriptor,
}

/// Orthonormal eigenbasis of `v_k(T) rho(T)` with exponents `kappa_l` in `[0, 1)`.
#[derive(Debug, Clone)]
pub struct KappaSpectrum {
    pub kappas: Vec<f64>,
    /// Columns are the eigenvectors `e_l`.
    pub vectors: CMatrix,
}

fn mat_pow(m: &CMatrix, n: i64) -> CMatrix {
    let base = if n < 0 { m.adjoint() } else { m.clone() };
    let mut out = CMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..n.unsigned_abs() {
        out = &out * &base;
    }
    out
}

impl UnitaryRep {
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            r_t: CMatrix::identity(dim, dim),
            r_s: CMatrix::identity(dim, dim),
            label: RepDescriptor::Trivial { dim },
        }
    }

    pub fn from_descriptor(d: RepDescriptor) -> Result<Self> {
        match d {
            RepDescriptor::Trivial { dim } => Ok(Self::trivial(dim)),
            RepDescriptor::RhoAm { a, m } => rho_am(a, m),
        }
    }

    /// `rho(gamma)` through the word of `gamma`, with `rho(-I) = R_S^2`.
    pub fn eval(&self, gamma: &SL2Z) -> CMatrix {
        let word = gamma.word();
        let mut out = if word.neg {
            &self.r_s * &self.r_s
        } else {
            CMatrix::identity(self.dim, self.dim)
        };
        for g in &word.gens {
            out = match g {
                Gen::T(n) => out * mat_pow(&self.r_t, *n),
                Gen::S => out * &self.r_s,
            };
        }
        out
    }

    /// Largest deviation from unitarity of the generator matrices.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_defect(&self.r_t).max(unitarity_defect(&self.r_s))
    }

    /// Residuals of `M_s^2 M_t = M_t M_s^2` and `(M_t M_s)^3 = M_s^2`
    /// for `M = chi * R`.
    pub fn relation_residuals(&self, chi: &Character) -> (f64, f64) {
        let mt = self.r_t.map(|z| z * chi.value_on_t);
        let ms = self.r_s.map(|z| z * chi.value_on_s);
        let ms2 = &ms * &ms;
        let r1 = max_abs(&(&ms2 * &mt - &mt * &ms2));
        let ts = &mt * &ms;
        let r2 = max_abs(&(&ts * &ts * &ts - &ms2));
        (r1, r2)
    }
}

/// The `2m`-dimensional matrices of `rho_{a,m}` for the given phase sign.
pub fn rho_am_variant(a: i64, m: u32, sign: RhoSign) -> Result<UnitaryRep> {
    if m == 0 {
        return Err(Error::Parameter("rho_{a,m} needs m >= 1".into()));
    }
    let a = a.rem_euclid(12);
    let n = 2 * m as usize;
    let mf = m as f64;
    let sgn = match sign {
        RhoSign::Minus => -1.0,
        RhoSign::Plus => 1.0,
    };
    let r_t = CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            let j = (r + 1) as f64;
            C64::from_polar(1.0, PI * (a as f64 / 6.0 + 1.0 / 12.0 - j * j / (2.0 * mf)))
        } else {
            c64(0.0, 0.0)
        }
    });
    let norm = 1.0 / (2.0 * mf).sqrt();
    let r_s = CMatrix::from_fn(n, n, |r, c| {
        let (j, jp) = ((r + 1) as f64, (c + 1) as f64);
        let phase = -PI * a as f64 / 2.0 + sgn * PI * j * jp / mf;
        C64::from_polar(norm, phase)
    });
    Ok(UnitaryRep { dim: n, r_t, r_s, label: RepDescriptor::RhoAm { a, m } })
}

/// Tolerance for accepting the defining relations of the cover group.
pub const RELATION_TOL: f64 = 1e-12;

/// Whether a variant satisfies unitarity and the cover relations.
pub fn rho_variant_passes(rep: &UnitaryRep) -> bool {
    let (r1, r2) = rep.relation_residuals(&Character::chi(0.0));
    rep.unitarity_residual() < RELATION_TOL && r1 < RELATION_TOL && r2 < RELATION_TOL
}

/// `rho_{a,m}`, choosing the phase variant that satisfies the cover relations.
pub fn rho_am(a: i64, m: u32) -> Result<UnitaryRep> {
    for sign in [RhoSign::Minus, RhoSign::Plus] {
        let rep = rho_am_variant(a, m, sign)?;
        if rho_variant_passes(&rep) {
            return Ok(rep);
        }
    }
    Err(Error::Construction(format!("no phase variant of rho_({a},{m}) satisfies the relations")))
}

/// `v_k(gamma) = chi_k(l(gamma))` through the word of `gamma`.
pub fn v_k_word(gamma: &SL2Z, k: f64) -> C64 {
    Character::chi(k).on_lift(gamma)
}

fn v_k_eta(gamma: &SL2Z, k: f64, z: C64) -> Result<C64> {
    let gz = gamma.act(z);
    let j = gamma.c as f64 * z + gamma.d as f64;
    let lj = ln(j, BranchSpec::UpperClosed);
    Ok((ln_eta_pow_2k(gz, k)? - ln_eta_pow_2k(z, k)? - k * lj).exp())
}

/// A probe point where both `z` and `gamma z` stay away from the real axis.
pub fn balanced_probe(gamma: &SL2Z, tau: C64) -> C64 {
    if gamma.c == 0 {
        tau
    } else {
        let c = gamma.c as f64;
        -(gamma.d as f64) / c + tau / c.abs()
    }
}

/// `v_k(gamma) = eta^{2k}(gamma z) / ((c z + d)^k eta^{2k}(z))`, verified to be
/// independent of the probe and equal to the word evaluation.
pub fn v_k(gamma: &SL2Z, k: f64, z_probe: C64) -> Result<C64> {
    if !(z_probe.im > 0.0) {
        return Err(Error::Domain("probe point must lie in H".into()));
    }
    let v1 = v_k_eta(gamma, k, z_probe)?;
    let v2 = v_k_eta(gamma, k, balanced_probe(gamma, c64(0.31, 1.17)))?;
    if (v1 - v2).norm() > 1e-10 {
        return Err(Error::Consistency(format!("eta quotient depends on the probe: {v1} vs {v2}")));
    }
    let w = v_k_word(gamma, k);
    if (v1 - w).norm() > 1e-9 {
        return Err(Error::Consistency(format!("eta quotient {v1} differs from word value {w}")));
    }
    Ok(v1)
}

/// Eta quotient at one probe, without cross-checks.
pub fn v_k_eta_quotient(gamma: &SL2Z, k: f64, z_probe: C64) -> Result<C64> {
    if !(z_probe.im > 0.0) {
        return Err(Error::Domain("probe point must lie in H".into()));
    }
    v_k_eta(gamma, k, z_probe)
}

/// Combined multiplier `v_k(gamma) rho(gamma)`.
pub fn multiplier(rep: &UnitaryRep, k: f64, gamma: &SL2Z) -> CMatrix {
    rep.eval(gamma).map(|z| z * v_k_word(gamma, k))
}

/// Diagonalise `v_k(T) rho(T)`.
pub fn kappa_spectrum(rep: &UnitaryRep, k: f64) -> Result<KappaSpectrum> {
    let m = rep.r_t.map(|z| z * C64::from_polar(1.0, PI * k / 6.0));
    let (vals, vectors) = unitary_eigen(&m)?;
    let kappas = vals
        .iter()
        .map(|v| {
            let x = (v.arg() / (2.0 * PI)).rem_euclid(1.0);
            if x > 1.0 - 1e-13 {
                0.0
            } else {
                x
            }
        })
        .collect();
    Ok(KappaSpectrum { kappas, vectors })
}
