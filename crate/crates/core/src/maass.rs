//! Maass forms as Fourier–Whittaker expansions, a weight-0 Hejhal solver and
//! weight-shifting operators.

use crate::covergroup::SL2Z;
use crate::linalg::{CMatrix, CVector};
use nalgebra::DMatrix;
use crate::multipliers::{kappa_spectrum, RepDescriptor, UnitaryRep};
use crate::specfun::whittaker_w_with_derivative;
use crate::{c64, Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Behaviour of a weight-0 form under `x -> -x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// One Fourier coefficient `c_l(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub l: usize,
    pub n: f64,
    pub c: C64,
}

/// `u(z) = sum_l e_l sum_n c_l(n) e^{2 pi i n x} W_{sign(n) k/2, s-1/2}(4 pi |n| y)`.
#[derive(Debug, Clone)]
pub struct FourierExpansion {
    pub k: f64,
    pub s: C64,
    pub rep: RepDescriptor,
    pub kappas: Vec<f64>,
    /// Columns are the eigenvectors `e_l` of `v_k(T) rho(T)`.
    pub basis: CMatrix,
    pub terms: Vec<FourierTerm>,
    pub parity: Option<Parity>,
}

/// Value and Wirtinger derivatives of a function on `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: Vec<C64>,
    pub dz: Vec<C64>,
    pub dzbar: Vec<C64>,
}

/// Persisted form of a coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub format_version: u32,
    pub k: f64,
    pub s_re: f64,
    pub s_im: f64,
    pub rep: RepDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub l: usize,
    pub n: f64,
    pub c_re: f64,
    pub c_im: f64,
}

pub const TABLE_FORMAT_VERSION: u32 = 1;

impl FourierExpansion {
    /// Expansion with the given terms; the eigenbasis comes from `(rep, k)`.
    pub fn new(k: f64, s: C64, rep: &UnitaryRep, terms: Vec<FourierTerm>) -> Result<Self> {
        let spec = kappa_spectrum(rep, k)?;
        for t in &terms {
            let kap = *spec
                .kappas
                .get(t.l)
                .ok_or_else(|| Error::Parameter(format!("component {} out of range", t.l)))?;
            if ((t.n - kap).rem_euclid(1.0)).min((kap - t.n).rem_euclid(1.0)) > 1e-9 || t.n == 0.0 {
                return Err(Error::Parameter(format!("index n = {} not congruent to kappa = {kap}", t.n)));
            }
        }
        Ok(Self {
            k,
            s,
            rep: rep.label,
            kappas: spec.kappas,
            basis: spec.vectors,
            terms,
            parity: None,
        })
    }

    /// Weight-0 scalar form with `c(-n) = +-c(n)` from the positive coefficients.
    pub fn weight0(s: C64, parity: Parity, positive: &[C64]) -> Self {
        let sign = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let mut terms = Vec::with_capacity(2 * positive.len());
        for (i, c) in positive.iter().enumerate() {
            let n = (i + 1) as f64;
            terms.push(FourierTerm { l: 0, n, c: *c });
            terms.push(FourierTerm { l: 0, n: -n, c: sign * c });
        }
        Self {
            k: 0.0,
            s,
            rep: RepDescriptor::Trivial { dim: 1 },
            kappas: vec![0.0],
            basis: CMatrix::identity(1, 1),
            terms,
            parity: Some(parity),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn n_max(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.n.abs()))
    }

    /// Bound on the relative truncation error at height `y`.
    pub fn truncation_bound(&self, y: f64) -> f64 {
        (-2.0 * PI * self.n_max() * y).exp()
    }

    /// Components `u_l` with their Wirtinger derivatives, in the eigenbasis.
    pub fn eval_components(&self, z: C64) -> Result<Vec<(C64, C64, C64)>> {
        let mu = self.s - 0.5;
        let (x, y) = (z.re, z.im);
        let mut out = vec![(c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)); self.kappas.len()];
        for t in &self.terms {
            let big_y = 4.0 * PI * t.n.abs() * y;
            let kappa = t.n.signum() * self.k / 2.0;
            let (w, dw) = whittaker_w_with_derivative(kappa, mu, big_y)?;
            let e = C64::from_polar(1.0, 2.0 * PI * t.n * x);
            let v = t.c * e * w;
            let dx = v * c64(0.0, 2.0 * PI * t.n);
            let dy = t.c * e * dw * (4.0 * PI * t.n.abs());
            let o = &mut out[t.l];
            o.0 += v;
            o.1 += 0.5 * (dx - c64(0.0, 1.0) * dy);
            o.2 += 0.5 * (dx + c64(0.0, 1.0) * dy);
        }
        Ok(out)
    }

    /// Value and Wirtinger derivatives in standard coordinates, without the accuracy guard.
    pub fn jet(&self, z: C64) -> Result<Jet> {
        let comps = self.eval_components(z)?;
        let to_std = |sel: fn(&(C64, C64, C64)) -> C64| {
            let v = CVector::from_iterator(comps.len(), comps.iter().map(sel));
            (&self.basis * v).iter().copied().collect::<Vec<_>>()
        };
        Ok(Jet { value: to_std(|c| c.0), dz: to_std(|c| c.1), dzbar: to_std(|c| c.2) })
    }

    /// Truncated expansion at `z`; refuses when the truncation bound exceeds `1e-6`.
    pub fn eval(&self, z: C64) -> Result<Vec<C64>> {
        if !(z.im > 0.0) {
            return Err(Error::Domain("evaluation point must lie in H".into()));
        }
        let bound = self.truncation_bound(z.im);
        if bound > 1e-6 {
            return Err(Error::Accuracy(format!("truncation bound {bound:e} at y = {}", z.im)));
        }
        self.jet(z).map(|j| j.value)
    }

    /// Apply `X_{+,k} = 2iy d_z + k/2` (`up`) or `X_{-,k} = -2iy d_zbar - k/2` term by term.
    pub fn weight_shift(&self, up: bool) -> Result<Self> {
        let k = self.k;
        let s = self.s;
        let degenerate = |x: C64| x.im.abs() < 1e-12 && (x.re - x.re.round()).abs() < 1e-12;
        if degenerate(s - k / 2.0) || degenerate(s + k / 2.0) {
            return Err(Error::Singular("s = +-k/2 mod 1: weight shift not bijective".into()));
        }
        let mu = s - 0.5;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let kappa = t.n.signum() * k / 2.0;
                let lower = -(mu * mu - (kappa - 0.5) * (kappa - 0.5));
                // n > 0 raises kappa under X_+, n < 0 lowers it, and X_- mirrors this
                let coeff = if (t.n > 0.0) == up { c64(-1.0, 0.0) } else { lower };
                FourierTerm { c: t.c * coeff, ..*t }
            })
            .collect();
        Ok(Self { k: if up { k + 2.0 } else { k - 2.0 }, terms, ..self.clone() })
    }

    pub fn to_table(&self) -> CoefficientTable {
        CoefficientTable {
            format_version: TABLE_FORMAT_VERSION,
            k: self.k,
            s_re: self.s.re,
            s_im: self.s.im,
            rep: self.rep,
            parity: self.parity,
            entries: self
                .terms
                .iter()
                .map(|t| TableEntry { l: t.l, n: t.n, c_re: t.c.re, c_im: t.c.im })
                .collect(),
        }
    }

    pub fn from_table(table: &CoefficientTable) -> Result<Self> {
        if table.format_version != TABLE_FORMAT_VERSION {
            return Err(Error::Parameter(format!("unknown table format {}", table.format_version)));
        }
        let rep = UnitaryRep::from_descriptor(table.rep)?;
        let terms = table
            .entries
            .iter()
            .map(|e| FourierTerm { l: e.l, n: e.n, c: c64(e.c_re, e.c_im) })
            .collect();
        let mut out = Self::new(table.k, c64(table.s_re, table.s_im), &rep, terms)?;
        out.parity = table.parity;
        Ok(out)
    }
}

/// Returns `|Delta_k u - s(1-s) u|(z)` from fourth-order central differences with step `h`.
pub fn laplace_residual<F: Fn(C64) -> C64>(u: F, k: f64, s: C64, z: C64, h: f64) -> f64 {
    let y = z.im;
    let at = |dx: f64, dy: f64| u(z + c64(dx, dy));
    let u0 = at(0.0, 0.0);
    let d2 = |p2: C64, p1: C64, m1: C64, m2: C64| (-p2 + 16.0 * p1 - 30.0 * u0 + 16.0 * m1 - m2) / (12.0 * h * h);
    let uxx = d2(at(2.0 * h, 0.0), at(h, 0.0), at(-h, 0.0), at(-2.0 * h, 0.0));
    let uyy = d2(at(0.0, 2.0 * h), at(0.0, h), at(0.0, -h), at(0.0, -2.0 * h));
    let ux = (-at(2.0 * h, 0.0) + 8.0 * at(h, 0.0) - 8.0 * at(-h, 0.0) + at(-2.0 * h, 0.0)) / (12.0 * h);
    let lap = -y * y * (uxx + uyy) + c64(0.0, k * y) * ux;
    (lap - s * (1.0 - s) * u0).norm()
}

/// Move `z` into the standard fundamental domain, returning the point and the
/// element `g` with `g z` equal to it.
pub fn reduce_to_fundamental_domain(z: C64) -> (C64, SL2Z) {
    let mut w = z;
    let mut g = SL2Z::IDENTITY;
    for _ in 0..10_000 {
        let shift = w.re.round();
        if shift != 0.0 {
            w -= shift;
            g = SL2Z::t_pow(-(shift as i64)) * g;
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            w = -1.0 / w;
            g = SL2Z::S * g;
        } else {
            break;
        }
    }
    (w, g)
}

/// Settings for the weight-0 collocation solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HejhalConfig {
    /// Number of unknown coefficients `c(1..=n)`.
    pub n: usize,
    /// The two collocation heights, both below `sqrt(3)/2`.
    pub y0: f64,
    pub y1: f64,
    /// Collocation points per half period.
    pub q: usize,
    /// Step of the sign-change scan.
    pub scan_step: f64,
    /// Target for `|f(R)|` and the secant step.
    pub tol: f64,
}

impl Default for HejhalConfig {
    fn default() -> Self {
        Self { n: 22, y0: 0.42, y1: 0.37, q: 34, scan_step: 0.05, tol: 1e-12 }
    }
}

/// A solved weight-0 cusp form.
#[derive(Debug, Clone)]
pub struct EigenvalueRecord {
    pub r: f64,
    pub s: C64,
    pub parity: Parity,
    pub expansion: FourierExpansion,
    /// Largest disagreement of the coefficients computed at the two heights.
    pub residual: f64,
}

fn w0(r: f64, n: usize, y: f64) -> f64 {
    let arg = 4.0 * PI * n as f64 * y;
    if arg > 1400.0 {
        return 0.0;
    }
    whittaker_w_with_derivative(0.0, c64(0.0, r), arg).map(|w| w.0.re).unwrap_or(0.0)
}

fn cs(parity: Parity, t: f64) -> f64 {
    match parity {
        Parity::Even => t.cos(),
        Parity::Odd => t.sin(),
    }
}

/// Coefficients `c(1..=n)` with `c(1) = 1` from collocation at height `y`.
fn hejhal_coefficients(r: f64, parity: Parity, cfg: &HejhalConfig, y: f64) -> Result<Vec<f64>> {
    let (n, q) = (cfg.n, cfg.q);
    let mut v = DMatrix::<f64>::zeros(n, n);
    for m in 1..=q {
        let x = (m as f64 - 0.5) / (2.0 * q as f64);
        let (zs, _) = reduce_to_fundamental_domain(c64(x, y));
        for col in 0..n {
            let nn = (col + 1) as f64;
            let a = 2.0 * cs(parity, 2.0 * PI * nn * zs.re) * w0(r, col + 1, zs.im);
            for row in 0..n {
                v[(row, col)] += a * cs(parity, 2.0 * PI * (row + 1) as f64 * x) / q as f64;
            }
        }
    }
    for l in 0..n {
        v[(l, l)] -= w0(r, l + 1, y);
    }
    // row 0 is dropped and c(1) = 1 is moved to the right-hand side
    let a = v.view((1, 1), (n - 1, n - 1)).into_owned();
    let b = -v.view((1, 0), (n - 1, 1)).column(0).into_owned();
    let sol = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Singular(format!("collocation system singular at R = {r}")))?;
    let mut c = vec![1.0];
    c.extend(sol.iter().copied());
    Ok(c)
}

/// Difference of `c(2)` obtained at the two collocation heights.
pub fn hejhal_functional(r: f64, parity: Parity, cfg: &HejhalConfig) -> Result<f64> {
    let a = hejhal_coefficients(r, parity, cfg, cfg.y0)?;
    let b = hejhal_coefficients(r, parity, cfg, cfg.y1)?;
    Ok(a[1] - b[1])
}

fn secant(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    let mut side = 0;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c)?;
        if fc == 0.0 || (b - a).abs() < tol {
            return Ok((c, fc));
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == 1 {
                fa /= 2.0;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb /= 2.0;
            }
            side = -1;
        }
        if (b - a).abs() < tol {
            return Ok((c, fc));
        }
    }
    Err(Error::Accuracy("secant iteration did not converge".into()))
}

/// Search `window` for a weight-0 level-one cusp form of the given parity.
pub fn hejhal_solve(window: (f64, f64), parity: Parity, cfg: &HejhalConfig) -> Result<EigenvalueRecord> {
    let (lo, hi) = window;
    if !(lo < hi) || lo <= 0.0 {
        return Err(Error::Parameter("window must satisfy 0 < lo < hi".into()));
    }
    let steps = ((hi - lo) / cfg.scan_step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    let values = grid.iter().map(|&r| hejhal_functional(r, parity, cfg)).collect::<Result<Vec<_>>>()?;
    for i in 0..steps {
        if values[i].signum() == values[i + 1].signum() {
            continue;
        }
        let (r, _) = secant(|r| hejhal_functional(r, parity, cfg), grid[i], grid[i + 1], cfg.tol)?;
        let a = hejhal_coefficients(r, parity, cfg, cfg.y0)?;
        let b = hejhal_coefficients(r, parity, cfg, cfg.y1)?;
        let usable = cfg.n / 2;
        let residual = a.iter().zip(&b).take(usable).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        // sign changes across poles of the functional leave a large residual
        if residual > 1e-4 {
            continue;
        }
        let s = c64(0.5, r);
        let positive: Vec<C64> = a.iter().take(usable).map(|&x| c64(x, 0.0)).collect();
        return Ok(EigenvalueRecord { r, s, parity, expansion: FourierExpansion::weight0(s, parity, &positive), residual });
    }
    Err(Error::NotFound(format!("no {parity:?} eigenvalue in [{lo}, {hi}]")))
}
