//! Weight-k slash action on `H`, the principal series action on boundary
//! functions and the Poisson kernel `R_{s,k}`.
//!
//! Boundary points are `f64` with either infinity standing for the single
//! point at infinity of `P^1(R)`.

use crate::cheb::ChebGrid;
use crate::covergroup::{Mat2, SL2Z};
use crate::linalg::CVector;
use crate::multipliers::{multiplier, RepDescriptor, UnitaryRep};
use crate::specfun::{arg, cpow, cpow_principal, BranchSpec};
use crate::{c64, Error, Result, C64, I};
use std::fmt;
use std::sync::Arc;

/// Open interval of `P^1(R)`; when `cyclic` it is `(lo, inf) u {inf} u (-inf, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub cyclic: bool,
}

impl Interval {
    pub const POSITIVE: Interval = Interval { lo: 0.0, hi: f64::INFINITY, cyclic: false };
    pub const LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY, cyclic: false };
    pub const P1: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY, cyclic: true };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, cyclic: false }
    }

    pub fn cyclic(lo: f64, hi: f64) -> Self {
        Self { lo, hi, cyclic: true }
    }

    /// Membership in the closure, which is where tables and limits are defined.
    pub fn contains_closure(&self, t: f64) -> bool {
        if self.cyclic {
            t.is_infinite() || t >= self.lo || t <= self.hi
        } else if t.is_infinite() {
            (t > 0.0 && self.hi == f64::INFINITY) || (t < 0.0 && self.lo == f64::NEG_INFINITY)
                || (self.hi == f64::INFINITY && self.lo == f64::NEG_INFINITY)
        } else {
            self.lo <= t && t <= self.hi
        }
    }
}

/// Coordinate in which a table piece is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `x = t`.
    Direct,
    /// `x = 1/t`.
    Inverse,
}

impl Chart {
    pub fn coordinate(self, t: f64) -> f64 {
        match self {
            Chart::Direct => t,
            Chart::Inverse => {
                if t.is_infinite() {
                    0.0
                } else {
                    1.0 / t
                }
            }
        }
    }
}

/// Chebyshev interpolation table on one chart interval.
#[derive(Debug, Clone)]
pub struct TablePiece {
    pub chart: Chart,
    pub grid: ChebGrid,
    /// `values[l][j]`: component `l` at node `j`.
    pub values: Vec<Vec<C64>>,
}

type Callable = Arc<dyn Fn(f64) -> Vec<C64> + Send + Sync>;

/// How a boundary function is evaluated.
#[derive(Clone)]
pub enum Realization {
    Callable(Callable),
    Table(Vec<TablePiece>),
}

impl fmt::Debug for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realization::Callable(_) => f.write_str("Callable"),
            Realization::Table(p) => write!(f, "Table({} pieces)", p.len()),
        }
    }
}

/// A vector-valued function on an interval of `P^1(R)` with its parameters.
#[derive(Debug, Clone)]
pub struct BoundaryFunction {
    pub domain: Interval,
    pub dim: usize,
    pub s: C64,
    pub k: f64,
    pub rep: RepDescriptor,
    pub realization: Realization,
}

impl BoundaryFunction {
    pub fn from_fn<F>(domain: Interval, dim: usize, s: C64, k: f64, rep: RepDescriptor, f: F) -> Self
    where
        F: Fn(f64) -> Vec<C64> + Send + Sync + 'static,
    {
        Self { domain, dim, s, k, rep, realization: Realization::Callable(Arc::new(f)) }
    }

    /// Scalar function with the trivial one-dimensional representation.
    pub fn scalar<F>(domain: Interval, s: C64, k: f64, f: F) -> Self
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        Self::from_fn(domain, 1, s, k, RepDescriptor::Trivial { dim: 1 }, move |t| vec![f(t)])
    }

    pub fn zero(domain: Interval, dim: usize, s: C64, k: f64, rep: RepDescriptor) -> Self {
        Self::from_fn(domain, dim, s, k, rep, move |_| vec![C64::new(0.0, 0.0); dim])
    }

    /// Tabulate on Chebyshev pieces.
    pub fn tabulate(&self, pieces: &[(Chart, f64, f64, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(pieces.len());
        for &(chart, a, b, n) in pieces {
            let grid = ChebGrid::new(a, b, n);
            let mut values = vec![Vec::with_capacity(grid.len()); self.dim];
            for &x in &grid.nodes {
                let t = match chart {
                    Chart::Direct => x,
                    Chart::Inverse => {
                        if x == 0.0 {
                            f64::INFINITY
                        } else {
                            1.0 / x
                        }
                    }
                };
                let v = self.eval(t)?;
                for (l, vl) in v.into_iter().enumerate() {
                    values[l].push(vl);
                }
            }
            out.push(TablePiece { chart, grid, values });
        }
        Ok(Self { realization: Realization::Table(out), ..self.clone() })
    }

    pub fn eval(&self, t: f64) -> Result<Vec<C64>> {
        if !self.domain.contains_closure(t) {
            return Err(Error::Domain(format!("{t} outside the domain {:?}", self.domain)));
        }
        match &self.realization {
            Realization::Callable(f) => Ok(f(t)),
            Realization::Table(pieces) => {
                for p in pieces {
                    let x = p.chart.coordinate(t);
                    if p.grid.a <= x && x <= p.grid.b && !(p.chart == Chart::Direct && t.is_infinite()) {
                        return Ok(p.values.iter().map(|v| p.grid.interpolate(v, x)).collect());
                    }
                }
                Err(Error::Domain(format!("{t} not covered by the table")))
            }
        }
    }
}

/// `(1 - w/t)` written to avoid overflow for large `|t|`; `t - w` otherwise.
fn ratio(t: f64, num: C64, den: C64) -> C64 {
    if t.abs() > 1.0 {
        (1.0 - num / t) / (1.0 - den / t)
    } else {
        (t - num) / (t - den)
    }
}

/// Weight-`k` slash action `e^{-i k arg(c z + d)} u(g z)`.
pub fn slash_k<F: Fn(C64) -> C64>(u: F, g: &Mat2, k: f64, z: C64) -> C64 {
    let a = arg(g.j(z), BranchSpec::UpperClosed);
    C64::from_polar(1.0, -k * a) * u(g.act(z))
}

/// Scalar factor `J^prs_{s,k}(g, t)` multiplying `phi(g t)`.
pub fn prs_factor(g: &Mat2, s: C64, k: f64, t: f64) -> C64 {
    let am = c64(g.a, -g.c);
    let ap = c64(g.a, g.c);
    let e1 = -s + k / 2.0;
    let e2 = -s - k / 2.0;
    let lead = cpow(am, e1, BranchSpec::LowerClosed).unwrap_or(c64(0.0, 0.0))
        * cpow(ap, e2, BranchSpec::UpperClosed).unwrap_or(c64(0.0, 0.0));
    if t.is_infinite() {
        return lead;
    }
    let ginv = g.inverse();
    let wi = ginv.act(I);
    let wmi = wi.conj();
    let f1 = cpow_principal(ratio(t, I, wi), s - k / 2.0);
    let f2 = cpow_principal(ratio(t, -I, wmi), s + k / 2.0);
    lead * f1 * f2
}

/// `g t` on `P^1(R)`, infinity represented by `f64::INFINITY`.
pub fn act_boundary(g: &Mat2, t: f64) -> f64 {
    if t.is_infinite() {
        if g.c == 0.0 {
            f64::INFINITY
        } else {
            g.a / g.c
        }
    } else {
        let den = g.c * t + g.d;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (g.a * t + g.b) / den
        }
    }
}

/// `(phi |prs_{s,k} g)(t)`.
pub fn prs_apply(phi: &BoundaryFunction, g: &Mat2, s: C64, k: f64, t: f64) -> Result<Vec<C64>> {
    let gt = act_boundary(g, t);
    if !phi.domain.contains_closure(gt) {
        return Err(Error::Domain(format!("g t = {gt} outside the domain of phi")));
    }
    let j = prs_factor(g, s, k, t);
    Ok(phi.eval(gt)?.into_iter().map(|v| j * v).collect())
}

/// Twisted action `rho(gamma)^{-1} v_k(gamma)^{-1} (phi |prs_{s,k} gamma)(t)`.
pub fn prs_rep_apply(
    phi: &BoundaryFunction,
    gamma: &SL2Z,
    s: C64,
    k: f64,
    rep: &UnitaryRep,
    t: f64,
) -> Result<Vec<C64>> {
    let raw = prs_apply(phi, &gamma.to_mat2(), s, k, t)?;
    let m = multiplier(rep, k, gamma);
    // the multiplier is unitary, so its inverse is the adjoint
    let out = m.adjoint() * CVector::from_vec(raw);
    Ok(out.iter().copied().collect())
}

/// Poisson kernel `R_{s,k}(t, z)`.
pub fn poisson_r(s: C64, k: f64, t: f64, z: C64) -> C64 {
    let ys = cpow_principal(c64(z.im, 0.0), s);
    if t.is_infinite() {
        return ys;
    }
    ys * cpow_principal(ratio(t, I, z), s - k / 2.0) * cpow_principal(ratio(t, -I, z.conj()), s + k / 2.0)
}

/// Poisson kernel together with `d/dz` and `d/dzbar` in `z`.
pub fn poisson_r_with_derivatives(s: C64, k: f64, t: f64, z: C64) -> (C64, C64, C64) {
    let r = poisson_r(s, k, t, z);
    let y = z.im;
    // R = y^s (t-i)^{a}(t-z)^{-a}(t+i)^{b}(t-zbar)^{-b}, y = (z - zbar)/(2i)
    let a = s - k / 2.0;
    let b = s + k / 2.0;
    let dy_dz = c64(0.0, -0.5);
    let dy_dzb = c64(0.0, 0.5);
    if t.is_infinite() {
        return (r, r * s / y * dy_dz, r * s / y * dy_dzb);
    }
    let dz = r * (s / y * dy_dz + a / (t - z));
    let dzb = r * (s / y * dy_dzb + b / (t - z.conj()));
    (r, dz, dzb)
}
