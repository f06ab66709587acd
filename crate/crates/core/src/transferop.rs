//! Slow and fast transfer operators, one-sided averages, discretizations and
//! spectral scans.
//!
//! Every parabolic sum `sum_{m >= 0} zeta^m F(tau + m)` with `v^{2s} F(v)`
//! analytic at `v = infinity` is evaluated with a [`ParabolicRule`]: a few
//! direct terms followed by a polynomial fit in `1/v` whose monomials are
//! summed by Lerch transcendents.

use crate::boundaryact::{act_boundary, prs_factor, BoundaryFunction};
use crate::cheb::{gauss_nodes, ChebGrid};
use crate::covergroup::{Mat2, SL2Z};
use crate::linalg::{det, unitary_eigen, CMatrix, CVector};
use crate::multipliers::{kappa_spectrum, multiplier, UnitaryRep};
use crate::specfun::lerch_continued;
use crate::{c64, Error, Result, C64};
use nalgebra::{Dyn, LU};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Smallest argument handed to the Lerch tail of a parabolic rule.
pub const RULE_MIN_ARGUMENT: f64 = 30.0;
/// Number of fit nodes in the Lerch tail of a parabolic rule.
pub const RULE_NODES: usize = 18;
/// Chart of the induced operator. Its images accumulate on `[1/2, 1]`, kept away
/// from the clustered Chebyshev nodes at the chart ends.
pub const INDUCED_INTERVAL: (f64, f64) = (0.25, 1.25);
/// Magnitude above which a component at a pole of the averages counts as nonzero.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

/// Parameters `(s, k, rho)` with the spectral data of `T` and `T'`.
#[derive(Debug, Clone)]
pub struct TransferParams {
    pub s: C64,
    pub k: f64,
    pub rep: UnitaryRep,
    m_t: CMatrix,
    m_tp: CMatrix,
    t_data: Parabolic,
    tp_data: Parabolic,
}

/// Eigenbasis of a multiplier value with the ratios `zeta_l = e^{-2 pi i kappa_l}`.
#[derive(Debug, Clone)]
struct Parabolic {
    zetas: Vec<C64>,
    basis: CMatrix,
}

impl Parabolic {
    /// `e_l e_l^*` for each eigenvector.
    fn projector(&self, l: usize) -> CMatrix {
        let col = self.basis.column(l);
        col * col.adjoint()
    }

    /// Components `e_l^* v`.
    fn components(&self, v: &[C64]) -> Vec<C64> {
        (self.basis.adjoint() * CVector::from_column_slice(v)).iter().copied().collect()
    }
}

fn snap_kappa(x: f64) -> f64 {
    let x = x.rem_euclid(1.0);
    if x < 1e-13 || x > 1.0 - 1e-13 {
        0.0
    } else {
        x
    }
}

fn zeta_of(kappa: f64) -> C64 {
    if kappa == 0.0 {
        c64(1.0, 0.0)
    } else {
        C64::from_polar(1.0, -2.0 * PI * kappa)
    }
}

impl TransferParams {
    pub fn new(s: C64, k: f64, rep: &UnitaryRep) -> Result<Self> {
        let spec = kappa_spectrum(rep, k)?;
        let t_data = Parabolic {
            zetas: spec.kappas.iter().map(|&x| zeta_of(snap_kappa(x))).collect(),
            basis: spec.vectors,
        };
        let m_tp = multiplier(rep, k, &SL2Z::T_PRIME);
        let (vals, vecs) = unitary_eigen(&m_tp)?;
        let tp_data = Parabolic {
            zetas: vals.iter().map(|v| zeta_of(snap_kappa(v.arg() / (2.0 * PI)))).collect(),
            basis: vecs,
        };
        Ok(Self { s, k, rep: rep.clone(), m_t: multiplier(rep, k, &SL2Z::T), m_tp, t_data, tp_data })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    /// Same representation and weight at another spectral parameter.
    pub fn with_s(&self, s: C64) -> Self {
        Self { s, ..self.clone() }
    }

    fn exponents(&self) -> (C64, C64) {
        (self.s - self.k / 2.0, self.s + self.k / 2.0)
    }

    /// `(t - i)^{s-k/2} (t + i)^{s+k/2}` with principal branches.
    fn weight(&self, t: f64) -> C64 {
        let (a, b) = self.exponents();
        c64(t, -1.0).powc(a) * c64(t, 1.0).powc(b)
    }

    /// Inverse twisted multiplier `v_k(g)^{-1} rho(g)^{-1}` for `g = T` or `T'`.
    pub fn inverse_multiplier(&self, prime: bool) -> CMatrix {
        if prime {
            self.m_tp.adjoint()
        } else {
            self.m_t.adjoint()
        }
    }

    /// `kappa_l` for which `zeta_l = 1` for `T` eigenvectors.
    pub fn has_invariant_vector(&self) -> bool {
        self.t_data.zetas.iter().any(|z| *z == c64(1.0, 0.0))
    }

    /// Components of `v_k(T')^{-1} rho(T')^{-1} v` along `T` eigenvectors with `kappa_l = 0`.
    pub fn invariant_components(&self, v: &[C64]) -> Vec<C64> {
        let w: Vec<C64> = (self.m_tp.adjoint() * CVector::from_column_slice(v)).iter().copied().collect();
        let comps = self.t_data.components(&w);
        comps
            .into_iter()
            .zip(&self.t_data.zetas)
            .filter(|(_, z)| **z == c64(1.0, 0.0))
            .map(|(c, _)| c)
            .collect()
    }
}

/// `V[q][r] = y_r^q` for the Chebyshev nodes `y_r` on `[0, 1]`. The rule weights solve
/// `V w = moments`; a backward-stable solve keeps them accurate despite the condition number.
fn vandermonde_transposed() -> &'static CMatrix {
    static V: OnceLock<CMatrix> = OnceLock::new();
    V.get_or_init(|| {
        let ys = gauss_nodes(0.0, 1.0, RULE_NODES);
        CMatrix::from_fn(RULE_NODES, RULE_NODES, |q, r| c64(ys[r].powi(q as i32), 0.0))
    })
}

fn vandermonde_lu() -> &'static LU<C64, Dyn, Dyn> {
    static L: OnceLock<LU<C64, Dyn, Dyn>> = OnceLock::new();
    L.get_or_init(|| vandermonde_transposed().clone().lu())
}

/// Points and weights approximating `sum_{m >= 0} zeta^m F(tau + m)`.
#[derive(Debug, Clone)]
pub struct ParabolicRule {
    pub points: Vec<f64>,
    pub weights: Vec<C64>,
    /// Functionals whose value must vanish because the Lerch sum has a pole.
    pub singular: Vec<Vec<C64>>,
}

impl ParabolicRule {
    /// The rule for `F(v) ~ v^{-exponent}` at infinity.
    pub fn new(zeta: C64, exponent: C64, tau: f64) -> Result<Self> {
        let direct = (RULE_MIN_ARGUMENT - tau).ceil().max(0.0) as usize;
        let z0 = tau + direct as f64;
        let h = 1.0 / z0;
        let xs = gauss_nodes(0.0, h, RULE_NODES);
        let zeta_m = zeta.powu(direct as u32);
        let is_one = zeta == c64(1.0, 0.0);
        let scale: Vec<C64> = xs.iter().map(|&x| (-exponent * x.ln()).exp()).collect();
        let vt = vandermonde_transposed();
        let mut moments = CVector::zeros(RULE_NODES);
        let mut singular = Vec::new();
        let mut pole_rows = Vec::new();
        for q in 0..RULE_NODES {
            let sigma = exponent + q as f64;
            if is_one && (sigma - 1.0).norm() < 1e-10 {
                pole_rows.push(q);
                continue;
            }
            moments[q] = zeta_m * lerch_continued(sigma, zeta, c64(z0, 0.0))? * z0.powi(q as i32);
        }
        let tail = vandermonde_lu()
            .solve(&moments)
            .ok_or_else(|| Error::Singular("parabolic rule: Vandermonde system singular".into()))?;
        if !pole_rows.is_empty() {
            // coefficient of y^q of the interpolant of P(x_r) = scale_r F(v_r)
            let inv = vt
                .transpose()
                .try_inverse()
                .ok_or_else(|| Error::Singular("parabolic rule: Vandermonde system singular".into()))?;
            for q in pole_rows {
                singular.push((0..RULE_NODES).map(|r| inv[(q, r)] * scale[r]).collect());
            }
        }
        let mut points: Vec<f64> = (0..direct).map(|m| tau + m as f64).collect();
        let mut weights: Vec<C64> = (0..direct).map(|m| zeta.powu(m as u32)).collect();
        for r in 0..RULE_NODES {
            points.push(1.0 / xs[r]);
            // P(x) = v^{exponent} F(v) with v = 1/x
            weights.push(tail[r] * scale[r]);
        }
        Ok(Self { points, weights, singular })
    }

    /// Apply to samples `F(points[p])`, reporting a pole with nonzero residue.
    pub fn apply(&self, values: &[C64]) -> Result<C64> {
        self.check_singular(values)?;
        Ok(self.weights.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    fn check_singular(&self, values: &[C64]) -> Result<()> {
        let tail = &values[values.len() - RULE_NODES..];
        for row in &self.singular {
            let c: C64 = row.iter().zip(tail).map(|(w, v)| w * v).sum();
            if c.norm() > SINGULARITY_THRESHOLD {
                return Err(Error::Singular(format!("pole of the parabolic sum with residue {:e}", c.norm())));
            }
        }
        Ok(())
    }
}

/// Direction of a one-sided average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `sum_{m >= 0} f | T^m`.
    Plus,
    /// `-sum_{m <= -1} f | T^m`.
    Minus,
}

/// One-sided average of an arbitrary vector-valued function at `t`.
pub fn average_fn<F: Fn(f64) -> Result<Vec<C64>>>(g: F, side: Side, p: &TransferParams, t: f64) -> Result<Vec<C64>> {
    let d = p.dim();
    let (a, b) = p.exponents();
    let two_s = 2.0 * p.s;
    let (tau, sign) = match side {
        Side::Plus => (t, 1.0),
        Side::Minus => (1.0 - t, -1.0),
    };
    let weight = p.weight(t);
    let mut out = CVector::zeros(d);
    let mut samples: Option<(Vec<f64>, Vec<Vec<C64>>)> = None;
    for l in 0..d {
        let zeta = match side {
            Side::Plus => p.t_data.zetas[l],
            Side::Minus => p.t_data.zetas[l].conj(),
        };
        let rule = ParabolicRule::new(zeta, two_s, tau)?;
        if samples.is_none() {
            let comps = rule
                .points
                .iter()
                .map(|&v| {
                    let w = sign * v;
                    let gv = g(w)?;
                    Ok(p.t_data.components(&gv))
                })
                .collect::<Result<Vec<_>>>()?;
            samples = Some((rule.points.clone(), comps));
        }
        let (pts, comps) = samples.as_ref().unwrap();
        let values: Vec<C64> = pts
            .iter()
            .zip(comps)
            .map(|(&v, c)| {
                let w = sign * v;
                c64(w, -1.0).powc(-a) * c64(w, 1.0).powc(-b) * c[l]
            })
            .collect();
        let mut sum = rule.apply(&values)?;
        if side == Side::Minus {
            sum *= -zeta;
        }
        out += p.t_data.basis.column(l) * (weight * sum);
    }
    Ok(out.iter().copied().collect())
}

/// `(f | Av_+-)(t)`.
pub fn onesided_avg(f: &BoundaryFunction, side: Side, p: &TransferParams, t: f64) -> Result<Vec<C64>> {
    average_fn(|w| f.eval(w), side, p, t)
}

/// Twisted action of `g` on a function given by a closure.
pub fn act_fn<F: Fn(f64) -> Result<Vec<C64>>>(f: &F, g: &SL2Z, p: &TransferParams, t: f64) -> Result<Vec<C64>> {
    let gm = g.to_mat2();
    let j = prs_factor(&gm, p.s, p.k, t);
    let v = f(act_boundary(&gm, t))?;
    let m = multiplier(&p.rep, p.k, g).adjoint();
    Ok((m * CVector::from_vec(v)).iter().map(|z| z * j).collect())
}

fn require_positive(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("transfer operators act on (0, inf), got t = {t}")))
    }
}

/// `f | (T + T')` at `t > 0`.
pub fn slow_apply(f: &BoundaryFunction, p: &TransferParams, t: f64) -> Result<Vec<C64>> {
    require_positive(t)?;
    let ev = |w: f64| f.eval(w);
    let a = act_fn(&ev, &SL2Z::T, p, t)?;
    let b = act_fn(&ev, &SL2Z::T_PRIME, p, t)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

/// `(f | T') | Av_+` at `t > 0`.
pub fn fast_apply(f: &BoundaryFunction, p: &TransferParams, t: f64) -> Result<Vec<C64>> {
    require_positive(t)?;
    let ev = |w: f64| f.eval(w);
    average_fn(|w| act_fn(&ev, &SL2Z::T_PRIME, p, w), Side::Plus, p, t)
}

/// `sup |f - f | (T + T')|` over the samples.
pub fn three_term_residual(f: &BoundaryFunction, p: &TransferParams, samples: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in samples {
        let lhs = f.eval(t)?;
        let rhs = slow_apply(f, p, t)?;
        for (x, y) in lhs.iter().zip(&rhs) {
            worst = worst.max((x - y).norm());
        }
    }
    Ok(worst)
}

/// Which operator a discretization represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `f | (T + T')` on `(0, inf)`, tabulated in the charts `t` and `1/t` on `[0, 1]`.
    Slow,
    /// `f | T' Av_+` restricted to `[0, 1]`.
    Fast,
    /// `sum_{j >= 0, n >= 1} f | T' T^n T'^j` on [`INDUCED_INTERVAL`]; it shares
    /// the 1-eigenfunctions of the fast operator and has no neutral fixed point.
    Induced,
}

/// Chebyshev degree of each chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub degree: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { degree: 32 }
    }
}

/// Matrix acting on nodal values (component-major within each node).
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub kind: OperatorKind,
    pub grid: GridSpec,
    pub dim: usize,
    /// Charts as (is_inverse, grid); the state is the concatenation of their nodal values.
    pub charts: Vec<(bool, ChebGrid)>,
    pub matrix: CMatrix,
}

impl DiscretizedOperator {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Nodal values of `f` in the state layout.
    pub fn sample(&self, f: &BoundaryFunction) -> Result<CVector> {
        let mut out = Vec::with_capacity(self.size());
        for (inverse, grid) in &self.charts {
            for &x in &grid.nodes {
                let t = if *inverse { if x == 0.0 { f64::INFINITY } else { 1.0 / x } } else { x };
                out.extend(f.eval(t)?);
            }
        }
        Ok(CVector::from_vec(out))
    }

    /// Interpolate a state vector at `t`.
    pub fn interpolate(&self, state: &CVector, t: f64) -> Result<Vec<C64>> {
        let (offset, row) = locate(&self.charts, t, self.dim)
            .ok_or_else(|| Error::Domain(format!("{t} outside the discretization charts")))?;
        let mut out = vec![C64::default(); self.dim];
        for (j, r) in row.iter().enumerate() {
            for (l, o) in out.iter_mut().enumerate() {
                *o += *r * state[offset + j * self.dim + l];
            }
        }
        Ok(out)
    }

    /// `det(I - L)`.
    pub fn fredholm_det(&self) -> C64 {
        let n = self.size();
        det(&(CMatrix::identity(n, n) - &self.matrix))
    }
}

/// Start offset and interpolation row of the chart containing `t`.
fn locate(charts: &[(bool, ChebGrid)], t: f64, dim: usize) -> Option<(usize, Vec<f64>)> {
    let mut offset = 0;
    for (inverse, grid) in charts {
        let x = if *inverse { if t.is_infinite() { 0.0 } else { 1.0 / t } } else { t };
        let ok = if *inverse { t.is_infinite() || t >= 1.0 } else { t.is_finite() };
        if ok && grid.a - 1e-14 <= x && x <= grid.b + 1e-14 {
            return Some((offset, grid.interp_row(x.clamp(grid.a, grid.b))));
        }
        offset += grid.len() * dim;
    }
    None
}

/// Accumulates `coef * f(u)` into one output row block.
struct RowBuilder<'a> {
    charts: &'a [(bool, ChebGrid)],
    dim: usize,
    block: CMatrix,
}

impl<'a> RowBuilder<'a> {
    fn new(charts: &'a [(bool, ChebGrid)], dim: usize, n: usize) -> Self {
        Self { charts, dim, block: CMatrix::zeros(dim, n) }
    }

    fn add(&mut self, coef: &CMatrix, u: f64) -> Result<()> {
        let (offset, row) = locate(self.charts, u, self.dim)
            .ok_or_else(|| Error::Domain(format!("operator needs f at {u}, outside the charts")))?;
        for (j, r) in row.iter().enumerate() {
            if *r == 0.0 {
                continue;
            }
            let base = offset + j * self.dim;
            for a in 0..self.dim {
                for b in 0..self.dim {
                    self.block[(a, base + b)] += coef[(a, b)] * *r;
                }
            }
        }
        Ok(())
    }
}

/// Coefficient matrices and evaluation points of `h = sum_{n>=1} f | T' T^n` at `x`:
/// `h(x) = sum_q C_q f(u_q)`.
fn tail_terms(p: &TransferParams, x: f64, first: usize) -> Result<Vec<(CMatrix, f64)>> {
    let (a, b) = p.exponents();
    let d = p.dim();
    let tau = x + first as f64;
    let weight = p.weight(x);
    let tp_inv = p.inverse_multiplier(true);
    let tp = SL2Z::T_PRIME.to_mat2();
    let mut terms: Vec<(CMatrix, f64)> = Vec::new();
    for l in 0..d {
        let zeta = p.t_data.zetas[l];
        let rule = ParabolicRule::new(zeta, 2.0 * p.s, tau)?;
        if !rule.singular.is_empty() {
            return Err(Error::Singular(format!("s = {} is a pole of the discretized averages", p.s)));
        }
        let proj = p.t_data.projector(l) * (weight * zeta.powu(first as u32));
        if terms.is_empty() {
            terms = rule.points.iter().map(|&y| (CMatrix::zeros(d, d), y)).collect();
        }
        for (q, &y) in rule.points.iter().enumerate() {
            let g = c64(y, -1.0).powc(-a) * c64(y, 1.0).powc(-b) * prs_factor(&tp, p.s, p.k, y);
            terms[q].0 += &proj * (rule.weights[q] * g) * &tp_inv;
        }
    }
    Ok(terms.into_iter().map(|(c, y)| (c, y / (y + 1.0))).collect())
}

fn t_prime_power(j: f64) -> Mat2 {
    Mat2 { a: 1.0, b: 0.0, c: j, d: 1.0 }
}

/// Discretize an operator at `p.s`.
pub fn discretize(kind: OperatorKind, p: &TransferParams, grid: GridSpec) -> Result<DiscretizedOperator> {
    let d = p.dim();
    let n = grid.degree;
    let charts: Vec<(bool, ChebGrid)> = match kind {
        OperatorKind::Slow => vec![(false, ChebGrid::new(0.0, 1.0, n)), (true, ChebGrid::new(0.0, 1.0, n))],
        OperatorKind::Fast => vec![(false, ChebGrid::new(0.0, 1.0, n))],
        OperatorKind::Induced => vec![(false, ChebGrid::new(INDUCED_INTERVAL.0, INDUCED_INTERVAL.1, n))],
    };
    let size: usize = charts.iter().map(|(_, g)| g.len() * d).sum();
    let mut matrix = CMatrix::zeros(size, size);
    let mut row0 = 0;
    for (inverse, g) in &charts {
        for &x in &g.nodes {
            let t = if *inverse { if x == 0.0 { f64::INFINITY } else { 1.0 / x } } else { x };
            let mut rb = RowBuilder::new(&charts, d, size);
            match kind {
                OperatorKind::Slow => {
                    for (gamma, prime) in [(SL2Z::T, false), (SL2Z::T_PRIME, true)] {
                        let gm = gamma.to_mat2();
                        let coef = p.inverse_multiplier(prime) * prs_factor(&gm, p.s, p.k, t);
                        rb.add(&coef, act_boundary(&gm, t))?;
                    }
                }
                OperatorKind::Fast => {
                    for (c, u) in tail_terms(p, t, 0)? {
                        rb.add(&c, u)?;
                    }
                }
                OperatorKind::Induced => {
                    for (c, u) in induced_terms(p, t)? {
                        rb.add(&c, u)?;
                    }
                }
            }
            matrix.view_mut((row0, 0), (d, size)).copy_from(&rb.block);
            row0 += d;
        }
    }
    Ok(DiscretizedOperator { kind, grid, dim: d, charts, matrix })
}

/// Terms of the induced operator at `t > 0`.
fn induced_terms(p: &TransferParams, t: f64) -> Result<Vec<(CMatrix, f64)>> {
    let d = p.dim();
    let tau = 1.0 / t;
    let mut out: Vec<(CMatrix, f64)> = Vec::new();
    let mut outer: Option<Vec<(CMatrix, f64)>> = None;
    for l in 0..d {
        let zeta = p.tp_data.zetas[l];
        let rule = ParabolicRule::new(zeta, 2.0 * p.s, tau)?;
        if !rule.singular.is_empty() {
            return Err(Error::Singular(format!("s = {} is a pole of the induced operator", p.s)));
        }
        let proj = p.tp_data.projector(l);
        let base = outer.get_or_insert_with(|| {
            rule.points
                .iter()
                .map(|&v| (CMatrix::zeros(d, d), v))
                .collect()
        });
        for (q, &v) in rule.points.iter().enumerate() {
            let j = v - tau;
            let jf = prs_factor(&t_prime_power(j), p.s, p.k, t);
            base[q].0 += &proj * (rule.weights[q] * jf);
        }
    }
    for (coef, v) in outer.unwrap() {
        for (c, u) in tail_terms(p, 1.0 / v, 1)? {
            out.push((&coef * c, u));
        }
    }
    Ok(out)
}

/// Pointwise induced operator, for checking its discretization.
pub fn induced_apply(f: &BoundaryFunction, p: &TransferParams, t: f64) -> Result<Vec<C64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("induced operator acts on (0, inf), got {t}")));
    }
    let mut out = CVector::zeros(p.dim());
    for (c, u) in induced_terms(p, t)? {
        out += c * CVector::from_vec(f.eval(u)?);
    }
    Ok(out.iter().copied().collect())
}

/// Translation `f -> f | T` on the two charts of the slow discretization.
pub fn translation_matrix(p: &TransferParams, grid: GridSpec) -> Result<DiscretizedOperator> {
    let mut op = discretize(OperatorKind::Slow, p, grid)?;
    let d = p.dim();
    let size = op.size();
    let mut row0 = 0;
    let charts = op.charts.clone();
    for (inverse, g) in &charts {
        for &x in &g.nodes {
            let t = if *inverse { if x == 0.0 { f64::INFINITY } else { 1.0 / x } } else { x };
            let mut rb = RowBuilder::new(&charts, d, size);
            let gm = SL2Z::T.to_mat2();
            rb.add(&(p.inverse_multiplier(false) * prs_factor(&gm, p.s, p.k, t)), act_boundary(&gm, t))?;
            op.matrix.view_mut((row0, 0), (d, size)).copy_from(&rb.block);
            row0 += d;
        }
    }
    Ok(op)
}

/// One sample of a determinant scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSample {
    pub s: C64,
    pub det: Option<C64>,
    pub flag: Option<String>,
}

/// A refined zero of `det(I - L_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroRecord {
    pub s: C64,
    pub residual: f64,
    /// `|s_N - s_{2N}|` from repeating the refinement at doubled degree.
    pub degree_check: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub samples: Vec<ScanSample>,
    pub zeros: Vec<ZeroRecord>,
}

/// Distance from `s` to the nearest point of `(1/2) Z_{<= 1}`.
pub fn distance_to_poles(s: C64) -> f64 {
    let n = (2.0 * s.re).round().min(1.0);
    (s - n / 2.0).norm()
}

fn det_at(kind: OperatorKind, base: &TransferParams, s: C64, grid: GridSpec) -> Result<C64> {
    Ok(discretize(kind, &base.with_s(s), grid)?.fredholm_det())
}

/// Secant iteration for a zero of `s -> det(I - L_s)`.
pub fn refine_zero(kind: OperatorKind, base: &TransferParams, s0: C64, s1: C64, grid: GridSpec) -> Result<(C64, f64)> {
    let (mut a, mut b) = (s0, s1);
    let (mut fa, mut fb) = (det_at(kind, base, a, grid)?, det_at(kind, base, b, grid)?);
    for _ in 0..40 {
        if fb == fa {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = det_at(kind, base, b, grid)?;
        if (b - a).norm() < 1e-11 {
            break;
        }
    }
    if (b - a).norm() > 1e-8 {
        return Err(Error::Accuracy(format!("zero refinement stalled near {b}")));
    }
    Ok((b, fb.norm()))
}

/// Scan `det(I - L_s)` along `path` and refine zeros found between samples.
pub fn det_scan(kind: OperatorKind, k: f64, rep: &UnitaryRep, path: &[C64], grid: GridSpec) -> Result<ScanResult> {
    let base = TransferParams::new(path.first().copied().unwrap_or(c64(0.5, 1.0)), k, rep)?;
    let samples: Vec<ScanSample> = path
        .iter()
        .map(|&s| {
            if distance_to_poles(s) < 1e-3 {
                return ScanSample { s, det: None, flag: Some("within 1e-3 of (1/2)Z_{<=1}".into()) };
            }
            match det_at(kind, &base, s, grid) {
                Ok(d) => ScanSample { s, det: Some(d), flag: None },
                Err(e) => ScanSample { s, det: None, flag: Some(e.to_string()) },
            }
        })
        .collect();
    let mut zeros = Vec::new();
    for w in samples.windows(3) {
        let (Some(d0), Some(d1), Some(d2)) = (w[0].det, w[1].det, w[2].det) else { continue };
        let is_min = d1.norm() < d0.norm() && d1.norm() <= d2.norm();
        if !is_min {
            continue;
        }
        let Ok((s, residual)) = refine_zero(kind, &base, w[0].s, w[1].s, grid) else { continue };
        let step = (w[2].s - w[0].s).norm();
        if (s - w[1].s).norm() > step || residual > 1e-8 * d0.norm().max(d2.norm()) {
            continue;
        }
        if zeros.iter().any(|z: &ZeroRecord| (z.s - s).norm() < 1e-6) {
            continue;
        }
        let fine = GridSpec { degree: 2 * grid.degree };
        let degree_check = refine_zero(kind, &base, s, s + c64(0.0, 1e-4), fine)
            .map(|(s2, _)| (s2 - s).norm())
            .unwrap_or(f64::INFINITY);
        zeros.push(ZeroRecord { s, residual, degree_check });
    }
    Ok(ScanResult { samples, zeros })
}

/// Points on the critical line `1/2 + i t` for `t` in `[t0, t1]`.
pub fn critical_line(t0: f64, t1: f64, steps: usize) -> Vec<C64> {
    (0..=steps).map(|i| c64(0.5, t0 + (t1 - t0) * i as f64 / steps as f64)).collect()
}
