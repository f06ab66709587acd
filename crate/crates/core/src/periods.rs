//! Green's form, period functions of cusp forms, the kernels `Q_{s,k}` and
//! `q_{s,k}`, and the restriction morphism with its integral inverse.

use crate::boundaryact::{poisson_r_with_derivatives, BoundaryFunction, Interval};
use crate::cheb::ChebGrid;
use crate::covergroup::SL2Z;
use crate::maass::{FourierExpansion, Jet};
use crate::multipliers::{RepDescriptor, UnitaryRep};
use crate::quad::{pairwise_sum, tanh_sinh_nodes, GaussLegendre};
use crate::specfun::{gamma, hyp2f1_with_derivative};
use crate::transferop::{act_fn, fast_apply, three_term_residual, TransferParams};
use crate::{c64, Error, Result, C64, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Green's form `[u1, u2]_k` at `z`, contracted with `tangent`.
pub fn green_form(u1: (C64, C64), u2: (C64, C64), k: f64, z: C64, tangent: C64) -> C64 {
    let (v1, d1) = u1;
    let (v2, dbar2) = u2;
    let w = k / (4.0 * I * z.im) * v1 * v2;
    (d1 * v2 + w) * tangent + (v1 * dbar2 - w) * tangent.conj()
}

/// `eta_{s,k}(u)` at `z` along `tangent`, one entry per component of `u`.
fn eta(jet: &Jet, s: C64, k: f64, t: f64, z: C64, tangent: C64) -> Vec<C64> {
    let (r, _, r_zbar) = poisson_r_with_derivatives(s, k, t, z);
    jet.value
        .iter()
        .zip(&jet.dz)
        .map(|(&v, &d)| green_form((v, d), (r, r_zbar), k, z, tangent))
        .collect()
}

/// `int_{z1}^{z2} eta_{s,k}(u)(t)` along the straight segment, Gauss–Legendre with `nodes` points.
pub fn segment_integral(u: &FourierExpansion, z1: C64, z2: C64, t: f64, nodes: usize) -> Result<Vec<C64>> {
    let gl = GaussLegendre::new(nodes);
    let tangent = z2 - z1;
    let mut acc = vec![c64(0.0, 0.0); u.dim()];
    for (x, w) in gl.mapped(0.0, 1.0) {
        let z = z1 + tangent * x;
        let jet = u.jet(z)?;
        for (a, e) in acc.iter_mut().zip(eta(&jet, u.s, u.k, t, z, tangent)) {
            *a += w * e;
        }
    }
    Ok(acc)
}

/// Quadrature settings for the period transform.
#[derive(Debug, Clone, Copy)]
pub struct PeriodConfig {
    /// Approximate number of tanh-sinh nodes.
    pub nodes: usize,
    /// Sample grid `10^{-d} .. 10^{d}` with this `d`.
    pub log_span: f64,
    pub samples: usize,
}

impl Default for PeriodConfig {
    fn default() -> Self {
        Self { nodes: 200, log_span: 3.0, samples: 41 }
    }
}

struct Integrator {
    s: C64,
    k: f64,
    dim: usize,
    nodes: Vec<(f64, f64)>,
    jets: Vec<Jet>,
}

impl Integrator {
    fn build(u: &FourierExpansion, y_top: f64, h: f64) -> Result<Self> {
        let nodes: Vec<(f64, f64)> = tanh_sinh_nodes(0.0, y_top.ln(), h)
            .into_iter()
            .map(|(v, w)| {
                let y = v.exp();
                (y, w * y)
            })
            .collect();
        let jets = nodes.iter().map(|&(y, _)| u.jet(c64(0.0, y))).collect::<Result<_>>()?;
        Ok(Self { s: u.s, k: u.k, dim: u.dim(), nodes, jets })
    }

    /// `int_i^{i inf} eta_{s,k}(u)(t)`.
    fn upper(&self, t: f64) -> Vec<C64> {
        let mut terms = vec![Vec::with_capacity(self.nodes.len()); self.dim];
        for (&(y, w), jet) in self.nodes.iter().zip(&self.jets) {
            for (l, e) in eta(jet, self.s, self.k, t, c64(0.0, y), I).into_iter().enumerate() {
                terms[l].push(w * e);
            }
        }
        terms.iter().map(|v| pairwise_sum(v)).collect()
    }
}

struct PeriodInner {
    integrator: Integrator,
    params: TransferParams,
    scale: f64,
}

impl PeriodInner {
    fn upper_scaled(&self, t: f64) -> Result<Vec<C64>> {
        Ok(self.integrator.upper(t).into_iter().map(|v| v * self.scale).collect())
    }

    /// `F - F|S` with `F` the integral from `i` to `i inf`.
    fn eval(&self, t: f64) -> Result<Vec<C64>> {
        let f = |w: f64| self.upper_scaled(w);
        let a = f(t)?;
        let b = act_fn(&f, &SL2Z::S, &self.params, t)?;
        Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
    }
}

/// Period function of a cusp form, normalized to unit sup norm on its sample grid
/// unless it vanishes there.
#[derive(Clone)]
pub struct PeriodFunction {
    pub s: C64,
    pub k: f64,
    pub rep: RepDescriptor,
    /// Factor applied to the raw integral.
    pub scale: f64,
    pub samples: Vec<(f64, Vec<C64>)>,
    pub a0: Vec<C64>,
    pub a_inf: Vec<C64>,
    /// Node-doubling estimate of the quadrature error, after scaling.
    pub quadrature_error: f64,
    inner: Arc<PeriodInner>,
}

impl std::fmt::Debug for PeriodFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodFunction")
            .field("s", &self.s)
            .field("k", &self.k)
            .field("scale", &self.scale)
            .field("samples", &self.samples.len())
            .finish()
    }
}

/// Period function `P(u)` of a cusp form `u` with multiplier `rho v_k`.
pub fn period_transform(u: &FourierExpansion, rep: &UnitaryRep, cfg: &PeriodConfig) -> Result<PeriodFunction> {
    let n_min = u.terms.iter().filter(|t| t.c != c64(0.0, 0.0)).fold(f64::INFINITY, |m, t| m.min(t.n.abs()));
    let zero = !n_min.is_finite();
    if !zero && u.truncation_bound(1.0) > 1e-10 {
        return Err(Error::Domain("expansion too short to certify decay above i".into()));
    }
    let y_top = if zero { 2.0 } else { (60.0 / (2.0 * PI * n_min)).max(2.0) };
    let params = TransferParams::new(u.s, u.k, rep)?;
    let h = 2.0 * 3.2 / cfg.nodes as f64;
    let coarse = Integrator::build(u, y_top, h)?;
    let size = |j: &Jet| j.value.iter().chain(&j.dz).fold(0.0f64, |m, v| m.max(v.norm()));
    let head = coarse.jets.last().map(size).unwrap_or(0.0);
    let peak = coarse.jets.iter().map(size).fold(0.0f64, f64::max);
    if !zero && head > 1e-12 * peak {
        return Err(Error::Domain(format!("no exponential decay up to y = {y_top:.2}")));
    }
    let fine = Integrator::build(u, y_top, h / 2.0)?;
    let mut inner = PeriodInner { integrator: fine, params: params.clone(), scale: 1.0 };
    let grid: Vec<f64> = (0..cfg.samples)
        .map(|j| 10f64.powf(-cfg.log_span + 2.0 * cfg.log_span * j as f64 / (cfg.samples - 1).max(1) as f64))
        .collect();
    let raw: Vec<Vec<C64>> = grid.iter().map(|&t| inner.eval(t)).collect::<Result<_>>()?;
    let mut sup = raw.iter().flatten().fold(0.0f64, |m, v| m.max(v.norm()));
    if sup == 0.0 {
        sup = 1.0;
    }
    inner.scale = 1.0 / sup;
    let mut quadrature_error = 0.0f64;
    for &t in &[0.5, 1.0, 3.0] {
        let a = coarse.upper(t);
        let b = inner.integrator.upper(t);
        for (x, y) in a.iter().zip(&b) {
            quadrature_error = quadrature_error.max((x - y).norm() / sup);
        }
    }
    let inner = Arc::new(inner);
    let samples = grid
        .iter()
        .zip(raw)
        .map(|(&t, v)| (t, v.into_iter().map(|x| x / sup).collect()))
        .collect();
    let a0 = inner.eval(0.0)?;
    let a_inf = inner.eval(f64::INFINITY)?;
    Ok(PeriodFunction {
        s: u.s,
        k: u.k,
        rep: rep.label,
        scale: 1.0 / sup,
        samples,
        a0,
        a_inf,
        quadrature_error,
        inner,
    })
}

impl PeriodFunction {
    pub fn dim(&self) -> usize {
        self.a0.len()
    }

    pub fn params(&self) -> &TransferParams {
        &self.inner.params
    }

    /// Value on `P^1(R)`; `f64::INFINITY` stands for the point at infinity.
    pub fn eval(&self, t: f64) -> Result<Vec<C64>> {
        self.inner.eval(t)
    }

    /// The period function as a boundary function on `P^1(R)`.
    pub fn to_boundary_function(&self) -> BoundaryFunction {
        let inner = Arc::clone(&self.inner);
        BoundaryFunction::from_fn(Interval::P1, self.dim(), self.s, self.k, self.rep, move |t| {
            inner.eval(t).expect("period function evaluation")
        })
    }

    pub fn three_term_residual(&self, ts: &[f64]) -> Result<f64> {
        three_term_residual(&self.to_boundary_function(), self.params(), ts)
    }

    /// `sup |P + P|S|` over `ts`.
    pub fn antisymmetry_residual(&self, ts: &[f64]) -> Result<f64> {
        let f = |w: f64| self.eval(w);
        let mut worst = 0.0f64;
        for &t in ts {
            let a = f(t)?;
            let b = act_fn(&f, &SL2Z::S, self.params(), t)?;
            worst = a.iter().zip(&b).fold(worst, |m, (x, y)| m.max((x + y).norm()));
        }
        Ok(worst)
    }

    /// `|a_0 + rho(S) a_inf|`.
    pub fn limit_residual(&self) -> f64 {
        let rho_s = self.params().rep.eval(&SL2Z::S);
        let v = rho_s * crate::linalg::CVector::from_column_slice(&self.a_inf);
        self.a0.iter().zip(v.iter()).fold(0.0, |m, (a, b)| m.max((a + b).norm()))
    }

    /// `sup |P - L_fast P|` over `ts`.
    pub fn fast_fixed_point_residual(&self, ts: &[f64]) -> Result<f64> {
        let bf = self.to_boundary_function();
        let mut worst = 0.0f64;
        for &t in ts {
            let a = self.eval(t)?;
            let b = fast_apply(&bf, self.params(), t)?;
            worst = a.iter().zip(&b).fold(worst, |m, (x, y)| m.max((x - y).norm()));
        }
        Ok(worst)
    }

    /// Lower bound for the radius of analyticity at `t0` from Chebyshev coefficient
    /// decay on `[t0 - h, t0 + h]`.
    pub fn analyticity_radius(&self, t0: f64, h: f64) -> Result<f64> {
        let grid = ChebGrid::new(t0 - h, t0 + h, 48);
        let vals: Vec<Vec<C64>> = grid.nodes.iter().map(|&t| self.eval(t)).collect::<Result<_>>()?;
        let mut rho = f64::INFINITY;
        for l in 0..self.dim() {
            let comp: Vec<C64> = vals.iter().map(|v| v[l]).collect();
            let coeffs = grid.coefficients(&comp);
            let c0 = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
            if c0 == 0.0 {
                continue;
            }
            let pts: Vec<(f64, f64)> = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, c)| c.norm() > 1e-12 * c0)
                .map(|(n, c)| (n as f64, c.norm().ln()))
                .collect();
            if pts.len() < 4 {
                continue;
            }
            let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
            let m = pts.len() as f64;
            let (mx, my) = (sx / m, sy / m);
            let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
            rho = rho.min((-num / den).exp());
        }
        if !rho.is_finite() {
            return Ok(f64::INFINITY);
        }
        Ok(h * (rho - 1.0 / rho) / 2.0)
    }

    /// CSV rows `t, Re f_1, Im f_1, ...` over the sample grid.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for l in 0..self.dim() {
            out.push_str(&format!(",re_{l},im_{l}"));
        }
        out.push('\n');
        for (t, v) in &self.samples {
            out.push_str(&format!("{t:.16e}"));
            for z in v {
                out.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }
}

/// Spectral data accepted by the kernel functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub s: C64,
    pub k: f64,
}

fn near_integer(x: C64) -> bool {
    x.im.abs() < 1e-12 && (x.re - x.re.round()).abs() < 1e-12
}

impl KernelParams {
    pub fn new(s: C64, k: f64) -> Result<Self> {
        let half = 2.0 * s;
        if (near_integer(half) && half.re.round() <= 1.0) || near_integer(s - k / 2.0) || near_integer(s + k / 2.0) {
            return Err(Error::Parameter(format!("kernel undefined at s = {s}, k = {k}")));
        }
        Ok(Self { s, k })
    }

    fn gamma_factor(&self) -> Result<C64> {
        Ok(gamma(self.s - self.k / 2.0)? * gamma(self.s + self.k / 2.0)? / gamma(2.0 * self.s)?)
    }

    /// `Gf v^s 2F1(s-k/2, s+k/2; 2s; v)` with its `v`-derivative.
    fn radial(&self, v: f64) -> Result<(C64, C64)> {
        let (s, k) = (self.s, self.k);
        let (f, df) = hyp2f1_with_derivative(s - k / 2.0, s + k / 2.0, 2.0 * s, v)?;
        let vs = c64(v, 0.0).powc(s);
        let gf = self.gamma_factor()?;
        Ok((gf * vs * f, gf * (s * vs / v * f + vs * df)))
    }
}

/// `Q_{s,k}(k(th1) a(y) k(th2))`.
pub fn kernel_q(p: &KernelParams, y: f64, th1: f64, th2: f64) -> Result<C64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    if (y - 1.0).abs() < 1e-14 {
        return Err(Error::Singular("Q has a logarithmic singularity at y = 1".into()));
    }
    let v = 4.0 * y / ((y + 1.0) * (y + 1.0));
    Ok(C64::from_polar(1.0, p.k * (th1 + th2)) * p.radial(v)?.0)
}

/// `q_{s,k}(z1, z2)` with its Wirtinger derivatives in `z1`.
pub fn kernel_q_point(p: &KernelParams, z1: C64, z2: C64) -> Result<(C64, C64, C64)> {
    let w = (z1 - z2.re) / z2.im;
    let yw = w.im;
    let wp = w + I;
    let wm = w.conj() - I;
    let v = 4.0 * yw / wp.norm_sqr();
    if !(v < 1.0) || (w - I).norm() < 1e-12 {
        return Err(Error::Singular("q is singular on the diagonal".into()));
    }
    let phase = C64::from_polar(1.0, -p.k * (PI / 2.0 - wp.arg()));
    let (q0, dq0) = p.radial(v)?;
    let q = phase * q0;
    let dv_w = v * (1.0 / (2.0 * I * yw) - 1.0 / wp);
    let dv_wb = v * (-1.0 / (2.0 * I * yw) - 1.0 / wm);
    // arg(w + i) = (ln(w + i) - ln(conj(w) - i)) / 2i
    let darg_w = 1.0 / (2.0 * I * wp);
    let darg_wb = -1.0 / (2.0 * I * wm);
    let dw = q * (I * p.k * darg_w) + phase * dq0 * dv_w;
    let dwb = q * (I * p.k * darg_wb) + phase * dq0 * dv_wb;
    Ok((q, dw / z2.im, dwb / z2.im))
}

/// `b(s,k) = e^{pi i k/2} Gamma(s-k/2) Gamma(s+k/2) / Gamma(2s)`.
pub fn b_factor(s: C64, k: f64) -> Result<C64> {
    let r = (2.0 * s - k) / 2.0;
    if near_integer(r) {
        return Err(Error::Parameter(format!("2s = k mod 2 at s = {s}, k = {k}")));
    }
    let g = gamma(s - k / 2.0)? * gamma(s + k / 2.0)? / gamma(2.0 * s)?;
    Ok(C64::from_polar(1.0, PI * k / 2.0) * g)
}

/// Circle `center + radius e^{i phi}`, positively oriented.
#[derive(Debug, Clone, Copy)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
}

/// `int_C [u, q_{s,k}(., z2)]_k` by the periodic trapezoid rule with `nodes` points.
///
/// `u` returns the value and `d/dz` of the eigenfunction.
pub fn reproducing_integral<F>(u: F, k: f64, s: C64, c: &Circle, z2: C64, nodes: usize) -> Result<C64>
where
    F: Fn(C64) -> (C64, C64),
{
    if ((z2 - c.center).norm() - c.radius).abs() < 1e-3 {
        return Err(Error::Singular("evaluation point within 1e-3 of the contour".into()));
    }
    if c.center.im - c.radius <= 0.0 {
        return Err(Error::Domain("contour leaves the upper half-plane".into()));
    }
    let p = KernelParams::new(s, k)?;
    let mut terms = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let phi = 2.0 * PI * j as f64 / nodes as f64;
        let e = C64::from_polar(1.0, phi);
        let z = c.center + c.radius * e;
        let tangent = I * c.radius * e * (2.0 * PI / nodes as f64);
        let (q, _, q_zbar) = kernel_q_point(&p, z, z2)?;
        terms.push(green_form(u(z), (q, q_zbar), k, z, tangent));
    }
    Ok(pairwise_sum(&terms))
}

/// `Phi_{s,k}(z) = y^{-s} (z+i)^{s+k/2} (conj z - i)^{s-k/2}` with the arguments in `[0, pi]` and `[-pi, 0]`.
pub fn phi_factor(s: C64, k: f64, z: C64) -> C64 {
    let zp = z + I;
    let zm = z.conj() - I;
    let lp = c64(zp.norm().ln(), zp.im.atan2(zp.re).clamp(0.0, PI));
    let am = zm.im.atan2(zm.re);
    let lm = c64(zm.norm().ln(), if am > 0.0 { am - 2.0 * PI } else { am });
    (-s * z.im.ln() + (s + k / 2.0) * lp + (s - k / 2.0) * lm).exp()
}

/// `lim_{y -> 0} Phi_{s,k}(x + iy) f(x + iy)` by Richardson extrapolation in `y`.
pub fn phi_restrict<F>(f: F, s: C64, k: f64, x: f64) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    const LEVELS: usize = 12;
    let y0 = 0.05;
    let mut ys = Vec::with_capacity(LEVELS);
    let mut table: Vec<C64> = Vec::with_capacity(LEVELS);
    let mut best = (f64::INFINITY, c64(0.0, 0.0));
    let mut prev_diag: Option<C64> = None;
    for j in 0..LEVELS {
        let y = y0 / 2f64.powi(j as i32);
        let z = c64(x, y);
        ys.push(y);
        table.push(phi_factor(s, k, z) * f(z)?);
        // Neville update towards y = 0
        for m in (0..j).rev() {
            let (ym, yj) = (ys[m], ys[j]);
            table[m] = (table[m + 1] * ym - table[m] * yj) / (ym - yj);
        }
        let diag = table[0];
        if let Some(p) = prev_diag {
            let err = (diag - p).norm();
            if err < best.0 {
                best = (err, diag);
            }
            if err < 1e-13 * diag.norm().max(1.0) {
                return Ok(diag);
            }
        }
        prev_diag = Some(diag);
    }
    if best.0 < 1e-9 * best.1.norm().max(1.0) {
        Ok(best.1)
    } else {
        Err(Error::Accuracy(format!("boundary limit does not settle (change {:e}); not a germ", best.0)))
    }
}

/// Integral inverse of the restriction morphism at `z`, for `Re s > |k|/2`.
///
/// `phi` must be holomorphic near the segment from `conj z` to `z`.
pub fn rest_inverse<F>(phi: F, s: C64, k: f64, z: C64, h: f64) -> Result<C64>
where
    F: Fn(C64) -> C64,
{
    if !(s.re > k.abs() / 2.0) {
        return Err(Error::Parameter(format!("requires Re s > |k|/2, got s = {s}, k = {k}")));
    }
    if !(z.im > 0.0) {
        return Err(Error::Domain("evaluation point must lie in H".into()));
    }
    if z.re.abs() < 1e-12 && z.im >= 1.0 - 1e-12 {
        return Err(Error::Domain("integration segment meets a branch point at +-i".into()));
    }
    let b = b_factor(s, k)?;
    let (x, y) = (z.re, z.im);
    let e1 = 1.0 - s + k / 2.0;
    let e2 = 1.0 - s - k / 2.0;
    let mut terms = Vec::new();
    for (tau, w) in tanh_sinh_nodes(-1.0, 1.0, h) {
        let t = c64(x, y * tau);
        // t - z = iy(tau - 1), t - conj z = iy(tau + 1)
        let r = c64(y, 0.0).powc(1.0 - s)
            * ((t - I) / (I * y * (tau - 1.0))).powc(e1)
            * ((t + I) / (I * y * (tau + 1.0))).powc(e2);
        terms.push(w * r * phi(t) * I * y / (1.0 + t * t));
    }
    let norm = I * c64(2.0, 0.0).powc(2.0 * s - 1.0) * b;
    Ok(pairwise_sum(&terms) / norm)
}
