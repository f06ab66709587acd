//! Heisenberg and Jacobi group actions, theta functions, the theta
//! decomposition of index-`m` Jacobi forms and the resulting period functions.

use crate::covergroup::{Mat2, SL2Z};
use crate::linalg::CVector;
use crate::maass::FourierExpansion;
use crate::multipliers::{kappa_spectrum, multiplier, rho_am, v_k_word, Character, RepDescriptor, UnitaryRep};
use crate::periods::{period_transform, PeriodConfig, PeriodFunction};
use crate::specfun::{arg, BranchSpec};
use crate::transferop::slow_apply;
use crate::{c64, Error, Result, C64, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Mul;

/// Element `h(x, y, r)` of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisElement {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

impl HeisElement {
    pub const IDENTITY: Self = Self { x: 0.0, y: 0.0, r: 0.0 };

    pub fn new(x: f64, y: f64, r: f64) -> Self {
        Self { x, y, r }
    }

    pub fn inverse(&self) -> Self {
        Self { x: -self.x, y: -self.y, r: -self.r }
    }

    /// Membership in the lattice `H(Z)`.
    pub fn is_integral(&self) -> bool {
        [self.x, self.y, self.r].iter().all(|v| v.fract() == 0.0)
    }

    /// `g^{-1} h g`, which is `h((x, y) g, r)`.
    pub fn conjugate_by(&self, g: &Mat2) -> Self {
        Self { x: g.a * self.x + g.c * self.y, y: g.b * self.x + g.d * self.y, r: self.r }
    }
}

impl Mul for HeisElement {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Self {
            x: self.x + o.x,
            y: self.y + o.y,
            r: self.r + o.r + self.x * o.y - o.x * self.y,
        }
    }
}

/// An element of `SL2(R)` or of the Heisenberg group, acting on `H x C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JacobiElement {
    Sl2(Mat2),
    Heis(HeisElement),
}

impl JacobiElement {
    /// Image of `(tau, z)`.
    pub fn act(&self, tau: C64, z: C64) -> (C64, C64) {
        match self {
            Self::Sl2(g) => (g.act(tau), z / g.j(tau)),
            Self::Heis(h) => (tau, z + h.x * tau + h.y),
        }
    }

    /// Factor multiplying `F(g(tau, z))` in `F|_{k,m} g`.
    pub fn factor(&self, k: f64, m: f64, tau: C64, z: C64) -> C64 {
        match self {
            Self::Sl2(g) => {
                let j = g.j(tau);
                let phase = C64::from_polar(1.0, -k * arg(j, BranchSpec::UpperClosed));
                phase * (-2.0 * PI * I * m * g.c * z * z / j).exp()
            }
            Self::Heis(h) => {
                let (p, q, r) = (h.x, h.y, h.r);
                (2.0 * PI * I * m * (r + p * p * tau + 2.0 * p * z + p * q)).exp()
            }
        }
    }
}

/// `(F|_{k,m} g)(tau, z)`.
pub fn jacobi_slash<F: Fn(C64, C64) -> C64>(f: F, g: &JacobiElement, k: f64, m: f64, tau: C64, z: C64) -> C64 {
    let (t2, z2) = g.act(tau, z);
    g.factor(k, m, tau, z) * f(t2, z2)
}

/// `(F|_{phi_a v_k, k, m} gamma)(tau, z)` for `gamma` in `SL2(Z)`.
pub fn jacobi_slash_twisted<F: Fn(C64, C64) -> C64>(
    f: F,
    gamma: &SL2Z,
    k: f64,
    m: f64,
    a: i64,
    tau: C64,
    z: C64,
) -> C64 {
    let chi = Character::phi(a).on_lift(gamma) * v_k_word(gamma, k);
    chi.conj() * jacobi_slash(f, &JacobiElement::Sl2(gamma.to_mat2()), k, m, tau, z)
}

/// Index `m` and class `j mod 2m` of a theta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaIndex {
    pub m: u32,
    /// Representative in `1..=2m`.
    pub j: i64,
}

impl ThetaIndex {
    pub fn new(m: u32, j: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("theta index needs m >= 1".into()));
        }
        let n = 2 * m as i64;
        let j = (j - 1).rem_euclid(n) + 1;
        Ok(Self { m, j })
    }

    fn modulus(&self) -> i64 {
        2 * self.m as i64
    }
}

fn require_upper(tau: C64) -> Result<()> {
    if tau.im > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain("tau must lie in H".into()))
    }
}

/// `Theta_{m,j}(tau, z) = Im(tau)^{1/4} sum_{r = j mod 2m} e^{pi i tau r^2/2m} e^{2 pi i r z}`.
pub fn theta_eval(idx: ThetaIndex, tau: C64, z: C64) -> Result<C64> {
    require_upper(tau)?;
    let n = idx.modulus();
    let m = idx.m as f64;
    let y = tau.im;
    // terms are Gaussian in alpha = r/2m around -Im z / Im tau
    let centre = -z.im / y;
    let half_width = (14.0 / (PI * m * y)).sqrt().ceil() + 1.0;
    let lo = ((centre - half_width) * n as f64).floor() as i64;
    let hi = ((centre + half_width) * n as f64).ceil() as i64;
    let first = lo + (idx.j - lo).rem_euclid(n);
    let sum = (first..=hi)
        .step_by(n as usize)
        .map(|r| {
            let rf = r as f64;
            (I * PI * tau * rf * rf / (2.0 * m) + 2.0 * PI * I * rf * z).exp()
        })
        .sum::<C64>();
    Ok(y.powf(0.25) * sum)
}

/// The theta vector `(Theta_{m,1}, ..., Theta_{m,2m})`.
pub fn theta_vector(m: u32, tau: C64, z: C64) -> Result<Vec<C64>> {
    (1..=2 * m as i64).map(|j| theta_eval(ThetaIndex::new(m, j)?, tau, z)).collect()
}

const HEIS_MAX_TERMS: usize = 100_000;

/// `sum_{alpha = j/2m (1)} e^{2 pi i m (r + q (2 alpha + p))} phi(p + alpha)` for
/// a rapidly decaying `phi`.
pub fn theta_heis<F: Fn(f64) -> C64>(idx: ThetaIndex, phi: F, h: &HeisElement) -> Result<C64> {
    let m = idx.m as f64;
    let (p, q, r) = (h.x, h.y, h.r);
    let base = idx.j as f64 / (2.0 * m);
    let n0 = (-p - base).round() as i64;
    let term = |n: i64| {
        let alpha = base + n as f64;
        let v = phi(p + alpha);
        let e = 2.0 * PI * m * (r + q * (2.0 * alpha + p));
        (C64::from_polar(1.0, e) * v, v.norm())
    };
    let (first, mut peak) = term(n0);
    let mut sum = first;
    for dir in [1i64, -1] {
        let mut quiet = 0;
        let mut steps = 0;
        let mut n = n0;
        while quiet < 5 {
            steps += 1;
            if steps > HEIS_MAX_TERMS {
                return Err(Error::Accuracy("theta series tail does not decay".into()));
            }
            n += dir;
            let (t, size) = term(n);
            sum += t;
            peak = peak.max(size);
            quiet = if size <= 1e-18 * peak.max(1e-300) { quiet + 1 } else { 0 };
        }
    }
    Ok(sum)
}

/// The Schwartz function `xi -> Im(tau)^{1/4} e^{2 pi i m tau xi^2}` attached to `tau`.
pub fn theta_seed(m: u32, tau: C64) -> impl Fn(f64) -> C64 {
    let pre = tau.im.powf(0.25);
    move |xi| pre * (2.0 * PI * I * m as f64 * tau * xi * xi).exp()
}

/// `Theta_{m,j}(tau, z)` through the Heisenberg theta function of [`theta_seed`].
pub fn theta_via_heis(idx: ThetaIndex, tau: C64, z: C64) -> Result<C64> {
    require_upper(tau)?;
    let m = idx.m as f64;
    let p = z.im / tau.im;
    let h = HeisElement::new(p, (z - tau * p).re, 0.0);
    let pre = (-2.0 * PI * I * m * z * z.im / tau.im).exp();
    Ok(pre * theta_heis(idx, theta_seed(idx.m, tau), &h)?)
}

/// `(C_j, F_j)` of the theta decomposition at one `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaComponent {
    pub c_j: C64,
    pub f_j: C64,
}

const DECOMPOSE_GRID: usize = 64;
const HOLOMORPHY_SHIFT: f64 = 0.1;
const DECOMPOSE_TOL: f64 = 1e-8;

/// `e^{-pi i j^2 tau/2m} Im(tau)^{-1/4} int_0^1 e^{-2 pi i j z} F(tau, z) dz` on the line
/// `Im z = eta`, with the size of the integrand on the same scale. The exponential
/// weights are combined before use, since separately they over- or underflow for large `j`.
fn f_integral<F: Fn(C64, C64) -> Result<C64>>(f: &F, m: u32, j: i64, tau: C64, eta: f64) -> Result<(C64, f64)> {
    let jf = j as f64;
    let twom = 2.0 * m as f64;
    let scale = tau.im.powf(-0.25) * (2.0 * PI * jf * eta + PI * jf * jf * tau.im / twom).exp();
    let phase = C64::from_polar(1.0, -PI * jf * jf * tau.re / twom);
    let mut sum = c64(0.0, 0.0);
    let mut size = 0.0f64;
    for i in 0..DECOMPOSE_GRID {
        let x = i as f64 / DECOMPOSE_GRID as f64;
        let v = C64::from_polar(1.0, -2.0 * PI * jf * x) * f(tau, c64(x, eta))?;
        size = size.max(v.norm());
        sum += v;
    }
    Ok((phase * scale * sum / DECOMPOSE_GRID as f64, scale * size))
}

/// One component on the line where its Gaussian weight peaks, checked for
/// holomorphy in `z`.
fn decompose_one<F: Fn(C64, C64) -> Result<C64>>(f: &F, m: u32, j: i64, tau: C64) -> Result<(ThetaComponent, f64)> {
    let eta = -(j as f64) * tau.im / (2.0 * m as f64);
    let (fj, size) = f_integral(f, m, j, tau, eta)?;
    for shift in [HOLOMORPHY_SHIFT, -HOLOMORPHY_SHIFT] {
        let (f2, size2) = f_integral(f, m, j, tau, eta + shift)?;
        if (f2 - fj).norm() > DECOMPOSE_TOL * size.max(size2) {
            return Err(Error::Consistency(format!(
                "C_{j} changes by {:e} under a shift of the z-contour: not holomorphic in z",
                (f2 - fj).norm()
            )));
        }
    }
    let c_j = fj * (I * PI * (j * j) as f64 * tau / (2.0 * m as f64)).exp();
    Ok((ThetaComponent { c_j, f_j: fj }, size))
}

/// `C_j(tau)` and `F_j(tau) = e^{-pi i j^2 tau/2m} C_j(tau)` of an index-`m`
/// function. The contour integral runs on the horizontal line where the `j`-th
/// Gaussian peaks, which by holomorphy equals the one on `Im z = 0`. Fails when
/// the result is not holomorphic in `z` or depends on the representative of `j`.
pub fn theta_decompose<F: Fn(C64, C64) -> Result<C64>>(f: F, m: u32, j: i64, tau: C64) -> Result<ThetaComponent> {
    if m == 0 {
        return Err(Error::Parameter("theta decomposition needs m >= 1".into()));
    }
    require_upper(tau)?;
    let (out, size) = decompose_one(&f, m, j, tau)?;
    let (alt, size_alt) = decompose_one(&f, m, j + 2 * m as i64, tau)?;
    if (out.f_j - alt.f_j).norm() > DECOMPOSE_TOL * size.max(size_alt) {
        return Err(Error::Consistency(format!(
            "F_{j} depends on the representative of j mod {}: {} vs {}",
            2 * m,
            out.f_j,
            alt.f_j
        )));
    }
    Ok(out)
}

/// All `F_j`, `j = 1..2m`.
pub fn theta_decompose_all<F: Fn(C64, C64) -> Result<C64>>(f: F, m: u32, tau: C64) -> Result<Vec<C64>> {
    (1..=2 * m as i64).map(|j| theta_decompose(&f, m, j, tau).map(|c| c.f_j)).collect()
}

/// `sum_j Theta_{m,j}(tau, z) F_j` for component values `F_1..F_{2m}`.
pub fn assemble_values(m: u32, values: &[C64], tau: C64, z: C64) -> Result<C64> {
    if values.len() != 2 * m as usize {
        return Err(Error::Parameter(format!("expected {} components, got {}", 2 * m, values.len())));
    }
    let th = theta_vector(m, tau, z)?;
    Ok(th.iter().zip(values).map(|(a, b)| a * b).sum())
}

/// Parameters `(k', s', rho_{a,m})` of the vector-valued side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeParams {
    pub k_prime: f64,
    pub s_prime: C64,
    pub rep: RepDescriptor,
}

/// `(k - 1/2, (s + 1)/2, rho_{a,m})`.
pub fn theorem_b_bridge(m: u32, k: f64, a: i64, s: C64) -> Result<BridgeParams> {
    if m == 0 {
        return Err(Error::Parameter("index m must be >= 1".into()));
    }
    Ok(BridgeParams {
        k_prime: k - 0.5,
        s_prime: (s + 1.0) / 2.0,
        rep: RepDescriptor::RhoAm { a: a.rem_euclid(12), m },
    })
}

fn congruent(x: C64, modulus: f64) -> bool {
    let r = x.re.rem_euclid(modulus);
    x.im.abs() < 1e-12 && r.min(modulus - r) < 1e-12
}

/// Whether `s' = (s+1)/2` and `k' = k - 1/2` satisfy `Re s' in (0, 1)` and
/// `s' != +-k'/2 mod 1`, i.e. `Re s in (-1, 1)` and `s != +-k' - 1 mod 2`.
pub fn period_domain_admissible(k: f64, s: C64) -> bool {
    let kp = k - 0.5;
    s.re > -1.0 && s.re < 1.0 && !congruent(s + 1.0 - kp, 2.0) && !congruent(s + 1.0 + kp, 2.0)
}

/// An index-`m` Jacobi form given by its theta components.
#[derive(Debug, Clone)]
pub struct JacobiFormData {
    pub m: u32,
    pub k: f64,
    pub a: i64,
    pub s: C64,
    /// The vector `(F_1, ..., F_{2m})` in standard coordinates.
    pub components: FourierExpansion,
}

/// Serialized form of [`JacobiFormData`] pointing at a stored coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiBundle {
    pub format_version: u32,
    pub m: u32,
    pub k: f64,
    pub a: i64,
    pub s_re: f64,
    pub s_im: f64,
    /// SHA-256 of the serialized coefficient table of the components.
    pub table_sha256: String,
}

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

impl JacobiFormData {
    pub fn new(m: u32, k: f64, a: i64, s: C64, components: FourierExpansion) -> Result<Self> {
        let b = theorem_b_bridge(m, k, a, s)?;
        if components.dim() != 2 * m as usize {
            return Err(Error::Parameter(format!("components have dimension {}, need {}", components.dim(), 2 * m)));
        }
        if components.rep != b.rep {
            return Err(Error::Parameter(format!("components carry {:?}, need {:?}", components.rep, b.rep)));
        }
        if (components.k - b.k_prime).abs() > 1e-12 || (components.s - b.s_prime).norm() > 1e-12 {
            return Err(Error::Parameter("component weight or spectral parameter does not match (k - 1/2, (s+1)/2)".into()));
        }
        Ok(Self { m, k, a: a.rem_euclid(12), s, components })
    }

    pub fn zero(m: u32, k: f64, a: i64, s: C64) -> Result<Self> {
        let b = theorem_b_bridge(m, k, a, s)?;
        let rep = rho_am(a, m)?;
        let components = FourierExpansion::new(b.k_prime, b.s_prime, &rep, Vec::new())?;
        Self::new(m, k, a, s, components)
    }

    pub fn bridge(&self) -> BridgeParams {
        theorem_b_bridge(self.m, self.k, self.a, self.s).expect("validated on construction")
    }

    pub fn component_values(&self, tau: C64) -> Result<Vec<C64>> {
        self.components.eval(tau)
    }

    pub fn to_bundle(&self, table_sha256: String) -> JacobiBundle {
        JacobiBundle {
            format_version: BUNDLE_FORMAT_VERSION,
            m: self.m,
            k: self.k,
            a: self.a,
            s_re: self.s.re,
            s_im: self.s.im,
            table_sha256,
        }
    }

    pub fn from_bundle(bundle: &JacobiBundle, components: FourierExpansion) -> Result<Self> {
        if bundle.format_version != BUNDLE_FORMAT_VERSION {
            return Err(Error::Parameter(format!("unknown bundle format {}", bundle.format_version)));
        }
        Self::new(bundle.m, bundle.k, bundle.a, c64(bundle.s_re, bundle.s_im), components)
    }
}

/// `F(tau, z) = sum_j Theta_{m,j}(tau, z) F_j(tau)`.
pub fn assemble_jacobi(data: &JacobiFormData, tau: C64, z: C64) -> Result<C64> {
    assemble_values(data.m, &data.component_values(tau)?, tau, z)
}

/// Period function of the theta components, with parameters `(s', k', rho_{a,m})`.
pub fn jacobi_period_pipeline(data: &JacobiFormData, cfg: &PeriodConfig) -> Result<PeriodFunction> {
    let rep = rho_am(data.a, data.m)?;
    period_transform(&data.components, &rep, cfg)
}

/// `sup_t |P_j - (P | (T + T'))_j|` for each component `j`.
pub fn component_three_term_residuals(p: &PeriodFunction, ts: &[f64]) -> Result<Vec<f64>> {
    let bf = p.to_boundary_function();
    let mut out = vec![0.0f64; p.dim()];
    for &t in ts {
        let lhs = p.eval(t)?;
        let rhs = slow_apply(&bf, p.params(), t)?;
        for (o, (x, y)) in out.iter_mut().zip(lhs.iter().zip(&rhs)) {
            *o = o.max((x - y).norm());
        }
    }
    Ok(out)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// The element of `SL2(Z)` with bottom row `(c, d)`, `gcd(c, d) = 1`.
fn with_bottom_row(c: i64, d: i64) -> Option<SL2Z> {
    let (g, u, v) = ext_gcd(c, d);
    let (u, v) = match g {
        1 => (u, v),
        -1 => (-u, -v),
        _ => return None,
    };
    SL2Z::new(v, -u, c, d).ok()
}

/// Truncated coset sum `sum_{<T> \ Gamma} M(gamma)^{-1} (phi |_k gamma)` for
/// `M = v_k rho` and the seed `phi(z) = Im(z)^sigma e^{2 pi i kappa_l x} e_l`.
/// The sum is invariant under `|_{rho v_k, k}` up to the truncation of the
/// cosets to `|c z + d| <= radius`, which costs about `radius^{2 - 2 sigma}`.
#[derive(Debug, Clone)]
pub struct CosetAverage {
    rep: UnitaryRep,
    k: f64,
    sigma: f64,
    kappa: f64,
    seed: CVector,
    radius: f64,
}

impl CosetAverage {
    pub fn new(rep: &UnitaryRep, k: f64, sigma: f64, l: usize, radius: f64) -> Result<Self> {
        if sigma <= 1.0 {
            return Err(Error::Parameter("coset sums need sigma > 1".into()));
        }
        let spec = kappa_spectrum(rep, k)?;
        if l >= spec.kappas.len() {
            return Err(Error::Parameter(format!("seed component {l} out of range")));
        }
        Ok(Self {
            rep: rep.clone(),
            k,
            sigma,
            kappa: spec.kappas[l],
            seed: spec.vectors.column(l).into_owned(),
            radius,
        })
    }

    pub fn eval(&self, z: C64) -> Result<Vec<C64>> {
        require_upper(z)?;
        let (x, y) = (z.re, z.im);
        let c_max = (self.radius / y).floor() as i64;
        let mut acc = CVector::zeros(self.rep.dim);
        for c in 0..=c_max {
            let d_lo = (-(c as f64) * x - self.radius).floor() as i64;
            let d_hi = (-(c as f64) * x + self.radius).ceil() as i64;
            for d in d_lo..=d_hi {
                if c == 0 && d != 1 {
                    continue;
                }
                if (c as f64 * z + d as f64).norm() > self.radius {
                    continue;
                }
                for (cc, dd) in [(c, d), (-c, -d)] {
                    let Some(g) = with_bottom_row(cc, dd) else { continue };
                    acc += self.term(&g, z);
                }
            }
        }
        Ok(acc.iter().copied().collect())
    }

    fn term(&self, g: &SL2Z, z: C64) -> CVector {
        let gm = g.to_mat2();
        let w = gm.act(z);
        let seed = w.im.powf(self.sigma) * C64::from_polar(1.0, 2.0 * PI * self.kappa * w.re);
        let phase = C64::from_polar(1.0, -self.k * arg(gm.j(z), BranchSpec::UpperClosed));
        let m_inv = multiplier(&self.rep, self.k, g).adjoint();
        (m_inv * &self.seed) * (phase * seed)
    }
}
