//! `SL2(R)`, `SL2(Z)` and the universal cover, with exact integer windings.

use crate::{Error, Result, C64, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::Mul;

/// Real 2x2 matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Integral 2x2 matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SL2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// A point of `H` or of its boundary `P^1(R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Upper(C64),
    Real(f64),
    Infinity,
}

/// Element `l(base) * kappa~(2 pi winding)` of the universal cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverElement {
    pub base: Mat2,
    pub winding: i64,
}

/// Iwasawa coordinates `g = p(z) k(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaCoord {
    pub z: C64,
    pub theta: f64,
}

/// Generators appearing in normalised `SL2(Z)` words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    /// `T^n`.
    T(i64),
    S,
}

/// `gamma = (-I)^neg * g_1 g_2 ... g_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub neg: bool,
    pub gens: Vec<Gen>,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if (m.det() - 1.0).abs() > 1e-12 * (1.0 + a.abs() * d.abs() + b.abs() * c.abs()) {
            return Err(Error::Matrix(format!("determinant {} != 1", m.det())));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Rotation `k(theta) = ((cos, sin), (-sin, cos))`.
    pub fn rotation(theta: f64) -> Self {
        let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
        let (s, c) = theta.sin_cos();
        let (s, c) = (snap(s), snap(c));
        Self { a: c, b: s, c: -s, d: c }
    }

    /// `j(g, z) = c z + d`.
    pub fn j(&self, z: C64) -> C64 {
        self.c * z + self.d
    }

    pub fn act(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Action on a boundary point given as `Some(t)` or `None` for infinity.
    pub fn act_boundary(&self, t: Option<f64>) -> Option<f64> {
        match t {
            None => (self.c != 0.0).then(|| self.a / self.c),
            Some(t) => {
                let den = self.c * t + self.d;
                (den != 0.0).then(|| (self.a * t + self.b) / den)
            }
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl SL2Z {
    pub const IDENTITY: SL2Z = SL2Z { a: 1, b: 0, c: 0, d: 1 };
    pub const NEG_IDENTITY: SL2Z = SL2Z { a: -1, b: 0, c: 0, d: -1 };
    pub const T: SL2Z = SL2Z { a: 1, b: 1, c: 0, d: 1 };
    pub const S: SL2Z = SL2Z { a: 0, b: -1, c: 1, d: 0 };
    /// `T' = S T^{-1} S = ((1, 0), (1, 1))`.
    pub const T_PRIME: SL2Z = SL2Z { a: 1, b: 0, c: 1, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Matrix(format!("determinant {} != 1", a * d - b * c)));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn t_pow(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn to_mat2(self) -> Mat2 {
        Mat2 { a: self.a as f64, b: self.b as f64, c: self.c as f64, d: self.d as f64 }
    }

    pub fn act(&self, z: C64) -> C64 {
        self.to_mat2().act(z)
    }

    /// Decompose into `(-I)^neg T^{q_1} S T^{q_2} S ... T^{m}` by the Euclidean algorithm.
    pub fn word(&self) -> Word {
        let mut gens = Vec::new();
        let mut m = *self;
        while m.c != 0 {
            let q = m.a.div_euclid(m.c);
            if q != 0 {
                gens.push(Gen::T(q));
            }
            gens.push(Gen::S);
            let r = m.a - q * m.c;
            let b2 = m.b - q * m.d;
            m = SL2Z { a: m.c, b: m.d, c: -r, d: -b2 };
        }
        let neg = m.a == -1;
        let shift = if neg { -m.b } else { m.b };
        if shift != 0 {
            gens.push(Gen::T(shift));
        }
        Word { neg, gens }
    }
}

impl Mul for SL2Z {
    type Output = SL2Z;
    fn mul(self, o: SL2Z) -> SL2Z {
        SL2Z {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl From<SL2Z> for Mat2 {
    fn from(g: SL2Z) -> Mat2 {
        g.to_mat2()
    }
}

impl Gen {
    pub fn matrix(self) -> SL2Z {
        match self {
            Gen::T(n) => SL2Z::t_pow(n),
            Gen::S => SL2Z::S,
        }
    }
}

impl Word {
    pub fn evaluate(&self) -> SL2Z {
        let start = if self.neg { SL2Z::NEG_IDENTITY } else { SL2Z::IDENTITY };
        self.gens.iter().fold(start, |acc, g| acc * g.matrix())
    }

    /// Product of the lifted generators in the cover, `l(-I) = kappa~(-pi)` for the sign.
    pub fn lift_product(&self) -> CoverElement {
        let start = if self.neg {
            lift(SL2Z::NEG_IDENTITY.to_mat2())
        } else {
            CoverElement::identity()
        };
        self.gens
            .iter()
            .fold(start, |acc, g| acc * lift(g.matrix().to_mat2()))
    }

    /// Total exponent of `T` and number of `S` letters.
    pub fn letter_counts(&self) -> (i64, i64) {
        self.gens.iter().fold((0, 0), |(t, s), g| match g {
            Gen::T(n) => (t + n, s),
            Gen::S => (t, s + 1),
        })
    }
}

/// `arg` in `(-pi, pi]`.
fn arg_upper(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a == -PI {
        PI
    } else {
        a
    }
}

/// The integer cocycle with `l(g1) l(g2) = l(g1 g2) kappa~(2 pi n)`.
pub fn cocycle(g1: &Mat2, g2: &Mat2) -> i64 {
    let g12 = *g1 * *g2;
    let total = arg_upper(g12.j(I)) - arg_upper(g2.j(I)) - arg_upper(g1.j(g2.act(I)));
    let n = (total / (2.0 * PI)).round();
    debug_assert!((total - 2.0 * PI * n).abs() < 1e-8, "cocycle not integral");
    debug_assert!(n.abs() <= 1.0, "cocycle outside {{-1, 0, 1}}");
    n as i64
}

/// Section `l(g) = p~(g i) kappa~(-arg(c i + d))`.
pub fn lift(g: Mat2) -> CoverElement {
    CoverElement { base: g, winding: 0 }
}

/// Checked lift of a matrix that must be unimodular.
pub fn lift_checked(g: Mat2) -> Result<CoverElement> {
    Mat2::new(g.a, g.b, g.c, g.d).map(lift)
}

/// `kappa~(theta)`.
pub fn kappa_tilde(theta: f64) -> CoverElement {
    // base k(theta) has section angle in [-pi, pi); the rest is whole turns
    let w = ((theta + PI) / (2.0 * PI)).floor();
    let reduced = theta - 2.0 * PI * w;
    let base = if (reduced + PI).abs() < 1e-15 {
        Mat2 { a: -1.0, b: 0.0, c: 0.0, d: -1.0 }
    } else {
        Mat2::rotation(reduced)
    };
    CoverElement { base, winding: w as i64 }
}

/// `kappa~(pi n)` with exact base for integral `n`.
pub fn kappa_tilde_pi(n: i64) -> CoverElement {
    if n % 2 == 0 {
        CoverElement { base: Mat2::IDENTITY, winding: n / 2 }
    } else {
        CoverElement { base: Mat2 { a: -1.0, b: 0.0, c: 0.0, d: -1.0 }, winding: (n + 1) / 2 }
    }
}

/// `sigma~ = l(S) = kappa~(-pi/2)`.
pub fn sigma_tilde() -> CoverElement {
    lift(SL2Z::S.to_mat2())
}

/// `tau~ = l(T)`.
pub fn tau_tilde() -> CoverElement {
    lift(SL2Z::T.to_mat2())
}

impl CoverElement {
    pub fn identity() -> Self {
        CoverElement { base: Mat2::IDENTITY, winding: 0 }
    }

    /// Projection to `SL2(R)`.
    pub fn pr(&self) -> Mat2 {
        self.base
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc * *self)
    }

    pub fn inverse(&self) -> Self {
        let inv = self.base.inverse();
        // l(g) l(g^{-1}) = kappa~(2 pi n(g, g^{-1}))
        let n = cocycle(&self.base, &inv);
        CoverElement { base: inv, winding: -self.winding - n }
    }

    /// Total rotation angle `theta` in `g = p(z) k(theta)`, continuous on the cover.
    pub fn theta(&self) -> f64 {
        -arg_upper(self.base.j(I)) + 2.0 * PI * self.winding as f64
    }
}

impl Mul for CoverElement {
    type Output = CoverElement;
    fn mul(self, o: CoverElement) -> CoverElement {
        CoverElement {
            base: self.base * o.base,
            winding: self.winding + o.winding + cocycle(&self.base, &o.base),
        }
    }
}

/// Group product in the cover.
pub fn mul_cover(x: &CoverElement, y: &CoverElement) -> CoverElement {
    *x * *y
}

/// Iwasawa coordinates `z = g i`, `theta = -arg(c i + d)`.
pub fn iwasawa(g: &Mat2) -> IwasawaCoord {
    IwasawaCoord { z: g.act(I), theta: -arg_upper(g.j(I)) }
}

/// Matrix `p(z) k(theta)` reconstructed from Iwasawa coordinates.
pub fn from_iwasawa(c: &IwasawaCoord) -> Mat2 {
    let y = c.z.im;
    let sq = y.sqrt();
    let p = Mat2 { a: sq, b: c.z.re / sq, c: 0.0, d: 1.0 / sq };
    p * Mat2::rotation(c.theta)
}

/// Fractional linear action on `H` and `P^1(R)`.
pub fn moebius(g: &Mat2, p: Point) -> Point {
    match p {
        Point::Upper(z) => Point::Upper(g.act(z)),
        Point::Real(t) => match g.act_boundary(Some(t)) {
            Some(x) => Point::Real(x),
            None => Point::Infinity,
        },
        Point::Infinity => match g.act_boundary(None) {
            Some(x) => Point::Real(x),
            None => Point::Infinity,
        },
    }
}
