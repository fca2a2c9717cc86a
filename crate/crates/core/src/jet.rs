//! Truncated Taylor series of fixed order 6.
//!
//! A [`Jet`] holds the Taylor coefficients `c0..c6` of a scalar function at an
//! expansion point, so `f^(n) = n! * c_n`. Arithmetic and the elementary
//! functions use the usual coefficient recurrences and are exact on
//! polynomials of degree at most 6 up to rounding.
//!
//! [`GraphJet`] is the curve-level object every invariant consumes: a base
//! point plus the derivatives `y1..y6` of `y` with respect to `x`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation order of every jet.
pub const ORDER: usize = 6;
/// Number of stored coefficients.
pub const LEN: usize = ORDER + 1;

const FACTORIAL: [f64; LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub coeffs: [f64; LEN],
}

impl Jet {
    pub const fn new(coeffs: [f64; LEN]) -> Self {
        Self { coeffs }
    }

    pub const fn constant(c: f64) -> Self {
        let mut coeffs = [0.0; LEN];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// The independent variable `t` expanded at `t0`.
    pub const fn variable(t0: f64) -> Self {
        let mut coeffs = [0.0; LEN];
        coeffs[0] = t0;
        coeffs[1] = 1.0;
        Self { coeffs }
    }

    /// Builds a jet from derivative values `f(t0), f'(t0), ..., f^(6)(t0)`.
    pub fn from_derivatives(d: [f64; LEN]) -> Self {
        let mut coeffs = [0.0; LEN];
        for n in 0..LEN {
            coeffs[n] = d[n] / FACTORIAL[n];
        }
        Self { coeffs }
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `n`-th derivative at the expansion point.
    pub fn derivative(&self, n: usize) -> f64 {
        self.coeffs[n] * FACTORIAL[n]
    }

    pub fn derivatives(&self) -> [f64; LEN] {
        let mut d = [0.0; LEN];
        for n in 0..LEN {
            d[n] = self.derivative(n);
        }
        d
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// True when every coefficient past `c0` is exactly zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0.0)
    }

    /// Term-wise derivative. The result is valid through order 5; its
    /// order-6 coefficient is zero.
    pub fn diff(&self) -> Self {
        let mut coeffs = [0.0; LEN];
        for n in 0..ORDER {
            coeffs[n] = (n + 1) as f64 * self.coeffs[n + 1];
        }
        Self { coeffs }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn recip(&self) -> Result<Self> {
        Jet::constant(1.0).checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let b0 = rhs.coeffs[0];
        if b0 == 0.0 {
            return Err(Error::DivisionByZeroJet);
        }
        let mut q = [0.0; LEN];
        for k in 0..LEN {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Ok(Self { coeffs: q })
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        let mut b = [0.0; LEN];
        b[0] = a[0].exp();
        for k in 1..LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * b[k - j];
            }
            b[k] = acc / k as f64;
        }
        Self { coeffs: b }
    }

    pub fn ln(&self) -> Result<Self> {
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(Error::Domain(format!(
                "ln of a jet with non-positive value {}",
                a[0]
            )));
        }
        let mut b = [0.0; LEN];
        b[0] = a[0].ln();
        for k in 1..LEN {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * b[j] * a[k - j];
            }
            b[k] = (a[k] - acc / k as f64) / a[0];
        }
        Ok(Self { coeffs: b })
    }

    /// Sine and cosine computed together.
    pub fn sin_cos(&self) -> (Self, Self) {
        let a = &self.coeffs;
        let mut s = [0.0; LEN];
        let mut c = [0.0; LEN];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..LEN {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                ds += j as f64 * a[j] * c[k - j];
                dc -= j as f64 * a[j] * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn atan(&self) -> Self {
        // atan(a)' = a' / (1 + a^2); the denominator never vanishes.
        let denom = Jet::constant(1.0) + *self * *self;
        let q = self
            .diff()
            .checked_div(&denom)
            .expect("1 + a^2 has positive constant term");
        let mut b = [0.0; LEN];
        b[0] = self.coeffs[0].atan();
        for k in 1..LEN {
            b[k] = q.coeffs[k - 1] / k as f64;
        }
        Self { coeffs: b }
    }

    pub fn sqrt(&self) -> Result<Self> {
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(Error::Domain(format!(
                "sqrt of a jet with non-positive value {}",
                a[0]
            )));
        }
        let mut b = [0.0; LEN];
        b[0] = a[0].sqrt();
        for k in 1..LEN {
            let mut acc = a[k];
            for j in 1..k {
                acc -= b[j] * b[k - j];
            }
            b[k] = acc / (2.0 * b[0]);
        }
        Ok(Self { coeffs: b })
    }

    /// `sign(c0) * a`; undefined when `c0 = 0`.
    pub fn abs(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == 0.0 {
            return Err(Error::Domain("abs of a jet with zero value".into()));
        }
        Ok(if a0 < 0.0 { -*self } else { *self })
    }

    /// Integer power by repeated squaring; negative exponents need `c0 != 0`.
    pub fn powi(&self, n: i32) -> Result<Self> {
        let mut base = *self;
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            acc.recip().map_err(|_| {
                Error::Domain(format!("negative power {n} of a jet with zero value"))
            })
        } else {
            Ok(acc)
        }
    }

    /// Real power. Integral exponents accept any base value (negative
    /// exponents still need `c0 != 0`); other exponents need `c0 > 0`.
    pub fn powf(&self, r: f64) -> Result<Self> {
        if r.fract() == 0.0 && r.abs() <= i32::MAX as f64 {
            return self.powi(r as i32);
        }
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(Error::Domain(format!(
                "non-integer power {r} of a jet with non-positive value {}",
                a[0]
            )));
        }
        let mut b = [0.0; LEN];
        b[0] = a[0].powf(r);
        for k in 1..LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (r * j as f64 - (k - j) as f64) * a[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a[0]);
        }
        Ok(Self { coeffs: b })
    }

    /// Series of `outer(inner)`, where `outer` is expanded at `inner.c0`.
    pub fn compose(outer: &Jet, inner: &Jet) -> Jet {
        let mut shift = *inner;
        shift.coeffs[0] = 0.0;
        let mut acc = Jet::constant(outer.coeffs[ORDER]);
        for n in (0..ORDER).rev() {
            acc = acc * shift + Jet::constant(outer.coeffs[n]);
        }
        acc
    }

    /// Evaluates the truncated polynomial at offset `h` from the expansion point.
    pub fn eval(&self, h: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * h + c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; LEN];
        for i in 0..LEN {
            if self.coeffs[i] == 0.0 {
                continue;
            }
            for j in 0..LEN - i {
                c[i + j] += self.coeffs[i] * rhs.coeffs[j];
            }
        }
        Jet { coeffs: c }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

/// Binary operation selector for [`jet_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn jet_arith(a: &Jet, b: &Jet, op: ArithOp) -> Result<Jet> {
    match op {
        ArithOp::Add => Ok(*a + *b),
        ArithOp::Sub => Ok(*a - *b),
        ArithOp::Mul => Ok(*a * *b),
        ArithOp::Div => a.checked_div(b),
    }
}

/// Elementary function selector for [`jet_fn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JetFn {
    Exp,
    Ln,
    Sin,
    Cos,
    Atan,
    Sqrt,
    Abs,
    Pow(f64),
}

pub fn jet_fn(a: &Jet, f: JetFn) -> Result<Jet> {
    match f {
        JetFn::Exp => Ok(a.exp()),
        JetFn::Ln => a.ln(),
        JetFn::Sin => Ok(a.sin()),
        JetFn::Cos => Ok(a.cos()),
        JetFn::Atan => Ok(a.atan()),
        JetFn::Sqrt => a.sqrt(),
        JetFn::Abs => a.abs(),
        JetFn::Pow(r) => a.powf(r),
    }
}

/// Curve jet in graph form: base point and `y1..y6 = d^k y / dx^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphJet {
    pub x: f64,
    pub y: f64,
    pub d: [f64; ORDER],
}

impl GraphJet {
    pub fn new(x: f64, y: f64, d: [f64; ORDER]) -> Self {
        Self { x, y, d }
    }

    /// Derivative `y_k` for `k` in `1..=6`.
    pub fn y(&self, k: usize) -> f64 {
        self.d[k - 1]
    }

    /// Graph jet of `y = f(x)` from the Taylor jet of `f` at `x`.
    pub fn from_function_jet(x: f64, f: &Jet) -> Self {
        let mut d = [0.0; ORDER];
        for k in 1..=ORDER {
            d[k - 1] = f.derivative(k);
        }
        Self { x, y: f.value(), d }
    }

    /// Taylor jet of `y` in `x - x0` (inverse of [`GraphJet::from_function_jet`]).
    pub fn function_jet(&self) -> Jet {
        let mut d = [0.0; LEN];
        d[0] = self.y;
        d[1..].copy_from_slice(&self.d);
        Jet::from_derivatives(d)
    }

    /// Taylor jet of the `k`-th derivative `y_k` in `x - x0`, valid through
    /// order `6 - k`; higher coefficients are zero.
    pub fn derivative_jet(&self, k: usize) -> Jet {
        let mut coeffs = [0.0; LEN];
        for m in 0..=(ORDER - k) {
            let v = if k + m == 0 { self.y } else { self.y(k + m) };
            coeffs[m] = v / FACTORIAL[m];
        }
        Jet { coeffs }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.d.iter().all(|v| v.is_finite())
    }
}

/// Re-graphs a parametric jet `(x(t), y(t))` as `y(x)`.
///
/// `dy/dx` is formed as a jet in `t` and repeatedly differentiated and
/// divided by `dx/dt`; each step loses one order of validity, which leaves
/// exactly the constant terms of `y1..y6` exact.
pub fn graph_jet_from_parametric(xj: &Jet, yj: &Jet) -> Result<GraphJet> {
    let xdot = xj.diff();
    if xdot.value() == 0.0 {
        return Err(Error::NotAGraph);
    }
    let mut d = [0.0; ORDER];
    let mut cur = *yj;
    for slot in d.iter_mut() {
        cur = cur.diff().checked_div(&xdot)?;
        *slot = cur.value();
    }
    Ok(GraphJet {
        x: xj.value(),
        y: yj.value(),
        d,
    })
}
