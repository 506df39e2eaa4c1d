//! Order-3 truncated Taylor arithmetic.
//!
//! A [`Taylor3`] holds the normalized coefficients `c_k = f^(k)(x) / k!` for
//! `k = 0..=3`. Arithmetic on these coefficients is exact up to truncation at
//! order 3, so a single forward pass over an expression yields the value and
//! the first three derivatives. [`Jet3`] is the user-facing view holding the
//! derivatives themselves.

use std::ops::{Add, Mul, Neg, Sub};

/// Value and first three derivatives of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    /// f(x)
    pub d0: f64,
    /// f'(x)
    pub d1: f64,
    /// f''(x)
    pub d2: f64,
    /// f'''(x)
    pub d3: f64,
}

impl Jet3 {
    pub fn new(d0: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { d0, d1, d2, d3 }
    }

    pub fn is_finite(&self) -> bool {
        self.d0.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }
}

impl From<Taylor3> for Jet3 {
    fn from(t: Taylor3) -> Self {
        let [c0, c1, c2, c3] = t.0;
        Jet3::new(c0, c1, 2.0 * c2, 6.0 * c3)
    }
}

/// Truncated Taylor series `c0 + c1 h + c2 h^2 + c3 h^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taylor3(pub [f64; 4]);

impl Taylor3 {
    pub fn constant(c: f64) -> Self {
        Taylor3([c, 0.0, 0.0, 0.0])
    }

    /// The independent variable expanded around `x`.
    pub fn variable(x: f64) -> Self {
        Taylor3([x, 1.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// True when every coefficient of positive order is zero.
    pub fn is_constant(&self) -> bool {
        self.0[1] == 0.0 && self.0[2] == 0.0 && self.0[3] == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Composes an outer function `g` with this series, given `g` and its
    /// first three derivatives evaluated at `self.value()`.
    pub fn compose(&self, g0: f64, g1: f64, g2: f64, g3: f64) -> Self {
        let [_, c1, c2, c3] = self.0;
        Taylor3([
            g0,
            g1 * c1,
            g1 * c2 + 0.5 * g2 * c1 * c1,
            g1 * c3 + g2 * c1 * c2 + g3 * c1 * c1 * c1 / 6.0,
        ])
    }

    /// Series division by the recurrence `r_k = (u_k - sum_{j>=1} v_j r_{k-j}) / v_0`.
    /// The caller guarantees `rhs.value() != 0`.
    pub fn div(&self, rhs: &Taylor3) -> Self {
        let u = &self.0;
        let v = &rhs.0;
        let mut r = [0.0; 4];
        for k in 0..4 {
            let mut acc = u[k];
            for j in 1..=k {
                acc -= v[j] * r[k - j];
            }
            r[k] = acc / v[0];
        }
        Taylor3(r)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(e, e, e, e)
    }

    /// Natural logarithm; the caller guarantees a positive value.
    pub fn ln(&self) -> Self {
        let x = self.value();
        let r = 1.0 / x;
        self.compose(x.ln(), r, -r * r, 2.0 * r * r * r)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(s, c, -s, -c)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(c, -s, -c, s)
    }

    /// Square root; the caller guarantees a positive value.
    pub fn sqrt(&self) -> Self {
        let x = self.value();
        let s = x.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x))
    }

    /// Raises the series to a constant real power.
    pub fn powf(&self, p: f64) -> Self {
        let y = self.value();
        if p == 0.0 {
            return Taylor3::constant(1.0);
        }
        if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
            let n = p as i32;
            let g0 = y.powi(n);
            let g1 = p * y.powi(n - 1);
            let g2 = p * (p - 1.0) * y.powi(n - 2);
            let g3 = p * (p - 1.0) * (p - 2.0) * y.powi(n - 3);
            // Zero base with small non-negative integer powers: the 0^0 factors
            // above already evaluate to 1, and vanishing prefactors to 0.
            return self.compose(g0, fix_nan(g1), fix_nan(g2), fix_nan(g3));
        }
        let g0 = y.powf(p);
        self.compose(
            g0,
            p * y.powf(p - 1.0),
            p * (p - 1.0) * y.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * y.powf(p - 3.0),
        )
    }
}

// 0 * inf shows up only for y = 0 and an integer power whose derivative
// prefactor is zero; the true coefficient is then 0.
fn fix_nan(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v
    }
}

impl Add for Taylor3 {
    type Output = Taylor3;
    fn add(self, rhs: Taylor3) -> Taylor3 {
        let mut r = self.0;
        for (a, b) in r.iter_mut().zip(rhs.0) {
            *a += b;
        }
        Taylor3(r)
    }
}

impl Sub for Taylor3 {
    type Output = Taylor3;
    fn sub(self, rhs: Taylor3) -> Taylor3 {
        let mut r = self.0;
        for (a, b) in r.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        Taylor3(r)
    }
}

impl Mul for Taylor3 {
    type Output = Taylor3;
    fn mul(self, rhs: Taylor3) -> Taylor3 {
        let u = &self.0;
        let v = &rhs.0;
        Taylor3([
            u[0] * v[0],
            u[0] * v[1] + u[1] * v[0],
            u[0] * v[2] + u[1] * v[1] + u[2] * v[0],
            u[0] * v[3] + u[1] * v[2] + u[2] * v[1] + u[3] * v[0],
        ])
    }
}

impl Neg for Taylor3 {
    type Output = Taylor3;
    fn neg(self) -> Taylor3 {
        Taylor3(self.0.map(|c| -c))
    }
}
