//! Truncated bivariate Taylor expansions ("jets").
//!
//! A jet of order `K` at a point `(x0, y0)` stores the Taylor coefficients
//! of a function up to total degree `K`. Arithmetic on jets propagates exact
//! partial derivatives, so closed-form states and operator coefficients can
//! be differentiated to any order up to [`MAX_ORDER`] without finite
//! differences.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub const MAX_ORDER: usize = 6;
const LEN: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

#[inline]
const fn len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Flat index of the coefficient of `dx^i dy^j`.
#[inline]
const fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    c: [f64; LEN],
}

impl Jet {
    pub fn constant(v: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [0.0; LEN];
        c[0] = v;
        Jet { order, c }
    }

    /// The coordinate function x expanded about `x0`.
    pub fn var_x(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order > 0 {
            j.c[idx(1, 0)] = 1.0;
        }
        j
    }

    /// The coordinate function y expanded about `y0`.
    pub fn var_y(y0: f64, order: usize) -> Self {
        let mut j = Self::constant(y0, order);
        if order > 0 {
            j.c[idx(0, 1)] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Taylor coefficient of `dx^i dy^j`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.c[idx(i, j)]
        }
    }

    /// The partial derivative ∂x^i ∂y^j at the expansion point.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        assert!(
            i + j <= self.order,
            "partial of order {} from jet of order {}",
            i + j,
            self.order
        );
        self.c[idx(i, j)] * fact(i) * fact(j)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order,
            "cannot raise jet order {} to {order}",
            self.order
        );
        let mut c = [0.0; LEN];
        c[..len(order)].copy_from_slice(&self.c[..len(order)]);
        Jet { order, c }
    }

    /// ∂/∂x as a jet of one lower order.
    pub fn dx(&self) -> Self {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let mut out = Self::constant(0.0, order);
        for d in 0..=order {
            for j in 0..=d {
                let i = d - j;
                out.c[idx(i, j)] = (i + 1) as f64 * self.c[idx(i + 1, j)];
            }
        }
        out
    }

    /// ∂/∂y as a jet of one lower order.
    pub fn dy(&self) -> Self {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let mut out = Self::constant(0.0, order);
        for d in 0..=order {
            for j in 0..=d {
                let i = d - j;
                out.c[idx(i, j)] = (j + 1) as f64 * self.c[idx(i, j + 1)];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for v in &mut out.c[..len(self.order)] {
            *v *= s;
        }
        out
    }

    /// f(self) given the derivatives f, f', f'', ... at the jet's value.
    pub fn compose(&self, derivs: &[f64]) -> Self {
        let order = self.order;
        assert!(
            derivs.len() > order,
            "need {} derivatives, got {}",
            order + 1,
            derivs.len()
        );
        if order == 0 {
            return Self::constant(derivs[0], 0);
        }
        let mut delta = *self;
        delta.c[0] = 0.0;
        let mut out = Self::constant(derivs[0], order);
        let mut power = Self::constant(1.0, order);
        let mut inv_fact = 1.0;
        for (m, d) in derivs.iter().enumerate().take(order + 1).skip(1) {
            power = power * delta;
            inv_fact /= m as f64;
            out += power.scale(d * inv_fact);
        }
        out
    }

    pub fn recip(&self) -> Self {
        let v = self.value();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut t = 1.0 / v;
        for (m, dm) in d.iter_mut().enumerate().take(self.order + 1) {
            *dm = t;
            t *= -((m + 1) as f64) / v;
        }
        self.compose(&d)
    }

    /// self^p for a positive base.
    pub fn powf(&self, p: f64) -> Self {
        let v = self.value();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut coef = 1.0;
        for (m, dm) in d.iter_mut().enumerate().take(self.order + 1) {
            *dm = coef * v.powf(p - m as f64);
            coef *= p - m as f64;
        }
        self.compose(&d)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n >= 0 {
            let mut out = Self::constant(1.0, self.order);
            for _ in 0..n {
                out = out * *self;
            }
            out
        } else {
            self.recip().powi(-n)
        }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&[e; MAX_ORDER + 1])
    }

    pub fn ln(&self) -> Self {
        let v = self.value();
        let mut d = [0.0; MAX_ORDER + 1];
        d[0] = v.ln();
        let mut t = 1.0 / v;
        for (m, dm) in d.iter_mut().enumerate().take(self.order + 1).skip(1) {
            *dm = t;
            t *= -(m as f64) / v;
        }
        self.compose(&d)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&cyclic([s, c, -s, -c]))
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&cyclic([c, -s, -c, s]))
    }

    pub fn sinh(&self) -> Self {
        let v = self.value();
        self.compose(&cyclic([v.sinh(), v.cosh(), v.sinh(), v.cosh()]))
    }

    pub fn cosh(&self) -> Self {
        let v = self.value();
        self.compose(&cyclic([v.cosh(), v.sinh(), v.cosh(), v.sinh()]))
    }

    pub fn tanh(&self) -> Self {
        self.sinh() * self.cosh().recip()
    }

    pub fn atan(&self) -> Self {
        let v = self.value();
        let mut d = vec![v.atan()];
        if self.order > 0 {
            // atan^{(m+1)}(v) = (d/dv)^m 1/(1 + v^2)
            let u = Jet::var_x(v, self.order - 1);
            let g = ((u * u) + 1.0).recip();
            d.extend((0..self.order).map(|m| g.partial(m, 0)));
        }
        self.compose(&d)
    }
}

fn cyclic(pattern: [f64; 4]) -> [f64; MAX_ORDER + 1] {
    std::array::from_fn(|m| pattern[m % 4])
}

fn fact(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, i| a * i as f64)
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for k in 0..len(order) {
            out.c[k] = self.c[k] + rhs.c[k];
        }
        out
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for da in 0..=order {
            for ja in 0..=da {
                let a = self.c[idx(da - ja, ja)];
                if a == 0.0 {
                    continue;
                }
                for db in 0..=(order - da) {
                    for jb in 0..=db {
                        out.c[idx(da - ja + db - jb, ja + jb)] += a * rhs.c[idx(db - jb, jb)];
                    }
                }
            }
        }
        out
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        (-rhs) + self
    }
}

/// Value and partial derivatives up to second order.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Derivs {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Derivs {
    pub fn from_jet(j: &Jet) -> Self {
        assert!(j.order() >= 2, "need a second-order jet");
        Derivs {
            value: j.partial(0, 0),
            dx: j.partial(1, 0),
            dy: j.partial(0, 1),
            dxx: j.partial(2, 0),
            dxy: j.partial(1, 1),
            dyy: j.partial(0, 2),
        }
    }

    pub fn to_jet(&self) -> Jet {
        let mut j = Jet::constant(self.value, 2);
        j.c[idx(1, 0)] = self.dx;
        j.c[idx(0, 1)] = self.dy;
        j.c[idx(2, 0)] = 0.5 * self.dxx;
        j.c[idx(1, 1)] = self.dxy;
        j.c[idx(0, 2)] = 0.5 * self.dyy;
        j
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.value, self.dx, self.dy, self.dxx, self.dxy, self.dyy]
    }
}
