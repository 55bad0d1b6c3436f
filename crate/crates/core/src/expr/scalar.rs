use std::ops::{Add, Mul, Neg, Sub};

/// Number-like type carried through expression evaluation.
///
/// Every elementary function is expressed through [`Scalar::chain`], which
/// lifts a univariate function given by its value and first three
/// derivatives at the current value. Plain `f64` ignores the derivatives;
/// the jet types use as many as their order requires.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;

    fn value(&self) -> f64;

    /// Apply `g` where `d = [g(a), g'(a), g''(a), g'''(a)]` and `a = self.value()`.
    fn chain(self, d: [f64; 4]) -> Self;

    fn all_finite(&self) -> bool;

    fn scale(self, k: f64) -> Self {
        self * Self::constant(k)
    }

    fn recip(self) -> Self {
        let a = self.value();
        let r = 1.0 / a;
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }

    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.chain([s, c, -s, -c])
    }

    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.chain([c, -s, -c, s])
    }

    fn exp(self) -> Self {
        let e = self.value().exp();
        self.chain([e, e, e, e])
    }

    fn ln(self) -> Self {
        let a = self.value();
        let r = 1.0 / a;
        self.chain([a.ln(), r, -r * r, 2.0 * r * r * r])
    }

    fn sqrt(self) -> Self {
        let a = self.value();
        let s = a.sqrt();
        self.chain([s, 0.5 / s, -0.25 / (s * a), 0.375 / (s * a * a)])
    }

    fn asinh(self) -> Self {
        let a = self.value();
        let k = 1.0 + a * a;
        let s = k.sqrt();
        self.chain([a.asinh(), 1.0 / s, -a / (k * s), (2.0 * a * a - 1.0) / (k * k * s)])
    }

    /// `self^n` for a real exponent; for non-integer `n` the caller must
    /// ensure `self.value() > 0`.
    fn powf(self, n: f64) -> Self {
        let a = self.value();
        let mut d = [0.0; 4];
        let mut coef = 1.0;
        for (k, slot) in d.iter_mut().enumerate() {
            if coef != 0.0 {
                *slot = coef * a.powf(n - k as f64);
            }
            coef *= n - k as f64;
        }
        self.chain(d)
    }

    /// `|self|`, differentiated as `±self` on the side of the current value.
    fn abs(self) -> Self {
        if self.value() < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }

    fn value(&self) -> f64 {
        *self
    }

    fn chain(self, d: [f64; 4]) -> Self {
        d[0]
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }

    fn recip(self) -> Self {
        1.0 / self
    }

    fn div(self, rhs: Self) -> Self {
        self / rhs
    }

    fn powf(self, n: f64) -> Self {
        f64::powf(self, n)
    }
}

/// Value and partial derivatives of a bivariate function up to order two.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub f: f64,
    pub fx: f64,
    pub fy: f64,
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
}

impl Jet2 {
    pub const fn new(f: f64, fx: f64, fy: f64, fxx: f64, fxy: f64, fyy: f64) -> Self {
        Self { f, fx, fy, fxx, fxy, fyy }
    }

    /// The coordinate function `x` seeded at `x`.
    pub const fn var_x(x: f64) -> Self {
        Self::new(x, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub const fn var_y(y: f64) -> Self {
        Self::new(y, 0.0, 1.0, 0.0, 0.0, 0.0)
    }
}

impl Add for Jet2 {
    type Output = Self;

    fn add(self, r: Self) -> Self {
        Self::new(
            self.f + r.f,
            self.fx + r.fx,
            self.fy + r.fy,
            self.fxx + r.fxx,
            self.fxy + r.fxy,
            self.fyy + r.fyy,
        )
    }
}

impl Sub for Jet2 {
    type Output = Self;

    fn sub(self, r: Self) -> Self {
        self + (-r)
    }
}

impl Neg for Jet2 {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.f, -self.fx, -self.fy, -self.fxx, -self.fxy, -self.fyy)
    }
}

impl Mul for Jet2 {
    type Output = Self;

    fn mul(self, r: Self) -> Self {
        let a = self;
        Self::new(
            a.f * r.f,
            a.fx * r.f + a.f * r.fx,
            a.fy * r.f + a.f * r.fy,
            a.fxx * r.f + 2.0 * a.fx * r.fx + a.f * r.fxx,
            a.fxy * r.f + a.fx * r.fy + a.fy * r.fx + a.f * r.fxy,
            a.fyy * r.f + 2.0 * a.fy * r.fy + a.f * r.fyy,
        )
    }
}

impl Scalar for Jet2 {
    fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    fn value(&self) -> f64 {
        self.f
    }

    fn chain(self, d: [f64; 4]) -> Self {
        let [g0, g1, g2, _] = d;
        let a = self;
        Self::new(
            g0,
            g1 * a.fx,
            g1 * a.fy,
            g2 * a.fx * a.fx + g1 * a.fxx,
            g2 * a.fx * a.fy + g1 * a.fxy,
            g2 * a.fy * a.fy + g1 * a.fyy,
        )
    }

    fn all_finite(&self) -> bool {
        [self.f, self.fx, self.fy, self.fxx, self.fxy, self.fyy]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Value and first three derivatives of a univariate function.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl CurveJet {
    pub const fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { value, d1, d2, d3 }
    }

    pub const fn var(t: f64) -> Self {
        Self::new(t, 1.0, 0.0, 0.0)
    }
}

impl Add for CurveJet {
    type Output = Self;

    fn add(self, r: Self) -> Self {
        Self::new(self.value + r.value, self.d1 + r.d1, self.d2 + r.d2, self.d3 + r.d3)
    }
}

impl Sub for CurveJet {
    type Output = Self;

    fn sub(self, r: Self) -> Self {
        self + (-r)
    }
}

impl Neg for CurveJet {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for CurveJet {
    type Output = Self;

    fn mul(self, r: Self) -> Self {
        let a = self;
        Self::new(
            a.value * r.value,
            a.d1 * r.value + a.value * r.d1,
            a.d2 * r.value + 2.0 * a.d1 * r.d1 + a.value * r.d2,
            a.d3 * r.value + 3.0 * a.d2 * r.d1 + 3.0 * a.d1 * r.d2 + a.value * r.d3,
        )
    }
}

impl Scalar for CurveJet {
    fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, 0.0)
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn chain(self, d: [f64; 4]) -> Self {
        let [g0, g1, g2, g3] = d;
        let (a1, a2, a3) = (self.d1, self.d2, self.d3);
        Self::new(
            g0,
            g1 * a1,
            g2 * a1 * a1 + g1 * a2,
            g3 * a1 * a1 * a1 + 3.0 * g2 * a1 * a2 + g1 * a3,
        )
    }

    fn all_finite(&self) -> bool {
        [self.value, self.d1, self.d2, self.d3].iter().all(|v| v.is_finite())
    }
}
