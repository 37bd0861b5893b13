//! Real-valued functions of one variable.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A real function that can be evaluated pointwise.
///
/// Evaluation fails with [`Error::EvaluationFailure`] instead of returning a
/// non-finite value, so NaNs never leak into quadrature sums.
pub trait RealFunction: Send + Sync {
    fn eval(&self, x: f64) -> Result<f64>;

    /// `u ↦ (f(u) − f(x)) / (u − x)` in closed form, when available.
    fn divided_by_pole(&self, _x: f64) -> Option<Polynomial> {
        None
    }
}

pub type Func = Arc<dyn RealFunction>;

impl<T: RealFunction + ?Sized> RealFunction for Arc<T> {
    fn eval(&self, x: f64) -> Result<f64> {
        (**self).eval(x)
    }
    fn divided_by_pole(&self, x: f64) -> Option<Polynomial> {
        (**self).divided_by_pole(x)
    }
}

impl<T: RealFunction + ?Sized> RealFunction for &T {
    fn eval(&self, x: f64) -> Result<f64> {
        (**self).eval(x)
    }
    fn divided_by_pole(&self, x: f64) -> Option<Polynomial> {
        (**self).divided_by_pole(x)
    }
}

pub(crate) fn finite(x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationFailure { x })
    }
}

/// Adapter turning a plain closure into a [`RealFunction`].
pub struct FnFunction<F>(F);

impl<F> RealFunction for FnFunction<F>
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: f64) -> Result<f64> {
        finite(x, (self.0)(x))
    }
}

/// Adapter for closures that can fail on their own (e.g. nested integrals).
pub struct TryFnFunction<F>(F);

impl<F> RealFunction for TryFnFunction<F>
where
    F: Fn(f64) -> Result<f64> + Send + Sync,
{
    fn eval(&self, x: f64) -> Result<f64> {
        let v = (self.0)(x)?;
        finite(x, v)
    }
}

pub fn from_fn<F>(f: F) -> Func
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(FnFunction(f))
}

pub fn try_from_fn<F>(f: F) -> Func
where
    F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
{
    Arc::new(TryFnFunction(f))
}

pub fn constant(c: f64) -> Func {
    Arc::new(Polynomial::constant(c))
}

/// Dense polynomial in the monomial basis, `coeffs[k]` multiplies `x^k`.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0])
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `x − c`
    pub fn shifted_x(c: f64) -> Self {
        Self::new(vec![-c, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn into_func(self) -> Func {
        Arc::new(self)
    }
}

impl RealFunction for Polynomial {
    fn eval(&self, x: f64) -> Result<f64> {
        finite(x, self.value(x))
    }

    /// Synthetic division: exact up to rounding, with no cancellation
    /// near `u = x`.
    fn divided_by_pole(&self, x: f64) -> Option<Polynomial> {
        let c = &self.coeffs;
        if c.len() < 2 {
            return Some(Polynomial::zero());
        }
        let mut q = vec![0.0; c.len() - 1];
        let mut acc = 0.0;
        for k in (1..c.len()).rev() {
            acc = acc * x + c[k];
            q[k - 1] = acc;
        }
        Some(Polynomial::new(q))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Polynomial::new(c)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

/// The difference quotient `u ↦ (f(u) − f(x)) / (u − x)` for a fixed `x`.
///
/// Below `|u − x| < 1e-8·scale` the quotient is numerically 0/0 and the
/// derivative of `f` at `x` is used instead. It is computed once, by a
/// centred difference with step `1e-5·scale` when both sides have room,
/// otherwise one-sided into the roomier side. `room` holds the distances
/// from `x` to the left and right ends of the domain of `f`.
pub(crate) struct Quotient<F> {
    f: F,
    x: f64,
    fx: f64,
    scale: f64,
    room: (f64, f64),
    slope: Cell<Option<f64>>,
}

impl<F> Quotient<F>
where
    F: Fn(f64) -> Result<f64>,
{
    pub(crate) fn new(f: F, x: f64, scale: f64, room: (f64, f64)) -> Result<Self> {
        let fx = f(x)?;
        Ok(Self { f, x, fx, scale, room, slope: Cell::new(None) })
    }

    pub(crate) fn at(&self, u: f64) -> Result<f64> {
        let du = u - self.x;
        if du.abs() >= 1e-8 * self.scale {
            return Ok(((self.f)(u)? - self.fx) / du);
        }
        if let Some(d) = self.slope.get() {
            return Ok(d);
        }
        let d = self.derivative()?;
        self.slope.set(Some(d));
        Ok(d)
    }

    fn derivative(&self) -> Result<f64> {
        let (x, h) = (self.x, 1e-5 * self.scale);
        if self.room.0 >= h && self.room.1 >= h {
            return Ok(((self.f)(x + h)? - (self.f)(x - h)?) / (2.0 * h));
        }
        let step = if self.room.1 >= self.room.0 {
            h.min(0.5 * self.room.1)
        } else {
            -h.min(0.5 * self.room.0)
        };
        let xh = x + step;
        if xh == x {
            return Err(Error::EvaluationFailure { x });
        }
        Ok(((self.f)(xh)? - self.fx) / (xh - x))
    }
}
