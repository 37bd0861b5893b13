//! Densities, their moments and the ρ-weighted inner product.

use std::f64::consts::PI;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::function::{constant, Func, Polynomial, RealFunction};
use crate::quadrature::{
    tanh_sinh_split, Abscissa, EndpointExponents, Estimate, IntegrationSpec, Interval, QuadValue,
};

/// A non-negative weight on a compact interval.
///
/// Implemented by catalog and user densities, by the members `ρ_t` of the
/// equi-normal family, and by secondary measures. Evaluation receives an
/// [`Abscissa`] so that endpoint factors are computed from exact distances.
pub trait Weight: Send + Sync {
    fn interval(&self) -> Interval;

    fn value_at(&self, p: Abscissa) -> Result<f64>;

    fn value(&self, x: f64) -> Result<f64> {
        self.value_at(self.interval().abscissa(x))
    }

    /// Interior points where the weight may vary rapidly; quadrature splits
    /// there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn label(&self) -> String;
}

impl<T: Weight + ?Sized> Weight for Arc<T> {
    fn interval(&self) -> Interval {
        (**self).interval()
    }
    fn value_at(&self, p: Abscissa) -> Result<f64> {
        (**self).value_at(p)
    }
    fn value(&self, x: f64) -> Result<f64> {
        (**self).value(x)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

/// `∫ g(p) w(p) dp` over the support of `w`, splitting at its breakpoints
/// and at `extra`.
pub fn integrate_against<W, V, G>(
    w: &W,
    extra: &[f64],
    spec: &IntegrationSpec,
    mut g: G,
) -> Result<Estimate<V>>
where
    W: Weight + ?Sized,
    V: QuadValue,
    G: FnMut(Abscissa) -> Result<V>,
{
    let mut breaks = w.breakpoints();
    breaks.extend_from_slice(extra);
    tanh_sinh_split(&w.interval(), &breaks, spec, |p| {
        let wv = w.value_at(p)?;
        if wv == 0.0 {
            return Ok(V::zero());
        }
        Ok(g(p)? * wv)
    })
}

/// Integral of the weight itself.
pub fn mass<W: Weight + ?Sized>(w: &W, spec: &IntegrationSpec) -> Result<f64> {
    Ok(integrate_against(w, &[], spec, |_| Ok(1.0))?.value)
}

/// `c_n = ∫ xⁿ ρ(x) dx`.
pub fn moment<W: Weight + ?Sized>(rho: &W, n: u32, spec: &IntegrationSpec) -> Result<f64> {
    if n == 0 {
        return mass(rho, spec);
    }
    Ok(integrate_against(rho, &[], spec, |p| Ok(p.x.powi(n as i32)))?.value)
}

pub fn moments<W: Weight + ?Sized>(rho: &W, n: u32, spec: &IntegrationSpec) -> Result<Vec<f64>> {
    (0..=n).map(|k| moment(rho, k, spec)).collect()
}

/// `⟨f, g⟩_ρ = ∫ f g ρ`.
pub fn inner_product<W: Weight + ?Sized>(
    f: &dyn RealFunction,
    g: &dyn RealFunction,
    rho: &W,
    spec: &IntegrationSpec,
) -> Result<f64> {
    Ok(integrate_against(rho, &[], spec, |p| Ok(f.eval(p.x)? * g.eval(p.x)?))?.value)
}

/// `f − f̄` with `f̄ = ∫ f ρ`, an element of the zero-mean hyperplane.
pub fn mean_project<W: Weight + ?Sized>(f: Func, rho: &W, spec: &IntegrationSpec) -> Result<Func> {
    let mean = integrate_against(rho, &[], spec, |p| f.eval(p.x))?.value;
    Ok(Arc::new(Shifted { inner: f, shift: -mean }))
}

struct Shifted {
    inner: Func,
    shift: f64,
}

impl RealFunction for Shifted {
    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.inner.eval(x)? + self.shift)
    }

    fn divided_by_pole(&self, x: f64) -> Option<Polynomial> {
        self.inner.divided_by_pole(x)
    }
}

/// Moments `c_0..c_N` of a density.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    values: Vec<f64>,
}

impl MomentSequence {
    pub fn compute<W: Weight + ?Sized>(rho: &W, n: u32, spec: &IntegrationSpec) -> Result<Self> {
        Ok(Self {
            values: moments(rho, n.max(4), spec)?,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn c1(&self) -> f64 {
        self.values[1]
    }

    /// `d₀ = c₂ − c₁²`, the mass of the secondary measure.
    pub fn d0(&self) -> f64 {
        self.values[2] - self.values[1] * self.values[1]
    }

    /// `det (c_{i+j})_{0 ≤ i,j ≤ 2}`.
    pub fn hankel3(&self) -> f64 {
        let c = &self.values;
        c[0] * (c[2] * c[4] - c[3] * c[3]) - c[1] * (c[1] * c[4] - c[2] * c[3])
            + c[2] * (c[1] * c[3] - c[2] * c[2])
    }
}

/// Probability density `(x − a)^alpha (b − x)^beta h(x)` on `[a, b]`.
#[derive(Clone)]
pub struct Density {
    name: String,
    interval: Interval,
    exps: EndpointExponents,
    smooth: Func,
    scale: f64,
}

impl std::fmt::Debug for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Density")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .field("exps", &self.exps)
            .field("scale", &self.scale)
            .finish()
    }
}

const MASS_TOL: f64 = 1e-8;
const RENORMALIZE_LIMIT: f64 = 1e-2;
const POSITIVITY_GRID: usize = 1000;

pub const CATALOG: [&str; 5] = ["cheb-u", "cheb-t", "uniform", "linear2x", "sqrt32"];

impl Density {
    /// Builds a user density. It must be non-negative on a 1000-point
    /// interior grid; a total mass within `1e-2` of one is rescaled, anything
    /// further away is rejected.
    pub fn new(
        name: impl Into<String>,
        interval: Interval,
        exps: EndpointExponents,
        smooth: Func,
        spec: &IntegrationSpec,
    ) -> Result<Self> {
        let mut d = Self {
            name: name.into(),
            interval,
            exps,
            smooth,
            scale: 1.0,
        };
        for x in interval.interior_grid(POSITIVITY_GRID) {
            let v = d.value(x)?;
            if v < 0.0 {
                return Err(Error::NotADensity {
                    name: d.name,
                    reason: format!("negative value {v} at x = {x}"),
                });
            }
        }
        let m = mass(&d, spec)?;
        let dev = (m - 1.0).abs();
        if dev > RENORMALIZE_LIMIT {
            return Err(Error::NotADensity {
                name: d.name,
                reason: format!("total mass {m} is not 1"),
            });
        }
        if dev > MASS_TOL {
            d.scale = 1.0 / m;
        }
        Ok(d)
    }

    pub fn catalog(name: &str) -> Result<Self> {
        let (interval, exps, smooth): (Interval, EndpointExponents, Func) = match name {
            "cheb-u" => (
                Interval::new(-1.0, 1.0)?,
                EndpointExponents::new(0.5, 0.5)?,
                constant(2.0 / PI),
            ),
            "cheb-t" => (
                Interval::new(-1.0, 1.0)?,
                EndpointExponents::new(-0.5, -0.5)?,
                constant(1.0 / PI),
            ),
            "uniform" => (Interval::new(0.0, 1.0)?, EndpointExponents::SMOOTH, constant(1.0)),
            "linear2x" => (
                Interval::new(0.0, 1.0)?,
                EndpointExponents::SMOOTH,
                Polynomial::new(vec![0.0, 2.0]).into_func(),
            ),
            "sqrt32" => (
                Interval::new(0.0, 1.0)?,
                EndpointExponents::new(0.5, 0.0)?,
                constant(1.5),
            ),
            other => return Err(Error::UnknownDensity(other.to_string())),
        };
        Ok(Self {
            name: name.to_string(),
            interval,
            exps,
            smooth,
            scale: 1.0,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn exps(&self) -> EndpointExponents {
        self.exps
    }

    /// Normalization applied on construction (1 unless the input mass was
    /// slightly off).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn into_arc(self) -> Arc<dyn Weight> {
        Arc::new(self)
    }
}

impl Weight for Density {
    fn interval(&self) -> Interval {
        self.interval
    }

    fn value_at(&self, p: Abscissa) -> Result<f64> {
        let h = self.smooth.eval(p.x)?;
        Ok(self.scale * self.exps.factor(p) * h)
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// A weight multiplied by a positive constant.
pub struct ScaledWeight<W> {
    pub inner: W,
    pub factor: f64,
    pub name: String,
}

impl<W: Weight> Weight for ScaledWeight<W> {
    fn interval(&self) -> Interval {
        self.inner.interval()
    }
    fn value_at(&self, p: Abscissa) -> Result<f64> {
        Ok(self.factor * self.inner.value_at(p)?)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
    fn label(&self) -> String {
        self.name.clone()
    }
}
