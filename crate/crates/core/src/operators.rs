//! The isometries `V_ρ^t` between equi-normal densities, their inverses, the
//! closed-form solver for `f + λ(x − c₁)T_ρ(f) = g`, and grid checks of the
//! composition identities.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{FamilyDensity, FamilyParameter};
use crate::function::{Func, Polynomial, RealFunction};
use crate::measures::{integrate_against, mean_project, moments, ScaledWeight, Weight};
use crate::orthopoly::{
    apply_t_closed, orthonormal_polys, recurrence_coefficients, secondary_polys, PolynomialSequence,
};
use crate::quadrature::{IntegrationSpec, Interval};
use crate::report::{Provenance, VerificationReport};
use crate::stieltjes::ComplexPoint;

/// A density `ρ`, a validated family parameter `t` and the member `ρ_t`.
#[derive(Clone)]
pub struct OperatorContext {
    rho: Arc<dyn Weight>,
    param: FamilyParameter,
    c1: f64,
    rho_t: Arc<FamilyDensity>,
}

impl OperatorContext {
    /// Fails with [`Error::InvalidParameter`] when `t` does not pass the
    /// validity policy.
    pub fn new(rho: Arc<dyn Weight>, t: f64, spec: &IntegrationSpec) -> Result<Self> {
        let param = FamilyParameter::classify(&rho, t, spec)?;
        if !param.is_valid() {
            return Err(Error::InvalidParameter(format!(
                "t = {t} does not give a probability density for {} (mass {:?}, {} real denominator roots)",
                rho.label(),
                param.mass,
                param.roots.len()
            )));
        }
        let c = moments(rho.as_ref(), 1, spec)?;
        let c1 = c[1] / c[0];
        let rho_t = Arc::new(FamilyDensity::with_mean(Arc::clone(&rho), t, c1, spec));
        Ok(Self { rho, param, c1, rho_t })
    }

    pub fn rho(&self) -> &Arc<dyn Weight> {
        &self.rho
    }

    pub fn param(&self) -> &FamilyParameter {
        &self.param
    }

    pub fn t(&self) -> f64 {
        self.param.t
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn rho_t(&self) -> &Arc<FamilyDensity> {
        &self.rho_t
    }

    pub fn rho_t_weight(&self) -> Arc<dyn Weight> {
        Arc::clone(&self.rho_t) as Arc<dyn Weight>
    }

    /// `ρ̃_t = ρ_t / t`.
    pub fn rho_t_tilde(&self) -> ScaledWeight<Arc<FamilyDensity>> {
        ScaledWeight {
            inner: Arc::clone(&self.rho_t),
            factor: 1.0 / self.t(),
            name: format!("{}~", self.rho_t.label()),
        }
    }

    fn interval(&self) -> Interval {
        self.rho.interval()
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        let iv = self.interval();
        if iv.contains_open(x) {
            Ok(())
        } else {
            Err(Error::PoleOutsideInterval { pole: x, a: iv.a(), b: iv.b() })
        }
    }

    fn v_closed(&self, f: &dyn RealFunction, x: f64, spec: &IntegrationSpec) -> Result<f64> {
        let t = self.t();
        let fx = f.eval(x)?;
        if t == 1.0 {
            return Ok(fx);
        }
        let tf = apply_t_closed(self.rho.as_ref(), f, x, spec)?;
        Ok(t * fx + (1.0 - t) * (x - self.c1) * tf)
    }

    fn v_inverse_closed(&self, f: &dyn RealFunction, x: f64, spec: &IntegrationSpec) -> Result<f64> {
        let t = self.t();
        let fx = f.eval(x)?;
        if t == 1.0 {
            return Ok(fx);
        }
        let tf = apply_t_closed(self.rho_t.as_ref(), f, x, spec)?;
        Ok(fx / t + (1.0 - 1.0 / t) * (x - self.c1) * tf)
    }
}

/// `V_ρ^t(f)(x) = t·f(x) + (1−t)(x−c₁)·T_ρ(f)(x)`.
pub fn apply_v(ctx: &OperatorContext, f: &dyn RealFunction, x: f64, spec: &IntegrationSpec) -> Result<f64> {
    ctx.check_interior(x)?;
    ctx.v_closed(f, x, spec)
}

/// `(V_ρ^t)⁻¹(f)(x) = f(x)/t + (1 − 1/t)(x−c₁)·T_{ρ_t}(f)(x)`.
pub fn apply_v_inverse(
    ctx: &OperatorContext,
    f: &dyn RealFunction,
    x: f64,
    spec: &IntegrationSpec,
) -> Result<f64> {
    ctx.check_interior(x)?;
    ctx.v_inverse_closed(f, x, spec)
}

struct VImage {
    ctx: OperatorContext,
    f: Func,
    spec: IntegrationSpec,
    inverse: bool,
}

impl RealFunction for VImage {
    fn eval(&self, x: f64) -> Result<f64> {
        if self.inverse {
            self.ctx.v_inverse_closed(self.f.as_ref(), x, &self.spec)
        } else {
            self.ctx.v_closed(self.f.as_ref(), x, &self.spec)
        }
    }
}

/// `V_ρ^t(f)` as a function on the closed interval.
pub fn v_image(ctx: &OperatorContext, f: Func, spec: &IntegrationSpec) -> Func {
    Arc::new(VImage { ctx: ctx.clone(), f, spec: *spec, inverse: false })
}

pub fn v_inverse_image(ctx: &OperatorContext, f: Func, spec: &IntegrationSpec) -> Func {
    Arc::new(VImage { ctx: ctx.clone(), f, spec: *spec, inverse: true })
}

/// `T_ρ(f)` as a function on the closed interval.
pub fn t_image(rho: Arc<dyn Weight>, f: Func, spec: &IntegrationSpec) -> Func {
    Arc::new(crate::orthopoly::SecondaryImage { rho, f, spec: *spec })
}

/// `(∫ f̃² ρ, ∫ V(f̃)² ρ̃_t)` where `f̃ = f − ∫fρ`.
pub fn isometry_sides(ctx: &OperatorContext, f: Func, spec: &IntegrationSpec) -> Result<(f64, f64)> {
    let ft = mean_project(f, ctx.rho.as_ref(), spec)?;
    let l = integrate_against(ctx.rho.as_ref(), &[], spec, |p| {
        let v = ft.eval(p.x)?;
        Ok(v * v)
    })?
    .value;
    let tilde = ctx.rho_t_tilde();
    let r = integrate_against(&tilde, &[], spec, |p| {
        let v = ctx.v_closed(ft.as_ref(), p.x, spec)?;
        Ok(v * v)
    })?
    .value;
    Ok((l, r))
}

/// Compares the two sides of [`isometry_sides`].
pub fn isometry_check(ctx: &OperatorContext, f: Func, spec: &IntegrationSpec) -> VerificationReport {
    let start = Instant::now();
    let id = format!("isometry/{}/t={}", ctx.rho.label(), ctx.t());
    match isometry_sides(ctx, f, spec) {
        Ok((l, r)) => {
            let mut rep = VerificationReport::property(&id, (l - r).abs(), 1e-6 * l.abs().max(1.0), Provenance::Paper)
                .with_detail(format!("L={l:.14} R={r:.14}"))
                .with_runtime(start);
            rep.computed = (l - r).abs();
            rep
        }
        Err(e) => VerificationReport::failed(id, Provenance::Paper, e).with_runtime(start),
    }
}

/// `P_n^t = (t·P_n + (1−t)(x−c₁)Q_n)/√t` and `Q_n^t = Q_n/√t` for
/// `n = 0..=N`, with `P_0^t = 1` and `Q_0^t = 0`.
pub fn transformed_polys(
    ctx: &OperatorContext,
    n: usize,
    spec: &IntegrationSpec,
) -> Result<(PolynomialSequence, PolynomialSequence)> {
    let coeffs = recurrence_coefficients(ctx.rho.as_ref(), n, spec)?;
    let c = moments(ctx.rho.as_ref(), 2, spec)?;
    let d0 = c[2] / c[0] - ctx.c1 * ctx.c1;
    let p = orthonormal_polys(&coeffs);
    let q = secondary_polys(&coeffs, d0)?;
    let t = ctx.t();
    let rt = t.sqrt();
    let shift = Polynomial::shifted_x(ctx.c1);
    let mut pt = vec![Polynomial::constant(1.0)];
    let mut qt = vec![Polynomial::zero()];
    for k in 1..=n {
        let mixed = &p.get(k).scale(t) + &(&shift * q.get(k)).scale(1.0 - t);
        pt.push(mixed.scale(1.0 / rt));
        qt.push(q.get(k).scale(1.0 / rt));
    }
    Ok((PolynomialSequence::new(pt), PolynomialSequence::new(qt)))
}

/// The equation `f(x) + λ(x − c₁)∫ (f(u) − f(x))/(u − x) ρ(u) du = g(x)`.
#[derive(Clone)]
pub struct IntegralEquationProblem {
    ctx: OperatorContext,
    lambda: f64,
    g: Func,
}

impl IntegralEquationProblem {
    /// Requires `λ > −1` and `ρ_{1/(1+λ)}` to pass the validity policy.
    pub fn new(rho: Arc<dyn Weight>, lambda: f64, g: Func, spec: &IntegrationSpec) -> Result<Self> {
        if !(lambda > -1.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "λ = {lambda}: need λ > −1 so that t = 1/(1+λ) is positive"
            )));
        }
        let ctx = OperatorContext::new(rho, 1.0 / (1.0 + lambda), spec)?;
        Ok(Self { ctx, lambda, g })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn t(&self) -> f64 {
        self.ctx.t()
    }

    pub fn context(&self) -> &OperatorContext {
        &self.ctx
    }

    pub fn g(&self) -> &Func {
        &self.g
    }

    /// The solution as a function on the closed interval.
    pub fn solution(&self, spec: &IntegrationSpec) -> Func {
        Arc::new(Solution { problem: self.clone(), spec: *spec })
    }

    fn solve_closed(&self, x: f64, spec: &IntegrationSpec) -> Result<f64> {
        let gx = self.g.eval(x)?;
        if self.lambda == 0.0 {
            return Ok(gx);
        }
        let tg = apply_t_closed(self.ctx.rho_t.as_ref(), self.g.as_ref(), x, spec)?;
        Ok(gx - self.lambda / (1.0 + self.lambda) * (x - self.ctx.c1) * tg)
    }

    /// `f(x) + λ(x − c₁)T_ρ(f)(x) − g(x)`.
    pub fn residual(&self, f: &dyn RealFunction, x: f64, spec: &IntegrationSpec) -> Result<f64> {
        let tf = apply_t_closed(self.ctx.rho.as_ref(), f, x, spec)?;
        Ok(f.eval(x)? + self.lambda * (x - self.ctx.c1) * tf - self.g.eval(x)?)
    }
}

struct Solution {
    problem: IntegralEquationProblem,
    spec: IntegrationSpec,
}

impl RealFunction for Solution {
    fn eval(&self, x: f64) -> Result<f64> {
        self.problem.solve_closed(x, &self.spec)
    }
}

/// `f(x) = g(x) − λ/(1+λ)·(x − c₁)·T_{ρ_{1/(1+λ)}}(g)(x)`.
pub fn solve_integral_equation(
    problem: &IntegralEquationProblem,
    x: f64,
    spec: &IntegrationSpec,
) -> Result<f64> {
    problem.ctx.check_interior(x)?;
    problem.solve_closed(x, spec)
}

/// Largest residual of `f` on a 30-point interior grid; passes below 1e-5.
pub fn residual_check(
    problem: &IntegralEquationProblem,
    f: &dyn RealFunction,
    spec: &IntegrationSpec,
) -> VerificationReport {
    let start = Instant::now();
    let id = format!("residual/{}/lambda={}", problem.ctx.rho.label(), problem.lambda);
    let run = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in problem.ctx.interval().interior_grid(30) {
            worst = worst.max(problem.residual(f, x, spec)?.abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(w) => VerificationReport::property(id, w, 1e-5, Provenance::Paper).with_runtime(start),
        Err(e) => VerificationReport::failed(id, Provenance::Paper, e).with_runtime(start),
    }
}

struct ShiftMultiply {
    f: Func,
    c1: f64,
}

impl RealFunction for ShiftMultiply {
    fn eval(&self, x: f64) -> Result<f64> {
        Ok((x - self.c1) * self.f.eval(x)?)
    }
}

/// `x ↦ (x − c₁)·f(x)`.
pub fn shift_multiply(f: Func, c1: f64) -> Func {
    Arc::new(ShiftMultiply { f, c1 })
}

fn validated(rho: &Arc<dyn Weight>, t: f64, spec: &IntegrationSpec) -> Result<OperatorContext> {
    OperatorContext::new(Arc::clone(rho), t, spec)
}

fn grid_report<F>(id: String, grid: Vec<f64>, tol: f64, start: Instant, mut gap: F) -> VerificationReport
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut worst: f64 = 0.0;
    let mut at = f64::NAN;
    for x in grid {
        match gap(x) {
            Ok(g) => {
                if g > worst || at.is_nan() {
                    worst = worst.max(g);
                    at = x;
                }
            }
            Err(e) => {
                return VerificationReport::failed(id, Provenance::Paper, format!("at x={x}: {e}")).with_runtime(start)
            }
        }
    }
    VerificationReport::property(id, worst, tol, Provenance::Paper)
        .with_detail(format!("worst at x={at:.6}"))
        .with_runtime(start)
}

/// `T_{ρ_t}∘T_{ρ_s}∘S = (s·T_{ρ_s} − t·T_{ρ_t})/(s − t)` on a 20-point grid.
pub fn barycentric_check(
    rho: &Arc<dyn Weight>,
    t: f64,
    s: f64,
    f: Func,
    spec: &IntegrationSpec,
) -> VerificationReport {
    let start = Instant::now();
    let id = format!("barycentric/{}/t={t},s={s}", rho.label());
    if t == s {
        return VerificationReport::failed(id, Provenance::Paper, "t and s must differ");
    }
    let (ct, cs) = match (validated(rho, t, spec), validated(rho, s, spec)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return VerificationReport::failed(id, Provenance::Paper, e),
    };
    let (wt, ws) = (ct.rho_t_weight(), cs.rho_t_weight());
    let inner = t_image(Arc::clone(&ws), shift_multiply(Arc::clone(&f), ct.c1), spec);
    let grid = rho.interval().interior_grid(20);
    grid_report(id, grid, 1e-5, start, |x| {
        let l = apply_t_closed(wt.as_ref(), inner.as_ref(), x, spec)?;
        let a = apply_t_closed(ws.as_ref(), f.as_ref(), x, spec)?;
        let b = apply_t_closed(wt.as_ref(), f.as_ref(), x, spec)?;
        Ok((l - (s * a - t * b) / (s - t)).abs())
    })
}

/// `V_{ρ_t}^s ∘ V_ρ^t = V_ρ^{ts}` on a 20-point grid.
pub fn composition_check(
    rho: &Arc<dyn Weight>,
    t: f64,
    s: f64,
    f: Func,
    spec: &IntegrationSpec,
) -> VerificationReport {
    let start = Instant::now();
    let id = format!("composition/{}/t={t},s={s}", rho.label());
    let contexts = || -> Result<(OperatorContext, OperatorContext, OperatorContext)> {
        let ct = validated(rho, t, spec)?;
        let cts = validated(rho, t * s, spec)?;
        let cs = OperatorContext::new(ct.rho_t_weight(), s, spec)?;
        Ok((ct, cs, cts))
    };
    let (ct, cs, cts) = match contexts() {
        Ok(c) => c,
        Err(e) => return VerificationReport::failed(id, Provenance::Paper, e),
    };
    let vt = v_image(&ct, Arc::clone(&f), spec);
    let grid = rho.interval().interior_grid(20);
    grid_report(id, grid, 1e-5, start, |x| {
        let l = cs.v_closed(vt.as_ref(), x, spec)?;
        let r = cts.v_closed(f.as_ref(), x, spec)?;
        Ok((l - r).abs())
    })
}

/// `(z − c₁)S^t S^s = (t·S^t − s·S^s)/(t − s)` at one point off the support.
pub fn transform_relation_check(
    rho: &Arc<dyn Weight>,
    t: f64,
    s: f64,
    z: ComplexPoint,
    spec: &IntegrationSpec,
) -> VerificationReport {
    let start = Instant::now();
    let id = format!("transform-relation/{}/t={t},s={s}/z={z}", rho.label());
    if t == s {
        return VerificationReport::failed(id, Provenance::Paper, "t and s must differ");
    }
    let run = || -> Result<(Complex64, Complex64)> {
        let c = moments(rho.as_ref(), 1, spec)?;
        let c1 = c[1] / c[0];
        let st = FamilyDensity::with_mean(Arc::clone(rho), t, c1, spec).transform(z)?;
        let ss = FamilyDensity::with_mean(Arc::clone(rho), s, c1, spec).transform(z)?;
        Ok(((z - c1) * st * ss, (t * st - s * ss) / (t - s)))
    };
    match run() {
        Ok((l, r)) => VerificationReport::property(id, (l - r).norm(), 1e-8, Provenance::Paper)
            .with_detail(format!("L={l:.12} R={r:.12}"))
            .with_runtime(start),
        Err(e) => VerificationReport::failed(id, Provenance::Paper, e).with_runtime(start),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{constant, from_fn};
    use crate::measures::{inner_product, Density};
    use crate::orthopoly::apply_t;

    fn cat(name: &str) -> Arc<dyn Weight> {
        Density::catalog(name).unwrap().into_arc()
    }

    fn spec() -> IntegrationSpec {
        IntegrationSpec::default()
    }

    #[test]
    fn v_of_constants_and_identity() {
        let s = spec();
        let ctx = OperatorContext::new(cat("uniform"), 0.6, &s).unwrap();
        let c = constant(2.5);
        for x in [0.1, 0.5, 0.93] {
            assert!((apply_v(&ctx, c.as_ref(), x, &s).unwrap() - 1.5).abs() < 1e-12);
        }
        let id = OperatorContext::new(cat("uniform"), 1.0, &s).unwrap();
        let f = from_fn(|x| x.sin());
        assert_eq!(apply_v(&id, f.as_ref(), 0.3, &s).unwrap(), 0.3f64.sin());
        assert_eq!(apply_v_inverse(&id, f.as_ref(), 0.3, &s).unwrap(), 0.3f64.sin());
        assert!(apply_v(&ctx, f.as_ref(), 1.0, &s).is_err());
    }

    #[test]
    fn invalid_parameter_refused() {
        let s = spec();
        assert!(matches!(
            OperatorContext::new(cat("sqrt32"), 2.0, &s),
            Err(Error::InvalidParameter(_))
        ));
        assert!(IntegralEquationProblem::new(cat("cheb-u"), -1.0, constant(1.0), &s).is_err());
        assert!(IntegralEquationProblem::new(cat("cheb-u"), -2.0, constant(1.0), &s).is_err());
        // λ = −2/3 gives t = 3, which has a real denominator root.
        assert!(IntegralEquationProblem::new(cat("cheb-u"), -2.0 / 3.0, constant(1.0), &s).is_err());
    }

    #[test]
    fn isometry_values() {
        let s = spec();
        let ctx = OperatorContext::new(cat("cheb-u"), 1.35, &s).unwrap();
        let f = from_fn(|x| x.powi(3) - 2.0 / (x + 5.0) + 1.0 / (x * x + 3.0));
        let r = isometry_check(&ctx, f, &s);
        assert!(r.pass, "{r}");
        assert!(r.detail.contains("L=0.10100202639"), "{r}");
        let r = isometry_check(&ctx, constant(4.0), &s);
        assert!(r.pass && r.computed < 1e-12, "{r}");
    }

    #[test]
    fn v_maps_p_to_transformed_p() {
        let s = spec();
        let ctx = OperatorContext::new(cat("cheb-u"), 0.7, &s).unwrap();
        let coeffs = recurrence_coefficients(ctx.rho().as_ref(), 4, &s).unwrap();
        let p = orthonormal_polys(&coeffs);
        let (pt, qt) = transformed_polys(&ctx, 4, &s).unwrap();
        for n in 1..=4 {
            for x in [-0.6, 0.2, 0.75] {
                let v = apply_v(&ctx, p.get(n), x, &s).unwrap();
                assert!((v - ctx.t().sqrt() * pt.get(n).value(x)).abs() < 1e-9);
                // Q_n^t = T_{ρ_t}(P_n^t)
                let q = apply_t(ctx.rho_t().as_ref(), pt.get(n), x, &s).unwrap();
                assert!((q - qt.get(n).value(x)).abs() < 1e-6, "n={n} x={x}");
            }
        }
        let one = OperatorContext::new(cat("cheb-u"), 1.0, &s).unwrap();
        let (pt1, _) = transformed_polys(&one, 3, &s).unwrap();
        for n in 0..=3 {
            let d = pt1.get(n) - p.get(n);
            assert!(d.coeffs().iter().all(|c| c.abs() < 1e-12));
        }
    }

    #[test]
    fn transformed_polys_orthonormal() {
        let s = spec();
        for t in [0.8, 2.0] {
            let ctx = OperatorContext::new(cat("cheb-u"), t, &s).unwrap();
            let (pt, _) = transformed_polys(&ctx, 3, &s).unwrap();
            let w = ctx.rho_t_weight();
            for n in 0..=3 {
                for m in 0..=n {
                    let ip = inner_product(pt.get(n), pt.get(m), w.as_ref(), &s).unwrap();
                    let e = if n == m { 1.0 } else { 0.0 };
                    assert!((ip - e).abs() < 1e-6, "t={t} n={n} m={m}: {ip}");
                }
            }
        }
    }

    #[test]
    fn inverse_pair_and_factorization() {
        let s = spec();
        let rho = cat("cheb-u");
        let ctx = OperatorContext::new(Arc::clone(&rho), 0.7, &s).unwrap();
        let f = mean_project(from_fn(|x| x * x * x), rho.as_ref(), &s).unwrap();
        let vf = v_image(&ctx, Arc::clone(&f), &s);
        for x in Interval::new(-1.0, 1.0).unwrap().interior_grid(9) {
            let back = apply_v_inverse(&ctx, vf.as_ref(), x, &s).unwrap();
            assert!((back - f.eval(x).unwrap()).abs() < 1e-6);
            let lhs = apply_t(ctx.rho_t().as_ref(), vf.as_ref(), x, &s).unwrap();
            let rhs = apply_t(rho.as_ref(), f.as_ref(), x, &s).unwrap();
            assert!((lhs - rhs).abs() < 1e-6);
        }
    }

    #[test]
    fn inverse_at_two_is_half_the_listed_solver() {
        // With ρ_2 the first-kind weight, t·(V²)⁻¹(g) = g + x·T_{ρ₂}(g).
        let s = spec();
        let ctx = OperatorContext::new(cat("cheb-u"), 2.0, &s).unwrap();
        let cheb_t = cat("cheb-t");
        let g = from_fn(|x| 1.0 / (1.0 + x * x));
        for x in [-0.7, 0.0, 0.4, 0.9] {
            let w = g.eval(x).unwrap() + x * apply_t(cheb_t.as_ref(), g.as_ref(), x, &s).unwrap();
            let v = apply_v_inverse(&ctx, g.as_ref(), x, &s).unwrap();
            assert!((2.0 * v - w).abs() < 1e-8);
        }
    }

    #[test]
    fn solver_round_trips() {
        let s = spec();
        let gs: Vec<Func> = vec![
            from_fn(|x| 2.0 * x.powi(11) - 7.0 * x.powi(10) + 8.0 * x.powi(5) - 3.0 * x + 2.0),
            from_fn(|x| 1.0 / (1.0 + x * x)),
            from_fn(|x| x.powi(3) / (x + 2.0)),
            from_fn(|x| 1.0 / ((x + 3.0) * (x + 3.0))),
        ];
        for g in gs {
            let pb = IntegralEquationProblem::new(cat("cheb-u"), -0.5, g, &s).unwrap();
            assert_eq!(pb.t(), 2.0);
            let f = pb.solution(&s);
            let r = residual_check(&pb, f.as_ref(), &s);
            assert!(r.pass, "{r}");
        }
        let pb = IntegralEquationProblem::new(cat("uniform"), 0.0, from_fn(|x| x.exp()), &s).unwrap();
        assert_eq!(solve_integral_equation(&pb, 0.3, &s).unwrap(), 0.3f64.exp());
        let pb = IntegralEquationProblem::new(cat("uniform"), 0.8, constant(3.0), &s).unwrap();
        assert!((solve_integral_equation(&pb, 0.3, &s).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn barycentric_chebyshev() {
        let s = spec();
        let rho = cat("cheb-u");
        let f = from_fn(|x| 7.0 * x.powi(5) - 4.0 * x.powi(3) + x / (x * x + 3.0));
        let r = barycentric_check(&rho, 2.0, 1.0, Arc::clone(&f), &s);
        assert!(r.pass, "{r}");
        // Both sides against the closed form.
        let cheb_t = cat("cheb-t");
        let closed = |x: f64| {
            let x2 = x * x;
            (41.0 * x2 - 24.0 * 3f64.sqrt() + 81.0 + 56.0 * x2 * x2 * x2 + 178.0 * x2 * x2) / (8.0 * (x2 + 3.0))
        };
        let inner = t_image(Arc::clone(&rho), shift_multiply(Arc::clone(&f), 0.0), &s);
        for x in [-0.8, -0.1, 0.5] {
            let l = apply_t(cheb_t.as_ref(), inner.as_ref(), x, &s).unwrap();
            assert!((l - closed(x)).abs() < 1e-6, "x={x}: {l} vs {}", closed(x));
        }
    }

    #[test]
    fn composition_and_transform_relation() {
        let s = spec();
        let rho = cat("cheb-u");
        let f = mean_project(from_fn(|x| x * x * x + x), rho.as_ref(), &s).unwrap();
        let r = composition_check(&rho, 0.5, 0.8, f, &s);
        assert!(r.pass, "{r}");
        let r = transform_relation_check(&rho, 1.0, 2.0, Complex64::new(2.0, 0.0), &s);
        assert!(r.pass, "{r}");
        assert!(r.detail.contains("L=0.6188"), "{r}");
        let r = transform_relation_check(&cat("uniform"), 0.5, 0.9, Complex64::new(2.0, 1.0), &s);
        assert!(r.pass, "{r}");
    }

    #[test]
    fn shift_multiply_values() {
        let f = shift_multiply(from_fn(|x| x), 0.5);
        assert_eq!(f.eval(2.0).unwrap(), 3.0);
        assert_eq!(shift_multiply(constant(1.0), 0.0).eval(0.7).unwrap(), 0.7);
    }
}
