//! Orthonormal polynomials of a density, the operator `T_ρ` and the
//! secondary polynomials.
//!
//! Recurrence convention:
//!
//! ```text
//! x·P_n = b_{n+1} P_{n+1} + a_n P_n + b_n P_{n−1},   P_0 = 1, P_{−1} = 0.
//! ```
//!
//! `Q_n = T_ρ(P_n)` obeys the same recurrence for `n ≥ 1` with `Q_0 = 0`
//! and `Q_1 = 1/b_1 = 1/√d₀`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::{Polynomial, Quotient, RealFunction};
use crate::measures::{integrate_against, Weight};
use crate::quadrature::{tanh_sinh_nodes, Abscissa, IntegrationSpec};

/// Default degree cap for the discretized Stieltjes procedure.
pub const DEFAULT_MAX_DEGREE: usize = 20;
const DRIFT_LIMIT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoefficients {
    /// `a_0 .. a_{N−1}`
    a: Vec<f64>,
    /// `b_1 .. b_N`
    b: Vec<f64>,
}

impl RecurrenceCoefficients {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidParameter(format!(
                "{} diagonal but {} off-diagonal coefficients",
                a.len(),
                b.len()
            )));
        }
        if let Some(bad) = b.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::InvalidParameter(format!("off-diagonal coefficient {bad} ≤ 0")));
        }
        Ok(Self { a, b })
    }

    /// Highest polynomial degree these coefficients generate.
    pub fn degree(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, n: usize) -> f64 {
        self.a[n]
    }

    /// `b_n` for `n ≥ 1`.
    pub fn b(&self, n: usize) -> f64 {
        assert!(n >= 1, "b_0 is not part of the recurrence");
        self.b[n - 1]
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.a
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.b
    }
}

/// Runs the Stieltjes procedure on tanh-sinh discretizations of `rho` of
/// increasing resolution until the coefficients settle.
pub fn recurrence_coefficients<W: Weight + ?Sized>(
    rho: &W,
    degree: usize,
    spec: &IntegrationSpec,
) -> Result<RecurrenceCoefficients> {
    recurrence_coefficients_capped(rho, degree, DEFAULT_MAX_DEGREE, spec)
}

pub fn recurrence_coefficients_capped<W: Weight + ?Sized>(
    rho: &W,
    degree: usize,
    cap: usize,
    spec: &IntegrationSpec,
) -> Result<RecurrenceCoefficients> {
    if degree == 0 || degree > cap {
        return Err(Error::InvalidParameter(format!(
            "degree {degree} outside 1..={cap}"
        )));
    }
    let settle = (10.0 * spec.rel_tol).max(1e-13);
    let mut previous: Option<RecurrenceCoefficients> = None;
    for level in 4..=spec.max_refinement_levels.max(5) {
        let measure = discretize(rho, level)?;
        let current = stieltjes_procedure(&measure, degree)?;
        if let Some(prev) = &previous {
            let gap = prev
                .a
                .iter()
                .zip(&current.a)
                .chain(prev.b.iter().zip(&current.b))
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max);
            if gap <= settle {
                check_drift(&measure, &current)?;
                return Ok(current);
            }
        }
        previous = Some(current);
    }
    let last = previous.expect("at least one level ran");
    let measure = discretize(rho, spec.max_refinement_levels.max(5))?;
    check_drift(&measure, &last)?;
    Ok(last)
}

fn discretize<W: Weight + ?Sized>(rho: &W, level: u32) -> Result<Vec<(f64, f64)>> {
    let iv = rho.interval();
    let mut cuts: Vec<Abscissa> = vec![iv.left()];
    let mut inner: Vec<f64> = rho
        .breakpoints()
        .into_iter()
        .filter(|&x| iv.contains_open(x))
        .collect();
    inner.sort_by(|p, q| p.partial_cmp(q).unwrap());
    inner.dedup();
    cuts.extend(inner.into_iter().map(|x| iv.abscissa(x)));
    cuts.push(iv.right());
    let mut out = Vec::new();
    for pair in cuts.windows(2) {
        for (p, w) in tanh_sinh_nodes(pair[0], pair[1], level) {
            let v = rho.value_at(p)? * w;
            if v != 0.0 {
                out.push((p.x, v));
            }
        }
    }
    Ok(out)
}

fn stieltjes_procedure(measure: &[(f64, f64)], degree: usize) -> Result<RecurrenceCoefficients> {
    let n = measure.len();
    let mut prev = vec![0.0; n];
    let mut cur = vec![1.0; n];
    let mut norm_cur: f64 = measure.iter().map(|(_, w)| w).sum();
    let mut a = Vec::with_capacity(degree);
    let mut b = Vec::with_capacity(degree);
    let mut b_prev_sq = 0.0;
    for _ in 0..degree {
        let ak = measure
            .iter()
            .zip(&cur)
            .map(|((x, w), p)| w * x * p * p)
            .sum::<f64>()
            / norm_cur;
        let next: Vec<f64> = measure
            .iter()
            .zip(cur.iter().zip(&prev))
            .map(|((x, _), (p, q))| (x - ak) * p - b_prev_sq * q)
            .collect();
        let norm_next: f64 = measure.iter().zip(&next).map(|((_, w), p)| w * p * p).sum();
        let bsq = norm_next / norm_cur;
        if !(bsq > 0.0) || !bsq.is_finite() {
            return Err(Error::InstabilityDetected(format!(
                "b² = {bsq} at degree {}",
                a.len() + 1
            )));
        }
        a.push(ak);
        b.push(bsq.sqrt());
        b_prev_sq = bsq;
        prev = cur;
        cur = next;
        norm_cur = norm_next;
    }
    RecurrenceCoefficients::new(a, b)
}

fn check_drift(measure: &[(f64, f64)], coeffs: &RecurrenceCoefficients) -> Result<()> {
    let n = coeffs.degree();
    // Values of the orthonormal P_0..P_n at every node.
    let values: Vec<Vec<f64>> = measure
        .iter()
        .map(|(x, _)| evaluate_recurrence(coeffs, *x, 1.0, 0.0, 0))
        .collect();
    for i in 0..=n {
        for j in 0..=i {
            let g: f64 = measure
                .iter()
                .zip(&values)
                .map(|((_, w), v)| w * v[i] * v[j])
                .sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - target).abs() > DRIFT_LIMIT {
                return Err(Error::InstabilityDetected(format!(
                    "⟨P_{i}, P_{j}⟩ = {g}"
                )));
            }
        }
    }
    Ok(())
}

/// Values `y_0..y_N` of the recurrence started from `y_first` at index
/// `first` (with zero below it).
fn evaluate_recurrence(
    coeffs: &RecurrenceCoefficients,
    x: f64,
    y_first: f64,
    y_before: f64,
    first: usize,
) -> Vec<f64> {
    let n = coeffs.degree();
    let mut out = vec![0.0; n + 1];
    out[first] = y_first;
    let mut prev = y_before;
    let mut cur = y_first;
    for k in first..n {
        let bk = if k == 0 { 0.0 } else { coeffs.b(k) };
        let next = ((x - coeffs.a(k)) * cur - bk * prev) / coeffs.b(k + 1);
        out[k + 1] = next;
        prev = cur;
        cur = next;
    }
    out
}

/// A finite family of polynomials indexed from 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSequence {
    polys: Vec<Polynomial>,
}

impl PolynomialSequence {
    pub fn new(polys: Vec<Polynomial>) -> Self {
        Self { polys }
    }

    pub fn get(&self, n: usize) -> &Polynomial {
        &self.polys[n]
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Polynomial> {
        self.polys.iter()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.polys.iter().map(|p| p.scale(k)).collect())
    }
}

fn run_recurrence(coeffs: &RecurrenceCoefficients, first: usize, seed: Polynomial) -> PolynomialSequence {
    let n = coeffs.degree();
    let mut polys = vec![Polynomial::zero(); n + 1];
    polys[first] = seed;
    for k in first..n {
        let shifted = &Polynomial::shifted_x(coeffs.a(k)) * &polys[k];
        let back = if k == 0 {
            Polynomial::zero()
        } else {
            polys[k - 1].scale(coeffs.b(k))
        };
        polys[k + 1] = (&shifted - &back).scale(1.0 / coeffs.b(k + 1));
    }
    PolynomialSequence::new(polys)
}

/// `P_0..P_N` in the monomial basis.
pub fn orthonormal_polys(coeffs: &RecurrenceCoefficients) -> PolynomialSequence {
    run_recurrence(coeffs, 0, Polynomial::constant(1.0))
}

/// `Q_0..Q_N` with `Q_0 = 0`, `Q_1 = 1/√d₀`.
pub fn secondary_polys(coeffs: &RecurrenceCoefficients, d0: f64) -> Result<PolynomialSequence> {
    if !(d0 > 0.0) {
        return Err(Error::DegenerateMeasure { d0 });
    }
    if coeffs.degree() == 0 {
        return Ok(PolynomialSequence::new(vec![Polynomial::zero()]));
    }
    Ok(run_recurrence(coeffs, 1, Polynomial::constant(1.0 / d0.sqrt())))
}

/// `A_n = Q_{n+1}` and `B_n = (x − c₁) Q_{n+1} − P_{n+1}`, `n = 0..N−1`.
pub fn mu_families(
    p: &PolynomialSequence,
    q: &PolynomialSequence,
    c1: f64,
) -> Result<(PolynomialSequence, PolynomialSequence)> {
    if p.len() != q.len() || p.len() < 2 {
        return Err(Error::InvalidParameter(
            "P and Q must have the same length ≥ 2".into(),
        ));
    }
    let shift = Polynomial::shifted_x(c1);
    let a: Vec<Polynomial> = (1..q.len()).map(|n| q.get(n).clone()).collect();
    let b: Vec<Polynomial> = (1..q.len())
        .map(|n| &(&shift * q.get(n)) - p.get(n))
        .collect();
    Ok((PolynomialSequence::new(a), PolynomialSequence::new(b)))
}

/// `Ã_n = √d₀·A_n`, `B̃_n = B_n/√d₀`: the families attached to `μ₀`.
pub fn normalized_mu_families(
    a: &PolynomialSequence,
    b: &PolynomialSequence,
    d0: f64,
) -> (PolynomialSequence, PolynomialSequence) {
    (a.scaled(d0.sqrt()), b.scaled(1.0 / d0.sqrt()))
}

/// `T_ρ(f)(x) = ∫ (f(u) − f(x)) / (u − x) ρ(u) du`.
pub fn apply_t<W: Weight + ?Sized>(
    rho: &W,
    f: &dyn RealFunction,
    x: f64,
    spec: &IntegrationSpec,
) -> Result<f64> {
    let iv = rho.interval();
    if !iv.contains_open(x) {
        return Err(Error::InvalidParameter(format!(
            "T_ρ evaluated at {x}, outside the open interval"
        )));
    }
    apply_t_closed(rho, f, x, spec)
}

/// `T_ρ(f)(x)` on the closed interval. Nested operators sample their inner
/// function at quadrature nodes, some of which round onto an endpoint.
pub(crate) fn apply_t_closed<W: Weight + ?Sized>(
    rho: &W,
    f: &dyn RealFunction,
    x: f64,
    spec: &IntegrationSpec,
) -> Result<f64> {
    let iv = rho.interval();
    if !iv.contains_closed(x) {
        return Err(Error::InvalidParameter(format!(
            "T_ρ evaluated at {x}, outside the interval"
        )));
    }
    if let Some(q) = f.divided_by_pole(x) {
        return Ok(integrate_against(rho, &[], spec, |p| Ok(q.value(p.x)))?.value);
    }
    let q = Quotient::new(|y| f.eval(y), x, iv.len(), (x - iv.a(), iv.b() - x))?;
    Ok(integrate_against(rho, &[], spec, |p| q.at(p.x))?.value)
}

/// `T_ρ` applied to a complex-valued function such as `u ↦ 1/(u − z)`.
pub fn apply_t_complex<W, F>(rho: &W, f: F, x: f64, spec: &IntegrationSpec) -> Result<Complex64>
where
    W: Weight + ?Sized,
    F: Fn(f64) -> Complex64,
{
    let iv = rho.interval();
    if !iv.contains_open(x) {
        return Err(Error::InvalidParameter(format!(
            "T_ρ evaluated at {x}, outside the open interval"
        )));
    }
    let room = (x - iv.a(), iv.b() - x);
    let part = |component: fn(Complex64) -> f64| -> Result<f64> {
        let q = Quotient::new(|y| Ok(component(f(y))), x, iv.len(), room)?;
        Ok(integrate_against(rho, &[], spec, |p| q.at(p.x))?.value)
    };
    let re = part(|c| c.re)?;
    let im = part(|c| c.im)?;
    Ok(Complex64::new(re, im))
}

/// Wraps `x ↦ T_ρ(f)(x)` as a function.
pub struct SecondaryImage {
    pub rho: Arc<dyn Weight>,
    pub f: Arc<dyn RealFunction>,
    pub spec: IntegrationSpec,
}

impl RealFunction for SecondaryImage {
    fn eval(&self, x: f64) -> Result<f64> {
        apply_t_closed(self.rho.as_ref(), self.f.as_ref(), x, &self.spec)
    }
}
