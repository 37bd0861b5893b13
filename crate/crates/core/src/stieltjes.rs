//! Stieltjes transforms, the reducer, the secondary measure and
//! Stieltjes–Perron inversion.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{integrate_against, moments, ScaledWeight, Weight};
use crate::quadrature::{principal_value_at, Abscissa, IntegrationSpec, Interval};

pub type ComplexPoint = Complex64;

/// Points closer than this to the support are treated as lying on it.
pub const ON_INTERVAL: f64 = 1e-12;

/// `S_ρ(z) = ∫ ρ(t) / (z − t) dt` for `z` off the support.
pub fn stieltjes_transform<W: Weight + ?Sized>(
    rho: &W,
    z: ComplexPoint,
    spec: &IntegrationSpec,
) -> Result<Complex64> {
    let iv = rho.interval();
    if iv.distance(z) < ON_INTERVAL {
        return Err(Error::PointOnInterval { re: z.re, im: z.im });
    }
    // Near the cut the integrand peaks at Re z; splitting there puts the
    // peak at a tanh-sinh endpoint.
    let extra = [z.re];
    Ok(integrate_against(rho, &extra, spec, |p| Ok(1.0 / Complex64::new(z.re - p.x, z.im)))?.value)
}

/// Same as [`stieltjes_transform`] for a real point outside the support.
pub fn stieltjes_real<W: Weight + ?Sized>(rho: &W, x: f64, spec: &IntegrationSpec) -> Result<f64> {
    let iv = rho.interval();
    if iv.distance(Complex64::new(x, 0.0)) < ON_INTERVAL {
        return Err(Error::PointOnInterval { re: x, im: 0.0 });
    }
    // x − t computed from endpoint distances keeps full accuracy near the
    // support.
    let (a, b) = (iv.a(), iv.b());
    Ok(integrate_against(rho, &[], spec, |p| {
        let d = if x > b { (x - b) + p.to_b } else { -((a - x) + p.from_a) };
        Ok(1.0 / d)
    })?
    .value)
}

/// Reducer `φ(x) = 2 PV ∫ ρ(t) / (x − t) dt`.
pub fn reducer<W: Weight + ?Sized>(rho: &W, x: f64, spec: &IntegrationSpec) -> Result<f64> {
    let iv = rho.interval();
    if !iv.contains_open(x) {
        return Err(Error::PoleOutsideInterval {
            pole: x,
            a: iv.a(),
            b: iv.b(),
        });
    }
    reducer_at(rho, iv.abscissa(x), spec)
}

pub(crate) fn reducer_at<W: Weight + ?Sized>(
    rho: &W,
    p: Abscissa,
    spec: &IntegrationSpec,
) -> Result<f64> {
    let iv = rho.interval();
    let pv = principal_value_at(|u| rho.value_at(u), &iv, p, &rho.breakpoints(), spec)?;
    Ok(2.0 * pv.value)
}

/// Memo of reducer values keyed by abscissa. Quadratures over the same
/// support revisit identical nodes, so hits are frequent.
#[derive(Default)]
pub struct ReducerCache {
    map: RwLock<HashMap<(u64, u64), f64>>,
}

impl ReducerCache {
    pub fn get_or_compute<F>(&self, p: Abscissa, compute: F) -> Result<f64>
    where
        F: FnOnce() -> Result<f64>,
    {
        let key = p.key();
        if let Some(v) = self.map.read().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = compute()?;
        self.map.write().unwrap().entry(key).or_insert(v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `Φ(x, 1, −1/2) = Σ_{n≥0} xⁿ / (n − 1/2)` on `0 < x < 1`.
///
/// Writing `s = √x`, the series is `2(−1 + Σ_{n≥1} s^{2n}/(2n − 1))`, which
/// sums to `−2 + 2√x·artanh(√x)`.
pub fn lerch_phi_half(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::DomainError {
            function: "lerch_phi_half",
            x,
        });
    }
    let s = x.sqrt();
    Ok(-2.0 + 2.0 * s * s.atanh())
}

/// The secondary measure `μ = ρ / (φ²/4 + π²ρ²)` of a density, with its
/// mass `d₀ = c₂ − c₁²`.
pub struct SecondaryMeasure {
    base: Arc<dyn Weight>,
    c1: f64,
    d0: f64,
    spec: IntegrationSpec,
    cache: ReducerCache,
}

impl SecondaryMeasure {
    pub fn new(base: Arc<dyn Weight>, spec: &IntegrationSpec) -> Result<Self> {
        let c = moments(base.as_ref(), 2, spec)?;
        let c1 = c[1] / c[0];
        let d0 = c[2] / c[0] - c1 * c1;
        if !(d0 > 1e-12) {
            return Err(Error::DegenerateMeasure { d0 });
        }
        Ok(Self {
            base,
            c1,
            d0,
            spec: *spec,
            cache: ReducerCache::default(),
        })
    }

    pub fn base(&self) -> &Arc<dyn Weight> {
        &self.base
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn reducer_at(&self, p: Abscissa) -> Result<f64> {
        self.cache
            .get_or_compute(p, || reducer_at(self.base.as_ref(), p, &self.spec))
    }

    pub fn mu(&self, x: f64) -> Result<f64> {
        self.value(x)
    }

    pub fn mu0(&self, x: f64) -> Result<f64> {
        Ok(self.value(x)? / self.d0)
    }

    /// `μ₀ = μ / d₀` as a probability weight.
    pub fn normalized(self: &Arc<Self>) -> ScaledWeight<Arc<SecondaryMeasure>> {
        ScaledWeight {
            inner: Arc::clone(self),
            factor: 1.0 / self.d0,
            name: format!("mu0[{}]", self.base.label()),
        }
    }
}

impl Weight for SecondaryMeasure {
    fn interval(&self) -> Interval {
        self.base.interval()
    }

    fn value_at(&self, p: Abscissa) -> Result<f64> {
        let rho = self.base.value_at(p)?;
        if rho == 0.0 {
            return Ok(0.0);
        }
        let phi = self.reducer_at(p)?;
        Ok(rho / (0.25 * phi * phi + PI * PI * rho * rho))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }

    fn label(&self) -> String {
        format!("mu[{}]", self.base.label())
    }
}

pub fn secondary_measure(base: Arc<dyn Weight>, spec: &IntegrationSpec) -> Result<Arc<SecondaryMeasure>> {
    Ok(Arc::new(SecondaryMeasure::new(base, spec)?))
}

/// `S_μ(z) = z − c₁ − 1/S_ρ(z)`.
pub fn secondary_transform<W: Weight + ?Sized>(
    rho: &W,
    c1: f64,
    z: ComplexPoint,
    spec: &IntegrationSpec,
) -> Result<Complex64> {
    let s = stieltjes_transform(rho, z, spec)?;
    if s.norm() < 1e-14 {
        return Err(Error::TransformZero { re: z.re, im: z.im });
    }
    Ok(z - c1 - 1.0 / s)
}

/// Default ε ladder `1e-2 · 2^-k`, `k = 0..=8`.
pub fn default_eps_ladder() -> Vec<f64> {
    (0..=8).map(|k| 1e-2 * 0.5f64.powi(k)).collect()
}

/// Outcome of a Stieltjes–Perron inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct PerronEstimate {
    pub value: f64,
    pub imag_residue: f64,
    /// Raw `(S(x − iε) − S(x + iε)) / 2iπ` values along the ladder.
    pub raw: Vec<f64>,
    /// Leading power of ε observed in the raw sequence.
    pub order: u32,
}

/// Recovers the density behind a transform at `x` from
/// `lim (S(x − iε) − S(x + iε)) / 2iπ`, Richardson-extrapolated along a
/// decreasing ε ladder.
pub fn perron_invert<S>(s: S, x: f64, eps_ladder: &[f64]) -> Result<PerronEstimate>
where
    S: Fn(Complex64) -> Result<Complex64>,
{
    if eps_ladder.len() < 3 {
        return Err(Error::InvalidParameter("ε ladder needs at least 3 values".into()));
    }
    if eps_ladder.windows(2).any(|w| !(w[1] < w[0]) || !(w[1] > 0.0)) {
        return Err(Error::InvalidParameter("ε ladder must be positive and decreasing".into()));
    }
    let two_i_pi = Complex64::new(0.0, 2.0 * PI);
    let raw: Vec<Complex64> = eps_ladder
        .iter()
        .map(|&e| Ok((s(Complex64::new(x, -e))? - s(Complex64::new(x, e))?) / two_i_pi))
        .collect::<Result<_>>()?;

    let order = observed_order(&raw, eps_ladder);

    // Tableau: column j removes the ε^(order + j − 1) term.
    let n = raw.len();
    let mut table: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for k in 0..n {
        table[k][0] = raw[k];
        for j in 1..=k {
            let p = (order + j as u32 - 1) as i32;
            let ratio = (eps_ladder[k - j] / eps_ladder[k]).powi(p);
            table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (ratio - 1.0);
        }
    }
    // Pick the diagonal entry that moved least from its predecessor.
    let mut best = (f64::INFINITY, table[n - 1][n - 1]);
    for k in 1..n {
        for j in 1..=k {
            let gap = (table[k][j] - table[k - 1][j - 1]).norm();
            if gap < best.0 {
                best = (gap, table[k][j]);
            }
        }
    }
    let (gap, v) = best;
    if !(gap <= 1e-3 * v.norm().max(1.0)) {
        return Err(Error::ExtrapolationDivergence(format!(
            "smallest successive gap {gap:e} at x = {x}"
        )));
    }
    if v.im.abs() >= 1e-6 {
        return Err(Error::ExtrapolationDivergence(format!(
            "imaginary residue {:e} at x = {x}",
            v.im
        )));
    }
    Ok(PerronEstimate {
        value: v.re,
        imag_residue: v.im.abs(),
        raw: raw.iter().map(|c| c.re).collect(),
        order,
    })
}

fn observed_order(raw: &[Complex64], eps: &[f64]) -> u32 {
    let d1 = (raw[1] - raw[0]).norm();
    let d2 = (raw[2] - raw[1]).norm();
    if d1 == 0.0 || d2 == 0.0 {
        return 1;
    }
    let p = (d1 / d2).ln() / (eps[1] / eps[2]).ln();
    if p.is_finite() {
        p.round().clamp(1.0, 4.0) as u32
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{mass, Density};

    fn spec() -> IntegrationSpec {
        IntegrationSpec::default()
    }

    fn cat(n: &str) -> Arc<dyn Weight> {
        Density::catalog(n).unwrap().into_arc()
    }

    #[test]
    fn transform_closed_forms() {
        let s = stieltjes_transform(cat("cheb-u").as_ref(), Complex64::new(2.0, 0.0), &spec()).unwrap();
        assert!((s.re - 2.0 * (2.0 - 3f64.sqrt())).abs() < 1e-12);
        let s = stieltjes_transform(cat("cheb-t").as_ref(), Complex64::new(2.0, 0.0), &spec()).unwrap();
        assert!((s.re - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn point_on_interval_rejected() {
        let r = stieltjes_transform(cat("uniform").as_ref(), Complex64::new(0.5, 0.0), &spec());
        assert!(matches!(r, Err(Error::PointOnInterval { .. })));
    }

    #[test]
    fn transform_decays_like_one_over_z() {
        for name in crate::measures::CATALOG {
            let rho = cat(name);
            let z = Complex64::new(0.0, 1e6);
            let s = stieltjes_transform(rho.as_ref(), z, &spec()).unwrap();
            assert!((z * s - 1.0).norm() < 1e-5, "{name}");
        }
    }

    #[test]
    fn reducer_closed_forms() {
        let s = spec();
        assert!((reducer(cat("cheb-u").as_ref(), 0.3, &s).unwrap() - 1.2).abs() < 1e-10);
        let u = reducer(cat("uniform").as_ref(), 0.25, &s).unwrap();
        assert!((u - 2.0 * (1.0f64 / 3.0).ln()).abs() < 1e-10);
        let l = reducer(cat("linear2x").as_ref(), 0.5, &s).unwrap();
        assert!((l + 4.0).abs() < 1e-10);
    }

    #[test]
    fn lerch_matches_series() {
        let series = |x: f64| (0..200).map(|n| x.powi(n) / (n as f64 - 0.5)).sum::<f64>();
        for x in [1e-6, 0.1, 0.2, 0.5, 0.8] {
            assert!((lerch_phi_half(x).unwrap() - series(x)).abs() < 1e-10, "{x}");
        }
        assert!((lerch_phi_half(1e-12).unwrap() + 2.0).abs() < 1e-10);
        assert!(lerch_phi_half(1.0).is_err());
        assert!(lerch_phi_half(0.0).is_err());
        let sq = cat("sqrt32");
        for x in [0.2, 0.5, 0.8] {
            let r = reducer(sq.as_ref(), x, &spec()).unwrap();
            assert!((r - 3.0 * lerch_phi_half(x).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn secondary_measure_of_chebyshev_u() {
        let mu = secondary_measure(cat("cheb-u"), &spec()).unwrap();
        assert!((mu.d0() - 0.25).abs() < 1e-12);
        for x in [-0.9, -0.2, 0.0, 0.6] {
            let rho = 2.0 / PI * (1.0 - x * x as f64).sqrt();
            assert!((mu.mu(x).unwrap() - rho / 4.0).abs() < 1e-9);
            assert!((mu.mu0(x).unwrap() - rho).abs() < 1e-8);
        }
        assert!((mass(&mu.normalized(), &spec()).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn secondary_measure_of_uniform() {
        let mu = secondary_measure(cat("uniform"), &spec()).unwrap();
        assert!((mu.d0() - 1.0 / 12.0).abs() < 1e-12);
        for x in [0.1, 0.37, 0.5, 0.93] {
            let l = (x / (1.0 - x) as f64).ln();
            assert!((mu.mu(x).unwrap() - 1.0 / (l * l + PI * PI)).abs() < 1e-9);
        }
    }

    #[test]
    fn secondary_transform_values() {
        let s = spec();
        let rho = cat("cheb-u");
        let v = secondary_transform(rho.as_ref(), 0.0, Complex64::new(2.0, 0.0), &s).unwrap();
        assert!((v.re - (2.0 - 1.0 / (2.0 * (2.0 - 3f64.sqrt())))).abs() < 1e-10);
        let z = Complex64::new(0.0, 3.0);
        let v = secondary_transform(rho.as_ref(), 0.0, z, &s).unwrap();
        let direct = stieltjes_transform(rho.as_ref(), z, &s).unwrap() * 0.25;
        assert!((v - direct).norm() < 1e-8);
    }

    #[test]
    fn perron_recovers_density() {
        let rho = cat("cheb-u");
        let s = spec();
        let est = perron_invert(
            |z| stieltjes_transform(rho.as_ref(), z, &s),
            0.0,
            &default_eps_ladder(),
        )
        .unwrap();
        assert!((est.value - 2.0 / PI).abs() < 1e-6, "{est:?}");
    }

    #[test]
    fn perron_off_an_atom_is_zero() {
        let c = 0.3;
        let est = perron_invert(|z| Ok(1.0 / (z - c)), 0.7, &default_eps_ladder()).unwrap();
        assert!(est.value.abs() < 1e-8, "{est:?}");
    }

    #[test]
    fn perron_rejects_bad_ladder() {
        assert!(perron_invert(Ok, 0.0, &[0.1, 0.2, 0.05]).is_err());
    }
}
