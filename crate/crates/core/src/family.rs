//! The equi-normal family `ρ_t`: densities sharing the normalized secondary
//! measure of `ρ`, with `μ_t = t·μ` and the same first moment `c₁`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::measures::{integrate_against, mass, moments, Weight};
use crate::quadrature::{Abscissa, IntegrationSpec, Interval};
use crate::report::{Provenance, VerificationReport};
use crate::stieltjes::{
    reducer_at, secondary_measure, stieltjes_real, stieltjes_transform, ComplexPoint, ReducerCache,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    /// `0 < t ≤ 1`: always a probability density.
    Proven,
    /// `t > 1` passed the real root scan and the mass check.
    Empirical,
    /// `t > 1` failed one of them.
    Invalid,
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Validity::Proven => "proven",
            Validity::Empirical => "empirical",
            Validity::Invalid => "invalid",
        })
    }
}

/// A family index together with the outcome of the validity policy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyParameter {
    pub t: f64,
    pub validity: Validity,
    /// `f(t) = ∫ ρ_t`, when it was needed to decide.
    pub mass: Option<f64>,
    pub roots: Vec<RootBracket>,
}

pub const MASS_TOLERANCE: f64 = 1e-6;

/// Family density values below this are not resolved further.
const NEGLIGIBLE_DENSITY: f64 = 1e-14;

impl FamilyParameter {
    /// Applies the validity policy: `t ≤ 1` is accepted outright; `t > 1`
    /// needs no real zero of the transform denominator within ten support
    /// lengths of `I` on either side, and `|f(t) − 1| < 1e-6`.
    pub fn classify(rho: &Arc<dyn Weight>, t: f64, spec: &IntegrationSpec) -> Result<Self> {
        check_t(t)?;
        if t <= 1.0 {
            return Ok(Self {
                t,
                validity: Validity::Proven,
                mass: None,
                roots: Vec::new(),
            });
        }
        let fam = FamilyDensity::new(Arc::clone(rho), t, spec)?;
        let iv = rho.interval();
        let (lo, hi) = (1e-3 * iv.len(), 10.0 * iv.len());
        let right = Interval::new(iv.b() + lo, iv.b() + hi)?;
        let left = Interval::new(iv.a() - hi, iv.a() - lo)?;
        let mut roots = fam.denominator_roots(&right, 400, spec)?;
        roots.extend(fam.denominator_roots(&left, 400, spec)?);
        // A mass that cannot be computed counts as a failed check.
        let m = mass(&fam, spec).ok();
        let ok = roots.is_empty() && m.is_some_and(|m| (m - 1.0).abs() < MASS_TOLERANCE);
        Ok(Self {
            t,
            validity: if ok { Validity::Empirical } else { Validity::Invalid },
            mass: m,
            roots,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.validity != Validity::Invalid
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("family parameter t must be > 0, got {t}")))
    }
}

/// `ρ_t(x) = tρ / ([(t−1)(x−c₁)φ/2 − t]² + π²ρ²(t−1)²(x−c₁)²)`.
///
/// Reducer values of the base density are memoised per abscissa, so
/// repeated quadratures over the same nodes pay for them once.
pub struct FamilyDensity {
    base: Arc<dyn Weight>,
    t: f64,
    c1: f64,
    spec: IntegrationSpec,
    cache: ReducerCache,
}

impl FamilyDensity {
    pub fn new(base: Arc<dyn Weight>, t: f64, spec: &IntegrationSpec) -> Result<Self> {
        check_t(t)?;
        let c = moments(base.as_ref(), 1, spec)?;
        let c1 = c[1] / c[0];
        Ok(Self::with_mean(base, t, c1, spec))
    }

    /// Skips the moment computation when `c₁` is already known.
    pub fn with_mean(base: Arc<dyn Weight>, t: f64, c1: f64, spec: &IntegrationSpec) -> Self {
        Self {
            base,
            t,
            c1,
            spec: *spec,
            cache: ReducerCache::default(),
        }
    }

    pub fn base(&self) -> &Arc<dyn Weight> {
        &self.base
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn into_arc(self) -> Arc<dyn Weight> {
        Arc::new(self)
    }

    fn base_reducer(&self, p: Abscissa) -> Result<f64> {
        self.cache
            .get_or_compute(p, || reducer_at(self.base.as_ref(), p, &self.spec))
    }

    /// `S_{ρ_t}(z) = S / (t + (1−t)(z−c₁)S)`.
    pub fn transform(&self, z: ComplexPoint) -> Result<Complex64> {
        let s = stieltjes_transform(self.base.as_ref(), z, &self.spec)?;
        let den = self.t + (1.0 - self.t) * (z - self.c1) * s;
        if den.norm() < 1e-12 * self.t.max(1.0) {
            return Err(Error::DenominatorZero { re: z.re, im: z.im });
        }
        Ok(s / den)
    }

    /// `D(x) = t + (1−t)(x−c₁)S_ρ(x)` for real `x` off the support.
    pub fn denominator(&self, x: f64) -> Result<f64> {
        let s = stieltjes_real(self.base.as_ref(), x, &self.spec)?;
        Ok(self.t + (1.0 - self.t) * (x - self.c1) * s)
    }

    /// Sign changes of `D` on a grid over `search`, each refined by
    /// bisection to width `1e-10`.
    pub fn denominator_roots(
        &self,
        search: &Interval,
        grid_points: usize,
        spec: &IntegrationSpec,
    ) -> Result<Vec<RootBracket>> {
        let iv = self.base.interval();
        let d = |x: f64| -> Result<f64> {
            let s = stieltjes_real(self.base.as_ref(), x, spec)?;
            Ok(self.t + (1.0 - self.t) * (x - self.c1) * s)
        };
        let grid = outside_grid(&iv, search, grid_points.max(2))?;
        let mut out = Vec::new();
        let mut prev = (grid[0], d(grid[0])?);
        for &x in &grid[1..] {
            let cur = (x, d(x)?);
            if prev.1 == 0.0 {
                out.push(RootBracket { lo: prev.0, hi: prev.0 });
            } else if prev.1.signum() != cur.1.signum() && cur.1 != 0.0 {
                out.push(bisect(&d, prev, cur)?);
            }
            prev = cur;
        }
        if prev.1 == 0.0 {
            out.push(RootBracket { lo: prev.0, hi: prev.0 });
        }
        Ok(out)
    }
}

impl Weight for FamilyDensity {
    fn interval(&self) -> Interval {
        self.base.interval()
    }

    fn value_at(&self, p: Abscissa) -> Result<f64> {
        let rho = self.base.value_at(p)?;
        if self.t == 1.0 || rho == 0.0 {
            return Ok(rho);
        }
        let k = (self.t - 1.0) * (p.x - self.c1);
        if rho.is_infinite() && k != 0.0 {
            return Ok(0.0);
        }
        let pr = PI * rho * k;
        // ρ_t ≤ t·ρ/pr²: next to a singular endpoint this bound is below
        // rounding and the reducer, whose quadrature overflows there, is
        // not needed.
        if self.t * rho / (pr * pr) < NEGLIGIBLE_DENSITY {
            return Ok(self.t * rho / (self.t * self.t + pr * pr));
        }
        let phi = self.base_reducer(p)?;
        let bracket = 0.5 * k * phi - self.t;
        Ok(self.t * rho / (bracket * bracket + pr * pr))
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.base.breakpoints();
        if self.interval().contains_open(self.c1) {
            b.push(self.c1);
        }
        b
    }

    fn label(&self) -> String {
        format!("{}_t={}", self.base.label(), self.t)
    }
}

/// A bracket `[lo, hi]` containing a sign change of the denominator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
}

impl RootBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

fn bisect<F>(f: &F, mut lo: (f64, f64), mut hi: (f64, f64)) -> Result<RootBracket>
where
    F: Fn(f64) -> Result<f64>,
{
    while (hi.0 - lo.0).abs() > 1e-10 {
        let m = 0.5 * (lo.0 + hi.0);
        if m == lo.0 || m == hi.0 {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(RootBracket { lo: m, hi: m });
        }
        if fm.signum() == lo.1.signum() {
            lo = (m, fm);
        } else {
            hi = (m, fm);
        }
    }
    let (a, b) = if lo.0 <= hi.0 { (lo.0, hi.0) } else { (hi.0, lo.0) };
    Ok(RootBracket { lo: a, hi: b })
}

/// Grid over `search`, geometric in the distance to `iv` so that the region
/// next to the support, where `S_ρ` varies fastest, is resolved.
fn outside_grid(iv: &Interval, search: &Interval, n: usize) -> Result<Vec<f64>> {
    let (s, e) = (search.a(), search.b());
    let (near, far, sign, anchor) = if s >= iv.b() {
        (s - iv.b(), e - iv.b(), 1.0, iv.b())
    } else if e <= iv.a() {
        (iv.a() - e, iv.a() - s, -1.0, iv.a())
    } else {
        return Err(Error::InvalidParameter(format!(
            "search interval [{s}, {e}] meets the support [{}, {}]",
            iv.a(),
            iv.b()
        )));
    };
    let last = (n - 1) as f64;
    let mut g: Vec<f64> = if near > 0.0 {
        let r = far / near;
        (0..n).map(|i| anchor + sign * near * r.powf(i as f64 / last)).collect()
    } else {
        (0..n).map(|i| anchor + sign * far * i as f64 / last).collect()
    };
    // Pin the ends exactly and keep increasing order.
    g[0] = anchor + sign * near;
    g[n - 1] = anchor + sign * far;
    if sign < 0.0 {
        g.reverse();
    }
    Ok(g)
}

/// `ρ_t(x)` for a single point.
pub fn family_density(rho: &Arc<dyn Weight>, t: f64, x: f64, spec: &IntegrationSpec) -> Result<f64> {
    let iv = rho.interval();
    if !iv.contains_open(x) {
        return Err(Error::PoleOutsideInterval { pole: x, a: iv.a(), b: iv.b() });
    }
    FamilyDensity::new(Arc::clone(rho), t, spec)?.value(x)
}

pub fn family_transform(
    rho: &Arc<dyn Weight>,
    t: f64,
    z: ComplexPoint,
    spec: &IntegrationSpec,
) -> Result<Complex64> {
    FamilyDensity::new(Arc::clone(rho), t, spec)?.transform(z)
}

/// `f(t) = ∫ ρ_t`.
pub fn moment0_curve(rho: &Arc<dyn Weight>, t: f64, spec: &IntegrationSpec) -> Result<f64> {
    let fam = FamilyDensity::new(Arc::clone(rho), t, spec)?;
    mass(&fam, spec)
}

pub fn denominator_root_scan(
    rho: &Arc<dyn Weight>,
    t: f64,
    search: &Interval,
    grid_points: usize,
    spec: &IntegrationSpec,
) -> Result<Vec<RootBracket>> {
    FamilyDensity::new(Arc::clone(rho), t, spec)?.denominator_roots(search, grid_points, spec)
}

/// Checks that `ρ_t` is equi-normal with `ρ`: its secondary measure is
/// `t·μ` on a 30-point grid (within 1e-4) and its variance is `t·d₀`
/// (within 1e-6). Failures are reported, not returned as errors.
pub fn equi_normality_check(
    rho: &Arc<dyn Weight>,
    t: f64,
    spec: &IntegrationSpec,
) -> Vec<VerificationReport> {
    let start = Instant::now();
    let id = format!("equi-normal/{}/t={t}", rho.label());
    let run = || -> Result<(f64, f64, String)> {
        let mu = secondary_measure(Arc::clone(rho), spec)?;
        let fam: Arc<dyn Weight> = FamilyDensity::with_mean(Arc::clone(rho), t, mu.c1(), spec).into_arc();
        let mu_t = secondary_measure(Arc::clone(&fam), spec)?;
        let mut worst: f64 = 0.0;
        for x in rho.interval().interior_grid(30) {
            let dev = (mu_t.mu(x)? - t * mu.mu(x)?).abs();
            worst = worst.max(dev);
        }
        let var_dev = (mu_t.d0() - t * mu.d0()).abs();
        let detail = format!(
            "c1'={:.10} c2'-c1'^2={:.10} t*d0={:.10}",
            mu_t.c1(),
            mu_t.d0(),
            t * mu.d0()
        );
        Ok((worst, var_dev, detail))
    };
    match run() {
        Ok((pointwise, variance, detail)) => vec![
            VerificationReport::property(format!("{id}/mu"), pointwise, 1e-4, Provenance::Paper)
                .with_runtime(start),
            VerificationReport::property(format!("{id}/variance"), variance, 1e-6, Provenance::Paper)
                .with_detail(detail)
                .with_runtime(start),
        ],
        Err(e) => vec![VerificationReport::failed(id, Provenance::Paper, e).with_runtime(start)],
    }
}

pub fn default_t_ladder() -> Vec<f64> {
    vec![0.2, 0.1, 0.05, 0.02]
}

/// One rung of the `t → 0` ladder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub t: f64,
    pub value: f64,
    pub gap: f64,
}

/// Convergence of `ρ_t` to the point mass at `c₁` as `t → 0`.
///
/// The first report checks that `|∫ g ρ_t − g(c₁)|` is non-increasing
/// along the ladder and ends below 5e-2; the second that the reducer of
/// `ρ_t` approaches `2/(x − c₁)` at two fixed points.
pub fn dirac_limit_check(
    rho: &Arc<dyn Weight>,
    g: &dyn RealFunction,
    t_ladder: &[f64],
    spec: &IntegrationSpec,
) -> Vec<VerificationReport> {
    let start = Instant::now();
    let id = format!("dirac-limit/{}", rho.label());
    let table = match dirac_table(rho, g, t_ladder, spec) {
        Ok(t) => t,
        Err(e) => return vec![VerificationReport::failed(id, Provenance::Paper, e).with_runtime(start)],
    };
    // Gaps at rounding level count as zero when judging monotonicity.
    let slack = 1e-8;
    let monotone = table.windows(2).all(|w| w[1].gap <= w[0].gap + slack);
    let final_gap = table.last().map_or(f64::INFINITY, |r| r.gap);
    let rows: Vec<String> = table
        .iter()
        .map(|r| format!("t={} value={:.8} gap={:.3e}", r.t, r.value, r.gap))
        .collect();
    let mut values = VerificationReport::property(format!("{id}/values"), final_gap, 5e-2, Provenance::Paper)
        .with_detail(format!("{}{}", rows.join("; "), if monotone { "" } else { "; NOT MONOTONE" }))
        .with_runtime(start);
    values.pass &= monotone;

    let start = Instant::now();
    let trend = match reducer_trend(rho, t_ladder, spec) {
        Ok(t) => t,
        Err(e) => {
            return vec![
                values,
                VerificationReport::failed(format!("{id}/reducer"), Provenance::Paper, e).with_runtime(start),
            ]
        }
    };
    // Count rungs where the distance to the point-mass reducer grows.
    let mut increases = 0usize;
    let mut detail = Vec::new();
    for (x, gaps) in &trend {
        increases += gaps.windows(2).filter(|w| w[1] > w[0] + slack).count();
        detail.push(format!(
            "x={x:.4}: {}",
            gaps.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>().join(" ")
        ));
    }
    let reducer = VerificationReport::property(format!("{id}/reducer"), increases as f64, 0.0, Provenance::Paper)
        .with_detail(format!("|phi_t - 2/(x-c1)| {}", detail.join("; ")))
        .with_runtime(start);
    vec![values, reducer]
}

/// `(t, ∫ g ρ_t, |∫ g ρ_t − g(c₁)|)` along the ladder.
pub fn dirac_table(
    rho: &Arc<dyn Weight>,
    g: &dyn RealFunction,
    t_ladder: &[f64],
    spec: &IntegrationSpec,
) -> Result<Vec<LimitRow>> {
    let c = moments(rho.as_ref(), 1, spec)?;
    let c1 = c[1] / c[0];
    let target = g.eval(c1)?;
    t_ladder
        .iter()
        .map(|&t| {
            check_t(t)?;
            let fam = FamilyDensity::with_mean(Arc::clone(rho), t, c1, spec);
            let value = integrate_against(&fam, &[], spec, |p| g.eval(p.x))?.value;
            Ok(LimitRow { t, value, gap: (value - target).abs() })
        })
        .collect()
}

fn reducer_trend(
    rho: &Arc<dyn Weight>,
    t_ladder: &[f64],
    spec: &IntegrationSpec,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let c = moments(rho.as_ref(), 1, spec)?;
    let c1 = c[1] / c[0];
    let iv = rho.interval();
    let mut points = Vec::new();
    for frac in [0.25, 0.75] {
        let mut x = iv.a() + frac * iv.len();
        if (x - c1).abs() < 0.05 * iv.len() {
            x = iv.a() + (if frac < 0.5 { 0.1 } else { 0.9 }) * iv.len();
        }
        points.push(x);
    }
    let fams: Vec<FamilyDensity> = t_ladder
        .iter()
        .map(|&t| FamilyDensity::with_mean(Arc::clone(rho), t, c1, spec))
        .collect();
    points
        .into_iter()
        .map(|x| {
            let p = iv.abscissa(x);
            let gaps = fams
                .iter()
                .map(|f| Ok((reducer_at(f, p, spec)? - 2.0 / (x - c1)).abs()))
                .collect::<Result<Vec<_>>>()?;
            Ok((x, gaps))
        })
        .collect()
}
