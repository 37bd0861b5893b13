//! Quadrature on a compact interval.
//!
//! Two engines live here:
//!
//! * adaptive Gauss–Kronrod (7/15 points) with bisection, used for smooth
//!   integrands through [`integrate`];
//! * tanh-sinh (double exponential), used whenever the integrand carries an
//!   algebraic endpoint singularity or is only known through a density.
//!
//! The tanh-sinh nodes are handed to integrands as an [`Abscissa`], which
//! carries the distance to both endpoints of the support interval computed
//! without cancellation. Densities such as `1/(π√(1−x²))` read those
//! distances instead of `1 − x`, which would round to zero long before the
//! double-exponential weights become negligible.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::RealFunction;

/// Compact interval `[a, b]` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains_open(&self, x: f64) -> bool {
        self.a < x && x < self.b
    }

    pub fn contains_closed(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// Distance from a complex point to the closed interval.
    pub fn distance(&self, z: Complex64) -> f64 {
        let dx = if z.re < self.a {
            self.a - z.re
        } else if z.re > self.b {
            z.re - self.b
        } else {
            0.0
        };
        dx.hypot(z.im)
    }

    pub fn abscissa(&self, x: f64) -> Abscissa {
        Abscissa {
            x,
            from_a: x - self.a,
            to_b: self.b - x,
        }
    }

    pub fn left(&self) -> Abscissa {
        Abscissa {
            x: self.a,
            from_a: 0.0,
            to_b: self.len(),
        }
    }

    pub fn right(&self) -> Abscissa {
        Abscissa {
            x: self.b,
            from_a: self.len(),
            to_b: 0.0,
        }
    }

    /// `n` equally spaced points strictly inside the interval.
    pub fn interior_grid(&self, n: usize) -> Vec<f64> {
        let h = self.len() / (n + 1) as f64;
        (1..=n).map(|i| self.a + h * i as f64).collect()
    }

    /// `n` equally spaced points of `[a + δ, b − δ]`, `δ = margin·(b − a)`.
    pub fn guarded_grid(&self, n: usize, margin: f64) -> Vec<f64> {
        let d = margin * self.len();
        let lo = self.a + d;
        let hi = self.b - d;
        if n == 1 {
            return vec![0.5 * (lo + hi)];
        }
        let h = (hi - lo) / (n - 1) as f64;
        (0..n).map(|i| lo + h * i as f64).collect()
    }
}

/// A point of the support interval together with its distances to both
/// endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_a: f64,
    pub to_b: f64,
}

impl Abscissa {
    fn between(lo: Abscissa, hi: Abscissa, s: f64, r: f64) -> Abscissa {
        Abscissa {
            x: if s <= r { lo.x + s } else { hi.x - r },
            from_a: lo.from_a + s,
            to_b: hi.to_b + r,
        }
    }

    fn span(lo: Abscissa, hi: Abscissa) -> f64 {
        if hi.from_a <= lo.to_b {
            hi.from_a - lo.from_a
        } else {
            lo.to_b - hi.to_b
        }
    }

    pub(crate) fn key(&self) -> (u64, u64) {
        (self.from_a.to_bits(), self.to_b.to_bits())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinement_levels: u32,
}

impl Default for IntegrationSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_refinement_levels: 12,
        }
    }
}

impl IntegrationSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_refinement_levels: u32) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_refinement_levels,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidSpec(format!("rel_tol = {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidSpec(format!("abs_tol = {}", self.abs_tol)));
        }
        if self.max_refinement_levels < 1 || self.max_refinement_levels > MAX_LEVEL {
            return Err(Error::InvalidSpec(format!(
                "max_refinement_levels = {} (allowed 1..={MAX_LEVEL})",
                self.max_refinement_levels
            )));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Endpoint exponents of a weight `(x − a)^alpha (b − x)^beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointExponents {
    alpha: f64,
    beta: f64,
}

impl EndpointExponents {
    pub const SMOOTH: Self = Self {
        alpha: 0.0,
        beta: 0.0,
    };

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha > -1.0 && beta > -1.0 && alpha.is_finite() && beta.is_finite() {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidExponents { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(x − a)^alpha (b − x)^beta` from accurate endpoint distances.
    pub fn factor(&self, p: Abscissa) -> f64 {
        let mut v = 1.0;
        if self.alpha != 0.0 {
            v *= p.from_a.powf(self.alpha);
        }
        if self.beta != 0.0 {
            v *= p.to_b.powf(self.beta);
        }
        v
    }
}

/// Values a quadrature rule can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An integral value with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<V = f64> {
    pub value: V,
    pub error: f64,
}

impl<V: QuadValue> Estimate<V> {
    pub fn exact(value: V) -> Self {
        Self { value, error: 0.0 }
    }

    pub(crate) fn plus(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
        }
    }
}

// ---------------------------------------------------------------------------
// tanh-sinh

const MAX_LEVEL: u32 = 20;
const MIN_LEVEL: u32 = 3;
const T_MAX: f64 = 6.0;
const TAIL_NEGLIGIBLE: f64 = 1e-18;

#[derive(Clone, Copy)]
struct DeNode {
    t: f64,
    /// `1 − tanh(π/2 · sinh t)`
    complement: f64,
    weight: f64,
}

fn de_node(t: f64) -> DeNode {
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u).exp();
    let complement = 2.0 * e / (1.0 + e);
    let weight = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    DeNode {
        t,
        complement,
        weight,
    }
}

/// Nodes with `t > 0` that are new at a given level (all integers at level 0,
/// odd multiples of `2^-level` afterwards).
fn level_nodes(level: u32) -> &'static [DeNode] {
    static TABLES: [OnceLock<Vec<DeNode>>; (MAX_LEVEL + 1) as usize] =
        [const { OnceLock::new() }; (MAX_LEVEL + 1) as usize];
    TABLES[level as usize].get_or_init(|| {
        let h = 0.5f64.powi(level as i32);
        let (start, step) = if level == 0 { (1u64, 1u64) } else { (1, 2) };
        let mut out = Vec::new();
        let mut j = start;
        loop {
            let t = j as f64 * h;
            if t > T_MAX {
                break;
            }
            out.push(de_node(t));
            j += step;
        }
        out
    })
}

/// Integrate over `[0, len]`; the integrand receives each node as its
/// offsets `(s, r)` from the left and right ends, `s + r = len`.
pub(crate) fn tanh_sinh_core<V, F>(len: f64, spec: &IntegrationSpec, mut f: F) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64, f64) -> Result<V>,
{
    if !(len > 0.0) {
        return Ok(Estimate::exact(V::zero()));
    }
    let half = 0.5 * len;
    let centre = de_node(0.0);
    let f0 = f(half, half)?;
    let mut sum = f0 * centre.weight;
    let mut abs_sum = f0.magnitude() * centre.weight;

    // Level 0 also fixes how far out each tail is worth evaluating.
    let mut cut_right = T_MAX;
    let mut cut_left = T_MAX;
    for (side, cut) in [(1.0, &mut cut_right), (-1.0, &mut cut_left)] {
        let mut quiet = 0;
        for node in level_nodes(0) {
            let near = half * node.complement;
            let (s, r) = if side > 0.0 { (len - near, near) } else { (near, len - near) };
            let term = f(s, r)? * node.weight;
            sum = sum + term;
            abs_sum += term.magnitude();
            if term.magnitude() <= TAIL_NEGLIGIBLE * abs_sum {
                quiet += 1;
                if quiet == 2 {
                    *cut = node.t;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
    }

    let mut h = 1.0;
    let mut prev = sum * (h * half);
    let mut prev_delta = f64::NAN;
    let mut last_error = f64::INFINITY;
    for level in 1..=spec.max_refinement_levels {
        h *= 0.5;
        for node in level_nodes(level) {
            let near = half * node.complement;
            if node.t <= cut_right {
                let term = f(len - near, near)? * node.weight;
                sum = sum + term;
                abs_sum += term.magnitude();
            }
            if node.t <= cut_left {
                let term = f(near, len - near)? * node.weight;
                sum = sum + term;
                abs_sum += term.magnitude();
            }
        }
        let current = sum * (h * half);
        let delta = (current - prev).magnitude();
        let error = if prev_delta.is_nan() || prev_delta == 0.0 {
            delta
        } else {
            delta * (2.0 * delta / prev_delta).min(1.0)
        };
        let floor = 64.0 * f64::EPSILON * abs_sum * h * half;
        let tol = spec.tolerance(current.magnitude()).max(floor);
        if level >= MIN_LEVEL.min(spec.max_refinement_levels) && error <= tol {
            return Ok(Estimate {
                value: current,
                error: error.max(floor),
            });
        }
        prev_delta = delta;
        prev = current;
        last_error = error;
    }
    Err(Error::NonConvergence {
        estimate: prev.magnitude(),
        error: last_error,
    })
}

/// Integrate between two abscissas of a common support interval.
pub fn tanh_sinh_between<V, F>(
    lo: Abscissa,
    hi: Abscissa,
    spec: &IntegrationSpec,
    mut f: F,
) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(Abscissa) -> Result<V>,
{
    let len = Abscissa::span(lo, hi);
    tanh_sinh_core(len, spec, |s, r| f(Abscissa::between(lo, hi, s, r)))
}

/// Integrate over `interval`, splitting at the given interior points.
pub fn tanh_sinh_split<V, F>(
    interval: &Interval,
    breaks: &[f64],
    spec: &IntegrationSpec,
    mut f: F,
) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(Abscissa) -> Result<V>,
{
    let mut cuts: Vec<Abscissa> = vec![interval.left()];
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| interval.contains_open(x))
        .collect();
    inner.sort_by(|p, q| p.partial_cmp(q).unwrap());
    inner.dedup();
    cuts.extend(inner.into_iter().map(|x| interval.abscissa(x)));
    cuts.push(interval.right());
    let mut total = Estimate::exact(V::zero());
    for w in cuts.windows(2) {
        total = total.plus(tanh_sinh_between(w[0], w[1], spec, &mut f)?);
    }
    Ok(total)
}

/// All tanh-sinh nodes of step `2^-level` between two abscissas, paired
/// with their quadrature weights. Used to discretize a weight.
pub(crate) fn tanh_sinh_nodes(lo: Abscissa, hi: Abscissa, level: u32) -> Vec<(Abscissa, f64)> {
    let len = Abscissa::span(lo, hi);
    let half = 0.5 * len;
    let h = 0.5f64.powi(level as i32);
    let mut out = Vec::new();
    let centre = de_node(0.0);
    out.push((Abscissa::between(lo, hi, half, half), h * half * centre.weight));
    for l in 0..=level {
        for node in level_nodes(l) {
            let near = half * node.complement;
            let w = h * half * node.weight;
            out.push((Abscissa::between(lo, hi, len - near, near), w));
            out.push((Abscissa::between(lo, hi, near, len - near), w));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64, depth: u32) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let d = h * GK_NODES[i];
        let pair = f(c - d)? + f(c + d)?;
        kronrod += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
        depth,
    })
}

fn gauss_kronrod<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    interval: &Interval,
    spec: &IntegrationSpec,
) -> Result<Estimate> {
    const MAX_SEGMENTS: usize = 2000;
    let mut segments = vec![gk15(f, interval.a(), interval.b(), 0)?];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= spec.tolerance(value) {
            return Ok(Estimate { value, error });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .unwrap();
        if segments[worst].depth >= 4 * spec.max_refinement_levels
            || segments.len() >= MAX_SEGMENTS
        {
            return Err(Error::NonConvergence {
                estimate: value,
                error,
            });
        }
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(gk15(f, s.a, mid, s.depth + 1)?);
        segments.push(gk15(f, mid, s.b, s.depth + 1)?);
    }
}

// ---------------------------------------------------------------------------
// public operations

/// `∫_a^b f(x) dx` for integrands that are bounded on the open interval.
///
/// Adaptive Gauss–Kronrod runs first. If it exhausts its bisection budget
/// (typically an integrable endpoint singularity) the integral is redone
/// with tanh-sinh, whose nodes never touch the endpoints.
pub fn integrate(f: &dyn RealFunction, interval: &Interval, spec: &IntegrationSpec) -> Result<Estimate> {
    spec.validate()?;
    let mut eval = |x: f64| f.eval(x);
    match gauss_kronrod(&mut eval, interval, spec) {
        Err(Error::NonConvergence { .. }) => {
            tanh_sinh_split(interval, &[], spec, |p| f.eval(p.x))
        }
        other => other,
    }
}

/// `∫_a^b (x − a)^alpha (b − x)^beta h(x) dx` for smooth `h`.
pub fn integrate_singular(
    h: &dyn RealFunction,
    exps: EndpointExponents,
    interval: &Interval,
    spec: &IntegrationSpec,
) -> Result<Estimate> {
    spec.validate()?;
    tanh_sinh_split(interval, &[], spec, |p| Ok(exps.factor(p) * h.eval(p.x)?))
}

/// Cauchy principal value `PV ∫_a^b w(u) / (pole − u) du`.
pub fn principal_value(
    w: &dyn RealFunction,
    pole: f64,
    interval: &Interval,
    spec: &IntegrationSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !interval.contains_open(pole) {
        return Err(Error::PoleOutsideInterval {
            pole,
            a: interval.a(),
            b: interval.b(),
        });
    }
    principal_value_at(|p| w.eval(p.x), interval, interval.abscissa(pole), &[], spec)
}

/// Principal value by singularity subtraction:
/// `∫ (w(u) − w(x)) / (x − u) du + w(x) ln((x − a)/(b − x))`.
///
/// The integral is split at the pole, so both halves see it as an endpoint
/// where tanh-sinh clusters its nodes, and at any interior `breaks`.
pub(crate) fn principal_value_at<F>(
    mut w: F,
    interval: &Interval,
    pole: Abscissa,
    breaks: &[f64],
    spec: &IntegrationSpec,
) -> Result<Estimate>
where
    F: FnMut(Abscissa) -> Result<f64>,
{
    // A density is typically only smooth on the scale of the distance to the
    // nearest endpoint, so the 0/0 guard shrinks with it.
    let scale = interval.len().min(pole.from_a).min(pole.to_b);
    let wx = w(pole)?;
    let tiny = 1e-8 * scale;

    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| interval.contains_open(b) && b != pole.x)
        .collect();
    inner.sort_by(|p, q| p.partial_cmp(q).unwrap());
    inner.dedup();
    let left_cuts: Vec<Abscissa> = std::iter::once(interval.left())
        .chain(inner.iter().filter(|&&b| b < pole.x).map(|&b| interval.abscissa(b)))
        .collect();
    let right_cuts: Vec<Abscissa> = inner
        .iter()
        .filter(|&&b| b > pole.x)
        .map(|&b| interval.abscissa(b))
        .chain(std::iter::once(interval.right()))
        .collect();

    let mut total = Estimate::exact(wx * (pole.from_a / pole.to_b).ln());

    // Pieces away from the pole.
    for pair in left_cuts.windows(2) {
        total = total.plus(tanh_sinh_between(pair[0], pair[1], spec, |u| {
            Ok((w(u)? - wx) / (pole.from_a - u.from_a))
        })?);
    }
    for pair in right_cuts.windows(2) {
        total = total.plus(tanh_sinh_between(pair[0], pair[1], spec, |u| {
            Ok((w(u)? - wx) / (pole.from_a - u.from_a))
        })?);
    }

    // Piece ending at the pole: x − u = r.
    let lo = *left_cuts.last().unwrap();
    let room_left = pole.from_a;
    total = total.plus(tanh_sinh_core(Abscissa::span(lo, pole), spec, |s, r| {
        if r >= tiny {
            let wu = w(Abscissa::between(lo, pole, s, r))?;
            Ok((wu - wx) / r)
        } else {
            let step = (1e-6 * scale).min(0.5 * room_left);
            let wl = w(Abscissa {
                x: pole.x - step,
                from_a: pole.from_a - step,
                to_b: pole.to_b + step,
            })?;
            Ok((wl - wx) / step)
        }
    })?);

    // Piece starting at the pole: x − u = −s.
    let hi = right_cuts[0];
    let room_right = pole.to_b;
    total = total.plus(tanh_sinh_core(Abscissa::span(pole, hi), spec, |s, r| {
        if s >= tiny {
            let wu = w(Abscissa::between(pole, hi, s, r))?;
            Ok(-(wu - wx) / s)
        } else {
            let step = (1e-6 * scale).min(0.5 * room_right);
            let wr = w(Abscissa {
                x: pole.x + step,
                from_a: pole.from_a + step,
                to_b: pole.to_b - step,
            })?;
            Ok(-(wr - wx) / step)
        }
    })?);

    Ok(total)
}
