//! Deterministic numerical kernels: adaptive Simpson quadrature, monotone
//! root finding and greedy metric covering.
//!
//! Integrals over long ranges are never handed to a single Simpson panel.
//! [`integrate_region`] first cuts the range at unit cells, at the jump and
//! feature points carried by [`Landmarks`], and at the feature scale, then
//! runs the adaptive rule on every panel with a share of the global
//! tolerance. Panels touching an integrable singularity are integrated after
//! the substitution `x = a + (b - a) u^16`, which turns `|x - a|^β` with
//! `β > -15/16` into a bounded integrand.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// A bounded interval `[lo, hi)`.
///
/// The half-open convention matters only for cell bookkeeping; integrals do
/// not see endpoints. A degenerate interval (`lo == hi`) can be built with
/// [`Interval::point`] and describes a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidInterval { lo: x, hi: x });
        }
        Ok(Self { lo: x, hi: x })
    }

    /// Symmetric interval `[-radius, radius)`.
    pub fn symmetric(radius: f64) -> Result<Self> {
        Self::new(-radius, radius)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.is_degenerate() {
            x == self.lo
        } else {
            x >= self.lo && x < self.hi
        }
    }

    /// Overlap with positive length, if any.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn expand(&self, by: f64) -> Interval {
        Interval {
            lo: self.lo - by,
            hi: self.hi + by,
        }
    }

    pub fn shift(&self, t: f64) -> Interval {
        Interval {
            lo: self.lo + t,
            hi: self.hi + t,
        }
    }
}

/// A finite union of disjoint intervals, kept sorted.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Region {
    pieces: Vec<Interval>,
}

impl Region {
    pub fn empty() -> Self {
        Self { pieces: Vec::new() }
    }

    pub fn from_pieces(mut pieces: Vec<Interval>) -> Self {
        pieces.retain(|p| !p.is_degenerate());
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => last.hi = last.hi.max(p.hi),
                _ => merged.push(p),
            }
        }
        Self { pieces: merged }
    }

    /// `{x ∈ within : |x| > gamma}`.
    pub fn outside(gamma: f64, within: Interval) -> Self {
        let mut pieces = Vec::new();
        if within.lo < -gamma {
            pieces.push(Interval {
                lo: within.lo,
                hi: within.hi.min(-gamma),
            });
        }
        if within.hi > gamma {
            pieces.push(Interval {
                lo: within.lo.max(gamma),
                hi: within.hi,
            });
        }
        Self::from_pieces(pieces)
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn intersect_interval(&self, iv: &Interval) -> Region {
        Region {
            pieces: self.pieces.iter().filter_map(|p| p.intersect(iv)).collect(),
        }
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                if let Some(c) = a.intersect(b) {
                    pieces.push(c);
                }
            }
        }
        Region::from_pieces(pieces)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(Interval::length).sum()
    }
}

impl From<Interval> for Region {
    fn from(iv: Interval) -> Self {
        Region::from_pieces(alloc::vec![iv])
    }
}

/// Structural hints that steer panel placement: jump or kink locations,
/// integrable singularities and the smallest feature length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Landmarks {
    pub breaks: Vec<f64>,
    pub singular: Vec<f64>,
    pub scale: Option<f64>,
}

impl Landmarks {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with_breaks(breaks: Vec<f64>) -> Self {
        Self {
            breaks,
            ..Self::default()
        }
    }

    pub fn scale_or(&self, default: f64) -> f64 {
        self.scale.map_or(default, |s| s.min(default))
    }

    pub fn merge(&self, other: &Landmarks) -> Landmarks {
        let mut breaks = self.breaks.clone();
        breaks.extend_from_slice(&other.breaks);
        let mut singular = self.singular.clone();
        singular.extend_from_slice(&other.singular);
        let scale = match (self.scale, other.scale) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = Landmarks {
            breaks,
            singular,
            scale,
        };
        out.normalize();
        out
    }

    /// Landmarks of `x ↦ f(x - t)`.
    pub fn shifted(&self, t: f64) -> Landmarks {
        Landmarks {
            breaks: self.breaks.iter().map(|b| b + t).collect(),
            singular: self.singular.iter().map(|b| b + t).collect(),
            scale: self.scale,
        }
    }

    /// Landmarks of `x ↦ f(x / s)` for `s > 0`.
    pub fn dilated(&self, s: f64) -> Landmarks {
        Landmarks {
            breaks: self.breaks.iter().map(|b| b * s).collect(),
            singular: self.singular.iter().map(|b| b * s).collect(),
            scale: self.scale.map(|c| c * s),
        }
    }

    /// Every break and singular point as a break; used when the values at
    /// the singular points are not themselves singular.
    pub fn flattened(&self) -> Landmarks {
        let mut breaks = self.breaks.clone();
        breaks.extend_from_slice(&self.singular);
        let mut out = Landmarks {
            breaks,
            singular: Vec::new(),
            scale: self.scale,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        sort_dedup(&mut self.breaks);
        sort_dedup(&mut self.singular);
    }
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.retain(|x| x.is_finite());
    v.sort_by(f64::total_cmp);
    v.dedup();
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_depth: 40,
        }
    }
}

impl QuadratureSettings {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: u32) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) || max_depth < 1 {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive",
            ));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_depth,
        })
    }
}

const MIN_DEPTH: u32 = 2;
/// `x - a = len·u^k` turns `|x - a|^β` into `u^{k(1+β)-1}`; with `k = 32`
/// that is at least `C²` for `β ≥ -0.9`.
const SINGULAR_POWER: i32 = 32;
const MAX_SUBPANELS: usize = 4096;

/// A few ulps, enough to stay on the inner side of a jump after the
/// rounding introduced by a translation or dilation.
#[inline]
fn edge_nudge(x: f64, len: f64) -> f64 {
    (8.0 * f64::EPSILON * math::abs(x).max(1.0))
        .max(f64::MIN_POSITIVE)
        .min(0.25 * len)
}

/// Adaptive Simpson quadrature of `f` over one interval.
///
/// Subdivision is left-first and depends only on the sampled values, so the
/// result is reproducible bit for bit. Returns `I` with
/// `|I - ∫f| ≲ max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, iv: Interval, s: &QuadratureSettings) -> Result<f64> {
    let panel = Panel {
        lo: iv.lo,
        hi: iv.hi,
        kind: PanelKind::Regular,
    };
    integrate_panels(&|x| f(x), &[panel], s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum PanelKind {
    Regular,
    SingularLo,
    SingularHi,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Panel {
    pub lo: f64,
    pub hi: f64,
    pub kind: PanelKind,
}

impl Panel {
    /// Maps `u ∈ [0,1]` to `(x, dx/du)`.
    #[inline]
    fn map(&self, u: f64) -> (f64, f64) {
        let len = self.hi - self.lo;
        match self.kind {
            PanelKind::Regular => (self.lo + len * u, len),
            PanelKind::SingularLo => {
                let t = math::powi(u, SINGULAR_POWER - 1);
                (self.lo + len * t * u, f64::from(SINGULAR_POWER) * len * t)
            }
            PanelKind::SingularHi => {
                let v = 1.0 - u;
                let t = math::powi(v, SINGULAR_POWER - 1);
                (self.hi - len * t * v, f64::from(SINGULAR_POWER) * len * t)
            }
        }
    }

    /// Samples at `u`; panel ends are read as one-sided limits from the
    /// inside, since panels are cut exactly at jumps.
    #[inline]
    fn sample<F: Fn(f64) -> f64>(&self, f: &F, u: f64) -> Result<f64> {
        let (mut x, jac) = self.map(u);
        if u == 0.0 && self.kind != PanelKind::SingularLo {
            x += edge_nudge(x, self.hi - self.lo);
        } else if u == 1.0 && self.kind != PanelKind::SingularHi {
            x -= edge_nudge(x, self.hi - self.lo);
        }
        if jac == 0.0 {
            return Ok(0.0);
        }
        let singular_end = match self.kind {
            PanelKind::SingularLo => Some(self.lo),
            PanelKind::SingularHi => Some(self.hi),
            PanelKind::Regular => None,
        };
        if singular_end == Some(x) {
            return Ok(0.0);
        }
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { x });
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        let out = v * jac;
        if !out.is_finite() {
            return Err(Error::NonFiniteSample { x });
        }
        Ok(out)
    }
}

/// Splits every piece of `region` into quadrature panels at unit cells,
/// landmarks and the feature scale.
pub(crate) fn plan_panels(region: &Region, marks: &Landmarks) -> Vec<Panel> {
    let scale = marks.scale_or(1.0).max(1e-9);
    let mut panels = Vec::new();
    for piece in region.pieces() {
        let (lo, hi) = (piece.lo, piece.hi);
        let mut edges: Vec<f64> = Vec::new();
        edges.push(lo);
        edges.push(hi);
        edges.extend(marks.breaks.iter().copied().filter(|b| *b > lo && *b < hi));
        edges.extend(
            marks
                .singular
                .iter()
                .copied()
                .filter(|b| *b > lo && *b < hi),
        );
        let first = math::floor(lo) + 1.0;
        let mut k = first;
        while k < hi {
            edges.push(k);
            k += 1.0;
        }
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        // Drop slivers that would only cost evaluations.
        let min_gap = 1e-13 * (hi - lo).max(1.0);
        let mut cleaned: Vec<f64> = Vec::with_capacity(edges.len());
        for e in edges {
            match cleaned.last() {
                Some(&last) if e - last < min_gap => {}
                _ => cleaned.push(e),
            }
        }
        if cleaned.last() != Some(&hi) {
            let n = cleaned.len();
            if n >= 2 {
                cleaned[n - 1] = hi;
            } else {
                cleaned.push(hi);
            }
        }
        let is_singular = |x: f64| {
            marks
                .singular
                .iter()
                .any(|s| math::abs(s - x) <= 1e-12 * s.abs().max(1.0))
        };
        for w in cleaned.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                continue;
            }
            let n = (math::ceil((b - a) / scale) as usize).clamp(1, MAX_SUBPANELS);
            let sing_a = is_singular(a);
            let sing_b = is_singular(b);
            let n = if n == 1 && sing_a && sing_b { 2 } else { n };
            let h = (b - a) / n as f64;
            for i in 0..n {
                let plo = if i == 0 { a } else { a + h * i as f64 };
                let phi = if i + 1 == n {
                    b
                } else {
                    a + h * (i + 1) as f64
                };
                let kind = if i == 0 && sing_a {
                    PanelKind::SingularLo
                } else if i + 1 == n && sing_b {
                    PanelKind::SingularHi
                } else {
                    PanelKind::Regular
                };
                panels.push(Panel {
                    lo: plo,
                    hi: phi,
                    kind,
                });
            }
        }
    }
    panels
}

/// Integrates `f` over a region with landmark-aware panels.
pub fn integrate_region<F: Fn(f64) -> f64>(
    f: F,
    region: &Region,
    marks: &Landmarks,
    s: &QuadratureSettings,
) -> Result<f64> {
    let panels = plan_panels(region, marks);
    integrate_panels(&f, &panels, s)
}

/// Adaptive Gauss–Kronrod (7/15) quadrature over landmark-aware panels,
/// with the relative tolerance taken against `∫|f|` rather than `|∫f|`.
///
/// Pointwise operator values use this rule: their integrands are smooth
/// between landmarks, where Kronrod converges far faster than Simpson, and
/// they can cancel heavily (a mollified high frequency is nearly zero), so a
/// budget relative to the signed value would chase the absolute floor.
pub(crate) fn integrate_region_mass<F: Fn(f64) -> f64>(
    f: F,
    region: &Region,
    marks: &Landmarks,
    s: &QuadratureSettings,
) -> Result<f64> {
    let panels = plan_panels(region, marks);
    if panels.is_empty() {
        return Ok(0.0);
    }
    let mut first = Vec::with_capacity(panels.len());
    let mut mass = 0.0;
    let mut total_width = 0.0;
    for p in &panels {
        let r = kronrod(&f, p, 0.0, 1.0)?;
        mass += r.abs;
        total_width += p.hi - p.lo;
        first.push(r);
    }
    let budget = s.abs_tol.max(s.rel_tol * mass);
    let mut sum = 0.0;
    for (p, r) in panels.iter().zip(&first) {
        let tol = budget * (p.hi - p.lo) / total_width;
        sum += kronrod_adapt(&f, p, 0.0, 1.0, *r, tol, 0, s)?;
    }
    Ok(sum)
}

/// Abscissae of the 15-point Kronrod rule on `[-1, 1]`, outermost first;
/// odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct KronrodEstimate {
    value: f64,
    error: f64,
    abs: f64,
}

/// One 7/15 estimate over `u ∈ [a, b]` of a panel. All nodes are interior,
/// so jumps on panel ends are never sampled.
fn kronrod<F: Fn(f64) -> f64>(f: &F, p: &Panel, a: f64, b: f64) -> Result<KronrodEstimate> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = p.sample(f, c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * math::abs(fc);
    for j in 0..7 {
        let f1 = p.sample(f, c - h * XGK[j])?;
        let f2 = p.sample(f, c + h * XGK[j])?;
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (math::abs(f1) + math::abs(f2));
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    Ok(KronrodEstimate {
        value: k * h,
        error: math::abs((k - g) * h),
        abs: abs * h,
    })
}

#[allow(clippy::too_many_arguments)]
fn kronrod_adapt<F: Fn(f64) -> f64>(
    f: &F,
    p: &Panel,
    a: f64,
    b: f64,
    est: KronrodEstimate,
    tol: f64,
    depth: u32,
    s: &QuadratureSettings,
) -> Result<f64> {
    // Panel-relative acceptance keeps the total within `rel_tol · mass` and
    // stops refinement at the evaluation noise of tiny smooth tails.
    if est.error <= tol || est.error <= s.rel_tol.max(64.0 * f64::EPSILON) * est.abs {
        return Ok(est.value);
    }
    if depth >= s.max_depth {
        let (lo, _) = p.map(a);
        let (hi, _) = p.map(b);
        return Err(Error::DepthExhausted { lo, hi });
    }
    let m = 0.5 * (a + b);
    let left = kronrod(f, p, a, m)?;
    let right = kronrod(f, p, m, b)?;
    let l = kronrod_adapt(f, p, a, m, left, 0.5 * tol, depth + 1, s)?;
    let r = kronrod_adapt(f, p, m, b, right, 0.5 * tol, depth + 1, s)?;
    Ok(l + r)
}

struct PanelStart {
    f0: f64,
    fm: f64,
    f1: f64,
    whole: f64,
}

pub(crate) fn integrate_panels<F: Fn(f64) -> f64>(
    f: &F,
    panels: &[Panel],
    s: &QuadratureSettings,
) -> Result<f64> {
    if panels.is_empty() {
        return Ok(0.0);
    }
    let mut starts = Vec::with_capacity(panels.len());
    let mut coarse = 0.0;
    let mut total_width = 0.0;
    for p in panels {
        let f0 = p.sample(f, 0.0)?;
        let fm = p.sample(f, 0.5)?;
        let f1 = p.sample(f, 1.0)?;
        let whole = (f0 + 4.0 * fm + f1) / 6.0;
        coarse += whole;
        total_width += p.hi - p.lo;
        starts.push(PanelStart { f0, fm, f1, whole });
    }
    let budget = s.abs_tol.max(s.rel_tol * math::abs(coarse));
    let mut sum = 0.0;
    for (p, st) in panels.iter().zip(&starts) {
        let tol = budget * (p.hi - p.lo) / total_width;
        sum += simpson(
            f, p, 0.0, st.f0, 0.5, st.fm, 1.0, st.f1, st.whole, tol, 0, s,
        )?;
    }
    Ok(sum)
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    p: &Panel,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    s: &QuadratureSettings,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = p.sample(f, lm)?;
    let frm = p.sample(f, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let converged = math::abs(delta) <= 15.0 * tol
        || math::abs(delta) <= 64.0 * f64::EPSILON * (math::abs(left) + math::abs(right));
    if depth >= MIN_DEPTH && converged {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= s.max_depth {
        let (lo, _) = p.map(a);
        let (hi, _) = p.map(b);
        return Err(Error::DepthExhausted { lo, hi });
    }
    let l = simpson(f, p, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, s)?;
    let r = simpson(f, p, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, s)?;
    Ok(l + r)
}

/// Lower floor and upper ceiling of the bracket search.
pub const BRACKET_FLOOR: f64 = 1e-12;
pub const BRACKET_CEILING: f64 = 1e12;
const BRACKET_FACTOR: f64 = 4.0;
const MAX_BISECTIONS: usize = 400;

/// Finds `λ` with `|g(λ) - target| ≤ tol` for a decreasing `g`.
///
/// The bracket grows geometrically by a factor of 4 from `λ = 1`, then a
/// geometric bisection closes it. Fails with [`Error::NoBracket`] when `g`
/// stays below `target` all the way down to [`BRACKET_FLOOR`] (or above it
/// up to [`BRACKET_CEILING`]).
pub fn solve_monotone_decreasing<G>(mut g: G, target: f64, tol: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) || !target.is_finite() {
        return Err(Error::InvalidParameter("root tolerance must be positive"));
    }
    let mut lam = 1.0;
    let mut val = g(lam)?;
    if math::abs(val - target) <= tol {
        return Ok(lam);
    }
    // lo: g(lo) > target, hi: g(hi) < target
    let (mut lo, mut hi);
    if val > target {
        lo = lam;
        loop {
            lam *= BRACKET_FACTOR;
            if lam > BRACKET_CEILING {
                return Err(Error::NoBracket);
            }
            val = g(lam)?;
            if math::abs(val - target) <= tol {
                return Ok(lam);
            }
            if val < target {
                hi = lam;
                break;
            }
            lo = lam;
        }
    } else {
        hi = lam;
        loop {
            lam /= BRACKET_FACTOR;
            if lam < BRACKET_FLOOR {
                return Err(Error::NoBracket);
            }
            val = g(lam)?;
            if math::abs(val - target) <= tol {
                return Ok(lam);
            }
            if val > target {
                lo = lam;
                break;
            }
            hi = lam;
        }
    }
    let mut mid = math::sqrt(lo * hi);
    for _ in 0..MAX_BISECTIONS {
        mid = math::sqrt(lo * hi);
        val = g(mid)?;
        if math::abs(val - target) <= tol {
            return Ok(mid);
        }
        if val > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(mid)
}

/// Greedy ε-net over a finite point set.
#[derive(Clone, Debug, PartialEq)]
pub struct NetResult {
    /// Points that became centers, in scan order.
    pub centers: Vec<usize>,
    pub radius: f64,
    /// For every scanned point, the center it is assigned to.
    pub cover_map: Vec<usize>,
}

impl NetResult {
    pub fn size(&self) -> usize {
        self.centers.len()
    }
}

/// Scans `points` in order; a point becomes a new center iff its distance to
/// every existing center is at least `eps`, otherwise it joins the first
/// center closer than `eps`.
pub fn greedy_net<D, E>(
    points: &[usize],
    mut dist: D,
    eps: f64,
) -> core::result::Result<NetResult, E>
where
    D: FnMut(usize, usize) -> core::result::Result<f64, E>,
{
    greedy_net_batched(
        points,
        |p, centers| centers.iter().map(|&c| dist(p, c)).collect(),
        eps,
    )
}

/// [`greedy_net`] with the distances from a point to all current centers
/// requested as one batch, so callers can evaluate them concurrently.
pub fn greedy_net_batched<B, E>(
    points: &[usize],
    mut batch: B,
    eps: f64,
) -> core::result::Result<NetResult, E>
where
    B: FnMut(usize, &[usize]) -> core::result::Result<Vec<f64>, E>,
{
    let mut centers: Vec<usize> = Vec::new();
    let mut cover_map = Vec::with_capacity(points.len());
    for &p in points {
        let owner = if centers.is_empty() {
            None
        } else {
            let d = batch(p, &centers)?;
            d.iter().position(|v| *v < eps).map(|i| centers[i])
        };
        match owner {
            Some(c) => cover_map.push(c),
            None => {
                centers.push(p);
                cover_map.push(p);
            }
        }
    }
    Ok(NetResult {
        centers,
        radius: eps,
        cover_map,
    })
}
