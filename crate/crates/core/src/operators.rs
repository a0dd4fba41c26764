//! The Hardy–Littlewood maximal operator, the standard mollifier and ball
//! averages.
//!
//! The supremum over radii in `Mf(x)` is taken over a finite
//! [`RadiusGrid`], so [`maximal`] is a lower bound on the true value. Ball
//! integrals over growing radii are accumulated annulus by annulus.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::function::{standard_bump, RealFunction};
use crate::math;
use crate::numerics::{integrate_region_mass, Interval, Landmarks, QuadratureSettings, Region};

/// `∫_{-1}^{1} exp(-1/(1 - x²)) dx`.
pub const BUMP_MASS: f64 = 0.443_993_816_168_079_3;

/// Inner quadrature for pointwise operator values. It is tighter than the
/// defaults so that outer integrals of operator outputs see little noise,
/// and the absolute floor sits far below any value a Luxemburg rescaling
/// can still resolve.
pub const INNER_QUADRATURE: QuadratureSettings = QuadratureSettings {
    rel_tol: 1e-12,
    abs_tol: 1e-30,
    max_depth: 40,
};

/// Strictly increasing radii for the maximal operator.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusGrid {
    radii: Vec<f64>,
}

impl RadiusGrid {
    /// `count` log-spaced radii from `r_min` to `r_max`.
    pub fn log_spaced(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() || count < 2 {
            return Err(Error::InvalidParameter(
                "radius grid needs 0 < r_min < r_max and at least two radii",
            ));
        }
        let ratio = math::ln(r_max / r_min) / (count - 1) as f64;
        let mut radii: Vec<f64> = (0..count)
            .map(|i| r_min * math::exp(ratio * i as f64))
            .collect();
        radii[count - 1] = r_max;
        Ok(Self { radii })
    }

    /// 96 radii in `[1e-3, 2·truncation_radius]`.
    pub fn for_truncation(truncation_radius: f64) -> Result<Self> {
        Self::log_spaced(1e-3, 2.0 * truncation_radius, 96)
    }

    /// Adds radii, keeping the grid sorted and free of duplicates.
    pub fn with_radii(mut self, extra: &[f64]) -> Result<Self> {
        if extra.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidParameter("radii must be positive and finite"));
        }
        self.radii.extend_from_slice(extra);
        self.radii.sort_by(f64::total_cmp);
        self.radii.dedup();
        Ok(self)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn r_min(&self) -> f64 {
        self.radii[0]
    }

    pub fn r_max(&self) -> f64 {
        self.radii[self.radii.len() - 1]
    }

    pub fn count(&self) -> usize {
        self.radii.len()
    }
}

fn piece(lo: f64, hi: f64) -> Region {
    Interval::new(lo, hi).map(Region::from).unwrap_or_default()
}

/// `∫_{lo}^{hi} |f|`, skipping parts outside the support hint.
fn abs_integral(f: &RealFunction, lo: f64, hi: f64, quad: &QuadratureSettings) -> Result<f64> {
    let mut region = piece(lo, hi);
    if let Some(s) = f.support() {
        if s.is_degenerate() {
            return Ok(0.0);
        }
        region = region.intersect_interval(&s);
    }
    if region.is_empty() {
        return Ok(0.0);
    }
    integrate_region_mass(|y| math::abs(f.eval(y)), &region, f.landmarks(), quad)
}

/// `max_{r ∈ rg} (2r)^{-1} ∫_{x-r}^{x+r} |f|`, a lower bound on `Mf(x)`.
pub fn maximal(f: &RealFunction, x: f64, rg: &RadiusGrid) -> Result<f64> {
    let quad = INNER_QUADRATURE;
    let mut best: f64 = 0.0;
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &r in rg.radii() {
        acc += abs_integral(f, x - r, x - prev, &quad)?;
        acc += abs_integral(f, x + prev, x + r, &quad)?;
        prev = r;
        best = best.max(acc / (2.0 * r));
    }
    Ok(best)
}

/// `φ_ε(x) = ε^{-1} c exp(-1/(1 - (x/ε)²))` with `c` fixing unit mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mollifier {
    epsilon: f64,
    normalization: f64,
}

impl Mollifier {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The constant `c` of the unscaled kernel.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.normalization / self.epsilon * standard_bump(x / self.epsilon)
    }
}

pub fn make_mollifier(epsilon: f64) -> Result<Mollifier> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(
            "mollifier needs a finite epsilon > 0",
        ));
    }
    Ok(Mollifier {
        epsilon,
        normalization: 1.0 / BUMP_MASS,
    })
}

/// `(φ_ε ∗ f)(x) = ∫_{x-ε}^{x+ε} φ_ε(x - y) f(y) dy`.
pub fn mollify(f: &RealFunction, epsilon: f64, x: f64) -> Result<f64> {
    let phi = make_mollifier(epsilon)?;
    apply_kernel(f, &phi, x)
}

fn apply_kernel(f: &RealFunction, phi: &Mollifier, x: f64) -> Result<f64> {
    let eps = phi.epsilon;
    let mut region = piece(x - eps, x + eps);
    if let Some(s) = f.support() {
        if s.is_degenerate() {
            return Ok(0.0);
        }
        region = region.intersect_interval(&s);
    }
    if region.is_empty() {
        return Ok(0.0);
    }
    let marks = f.landmarks().merge(&Landmarks {
        breaks: vec![x],
        singular: Vec::new(),
        scale: Some(0.5 * eps),
    });
    integrate_region_mass(
        |y| {
            let k = phi.eval(x - y);
            if k == 0.0 {
                0.0
            } else {
                k * f.eval(y)
            }
        },
        &region,
        &marks,
        &INNER_QUADRATURE,
    )
}

/// `(f)_{B(x,r)} = (2r)^{-1} ∫_{x-r}^{x+r} f`.
pub fn ball_average(f: &RealFunction, x: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter("ball radius must be positive"));
    }
    let mut region = piece(x - r, x + r);
    if let Some(s) = f.support() {
        if s.is_degenerate() {
            return Ok(0.0);
        }
        region = region.intersect_interval(&s);
    }
    if region.is_empty() {
        return Ok(0.0);
    }
    Ok(
        integrate_region_mass(|y| f.eval(y), &region, f.landmarks(), &INNER_QUADRATURE)?
            / (2.0 * r),
    )
}

/// Landmarks of an operator output with window half-width `h`: every jump
/// of `f` smears over `[b - h, b + h]`.
fn smeared_landmarks(f: &RealFunction, h: f64) -> Landmarks {
    let flat = f.landmarks().flattened();
    let mut breaks = Vec::with_capacity(3 * flat.breaks.len());
    for &b in &flat.breaks {
        breaks.extend_from_slice(&[b - h, b, b + h]);
    }
    Landmarks {
        breaks,
        singular: Vec::new(),
        scale: flat.scale,
    }
    .merge(&Landmarks::none())
}

fn operator_output<F>(f: &RealFunction, h: f64, op: F) -> RealFunction
where
    F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
{
    let mut out = RealFunction::new(move |x| op(x).unwrap_or(f64::NAN))
        .with_landmarks(smeared_landmarks(f, h));
    if let Some(s) = f.support() {
        out = out.with_support(if s.is_degenerate() { s } else { s.expand(h) });
    }
    if let Some(r) = f.decay_rate() {
        out = out.with_decay_rate(r);
    }
    out
}

/// `φ_ε ∗ f` as a function. Quadrature failures surface as NaN samples,
/// which outer integrals report as errors.
pub fn mollified(f: &RealFunction, epsilon: f64) -> Result<RealFunction> {
    let phi = make_mollifier(epsilon)?;
    let g = f.clone();
    Ok(operator_output(f, epsilon, move |x| {
        apply_kernel(&g, &phi, x)
    }))
}

/// `x ↦ (f)_{B(x,h)}`.
pub fn averaged(f: &RealFunction, h: f64) -> Result<RealFunction> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter("ball radius must be positive"));
    }
    let g = f.clone();
    Ok(operator_output(f, h, move |x| ball_average(&g, x, h)))
}

/// `x ↦ Mf(x)` on the radius grid. The output has no compact support.
pub fn maximal_function(f: &RealFunction, rg: &RadiusGrid) -> RealFunction {
    let g = f.clone();
    let rg = rg.clone();
    RealFunction::new(move |x| maximal(&g, x, &rg).unwrap_or(f64::NAN))
        .with_landmarks(f.landmarks().flattened())
}
