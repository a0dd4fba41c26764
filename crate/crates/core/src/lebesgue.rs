//! Weighted variable-exponent Lebesgue spaces `L_w^{p(.)}`.
//!
//! The modular is `ϱ(f) = ∫ |f(x)|^{p(x)} w(x) dx` and the Luxemburg norm is
//! `inf{λ > 0 : ϱ(f/λ) ≤ 1}`. For a constant exponent the norm is read off
//! the modular in closed form; otherwise a monotone root search runs on
//! `λ ↦ ϱ(f/λ)`. Each search caches `(|f|, p, w)` per quadrature node, so the
//! bisection steps only pay for `powf`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::math;
use crate::numerics::{
    integrate_panels, integrate_region, plan_panels, solve_monotone_decreasing, Interval, Panel,
    QuadratureSettings, Region,
};
use crate::spaces::{conjugate_exponent, dual_weight, ExponentField, WeightField};

/// Tolerance on `|ϱ(f/λ) - 1|` for function norms.
pub const NORM_TOL: f64 = 1e-8;

/// Default truncation radius: integrals over ℝ run over `[-64, 64)`.
pub const DEFAULT_TRUNCATION: f64 = 64.0;

/// Constant of the weighted Hölder inequality.
pub const HOLDER_CONSTANT: f64 = 2.0;

/// Modular integrand with a per-node cache of `(|f(x)|, p(x), w(x))`.
struct ModularIntegrand<'a> {
    f: &'a RealFunction,
    p: &'a ExponentField,
    w: &'a WeightField,
    panels: Vec<Panel>,
    cache: RefCell<BTreeMap<u64, (f64, f64, f64)>>,
}

impl<'a> ModularIntegrand<'a> {
    fn new(f: &'a RealFunction, p: &'a ExponentField, w: &'a WeightField, region: &Region) -> Self {
        let region = effective_region(f, region);
        let marks = f
            .landmarks()
            .merge(&p.landmarks().flattened())
            .merge(w.landmarks());
        Self {
            f,
            p,
            w,
            panels: plan_panels(&region, &marks),
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    fn node(&self, x: f64) -> (f64, f64, f64) {
        let key = x.to_bits();
        if let Some(v) = self.cache.borrow().get(&key) {
            return *v;
        }
        let a = math::abs(self.f.eval(x));
        let v = if a == 0.0 {
            (0.0, 1.0, 0.0)
        } else {
            (a, self.p.eval(x), self.w.eval(x))
        };
        self.cache.borrow_mut().insert(key, v);
        v
    }

    /// `ϱ(f/λ)`.
    fn at(&self, lambda: f64, quad: &QuadratureSettings) -> Result<f64> {
        integrate_panels(
            &|x| {
                let (a, p, w) = self.node(x);
                if a == 0.0 {
                    0.0
                } else {
                    math::powf(a / lambda, p) * w
                }
            },
            &self.panels,
            quad,
        )
    }
}

/// `region`, cut down to the support hint of `f` when there is one.
fn effective_region(f: &RealFunction, region: &Region) -> Region {
    match f.support() {
        Some(s) if s.is_degenerate() => Region::empty(),
        Some(s) => region.intersect_interval(&s),
        None => region.clone(),
    }
}

/// `ϱ_{p,w}(f)` restricted to `region`.
pub(crate) fn modular_functional(
    f: &RealFunction,
    p: &ExponentField,
    w: &WeightField,
    region: &Region,
    quad: &QuadratureSettings,
) -> Result<f64> {
    ModularIntegrand::new(f, p, w, region).at(1.0, quad)
}

/// Luxemburg norm of `f` restricted to `region`, with `|ϱ(f/λ) - 1| ≤ tol`.
///
/// A vanishing modular gives exactly 0, as does a modular that stays below
/// one all the way down to the bracket floor.
pub(crate) fn luxemburg_functional(
    f: &RealFunction,
    p: &ExponentField,
    w: &WeightField,
    region: &Region,
    quad: &QuadratureSettings,
    tol: f64,
) -> Result<f64> {
    let integrand = ModularIntegrand::new(f, p, w, region);
    if integrand.panels.is_empty() {
        return Ok(0.0);
    }
    let at_one = integrand.at(1.0, quad)?;
    if at_one == 0.0 {
        return Ok(0.0);
    }
    if let Some(c) = p.as_constant() {
        return Ok(math::powf(at_one, 1.0 / c));
    }
    match solve_monotone_decreasing(|lam| integrand.at(lam, quad), 1.0, tol) {
        Ok(lam) => Ok(lam),
        Err(Error::NoBracket) if at_one < 1.0 => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// `L_w^{p(.)}` on a finite truncation window.
#[derive(Clone, Debug)]
pub struct LebesgueSpace {
    p: ExponentField,
    w: WeightField,
    truncation: Interval,
    quad: QuadratureSettings,
}

/// Outcome of `∫|fg| ≤ C‖f‖‖g‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs_bound: f64,
    pub holds: bool,
}

/// Outcome of `‖χ_K‖ ≤ C_K + 1` with `C_K = ∫_K w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharNormBound {
    pub norm: f64,
    pub c_k: f64,
    pub holds: bool,
}

impl LebesgueSpace {
    pub fn new(p: ExponentField, w: WeightField) -> Self {
        Self {
            p,
            w,
            truncation: Interval::symmetric(DEFAULT_TRUNCATION).expect("finite"),
            quad: QuadratureSettings::default(),
        }
    }

    pub fn with_truncation(mut self, truncation: Interval) -> Result<Self> {
        if truncation.is_degenerate() {
            return Err(Error::InvalidInterval {
                lo: truncation.lo(),
                hi: truncation.hi(),
            });
        }
        self.truncation = truncation;
        Ok(self)
    }

    pub fn with_quadrature(mut self, quad: QuadratureSettings) -> Self {
        self.quad = quad;
        self
    }

    pub fn exponent(&self) -> &ExponentField {
        &self.p
    }

    pub fn weight(&self) -> &WeightField {
        &self.w
    }

    pub fn truncation(&self) -> Interval {
        self.truncation
    }

    pub fn quadrature(&self) -> &QuadratureSettings {
        &self.quad
    }

    fn clip(&self, region: &Region) -> Region {
        region.intersect_interval(&self.truncation)
    }

    pub fn modular(&self, f: &RealFunction) -> Result<f64> {
        self.modular_on(f, &Region::from(self.truncation))
    }

    pub fn modular_on(&self, f: &RealFunction, region: &Region) -> Result<f64> {
        modular_functional(f, &self.p, &self.w, &self.clip(region), &self.quad)
    }

    /// `ϱ(f/λ)`.
    pub fn modular_scaled(&self, f: &RealFunction, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter("modular scale must be positive"));
        }
        ModularIntegrand::new(f, &self.p, &self.w, &Region::from(self.truncation))
            .at(lambda, &self.quad)
    }

    pub fn norm(&self, f: &RealFunction) -> Result<f64> {
        self.norm_on(f, &Region::from(self.truncation))
    }

    pub fn norm_on(&self, f: &RealFunction, region: &Region) -> Result<f64> {
        luxemburg_functional(
            f,
            &self.p,
            &self.w,
            &self.clip(region),
            &self.quad,
            NORM_TOL,
        )
    }

    /// `‖f · 1_{|x| > γ}‖`.
    pub fn tail_norm(&self, f: &RealFunction, gamma: f64) -> Result<f64> {
        self.norm_on(f, &Region::outside(gamma, self.truncation))
    }

    /// `∫_{|x| > γ} |f|^{p(x)} w`.
    pub fn tail_modular(&self, f: &RealFunction, gamma: f64) -> Result<f64> {
        self.modular_on(f, &Region::outside(gamma, self.truncation))
    }

    /// Bound `e^{-T r}/r` on the mass cut off by truncating at `|x| = T`
    /// for a function with exponential decay rate `r`.
    pub fn truncation_tail_bound(&self, f: &RealFunction) -> Option<f64> {
        if let Some(s) = f.support() {
            if s.lo() >= self.truncation.lo() && s.hi() <= self.truncation.hi() {
                return Some(0.0);
            }
        }
        let r = f.decay_rate().filter(|r| *r > 0.0)?;
        let t = math::abs(self.truncation.lo()).min(math::abs(self.truncation.hi()));
        Some(math::exp(-t * r) / r)
    }

    /// The associate space `L_{w*}^{q(.)}` with `q = p'` and `w* = w^{1-q}`.
    pub fn dual(&self) -> Result<LebesgueSpace> {
        Ok(LebesgueSpace {
            p: conjugate_exponent(&self.p)?,
            w: dual_weight(&self.w, &self.p, self.truncation)?,
            truncation: self.truncation,
            quad: self.quad,
        })
    }

    /// `∫|fg| ≤ 2 ‖f‖_{L_w^{p(.)}} ‖g‖_{L_{w*}^{q(.)}}`.
    pub fn holder_pairing(&self, f: &RealFunction, g: &RealFunction) -> Result<HolderCheck> {
        let dual = self.dual()?;
        let prod = f.mul(g);
        let region = effective_region(&prod, &Region::from(self.truncation));
        let lhs = integrate_region(
            |x| math::abs(prod.eval(x)),
            &region,
            &prod.landmarks().merge(self.w.landmarks()),
            &self.quad,
        )?;
        let rhs_bound = HOLDER_CONSTANT * self.norm(f)? * dual.norm(g)?;
        Ok(HolderCheck {
            lhs,
            rhs_bound,
            holds: lhs <= rhs_bound + 1e-9,
        })
    }

    /// `‖χ_K‖ ≤ C_K + 1`.
    pub fn char_norm_bound(&self, k: Interval) -> Result<CharNormBound> {
        if k.is_degenerate() {
            return Ok(CharNormBound {
                norm: 0.0,
                c_k: 0.0,
                holds: true,
            });
        }
        let norm = self.norm(&RealFunction::indicator_of(k))?;
        let c_k = self.w.mass(k, &self.quad)?;
        Ok(CharNormBound {
            norm,
            c_k,
            holds: norm <= c_k + 1.0 + 1e-9,
        })
    }

    /// `[p_1(f), …, p_{j_max}(f)]` with `p_j(f) = ‖f χ_{K_j}‖` over the
    /// exhaustion of `omega`; empty `K_j` give 0.
    pub fn local_seminorms(
        &self,
        f: &RealFunction,
        omega: Interval,
        j_max: usize,
    ) -> Result<Vec<f64>> {
        if j_max == 0 {
            return Err(Error::InvalidParameter("local seminorms need j_max >= 1"));
        }
        (1..=j_max)
            .map(|j| match exhaustion_set(omega, j) {
                Some(k) => self.norm_on(f, &Region::from(k)),
                None => Ok(0.0),
            })
            .collect()
    }
}

/// `K_j = {x ∈ Ω : |x| ≤ j, dist(x, ∁Ω) ≥ 1/j}` for an open interval `Ω`;
/// `None` when it has no interior.
pub fn exhaustion_set(omega: Interval, j: usize) -> Option<Interval> {
    if j == 0 {
        return None;
    }
    let j = j as f64;
    let lo = (omega.lo() + 1.0 / j).max(-j);
    let hi = (omega.hi() - 1.0 / j).min(j);
    Interval::new(lo, hi).ok()
}
