//! Weighted variable-exponent Sobolev spaces `W_ϑ^{k,p(.)}`.
//!
//! On the line, `‖f‖ = ∑_{j=0}^{k} ‖D^j f‖_{L_ϑ^{p(.)}}`. Derivatives come
//! from exact derivative data when a function carries it; otherwise from
//! central differences with step `1e-4` and one Richardson level, at most
//! twice on top of the highest exact order.
//!
//! [`PlaneSobolevSpace`] covers `k ≤ 1` on rectangles in the plane with
//! tensorized quadrature and the same difference rule for partials.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::function::{Eval, RealFunction};
use crate::lebesgue::{LebesgueSpace, NORM_TOL};
use crate::math;
use crate::numerics::{
    integrate_region, solve_monotone_decreasing, Interval, Landmarks, QuadratureSettings, Region,
};

/// Finite-difference step.
pub const FD_STEP: f64 = 1e-4;

/// Largest number of numerically differentiated orders.
pub const MAX_NUMERIC_ORDERS: usize = 2;

/// `(4 D_{h/2} g - D_h g) / 3` with `D_h g = (g(x+h) - g(x-h)) / 2h`.
#[inline]
fn richardson<G: Fn(f64) -> f64>(g: G, x: f64) -> f64 {
    let h = FD_STEP;
    let d1 = (g(x + h) - g(x - h)) / (2.0 * h);
    let d2 = (g(x + 0.5 * h) - g(x - 0.5 * h)) / h;
    (4.0 * d2 - d1) / 3.0
}

fn numeric_derivative(f: &RealFunction) -> RealFunction {
    let g = f.evaluator().clone();
    let mut out =
        RealFunction::new(move |x| richardson(|t| g(t), x)).with_landmarks(f.landmarks().clone());
    if let Some(s) = f.support() {
        out = out.with_support(s);
    }
    if let Some(r) = f.decay_rate() {
        out = out.with_decay_rate(r);
    }
    out
}

/// `D^order f`.
pub fn derivative(f: &RealFunction, order: usize) -> Result<RealFunction> {
    if let Some(d) = f.exact_derivative(order) {
        return Ok(d);
    }
    let exact = f.exact_orders();
    if order - exact > MAX_NUMERIC_ORDERS {
        return Err(Error::UnsupportedOrder { order });
    }
    let mut g = f.exact_derivative(exact).expect("exact order is available");
    for _ in exact..order {
        g = numeric_derivative(&g);
    }
    Ok(g)
}

/// `W_ϑ^{k,p(.)}` with `ϑ` the weight of `base`.
#[derive(Clone, Debug)]
pub struct SobolevSpace {
    base: LebesgueSpace,
    order: usize,
}

impl SobolevSpace {
    pub fn new(base: LebesgueSpace, order: usize) -> Self {
        Self { base, order }
    }

    pub fn base(&self) -> &LebesgueSpace {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `[D^0 f, …, D^k f]`.
    pub fn derivatives(&self, f: &RealFunction) -> Result<Vec<RealFunction>> {
        (0..=self.order).map(|j| derivative(f, j)).collect()
    }

    /// `[‖D^0 f‖, …, ‖D^k f‖]`.
    pub fn order_norms(&self, f: &RealFunction) -> Result<Vec<f64>> {
        self.derivatives(f)?
            .iter()
            .map(|d| self.base.norm(d))
            .collect()
    }

    pub fn norm(&self, f: &RealFunction) -> Result<f64> {
        Ok(self.order_norms(f)?.into_iter().sum())
    }

    /// `∑_j ϱ(D^j f)`.
    pub fn modular(&self, f: &RealFunction) -> Result<f64> {
        self.tail_modular(f, 0.0)
    }

    /// `∑_j ∫_{|x| > γ} |D^j f|^{p(x)} ϑ dx`; for `k = 1` this is
    /// `∫_{|x|>γ} (|f|^{p} + |f'|^{p}) ϑ`.
    pub fn tail_modular(&self, f: &RealFunction, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(Error::InvalidParameter("tail radius must be nonnegative"));
        }
        let mut total = 0.0;
        for d in self.derivatives(f)? {
            total += if gamma == 0.0 {
                self.base.modular(&d)?
            } else {
                self.base.tail_modular(&d, gamma)?
            };
        }
        Ok(total)
    }
}

type PlaneFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A function on the plane with optional exact first partials.
#[derive(Clone)]
pub struct PlaneFunction {
    eval: PlaneFn,
    partials: Option<[PlaneFn; 2]>,
}

impl core::fmt::Debug for PlaneFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PlaneFunction")
            .field("exact_partials", &self.partials.is_some())
            .finish()
    }
}

impl PlaneFunction {
    pub fn new<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self {
            eval: Arc::new(f),
            partials: None,
        }
    }

    pub fn with_partials<X, Y>(mut self, dx: X, dy: Y) -> Self
    where
        X: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        Y: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.partials = Some([Arc::new(dx), Arc::new(dy)]);
        self
    }

    /// `f(x)·g(y)`, with exact partials when both factors carry `D¹`.
    pub fn tensor(f: &RealFunction, g: &RealFunction) -> Self {
        let (a, b) = (f.evaluator().clone(), g.evaluator().clone());
        let mut out = Self::new(move |x, y| a(x) * b(y));
        if let (Some(fd), Some(gd)) = (f.exact_derivative(1), g.exact_derivative(1)) {
            let (a, b) = (f.evaluator().clone(), g.evaluator().clone());
            let (fd, gd): (Eval, Eval) = (fd.evaluator().clone(), gd.evaluator().clone());
            out = out.with_partials(move |x, y| fd(x) * b(y), move |x, y| a(x) * gd(y));
        }
        out
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    /// `∂_x f` (`axis = 0`) or `∂_y f` (`axis = 1`).
    pub fn partial(&self, axis: usize) -> Result<PlaneFunction> {
        if axis > 1 {
            return Err(Error::InvalidParameter("plane functions have two axes"));
        }
        if let Some(p) = &self.partials {
            return Ok(PlaneFunction {
                eval: p[axis].clone(),
                partials: None,
            });
        }
        let g = self.eval.clone();
        Ok(if axis == 0 {
            PlaneFunction::new(move |x, y| richardson(|t| g(t, y), x))
        } else {
            PlaneFunction::new(move |x, y| richardson(|t| g(x, t), y))
        })
    }
}

/// `W_ϑ^{k,p(.)}` on a rectangle, `k ≤ 1`.
#[derive(Clone)]
pub struct PlaneSobolevSpace {
    p: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    constant_p: Option<f64>,
    weight: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    domain: [Interval; 2],
    scale: f64,
    order: usize,
    quad: QuadratureSettings,
}

impl PlaneSobolevSpace {
    /// Constant exponent `p ≥ 1`, unit weight.
    pub fn constant(p: f64, domain: [Interval; 2], order: usize) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(
                "constant exponent must be finite and >= 1",
            ));
        }
        let mut sp = Self::new(move |_, _| p, |_, _| 1.0, domain, order)?;
        sp.constant_p = Some(p);
        Ok(sp)
    }

    pub fn new<P, W>(p: P, weight: W, domain: [Interval; 2], order: usize) -> Result<Self>
    where
        P: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        W: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if order > 1 {
            return Err(Error::UnsupportedOrder { order });
        }
        Ok(Self {
            p: Arc::new(p),
            constant_p: None,
            weight: Arc::new(weight),
            domain,
            scale: 0.5,
            order,
            quad: QuadratureSettings::default(),
        })
    }

    /// Panel length used by both quadrature directions.
    pub fn with_feature_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn modular_scaled(&self, f: &PlaneFunction, lambda: f64) -> Result<f64> {
        let marks = Landmarks {
            scale: Some(self.scale),
            ..Landmarks::none()
        };
        let [dx, dy] = self.domain;
        let (ry, quad) = (Region::from(dy), self.quad);
        let failure = core::cell::RefCell::new(None);
        let value = integrate_region(
            |x| {
                let inner = integrate_region(
                    |y| {
                        let a = math::abs(f.eval(x, y));
                        if a == 0.0 {
                            0.0
                        } else {
                            math::powf(a / lambda, (self.p)(x, y)) * (self.weight)(x, y)
                        }
                    },
                    &ry,
                    &marks,
                    &quad,
                );
                inner.unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                })
            },
            &Region::from(dx),
            &marks,
            &quad,
        );
        match failure.into_inner() {
            Some(e) => Err(e),
            None => value,
        }
    }

    pub fn lebesgue_modular(&self, f: &PlaneFunction) -> Result<f64> {
        self.modular_scaled(f, 1.0)
    }

    pub fn lebesgue_norm(&self, f: &PlaneFunction) -> Result<f64> {
        let at_one = self.modular_scaled(f, 1.0)?;
        if at_one == 0.0 {
            return Ok(0.0);
        }
        if let Some(c) = self.constant_p {
            return Ok(math::powf(at_one, 1.0 / c));
        }
        match solve_monotone_decreasing(|lam| self.modular_scaled(f, lam), 1.0, NORM_TOL) {
            Err(Error::NoBracket) if at_one < 1.0 => Ok(0.0),
            other => other,
        }
    }

    /// `[‖f‖, ‖∂_x f‖, ‖∂_y f‖]`, truncated to the multi-indices `|α| ≤ k`.
    pub fn multi_index_norms(&self, f: &PlaneFunction) -> Result<Vec<f64>> {
        let mut out = alloc::vec![self.lebesgue_norm(f)?];
        if self.order == 1 {
            for axis in 0..2 {
                out.push(self.lebesgue_norm(&f.partial(axis)?)?);
            }
        }
        Ok(out)
    }

    pub fn norm(&self, f: &PlaneFunction) -> Result<f64> {
        Ok(self.multi_index_norms(f)?.into_iter().sum())
    }
}
