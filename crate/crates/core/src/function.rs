//! Real functions on the line with the metadata the quadrature needs.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;
use crate::numerics::{Interval, Landmarks};

/// A shareable point evaluator.
pub type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Highest derivative order carried exactly by the analytic primitives.
pub const EXACT_ORDER: usize = 4;

/// An evaluable function `ℝ → ℝ`.
///
/// Besides the evaluator it carries an optional compact support hint, an
/// optional exponential decay rate, quadrature [`Landmarks`] and, when
/// known, exact derivatives: `derivatives[j - 1]` evaluates `D^j f`.
#[derive(Clone)]
pub struct RealFunction {
    eval: Eval,
    support: Option<Interval>,
    decay_rate: Option<f64>,
    marks: Landmarks,
    derivatives: Vec<Eval>,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("support", &self.support)
            .field("decay_rate", &self.decay_rate)
            .field("marks", &self.marks)
            .field("exact_derivatives", &self.derivatives.len())
            .finish()
    }
}

fn eval_of<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Eval {
    Arc::new(f)
}

impl RealFunction {
    /// Wraps a bare evaluator without any metadata.
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::from_eval(eval_of(f))
    }

    pub fn from_eval(eval: Eval) -> Self {
        Self {
            eval,
            support: None,
            decay_rate: None,
            marks: Landmarks::none(),
            derivatives: Vec::new(),
        }
    }

    pub fn with_support(mut self, support: Interval) -> Self {
        self.support = Some(support);
        self
    }

    pub fn with_decay_rate(mut self, rate: f64) -> Self {
        self.decay_rate = Some(rate);
        self
    }

    pub fn with_landmarks(mut self, marks: Landmarks) -> Self {
        self.marks = marks;
        self
    }

    pub fn with_derivatives(mut self, derivatives: Vec<Eval>) -> Self {
        self.derivatives = derivatives;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> &Eval {
        &self.eval
    }

    pub fn support(&self) -> Option<Interval> {
        self.support
    }

    pub fn decay_rate(&self) -> Option<f64> {
        self.decay_rate
    }

    pub fn landmarks(&self) -> &Landmarks {
        &self.marks
    }

    /// Number of exactly known derivative orders.
    pub fn exact_orders(&self) -> usize {
        self.derivatives.len()
    }

    /// `D^order f` from the exact derivative data, if present. Order 0 is
    /// the function itself.
    pub fn exact_derivative(&self, order: usize) -> Option<RealFunction> {
        if order == 0 {
            return Some(self.clone());
        }
        if order > self.derivatives.len() {
            return None;
        }
        Some(RealFunction {
            eval: self.derivatives[order - 1].clone(),
            support: self.support,
            decay_rate: self.decay_rate,
            marks: self.marks.clone(),
            derivatives: self.derivatives[order..].to_vec(),
        })
    }

    /// The identically zero function.
    pub fn zero() -> Self {
        let z = || eval_of(|_| 0.0);
        Self::from_eval(z())
            .with_support(Interval::point(0.0).expect("finite"))
            .with_derivatives((0..EXACT_ORDER).map(|_| z()).collect())
    }

    /// `χ_{[a,b)}`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        let iv = Interval::new(a, b)?;
        Ok(Self::new(move |x| if x >= a && x < b { 1.0 } else { 0.0 })
            .with_support(iv)
            .with_landmarks(Landmarks::with_breaks(vec![a, b])))
    }

    /// `χ_K` for a possibly degenerate interval; a point gives the zero function.
    pub fn indicator_of(k: Interval) -> Self {
        if k.is_degenerate() {
            return Self::zero();
        }
        Self::indicator(k.lo(), k.hi()).expect("non-degenerate interval")
    }

    /// `exp(-((x - mu)/sigma)^2)`.
    pub fn gauss(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !mu.is_finite() || !sigma.is_finite() {
            return Err(Error::InvalidParameter(
                "gauss needs a finite centre and sigma > 0",
            ));
        }
        let base = move |x: f64| {
            let u = (x - mu) / sigma;
            math::exp(-u * u)
        };
        // D^n e^{-u^2} = (-1)^n H_n(u) e^{-u^2} with physicists' Hermite H_n.
        let derivatives = (1..=EXACT_ORDER)
            .map(|n| {
                eval_of(move |x: f64| {
                    let u = (x - mu) / sigma;
                    let (mut h0, mut h1) = (1.0, 2.0 * u);
                    for k in 1..n {
                        let h2 = 2.0 * u * h1 - 2.0 * k as f64 * h0;
                        h0 = h1;
                        h1 = h2;
                    }
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    sign * h1 * math::exp(-u * u) / math::powi(sigma, n as i32)
                })
            })
            .collect();
        Ok(Self::new(base)
            .with_decay_rate(1.0 / sigma)
            .with_landmarks(Landmarks {
                breaks: vec![mu],
                singular: Vec::new(),
                scale: Some(sigma),
            })
            .with_derivatives(derivatives))
    }

    /// Unnormalized standard bump `exp(-1/(1 - u^2))`, `u = (x - center)/radius`,
    /// supported in `[center - radius, center + radius]`.
    pub fn bump(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !center.is_finite() || !radius.is_finite() {
            return Err(Error::InvalidParameter(
                "bump needs a finite centre and radius > 0",
            ));
        }
        let support = Interval::new(center - radius, center + radius)?;
        let d1 = move |x: f64| {
            let u = (x - center) / radius;
            bump_derivative(u, 1) / radius
        };
        let d2 = move |x: f64| {
            let u = (x - center) / radius;
            bump_derivative(u, 2) / (radius * radius)
        };
        Ok(Self::new(move |x| standard_bump((x - center) / radius))
            .with_support(support)
            .with_landmarks(Landmarks {
                breaks: vec![center - radius, center, center + radius],
                singular: Vec::new(),
                scale: Some(0.5 * radius),
            })
            .with_derivatives(vec![eval_of(d1), eval_of(d2)]))
    }

    /// `sin(freq · x)`.
    pub fn sine(freq: f64) -> Result<Self> {
        if !freq.is_finite() {
            return Err(Error::InvalidParameter("sinw needs a finite frequency"));
        }
        let derivatives = (1..=EXACT_ORDER)
            .map(|n| {
                let c = math::powi(freq, n as i32);
                eval_of(move |x: f64| {
                    let t = freq * x;
                    c * match n % 4 {
                        0 => math::sin(t),
                        1 => math::cos(t),
                        2 => -math::sin(t),
                        _ => -math::cos(t),
                    }
                })
            })
            .collect();
        let marks = if freq != 0.0 {
            Landmarks {
                scale: Some(core::f64::consts::PI / math::abs(freq)),
                ..Landmarks::none()
            }
        } else {
            Landmarks::none()
        };
        Ok(Self::new(move |x| math::sin(freq * x))
            .with_landmarks(marks)
            .with_derivatives(derivatives))
    }

    /// `c0 + c1 x + … + cn x^n`.
    pub fn poly(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "poly needs at least one finite coefficient",
            ));
        }
        let mut derivatives = Vec::new();
        let mut current = coeffs.clone();
        for _ in 0..EXACT_ORDER {
            current = if current.len() <= 1 {
                vec![0.0]
            } else {
                current
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| c * i as f64)
                    .collect()
            };
            let c = current.clone();
            derivatives.push(eval_of(move |x| horner(&c, x)));
        }
        Ok(Self::new(move |x| horner(&coeffs, x)).with_derivatives(derivatives))
    }

    /// `|f|^e` for `e > 0`.
    pub fn abs_pow(&self, e: f64) -> Result<Self> {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::InvalidParameter(
                "abspow needs a finite exponent e > 0",
            ));
        }
        let f = self.eval.clone();
        let mut derivatives = Vec::new();
        if e >= 1.0 && !self.derivatives.is_empty() {
            let (f1, d1) = (f.clone(), self.derivatives[0].clone());
            derivatives.push(eval_of(move |x| {
                let v = f1(x);
                if v == 0.0 {
                    return 0.0;
                }
                e * math::powf(math::abs(v), e - 1.0) * math::signum(v) * d1(x)
            }));
            if e >= 2.0 && self.derivatives.len() >= 2 {
                let (f2, d1, d2) = (
                    f.clone(),
                    self.derivatives[0].clone(),
                    self.derivatives[1].clone(),
                );
                derivatives.push(eval_of(move |x| {
                    let v = f2(x);
                    let a = math::abs(v);
                    let g1 = d1(x);
                    let first = if e == 2.0 {
                        2.0 * g1 * g1
                    } else if a == 0.0 {
                        0.0
                    } else {
                        e * (e - 1.0) * math::powf(a, e - 2.0) * g1 * g1
                    };
                    let second = if a == 0.0 {
                        0.0
                    } else {
                        e * math::powf(a, e - 1.0) * math::signum(v) * d2(x)
                    };
                    first + second
                }));
            }
        }
        Ok(RealFunction {
            eval: eval_of(move |x| math::powf(math::abs(f(x)), e)),
            support: self.support,
            decay_rate: self.decay_rate.map(|r| r * e),
            marks: self.marks.clone(),
            derivatives,
        })
    }

    /// `x ↦ f(x - t)`.
    pub fn translate(&self, t: f64) -> Self {
        let map = |g: &Eval| {
            let g = g.clone();
            eval_of(move |x| g(x - t))
        };
        RealFunction {
            eval: map(&self.eval),
            support: self.support.map(|s| s.shift(t)),
            decay_rate: self.decay_rate,
            marks: self.marks.shifted(t),
            derivatives: self.derivatives.iter().map(map).collect(),
        }
    }

    /// `x ↦ c · f(x)`.
    pub fn scale(&self, c: f64) -> Self {
        let map = |g: &Eval| {
            let g = g.clone();
            eval_of(move |x| c * g(x))
        };
        RealFunction {
            eval: map(&self.eval),
            support: self.support,
            decay_rate: self.decay_rate,
            marks: self.marks.clone(),
            derivatives: self.derivatives.iter().map(map).collect(),
        }
    }

    /// `x ↦ f(x / s)` for `s > 0`.
    pub fn dilate(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(
                "dilate needs a finite factor s > 0",
            ));
        }
        let g = self.eval.clone();
        let derivatives = self
            .derivatives
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let d = d.clone();
                let c = math::powi(s, -(i as i32 + 1));
                eval_of(move |x| c * d(x / s))
            })
            .collect();
        Ok(RealFunction {
            eval: eval_of(move |x| g(x / s)),
            support: self
                .support
                .map(|iv| Interval::new(iv.lo() * s, iv.hi() * s).unwrap_or(iv)),
            decay_rate: self.decay_rate.map(|r| r / s),
            marks: self.marks.dilated(s),
            derivatives,
        })
    }

    /// `f + g`.
    pub fn add(&self, other: &RealFunction) -> Self {
        self.combine_linear(other, 1.0)
    }

    /// `f - g`.
    pub fn sub(&self, other: &RealFunction) -> Self {
        self.combine_linear(other, -1.0)
    }

    fn combine_linear(&self, other: &RealFunction, sign: f64) -> Self {
        let pair = |a: &Eval, b: &Eval| {
            let (a, b) = (a.clone(), b.clone());
            eval_of(move |x| a(x) + sign * b(x))
        };
        let n = self.derivatives.len().min(other.derivatives.len());
        let derivatives = (0..n)
            .map(|i| pair(&self.derivatives[i], &other.derivatives[i]))
            .collect();
        let support = match (self.support, other.support) {
            (Some(a), Some(b)) => Some(union_hull(a, b)),
            _ => None,
        };
        let decay_rate = match (self.decay_rate, other.decay_rate) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) if other.support.is_some() => Some(a),
            (None, Some(b)) if self.support.is_some() => Some(b),
            _ => None,
        };
        RealFunction {
            eval: pair(&self.eval, &other.eval),
            support,
            decay_rate,
            marks: self.marks.merge(&other.marks),
            derivatives,
        }
    }

    /// `f · g`, with Leibniz derivatives up to the common exact order.
    pub fn mul(&self, other: &RealFunction) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let n = self.derivatives.len().min(other.derivatives.len());
        let mut derivatives = Vec::with_capacity(n);
        for order in 1..=n {
            let fs: Vec<Eval> = (0..=order)
                .map(|i| {
                    if i == 0 {
                        self.eval.clone()
                    } else {
                        self.derivatives[i - 1].clone()
                    }
                })
                .collect();
            let gs: Vec<Eval> = (0..=order)
                .map(|i| {
                    if i == 0 {
                        other.eval.clone()
                    } else {
                        other.derivatives[i - 1].clone()
                    }
                })
                .collect();
            derivatives.push(eval_of(move |x| {
                let mut acc = 0.0;
                let mut binom = 1.0;
                for i in 0..=order {
                    acc += binom * fs[i](x) * gs[order - i](x);
                    binom = binom * (order - i) as f64 / (i + 1) as f64;
                }
                acc
            }));
        }
        let support = match (self.support, other.support) {
            (Some(s), Some(t)) => Some(s.intersect(&t).unwrap_or_else(|| {
                Interval::point(s.lo().max(t.lo()).min(s.hi())).expect("finite")
            })),
            (Some(s), None) | (None, Some(s)) => Some(s),
            (None, None) => None,
        };
        let decay_rate = match (self.decay_rate, other.decay_rate) {
            (Some(x), Some(y)) => Some(x + y),
            (x, y) => x.or(y),
        };
        RealFunction {
            eval: eval_of(move |x| {
                let u = a(x);
                if u == 0.0 {
                    0.0
                } else {
                    u * b(x)
                }
            }),
            support,
            decay_rate,
            marks: self.marks.merge(&other.marks),
            derivatives,
        }
    }

    /// `f · χ_K`; exact derivative data is dropped since the product jumps.
    pub fn restrict(&self, k: Interval) -> Self {
        if k.is_degenerate() {
            return Self::zero();
        }
        let g = self.eval.clone();
        let (lo, hi) = (k.lo(), k.hi());
        let support = match self.support {
            Some(s) => s
                .intersect(&k)
                .unwrap_or_else(|| Interval::point(lo).expect("finite")),
            None => k,
        };
        let mut marks = self.marks.clone();
        marks = marks.merge(&Landmarks::with_breaks(vec![lo, hi]));
        RealFunction {
            eval: eval_of(move |x| if x >= lo && x < hi { g(x) } else { 0.0 }),
            support: Some(support),
            decay_rate: None,
            marks,
            derivatives: Vec::new(),
        }
    }

    /// `f · 1_{|x| > gamma}`.
    pub fn restrict_outside(&self, gamma: f64) -> Self {
        let g = self.eval.clone();
        let marks = self
            .marks
            .merge(&Landmarks::with_breaks(vec![-gamma, gamma]));
        RealFunction {
            eval: eval_of(move |x| if math::abs(x) > gamma { g(x) } else { 0.0 }),
            support: self.support,
            decay_rate: self.decay_rate,
            marks,
            derivatives: Vec::new(),
        }
    }

    /// Whether `|f| ≤ 1e-14` at `samples` evenly spaced points of `window`
    /// lying outside the support hint. Functions without a hint pass.
    pub fn support_hint_holds(&self, window: Interval, samples: usize) -> bool {
        let Some(s) = self.support else {
            return true;
        };
        let n = samples.max(2);
        (0..n).all(|i| {
            let x = window.lo() + window.length() * i as f64 / (n - 1) as f64;
            let inside = if s.is_degenerate() {
                false
            } else {
                x >= s.lo() && x <= s.hi()
            };
            inside || math::abs(self.eval(x)) <= 1e-14
        })
    }
}

fn union_hull(a: Interval, b: Interval) -> Interval {
    if a.is_degenerate() {
        b
    } else if b.is_degenerate() {
        a
    } else {
        a.hull(&b)
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// `exp(-1/(1 - u^2))` on `|u| < 1`, zero elsewhere.
pub fn standard_bump(u: f64) -> f64 {
    let t = 1.0 - u * u;
    if t <= 0.0 {
        0.0
    } else {
        math::exp(-1.0 / t)
    }
}

/// Derivatives of the standard bump in `u` for orders 1 and 2.
fn bump_derivative(u: f64, order: usize) -> f64 {
    let t = 1.0 - u * u;
    if t <= 0.0 {
        return 0.0;
    }
    let phi = math::exp(-1.0 / t);
    // g = -1/(1-u^2), phi = e^g
    let g1 = -2.0 * u / (t * t);
    match order {
        1 => phi * g1,
        2 => {
            let g2 = -2.0 / (t * t) - 8.0 * u * u / (t * t * t);
            phi * (g1 * g1 + g2)
        }
        _ => unreachable!("bump derivatives are tabulated for orders 1 and 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositional_semantics() {
        let f = RealFunction::gauss(0.0, 1.0)
            .unwrap()
            .translate(2.0)
            .scale(3.0);
        for &x in &[-1.0, 0.0, 2.0, 3.5] {
            let expect = 3.0 * math::exp(-(x - 2.0) * (x - 2.0));
            assert!((f.eval(x) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn gauss_derivatives_match_closed_forms() {
        let g = RealFunction::gauss(0.5, 2.0).unwrap();
        let d1 = g.exact_derivative(1).unwrap();
        let d2 = g.exact_derivative(2).unwrap();
        for &x in &[-3.0, -0.2, 0.5, 1.7] {
            let u = (x - 0.5) / 2.0;
            let e = math::exp(-u * u);
            assert!((d1.eval(x) - (-2.0 * u / 2.0) * e).abs() < 1e-14);
            assert!((d2.eval(x) - (4.0 * u * u - 2.0) / 4.0 * e).abs() < 1e-14);
        }
    }

    #[test]
    fn leibniz_product() {
        // (x^2 sin x)'' = 2 sin x + 4x cos x - x^2 sin x
        let f = RealFunction::poly(vec![0.0, 0.0, 1.0])
            .unwrap()
            .mul(&RealFunction::sine(1.0).unwrap());
        let d2 = f.exact_derivative(2).unwrap();
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            let expect = 2.0 * math::sin(x) + 4.0 * x * math::cos(x) - x * x * math::sin(x);
            assert!((d2.eval(x) - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn indicator_is_half_open() {
        let chi = RealFunction::indicator(0.0, 1.0).unwrap();
        assert_eq!(chi.eval(0.0), 1.0);
        assert_eq!(chi.eval(1.0), 0.0);
        assert!(RealFunction::indicator(1.0, 0.0).is_err());
    }

    #[test]
    fn support_hints_hold() {
        let window = Interval::symmetric(10.0).unwrap();
        for f in [
            RealFunction::bump(1.0, 2.0).unwrap(),
            RealFunction::indicator(-1.0, 3.0).unwrap(),
            RealFunction::bump(0.0, 1.0)
                .unwrap()
                .mul(&RealFunction::sine(7.0).unwrap()),
        ] {
            assert!(f.support_hint_holds(window, 4001));
        }
    }
}
