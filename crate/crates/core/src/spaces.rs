//! Exponent fields `p(·)`, weights `w(·)`, their conjugates and duals, and
//! the log-Hölder and Muckenhoupt `A_{p(.)}` diagnostics.
//!
//! Essential infima and suprema are replaced by sampled extrema on a
//! [`SAMPLE_GRID`]-point grid over a domain, plus any analytically declared
//! bounds. The Muckenhoupt constant can only be estimated from below on a
//! finite family of balls.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::function::{Eval, RealFunction};
use crate::lebesgue;
use crate::math;
use crate::numerics::{integrate_region, Interval, Landmarks, QuadratureSettings, Region};

/// Grid size used for sampled extrema and positivity checks.
pub const SAMPLE_GRID: usize = 4096;

fn grid(domain: Interval, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| domain.lo() + domain.length() * i as f64 / (n - 1) as f64)
}

/// A variable exponent with `1 ≤ p⁻ ≤ p(x) ≤ p⁺ < ∞`.
#[derive(Clone)]
pub struct ExponentField {
    eval: Eval,
    p_minus: f64,
    p_plus: f64,
    constant: Option<f64>,
    declared_log_holder_constant: Option<f64>,
    declared_p_infinity: Option<f64>,
    marks: Landmarks,
}

impl fmt::Debug for ExponentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExponentField")
            .field("p_minus", &self.p_minus)
            .field("p_plus", &self.p_plus)
            .field("constant", &self.constant)
            .field(
                "declared_log_holder_constant",
                &self.declared_log_holder_constant,
            )
            .field("declared_p_infinity", &self.declared_p_infinity)
            .finish()
    }
}

impl ExponentField {
    pub fn constant(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(
                "constant exponent must be finite and >= 1",
            ));
        }
        Ok(Self {
            eval: Arc::new(move |_| p),
            p_minus: p,
            p_plus: p,
            constant: Some(p),
            declared_log_holder_constant: None,
            declared_p_infinity: Some(p),
            marks: Landmarks::none(),
        })
    }

    /// Samples `eval` on `domain` (grid plus landmark points) and records
    /// the extrema as `p⁻`, `p⁺`.
    pub fn sampled(eval: Eval, domain: Interval, marks: Landmarks) -> Result<Self> {
        let (lo, hi) = sample_extrema(&eval, domain, &marks)?;
        Self::checked(eval, lo, hi, marks)
    }

    /// Uses analytic bounds; sampling only confirms them.
    pub fn with_declared_bounds(
        eval: Eval,
        p_minus: f64,
        p_plus: f64,
        domain: Interval,
        marks: Landmarks,
    ) -> Result<Self> {
        let (lo, hi) = sample_extrema(&eval, domain, &marks)?;
        let slack = 1e-12 * p_plus.abs().max(1.0);
        if lo < p_minus - slack || hi > p_plus + slack {
            return Err(Error::InvalidParameter(
                "exponent leaves its declared bounds",
            ));
        }
        Self::checked(eval, p_minus, p_plus, marks)
    }

    fn checked(eval: Eval, p_minus: f64, p_plus: f64, marks: Landmarks) -> Result<Self> {
        if !(p_minus >= 1.0) || !p_plus.is_finite() || p_minus > p_plus {
            return Err(Error::InvalidParameter(
                "exponent must satisfy 1 <= p- <= p+ < inf",
            ));
        }
        Ok(Self {
            eval,
            p_minus,
            p_plus,
            constant: None,
            declared_log_holder_constant: None,
            declared_p_infinity: None,
            marks,
        })
    }

    /// `p(x) = p_inf + a / log(e + |x|)`: log-Hölder with limit `p_inf`.
    pub fn log_holder(p_inf: f64, a: f64, domain: Interval) -> Result<Self> {
        if !p_inf.is_finite() || !a.is_finite() {
            return Err(Error::InvalidParameter("loghold parameters must be finite"));
        }
        let eval: Eval = Arc::new(move |x: f64| p_inf + a / math::ln(math::E + math::abs(x)));
        let (lo, hi) = if a >= 0.0 {
            (p_inf, p_inf + a)
        } else {
            (p_inf + a, p_inf)
        };
        let mut field =
            Self::with_declared_bounds(eval, lo, hi, domain, Landmarks::with_breaks(vec![0.0]))?;
        field.declared_p_infinity = Some(p_inf);
        Ok(field)
    }

    /// `clamp(f(x), pmin, pmax)`.
    pub fn clipped(f: &RealFunction, pmin: f64, pmax: f64, domain: Interval) -> Result<Self> {
        if !(pmin >= 1.0) || !(pmax >= pmin) || !pmax.is_finite() {
            return Err(Error::InvalidParameter(
                "clip needs 1 <= pmin <= pmax < inf",
            ));
        }
        let g = f.evaluator().clone();
        let eval: Eval = Arc::new(move |x| g(x).clamp(pmin, pmax));
        Self::sampled(eval, domain, f.landmarks().flattened())
    }

    /// Internal exponents such as `p'/p` may drop below 1; they only feed
    /// Luxemburg functionals, never the public space types.
    pub(crate) fn unchecked(eval: Eval, p_minus: f64, p_plus: f64, marks: Landmarks) -> Self {
        Self {
            eval,
            p_minus,
            p_plus,
            constant: None,
            declared_log_holder_constant: None,
            declared_p_infinity: None,
            marks,
        }
    }

    pub fn with_log_holder_constant(mut self, c: f64) -> Self {
        self.declared_log_holder_constant = Some(c);
        self
    }

    pub fn with_p_infinity(mut self, p_inf: f64) -> Self {
        self.declared_p_infinity = Some(p_inf);
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> &Eval {
        &self.eval
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn as_constant(&self) -> Option<f64> {
        self.constant
    }

    pub fn declared_log_holder_constant(&self) -> Option<f64> {
        self.declared_log_holder_constant
    }

    pub fn declared_p_infinity(&self) -> Option<f64> {
        self.declared_p_infinity
    }

    pub fn landmarks(&self) -> &Landmarks {
        &self.marks
    }
}

fn sample_extrema(eval: &Eval, domain: Interval, marks: &Landmarks) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let extra = marks
        .breaks
        .iter()
        .copied()
        .filter(|x| *x >= domain.lo() && *x <= domain.hi());
    for x in grid(domain, SAMPLE_GRID).chain(extra) {
        let v = eval(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { x });
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// A weight `w: ℝ → (0, ∞)`, positive away from its landmark points.
#[derive(Clone)]
pub struct WeightField {
    eval: Eval,
    constant: Option<f64>,
    marks: Landmarks,
    locally_integrable: bool,
}

impl fmt::Debug for WeightField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightField")
            .field("constant", &self.constant)
            .field("marks", &self.marks)
            .field("locally_integrable", &self.locally_integrable)
            .finish()
    }
}

impl WeightField {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(
                "constant weight must be finite and > 0",
            ));
        }
        Ok(Self {
            eval: Arc::new(move |_| c),
            constant: Some(c),
            marks: Landmarks::none(),
            locally_integrable: true,
        })
    }

    /// `|x|^β`, locally integrable for `β > -1`. Quadrature near the origin
    /// is tuned for `β ≥ -0.9`; steeper singularities may exhaust the depth.
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta > -1.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter("powerw needs beta > -1"));
        }
        // Anything but a polynomial is non-smooth at the origin.
        let smooth = beta >= 0.0 && beta == math::floor(beta);
        let marks = if !smooth {
            Landmarks {
                singular: vec![0.0],
                ..Landmarks::none()
            }
        } else {
            Landmarks::with_breaks(vec![0.0])
        };
        Ok(Self {
            eval: Arc::new(move |x: f64| math::powf(math::abs(x), beta)),
            constant: if beta == 0.0 { Some(1.0) } else { None },
            marks,
            locally_integrable: true,
        })
    }

    /// `exp(a·|x|)`.
    pub fn exp_abs(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter("expw needs a finite rate"));
        }
        Ok(Self {
            eval: Arc::new(move |x: f64| math::exp(a * math::abs(x))),
            constant: if a == 0.0 { Some(1.0) } else { None },
            marks: Landmarks::with_breaks(vec![0.0]),
            locally_integrable: true,
        })
    }

    /// A general weight; positivity is checked on the sample grid of
    /// `domain`, skipping landmark points where the weight may vanish.
    pub fn new(eval: Eval, marks: Landmarks, domain: Interval) -> Result<Self> {
        let skip = |x: f64| marks.breaks.contains(&x) || marks.singular.contains(&x);
        for x in grid(domain, SAMPLE_GRID) {
            if skip(x) {
                continue;
            }
            let v = eval(x);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(
                    "weight must be positive and finite",
                ));
            }
        }
        Ok(Self {
            eval,
            constant: None,
            marks,
            locally_integrable: false,
        })
    }

    pub fn sum(&self, other: &WeightField) -> WeightField {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        WeightField {
            eval: Arc::new(move |x| a(x) + b(x)),
            constant: self.constant.zip(other.constant).map(|(x, y)| x + y),
            marks: self.marks.merge(&other.marks),
            locally_integrable: self.locally_integrable && other.locally_integrable,
        }
    }

    pub fn product(&self, other: &WeightField) -> WeightField {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        WeightField {
            eval: Arc::new(move |x| a(x) * b(x)),
            constant: self.constant.zip(other.constant).map(|(x, y)| x * y),
            marks: self.marks.merge(&other.marks),
            // Products of locally integrable weights need not be.
            locally_integrable: self.constant.is_some() || other.constant.is_some(),
        }
    }

    /// Confirms `∫_J w < ∞` on every unit cell `J` of `domain`.
    pub fn check_local_integrability(
        mut self,
        domain: Interval,
        quad: &QuadratureSettings,
    ) -> Result<Self> {
        let mut k = math::floor(domain.lo());
        while k < domain.hi() {
            let cell = Interval::new(k.max(domain.lo()), (k + 1.0).min(domain.hi()))?;
            let w = self.eval.clone();
            integrate_region(move |x| w(x), &Region::from(cell), &self.marks, quad)?;
            k += 1.0;
        }
        self.locally_integrable = true;
        Ok(self)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> &Eval {
        &self.eval
    }

    pub fn as_constant(&self) -> Option<f64> {
        self.constant
    }

    pub fn landmarks(&self) -> &Landmarks {
        &self.marks
    }

    pub fn locally_integrable_checked(&self) -> bool {
        self.locally_integrable
    }

    /// `C_K = ∫_K w`.
    pub fn mass(&self, k: Interval, quad: &QuadratureSettings) -> Result<f64> {
        if k.is_degenerate() {
            return Ok(0.0);
        }
        let w = self.eval.clone();
        integrate_region(move |x| w(x), &Region::from(k), &self.marks, quad)
    }
}

/// `r(x) = p(x) / (p(x) - 1)`.
pub fn conjugate_exponent(p: &ExponentField) -> Result<ExponentField> {
    if !(p.p_minus > 1.0) {
        return Err(Error::InvalidParameter("conjugate exponent needs p- > 1"));
    }
    let conj = |v: f64| v / (v - 1.0);
    if let Some(c) = p.constant {
        return ExponentField::constant(conj(c));
    }
    let g = p.eval.clone();
    Ok(ExponentField {
        eval: Arc::new(move |x| {
            let v = g(x);
            v / (v - 1.0)
        }),
        p_minus: conj(p.p_plus),
        p_plus: conj(p.p_minus),
        constant: None,
        declared_log_holder_constant: None,
        declared_p_infinity: p.declared_p_infinity.filter(|v| *v > 1.0).map(conj),
        marks: p.marks.clone(),
    })
}

/// `w*(x) = w(x)^{1 - q(x)}` with `q` conjugate to `p`.
///
/// Fails with [`Error::Overflow`] if the dual weight leaves the floating
/// point range on the sample grid of `domain`.
pub fn dual_weight(w: &WeightField, p: &ExponentField, domain: Interval) -> Result<WeightField> {
    let q = conjugate_exponent(p)?;
    if let (Some(c), Some(qc)) = (w.constant, q.constant) {
        return WeightField::constant(math::powf(c, 1.0 - qc));
    }
    let (we, qe) = (w.eval.clone(), q.eval.clone());
    let eval: Eval = Arc::new(move |x| math::powf(we(x), 1.0 - qe(x)));
    let skip = |x: f64| w.marks.breaks.contains(&x) || w.marks.singular.contains(&x);
    for x in grid(domain, SAMPLE_GRID) {
        if skip(x) {
            continue;
        }
        let v = eval(x);
        if !v.is_finite() || v == 0.0 {
            return Err(Error::Overflow { x });
        }
    }
    // Zeros of w become singularities of w* and vice versa.
    let mut singular = w.marks.breaks.clone();
    singular.extend_from_slice(&w.marks.singular);
    let marks = Landmarks {
        breaks: Vec::new(),
        singular,
        scale: w.marks.scale,
    }
    .merge(&p.marks.flattened());
    Ok(WeightField {
        eval,
        constant: None,
        marks,
        locally_integrable: false,
    })
}

/// Sampled log-Hölder constants of an exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct LogHolderCheck {
    /// `max |p(x) - p(y)| · log(e + 1/|x - y|)` over sampled pairs.
    pub local_constant: f64,
    /// `max |p(x) - p_∞| · log(e + |x|)` over samples.
    pub decay_constant: f64,
    pub p_infinity: f64,
    pub passes: bool,
    /// Set when `p_∞` was not declared and had to be read off a short domain.
    pub missing_p_infinity: bool,
}

/// Domains narrower than this make the fallback `p_∞ = p(domain.hi)` suspect.
const SMALL_DOMAIN: f64 = 32.0;

pub fn check_log_holder(
    p: &ExponentField,
    sample_count: usize,
    domain: Interval,
) -> Result<LogHolderCheck> {
    if sample_count < 2 {
        return Err(Error::InvalidParameter(
            "log-Hölder check needs at least two samples",
        ));
    }
    let xs: Vec<f64> = grid(domain, sample_count).collect();
    let ps: Vec<f64> = xs.iter().map(|&x| p.eval(x)).collect();
    let mut local: f64 = 0.0;
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            let d = math::abs(xs[i] - xs[j]);
            local = local.max(math::abs(ps[i] - ps[j]) * math::ln(math::E + 1.0 / d));
        }
    }
    let (p_inf, missing) = match p.declared_p_infinity {
        Some(v) => (v, false),
        None => (p.eval(domain.hi()), domain.length() < SMALL_DOMAIN),
    };
    let decay = xs
        .iter()
        .zip(&ps)
        .map(|(&x, &v)| math::abs(v - p_inf) * math::ln(math::E + math::abs(x)))
        .fold(0.0, f64::max);
    let mut passes = local.is_finite() && decay.is_finite();
    if let Some(c) = p.declared_log_holder_constant {
        passes &= local <= 1.01 * c && decay <= 1.01 * c;
    }
    Ok(LogHolderCheck {
        local_constant: local,
        decay_constant: decay,
        p_infinity: p_inf,
        passes,
        missing_p_infinity: missing,
    })
}

/// Lower estimate of `‖w‖_{A_{p(.)}}` over a finite family of balls.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightClassEstimate {
    pub constant_estimate: f64,
    pub worst_ball: Interval,
    pub ball_count: usize,
    pub p_b_values: Vec<f64>,
    /// Per-ball value of `|B|^{-p_B} ‖w‖_{L¹(B)} ‖1/w‖_{L^{p'/p}(B)}`.
    pub ball_terms: Vec<f64>,
    /// False when some ball term diverged (quadrature blew up on `1/w`).
    pub finite: bool,
}

/// Evaluates the `A_{p(.)}` functional on every ball and keeps the maximum.
///
/// `p_B = (|B|^{-1} ∫_B 1/p)^{-1}`; the dual factor is the Luxemburg norm of
/// `1/w` with exponent `p'(x)/p(x) = 1/(p(x) - 1)` and unit weight. A ball
/// whose integrals diverge contributes `+∞` and clears `finite`.
pub fn estimate_apx_constant(
    w: &WeightField,
    p: &ExponentField,
    balls: &[Interval],
    quad: &QuadratureSettings,
) -> Result<WeightClassEstimate> {
    if balls.is_empty() {
        return Err(Error::InvalidParameter(
            "A_p estimate needs at least one ball",
        ));
    }
    if !(p.p_minus > 1.0) {
        return Err(Error::InvalidParameter("A_p estimate needs p- > 1"));
    }
    let mut best = f64::NEG_INFINITY;
    let mut worst_ball = balls[0];
    let mut p_b_values = Vec::with_capacity(balls.len());
    let mut ball_terms = Vec::with_capacity(balls.len());
    let mut finite = true;

    let pe = p.eval.clone();
    let dual_exponent = ExponentField::unchecked(
        Arc::new(move |x| 1.0 / (pe(x) - 1.0)),
        1.0 / (p.p_plus - 1.0),
        1.0 / (p.p_minus - 1.0),
        p.marks.clone(),
    );
    let we = w.eval.clone();
    let inv_w = RealFunction::new(move |x| 1.0 / we(x)).with_landmarks(Landmarks {
        breaks: Vec::new(),
        singular: {
            let mut s = w.marks.breaks.clone();
            s.extend_from_slice(&w.marks.singular);
            s
        },
        scale: w.marks.scale,
    });
    let unit = WeightField::constant(1.0)?;

    for ball in balls {
        if ball.is_degenerate() {
            return Err(Error::InvalidInterval {
                lo: ball.lo(),
                hi: ball.hi(),
            });
        }
        let len = ball.length();
        let p_b = match p.constant {
            Some(c) => c,
            None => {
                let pe = p.eval.clone();
                let mean_inv =
                    integrate_region(move |x| 1.0 / pe(x), &Region::from(*ball), &p.marks, quad)?
                        / len;
                1.0 / mean_inv
            }
        };
        p_b_values.push(p_b);
        let term = (|| -> Result<f64> {
            let mass = w.mass(*ball, quad)?;
            let dual = lebesgue::luxemburg_functional(
                &inv_w,
                &dual_exponent,
                &unit,
                &Region::from(*ball),
                quad,
                lebesgue::NORM_TOL,
            )?;
            Ok(math::powf(len, -p_b) * mass * dual)
        })();
        let term = match term {
            Ok(t) if t.is_finite() => t,
            Ok(_)
            | Err(Error::DepthExhausted { .. })
            | Err(Error::NonFiniteSample { .. })
            | Err(Error::NoBracket) => {
                finite = false;
                f64::INFINITY
            }
            Err(e) => return Err(e),
        };
        ball_terms.push(term);
        if term > best {
            best = term;
            worst_ball = *ball;
        }
    }
    Ok(WeightClassEstimate {
        constant_estimate: best,
        worst_ball,
        ball_count: balls.len(),
        p_b_values,
        ball_terms,
        finite,
    })
}

/// Dyadic balls `B(c, 2^j)` centred at the integers of `[-center_range, center_range]`.
pub fn dyadic_balls(
    center_range: i32,
    radius_exponents: core::ops::RangeInclusive<i32>,
) -> Vec<Interval> {
    let mut balls = Vec::new();
    for c in -center_range..=center_range {
        for j in radius_exponents.clone() {
            let r = math::powi(2.0, j);
            balls.push(Interval::new(c as f64 - r, c as f64 + r).expect("positive radius"));
        }
    }
    balls
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain() -> Interval {
        Interval::symmetric(64.0).unwrap()
    }

    #[test]
    fn conjugates() {
        let r = conjugate_exponent(&ExponentField::constant(2.0).unwrap()).unwrap();
        assert_eq!(r.as_constant(), Some(2.0));
        let r = conjugate_exponent(&ExponentField::constant(3.0).unwrap()).unwrap();
        assert_eq!(r.as_constant(), Some(1.5));
        let p = ExponentField::log_holder(2.0, 1.0, domain()).unwrap();
        let r = conjugate_exponent(&p).unwrap();
        assert!((r.eval(0.0) - 1.5).abs() < 1e-15);
        assert!(conjugate_exponent(&ExponentField::constant(1.0).unwrap()).is_err());
    }

    #[test]
    fn dual_weight_formulas() {
        let w = WeightField::power(0.5).unwrap();
        let d = dual_weight(&w, &ExponentField::constant(2.0).unwrap(), domain()).unwrap();
        for &x in &[0.3, 2.0, -5.0] {
            assert!((d.eval(x) - math::powf(math::abs(x), -0.5)).abs() < 1e-14);
        }
        let w = WeightField::exp_abs(1.0).unwrap();
        let d = dual_weight(&w, &ExponentField::constant(3.0).unwrap(), domain()).unwrap();
        for &x in &[0.3, 2.0, -5.0] {
            assert!((d.eval(x) - math::exp(-math::abs(x) / 2.0)).abs() < 1e-14);
        }
        let one = WeightField::constant(1.0).unwrap();
        let d = dual_weight(
            &one,
            &ExponentField::log_holder(2.0, 1.0, domain()).unwrap(),
            domain(),
        )
        .unwrap();
        assert_eq!(d.eval(4.0), 1.0);
    }

    #[test]
    fn dual_weight_overflow() {
        let w = WeightField::exp_abs(30.0).unwrap();
        let err = dual_weight(&w, &ExponentField::constant(1.01).unwrap(), domain()).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
    }

    #[test]
    fn loghold_bounds() {
        let p = ExponentField::log_holder(2.0, 1.0, domain()).unwrap();
        assert_eq!(p.p_minus(), 2.0);
        assert_eq!(p.p_plus(), 3.0);
        assert_eq!(p.eval(0.0), 3.0);
    }

    #[test]
    fn exponent_below_one_is_rejected() {
        assert!(ExponentField::constant(0.5).is_err());
        let f = RealFunction::poly(vec![0.5, 0.0]).unwrap();
        assert!(
            ExponentField::sampled(f.evaluator().clone(), domain(), Landmarks::none()).is_err()
        );
    }

    #[test]
    fn weight_positivity() {
        let bad: Eval = Arc::new(|x: f64| x);
        assert!(WeightField::new(bad, Landmarks::none(), domain()).is_err());
        assert!(WeightField::power(-1.0).is_err());
        assert!(WeightField::constant(0.0).is_err());
    }
}
