//! Seeded property suites behind `verify`.
//!
//! Each suite draws its scenarios from its own ChaCha stream of the seed, so
//! a suite's scenarios do not depend on which other suites run. Parameters
//! are drawn uniformly from these ranges:
//!
//! | quantity | draw |
//! |---|---|
//! | `gauss(mu,sigma)` | `mu ∈ [-3,3]`, `sigma ∈ [0.3,2]` |
//! | `bump(c,r)` | `c ∈ [-3,3]`, `r ∈ [0.3,2.5]` |
//! | `chi(a,b)` | `a ∈ [-3,3]`, `b - a ∈ [0.2,3]` |
//! | amplitude | `|c| ∈ [0.2,3]`, random sign |
//! | `const(p)` | `p ∈ [1.1,4]` |
//! | `loghold(pinf,a)` | `pinf ∈ [1.2,3]`, `a ∈ [0,1.5]` |
//! | `clip(1.5+h·gauss,1.2,3.5)` | `h ∈ [-1,1.5]` |
//! | `const(c)` weight | `c ∈ [0.2,5]` |
//! | `powerw(beta)` | `beta ∈ (-0.9,0.9)` |
//! | `expw(a)` | `a ∈ [-0.3,0.3]` |
//! | `powerw(beta)`, Hölder suites | additionally `beta < 0.75·(p⁻ - 1)` |
//! | smooth functions | `bump(c,r)`, `c ∈ [-2,2]`, `r ∈ [4,6]`, amplitude `[0.5,1]`, times `1 + sin(ωx)/2` half the time, `ω ∈ [0.2,1]` |
//! | amalgam `q` | `q ∈ [1,6]`, or `inf` with probability 1/8 |

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use varnorm_core::amalgam::{AmalgamSpace, GlobalExponent};
use varnorm_core::lebesgue::{LebesgueSpace, DEFAULT_TRUNCATION};
use varnorm_core::operators::{averaged, maximal, mollified, mollify, RadiusGrid};
use varnorm_core::spaces::{ExponentField, WeightField};
use varnorm_core::{Interval, RealFunction};

use crate::error::CliError;
use crate::exec::Parallel;
use crate::expr::{ExponentExpr, FnExpr, WeightExpr};

pub const SUITES: &[&str] = &[
    "unit_ball",
    "sandwich",
    "holder",
    "amalgam_holder",
    "support_bound",
    "closed_form",
    "domination",
    "convergence",
];

/// Scenario counts and tolerances.
pub const NORM_SCENARIOS: usize = 200;
pub const HOLDER_SCENARIOS: usize = 100;
pub const SUPPORT_SCENARIOS: usize = 100;
pub const UNIT_BALL_TOL: f64 = 1e-6;
pub const HOMOGENEITY_TOL: f64 = 1e-7;
pub const SANDWICH_TOL: f64 = 1e-6;
pub const CLOSED_FORM_TOL: f64 = 1e-6;
pub const DOMINATION_TOL: f64 = 1e-6;
pub const DOMINATION_FUNCTIONS: usize = 20;
pub const DOMINATION_POINTS: usize = 256;
pub const DOMINATION_EPSILONS: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];
pub const CONVERGENCE_FUNCTIONS: usize = 10;
pub const CONVERGENCE_LADDER: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];
/// Functions kept in a report's failure list.
const MAX_LISTED: usize = 8;

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub scenarios: usize,
    pub violations: usize,
    /// Largest observed error in the suite's own measure; 0 when exact.
    pub max_error: f64,
    pub details: Value,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scenarios": self.scenarios,
            "violations": self.violations,
            "max_error": self.max_error,
            "passed": self.passed(),
            "details": self.details,
            "failures": self.failures,
        })
    }
}

/// `threshold` is the convergence suite's pass level (the ladder threshold).
pub fn run_suite(
    name: &str,
    seed: u64,
    threshold: f64,
    exec: &Parallel,
) -> Result<SuiteResult, CliError> {
    let stream = SUITES.iter().position(|s| *s == name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown suite {name:?}; known: all, {}",
            SUITES.join(", ")
        ))
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    match name {
        "unit_ball" => unit_ball(&mut rng, exec),
        "sandwich" => sandwich(&mut rng, exec),
        "holder" => holder(&mut rng, exec),
        "amalgam_holder" => amalgam_holder(&mut rng, exec),
        "support_bound" => support_bound(&mut rng, exec),
        "closed_form" => closed_form(exec),
        "domination" => domination(&mut rng, exec),
        _ => convergence(&mut rng, threshold, exec),
    }
}

/// Suite names selected by `--suite`.
pub fn selection(name: &str) -> Result<Vec<&'static str>, CliError> {
    if name == "all" {
        return Ok(SUITES.to_vec());
    }
    SUITES
        .iter()
        .find(|s| **s == name)
        .map(|s| vec![*s])
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown suite {name:?}; known: all, {}",
                SUITES.join(", ")
            ))
        })
}

fn domain() -> Interval {
    Interval::symmetric(DEFAULT_TRUNCATION).expect("finite")
}

fn amplitude(rng: &mut ChaCha8Rng) -> f64 {
    let c = rng.gen_range(0.2..3.0);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

fn gauss(rng: &mut ChaCha8Rng) -> FnExpr {
    FnExpr::Gauss(rng.gen_range(-3.0..3.0), rng.gen_range(0.3..2.0))
}

fn bump(rng: &mut ChaCha8Rng) -> FnExpr {
    FnExpr::Bump(rng.gen_range(-3.0..3.0), rng.gen_range(0.3..2.5))
}

fn chi(rng: &mut ChaCha8Rng) -> FnExpr {
    let a = rng.gen_range(-3.0..3.0);
    FnExpr::Chi(a, a + rng.gen_range(0.2..3.0))
}

fn scaled(rng: &mut ChaCha8Rng, f: FnExpr) -> FnExpr {
    FnExpr::Scale(Box::new(f), amplitude(rng))
}

/// A compactly supported function: a scaled bump or indicator, or a sum of
/// two.
fn compact_fn(rng: &mut ChaCha8Rng) -> FnExpr {
    let one = |rng: &mut ChaCha8Rng| {
        let f = if rng.gen_bool(0.5) {
            bump(rng)
        } else {
            chi(rng)
        };
        scaled(rng, f)
    };
    if rng.gen_range(0..4) == 0 {
        FnExpr::Sum(Box::new(one(rng)), Box::new(one(rng)))
    } else {
        one(rng)
    }
}

fn any_fn(rng: &mut ChaCha8Rng) -> FnExpr {
    let one = |rng: &mut ChaCha8Rng| {
        let f = match rng.gen_range(0..3) {
            0 => gauss(rng),
            1 => bump(rng),
            _ => chi(rng),
        };
        scaled(rng, f)
    };
    if rng.gen_range(0..4) == 0 {
        FnExpr::Sum(Box::new(one(rng)), Box::new(one(rng)))
    } else {
        one(rng)
    }
}

fn exponent(rng: &mut ChaCha8Rng) -> ExponentExpr {
    match rng.gen_range(0..3) {
        0 => ExponentExpr::Const(rng.gen_range(1.1..4.0)),
        1 => ExponentExpr::LogHold(rng.gen_range(1.2..3.0), rng.gen_range(0.0..1.5)),
        _ => {
            let bumpy = FnExpr::Scale(Box::new(gauss(rng)), rng.gen_range(-1.0..1.5));
            ExponentExpr::Clip(
                FnExpr::Sum(Box::new(FnExpr::Poly(vec![1.5])), Box::new(bumpy)),
                1.2,
                3.5,
            )
        }
    }
}

fn weight(rng: &mut ChaCha8Rng) -> WeightExpr {
    match rng.gen_range(0..4) {
        0 => WeightExpr::Const(rng.gen_range(0.2..5.0)),
        1 => WeightExpr::Power(rng.gen_range(-0.9..0.9)),
        2 => WeightExpr::Exp(rng.gen_range(-0.3..0.3)),
        _ => WeightExpr::Prod(
            Box::new(WeightExpr::Const(rng.gen_range(0.2..5.0))),
            Box::new(WeightExpr::Power(rng.gen_range(-0.9..0.9))),
        ),
    }
}

fn global_q(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_range(0..8) == 0 {
        f64::INFINITY
    } else {
        rng.gen_range(1.0..6.0)
    }
}

/// A drawn `(f, g, p, w)` scenario with its text form.
struct Draw {
    f: FnExpr,
    g: FnExpr,
    p: ExponentExpr,
    w: WeightExpr,
    c: f64,
    q: f64,
}

/// The lower bound `p⁻` an exponent expression guarantees.
fn exponent_floor(p: &ExponentExpr) -> f64 {
    match p {
        ExponentExpr::Const(p) => *p,
        ExponentExpr::LogHold(p, a) => p.min(p + a),
        ExponentExpr::Clip(_, lo, _) => *lo,
    }
}

/// Caps positive powers so that the dual weight `|x|^{-beta(p'-1)}` stays
/// integrable at the origin.
fn dual_safe(w: WeightExpr, p_floor: f64) -> WeightExpr {
    let cap = 0.75 * (p_floor - 1.0);
    match w {
        WeightExpr::Power(b) if b > cap => WeightExpr::Power(b * cap / 0.9),
        WeightExpr::Prod(a, b) => WeightExpr::Prod(
            Box::new(dual_safe(*a, p_floor)),
            Box::new(dual_safe(*b, p_floor)),
        ),
        w => w,
    }
}

impl Draw {
    fn new(rng: &mut ChaCha8Rng, compact: bool) -> Self {
        let (f, g) = if compact {
            (compact_fn(rng), compact_fn(rng))
        } else {
            (any_fn(rng), any_fn(rng))
        };
        Draw {
            f,
            g,
            p: exponent(rng),
            w: weight(rng),
            c: amplitude(rng) * rng.gen_range(0.5..2.0),
            q: global_q(rng),
        }
    }

    /// A draw whose dual space is nondegenerate.
    fn dual(rng: &mut ChaCha8Rng) -> Self {
        let d = Self::new(rng, false);
        let floor = exponent_floor(&d.p);
        Draw {
            w: dual_safe(d.w, floor),
            ..d
        }
    }

    fn label(&self) -> String {
        format!(
            "f={} g={} p={} w={} c={} q={}",
            self.f, self.g, self.p, self.w, self.c, self.q
        )
    }

    fn space(&self) -> varnorm_core::Result<LebesgueSpace> {
        Ok(LebesgueSpace::new(self.p.build(domain())?, self.w.build()?))
    }
}

/// Evaluates `check` on every draw; `check` returns the error measure and
/// whether it is within tolerance.
fn run_draws<F>(name: &'static str, draws: Vec<Draw>, exec: &Parallel, check: F) -> SuiteResult
where
    F: Fn(&Draw) -> varnorm_core::Result<(f64, bool)> + Sync,
{
    let outcomes = exec.map(draws.len(), |i| check(&draws[i]));
    let mut r = SuiteResult {
        name,
        scenarios: draws.len(),
        violations: 0,
        max_error: 0.0,
        details: Value::Null,
        failures: Vec::new(),
    };
    for (d, o) in draws.iter().zip(outcomes) {
        let failure = match o {
            Ok((e, ok)) => {
                r.max_error = r.max_error.max(e);
                (!ok).then(|| format!("{} (error {e})", d.label()))
            }
            Err(err) => Some(format!("{} ({err})", d.label())),
        };
        if let Some(msg) = failure {
            r.violations += 1;
            if r.failures.len() < MAX_LISTED {
                r.failures.push(msg);
            }
        }
    }
    r
}

fn draws(rng: &mut ChaCha8Rng, n: usize, compact: bool) -> Vec<Draw> {
    (0..n).map(|_| Draw::new(rng, compact)).collect()
}

/// `|ϱ(f/‖f‖) - 1| ≤ 1e-6` and `‖cf‖ = |c|‖f‖` within `1e-7` relative; the
/// error is the larger of the two normalized deviations.
fn unit_ball(rng: &mut ChaCha8Rng, exec: &Parallel) -> Result<SuiteResult, CliError> {
    let d = draws(rng, NORM_SCENARIOS, false);
    Ok(run_draws("unit_ball", d, exec, |d| {
        let sp = d.space()?;
        let f = d.f.build()?;
        let n = sp.norm(&f)?;
        let unit = (sp.modular_scaled(&f, n)? - 1.0).abs();
        let scaled = sp.norm(&f.scale(d.c))?;
        let homog = (scaled - d.c.abs() * n).abs() / (d.c.abs() * n);
        let e = (unit / UNIT_BALL_TOL).max(homog / HOMOGENEITY_TOL);
        Ok((e, e <= 1.0))
    }))
}

/// `min(ϱ^{1/p⁻}, ϱ^{1/p⁺}) ≤ ‖f‖ ≤ max(…)` and
/// `min(‖f‖^{p⁻}, ‖f‖^{p⁺}) ≤ ϱ ≤ max(…)`, relative slack `1e-6`; the error
/// is the worst relative excess.
fn sandwich(rng: &mut ChaCha8Rng, exec: &Parallel) -> Result<SuiteResult, CliError> {
    let d = draws(rng, NORM_SCENARIOS, false);
    Ok(run_draws("sandwich", d, exec, |d| {
        let sp = d.space()?;
        let f = d.f.build()?;
        let (pm, pp) = (sp.exponent().p_minus(), sp.exponent().p_plus());
        let rho = sp.modular(&f)?;
        let n = sp.norm(&f)?;
        let excess = |x: f64, lo: f64, hi: f64| ((lo - x) / lo).max((x - hi) / hi).max(0.0);
        let (a, b) = (rho.powf(1.0 / pm), rho.powf(1.0 / pp));
        let (c, e) = (n.powf(pm), n.powf(pp));
        let worst = excess(n, a.min(b), a.max(b)).max(excess(rho, c.min(e), c.max(e)));
        Ok((worst, worst <= SANDWICH_TOL))
    }))
}

/// `∫|fg| ≤ 2‖f‖_{p,w}‖g‖_{p',w*}`; the error is `lhs / rhs`.
fn holder(rng: &mut ChaCha8Rng, exec: &Parallel) -> Result<SuiteResult, CliError> {
    let d = (0..HOLDER_SCENARIOS).map(|_| Draw::dual(rng)).collect();
    Ok(run_draws("holder", d, exec, |d| {
        let h = d.space()?.holder_pairing(&d.f.build()?, &d.g.build()?)?;
        Ok((h.lhs / h.rhs_bound, h.holds))
    }))
}

/// `‖fg‖_{(L¹,ℓ¹)} ≤ 2‖f‖_{(L,ℓ^q)}‖g‖_{(L*,ℓ^{q'})}`; the error is `lhs / rhs`.
fn amalgam_holder(rng: &mut ChaCha8Rng, exec: &Parallel) -> Result<SuiteResult, CliError> {
    let d = (0..HOLDER_SCENARIOS).map(|_| Draw::dual(rng)).collect();
    Ok(run_draws("amalgam_holder", d, exec, |d| {
        let am = AmalgamSpace::new(d.space()?, GlobalExponent::new(d.q)?);
        let h = am.holder(&d.f.build()?, &d.g.build()?)?;
        Ok((h.lhs / h.rhs_bound, h.holds))
    }))
}

/// `‖g‖_{(L,ℓ^q)} ≤ |S(K)|^{1/q}‖g‖` on compactly supported draws plus the
/// analytic case `χ_{[0,2)}`, `q = 2`; the error is `lhs / rhs`.
fn support_bound(rng: &mut ChaCha8Rng, exec: &Parallel) -> Result<SuiteResult, CliError> {
    let d = draws(rng, SUPPORT_SCENARIOS, true);
    let mut r = run_draws("support_bound", d, exec, |d| {
        let am = AmalgamSpace::new(d.space()?, GlobalExponent::new(d.q)?);
        let s = am.support_bound_check(&d.f.build()?)?;
        Ok((s.lhs / s.rhs, s.holds))
    });
    let l2 = LebesgueSpace::new(ExponentField::constant(2.0)?, WeightField::constant(1.0)?);
    let am = AmalgamSpace::new(l2, GlobalExponent::new(2.0)?);
    let s = am.support_bound_check(&RealFunction::indicator(0.0, 2.0)?)?;
    r.scenarios += 1;
    r.max_error = r.max_error.max(s.lhs / s.rhs);
    if !s.holds {
        r.violations += 1;
        r.failures
            .push(format!("chi(0,2) q=2: {} > {}", s.lhs, s.rhs));
    }
    r.details = json!({ "analytic": { "function": "chi(0,2)", "q": 2, "lhs": s.lhs, "rhs": s.rhs, "cells": s.cells } });
    Ok(r)
}

/// Closed-form `L²` norms; the error is the largest absolute deviation.
fn closed_form(exec: &Parallel) -> Result<SuiteResult, CliError> {
    use std::f64::consts::PI;
    let cases: Vec<(FnExpr, f64)> = vec![
        (FnExpr::Chi(0.0, 1.0), 1.0),
        (FnExpr::Gauss(0.0, 1.0), (PI / 2.0).powf(0.25)),
        (FnExpr::Chi(-2.0, 2.0), 2.0),
        (
            FnExpr::Scale(Box::new(FnExpr::Chi(-1.0, 1.0)), 3.0),
            3.0 * 2f64.sqrt(),
        ),
        (FnExpr::Gauss(1.5, 2.0), (4.0 * PI / 2.0).powf(0.25)),
        (
            FnExpr::Translate(Box::new(FnExpr::Gauss(0.0, 0.5)), -3.0),
            (0.25 * PI / 2.0).powf(0.25),
        ),
    ];
    let l2 = LebesgueSpace::new(ExponentField::constant(2.0)?, WeightField::constant(1.0)?);
    let values = exec.map(cases.len(), |i| -> varnorm_core::Result<f64> {
        l2.norm(&cases[i].0.build()?)
    });
    let mut r = SuiteResult {
        name: "closed_form",
        scenarios: cases.len(),
        violations: 0,
        max_error: 0.0,
        details: Value::Null,
        failures: Vec::new(),
    };
    let mut rows = Vec::new();
    for ((e, exact), v) in cases.iter().zip(values) {
        let v = v?;
        let err = (v - exact).abs();
        r.max_error = r.max_error.max(err);
        if err > CLOSED_FORM_TOL {
            r.violations += 1;
            r.failures.push(format!("{e}: {v} vs {exact}"));
        }
        rows.push(json!({ "function": e.to_string(), "norm": v, "exact": exact }));
    }
    r.details = json!({ "cases": rows });
    Ok(r)
}

/// `|φ_ε ∗ f(x)| ≤ Mf(x) + 1e-6` on a 256-point grid of `[-4, 4]` for four
/// `ε`; the error is the largest excess `|φ_ε ∗ f| - Mf`.
fn domination(rng: &mut ChaCha8Rng, exec: &Parallel) -> Result<SuiteResult, CliError> {
    let fns: Vec<FnExpr> = (0..DOMINATION_FUNCTIONS).map(|_| any_fn(rng)).collect();
    let grid = RadiusGrid::for_truncation(8.0)?.with_radii(&DOMINATION_EPSILONS)?;
    let xs: Vec<f64> = (0..DOMINATION_POINTS)
        .map(|i| -4.0 + 8.0 * (i as f64 + 0.5) / DOMINATION_POINTS as f64)
        .collect();
    let built = fns
        .iter()
        .map(FnExpr::build)
        .collect::<varnorm_core::Result<Vec<_>>>()?;
    let jobs = built.len() * xs.len();
    let excess = exec.map(jobs, |j| -> varnorm_core::Result<f64> {
        let (f, x) = (&built[j / xs.len()], xs[j % xs.len()]);
        let m = maximal(f, x, &grid)?;
        let mut worst = f64::NEG_INFINITY;
        for &e in &DOMINATION_EPSILONS {
            worst = worst.max(mollify(f, e, x)?.abs() - m);
        }
        Ok(worst)
    });
    let mut r = SuiteResult {
        name: "domination",
        scenarios: jobs * DOMINATION_EPSILONS.len(),
        violations: 0,
        max_error: 0.0,
        details: json!({ "functions": fns.iter().map(|f| f.to_string()).collect::<Vec<_>>() }),
        failures: Vec::new(),
    };
    for (j, e) in excess.into_iter().enumerate() {
        let label = || format!("{} at x={}", fns[j / xs.len()], xs[j % xs.len()]);
        match e {
            Ok(e) => {
                r.max_error = r.max_error.max(e);
                if e > DOMINATION_TOL {
                    r.violations += 1;
                    if r.failures.len() < MAX_LISTED {
                        r.failures.push(format!("{} (excess {e})", label()));
                    }
                }
            }
            Err(err) => {
                r.violations += 1;
                if r.failures.len() < MAX_LISTED {
                    r.failures.push(format!("{} ({err})", label()));
                }
            }
        }
    }
    Ok(r)
}

/// A smooth compactly supported function: a wide bump, possibly modulated.
fn smooth_fn(rng: &mut ChaCha8Rng) -> FnExpr {
    let b = FnExpr::Bump(rng.gen_range(-2.0..2.0), rng.gen_range(4.0..6.0));
    let b = FnExpr::Scale(Box::new(b), rng.gen_range(0.5..1.0));
    if rng.gen_bool(0.5) {
        let wave = FnExpr::Sum(
            Box::new(FnExpr::Poly(vec![1.0])),
            Box::new(FnExpr::Scale(
                Box::new(FnExpr::Sinw(rng.gen_range(0.2..1.0))),
                0.5,
            )),
        );
        FnExpr::Prod(Box::new(b), Box::new(wave))
    } else {
        b
    }
}

/// `ε ↦ ‖A_ε f - f‖` for the mollifier and the ball average, in `L_w^{p(.)}`
/// and the amalgam over it: strictly decreasing along the ladder and below
/// `threshold` at its end. The error is the largest finest-level value.
fn convergence(
    rng: &mut ChaCha8Rng,
    threshold: f64,
    exec: &Parallel,
) -> Result<SuiteResult, CliError> {
    struct Smooth {
        f: FnExpr,
        p: ExponentExpr,
        w: WeightExpr,
        q: f64,
    }
    let cases: Vec<Smooth> = (0..CONVERGENCE_FUNCTIONS)
        .map(|_| Smooth {
            f: smooth_fn(rng),
            p: if rng.gen_bool(0.5) {
                ExponentExpr::Const(rng.gen_range(1.1..4.0))
            } else {
                ExponentExpr::LogHold(rng.gen_range(1.2..3.0), rng.gen_range(0.0..1.5))
            },
            w: if rng.gen_bool(0.5) {
                WeightExpr::Const(rng.gen_range(0.2..5.0))
            } else {
                WeightExpr::Exp(rng.gen_range(-0.3..0.3))
            },
            q: rng.gen_range(1.0..6.0),
        })
        .collect();
    let steps = CONVERGENCE_LADDER.len();
    // One job per (case, operator, ladder step); both norms per job.
    let jobs = cases.len() * 2 * steps;
    let values = exec.map(jobs, |j| -> varnorm_core::Result<(f64, f64)> {
        let c = &cases[j / (2 * steps)];
        let average = (j / steps) % 2 == 1;
        let t = CONVERGENCE_LADDER[j % steps];
        let f = c.f.build()?;
        let sp = LebesgueSpace::new(c.p.build(domain())?, c.w.build()?);
        let am = AmalgamSpace::new(sp.clone(), GlobalExponent::new(c.q)?);
        let g = if average {
            averaged(&f, t)?
        } else {
            mollified(&f, t)?
        };
        let d = g.sub(&f);
        Ok((sp.norm(&d)?, am.norm(&d)?))
    });
    let mut r = SuiteResult {
        name: "convergence",
        scenarios: cases.len() * 4,
        violations: 0,
        max_error: 0.0,
        details: Value::Null,
        failures: Vec::new(),
    };
    let mut rows = Vec::new();
    for (ci, c) in cases.iter().enumerate() {
        for (oi, op) in ["mollifier", "average"].iter().enumerate() {
            let base = (ci * 2 + oi) * steps;
            let mut curves: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
            let mut error = None;
            for v in &values[base..base + steps] {
                match v {
                    Ok((l, a)) => {
                        curves[0].push(*l);
                        curves[1].push(*a);
                    }
                    Err(e) => error = Some(e.to_string()),
                }
            }
            for (ni, norm) in ["lebesgue", "amalgam"].iter().enumerate() {
                let curve = &curves[ni];
                let label = format!("{} p={} w={} q={} {op} {norm}", c.f, c.p, c.w, c.q);
                let problem = match &error {
                    Some(e) => Some(e.clone()),
                    None => {
                        let last = curve[steps - 1];
                        r.max_error = r.max_error.max(last);
                        let decreasing = curve.windows(2).all(|w| w[1] < w[0]);
                        if !decreasing {
                            Some(format!("not strictly decreasing: {curve:?}"))
                        } else if !(last < threshold) {
                            Some(format!("finest value {last} not below {threshold}"))
                        } else {
                            None
                        }
                    }
                };
                if let Some(msg) = problem {
                    r.violations += 1;
                    if r.failures.len() < MAX_LISTED {
                        r.failures.push(format!("{label}: {msg}"));
                    }
                }
                rows.push(json!({ "case": label, "ladder": CONVERGENCE_LADDER, "values": curve }));
            }
        }
    }
    r.details = json!({ "threshold": threshold, "curves": rows });
    Ok(r)
}

/// Runs the selected suites in order.
pub fn verify(
    name: &str,
    seed: u64,
    threshold: f64,
    exec: &Parallel,
) -> Result<Vec<SuiteResult>, CliError> {
    selection(name)?
        .into_iter()
        .map(|s| run_suite(s, seed, threshold, exec))
        .collect()
}
