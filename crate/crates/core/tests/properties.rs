//! Randomized invariants over functions, exponents and weights.

use proptest::prelude::*;
use std::sync::Arc;

use varnorm_core::amalgam::{AmalgamSpace, GlobalExponent};
use varnorm_core::lebesgue::LebesgueSpace;
use varnorm_core::numerics::{greedy_net, integrate, Landmarks};
use varnorm_core::operators::{maximal, mollify, RadiusGrid};
use varnorm_core::sequence::{seq_modular, seq_norm, seq_tail, WeightedSequence};
use varnorm_core::sobolev::SobolevSpace;
use varnorm_core::spaces::{
    conjugate_exponent, dual_weight, estimate_apx_constant, ExponentField, WeightField,
};
use varnorm_core::{Interval, QuadratureSettings, RealFunction};

fn window() -> Interval {
    Interval::symmetric(64.0).unwrap()
}

#[derive(Clone, Debug)]
enum FnSpec {
    Gauss(f64, f64, f64),
    Bump(f64, f64, f64),
    Chi(f64, f64, f64),
}

impl FnSpec {
    fn build(&self) -> RealFunction {
        match *self {
            FnSpec::Gauss(mu, s, c) => RealFunction::gauss(mu, s).unwrap().scale(c),
            FnSpec::Bump(m, r, c) => RealFunction::bump(m, r).unwrap().scale(c),
            FnSpec::Chi(a, len, c) => RealFunction::indicator(a, a + len).unwrap().scale(c),
        }
    }

    fn support(&self) -> Option<Interval> {
        self.build().support()
    }
}

fn fn_spec() -> impl Strategy<Value = FnSpec> {
    prop_oneof![
        (-3.0..3.0f64, 0.3..2.0f64, -3.0..3.0f64).prop_map(|(a, b, c)| FnSpec::Gauss(a, b, c)),
        (-3.0..3.0f64, 0.3..2.5f64, -3.0..3.0f64).prop_map(|(a, b, c)| FnSpec::Bump(a, b, c)),
        (-3.0..3.0f64, 0.2..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c)| FnSpec::Chi(a, b, c)),
    ]
}

#[derive(Clone, Debug)]
enum ExpSpec {
    Const(f64),
    LogHolder(f64, f64),
}

impl ExpSpec {
    fn build(&self) -> ExponentField {
        match *self {
            ExpSpec::Const(p) => ExponentField::constant(p).unwrap(),
            ExpSpec::LogHolder(p, a) => ExponentField::log_holder(p, a, window()).unwrap(),
        }
    }
}

fn exp_spec() -> impl Strategy<Value = ExpSpec> {
    prop_oneof![
        (1.1..4.0f64).prop_map(ExpSpec::Const),
        (1.2..3.0f64, 0.0..1.5f64).prop_map(|(p, a)| ExpSpec::LogHolder(p, a)),
    ]
}

#[derive(Clone, Debug)]
enum WeightSpec {
    Const(f64),
    Power(f64),
    Exp(f64),
}

impl WeightSpec {
    fn build(&self) -> WeightField {
        match *self {
            WeightSpec::Const(c) => WeightField::constant(c).unwrap(),
            WeightSpec::Power(b) => WeightField::power(b).unwrap(),
            WeightSpec::Exp(a) => WeightField::exp_abs(a).unwrap(),
        }
    }
}

fn weight_spec() -> impl Strategy<Value = WeightSpec> {
    prop_oneof![
        (0.2..5.0f64).prop_map(WeightSpec::Const),
        (-0.9..0.9f64).prop_map(WeightSpec::Power),
        (-0.3..0.3f64).prop_map(WeightSpec::Exp),
    ]
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn norm_modular_relations(f in fn_spec(), p in exp_spec(), w in weight_spec()) {
        let sp = LebesgueSpace::new(p.build(), w.build());
        let f = f.build();
        let (pm, pp) = (sp.exponent().p_minus(), sp.exponent().p_plus());
        let rho = sp.modular(&f).unwrap();
        let n = sp.norm(&f).unwrap();
        prop_assume!(n > 1e-6);
        let unit = sp.modular_scaled(&f, n).unwrap();
        prop_assert!((unit - 1.0).abs() <= 1e-6, "unit ball {unit}");
        let lo = rho.powf(1.0 / pm).min(rho.powf(1.0 / pp));
        let hi = rho.powf(1.0 / pm).max(rho.powf(1.0 / pp));
        prop_assert!(n >= lo * (1.0 - 1e-6) && n <= hi * (1.0 + 1e-6));
        let mlo = n.powf(pp).min(n.powf(pm));
        let mhi = n.powf(pp).max(n.powf(pm));
        prop_assert!(rho >= mlo * (1.0 - 1e-6) && rho <= mhi * (1.0 + 1e-6));
    }

    #[test]
    fn homogeneity_and_triangle(f in fn_spec(), g in fn_spec(), p in exp_spec(), c in -4.0..4.0f64) {
        let sp = LebesgueSpace::new(p.build(), WeightField::constant(1.0).unwrap());
        let (f, g) = (f.build(), g.build());
        let nf = sp.norm(&f).unwrap();
        let ncf = sp.norm(&f.scale(c)).unwrap();
        prop_assert!((ncf - c.abs() * nf).abs() <= 1e-7 * (c.abs() * nf).max(1e-12));
        let ng = sp.norm(&g).unwrap();
        prop_assert!(sp.norm(&f.add(&g)).unwrap() <= nf + ng + 1e-9);
    }

    #[test]
    fn weighted_embedding(f in fn_spec(), p in exp_spec(), c0 in 0.05..1.0f64) {
        let e = p.build();
        let pp = e.p_plus();
        let unit = LebesgueSpace::new(e.clone(), WeightField::constant(1.0).unwrap());
        let heavy = LebesgueSpace::new(
            e,
            WeightField::new(Arc::new(move |x: f64| c0 + x * x), Landmarks::none(), window()).unwrap(),
        );
        let f = f.build();
        prop_assert!(c0.powf(1.0 / pp) * unit.norm(&f).unwrap() <= heavy.norm(&f).unwrap() + 1e-9);
    }

    #[test]
    fn weighted_holder(f in fn_spec(), g in fn_spec(), p in 1.2..4.0f64, w in weight_spec()) {
        // Keep the dual weight |x|^{-beta/(p-1)} locally integrable.
        let w = match w {
            WeightSpec::Power(b) if b > 0.0 => WeightSpec::Power(b * (p - 1.0).min(1.0)),
            w => w,
        };
        let sp = LebesgueSpace::new(ExponentField::constant(p).unwrap(), w.build());
        let h = sp.holder_pairing(&f.build(), &g.build()).unwrap();
        prop_assert!(h.holds, "{h:?}");
    }

    #[test]
    fn local_seminorms_increase(f in fn_spec(), a in -6.0..0.0f64, len in 0.5..10.0f64) {
        let sp = LebesgueSpace::new(ExponentField::constant(2.0).unwrap(), WeightField::constant(1.0).unwrap());
        let omega = Interval::new(a, a + len).unwrap();
        let s = sp.local_seminorms(&f.build(), omega, 8).unwrap();
        prop_assert!(s.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{s:?}");
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn integral_is_additive(a in -5.0..0.0f64, m in 0.1..3.0f64, n in 0.1..3.0f64, k in 0.5..4.0f64) {
        let s = QuadratureSettings::default();
        let f = |x: f64| (k * x).sin() + x * x;
        let (b, c) = (a + m, a + m + n);
        let whole = integrate(f, Interval::new(a, c).unwrap(), &s).unwrap();
        let left = integrate(f, Interval::new(a, b).unwrap(), &s).unwrap();
        let right = integrate(f, Interval::new(b, c).unwrap(), &s).unwrap();
        prop_assert!((whole - left - right).abs() <= 3.0 * s.abs_tol + 1e-9 * whole.abs());
    }

    #[test]
    fn greedy_net_covers_and_separates(xs in prop::collection::vec(-10.0..10.0f64, 1..40), eps in 0.1..5.0f64) {
        let pts: Vec<usize> = (0..xs.len()).collect();
        let d = |i: usize, j: usize| Ok::<_, ()>((xs[i] - xs[j]).abs());
        let net = greedy_net(&pts, d, eps).unwrap();
        for (i, c) in net.cover_map.iter().enumerate() {
            prop_assert!(net.centers.contains(c));
            prop_assert!(i == *c || (xs[i] - xs[*c]).abs() < eps);
        }
        for a in &net.centers {
            for b in &net.centers {
                prop_assert!(a == b || (xs[*a] - xs[*b]).abs() >= eps);
            }
        }
        let wider = greedy_net(&pts, d, 2.0 * eps).unwrap();
        prop_assert!(wider.size() <= net.size());
    }

    #[test]
    fn conjugation_is_an_involution(p in exp_spec(), x in -50.0..50.0f64) {
        let e = p.build();
        prop_assume!(e.p_minus() > 1.0 && e.p_plus() < 1e6);
        let q = conjugate_exponent(&e).unwrap();
        prop_assume!(q.p_minus() > 1.0);
        let back = conjugate_exponent(&q).unwrap();
        prop_assert!((back.eval(x) - e.eval(x)).abs() <= 1e-12 * e.eval(x));
    }

    #[test]
    fn dual_weight_is_an_involution(w in weight_spec(), p in 1.2..4.0f64, x in -50.0..50.0f64) {
        prop_assume!(x != 0.0);
        let e = ExponentField::constant(p).unwrap();
        let q = conjugate_exponent(&e).unwrap();
        let w = w.build();
        let star = dual_weight(&w, &e, window()).unwrap();
        let back = dual_weight(&star, &q, window()).unwrap();
        prop_assert!((back.eval(x) - w.eval(x)).abs() <= 1e-10 * w.eval(x).max(1.0));
    }

    #[test]
    fn sequence_invariants(xs in prop::collection::vec(-3.0..3.0f64, 1..30), ps in prop::collection::vec(1.0..4.0f64, 30), ws in prop::collection::vec(0.1..3.0f64, 30)) {
        let n = xs.len();
        let s = WeightedSequence::new(xs.clone(), ps[..n].to_vec(), ws[..n].to_vec()).unwrap();
        let norm = seq_norm(&s).unwrap();
        if norm > 0.0 {
            prop_assert!((seq_modular(&s, norm).unwrap() - 1.0).abs() <= 1e-8);
        }
        prop_assert_eq!(seq_tail(&s, 0).unwrap(), seq_modular(&s, 1.0).unwrap());
        let tails: Vec<f64> = (0..=n).map(|k| seq_tail(&s, k).unwrap()).collect();
        prop_assert!(tails.windows(2).all(|t| t[1] <= t[0]));
        let u = WeightedSequence::uniform(xs.clone(), ps[0]).unwrap();
        let lp = xs.iter().map(|x| x.abs().powf(ps[0])).sum::<f64>().powf(1.0 / ps[0]);
        prop_assert!((seq_norm(&u).unwrap() - lp).abs() <= 1e-10 * lp.max(1.0));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn amalgam_invariants(f in fn_spec(), q1 in 1.0..4.0f64, dq in 0.0..4.0f64) {
        let local = LebesgueSpace::new(ExponentField::constant(2.0).unwrap(), WeightField::constant(1.0).unwrap());
        let f = f.build();
        let lo = AmalgamSpace::new(local.clone(), GlobalExponent::new(q1).unwrap());
        let hi = AmalgamSpace::new(local.clone(), GlobalExponent::new(q1 + dq).unwrap());
        prop_assert!(hi.norm(&f).unwrap() <= lo.norm(&f).unwrap() + 1e-9);

        let sup = AmalgamSpace::new(local, GlobalExponent::new(f64::INFINITY).unwrap());
        let profile = sup.cell_norms(&f).unwrap();
        let max = profile.norms.values().copied().fold(0.0, f64::max);
        prop_assert_eq!(sup.norm(&f).unwrap(), max);

        let view = lo.isometry_view(&f).unwrap();
        let agg = GlobalExponent::new(q1).unwrap().aggregate(view.iter().map(|(_, _, n)| *n));
        let n = lo.norm(&f).unwrap();
        prop_assert!((agg - n).abs() <= 1e-10 * n.max(1e-12));
    }

    #[test]
    fn cell_profile_shifts_with_translation(f in fn_spec()) {
        let am = AmalgamSpace::new(
            LebesgueSpace::new(ExponentField::constant(3.0).unwrap(), WeightField::constant(1.0).unwrap()),
            GlobalExponent::new(2.0).unwrap(),
        );
        let f = f.build();
        let a = am.cell_norms(&f).unwrap();
        let b = am.cell_norms(&f.translate(1.0)).unwrap();
        for (k, v) in &a.norms {
            prop_assert!((b.get(k + 1) - v).abs() <= 1e-7 * v.max(1e-3), "cell {k}");
        }
    }

    #[test]
    fn support_bound_holds(f in fn_spec(), q in 1.0..6.0f64, p in exp_spec(), w in weight_spec()) {
        prop_assume!(f.support().is_some());
        let am = AmalgamSpace::new(LebesgueSpace::new(p.build(), w.build()), GlobalExponent::new(q).unwrap());
        let s = am.support_bound_check(&f.build()).unwrap();
        prop_assert!(s.holds, "{s:?}");
    }

    #[test]
    fn amalgam_holder_holds(f in fn_spec(), g in fn_spec(), q in 1.0..6.0f64, p in 1.2..4.0f64) {
        let am = AmalgamSpace::new(
            LebesgueSpace::new(ExponentField::constant(p).unwrap(), WeightField::constant(1.0).unwrap()),
            GlobalExponent::new(q).unwrap(),
        );
        let h = am.holder(&f.build(), &g.build()).unwrap();
        prop_assert!(h.holds, "{h:?}");
    }

    #[test]
    fn maximal_dominates_mollifier(f in fn_spec(), x in -4.0..4.0f64, k in 0usize..4) {
        let eps = [1.0, 0.5, 0.1, 0.05][k];
        let grid = RadiusGrid::for_truncation(8.0).unwrap().with_radii(&[eps]).unwrap();
        let f = f.build();
        let m = mollify(&f, eps, x).unwrap();
        prop_assert!(m.abs() <= maximal(&f, x, &grid).unwrap() + 1e-6);
    }

    #[test]
    fn maximal_is_monotone(f in fn_spec(), x in -4.0..4.0f64, c in 1.0..3.0f64) {
        let grid = RadiusGrid::for_truncation(8.0).unwrap();
        let f = f.build();
        let g = f.scale(c);
        prop_assert!(maximal(&f, x, &grid).unwrap() <= maximal(&g, x, &grid).unwrap() + 1e-9);
    }

    #[test]
    fn sobolev_order_sums(mu in -2.0..2.0f64, s in 0.5..2.0f64, gamma in 0.0..4.0f64) {
        let base = LebesgueSpace::new(ExponentField::constant(2.0).unwrap(), WeightField::constant(1.0).unwrap());
        let f = RealFunction::gauss(mu, s).unwrap();
        prop_assert_eq!(SobolevSpace::new(base.clone(), 0).norm(&f).unwrap(), base.norm(&f).unwrap());
        let w1 = SobolevSpace::new(base, 1);
        let sum: f64 = w1.order_norms(&f).unwrap().iter().sum();
        prop_assert!((w1.norm(&f).unwrap() - sum).abs() <= 1e-12);
        prop_assert!((w1.tail_modular(&f, 0.0).unwrap() - w1.modular(&f).unwrap()).abs() <= 1e-10);
        prop_assert!(w1.tail_modular(&f, gamma + 0.5).unwrap() <= w1.tail_modular(&f, gamma).unwrap() + 1e-12);
    }
}

#[test]
fn constant_exponent_ball_exponent_is_exact() {
    let q = QuadratureSettings::default();
    let p = ExponentField::constant(2.5).unwrap();
    let w = WeightField::power(0.3).unwrap();
    let balls: Vec<Interval> = (1..=4)
        .map(|i| Interval::new(-(i as f64), i as f64 * 0.5).unwrap())
        .collect();
    let mut previous = f64::NEG_INFINITY;
    for n in 1..=balls.len() {
        let e = estimate_apx_constant(&w, &p, &balls[..n], &q).unwrap();
        assert!(e.p_b_values.iter().all(|v| (v - 2.5).abs() <= 1e-12));
        assert!(e.constant_estimate >= previous);
        previous = e.constant_estimate;
    }
}
