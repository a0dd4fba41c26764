//! Frozen reference values from independent computations: a 10⁶-point
//! composite Simpson rule, brute-force scans and arbitrary-precision
//! quadrature of the defining integrals.

use varnorm_core::amalgam::{support_cell_count, AmalgamSpace, GlobalExponent};
use varnorm_core::compactness::{
    embedding_transfer_report, lebesgue_report, ApproxMode, FamilyGenerator, FunctionFamily,
    Ladders, Sequential, Verdict,
};
use varnorm_core::lebesgue::LebesgueSpace;
use varnorm_core::numerics::{greedy_net, integrate, solve_monotone_decreasing, Landmarks};
use varnorm_core::operators::{maximal, mollified, RadiusGrid, BUMP_MASS};
use varnorm_core::sequence::{seq_norm, seq_tail, WeightedSequence};
use varnorm_core::sobolev::{derivative, SobolevSpace};
use varnorm_core::spaces::{
    check_log_holder, dyadic_balls, estimate_apx_constant, ExponentField, WeightField,
};
use varnorm_core::{Interval, QuadratureSettings, RealFunction};

use std::f64::consts::PI;
use std::sync::Arc;

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn space(p: f64, w: WeightField) -> LebesgueSpace {
    LebesgueSpace::new(ExponentField::constant(p).unwrap(), w)
}

fn l2() -> LebesgueSpace {
    space(2.0, WeightField::constant(1.0).unwrap())
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn bump_integral_matches_composite_simpson() {
    // 10⁶ panels of composite Simpson on [-1, 1].
    const SIMPSON_1E6: f64 = 0.443_993_816_168_079_4;
    let v = integrate(
        varnorm_core::function::standard_bump,
        iv(-1.0, 1.0),
        &QuadratureSettings::new(1e-12, 1e-15, 40).unwrap(),
    )
    .unwrap();
    close(v, SIMPSON_1E6, 1e-12);
    close(BUMP_MASS, SIMPSON_1E6, 1e-15);
}

#[test]
fn luxemburg_root_for_linear_exponent() {
    // Scanning λ ∈ [1, 2] at step 1e-6 for ∫_0^1 λ^{-(1+x)} dx = 1 puts the
    // root at the left end: the integrand is identically 1 at λ = 1.
    let g = |lam: f64| {
        integrate(
            |x| lam.powf(-(1.0 + x)),
            iv(0.0, 1.0),
            &QuadratureSettings::default(),
        )
    };
    let root = solve_monotone_decreasing(g, 1.0, 1e-10).unwrap();
    close(root, 1.0, 1e-6);

    let p = ExponentField::sampled(
        Arc::new(|x: f64| 1.0 + x.clamp(0.0, 1.0)),
        iv(-64.0, 64.0),
        Landmarks::with_breaks(vec![0.0, 1.0]),
    )
    .unwrap();
    let sp = LebesgueSpace::new(p, WeightField::constant(1.0).unwrap());
    let chi = RealFunction::indicator(0.0, 1.0).unwrap();
    close(sp.norm(&chi).unwrap(), 1.0, 1e-6);
    // ∫_0^1 2^{-(1+x)} dx = 1/(4 ln 2)
    close(
        sp.modular_scaled(&chi, 2.0).unwrap(),
        0.360_673_760_222_240_85,
        1e-10,
    );
}

#[test]
fn scaled_modular_examples() {
    let chi = RealFunction::indicator(0.0, 1.0).unwrap();
    close(l2().modular(&chi).unwrap(), 1.0, 1e-12);
    let w = WeightField::power(1.0).unwrap();
    close(space(2.0, w).modular(&chi).unwrap(), 0.5, 1e-12);
}

#[test]
fn greedy_net_of_orthogonal_sines() {
    // sin(kπx) on [0, 1) are pairwise orthogonal with norm 1/√2, so all
    // distances are 1: every member opens a new centre at eps = 0.5.
    let sp = l2();
    let members: Vec<RealFunction> = (1..=32)
        .map(|k| {
            RealFunction::sine(k as f64 * PI)
                .unwrap()
                .mul(&RealFunction::indicator(0.0, 1.0).unwrap())
        })
        .collect();
    let pts: Vec<usize> = (0..32).collect();
    let net = greedy_net(&pts, |i, j| sp.norm(&members[i].sub(&members[j])), 0.5).unwrap();
    assert_eq!(net.size(), 32);
    close(sp.norm(&members[3].sub(&members[17])).unwrap(), 1.0, 1e-8);
}

#[test]
fn gaussian_cell_profile() {
    // sqrt(∫_k^{k+1} e^{-2x²} dx)
    let reference = [
        (-4, 3.516_395_119_358_418e-5),
        (-3, 6.300_220_522_453_484e-3),
        (-2, 0.168_740_534_493_968_7),
        (-1, 0.773_397_702_777_364_2),
        (0, 0.773_397_702_777_364_2),
        (1, 0.168_740_534_493_968_7),
        (2, 6.300_220_522_453_484e-3),
        (3, 3.516_395_119_358_418e-5),
    ];
    let am = AmalgamSpace::new(l2(), GlobalExponent::new(2.0).unwrap());
    let g = RealFunction::gauss(0.0, 1.0).unwrap();
    let profile = am.cell_norms(&g).unwrap();
    for (k, v) in reference {
        close(profile.get(k), v, 1e-8);
    }
    // The whole-line L² norm is the ℓ² aggregate: (π/2)^{1/4}.
    close(am.norm(&g).unwrap(), (PI / 2.0).powf(0.25), 1e-8);
}

#[test]
fn weighted_holder_gaussian() {
    let w = WeightField::new(
        Arc::new(|x: f64| 1.0 + x * x),
        Landmarks::none(),
        iv(-64.0, 64.0),
    )
    .unwrap();
    let g = RealFunction::gauss(0.0, 1.0).unwrap();
    let h = space(2.0, w).holder_pairing(&g, &g).unwrap();
    close(h.lhs, 1.253_314_137_315_5, 1e-9);
    close(h.rhs_bound, 2.572_713_038_001_076, 1e-7);
    assert!(h.holds);
}

#[test]
fn amalgam_holder_gaussian_against_window() {
    let w = WeightField::new(
        Arc::new(|x: f64| 1.0 + x.abs()),
        Landmarks::with_breaks(vec![0.0]),
        iv(-64.0, 64.0),
    )
    .unwrap();
    let am = AmalgamSpace::new(space(2.0, w), GlobalExponent::new(1.0).unwrap());
    let f = RealFunction::gauss(0.0, 1.0).unwrap();
    let g = RealFunction::indicator(-1.0, 1.0).unwrap();
    let h = am.holder(&f, &g).unwrap();
    // √π erf(1) and 2 · Σ_k ‖f χ_{J_k}‖ · sqrt(ln 2)
    close(h.lhs, 1.493_648_265_624_854, 1e-9);
    close(h.rhs_bound, 3.873_123_976_462_072, 1e-7);
    assert!(h.holds);
}

#[test]
fn support_bound_for_unit_bump() {
    let am = AmalgamSpace::new(l2(), GlobalExponent::new(1.0).unwrap());
    let b = RealFunction::bump(0.0, 1.0).unwrap();
    let s = am.support_bound_check(&b).unwrap();
    close(s.lhs, 0.515_918_832_463_003_4, 1e-9);
    close(s.rhs, 0.729_619_409_952_872, 1e-9);
    assert!(s.holds);
    assert_eq!(support_cell_count(iv(-1.0, 1.0)), 2);
}

#[test]
fn char_norm_with_constant_weight() {
    let b = space(2.0, WeightField::constant(3.0).unwrap())
        .char_norm_bound(iv(0.0, 1.0))
        .unwrap();
    close(b.norm, 3f64.sqrt(), 1e-8);
    close(b.c_k, 3.0, 1e-12);
    assert!(b.holds);
}

#[test]
fn local_seminorms_of_unit_indicator() {
    let chi = RealFunction::indicator(0.0, 1.0).unwrap();
    let p = l2().local_seminorms(&chi, iv(-2.0, 2.0), 6).unwrap();
    // K_1 = [-1, 1] already contains [0, 1).
    for v in &p {
        close(*v, 1.0, 1e-8);
    }
    let empty = l2().local_seminorms(&chi, iv(0.0, 1.0), 1).unwrap();
    assert_eq!(empty, vec![0.0]);
}

#[test]
fn log_holder_decay_scans() {
    // Dense scan: |p(x) - 2| log(e + |x|) = 1 exactly for p = 2 + 1/log(e + |x|).
    let p = ExponentField::log_holder(2.0, 1.0, iv(-1e5, 1e5)).unwrap();
    let dense = (0..100_000)
        .map(|i| i as f64)
        .map(|x| (p.eval(x) - 2.0).abs() * (std::f64::consts::E + x).ln())
        .fold(0.0, f64::max);
    assert!(dense <= 1.0 + 1e-6, "{dense}");
    let c = check_log_holder(&p, 2048, iv(0.0, 1e5)).unwrap();
    assert!(c.decay_constant <= dense + 1e-12, "{}", c.decay_constant);
    assert!(c.passes);
    close(p.p_plus(), 3.0, 1e-12);

    let mut previous = 0.0;
    for r in [10.0, 100.0, 1000.0] {
        let s = ExponentField::with_declared_bounds(
            Arc::new(|x: f64| 2.0 + x.sin()),
            1.0,
            3.0,
            iv(-r, r),
            Landmarks::none(),
        )
        .unwrap()
        .with_log_holder_constant(1.0)
        .with_p_infinity(2.0);
        let c = check_log_holder(&s, 4096, iv(0.0, r)).unwrap();
        assert!(c.decay_constant > previous);
        assert!(!c.passes);
        previous = c.decay_constant;
    }
}

#[test]
fn muckenhoupt_estimates() {
    let q = QuadratureSettings::default();
    let p2 = ExponentField::constant(2.0).unwrap();
    let balls = dyadic_balls(2, -1..=2);
    let unit =
        estimate_apx_constant(&WeightField::constant(1.0).unwrap(), &p2, &balls, &q).unwrap();
    close(unit.constant_estimate, 1.0, 1e-9);

    // w = |x|^{1/2}: (4/3 r^{3/2}) (4 r^{1/2}) / (2r)² = 4/3 on every B(0, r).
    let centred: Vec<Interval> = [0.25, 1.0, 4.0].iter().map(|r| iv(-r, *r)).collect();
    let sqrt_w = WeightField::power(0.5).unwrap();
    let e = estimate_apx_constant(&sqrt_w, &p2, &centred, &q).unwrap();
    for t in &e.ball_terms {
        close(*t, 4.0 / 3.0, 1e-6);
    }

    let cubic = WeightField::power(3.0).unwrap();
    let d = estimate_apx_constant(&cubic, &p2, &[iv(-1.0, 1.0)], &q).unwrap();
    assert!(!d.finite);
    assert!(d.constant_estimate.is_infinite());
}

#[test]
fn maximal_of_unit_window() {
    let chi = RealFunction::indicator(-1.0, 1.0).unwrap();
    let grid = RadiusGrid::for_truncation(64.0).unwrap();
    let m = maximal(&chi, 3.0, &grid).unwrap();
    assert!(m <= 0.25 + 1e-12 && m > 0.24, "{m}");
    let with_four = grid.with_radii(&[4.0]).unwrap();
    close(maximal(&chi, 3.0, &with_four).unwrap(), 0.25, 1e-12);
    close(maximal(&chi, 0.0, &with_four).unwrap(), 1.0, 1e-12);
}

#[test]
fn sequence_closed_forms() {
    let g = WeightedSequence::uniform((1..=40).map(|k| 0.5f64.powi(k)).collect(), 1.0).unwrap();
    close(seq_norm(&g).unwrap(), 1.0 - 0.5f64.powi(40), 1e-12);
    close(
        seq_tail(&g, 10).unwrap(),
        0.5f64.powi(10) * (1.0 - 0.5f64.powi(30)),
        1e-16,
    );
}

#[test]
fn bump_derivative_against_hand_formula() {
    // d/du e^{-1/(1-u²)} = -2u (1-u²)^{-2} e^{-1/(1-u²)}
    let d = derivative(&RealFunction::bump(0.0, 1.0).unwrap(), 1).unwrap();
    close(d.eval(0.3), -0.241_446_982_603_229_4, 1e-15);
    let fd = derivative(&RealFunction::new(|x| x * x), 1).unwrap();
    for x in [-1.5, 0.2, 3.0] {
        close(fd.eval(x), 2.0 * x, 1e-8);
    }
    let s2 = derivative(&RealFunction::new(f64::sin), 2).unwrap();
    for x in [-1.0, 0.5, 2.0] {
        close(s2.eval(x), -x.sin(), 1e-6);
    }
}

#[test]
fn sobolev_norms_against_quadrature() {
    let w1 = SobolevSpace::new(l2(), 1);
    // f = sin(x) · bump(x/4)
    let f = RealFunction::sine(1.0)
        .unwrap()
        .mul(&RealFunction::bump(0.0, 4.0).unwrap());
    let norms = w1.order_norms(&f).unwrap();
    close(norms[0], 0.531_243_964_630_562, 1e-8);
    close(norms[1], 0.559_572_484_789_028_7, 1e-8);
    close(w1.norm(&f).unwrap(), 1.090_816_449_419_590_7, 2e-8);

    let g = RealFunction::gauss(0.0, 1.0).unwrap();
    let r = (PI / 2.0).sqrt();
    close(SobolevSpace::new(l2(), 0).norm(&g).unwrap(), r.sqrt(), 1e-8);
    close(w1.tail_modular(&g, 0.0).unwrap(), 2.0 * r, 1e-8);
    assert!(w1.tail_modular(&g, 4.0).unwrap() < 1e-6);
}

#[test]
fn oscillation_mollifier_errors() {
    // sup_{k ≤ N} ‖φ_ε ∗ f_k - f_k‖ for f_k = sin(kπx) χ_[0,1), from an
    // FFT convolution on a 2e-6 grid.
    let osc = FamilyGenerator::Oscillations {
        envelope: RealFunction::indicator(0.0, 1.0).unwrap(),
    };
    let ladders = Ladders {
        epsilons: vec![0.0625],
        ..Ladders::default()
    };
    let mut sups = Vec::new();
    for level in [3, 4] {
        let r = lebesgue_report(
            &osc.family(level).unwrap(),
            &l2(),
            ApproxMode::Mollifier,
            &ladders,
            &Sequential,
        )
        .unwrap();
        sups.push(r.approx.unwrap().1.sup_values[0]);
    }
    close(sups[0], 0.133_642_467_549_529, 1e-8);
    close(sups[1], 0.417_041_720_071_710, 1e-8);
    let f32 = RealFunction::sine(32.0 * PI)
        .unwrap()
        .mul(&RealFunction::indicator(0.0, 1.0).unwrap());
    let m = mollified(&f32, 0.0625).unwrap();
    close(
        l2().norm(&m.sub(&f32)).unwrap(),
        0.768_786_789_131_855_6,
        1e-8,
    );
}

#[test]
fn bump_dilates_transfer() {
    let base = RealFunction::bump(0.0, 2.0).unwrap();
    // 8-point grid s = 1, 8/7, …, 2.
    let members = (0..8)
        .map(|i| base.dilate(1.0 + i as f64 / 7.0))
        .collect::<Result<Vec<_>, _>>()
        .unwrap();
    let family = FunctionFamily::new("dilates", members).unwrap();
    let t = embedding_transfer_report(
        &family,
        &SobolevSpace::new(l2(), 1),
        &l2(),
        &Ladders::default(),
        &Sequential,
    )
    .unwrap();
    assert_eq!(t.hypothesis, Verdict::Pass);
    assert_eq!(t.destination.verdict, Verdict::Pass);
    assert!(t.consistent);
    assert!(t.embedding_ratio.is_finite() && t.embedding_ratio > 0.0 && t.embedding_ratio < 1.0);
}
