//! Kolmogorov–Riesz type compactness diagnostics.
//!
//! Every characterization has the same shape: a family `ℱ` is precompact
//! iff it is bounded, its tails vanish uniformly, and an approximation of
//! the identity converges uniformly on it. The quantifiers become measured
//! curves over fixed [`Ladders`]: `γ ↦ sup_ℱ ‖f 1_{|x|>γ}‖` and
//! `ε ↦ sup_ℱ ‖A_ε f - f‖`, where `A_ε` is a mollifier, a ball average or a
//! translation. A curve passes when it drops below the configured threshold
//! somewhere on its ladder, is inconclusive when it is still decreasing at
//! the end of the ladder, and fails otherwise.
//!
//! The [`net_oracle`] cross-checks verdicts without the theorems: it counts
//! greedy ε-net sizes over refinements of a parametric family.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::amalgam::AmalgamSpace;
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::lebesgue::{exhaustion_set, LebesgueSpace};
use crate::math;
use crate::numerics::{greedy_net_batched, Interval};
use crate::operators::{averaged, maximal_function, mollified, RadiusGrid};
use crate::sequence::{seq_modular, seq_norm, seq_tail, WeightedSequence};
use crate::sobolev::{derivative, SobolevSpace};

/// Runs independent jobs and returns their results in job order.
///
/// The core crate evaluates sequentially; a caller with threads can supply
/// a parallel executor without changing any result.
pub trait Executor: Sync {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> Result<f64> + Sync)) -> Vec<Result<f64>>;
}

/// Evaluates jobs one after another.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> Result<f64> + Sync)) -> Vec<Result<f64>> {
        (0..jobs).map(job).collect()
    }
}

fn run_all(
    exec: &dyn Executor,
    jobs: usize,
    job: &(dyn Fn(usize) -> Result<f64> + Sync),
) -> Result<Vec<f64>> {
    exec.run(jobs, job).into_iter().collect()
}

fn sup(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// Three-valued criterion outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Conjunction: any failure fails, otherwise any doubt stays doubtful.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn all<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Discretized quantifiers and decision thresholds.
#[derive(Clone, Debug, PartialEq)]
pub struct Ladders {
    /// Tail radii, increasing.
    pub gammas: Vec<f64>,
    /// Mollifier widths, decreasing.
    pub epsilons: Vec<f64>,
    /// Ball-average radii, decreasing.
    pub radii: Vec<f64>,
    /// Translation bounds `ρ` for `|y| ≤ ρ`, decreasing.
    pub shifts: Vec<f64>,
    /// Sequence tail indices, increasing.
    pub tail_indices: Vec<usize>,
    /// A curve passes once it drops below this value.
    pub threshold: f64,
    /// Families with `sup ‖f‖` above this count as unbounded.
    pub bound_limit: f64,
    /// A curve above threshold whose last step shrank by at least this
    /// factor is still decreasing, hence inconclusive.
    pub decay_ratio: f64,
}

impl Default for Ladders {
    fn default() -> Self {
        let fine = vec![0.5, 0.25, 0.125, 0.0625];
        Self {
            gammas: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
            epsilons: fine.clone(),
            radii: fine.clone(),
            shifts: fine,
            tail_indices: vec![1, 2, 4, 8, 16, 32],
            threshold: 1e-3,
            bound_limit: 10.0,
            decay_ratio: 0.75,
        }
    }
}

impl Ladders {
    pub fn validate(&self) -> Result<()> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        let decreasing = |v: &[f64]| v.windows(2).all(|w| w[0] > w[1]);
        let positive = |v: &[f64]| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if self.gammas.is_empty()
            || !increasing(&self.gammas)
            || self.gammas.iter().any(|g| !(*g >= 0.0))
        {
            return Err(Error::InvalidParameter(
                "gamma ladder must be nonempty, nonnegative and increasing",
            ));
        }
        for l in [&self.epsilons, &self.radii, &self.shifts] {
            if l.is_empty() || !decreasing(l) || !positive(l) {
                return Err(Error::InvalidParameter(
                    "epsilon, radius and shift ladders must be nonempty, positive and decreasing",
                ));
            }
        }
        if self.tail_indices.is_empty() || !self.tail_indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "tail index ladder must be nonempty and increasing",
            ));
        }
        if !(self.threshold > 0.0) || !(self.bound_limit > 0.0) {
            return Err(Error::InvalidParameter(
                "threshold and bound limit must be positive",
            ));
        }
        if !(self.decay_ratio > 0.0 && self.decay_ratio < 1.0) {
            return Err(Error::InvalidParameter("decay ratio must lie in (0, 1)"));
        }
        Ok(())
    }

    fn curve_verdict(&self, curve: &CriterionCurve) -> Verdict {
        let v = &curve.sup_values;
        if v.iter().any(|x| *x < self.threshold) {
            return Verdict::Pass;
        }
        match v.len() {
            n if n >= 2 && v[n - 1] < self.decay_ratio * v[n - 2] => Verdict::Inconclusive,
            _ => Verdict::Fail,
        }
    }

    fn bound_verdict(&self, bound: f64) -> Verdict {
        if bound.is_finite() && bound <= self.bound_limit {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A measured quantifier: `sup_ℱ` of a criterion quantity along a ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionCurve {
    pub parameter_values: Vec<f64>,
    pub sup_values: Vec<f64>,
}

/// Which approximation of the identity the third criterion measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxMode {
    /// `‖φ_ε ∗ f - f‖` along the ε ladder.
    Mollifier,
    /// `‖(f)_{B(·,h)} - f‖` along the radius ladder.
    Average,
    /// `sup_{|y| ≤ ρ} ‖f(· + y) - f‖` along the shift ladder.
    Translation,
}

impl ApproxMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ApproxMode::Mollifier => "mollifier",
            ApproxMode::Average => "average",
            ApproxMode::Translation => "translation",
        }
    }
}

/// Greedy ε-net sizes over refinement levels.
#[derive(Clone, Debug, PartialEq)]
pub struct NetOracle {
    pub eps: f64,
    pub levels: Vec<u32>,
    pub net_sizes: Vec<usize>,
    pub verdict: OracleVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// The last two levels have equal net sizes.
    Stable,
    Growing,
}

impl OracleVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleVerdict::Stable => "stable",
            OracleVerdict::Growing => "growing",
        }
    }
}

/// Measured criteria for one family in one space.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactnessReport {
    pub bound: f64,
    pub bound_verdict: Verdict,
    pub tail_curve: CriterionCurve,
    pub tail_verdict: Verdict,
    /// `None` for sequence spaces, whose characterization has no third
    /// criterion.
    pub approx: Option<(ApproxMode, CriterionCurve)>,
    pub approx_verdict: Verdict,
    pub verdict: Verdict,
    pub net: Option<NetOracle>,
}

impl CompactnessReport {
    fn assemble(
        ladders: &Ladders,
        bound: f64,
        tail_curve: CriterionCurve,
        approx: Option<(ApproxMode, CriterionCurve)>,
    ) -> Self {
        let bound_verdict = ladders.bound_verdict(bound);
        let tail_verdict = ladders.curve_verdict(&tail_curve);
        let approx_verdict = approx
            .as_ref()
            .map_or(Verdict::Pass, |(_, c)| ladders.curve_verdict(c));
        Self {
            bound,
            bound_verdict,
            tail_curve,
            tail_verdict,
            approx,
            approx_verdict,
            verdict: Verdict::all([bound_verdict, tail_verdict, approx_verdict]),
            net: None,
        }
    }

    pub fn with_net(mut self, net: NetOracle) -> Self {
        self.net = Some(net);
        self
    }
}

/// A finite family of functions on a shared truncation.
#[derive(Clone, Debug)]
pub struct FunctionFamily {
    pub label: String,
    /// Generator kind and the parameter grid the members were drawn from.
    pub generator: GeneratorParams,
    members: Vec<RealFunction>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorParams {
    pub kind: &'static str,
    pub parameters: Vec<f64>,
}

impl FunctionFamily {
    pub fn new(label: impl Into<String>, members: Vec<RealFunction>) -> Result<Self> {
        let n = members.len();
        Self::with_generator(
            label,
            members,
            GeneratorParams {
                kind: "list",
                parameters: (0..n).map(|i| i as f64).collect(),
            },
        )
    }

    pub fn with_generator(
        label: impl Into<String>,
        members: Vec<RealFunction>,
        generator: GeneratorParams,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(Self {
            label: label.into(),
            generator,
            members,
        })
    }

    pub fn members(&self) -> &[RealFunction] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `{D^order f : f ∈ ℱ}`.
    pub fn derivative(&self, order: usize) -> Result<FunctionFamily> {
        let members = self
            .members
            .iter()
            .map(|f| derivative(f, order))
            .collect::<Result<Vec<_>>>()?;
        Ok(FunctionFamily {
            label: format!("D^{order} {}", self.label),
            generator: self.generator.clone(),
            members,
        })
    }

    /// `{f χ_K : f ∈ ℱ}`.
    pub fn restricted(&self, k: Interval) -> FunctionFamily {
        FunctionFamily {
            label: format!("{} on [{}, {}]", self.label, k.lo(), k.hi()),
            generator: self.generator.clone(),
            members: self.members.iter().map(|f| f.restrict(k)).collect(),
        }
    }
}

/// Parametric families sampled on grids that refine with the level.
#[derive(Clone, Debug)]
pub enum FamilyGenerator {
    /// The same members at every level.
    Fixed(Vec<RealFunction>),
    /// `base(x/s)` for `s` on `2^L + 1` points of `[s_min, s_max]`.
    Dilates {
        base: RealFunction,
        s_min: f64,
        s_max: f64,
    },
    /// `base(x - t)` for `t = 0, step, …, 2^L·step`.
    Translates { base: RealFunction, step: f64 },
    /// `sin(kπx)·envelope(x)` for `k = 1, …, 2^L`.
    Oscillations { envelope: RealFunction },
}

impl FamilyGenerator {
    pub fn kind(&self) -> &'static str {
        match self {
            FamilyGenerator::Fixed(_) => "list",
            FamilyGenerator::Dilates { .. } => "dilates",
            FamilyGenerator::Translates { .. } => "translates",
            FamilyGenerator::Oscillations { .. } => "oscillations",
        }
    }

    /// The parameter grid at `level`.
    pub fn parameters(&self, level: u32) -> Vec<f64> {
        let n = 1usize << level.min(30);
        match self {
            FamilyGenerator::Fixed(m) => (0..m.len()).map(|i| i as f64).collect(),
            FamilyGenerator::Dilates { s_min, s_max, .. } => (0..=n)
                .map(|i| s_min + (s_max - s_min) * i as f64 / n as f64)
                .collect(),
            FamilyGenerator::Translates { step, .. } => (0..=n).map(|i| step * i as f64).collect(),
            FamilyGenerator::Oscillations { .. } => (1..=n).map(|k| k as f64).collect(),
        }
    }

    pub fn family(&self, level: u32) -> Result<FunctionFamily> {
        let params = self.parameters(level);
        let members = match self {
            FamilyGenerator::Fixed(m) => m.clone(),
            FamilyGenerator::Dilates { base, .. } => params
                .iter()
                .map(|&s| base.dilate(s))
                .collect::<Result<Vec<_>>>()?,
            FamilyGenerator::Translates { base, .. } => {
                params.iter().map(|&t| base.translate(t)).collect()
            }
            FamilyGenerator::Oscillations { envelope } => params
                .iter()
                .map(|&k| Ok(RealFunction::sine(k * core::f64::consts::PI)?.mul(envelope)))
                .collect::<Result<Vec<_>>>()?,
        };
        FunctionFamily::with_generator(
            format!("{} (level {level})", self.kind()),
            members,
            GeneratorParams {
                kind: self.kind(),
                parameters: params,
            },
        )
    }
}

/// Norm and tail access shared by the function-space engines.
pub trait FamilyNorm: Sync {
    fn norm(&self, f: &RealFunction) -> Result<f64>;
    fn tail_norm(&self, f: &RealFunction, gamma: f64) -> Result<f64>;
}

impl FamilyNorm for LebesgueSpace {
    fn norm(&self, f: &RealFunction) -> Result<f64> {
        LebesgueSpace::norm(self, f)
    }

    fn tail_norm(&self, f: &RealFunction, gamma: f64) -> Result<f64> {
        LebesgueSpace::tail_norm(self, f, gamma)
    }
}

impl FamilyNorm for AmalgamSpace {
    fn norm(&self, f: &RealFunction) -> Result<f64> {
        AmalgamSpace::norm(self, f)
    }

    fn tail_norm(&self, f: &RealFunction, gamma: f64) -> Result<f64> {
        AmalgamSpace::tail_norm(self, f, gamma)
    }
}

impl FamilyNorm for SobolevSpace {
    fn norm(&self, f: &RealFunction) -> Result<f64> {
        SobolevSpace::norm(self, f)
    }

    fn tail_norm(&self, f: &RealFunction, gamma: f64) -> Result<f64> {
        let mut total = 0.0;
        for d in self.derivatives(f)? {
            total += self.base().tail_norm(&d, gamma)?;
        }
        Ok(total)
    }
}

/// `sup_ℱ ‖A f - f‖` for one setting of the approximation parameter.
fn approx_sup<N: FamilyNorm>(
    family: &FunctionFamily,
    space: &N,
    mode: ApproxMode,
    t: f64,
    exec: &dyn Executor,
) -> Result<f64> {
    let m = family.members();
    let values = run_all(exec, m.len(), &|i| {
        let f = &m[i];
        let g = match mode {
            ApproxMode::Mollifier => mollified(f, t)?,
            ApproxMode::Average => averaged(f, t)?,
            ApproxMode::Translation => f.translate(-t),
        };
        space.norm(&g.sub(f))
    })?;
    Ok(sup(&values))
}

fn approx_curve<N: FamilyNorm>(
    family: &FunctionFamily,
    space: &N,
    mode: ApproxMode,
    ladders: &Ladders,
    exec: &dyn Executor,
) -> Result<CriterionCurve> {
    let sup_values = match mode {
        ApproxMode::Mollifier => ladders
            .epsilons
            .iter()
            .map(|&e| approx_sup(family, space, mode, e, exec))
            .collect::<Result<Vec<_>>>()?,
        ApproxMode::Average => ladders
            .radii
            .iter()
            .map(|&h| approx_sup(family, space, mode, h, exec))
            .collect::<Result<Vec<_>>>()?,
        ApproxMode::Translation => {
            // sup over the tested shifts y = ±ρ' with ρ' ≤ ρ.
            let mut at_shift = Vec::with_capacity(ladders.shifts.len());
            for &rho in &ladders.shifts {
                let plus = approx_sup(family, space, mode, rho, exec)?;
                let minus = approx_sup(family, space, mode, -rho, exec)?;
                at_shift.push(plus.max(minus));
            }
            let mut running: f64 = 0.0;
            let mut out = vec![0.0; at_shift.len()];
            for i in (0..at_shift.len()).rev() {
                running = running.max(at_shift[i]);
                out[i] = running;
            }
            out
        }
    };
    let parameter_values = match mode {
        ApproxMode::Mollifier => ladders.epsilons.clone(),
        ApproxMode::Average => ladders.radii.clone(),
        ApproxMode::Translation => ladders.shifts.clone(),
    };
    Ok(CriterionCurve {
        parameter_values,
        sup_values,
    })
}

fn function_report<N: FamilyNorm>(
    family: &FunctionFamily,
    space: &N,
    mode: ApproxMode,
    ladders: &Ladders,
    exec: &dyn Executor,
) -> Result<CompactnessReport> {
    ladders.validate()?;
    let m = family.members();
    let bound = sup(&run_all(exec, m.len(), &|i| space.norm(&m[i]))?);
    let mut tails = Vec::with_capacity(ladders.gammas.len());
    for &g in &ladders.gammas {
        tails.push(sup(&run_all(exec, m.len(), &|i| {
            space.tail_norm(&m[i], g)
        })?));
    }
    let tail_curve = CriterionCurve {
        parameter_values: ladders.gammas.clone(),
        sup_values: tails,
    };
    let approx = approx_curve(family, space, mode, ladders, exec)?;
    Ok(CompactnessReport::assemble(
        ladders,
        bound,
        tail_curve,
        Some((mode, approx)),
    ))
}

/// Bound, tail and approximation criteria in `L_w^{p(.)}`.
pub fn lebesgue_report(
    family: &FunctionFamily,
    space: &LebesgueSpace,
    mode: ApproxMode,
    ladders: &Ladders,
    exec: &dyn Executor,
) -> Result<CompactnessReport> {
    function_report(family, space, mode, ladders, exec)
}

/// The same criteria with amalgam norms throughout; tails are
/// `‖f‖_{(L_w^{p(.)}, ℓ^q)(|x| > γ)}`.
pub fn amalgam_report(
    family: &FunctionFamily,
    space: &AmalgamSpace,
    mode: ApproxMode,
    ladders: &Ladders,
    exec: &dyn Executor,
) -> Result<CompactnessReport> {
    function_report(family, space, mode, ladders, exec)
}

/// One level of the `L_loc` exhaustion.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalLevel {
    pub j: usize,
    /// `K_j`, or `None` when it is empty.
    pub k_j: Option<Interval>,
    pub report: CompactnessReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalReport {
    pub levels: Vec<LocalLevel>,
    pub verdict: Verdict,
}

/// Mollifier-mode reports for `{f_{K_j}}` on every `K_j`, `j = 1..j_max`;
/// the family passes when every level passes. Empty `K_j` pass trivially.
pub fn lloc_report(
    family: &FunctionFamily,
    space: &LebesgueSpace,
    omega: Interval,
    j_max: usize,
    ladders: &Ladders,
    exec: &dyn Executor,
) -> Result<LocalReport> {
    if j_max == 0 {
        return Err(Error::InvalidParameter("exhaustion needs j_max >= 1"));
    }
    ladders.validate()?;
    let mut levels = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        let k_j = exhaustion_set(omega, j);
        let report = match k_j {
            Some(k) => lebesgue_report(
                &family.restricted(k),
                space,
                ApproxMode::Mollifier,
                ladders,
                exec,
            )?,
            None => trivial_report(ladders),
        };
        levels.push(LocalLevel { j, k_j, report });
    }
    let verdict = Verdict::all(levels.iter().map(|l| l.report.verdict));
    Ok(LocalReport { levels, verdict })
}

fn trivial_report(ladders: &Ladders) -> CompactnessReport {
    CompactnessReport::assemble(
        ladders,
        0.0,
        CriterionCurve {
            parameter_values: ladders.gammas.clone(),
            sup_values: vec![0.0; ladders.gammas.len()],
        },
        Some((
            ApproxMode::Mollifier,
            CriterionCurve {
                parameter_values: ladders.epsilons.clone(),
                sup_values: vec![0.0; ladders.epsilons.len()],
            },
        )),
    )
}

/// Bound `sup ϱ(x)` and tail `K ↦ sup ∑_{k>K} |x_k|^{p_k} w_k` in
/// `ℓ_{p_n}(w)`. Tail indices beyond the sequence length are skipped.
pub fn sequence_report(
    family: &[WeightedSequence],
    ladders: &Ladders,
) -> Result<CompactnessReport> {
    ladders.validate()?;
    let first = family.first().ok_or(Error::EmptyFamily)?;
    if family
        .iter()
        .any(|s| !s.same_space(first) || s.len() != first.len())
    {
        return Err(Error::MismatchedSequences);
    }
    let mut bound: f64 = 0.0;
    for s in family {
        bound = bound.max(seq_modular(s, 1.0)?);
    }
    let ks: Vec<usize> = ladders
        .tail_indices
        .iter()
        .copied()
        .filter(|k| *k <= first.len())
        .collect();
    let mut sup_values = Vec::with_capacity(ks.len());
    for &k in &ks {
        let mut m: f64 = 0.0;
        for s in family {
            m = m.max(seq_tail(s, k)?);
        }
        sup_values.push(m);
    }
    let tail_curve = CriterionCurve {
        parameter_values: ks.iter().map(|k| *k as f64).collect(),
        sup_values,
    };
    Ok(CompactnessReport::assemble(
        ladders, bound, tail_curve, None,
    ))
}

/// Per-order reports and their conjunction.
#[derive(Clone, Debug, PartialEq)]
pub struct SobolevReport {
    /// `orders[j]` is the report for `D^j[ℱ]` in the base space.
    pub orders: Vec<CompactnessReport>,
    pub verdict: Verdict,
}

/// Runs the base-space criteria on `D^j[ℱ]` for every `j ≤ k`.
pub fn sobolev_report(
    family: &FunctionFamily,
    space: &SobolevSpace,
    mode: ApproxMode,
    ladders: &Ladders,
    exec: &dyn Executor,
) -> Result<SobolevReport> {
    let mut orders = Vec::with_capacity(space.order() + 1);
    for j in 0..=space.order() {
        orders.push(lebesgue_report(
            &family.derivative(j)?,
            space.base(),
            mode,
            ladders,
            exec,
        )?);
    }
    let verdict = Verdict::all(orders.iter().map(|r| r.verdict));
    Ok(SobolevReport { orders, verdict })
}

/// Source-space hypothesis versus destination-space verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    /// `sup_ℱ ‖f‖_{W^{1,p(.)}_{ϑ₁}}`.
    pub sobolev_bound: f64,
    /// `γ ↦ sup_ℱ ∫_{|x|>γ} (|f|^{p} + |f'|^{p}) ϑ₁`.
    pub sobolev_tail_curve: CriterionCurve,
    pub hypothesis: Verdict,
    /// Average-mode report in the destination space.
    pub destination: CompactnessReport,
    /// `sup_ℱ ‖f‖_dst / ‖f‖_src` over members with nonzero source norm.
    pub embedding_ratio: f64,
    /// False iff the hypothesis passes while the destination does not.
    pub consistent: bool,
}

pub fn embedding_transfer_report(
    family: &FunctionFamily,
    src: &SobolevSpace,
    dst: &LebesgueSpace,
    ladders: &Ladders,
    exec: &dyn Executor,
) -> Result<TransferReport> {
    if src.order() != 1 {
        return Err(Error::InvalidParameter(
            "transfer source must be a first-order Sobolev space",
        ));
    }
    ladders.validate()?;
    let m = family.members();
    let src_norms = run_all(exec, m.len(), &|i| src.norm(&m[i]))?;
    let dst_norms = run_all(exec, m.len(), &|i| dst.norm(&m[i]))?;
    let sobolev_bound = sup(&src_norms);
    let mut tails = Vec::with_capacity(ladders.gammas.len());
    for &g in &ladders.gammas {
        tails.push(sup(&run_all(exec, m.len(), &|i| {
            src.tail_modular(&m[i], g)
        })?));
    }
    let sobolev_tail_curve = CriterionCurve {
        parameter_values: ladders.gammas.clone(),
        sup_values: tails,
    };
    let hypothesis = ladders
        .bound_verdict(sobolev_bound)
        .and(ladders.curve_verdict(&sobolev_tail_curve));
    let destination = lebesgue_report(family, dst, ApproxMode::Average, ladders, exec)?;
    let embedding_ratio = src_norms
        .iter()
        .zip(&dst_norms)
        .filter(|(s, _)| **s > 0.0)
        .map(|(s, d)| d / s)
        .fold(0.0, f64::max);
    let consistent = hypothesis != Verdict::Pass || destination.verdict == Verdict::Pass;
    Ok(TransferReport {
        sobolev_bound,
        sobolev_tail_curve,
        hypothesis,
        destination,
        embedding_ratio,
        consistent,
    })
}

/// `sup_ℱ ‖Mf‖ / ‖f‖` with `M` on a radius grid; the empirical stand-in
/// for the operator norm of the maximal operator.
pub fn maximal_ratio(
    family: &FunctionFamily,
    space: &LebesgueSpace,
    grid: &RadiusGrid,
    exec: &dyn Executor,
) -> Result<f64> {
    let m = family.members();
    let ratios = run_all(exec, m.len(), &|i| {
        let n = space.norm(&m[i])?;
        if n == 0.0 {
            return Ok(0.0);
        }
        Ok(space.norm(&maximal_function(&m[i], grid))? / n)
    })?;
    Ok(sup(&ratios))
}

/// The norm used for net distances.
#[derive(Clone, Copy)]
pub enum NetMetric<'a> {
    Lebesgue(&'a LebesgueSpace),
    Amalgam(&'a AmalgamSpace),
    Sobolev(&'a SobolevSpace),
}

impl NetMetric<'_> {
    fn distance(&self, f: &RealFunction, g: &RealFunction) -> Result<f64> {
        let d = f.sub(g);
        match self {
            NetMetric::Lebesgue(s) => s.norm(&d),
            NetMetric::Amalgam(s) => s.norm(&d),
            NetMetric::Sobolev(s) => s.norm(&d),
        }
    }
}

fn oracle_from_sizes(eps: f64, levels: Vec<u32>, net_sizes: Vec<usize>) -> NetOracle {
    let n = net_sizes.len();
    let verdict = if net_sizes[n - 1] == net_sizes[n - 2] {
        OracleVerdict::Stable
    } else {
        OracleVerdict::Growing
    };
    NetOracle {
        eps,
        levels,
        net_sizes,
        verdict,
    }
}

fn check_levels(levels: &core::ops::RangeInclusive<u32>, eps: f64) -> Result<Vec<u32>> {
    let levels: Vec<u32> = levels.clone().collect();
    if levels.len() < 2 {
        return Err(Error::InvalidParameter(
            "net oracle needs at least two levels",
        ));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("net radius must be positive"));
    }
    Ok(levels)
}

/// Greedy ε-net sizes of `sampler(level)` in the metric's norm; stable when
/// the last two levels agree.
pub fn net_oracle<S>(
    sampler: S,
    metric: NetMetric<'_>,
    eps: f64,
    levels: core::ops::RangeInclusive<u32>,
    exec: &dyn Executor,
) -> Result<NetOracle>
where
    S: Fn(u32) -> Result<FunctionFamily>,
{
    let levels = check_levels(&levels, eps)?;
    let mut sizes = Vec::with_capacity(levels.len());
    for &level in &levels {
        let family = sampler(level)?;
        let m = family.members();
        let points: Vec<usize> = (0..m.len()).collect();
        let net = greedy_net_batched(
            &points,
            |p, centers| {
                run_all(exec, centers.len(), &|i| {
                    metric.distance(&m[p], &m[centers[i]])
                })
            },
            eps,
        )?;
        sizes.push(net.size());
    }
    Ok(oracle_from_sizes(eps, levels, sizes))
}

/// [`net_oracle`] for sequence families with the `ℓ_{p_n}(w)` norm.
pub fn sequence_net_oracle<S>(
    sampler: S,
    eps: f64,
    levels: core::ops::RangeInclusive<u32>,
) -> Result<NetOracle>
where
    S: Fn(u32) -> Result<Vec<WeightedSequence>>,
{
    let levels = check_levels(&levels, eps)?;
    let mut sizes = Vec::with_capacity(levels.len());
    for &level in &levels {
        let family = sampler(level)?;
        let points: Vec<usize> = (0..family.len()).collect();
        let net = greedy_net_batched(
            &points,
            |p, centers| {
                centers
                    .iter()
                    .map(|&c| seq_norm(&family[p].sub(&family[c])?))
                    .collect()
            },
            eps,
        )?;
        sizes.push(net.size());
    }
    Ok(oracle_from_sizes(eps, levels, sizes))
}

/// Sequence families sampled on refining grids.
#[derive(Clone, Debug)]
pub enum SequenceGenerator {
    Fixed(Vec<WeightedSequence>),
    /// `e_m`, `m = 1, …, min(2^{L+1}, length)`, constant exponent `p`.
    UnitVectors {
        length: usize,
        p: f64,
    },
    /// `x_k = r^k`, `k = 1..length`, for `r` on `2^L + 1` points of
    /// `[0, r_max]`.
    Geometric {
        length: usize,
        p: f64,
        r_max: f64,
    },
}

impl SequenceGenerator {
    pub fn kind(&self) -> &'static str {
        match self {
            SequenceGenerator::Fixed(_) => "list",
            SequenceGenerator::UnitVectors { .. } => "unit_vectors",
            SequenceGenerator::Geometric { .. } => "geometric",
        }
    }

    pub fn family(&self, level: u32) -> Result<Vec<WeightedSequence>> {
        let n = 1usize << level.min(30);
        match self {
            SequenceGenerator::Fixed(s) => Ok(s.clone()),
            SequenceGenerator::UnitVectors { length, p } => (1..=(2 * n).min(*length))
                .map(|m| {
                    let mut e = vec![0.0; *length];
                    e[m - 1] = 1.0;
                    WeightedSequence::uniform(e, *p)
                })
                .collect(),
            SequenceGenerator::Geometric { length, p, r_max } => (0..=n)
                .map(|i| {
                    let r = r_max * i as f64 / n as f64;
                    let x = (1..=*length).map(|k| math::powi(r, k as i32)).collect();
                    WeightedSequence::uniform(x, *p)
                })
                .collect(),
        }
    }
}
