//! Scenario configuration: the JSON document read by every command.
//!
//! Every field has a default, and the resolved configuration (defaults
//! materialized) is echoed into each report.

use serde::{Deserialize, Serialize};
use varnorm_core::amalgam::{AmalgamSpace, GlobalExponent};
use varnorm_core::compactness::{ApproxMode, FamilyGenerator, Ladders, SequenceGenerator};
use varnorm_core::lebesgue::{LebesgueSpace, DEFAULT_TRUNCATION};
use varnorm_core::sequence::WeightedSequence;
use varnorm_core::sobolev::SobolevSpace;
use varnorm_core::spaces::{ExponentField, WeightField};
use varnorm_core::{Interval, QuadratureSettings, RealFunction};

use crate::error::CliError;
use crate::expr::{parse_exponent, parse_function, parse_weight};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    #[default]
    Lebesgue,
    Amalgam,
    Sequence,
    Sobolev,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Mollifier,
    Average,
    Translation,
}

impl From<Mode> for ApproxMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Mollifier => ApproxMode::Mollifier,
            Mode::Average => ApproxMode::Average,
            Mode::Translation => ApproxMode::Translation,
        }
    }
}

/// The amalgam global exponent: a number `q ≥ 1` or the string `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GlobalQ {
    Finite(f64),
    Named(String),
}

impl Default for GlobalQ {
    fn default() -> Self {
        GlobalQ::Finite(2.0)
    }
}

impl GlobalQ {
    fn resolve(&self) -> Result<GlobalExponent, CliError> {
        let q = match self {
            GlobalQ::Finite(q) => *q,
            GlobalQ::Named(s) if s == "inf" => f64::INFINITY,
            GlobalQ::Named(s) => {
                return Err(CliError::Config(format!(
                    "q must be a number or \"inf\", got {s:?}"
                )))
            }
        };
        Ok(GlobalExponent::new(q)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LadderConfig {
    pub gammas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub radii: Vec<f64>,
    pub shifts: Vec<f64>,
    pub tail_indices: Vec<usize>,
    pub threshold: f64,
    pub bound_limit: f64,
    pub decay_ratio: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        let l = Ladders::default();
        Self {
            gammas: l.gammas,
            epsilons: l.epsilons,
            radii: l.radii,
            shifts: l.shifts,
            tail_indices: l.tail_indices,
            threshold: l.threshold,
            bound_limit: l.bound_limit,
            decay_ratio: l.decay_ratio,
        }
    }
}

impl LadderConfig {
    pub fn resolve(&self) -> Result<Ladders, CliError> {
        let l = Ladders {
            gammas: self.gammas.clone(),
            epsilons: self.epsilons.clone(),
            radii: self.radii.clone(),
            shifts: self.shifts.clone(),
            tail_indices: self.tail_indices.clone(),
            threshold: self.threshold,
            bound_limit: self.bound_limit,
            decay_ratio: self.decay_ratio,
        };
        l.validate()?;
        Ok(l)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        let q = QuadratureSettings::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_depth: q.max_depth,
        }
    }
}

/// A parametric family sampled at a refinement level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// `base(x/s)`, `s` on `2^level + 1` points of `[s_min, s_max]`.
    Dilates {
        base: String,
        s_min: f64,
        s_max: f64,
        level: u32,
    },
    /// `base(x - t)`, `t = 0, step, …, 2^level·step`.
    Translates { base: String, step: f64, level: u32 },
    /// `sin(kπx)·envelope(x)`, `k = 1..2^level`.
    Oscillations { envelope: String, level: u32 },
    /// Unit vectors `e_m`, `m ≤ min(2^{level+1}, length)`.
    UnitVectors { length: usize, p: f64, level: u32 },
    /// `x_k = r^k` for `r` on `2^level + 1` points of `[0, r_max]`.
    Geometric {
        length: usize,
        p: f64,
        r_max: f64,
        level: u32,
    },
}

impl FamilySpec {
    pub fn level(&self) -> u32 {
        match self {
            FamilySpec::Dilates { level, .. }
            | FamilySpec::Translates { level, .. }
            | FamilySpec::Oscillations { level, .. }
            | FamilySpec::UnitVectors { level, .. }
            | FamilySpec::Geometric { level, .. } => *level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetConfig {
    pub eps: f64,
    /// First and last refinement level.
    pub levels: [u32; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionConfig {
    /// The open interval `Ω`.
    pub omega: [f64; 2],
    pub j_max: usize,
}

/// Destination space `L_{ϑ₂}^{q(.)}` for the Sobolev transfer report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DestinationConfig {
    pub exponent: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub space: SpaceKind,
    pub exponent: String,
    pub weight: String,
    /// Explicit family members; ignored when `family` is set.
    pub functions: Vec<String>,
    pub family: Option<FamilySpec>,
    /// Explicit sequences for the sequence space; `p_k` and `w_k` are the
    /// exponent and weight expressions evaluated at `k = 1, 2, …`.
    pub sequences: Vec<Vec<f64>>,
    pub q: GlobalQ,
    /// Sobolev order.
    pub order: usize,
    pub mode: Mode,
    pub ladders: LadderConfig,
    pub tolerances: Tolerances,
    pub truncation: [f64; 2],
    pub seed: u64,
    pub net: Option<NetConfig>,
    /// Evaluation points of the maximal command.
    pub points: Vec<f64>,
    /// Also report `sup ‖Mf‖/‖f‖` from the maximal command.
    pub maximal_ratio: bool,
    /// Balls `[a, b]` of the A_p estimate.
    pub balls: Vec<[f64; 2]>,
    pub exhaustion: Option<ExhaustionConfig>,
    pub destination: Option<DestinationConfig>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            space: SpaceKind::Lebesgue,
            exponent: "const(2)".into(),
            weight: "const(1)".into(),
            functions: Vec::new(),
            family: None,
            sequences: Vec::new(),
            q: GlobalQ::default(),
            order: 1,
            mode: Mode::Mollifier,
            ladders: LadderConfig::default(),
            tolerances: Tolerances::default(),
            truncation: [-DEFAULT_TRUNCATION, DEFAULT_TRUNCATION],
            seed: 0,
            net: None,
            points: (0..=16).map(|i| -4.0 + 0.5 * i as f64).collect(),
            maximal_ratio: false,
            balls: default_balls(),
            exhaustion: None,
            destination: None,
        }
    }
}

/// Centred balls of radius `2^k` and balls `[0, 2^k]`, `k = -3..5`.
fn default_balls() -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for k in -3..=5 {
        let r = 2f64.powi(k);
        out.push([-r, r]);
        out.push([0.0, r]);
    }
    out
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn resolve(&self) -> Result<Scenario, CliError> {
        let truncation = Interval::new(self.truncation[0], self.truncation[1])?;
        let quad = QuadratureSettings::new(
            self.tolerances.rel_tol,
            self.tolerances.abs_tol,
            self.tolerances.max_depth,
        )?;
        let exponent = parse_exponent(&self.exponent)?.build(truncation)?;
        let weight = parse_weight(&self.weight)?.build()?;
        let space = LebesgueSpace::new(exponent.clone(), weight.clone())
            .with_truncation(truncation)?
            .with_quadrature(quad);
        let ladders = self.ladders.resolve()?;

        let mut functions = Vec::new();
        for src in &self.functions {
            functions.push((src.clone(), parse_function(src)?.build()?));
        }
        let generator = match &self.family {
            None => None,
            Some(FamilySpec::Dilates {
                base, s_min, s_max, ..
            }) => {
                if !(0.0 < *s_min && s_min <= s_max) {
                    return Err(CliError::Config("dilates need 0 < s_min <= s_max".into()));
                }
                Some(FamilyGenerator::Dilates {
                    base: parse_function(base)?.build()?,
                    s_min: *s_min,
                    s_max: *s_max,
                })
            }
            Some(FamilySpec::Translates { base, step, .. }) => Some(FamilyGenerator::Translates {
                base: parse_function(base)?.build()?,
                step: *step,
            }),
            Some(FamilySpec::Oscillations { envelope, .. }) => {
                Some(FamilyGenerator::Oscillations {
                    envelope: parse_function(envelope)?.build()?,
                })
            }
            Some(_) => None,
        };
        let sequence_generator = match &self.family {
            Some(FamilySpec::UnitVectors { length, p, .. }) => {
                Some(SequenceGenerator::UnitVectors {
                    length: *length,
                    p: *p,
                })
            }
            Some(FamilySpec::Geometric {
                length, p, r_max, ..
            }) => Some(SequenceGenerator::Geometric {
                length: *length,
                p: *p,
                r_max: *r_max,
            }),
            _ => None,
        };
        if self.space == SpaceKind::Sequence && generator.is_some() {
            return Err(CliError::Config(
                "function families need a function space".into(),
            ));
        }
        if self.space != SpaceKind::Sequence && sequence_generator.is_some() {
            return Err(CliError::Config(
                "sequence families need space \"sequence\"".into(),
            ));
        }

        let sequences = self
            .sequences
            .iter()
            .map(|entries| {
                let n = entries.len();
                let ps = (1..=n).map(|k| exponent.eval(k as f64)).collect();
                let ws = (1..=n).map(|k| weight.eval(k as f64)).collect();
                WeightedSequence::new(entries.clone(), ps, ws)
            })
            .collect::<varnorm_core::Result<Vec<_>>>()?;

        let destination = match &self.destination {
            None => None,
            Some(d) => Some(
                LebesgueSpace::new(
                    parse_exponent(&d.exponent)?.build(truncation)?,
                    parse_weight(&d.weight)?.build()?,
                )
                .with_truncation(truncation)?
                .with_quadrature(quad),
            ),
        };
        let exhaustion = match &self.exhaustion {
            None => None,
            Some(e) => Some((Interval::new(e.omega[0], e.omega[1])?, e.j_max)),
        };
        let balls = self
            .balls
            .iter()
            .map(|b| Interval::new(b[0], b[1]))
            .collect::<varnorm_core::Result<Vec<_>>>()?;

        Ok(Scenario {
            amalgam: AmalgamSpace::new(space.clone(), self.q.resolve()?),
            sobolev: SobolevSpace::new(space.clone(), self.order),
            lebesgue: space,
            exponent,
            weight,
            ladders,
            quad,
            truncation,
            functions,
            generator,
            sequence_generator,
            sequences,
            destination,
            exhaustion,
            balls,
        })
    }
}

/// A configuration with every expression parsed and every space built.
pub struct Scenario {
    pub lebesgue: LebesgueSpace,
    pub amalgam: AmalgamSpace,
    pub sobolev: SobolevSpace,
    pub exponent: ExponentField,
    pub weight: WeightField,
    pub ladders: Ladders,
    pub quad: QuadratureSettings,
    pub truncation: Interval,
    /// `(source text, function)` for every explicit member.
    pub functions: Vec<(String, RealFunction)>,
    pub generator: Option<FamilyGenerator>,
    pub sequence_generator: Option<SequenceGenerator>,
    pub sequences: Vec<WeightedSequence>,
    pub destination: Option<LebesgueSpace>,
    pub exhaustion: Option<(Interval, usize)>,
    pub balls: Vec<Interval>,
}
