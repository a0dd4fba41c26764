//! One function per subcommand; each returns a report.

use serde_json::{json, Value};
use varnorm_core::compactness::{
    amalgam_report, embedding_transfer_report, lebesgue_report, lloc_report, maximal_ratio,
    net_oracle, sequence_net_oracle, sequence_report, sobolev_report, CompactnessReport,
    FamilyGenerator, FunctionFamily, NetMetric, NetOracle, SequenceGenerator,
};
use varnorm_core::operators::{maximal, RadiusGrid};
use varnorm_core::sequence::{seq_modular, seq_norm, WeightedSequence};
use varnorm_core::spaces::estimate_apx_constant;
use varnorm_core::RealFunction;

use crate::config::{Scenario, ScenarioConfig, SpaceKind};
use crate::error::CliError;
use crate::exec::Parallel;
use crate::report::{
    compactness_curves, compactness_json, local_json, net_json, sobolev_json, transfer_json, Report,
};

fn echo(cfg: &ScenarioConfig) -> Value {
    serde_json::to_value(cfg).expect("configuration serializes")
}

/// Labelled members at the configured level.
fn members(cfg: &ScenarioConfig, sc: &Scenario) -> Result<Vec<(String, RealFunction)>, CliError> {
    if let (Some(g), Some(spec)) = (&sc.generator, &cfg.family) {
        let fam = g.family(spec.level())?;
        let kind = g.kind();
        return Ok(fam
            .generator
            .parameters
            .iter()
            .zip(fam.members())
            .map(|(p, f)| (format!("{kind}({p})"), f.clone()))
            .collect());
    }
    if sc.functions.is_empty() {
        return Err(CliError::Config(
            "no functions: set \"functions\" or \"family\"".into(),
        ));
    }
    Ok(sc.functions.clone())
}

fn family(cfg: &ScenarioConfig, sc: &Scenario) -> Result<FunctionFamily, CliError> {
    if let (Some(g), Some(spec)) = (&sc.generator, &cfg.family) {
        return Ok(g.family(spec.level())?);
    }
    let m = members(cfg, sc)?;
    Ok(FunctionFamily::new(
        "functions",
        m.into_iter().map(|(_, f)| f).collect(),
    )?)
}

fn sequences(cfg: &ScenarioConfig, sc: &Scenario) -> Result<Vec<WeightedSequence>, CliError> {
    if let (Some(g), Some(spec)) = (&sc.sequence_generator, &cfg.family) {
        return Ok(g.family(spec.level())?);
    }
    if sc.sequences.is_empty() {
        return Err(CliError::Config(
            "no sequences: set \"sequences\" or a sequence \"family\"".into(),
        ));
    }
    Ok(sc.sequences.clone())
}

fn seq_values(
    seqs: &[WeightedSequence],
    name: &str,
    f: impl Fn(&WeightedSequence) -> varnorm_core::Result<f64>,
) -> Result<Value, CliError> {
    let mut out = Vec::with_capacity(seqs.len());
    for (i, s) in seqs.iter().enumerate() {
        out.push(json!({ "index": i, name: f(s)? }));
    }
    Ok(Value::Array(out))
}

pub fn norm(cfg: &ScenarioConfig, exec: &Parallel) -> Result<Report, CliError> {
    let sc = cfg.resolve()?;
    let values = if cfg.space == SpaceKind::Sequence {
        seq_values(&sequences(cfg, &sc)?, "norm", seq_norm)?
    } else {
        let m = members(cfg, &sc)?;
        let rows = exec.map(m.len(), |i| -> Result<Value, CliError> {
            let (label, f) = &m[i];
            Ok(match cfg.space {
                SpaceKind::Lebesgue => json!({ "function": label, "norm": sc.lebesgue.norm(f)? }),
                SpaceKind::Amalgam => {
                    let cells: Vec<(i64, f64)> =
                        sc.amalgam.cell_norms(f)?.norms.into_iter().collect();
                    json!({ "function": label, "norm": sc.amalgam.norm(f)?, "cell_norms": cells })
                }
                SpaceKind::Sobolev => json!({
                    "function": label,
                    "norm": sc.sobolev.norm(f)?,
                    "order_norms": sc.sobolev.order_norms(f)?,
                }),
                SpaceKind::Sequence => unreachable!("handled above"),
            })
        });
        Value::Array(rows.into_iter().collect::<Result<_, _>>()?)
    };
    Ok(Report::new("norm", echo(cfg), json!({ "values": values })))
}

pub fn modular(cfg: &ScenarioConfig, exec: &Parallel) -> Result<Report, CliError> {
    let sc = cfg.resolve()?;
    let values = match cfg.space {
        SpaceKind::Sequence => {
            seq_values(&sequences(cfg, &sc)?, "modular", |s| seq_modular(s, 1.0))?
        }
        SpaceKind::Amalgam => {
            return Err(CliError::Usage(
                "the amalgam norm has no modular; use the norm command".into(),
            ))
        }
        space => {
            let m = members(cfg, &sc)?;
            let rows = exec.map(m.len(), |i| -> Result<Value, CliError> {
                let (label, f) = &m[i];
                let v = if space == SpaceKind::Sobolev {
                    sc.sobolev.modular(f)?
                } else {
                    sc.lebesgue.modular(f)?
                };
                Ok(json!({ "function": label, "modular": v }))
            });
            Value::Array(rows.into_iter().collect::<Result<_, _>>()?)
        }
    };
    Ok(Report::new(
        "modular",
        echo(cfg),
        json!({ "values": values }),
    ))
}

pub fn maximal_cmd(cfg: &ScenarioConfig, exec: &Parallel) -> Result<Report, CliError> {
    let sc = cfg.resolve()?;
    let reach = sc.truncation.lo().abs().max(sc.truncation.hi().abs());
    let grid = RadiusGrid::for_truncation(reach)?;
    let m = members(cfg, &sc)?;
    let mut rows = Vec::with_capacity(m.len());
    for (label, f) in &m {
        let values = exec
            .map(cfg.points.len(), |i| maximal(f, cfg.points[i], &grid))
            .into_iter()
            .collect::<varnorm_core::Result<Vec<_>>>()?;
        rows.push(json!({ "function": label, "points": cfg.points, "values": values }));
    }
    let ratio = if cfg.maximal_ratio {
        json!(maximal_ratio(
            &family(cfg, &sc)?,
            &sc.lebesgue,
            &grid,
            exec
        )?)
    } else {
        Value::Null
    };
    let result = json!({
        "radius_grid": { "r_min": grid.r_min(), "r_max": grid.r_max(), "count": grid.count() },
        "values": rows,
        "norm_ratio": ratio,
    });
    Ok(Report::new("maximal", echo(cfg), result))
}

fn net_for(
    cfg: &ScenarioConfig,
    sc: &Scenario,
    exec: &Parallel,
) -> Result<Option<NetOracle>, CliError> {
    let Some(net) = &cfg.net else {
        return Ok(None);
    };
    let levels = net.levels[0]..=net.levels[1];
    if cfg.space == SpaceKind::Sequence {
        let fixed = SequenceGenerator::Fixed(sc.sequences.clone());
        let g = sc.sequence_generator.as_ref().unwrap_or(&fixed);
        return Ok(Some(sequence_net_oracle(|l| g.family(l), net.eps, levels)?));
    }
    let fixed = FamilyGenerator::Fixed(sc.functions.iter().map(|(_, f)| f.clone()).collect());
    let g = sc.generator.as_ref().unwrap_or(&fixed);
    let metric = match cfg.space {
        SpaceKind::Amalgam => NetMetric::Amalgam(&sc.amalgam),
        SpaceKind::Sobolev => NetMetric::Sobolev(&sc.sobolev),
        _ => NetMetric::Lebesgue(&sc.lebesgue),
    };
    Ok(Some(net_oracle(
        |l| g.family(l),
        metric,
        net.eps,
        levels,
        exec,
    )?))
}

fn attach(r: CompactnessReport, net: Option<NetOracle>) -> CompactnessReport {
    match net {
        Some(n) => r.with_net(n),
        None => r,
    }
}

pub fn compactness(cfg: &ScenarioConfig, exec: &Parallel) -> Result<Report, CliError> {
    let sc = cfg.resolve()?;
    let net = net_for(cfg, &sc, exec)?;
    let mode = cfg.mode.into();
    let mut curves = Vec::new();
    let result = match cfg.space {
        SpaceKind::Sequence => {
            let r = attach(sequence_report(&sequences(cfg, &sc)?, &sc.ladders)?, net);
            curves.extend(compactness_curves("", &r));
            json!({ "report": compactness_json(&r), "verdict": r.verdict.as_str() })
        }
        SpaceKind::Amalgam => {
            let r = attach(
                amalgam_report(&family(cfg, &sc)?, &sc.amalgam, mode, &sc.ladders, exec)?,
                net,
            );
            curves.extend(compactness_curves("", &r));
            json!({ "report": compactness_json(&r), "verdict": r.verdict.as_str() })
        }
        SpaceKind::Lebesgue => match sc.exhaustion {
            Some((omega, j_max)) => {
                let r = lloc_report(
                    &family(cfg, &sc)?,
                    &sc.lebesgue,
                    omega,
                    j_max,
                    &sc.ladders,
                    exec,
                )?;
                for l in &r.levels {
                    curves.extend(compactness_curves(&format!("j{}_", l.j), &l.report));
                }
                json!({ "local": local_json(&r), "net": net.as_ref().map(net_json), "verdict": r.verdict.as_str() })
            }
            None => {
                let r = attach(
                    lebesgue_report(&family(cfg, &sc)?, &sc.lebesgue, mode, &sc.ladders, exec)?,
                    net,
                );
                curves.extend(compactness_curves("", &r));
                json!({ "report": compactness_json(&r), "verdict": r.verdict.as_str() })
            }
        },
        SpaceKind::Sobolev => {
            let fam = family(cfg, &sc)?;
            let r = sobolev_report(&fam, &sc.sobolev, mode, &sc.ladders, exec)?;
            for (j, o) in r.orders.iter().enumerate() {
                curves.extend(compactness_curves(&format!("order{j}_"), o));
            }
            let transfer = match &sc.destination {
                Some(dst) => {
                    let t = embedding_transfer_report(&fam, &sc.sobolev, dst, &sc.ladders, exec)?;
                    curves.push(("transfer_sobolev_tail".into(), t.sobolev_tail_curve.clone()));
                    curves.extend(compactness_curves("transfer_", &t.destination));
                    transfer_json(&t)
                }
                None => Value::Null,
            };
            json!({
                "sobolev": sobolev_json(&r),
                "transfer": transfer,
                "net": net.as_ref().map(net_json),
                "verdict": r.verdict.as_str(),
            })
        }
    };
    let mut report = Report::new("compactness", echo(cfg), result);
    report.curves = curves;
    Ok(report)
}

pub fn net(cfg: &ScenarioConfig, exec: &Parallel) -> Result<Report, CliError> {
    if cfg.net.is_none() {
        return Err(CliError::Config(
            "the net command needs a \"net\" block".into(),
        ));
    }
    let sc = cfg.resolve()?;
    let n = net_for(cfg, &sc, exec)?.expect("net block present");
    Ok(Report::new("net", echo(cfg), net_json(&n)))
}

pub fn apx(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    let sc = cfg.resolve()?;
    let e = estimate_apx_constant(&sc.weight, &sc.exponent, &sc.balls, &sc.quad)?;
    let result = json!({
        "constant_estimate": e.constant_estimate,
        "finite": e.finite,
        "worst_ball": [e.worst_ball.lo(), e.worst_ball.hi()],
        "ball_count": e.ball_count,
        "p_b_values": e.p_b_values,
        "ball_terms": e.ball_terms,
    });
    Ok(Report::new("apx", echo(cfg), result))
}
