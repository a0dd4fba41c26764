//! Report documents: sorted-key JSON plus optional CSV curves.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use varnorm_core::compactness::{
    CompactnessReport, CriterionCurve, LocalReport, NetOracle, SobolevReport, TransferReport,
};

use crate::error::CliError;
use crate::expr::format_number;

pub const SCHEMA_VERSION: u32 = 1;

/// One command's output.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    /// The resolved configuration.
    pub config: Value,
    pub result: Value,
    /// Named curves exported by `--csv`.
    pub curves: Vec<(String, CriterionCurve)>,
    pub wall_time: Option<f64>,
}

impl Report {
    pub fn new(command: &str, config: Value, result: Value) -> Self {
        Self {
            command: command.into(),
            config,
            result,
            curves: Vec::new(),
            wall_time: None,
        }
    }

    pub fn document(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "result": self.result,
            "versions": {
                "varnorm": env!("CARGO_PKG_VERSION"),
                "varnorm_core": varnorm_core::VERSION,
            },
            "wall_time_seconds": self.wall_time,
        })
    }

    /// Pretty JSON with sorted keys and shortest round-trip floats.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document()).expect("values serialize");
        s.push('\n');
        s
    }
}

pub fn curve_csv(curve: &CriterionCurve) -> String {
    let mut s = String::from("parameter,sup_value\n");
    for (p, v) in curve.parameter_values.iter().zip(&curve.sup_values) {
        s.push_str(&format!("{},{}\n", format_number(*p), format_number(*v)));
    }
    s
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

pub fn write_csv_dir(dir: &Path, curves: &[(String, CriterionCurve)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for (name, c) in curves {
        write_atomic(&dir.join(format!("{name}.csv")), curve_csv(c).as_bytes())?;
    }
    Ok(())
}

pub fn curve_json(c: &CriterionCurve) -> Value {
    json!({ "parameter_values": c.parameter_values, "sup_values": c.sup_values })
}

pub fn net_json(n: &NetOracle) -> Value {
    json!({
        "eps": n.eps,
        "levels": n.levels,
        "net_sizes": n.net_sizes,
        "oracle_verdict": n.verdict.as_str(),
    })
}

pub fn compactness_json(r: &CompactnessReport) -> Value {
    let mut m = Map::new();
    m.insert("bound".into(), json!(r.bound));
    m.insert("tail_curve".into(), curve_json(&r.tail_curve));
    m.insert(
        "approx_curve".into(),
        r.approx
            .as_ref()
            .map_or(Value::Null, |(_, c)| curve_json(c)),
    );
    m.insert(
        "mode".into(),
        r.approx
            .as_ref()
            .map_or(Value::Null, |(mode, _)| json!(mode.as_str())),
    );
    m.insert(
        "verdicts".into(),
        json!({
            "bound": r.bound_verdict.as_str(),
            "tail": r.tail_verdict.as_str(),
            "approx": r.approx_verdict.as_str(),
            "overall": r.verdict.as_str(),
        }),
    );
    m.insert("net".into(), r.net.as_ref().map_or(Value::Null, net_json));
    Value::Object(m)
}

/// Curves of a report under `prefix`.
pub fn compactness_curves(prefix: &str, r: &CompactnessReport) -> Vec<(String, CriterionCurve)> {
    let mut out = vec![(format!("{prefix}tail"), r.tail_curve.clone())];
    if let Some((mode, c)) = &r.approx {
        out.push((format!("{prefix}approx_{}", mode.as_str()), c.clone()));
    }
    out
}

pub fn sobolev_json(r: &SobolevReport) -> Value {
    json!({
        "orders": r.orders.iter().map(compactness_json).collect::<Vec<_>>(),
        "verdict": r.verdict.as_str(),
    })
}

pub fn local_json(r: &LocalReport) -> Value {
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| {
            json!({
                "j": l.j,
                "k_j": l.k_j.map(|k| [k.lo(), k.hi()]),
                "report": compactness_json(&l.report),
            })
        })
        .collect();
    json!({ "levels": levels, "verdict": r.verdict.as_str() })
}

pub fn transfer_json(r: &TransferReport) -> Value {
    json!({
        "sobolev_bound": r.sobolev_bound,
        "sobolev_tail_curve": curve_json(&r.sobolev_tail_curve),
        "hypothesis": r.hypothesis.as_str(),
        "destination": compactness_json(&r.destination),
        "embedding_ratio": r.embedding_ratio,
        "consistent": r.consistent,
    })
}
