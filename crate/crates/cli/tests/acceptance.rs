//! Acceptance run: every criterion end to end through the command line, one
//! PASS/FAIL line each. Exits nonzero when any criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use serde_json::{json, Value};
use tempfile::TempDir;
use varnorm::config::ScenarioConfig;
use varnorm::suites;
use varnorm_core::compactness::{lebesgue_report, FunctionFamily, Sequential, Verdict};
use varnorm_core::sobolev::derivative;
use varnorm_core::RealFunction;

const SEED: &str = "7";

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

/// Runs a command in process; the report goes through `--out`.
fn run(
    dir: &Path,
    tag: &str,
    command: &str,
    config: Option<&Value>,
    extra: &[&str],
) -> Result<(i32, String), String> {
    let out = dir.join(format!("{tag}.out.json"));
    let mut args = vec![
        "varnorm".to_string(),
        command.to_string(),
        "--out".into(),
        out.display().to_string(),
    ];
    if let Some(cfg) = config {
        let path = dir.join(format!("{tag}.config.json"));
        fs::write(&path, cfg.to_string()).map_err(|e| e.to_string())?;
        args.extend(["--config".into(), path.display().to_string()]);
    }
    args.extend(extra.iter().map(|s| s.to_string()));
    let code = varnorm::run(args);
    let text =
        fs::read_to_string(&out).map_err(|e| format!("{tag}: no report ({e}), exit {code}"))?;
    Ok((code, text))
}

fn report(dir: &Path, tag: &str, command: &str, config: &Value) -> Result<Value, String> {
    let (code, text) = run(dir, tag, command, Some(config), &[])?;
    check(code == 0, format!("{tag}: exit {code}"))?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

struct Suites {
    first: String,
    second: String,
    doc: Value,
}

impl Suites {
    fn new(dir: &Path) -> Result<Self, String> {
        let (c1, first) = run(
            dir,
            "verify-1",
            "verify",
            None,
            &["--suite", "all", "--seed", SEED],
        )?;
        let (c2, second) = run(
            dir,
            "verify-2",
            "verify",
            None,
            &["--suite", "all", "--seed", SEED],
        )?;
        check(c1 == 0 && c2 == 0, format!("verify exit codes {c1}, {c2}"))?;
        let doc = serde_json::from_str(&first).map_err(|e| e.to_string())?;
        Ok(Self { first, second, doc })
    }

    fn suite(&self, name: &str) -> &Value {
        &self.doc["result"]["suites"][name]
    }

    /// Scenario count, zero violations and the largest error.
    fn clean(&self, name: &str, scenarios: usize) -> Result<f64, String> {
        let s = self.suite(name);
        let n = s["scenarios"].as_u64().unwrap_or(0) as usize;
        let v = s["violations"].as_u64().unwrap_or(u64::MAX);
        check(
            n == scenarios,
            format!("{name}: {n} scenarios, expected {scenarios}"),
        )?;
        check(v == 0, format!("{name}: {v} violations: {}", s["failures"]))?;
        s["max_error"]
            .as_f64()
            .ok_or_else(|| format!("{name}: max_error is not finite"))
    }
}

fn unit_ball(s: &Suites) -> Outcome {
    check(
        suites::UNIT_BALL_TOL == 1e-6 && suites::HOMOGENEITY_TOL == 1e-7,
        "tolerances",
    )?;
    let e = s.clean("unit_ball", 200)?;
    // The suite error is normalized by the tolerances.
    check(e <= 1.0, format!("normalized error {e}"))?;
    Ok(format!(
        "200 scenarios, worst {e:.3} of tolerance (1e-6 unit ball, 1e-7 homogeneity)"
    ))
}

fn sandwich(s: &Suites) -> Outcome {
    let e = s.clean("sandwich", 200)?;
    check(e <= 1e-6, format!("relative excess {e}"))?;
    Ok(format!("200 scenarios, worst relative excess {e:.2e}"))
}

fn holder(s: &Suites) -> Outcome {
    let a = s.clean("holder", 100)?;
    let b = s.clean("amalgam_holder", 100)?;
    check(a <= 1.0 && b <= 1.0, format!("lhs/rhs {a}, {b}"))?;
    Ok(format!(
        "100 + 100 scenarios, worst lhs/(2 rhs) {a:.3} and {b:.3}"
    ))
}

fn support_bound(s: &Suites) -> Outcome {
    let e = s.clean("support_bound", 101)?;
    let a = &s.suite("support_bound")["details"]["analytic"];
    let (lhs, rhs) = (
        a["lhs"].as_f64().unwrap_or(f64::NAN),
        a["rhs"].as_f64().unwrap_or(f64::NAN),
    );
    check(
        (lhs - 2f64.sqrt()).abs() < 1e-9 && (rhs - 2.0).abs() < 1e-12,
        format!("chi(0,2): {lhs} vs {rhs}"),
    )?;
    check(lhs <= rhs + 1e-9, format!("chi(0,2): {lhs} > {rhs}"))?;
    check(e <= 1.0 + 1e-9, format!("lhs/rhs {e}"))?;
    Ok(format!(
        "100 scenarios + chi(0,2), q=2: {lhs:.12} <= {rhs:.12}"
    ))
}

fn closed_form(s: &Suites) -> Outcome {
    let e = s.clean("closed_form", 6)?;
    check(e <= 1e-6, format!("deviation {e}"))?;
    let rows = s.suite("closed_form")["details"]["cases"]
        .as_array()
        .cloned()
        .unwrap_or_default();
    let norm_of = |f: &str| {
        rows.iter()
            .find(|r| r["function"] == f)
            .and_then(|r| r["norm"].as_f64())
    };
    let chi = norm_of("chi(0,1)").ok_or("chi(0,1) missing")?;
    let gauss = norm_of("gauss(0,1)").ok_or("gauss(0,1) missing")?;
    let exact = std::f64::consts::FRAC_PI_2.powf(0.25);
    check(
        (chi - 1.0).abs() <= 1e-6 && (gauss - exact).abs() <= 1e-6,
        "named cases",
    )?;
    Ok(format!(
        "6 cases, worst deviation {e:.1e}; chi(0,1) -> {chi:.12}, e^(-x^2) -> {gauss:.12}"
    ))
}

fn domination(s: &Suites) -> Outcome {
    let n = suites::DOMINATION_FUNCTIONS
        * suites::DOMINATION_POINTS
        * suites::DOMINATION_EPSILONS.len();
    check(n == 20 * 256 * 4, "grid size")?;
    let e = s.clean("domination", n)?;
    Ok(format!(
        "{n} comparisons, worst excess over Mf + 1e-6: {e:.1e}"
    ))
}

fn convergence(s: &Suites) -> Outcome {
    let e = s.clean("convergence", 40)?;
    check(e < 1e-3, format!("finest error {e}"))?;
    Ok(format!(
        "10 functions x 2 operators x 2 norms, strictly decreasing, worst finest {e:.2e}"
    ))
}

fn canonical_families() -> Vec<(&'static str, Value)> {
    let net = |eps: f64| json!({ "eps": eps, "levels": [1, 5] });
    vec![
        (
            "singleton",
            json!({ "functions": ["bump(0,2)"], "net": net(0.5) }),
        ),
        (
            "bump dilates",
            json!({ "family": { "kind": "dilates", "base": "bump(0,2)", "s_min": 1, "s_max": 2, "level": 5 }, "net": net(0.25) }),
        ),
        (
            "geometric sequences",
            json!({ "space": "sequence", "family": { "kind": "geometric", "length": 64, "p": 2, "r_max": 0.5, "level": 5 }, "net": net(0.5) }),
        ),
        (
            "oscillations",
            json!({ "family": { "kind": "oscillations", "envelope": "chi(0,1)", "level": 5 }, "net": net(0.5) }),
        ),
        (
            "runaway translates",
            json!({ "space": "amalgam", "q": 2, "family": { "kind": "translates", "base": "bump(0,2)", "step": 1.5, "level": 5 }, "net": net(0.5) }),
        ),
        (
            "unit vectors",
            json!({ "space": "sequence", "family": { "kind": "unit_vectors", "length": 64, "p": 2, "level": 5 }, "net": net(0.5) }),
        ),
    ]
}

fn net_agreement(dir: &Path) -> Outcome {
    let mut agree = 0;
    let mut summary = Vec::new();
    let families = canonical_families();
    for (i, (name, cfg)) in families.iter().enumerate() {
        let doc = report(dir, &format!("net-{i}"), "compactness", cfg)?;
        let r = &doc["result"]["report"];
        let verdict = doc["result"]["verdict"].as_str().unwrap_or("?");
        let sizes = &r["net"]["net_sizes"];
        let n: Vec<u64> = sizes
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_u64)
            .collect();
        let stable = n.len() >= 2 && n[n.len() - 1] == n[n.len() - 2];
        if (verdict == "pass") == stable {
            agree += 1;
        }
        summary.push(format!("{name} {verdict} {sizes}"));
    }
    check(
        agree == families.len(),
        format!("{agree}/{}: {}", families.len(), summary.join("; ")),
    )?;
    Ok(format!(
        "{agree}/{} agree: {}",
        families.len(),
        summary.join("; ")
    ))
}

fn sobolev_families() -> Vec<(&'static str, Value)> {
    let fine = json!({ "epsilons": [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125] });
    let dilates = |base: &str, lo: f64, hi: f64| json!({ "kind": "dilates", "base": base, "s_min": lo, "s_max": hi, "level": 2 });
    let mut out = vec![
        (
            "bump k=1, fine ladder",
            json!({ "functions": ["bump(0,2)"], "order": 1, "ladders": fine }),
        ),
        (
            "gauss k=2, fine ladder",
            json!({ "functions": ["gauss(0,1)"], "order": 2, "ladders": fine }),
        ),
        (
            "bump dilates k=0",
            json!({ "family": dilates("bump(0,2)", 1.0, 2.0), "order": 0 }),
        ),
        (
            "bump dilates k=1",
            json!({ "family": dilates("bump(0,2)", 1.0, 2.0), "order": 1 }),
        ),
        (
            "bump dilates k=2",
            json!({ "family": dilates("bump(0,2)", 1.0, 2.0), "order": 2 }),
        ),
        (
            "bump dilates k=1, averages",
            json!({ "family": dilates("bump(0,2)", 1.0, 2.0), "order": 1, "mode": "average" }),
        ),
        (
            "gauss dilates k=1",
            json!({ "family": dilates("gauss(0,1)", 0.5, 1.0), "order": 1 }),
        ),
        (
            "runaway translates k=1",
            json!({ "family": { "kind": "translates", "base": "bump(0,2)", "step": 6, "level": 3 }, "order": 1 }),
        ),
        (
            "gauss translates k=1, translations",
            json!({ "family": { "kind": "translates", "base": "gauss(0,1)", "step": 1.5, "level": 3 }, "order": 1, "mode": "translation" }),
        ),
        (
            "oscillations k=1",
            json!({ "family": { "kind": "oscillations", "envelope": "bump(0,1)", "level": 2 }, "order": 1 }),
        ),
        (
            "amplitudes k=1",
            json!({ "functions": ["scale(bump(0,1),0.5)", "scale(bump(0,1),2)", "scale(bump(0,1),4)", "scale(bump(0,1),40)"], "order": 1 }),
        ),
        (
            "weighted k=1",
            json!({ "functions": ["bump(0,2)", "gauss(1,0.5)"], "order": 1, "exponent": "loghold(2,0.5)", "weight": "expw(0.2)" }),
        ),
    ];
    for (_, cfg) in &mut out {
        cfg["space"] = json!("sobolev");
    }
    out
}

/// Members of a configured family, as the configuration defines them.
fn members(cfg: &ScenarioConfig) -> Result<Vec<RealFunction>, String> {
    let sc = cfg.resolve().map_err(|e| e.to_string())?;
    match (&sc.generator, &cfg.family) {
        (Some(g), Some(spec)) => Ok(g
            .family(spec.level())
            .map_err(|e| e.to_string())?
            .members()
            .to_vec()),
        _ => Ok(sc.functions.into_iter().map(|(_, f)| f).collect()),
    }
}

/// Conjunction of per-order Lebesgue verdicts, built from the derivatives
/// of each member.
fn independent_verdict(cfg: &ScenarioConfig) -> Result<Verdict, String> {
    let sc = cfg.resolve().map_err(|e| e.to_string())?;
    let fs = members(cfg)?;
    let mut verdicts = Vec::new();
    for j in 0..=cfg.order {
        let d = fs
            .iter()
            .map(|f| derivative(f, j))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let fam = FunctionFamily::new(format!("order {j}"), d).map_err(|e| e.to_string())?;
        let r = lebesgue_report(
            &fam,
            &sc.lebesgue,
            cfg.mode.into(),
            &sc.ladders,
            &Sequential,
        )
        .map_err(|e| e.to_string())?;
        verdicts.push(r.verdict);
    }
    Ok(if verdicts.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if verdicts.contains(&Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    })
}

fn sobolev_reduction(dir: &Path) -> Outcome {
    let families = sobolev_families();
    let mut equal = 0;
    let mut counts = [0usize; 3];
    let mut mismatches = Vec::new();
    for (i, (name, cfg)) in families.iter().enumerate() {
        let doc = report(dir, &format!("sobolev-{i}"), "compactness", cfg)?;
        let reported = doc["result"]["verdict"].as_str().unwrap_or("?").to_string();
        let parsed: ScenarioConfig =
            serde_json::from_value(cfg.clone()).map_err(|e| e.to_string())?;
        let expected = independent_verdict(&parsed)?;
        if reported == expected.as_str() {
            equal += 1;
        } else {
            mismatches.push(format!("{name}: {reported} vs {}", expected.as_str()));
        }
        counts[match expected {
            Verdict::Pass => 0,
            Verdict::Inconclusive => 1,
            Verdict::Fail => 2,
        }] += 1;
    }
    check(mismatches.is_empty(), mismatches.join("; "))?;
    Ok(format!(
        "{equal}/{} equal ({} pass, {} inconclusive, {} fail)",
        families.len(),
        counts[0],
        counts[1],
        counts[2]
    ))
}

fn transfer(dir: &Path) -> Outcome {
    let dst = json!({ "exponent": "const(3)", "weight": "const(1)" });
    let mut families = vec![
        (
            "bump dilates",
            json!({ "family": { "kind": "dilates", "base": "bump(0,2)", "s_min": 1, "s_max": 2, "level": 3 } }),
        ),
        ("bump", json!({ "functions": ["bump(0,2)"] })),
        (
            "runaway translates",
            json!({ "family": { "kind": "translates", "base": "bump(0,2)", "step": 6, "level": 3 } }),
        ),
        (
            "amplitudes",
            json!({ "functions": ["scale(bump(0,1),0.5)", "scale(bump(0,1),40)"] }),
        ),
        (
            "oscillations",
            json!({ "family": { "kind": "oscillations", "envelope": "bump(0,1)", "level": 2 } }),
        ),
        (
            "weighted",
            json!({ "functions": ["bump(0,2)", "gauss(1,0.5)"], "exponent": "loghold(2,0.5)", "weight": "expw(0.2)",
                    "destination": { "exponent": "loghold(2.5,0.5)", "weight": "const(1)" } }),
        ),
    ];
    for (_, cfg) in &mut families {
        cfg["space"] = json!("sobolev");
        cfg["order"] = json!(1);
        if cfg.get("destination").is_none() {
            cfg["destination"] = dst.clone();
        }
    }
    let mut contradictions = Vec::new();
    let mut dilates = None;
    let mut summary = Vec::new();
    for (i, (name, cfg)) in families.iter().enumerate() {
        let doc = report(dir, &format!("transfer-{i}"), "compactness", cfg)?;
        let t = &doc["result"]["transfer"];
        let hyp = t["hypothesis"].as_str().unwrap_or("?");
        let dest = t["destination"]["verdicts"]["overall"]
            .as_str()
            .unwrap_or("?");
        if hyp == "pass" && dest == "fail" {
            contradictions.push(name.to_string());
        }
        if *name == "bump dilates" {
            dilates = Some((
                hyp.to_string(),
                dest.to_string(),
                t["embedding_ratio"].as_f64(),
            ));
        }
        summary.push(format!("{name} {hyp}/{dest}"));
    }
    check(
        contradictions.is_empty(),
        format!("hypothesis pass with destination fail: {contradictions:?}"),
    )?;
    let (hyp, dest, ratio) = dilates.ok_or("bump dilates missing")?;
    check(
        hyp == "pass" && dest == "pass",
        format!("bump dilates {hyp}/{dest}"),
    )?;
    let ratio = ratio.ok_or("embedding ratio not reported")?;
    check(
        ratio.is_finite() && ratio > 0.0,
        format!("embedding ratio {ratio}"),
    )?;
    Ok(format!(
        "0 contradictions over {} families ({}); bump dilates ratio {ratio:.4}",
        families.len(),
        summary.join(", ")
    ))
}

fn determinism(s: &Suites) -> Outcome {
    check(
        !s.first.is_empty() && s.first == s.second,
        "verify reports differ",
    )?;
    Ok(format!(
        "two runs of verify --suite all --seed {SEED}: {} identical bytes",
        s.first.len()
    ))
}

fn main() -> ExitCode {
    let dir = TempDir::new().expect("temporary directory");
    let d = dir.path();
    let start = Instant::now();
    let suites = Suites::new(d);
    let suite_time = start.elapsed().as_secs_f64() / 2.0;
    let from_suites = |f: fn(&Suites) -> Outcome| -> Outcome {
        match &suites {
            Ok(s) => f(s),
            Err(e) => Err(e.clone()),
        }
    };

    let mut failed = 0;
    let mut line = |n: u32, title: &str, secs: f64, o: Outcome| {
        let (tag, text) = match o {
            Ok(t) => ("PASS", t),
            Err(t) => {
                failed += 1;
                ("FAIL", t)
            }
        };
        println!("criterion {n:>2} {tag} [{secs:6.1}s] {title}: {text}");
    };
    println!("acceptance: verify --suite all --seed {SEED} took {suite_time:.1}s per run");
    line(1, "Luxemburg unit ball", 0.0, from_suites(unit_ball));
    line(2, "norm-modular sandwich", 0.0, from_suites(sandwich));
    line(3, "Hoelder inequalities", 0.0, from_suites(holder));
    line(4, "support bound", 0.0, from_suites(support_bound));
    line(
        5,
        "constant-exponent closed forms",
        0.0,
        from_suites(closed_form),
    );
    line(6, "pointwise domination", 0.0, from_suites(domination));
    line(
        7,
        "mollifier and ball-average convergence",
        0.0,
        from_suites(convergence),
    );
    let t = Instant::now();
    let o = net_agreement(d);
    line(8, "criteria vs net oracle", t.elapsed().as_secs_f64(), o);
    let t = Instant::now();
    let o = sobolev_reduction(d);
    line(9, "Sobolev reduction", t.elapsed().as_secs_f64(), o);
    let t = Instant::now();
    let o = transfer(d);
    line(10, "embedding transfer", t.elapsed().as_secs_f64(), o);
    line(
        11,
        "determinism",
        suite_time * 2.0,
        from_suites(determinism),
    );

    if failed == 0 {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
