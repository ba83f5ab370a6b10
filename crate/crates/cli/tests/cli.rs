use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Value,
    stderr: String,
}

fn henkin(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_henkin"));
    cmd.args(args).env_remove("HENKIN_CAP_TABLES");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    let stdout = String::from_utf8(stdout).unwrap();
    Run {
        code: status.code().unwrap(),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    henkin(args, &[])
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn full_binary(k: usize) -> Vec<String> {
    (0..1u32 << (k * k))
        .map(|c| format!("{:0w$b}", c, w = k * k))
        .collect()
}

fn standard2(dir: &TempDir) -> PathBuf {
    write(
        dir,
        "standard.json",
        &json!({
            "individuals": ["1", "2"],
            "domains": { "1": ["00", "01", "10", "11"], "2": full_binary(2) }
        }),
    )
}

fn starved2(dir: &TempDir) -> PathBuf {
    write(
        dir,
        "starved.json",
        &json!({
            "individuals": ["1", "2"],
            "domains": { "1": ["00", "01", "10", "11"], "2": ["1111"] }
        }),
    )
}

#[test]
fn parse_reports_well_formed_formulas() {
    let r = run(&["parse", "-e", "all x1 . ex A0^1 . A0^1 x1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["formula"], "all x1 . ex A0^1 . A0^1 x1");
    assert_eq!(r.report["well_formed"], true);
    assert_eq!(r.report["verdict"], true);
}

#[test]
fn malformed_input_exits_2() {
    let r = run(&["parse", "-e", "all x1 . ex x1 . A0^1 x1"]);
    assert_eq!(r.code, 2);
    assert!(r.report["error"].is_string());
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        run(&["eval", "--structure", s(&bad), "-e", "x1 = x1"]).code,
        2
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["eval", "--structure", s(&missing), "-e", "x1 = x1"]).code,
        2
    );
}

#[test]
fn eval_exit_codes_follow_the_value() {
    let dir = TempDir::new().unwrap();
    let st = standard2(&dir);
    let t = run(&["eval", "--structure", s(&st), "-e", "x1 = x1"]);
    assert_eq!(t.code, 0);
    assert_eq!(t.report["value"], true);
    let f = run(&["eval", "--structure", s(&st), "-e", "all x1 . x1 = x2"]);
    assert_eq!(f.code, 1);
    assert_eq!(f.report["value"], false);
}

#[test]
fn missing_domain_arity_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let unary = write(
        &dir,
        "unary.json",
        &json!({ "individuals": ["1", "2"], "domains": { "1": ["01"] } }),
    );
    let r = run(&[
        "eval",
        "--structure",
        s(&unary),
        "-e",
        "ex A0^2 . A0^2 x1 x1",
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn ac_holds_on_standard_and_fails_when_starved() {
    let dir = TempDir::new().unwrap();
    let ok = run(&[
        "check",
        "--structure",
        s(&standard2(&dir)),
        "--schema",
        "ac",
    ]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert_eq!(ok.report["holds"], true);

    let starved = starved2(&dir);
    let bad = run(&["check", "--structure", s(&starved), "--schema", "ac"]);
    assert_eq!(bad.code, 1);
    assert_eq!(bad.report["holds"], false);
    let ce = &bad.report["counterexample"];
    assert_eq!(ce["A1^2"], "1111");

    // the reported matrix is false under the reported assignment
    let replay = &bad.report["replay"];
    let a = write(&dir, "assignment.json", &replay["assignment"]);
    let r = run(&[
        "eval",
        "--structure",
        s(&starved),
        "-e",
        replay["formula"].as_str().unwrap(),
        "--assignment",
        s(&a),
    ]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert_eq!(r.report["value"], false);
}

#[test]
fn comprehension_counterexample_names_the_missing_table() {
    let dir = TempDir::new().unwrap();
    let st = write(
        &dir,
        "one.json",
        &json!({ "individuals": ["1", "2"], "domains": { "1": ["10"] } }),
    );
    let r = run(&[
        "check",
        "--structure",
        s(&st),
        "--schema",
        "comprehension",
        "--n",
        "1",
        "--h-expr",
        "x1 = x1",
    ]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert_eq!(r.report["missing_table"], "11");
}

#[test]
fn built_a4_model_refutes_wo1() {
    let dir = TempDir::new().unwrap();
    let desc = write(
        &dir,
        "a4.json",
        &json!({
            "individuals": ["1", "2", "3", "4"],
            "group": { "generators": ["(1 2)", "(1 2 3 4)"] },
            "filter": {
                "kind": "principal-normal",
                "generators": [{ "generators": ["(1 2 3)", "(2 3 4)"] }]
            }
        }),
    );
    let out = dir.path().join("model.json");
    let b = run(&["build-model", "--structure", s(&desc), "--out", s(&out)]);
    assert_eq!(b.code, 0, "{}", b.stderr);
    assert_eq!(b.report["group_order"], 24);
    assert_eq!(b.report["domain_sizes"], json!({ "1": 2, "2": 4 }));

    let w = run(&["check", "--structure", s(&out), "--schema", "wo1"]);
    assert_eq!(w.code, 1, "{}", w.stderr);
    assert_eq!(w.report["well_orders_in_domain"], json!([]));
}

#[test]
fn saturation_adds_the_empty_table() {
    let dir = TempDir::new().unwrap();
    let st = write(
        &dir,
        "a.json",
        &json!({ "individuals": ["a"], "domains": { "1": ["1"] } }),
    );
    let r = run(&["saturate", "--structure", s(&st), "--depth", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["domain_sizes"], json!({ "1": 2 }));
}

#[test]
fn fraenkel_sweep_finds_no_linear_order() {
    let r = run(&["fraenkel", "sweep", "--max-support", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let sweep = &r.report["sweep"];
    assert_eq!(sweep["total_linear_orders"], 0);
    assert_eq!(sweep["total_predicates"], 4 + 32 + 1024);
    assert_eq!(sweep["all_failures_witnessed"], true);
}

#[test]
fn fraenkel_eval_with_a_binding() {
    let dir = TempDir::new().unwrap();
    let bind = write(
        &dir,
        "bind.json",
        &json!({
            "x1": "p",
            "A1^1": { "arity": 1, "support": ["p"], "accepted": ["p"] }
        }),
    );
    let yes = run(&["fraenkel", "eval", "-e", "A1^1 x1", "--bind", s(&bind)]);
    assert_eq!(yes.code, 0, "{}", yes.stderr);
    assert_eq!(yes.report["stratified"], false);
    let no = run(&[
        "fraenkel",
        "eval",
        "-e",
        "ex x2 . (~(x2 = x1) & A1^1 x2)",
        "--bind",
        s(&bind),
    ]);
    assert_eq!(no.code, 1);
    let strat = run(&[
        "fraenkel",
        "eval",
        "-e",
        "ex A2^1 . A2^1 x1",
        "--bind",
        s(&bind),
        "--strat",
        "0",
    ]);
    assert_eq!(strat.code, 0);
    assert_eq!(strat.report["stratified"], true);
    assert_eq!(strat.report["stratum"], 0);
}

#[test]
fn fraenkel_choice_finds_a_witness() {
    let r = run(&[
        "fraenkel",
        "choice",
        "--h-expr",
        "all x2 . (A1^1 x2 <-> x2 = x1)",
        "--strat",
        "1",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["choice"]["outcome"]["outcome"], "witness");
}

#[test]
fn table_cap_from_the_environment_exits_3() {
    let dir = TempDir::new().unwrap();
    let st = standard2(&dir);
    let ok = run(&["check", "--structure", s(&st), "--schema", "ac"]);
    assert_eq!(ok.code, 0);
    let capped = henkin(
        &["check", "--structure", s(&st), "--schema", "ac"],
        &[("HENKIN_CAP_TABLES", "4")],
    );
    assert_eq!(capped.code, 3, "{}", capped.stderr);
    assert!(capped.report["cap_hit"].is_string());
}

#[test]
fn digests_depend_on_content_only() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = |p: &Path| -> Vec<String> {
        ["eval", "--structure", s(p), "-e", "x1 = x1"]
            .map(String::from)
            .into()
    };
    let digest = |p: &Path| {
        let v = args(p);
        let v: Vec<&str> = v.iter().map(String::as_str).collect();
        run(&v).report["inputs_digest"]
            .as_str()
            .unwrap()
            .to_string()
    };
    let first = digest(&standard2(&a));
    assert_eq!(first, digest(&standard2(&a)));
    assert_eq!(first, digest(&standard2(&b)));
    assert_ne!(first, digest(&starved2(&a)));
    assert!(
        run(&["eval", "--structure", s(&standard2(&a)), "-e", "x1 = x1"]).report["elapsed_ms"]
            .is_null()
    );
}
