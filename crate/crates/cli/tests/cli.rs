use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn hbv(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbv"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn hbv")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))).unwrap()
}

/// Compiles a schema with the shared definitions inlined.
fn schema(name: &str) -> JSONSchema {
    let defs = read_json(&schema_dir().join("defs.schema.json"));
    let text = fs::read_to_string(schema_dir().join(format!("{name}.schema.json")))
        .unwrap()
        .replace("defs.schema.json#/definitions/", "#/definitions/");
    let mut s: Value = serde_json::from_str(&text).unwrap();
    s["definitions"] = defs["definitions"].clone();
    JSONSchema::compile(&s).unwrap()
}

fn assert_valid(name: &str, path: &Path) {
    let doc = read_json(path);
    let compiled = schema(name);
    if let Err(errors) = compiled.validate(&doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{} violates {name}: {msgs:#?}", path.display());
    };
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn r0_table1_values() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(tmp.path(), &["r0", "--preset", "table1"]);
    assert_eq!(code(&o), 0, "{o:?}");
    let path = tmp.path().join("r0.json");
    assert_valid("r0", &path);
    let r = read_json(&path);
    assert!((r["R0"].as_f64().unwrap() - 3.68749).abs() < 1e-5);
    assert!((r["R_s"].as_f64().unwrap() - 0.61038).abs() < 1e-5);
    let e = &r["equilibria"]["endemic"];
    for (key, want, tol) in [
        ("T1", 0.27119, 1e-5),
        ("I1", 0.13751, 1e-5),
        ("D1", 33.793, 1e-3),
        ("V1", 2.68749, 1e-5),
    ] {
        assert!((e[key].as_f64().unwrap() - want).abs() < tol, "{key} = {}", e[key]);
    }
    assert_eq!(r["rho"]["rho2"].as_f64().unwrap(), 15000.0);
    // stdout carries the same document
    assert_eq!(String::from_utf8(o.stdout).unwrap(), fs::read_to_string(&path).unwrap());
}

#[test]
fn r0_threshold_without_endemic_point() {
    let tmp = tempfile::tempdir().unwrap();
    let params = tmp.path().join("ones.json");
    fs::write(
        &params,
        r#"{"rho1": 1, "rho2": 1, "rho3": 1, "rho4": 1, "rho5": 1, "Dv": 0}"#,
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = hbv(&out, &["r0", "--params-scaled", params.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert_valid("r0", &out.join("r0.json"));
    let r = read_json(&out.join("r0.json"));
    assert_eq!(r["R0"].as_f64(), Some(1.0));
    assert!(r["equilibria"]["endemic"].is_null());
    assert!(r["R_s"].is_null());
    assert_eq!(r["source"]["kind"], "file-scaled");
}

#[test]
fn override_is_recorded_and_validated() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(tmp.path(), &["r0", "--preset", "table1", "--override", "mu=0.02"]);
    assert_eq!(code(&o), 0, "{o:?}");
    let r = read_json(&tmp.path().join("r0.json"));
    assert_eq!(r["source"]["overrides"][0], "mu=0.02");

    let bad = hbv(tmp.path(), &["r0", "--preset", "table1", "--override", "mu=0"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("mu"));
    assert_eq!(
        code(&hbv(tmp.path(), &["r0", "--preset", "table1", "--override", "nope=1"])),
        2
    );
}

#[test]
fn elasticity_outputs_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(tmp.path(), &["elasticity", "--preset", "table1"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert_valid("elasticity", &tmp.path().join("elasticity.json"));
    let rows = csv_rows(&tmp.path().join("elasticity.csv"));
    assert_eq!(rows[0], ["param", "closed_form", "finite_difference"]);
    let want = [("alpha", -1.04869), ("beta", -0.14027), ("gamma", 0.22710)];
    for (row, (name, value)) in rows[1..].iter().zip(want) {
        assert_eq!(row[0], name);
        let closed: f64 = row[1].parse().unwrap();
        let fd: f64 = row[2].parse().unwrap();
        assert!((closed - value).abs() < 1e-5, "{name}: {closed}");
        assert!((closed - fd).abs() < 1e-5);
    }
    // CSV and JSON carry the same numbers
    let json = read_json(&tmp.path().join("elasticity.json"));
    for (row, j) in rows[1..].iter().zip(json["rows"].as_array().unwrap()) {
        assert_eq!(row[1].parse::<f64>().unwrap(), j["closed_form"].as_f64().unwrap());
    }
}

#[test]
fn elasticity_step_refinement() {
    // central differences: the error shrinks with h until rounding takes over
    let tmp = tempfile::tempdir().unwrap();
    let gap = |h: &str| -> Vec<f64> {
        let out = tmp.path().join(h);
        assert_eq!(
            code(&hbv(&out, &["elasticity", "--preset", "table1", "--all", "--h", h])),
            0
        );
        csv_rows(&out.join("elasticity.csv"))[1..]
            .iter()
            .map(|r| (r[1].parse::<f64>().unwrap() - r[2].parse::<f64>().unwrap()).abs())
            .collect()
    };
    let (coarse, fine) = (gap("1e-3"), gap("1e-4"));
    assert_eq!(coarse.len(), 10);
    for (c, f) in coarse.iter().zip(&fine) {
        assert!(*f <= 1e-6, "{f}");
        assert!(*f <= c.max(1e-9), "{c} vs {f}");
    }
    let default = gap("1e-6");
    assert!(default.iter().all(|g| *g <= 1e-5));
}

#[test]
fn elasticity_rejects_scaled_input_and_bad_step() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&hbv(tmp.path(), &["elasticity", "--preset", "reference"])), 2);
    assert_eq!(
        code(&hbv(tmp.path(), &["elasticity", "--preset", "table1", "--h", "0"])),
        2
    );
}

#[test]
fn discs_reference_block() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(tmp.path(), &["discs", "--preset", "reference"]);
    assert_eq!(code(&o), 0, "{o:?}");
    let path = tmp.path().join("discs.json");
    assert_valid("discs", &path);
    let r = read_json(&path);
    assert_eq!(r["c"].as_f64(), Some(20.0));
    let bounds: Vec<(f64, f64)> = r["discs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["left"].as_f64().unwrap(), d["right"].as_f64().unwrap()))
        .collect();
    let want = [(-1.125, -1.025), (-4.025, -1.025), (-1.0, 1.0), (5.0, 395.0)];
    for ((l, h), (wl, wh)) in bounds.iter().zip(want) {
        assert!((l - wl).abs() < 1e-12 && (h - wh).abs() < 1e-12);
    }
    assert_eq!(r["partition"]["groups"], serde_json::json!([[0, 1], [2], [3]]));
    assert_eq!(r["residuals_pass"], true);
}

#[test]
fn discs_from_matrix_file() {
    let tmp = tempfile::tempdir().unwrap();
    let m = tmp.path().join("m.json");
    fs::write(&m, "[[4, 1, 0], [0.5, -3, 0.5], [0, 0, 10]]").unwrap();
    let out = tmp.path().join("out");
    assert_eq!(code(&hbv(&out, &["discs", "--matrix", m.to_str().unwrap()])), 0);
    assert_valid("discs", &out.join("discs.json"));
    let r = read_json(&out.join("discs.json"));
    assert!(r["c"].is_null() && r["source"].is_null());
    assert_eq!(r["partition"]["groups"], serde_json::json!([[1], [0], [2]]));

    fs::write(&m, "[[1, 2], [3]]").unwrap();
    assert_eq!(code(&hbv(&out, &["discs", "--matrix", m.to_str().unwrap()])), 2);
    assert_eq!(code(&hbv(&out, &["discs", "--matrix", "/nonexistent/m.json"])), 2);
}

#[test]
fn wave_reference_and_failing_speed() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(tmp.path(), &["wave", "--preset", "reference", "--c", "20,25"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert_valid("wave_summary", &tmp.path().join("summary.json"));
    for c in ["20", "25"] {
        assert_valid("conditions", &tmp.path().join(format!("conditions_{c}.json")));
        assert_valid("discs", &tmp.path().join(format!("discs_{c}.json")));
        let rows = csv_rows(&tmp.path().join(format!("profile_{c}.csv")));
        assert_eq!(rows[0], ["s", "u1", "u2", "u3", "u4", "u5"]);
        assert!(rows.len() > 2);
    }
    let s = read_json(&tmp.path().join("summary.json"));
    let runs = s["runs"].as_array().unwrap();
    assert_eq!(runs[0]["c"].as_f64(), Some(20.0));
    assert_eq!(runs[0]["overall"], true);
    assert_eq!(runs[0]["succeeded"], true);
    assert_eq!(runs[0]["unstable_count"], 2);
    assert_eq!(runs[1]["overall"], false);
    assert_eq!(runs[1]["cond1"], false);
    assert_eq!(runs[1]["succeeded"], false);
}

#[test]
fn wave_quoted_rho_fails_first_condition() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(tmp.path(), &["wave", "--preset", "paper-rho", "--c", "2"]);
    assert_eq!(code(&o), 3, "{o:?}");
    let c = read_json(&tmp.path().join("conditions_2.json"));
    assert_eq!(c["cond1"], serde_json::json!({"holds": false, "lhs": 2.81, "rhs": 3.0}));
    assert_valid("conditions", &tmp.path().join("conditions_2.json"));
    assert_valid("wave_summary", &tmp.path().join("summary.json"));
}

#[test]
fn wave_rejects_bad_speeds() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&hbv(tmp.path(), &["wave", "--preset", "reference", "--c", "0"])),
        2
    );
    assert_eq!(
        code(&hbv(tmp.path(), &["wave", "--preset", "reference", "--c", "20,-1"])),
        2
    );
    assert_eq!(code(&hbv(tmp.path(), &["wave", "--preset", "reference"])), 2);
    assert!(!tmp.path().join("summary.json").exists());
}

#[test]
fn simulate_zero_horizon_echoes_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(
        tmp.path(),
        &["simulate", "--preset", "reference", "--tmax", "0", "--nx", "11"],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    assert_valid("simulate_meta", &tmp.path().join("meta.json"));
    let v1 = csv_rows(&tmp.path().join("V1.csv"));
    assert_eq!(v1.len(), 2);
    assert_eq!(v1[0][0], "t");
    assert_eq!(v1[0].len(), 12);
    // Gaussian seed exp(-x²/ε) with ε = 0.02 on x = 0, 0.1, ...
    for (k, cell) in v1[1][1..].iter().enumerate() {
        let x = k as f64 / 10.0;
        let want = (-x * x / 0.02).exp();
        assert!((cell.parse::<f64>().unwrap() - want).abs() <= 1e-15, "node {k}");
    }
    // target cells start depleted where the seed sits
    let t1 = csv_rows(&tmp.path().join("T1.csv"));
    for ((t, v), k) in t1[1][1..].iter().zip(&v1[1][1..]).zip(0..) {
        let (t, v): (f64, f64) = (t.parse().unwrap(), v.parse().unwrap());
        assert!((t - (1.0 - v)).abs() <= 1e-15, "node {k}");
    }
    let meta = read_json(&tmp.path().join("meta.json"));
    assert_eq!(meta["t_final"].as_f64(), Some(0.0));
    assert_eq!(meta["snapshots"], 1);
}

#[test]
fn simulate_compare_diffusion_spreads() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "simulate",
        "--preset",
        "reference",
        "--tmax",
        "200",
        "--out-every",
        "50",
        "--compare-diffusion",
    ];
    let o = hbv(tmp.path(), &args);
    assert_eq!(code(&o), 0, "{o:?}");
    for run in ["no_diffusion", "diffusion"] {
        let meta_path = tmp.path().join(run).join("meta.json");
        assert_valid("simulate_meta", &meta_path);
        let meta = read_json(&meta_path);
        assert_eq!(meta["status"], "ok");
        assert_eq!(meta["clamp_events"], 0);
        for f in ["T1", "I1", "D1", "V1"] {
            assert_eq!(csv_rows(&tmp.path().join(run).join(format!("{f}.csv"))).len(), 6);
        }
    }
    let plain = read_json(&tmp.path().join("no_diffusion/meta.json"));
    assert_eq!(plain["params"]["Dv"].as_f64(), Some(0.0));
    // without diffusion the peak never leaves the seeded end
    assert!(plain["v1_spread"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["peak_index"] == 0));

    assert_valid("compare", &tmp.path().join("compare.json"));
    let cmp = read_json(&tmp.path().join("compare.json"));
    assert_eq!(cmp["times"], serde_json::json!([0.0, 50.0, 100.0, 150.0, 200.0]));
    let wider: Vec<bool> = cmp["diffusion_wider"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b.as_bool().unwrap())
        .collect();
    assert!(wider[1..].iter().all(|w| *w), "{wider:?}");
}

#[test]
fn simulate_table1_short_run() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(
        tmp.path(),
        &[
            "simulate",
            "--preset",
            "table1",
            "--tmax",
            "2",
            "--out-every",
            "1",
            "--nx",
            "101",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    let meta = read_json(&tmp.path().join("meta.json"));
    assert_eq!(meta["clamp_events"], 0);
    let dt = meta["config"]["dt"].as_f64().unwrap();
    assert!(dt > 2e-3 && dt < 3e-3, "{dt}");
    assert!((meta["params"]["Dv"].as_f64().unwrap() - 8e-4).abs() < 1e-15);
}

#[test]
fn simulate_dimensional_diffusivity() {
    let tmp = tempfile::tempdir().unwrap();
    let o = hbv(
        tmp.path(),
        &[
            "simulate",
            "--preset",
            "table1",
            "--tmax",
            "0",
            "--nx",
            "5",
            "--dv",
            "0.2",
            "--dv-units",
            "dimensional",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    let dv = read_json(&tmp.path().join("meta.json"))["params"]["Dv"]
        .as_f64()
        .unwrap();
    assert!((dv - 0.2 * 0.01).abs() < 1e-15, "{dv}");
    let scaled_only = hbv(
        tmp.path(),
        &[
            "simulate",
            "--preset",
            "reference",
            "--tmax",
            "0",
            "--dv",
            "0.2",
            "--dv-units",
            "dimensional",
        ],
    );
    assert_eq!(code(&scaled_only), 2);
}

#[test]
fn simulate_validation_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["simulate", "--preset", "reference", "--nx", "2"],
        &["simulate", "--preset", "reference", "--length", "0"],
        &["simulate", "--preset", "reference", "--epsilon", "0"],
        &["simulate", "--preset", "reference", "--out-every", "0"],
        &["simulate", "--preset", "reference", "--dv", "-1"],
        &[
            "simulate",
            "--preset",
            "reference",
            "--scheme",
            "explicit-rk4",
            "--dt",
            "1",
            "--dv",
            "1",
        ],
    ];
    for args in cases {
        assert_eq!(code(&hbv(tmp.path(), args)), 2, "{args:?}");
    }
}

#[test]
fn solver_failure_keeps_partial_output() {
    // a reaction step far beyond the stiffness scale drives T1 negative
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "simulate",
        "--preset",
        "table1",
        "--scheme",
        "explicit-rk4",
        "--dt",
        "0.1",
        "--dv",
        "0",
        "--warmup",
        "0",
        "--tmax",
        "2",
        "--nx",
        "11",
    ];
    let o = hbv(tmp.path(), &args);
    assert_eq!(code(&o), 4, "{o:?}");
    assert_valid("simulate_meta", &tmp.path().join("meta.json"));
    let meta = read_json(&tmp.path().join("meta.json"));
    assert_eq!(meta["status"], "failed");
    assert!(meta["error"].as_str().unwrap().contains("negative"));
    assert_eq!(csv_rows(&tmp.path().join("V1.csv")).len(), 2);
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&hbv(tmp.path(), &["r0", "--preset", "nope"])), 2);
    assert_eq!(code(&hbv(tmp.path(), &["frobnicate"])), 2);
    assert_eq!(code(&hbv(tmp.path(), &["r0", "--params", "/nonexistent.json"])), 2);
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&hbv(tmp.path(), &["r0", "--params", bad.to_str().unwrap()])), 2);
}

#[test]
fn unwritable_output_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = hbv(&blocker.join("sub"), &["r0", "--preset", "table1"]);
    assert_eq!(code(&o), 1, "{o:?}");
}

#[test]
fn repeat_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["r0", "--preset", "table1-dv0.2"],
        &["wave", "--preset", "reference", "--c", "20"],
        &[
            "simulate",
            "--preset",
            "table1",
            "--tmax",
            "1",
            "--nx",
            "51",
            "--scheme",
            "explicit-rk4",
        ],
    ];
    for (k, args) in runs.iter().enumerate() {
        let a = tmp.path().join(format!("{k}a"));
        let b = tmp.path().join(format!("{k}b"));
        assert_eq!(code(&hbv(&a, args)), 0);
        assert_eq!(code(&hbv(&b, args)), 0);
        let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert!(!names.is_empty());
        for n in names {
            assert_eq!(
                fs::read(a.join(&n)).unwrap(),
                fs::read(b.join(&n)).unwrap(),
                "{args:?} {n:?}"
            );
        }
    }
}
