use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn slopes(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slopes"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["modular", "hecke", "--p", "3", "--k", "2"];
    let first = slopes(dir.path(), &args);
    assert!(first.status.success());
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let second = slopes(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn corrupted_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cheby", "eval", "--family", "centered", "--r", "0.5", "--grid", "4"];
    let first = slopes(dir.path(), &args);
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&entry).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["payload"] = Value::String(v["payload"].as_str().unwrap().replace("0.25", "9.25"));
    std::fs::write(&entry, v.to_string()).unwrap();
    let second = slopes(dir.path(), &args);
    assert!(second.status.success());
    assert!(String::from_utf8_lossy(&second.stderr).contains("checksum"));
    assert_eq!(first.stdout, second.stdout);
    // The recomputed entry replaced the corrupt one.
    let third = slopes(dir.path(), &args);
    assert!(String::from_utf8_lossy(&third.stderr).is_empty());
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["modular", "minima", "--k", "0"],
        vec!["poly", "gram", "--center", "0.25", "--radius", "1/2", "--n", "3"],
        vec!["poly", "gram", "--center", "0", "--radius", "-1/2", "--n", "3"],
        vec!["cheby", "eval", "--family", "centered", "--r", "2", "--grid", "0"],
        vec!["modular", "hecke", "--p", "4", "--k", "2"],
        vec!["bogus"],
        vec!["--prec", "8", "modular", "gram", "--k", "1"],
    ] {
        let out = slopes(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn formula_mismatch_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    // The closed form holds for the |sin| boundary weight only.
    let bad = slopes(dir.path(), &["cheby", "verify", "--nmax", "4", "--r", "1/3", "--weight", "uniform"]);
    assert_eq!(bad.status.code(), Some(4));
    let good = json(&slopes(dir.path(), &["cheby", "verify", "--nmax", "20", "--r", "1/3"]));
    assert_eq!(good["pairs_checked"], 231);
    assert_eq!(good["jacobi_nmax"], 12);
}

#[test]
fn sup_sweep_on_half_disc() {
    let dir = tempfile::tempdir().unwrap();
    let out = slopes(
        dir.path(),
        &["--format", "csv", "poly", "sweep", "--center", "1/2", "--radius", "1/2", "--degrees", "10:50:10"],
    );
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    let last: f64 = rows[4][3].parse().unwrap();
    assert!(last > 0.63 && last < 0.68, "{last}");
}

#[test]
fn boundary_transform_peak() {
    let dir = tempfile::tempdir().unwrap();
    let out = slopes(
        dir.path(),
        &["--format", "csv", "cheby", "eval", "--family", "boundary", "--r", "0.25", "--grid", "1000"],
    );
    let rows = csv_rows(&out);
    let (a, v) = rows
        .iter()
        .map(|r| (r[0].parse::<f64>().unwrap(), r[1].parse::<f64>().unwrap()))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    assert!((v - 1f64.asinh()).abs() < 1e-5, "{v}");
    assert!((a - 0.5f64.sqrt()).abs() < 1e-3, "{a}");
}

#[test]
fn factor_then_serre() {
    let dir = tempfile::tempdir().unwrap();
    let mut obs = Vec::new();
    for n in ["20", "24", "28", "30"] {
        let f = json(&slopes(dir.path(), &["poly", "factor", "--n", n, "--center", "1/4", "--radius", "1/4"]));
        assert_eq!(f["schema"], "slopes.factor.v1");
        obs.push(f);
    }
    let input = dir.path().join("obs.json");
    std::fs::write(&input, serde_json::to_string(&obs).unwrap()).unwrap();
    let d = json(&slopes(dir.path(), &["measure", "serre", "--in", input.to_str().unwrap()]));
    assert_eq!(d["schema"], "slopes.serre.v1");
    let z = d["atomic"].as_array().unwrap().iter().find(|a| a["divisor"] == serde_json::json!(["0", "1"])).unwrap();
    let (p, q) = z["coefficient"].as_str().unwrap().split_once('/').unwrap();
    let c = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
    assert!(c > 0.6 && c < 0.7, "{c}");

    // Changing the input file changes the cache key.
    std::fs::write(&input, serde_json::to_string(&obs[..2]).unwrap()).unwrap();
    let d2 = json(&slopes(dir.path(), &["measure", "serre", "--in", input.to_str().unwrap()]));
    assert_ne!(d2["window_degrees"], d["window_degrees"]);
}

#[test]
fn modular_minima_weight_24() {
    let dir = tempfile::tempdir().unwrap();
    let m = json(&slopes(dir.path(), &["modular", "minima", "--k", "2"]));
    assert_eq!(m["schema"], "slopes.modular_minima.v1");
    assert_eq!(m["certified"], true);
    let rows = m["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0]["lambda_over_k"].as_f64().unwrap() + 8.5404).abs() < 1e-3);
    assert_eq!(rows[0]["order"], 2);
    assert!(rows.iter().all(|r| r["margin"].as_f64().unwrap() > 0.0));
}

#[test]
fn hecke_t2_weight_24() {
    let dir = tempfile::tempdir().unwrap();
    let h = json(&slopes(dir.path(), &["modular", "hecke", "--p", "2", "--k", "2"]));
    assert_eq!(h["charpoly"], serde_json::json!(["-20468736", "-1080", "1"]));
    assert_eq!(h["discriminant"], (576u64 * 144169).to_string());
}

#[test]
fn cyclotomic_discrepancy_and_ks() {
    let dir = tempfile::tempdir().unwrap();
    let e = json(&slopes(dir.path(), &["measure", "equi", "--m", "2:8:2"]));
    for r in e["rows"].as_array().unwrap() {
        let n = r["count"].as_f64().unwrap();
        assert!(r["arc"].as_f64().unwrap() <= 1.0 / n + 1e-12);
    }
    let k = json(&slopes(dir.path(), &["measure", "ks", "--a", "0,1", "--b", "0.5"]));
    assert_eq!(k["distance"], 0.5);
}

#[test]
fn out_flag_writes_payload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gram.json");
    let out = slopes(
        dir.path(),
        &["--out", path.to_str().unwrap(), "poly", "gram", "--center", "0", "--radius", "1", "--n", "2"],
    );
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    let g: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(g["exact"][1][1], "1");
}
