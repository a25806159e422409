use std::path::Path;
use std::process::{Command, Output};

use fractal_curvature::catalog;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fractal-curvature"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dim_from_catalog_and_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("gasket.json");
    let ifs = catalog::gasket().ifs.unwrap();
    std::fs::write(&file, ifs.to_json()).unwrap();
    let a = ok_json(&["dim", "--catalog", "gasket"]);
    let b = ok_json(&["dim", "--in", path(&file)]);
    let d = a["moran_dimension"].as_f64().unwrap();
    assert!((d - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
    assert_eq!(d, b["moran_dimension"].as_f64().unwrap());
    assert_eq!(a["maps"], 3);
}

#[test]
fn sweep_then_exponents_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cantor.csv");
    let args = ["sweep", "--catalog", "cantor", "--eps", "1e-4:0.1", "--ratio", "0.8", "--out", path(&csv)];
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("eps,c0,c0var,c1,c2,components,holes\n"));
    let eps: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(eps.windows(2).all(|w| w[0] > w[1]));

    // byte-identical on a rerun, whatever the thread count
    let again = dir.path().join("again.csv");
    let out = bin()
        .args(["sweep", "--catalog", "cantor", "--eps", "1e-4:0.1", "--ratio", "0.8", "--out", path(&again)])
        .env("FRACTAL_CURVATURE_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read(&csv).unwrap(), std::fs::read(&again).unwrap());

    let fit = ok_json(&["exponents", "--in", path(&csv), "--k", "0"]);
    assert_eq!(fit["k"], 0);
    let s = fit["s_hat"].as_f64().unwrap();
    assert!((s - 2f64.ln() / 3f64.ln()).abs() < 0.05, "{s}");
    assert_eq!(fit["rows_used"].as_u64().unwrap() as usize, eps.len() - fit["dropped"].as_u64().unwrap() as usize);
}

#[test]
fn sweep_json_matches_csv() {
    let csv = run(&["sweep", "--catalog", "gasket", "--eps", "0.02:0.2", "--ratio", "0.5"]);
    let json = ok_json(&["sweep", "--catalog", "gasket", "--eps", "0.02:0.2", "--ratio", "0.5", "--format", "json"]);
    let rows: Vec<&str> = std::str::from_utf8(&csv.stdout).unwrap().lines().skip(1).collect();
    let arr = json.as_array().unwrap();
    assert_eq!(rows.len(), arr.len());
    for (line, obj) in rows.iter().zip(arr) {
        let c1: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(c1, obj["c1"].as_f64().unwrap());
    }
}

#[test]
fn string_from_text_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cantor.txt");
    let s = catalog::cantor().fractal_string(10).unwrap();
    std::fs::write(&file, s.to_text()).unwrap();
    let from_file = run(&["string", "--in", path(&file), "--eps", "1e-2:0.3", "--ratio", "0.7"]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    let from_catalog = run(&["string", "--catalog", "cantor", "--depth", "10", "--eps", "1e-2:0.3", "--ratio", "0.7"]);
    assert_eq!(from_file.stdout, from_catalog.stdout);
    let text = String::from_utf8(from_file.stdout).unwrap();
    assert!(text.starts_with("eps,c0var_1d,length_1d,c0var_2d,c0var_dd_bound,dim_d,bound_gap\n"));
}

#[test]
fn plot_files_written() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("sq");
    let out = run(&["sweep", "--catalog", "square", "--eps", "0.05:0.2", "--ratio", "0.5", "--plot", path(&prefix)]);
    assert!(out.status.success());
    for col in ["c0var", "c1", "c2"] {
        let dat = std::fs::read_to_string(dir.path().join(format!("sq_{col}.dat"))).unwrap();
        assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 3, "{col}");
    }
    assert!(std::fs::read_to_string(dir.path().join("sq.gp")).unwrap().contains("logscale"));
}

#[test]
fn structure_commands() {
    let c = ok_json(&["clusters", "--catalog", "gasket", "--level", "3", "--counts-only", "--probe", "2e-3"]);
    assert_eq!(c["count"], 1);
    assert!(c["bounded_complement"].is_object());
    let d = ok_json(&["clusters", "--catalog", "dust", "--level", "2"]);
    assert_eq!(d["count"], 16);
    assert_eq!(d["clusters"].as_array().unwrap().len(), 16);

    let f = ok_json(&["flatness", "--catalog", "example1:n=4,m=3", "--window", "0.1,0.2,0.6,0.7", "--axis-tol", "5e-3"]);
    assert_eq!(f["flat"], true);
    assert_eq!(f["axis"], "y");

    let t = ok_json(&["tiling", "--catalog", "gasket", "--depth", "1"]);
    assert_eq!(t["compatible"], true);
    let t = ok_json(&["tiling", "--catalog", "square"]);
    assert_eq!(t["generator_empty"], true);
}

#[test]
fn tiling_with_open_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("o.json");
    std::fs::write(&o, r#"{"interval": [0.0, 1.0]}"#).unwrap();
    let t = ok_json(&["tiling", "--catalog", "cantor", "--open-set", path(&o), "--tol", "1e-3"]);
    assert_eq!(t["compatible"], true);
    std::fs::write(&o, r#"{"interval": [0.0, 1.0], "extra": 1}"#).unwrap();
    assert_eq!(code(&["tiling", "--catalog", "cantor", "--open-set", path(&o)]), 4);
}

#[test]
fn catalog_listing() {
    let out = run(&["catalog"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["cantor", "dust", "gasket", "koch", "square"] {
        assert!(text.contains(name));
    }
    let v = ok_json(&["catalog", "general:a=1.2,b=1.7", "--json"]);
    let entry = if v.is_array() { v[0].clone() } else { v };
    assert_eq!(entry["name"], "general:a=1.2,b=1.7");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "not json").unwrap();
    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, r#"{"dim": 1, "maps": [{"r": 1.5, "t": [0.0]}]}"#).unwrap();

    assert_eq!(code(&["dim", "--catalog", "cantor"]), 0);
    assert_eq!(code(&["dim"]), 2);
    assert_eq!(code(&["sweep", "--catalog", "cantor", "--eps", "oops"]), 2);
    assert_eq!(code(&["dim", "--in", path(&dir.path().join("missing.json"))]), 3);
    assert_eq!(code(&["dim", "--in", path(&bad)]), 4);
    assert_eq!(code(&["dim", "--in", path(&invalid)]), 5);
    assert_eq!(code(&["dim", "--catalog", "no-such-set"]), 5);
    assert_eq!(code(&["sweep", "--catalog", "cantor", "--eps", "1e-4:0.1", "--delta", "1e-3"]), 6);
    assert_eq!(code(&["exponents", "--in", path(&bad)]), 4);
}
