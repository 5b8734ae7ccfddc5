use std::process::{Command, Output};

use serde_json::Value;

fn hvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hvol"))
        .args(args)
        .env_remove("HVOL_QUAD_LEVEL")
        .output()
        .expect("binary runs")
}

#[test]
fn json_is_byte_stable_across_jobs() {
    for cmd in ["volume-table", "periods", "mod2", "iterated"] {
        let a = hvol(&[cmd, "--genus", "4", "--format", "json", "--jobs", "1"]);
        let b = hvol(&[cmd, "--genus", "4", "--format", "json", "--jobs", "4"]);
        let c = hvol(&[cmd, "--genus", "4", "--format", "json", "--jobs", "4"]);
        assert!(a.status.success(), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(b.stdout, c.stdout, "{cmd}");
    }
}

#[test]
fn csv_and_json_agree() {
    let j = hvol(&["volume-table", "--genus", "5", "--format", "json"]);
    let c = hvol(&["volume-table", "--genus", "5", "--format", "csv"]);
    let v: Value = serde_json::from_slice(&j.stdout).unwrap();
    let entries = v["entries"].as_array().unwrap();
    let mut rdr = csv::Reader::from_reader(c.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), entries.len());
    for (e, r) in entries.iter().zip(&rows) {
        assert_eq!(e["kind"].as_str().unwrap(), &r[0]);
        assert_eq!(e["indices"].as_str().unwrap(), &r[1]);
        assert_eq!(e["slots"].as_str().unwrap(), &r[2]);
        assert_eq!(e["value"].as_str().unwrap(), &r[3]);
        assert_eq!(e["raw"].to_string(), r[4]);
        assert_eq!(e["residual"].to_string(), r[5]);
    }

    let j = hvol(&["periods", "--genus", "3", "--format", "json"]);
    let c = hvol(&["periods", "--genus", "3", "--format", "csv"]);
    let v: Value = serde_json::from_slice(&j.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(c.stdout.as_slice());
    for r in rdr.records().map(|r| r.unwrap()) {
        let (row, col): (usize, usize) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let cell = &v["matrices"][&r[0]][row - 1][col - 1];
        assert_eq!(cell["re"].to_string(), r[3]);
        assert_eq!(cell["im"].to_string(), r[4]);
    }
}

#[test]
fn genus_two_is_rejected() {
    let o = hvol(&["volume-table", "--genus", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hvol(&["volume-table", "--genus", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "genus_out_of_range");
}

#[test]
fn verify_genus_three_passes() {
    let o = hvol(&["verify", "--genus", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "verify");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 30);
    for c in checks {
        assert_eq!(c["pass"], true, "{c}");
        for key in ["name", "max_abs_err", "tolerance"] {
            assert!(c.get(key).is_some());
        }
    }
}

#[test]
fn verify_above_cube_limit_skips_mod2_cube() {
    let o = hvol(&["verify", "--genus", "7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("volume table"));
    assert!(!text.contains("connecting class"));
}

#[test]
fn output_file_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.json");
    let o = hvol(&[
        "period-matrix",
        "--genus",
        "6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["matrices"]["z"].as_array().unwrap().len(), 6);

    let bad_env = Command::new(env!("CARGO_BIN_EXE_hvol"))
        .args(["periods"])
        .env("HVOL_QUAD_LEVEL", "99")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_hvol"))
        .args(["periods", "--quad-level", "8"])
        .env("HVOL_QUAD_LEVEL", "99")
        .output()
        .unwrap();
    assert!(flag_wins.status.success());
}

#[test]
fn mod2_reports_connecting_class() {
    let o = hvol(&["mod2", "--genus", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let get = |section: &str, key: &str| {
        v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["section"] == section && e["key"] == key)
            .map(|e| e["value"].clone())
            .unwrap()
    };
    assert_eq!(get("h1", "dim"), 1);
    assert_eq!(get("connecting", "generates"), true);
    assert_eq!(get("invariants", "Delta_g on (H^3)'"), 1);
}

#[test]
fn library_example_from_readme() -> Result<(), hvol::Error> {
    use hvol::volume::VolumeEngine;
    use hvol::{Genus, TensorElement};

    let g = Genus::new(4)?;
    let engine = VolumeEngine::new(g)?;
    let t: TensorElement = "x1⊗y1⊗y3 - x4⊗y4⊗y3".parse()?;
    assert_eq!(engine.volume(&t)?.value.as_str(), "1/2");
    Ok(())
}
