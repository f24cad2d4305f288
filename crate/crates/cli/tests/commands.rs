use std::path::Path;
use std::process::Command;

use cli::commands::{self, FamilyFlag};
use cli::config::Config;
use cli::{write_outputs, CliError, Globals, EXIT_TOLERANCE, EXIT_VALIDATION};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn prediction(report: &Value, e: u64, j: u64) -> String {
    report["predictions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["e"] == e && p["j"] == j)
        .unwrap_or_else(|| panic!("no prediction for ({e},{j})"))["mu"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn height_member_angles_examples() {
    assert_eq!(commands::height("1,0,1;0,1,1").unwrap().report["heightSq"], "3");
    assert_eq!(commands::member("1,1,2", "1,0,1;0,1,1").unwrap().report["verdict"], "InB");
    assert_eq!(commands::member("1,1,1", "1,0,1;0,1,1").unwrap().report["verdict"], "Inconclusive");
    let a = commands::angles("1,0", "1,1", &Globals::default()).unwrap();
    assert_eq!(a.report["sinSq"], "1/2");
    assert_eq!(a.report["omegas"][0]["exactSq"], "1/2");
}

#[test]
fn parse_errors_carry_position() {
    match commands::height("1,0,1\n0,1,q") {
        Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
        other => panic!("{other:?}"),
    }
    match Config::parse("[line]\nn = 3\ngamma = [\"3\", \"x/\"]\n") {
        Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn construct_line_predictions() {
    let cfg = Config::parse("[line]\nn = 3\ngamma = [\"3\", \"4\"]\nseed = 1\n").unwrap();
    let o = commands::construct_line(&cfg, &Globals::default()).unwrap();
    assert_eq!(prediction(&o.report, 1, 1), "4");
    assert_eq!(prediction(&o.report, 2, 1), "12");
    assert_eq!(o.report["construction"]["floors"][0], "1");
}

#[test]
fn construct_blocks_worked_value() {
    let cfg = Config::parse("[blocks]\nd = 2\nm = 2\nbeta = [[\"5\", \"4\"], [\"26\", \"25\"]]\nmode = \"relaxed\"\n").unwrap();
    let o = commands::construct_blocks(&cfg, &Globals::default()).unwrap();
    assert_eq!(prediction(&o.report, 3, 2), "260/23");
}

#[test]
fn construct_recursive_relaxed() {
    let cfg = Config::parse("[recursive]\nn = 4\nd = 2\ngamma = [4, 4]\nmode = \"relaxed\"\nproxy = 3\n").unwrap();
    let o = commands::construct_recursive(&cfg, &Globals::default()).unwrap();
    assert_eq!(prediction(&o.report, 1, 1), "4");
    assert_eq!(prediction(&o.report, 2, 1), "16");
    assert_eq!(o.report["lines"].as_array().unwrap().len(), 2);
}

#[test]
fn strict_violation_exits_two_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "c.toml", "[line]\nn = 3\ngamma = [\"5/2\"]\n");
    let out = bin().arg("construct-line").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION as i32));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "validation");
    let msg = err["message"].as_str().unwrap();
    assert!(msg.contains("5/2") && msg.contains("sqrt(5)"), "{msg}");
    // relaxed mode accepts the same ratio
    let out = bin().args(["--mode", "relaxed", "construct-line"]).arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

const SLOPE: &str = "[line]\nn = 2\ngamma = [3]\nseed = 7\n[estimate]\ne = 1\nn_min = 2\nn_max = 6\n";

#[test]
fn estimate_passes_and_fails() {
    let cfg = Config::parse(SLOPE).unwrap();
    let o = commands::estimate(&cfg, &Globals::default(), None).unwrap();
    assert_eq!(o.report["pass"], true, "{}", o.report["estimate"]);
    assert_eq!(o.exit, 0);
    let wrong = Config::parse(&format!("{SLOPE}prediction = \"4\"\n")).unwrap();
    let o = commands::estimate(&wrong, &Globals::default(), None).unwrap();
    assert_eq!(o.report["pass"], false);
    assert_eq!(o.exit, EXIT_TOLERANCE);

    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "wrong.toml", &format!("{SLOPE}prediction = \"4\"\n"));
    let out = bin().arg("estimate").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_TOLERANCE as i32));
}

#[test]
fn scan_rerun_has_identical_digests() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "scan.toml",
        "[line]\nn = 3\ngamma = [3]\nseed = 7\n[target]\nlevel = 3\n[scan]\ne = 1\nheight_sq_max = 3000\n",
    );
    let mut digests = Vec::new();
    for (run, workers) in [("a", "1"), ("b", "2")] {
        let out_dir = dir.path().join(run);
        let out = bin().args(["--workers", workers, "--out"]).arg(&out_dir).arg("scan").arg(&p).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let m: Value = serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
        let csv = std::fs::read(out_dir.join("records.csv")).unwrap();
        assert_eq!(m["digests"]["records.csv"], cli::sha256_hex(&csv));
        assert!(String::from_utf8(csv).unwrap().starts_with("N_or_rank,heightSq,log10_H,psi_lo,psi_hi,score_lo,score_hi,plucker"));
        digests.push(m["digests"].clone());
    }
    assert_eq!(digests[0], digests[1]);
}

#[test]
fn manifest_echoes_config_and_seed() {
    let cfg = Config::parse("[line]\nn = 3\ngamma = [3]\n").unwrap();
    let g = Globals { seed: Some(11), ..Globals::default() };
    let o = commands::construct_line(&cfg, &g).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let m = write_outputs(&o, dir.path(), std::time::Duration::from_millis(5)).unwrap();
    assert_eq!(m.seed.as_deref(), Some("11"));
    assert_eq!(m.config["line"]["seed"], 11);
    assert_eq!(m.config["line"]["mode"], "strict");
    assert_eq!(m.config["line"]["gamma"][0], "3");
    assert!(m.digests.contains_key("report.json"));
}

#[test]
fn spectrum_certify_families() {
    let g = Globals::default();
    let o = commands::spectrum_certify(FamilyFlag::MinAngle, 6, 2, None, 5, &g).unwrap();
    assert_eq!(o.report["certificateLevel"], "triangular");
    let o = commands::spectrum_certify(FamilyFlag::LastAngleD, 4, 2, None, 5, &g).unwrap();
    let level = o.report["certificateLevel"].as_str().unwrap();
    assert!(level == "genericRank" || level == "triangular");
    let o = commands::spectrum_certify(FamilyFlag::Custom, 6, 2, Some("3,2;3,2"), 5, &g).unwrap();
    assert_eq!(o.report["certificateLevel"], "unknown");
    assert!(matches!(
        commands::spectrum_certify(FamilyFlag::MinAngle, 5, 2, None, 5, &g),
        Err(CliError::Validation(_))
    ));
    let out = bin().args(["spectrum-certify", "--family", "min-angle", "--n", "5", "--d", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_VALIDATION as i32));
}

#[test]
fn reports_hold_no_bare_floats() {
    fn walk(v: &Value) {
        match v {
            Value::Number(n) => assert!(n.is_u64() || n.is_i64(), "float {n}"),
            Value::Array(a) => a.iter().for_each(walk),
            Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    let g = Globals::default();
    walk(&commands::angles("1,2,3", "1,0,0;0,1,1", &g).unwrap().report);
    walk(&commands::estimate(&Config::parse(SLOPE).unwrap(), &g, None).unwrap().report);
    walk(&commands::spectrum_certify(FamilyFlag::LastAngleD, 6, 3, None, 3, &g).unwrap().report);
}
