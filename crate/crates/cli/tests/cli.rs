use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_susychain");
const CONFIGS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(BIN).args(args).arg("--out").arg(out).env_remove("SUSYCHAIN_THREADS").output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn golden_bands_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{CONFIGS}/saw_flat.toml");
    let out = run(&["bands", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let golden = fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/bands_saw_flat.csv")).unwrap();
    let got = fs::read(dir.path().join("bands.csv")).unwrap();
    assert!(got == golden, "bands.csv differs from the golden file");
    assert!(!got.contains(&b'\r'));
    assert!(got.starts_with(b"k,E1,E2,E3\n"));
}

#[test]
fn every_example_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, cfg) in [
        ("bands", "saw_dispersive"),
        ("tune", "saw_flat"),
        ("susy", "model1"),
        ("susy", "custom_seed"),
        ("spectrum", "model2"),
    ] {
        let path = format!("{CONFIGS}/{cfg}.toml");
        let out = run(&[cmd, "--config", &path], dir.path());
        assert_eq!(out.status.code(), Some(0), "{cmd} {cfg}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn json_floats_carry_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    run(&["tune"], dir.path());
    let text = fs::read_to_string(dir.path().join("tune.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let t_cc = v["solutions"][0]["t_cc"].as_f64().unwrap();
    assert!(t_cc.is_finite());
    assert!(text.contains("e-3"), "scientific notation expected:\n{text}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        for cmd in ["bands", "susy", "spectrum"] {
            assert_eq!(run(&[cmd, "--seed", "11"], out).status.code(), Some(0));
        }
    }
    for name in ["bands.csv", "bands.json", "potential.csv", "susy.json", "spectrum_chain.csv", "spectrum.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn verify_passes_and_zero_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&["verify"], dir.path());
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = run(&["verify", "--tol", "0"], dir.path());
    assert_eq!(bad.status.code(), Some(4));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert!(report["failed"].as_u64().unwrap() > 0);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "lattice.t_xx = 1.0\n");
    let out = run(&["bands", "--config", &unknown], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t_xx"));

    assert_eq!(run(&["spectrum", "--cells", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["bands", "--config", "/nonexistent/run.toml"], dir.path()).status.code(), Some(2));

    let window = write_config(dir.path(), "model.kind = \"I\"\nmodel.m = 0.07\nmodel.lambda = 0.5\n");
    assert_eq!(run(&["susy", "--config", &window], dir.path()).status.code(), Some(2));

    let threads = Command::new(BIN).args(["tune", "--out"]).arg(dir.path()).env("SUSYCHAIN_THREADS", "abc").output().unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn singular_frame_exits_three_with_location() {
    let dir = tempfile::tempdir().unwrap();
    // this c0 puts a zero of det U at the origin
    let cfg = write_config(
        dir.path(),
        "model.kind = \"custom\"\nmodel.m = 0.07\nmodel.a_gauge = 0.07\nmodel.lambda = 0.0\nmodel.c0 = -7.142857142857143\n",
    );
    let out = run(&["susy", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x ="), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&["bands"], &a);
    Command::new(BIN).args(["bands", "--out"]).arg(&b).env("SUSYCHAIN_THREADS", "1").output().unwrap();
    assert_eq!(fs::read(a.join("bands.csv")).unwrap(), fs::read(b.join("bands.csv")).unwrap());
}
