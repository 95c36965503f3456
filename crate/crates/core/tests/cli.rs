use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vcwave"))
}

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

fn simulate(cfg: &Path, out: &Path) -> i32 {
    run(bin().arg("simulate").arg("--config").arg(cfg).arg("--out").arg(out)).0
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_path("manufactured.toml");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(simulate(&cfg, &a), 0);
    assert_eq!(simulate(&cfg, &b), 0);
    let csv = |d: &Path| std::fs::read(d.join("diagnostics.csv")).unwrap();
    assert_eq!(csv(&a), csv(&b));
    let manifest = std::fs::read_to_string(a.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"status\": \"pass\""), "{manifest}");
    // nothing written outside the requested directory
    let mut entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    entries.sort();
    assert_eq!(entries, ["a", "b"]);
}

#[test]
fn riemann_contact_states_print_zero_rarefactions() {
    let (code, out, _) = run(bin().args(["riemann", "--left", "1,0,1", "--right", "1.1,0,1.1"]));
    assert_eq!(code, 0);
    let field = |name: &str| -> f64 {
        out.lines().find(|l| l.starts_with(name)).unwrap().split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    assert_eq!(field("delta_r1"), 0.0);
    assert_eq!(field("delta_r3"), 0.0);
    assert!((field("delta_cd") - 0.1).abs() < 1e-12);
}

#[test]
fn profile_subcommand_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let (code, out, _) = run(bin()
        .args(["profile", "contact", "--theta-minus", "1", "--theta-plus", "1.1", "--p-plus", "1", "--out"])
        .arg(&path));
    assert_eq!(code, 0, "{out}");
    let p = vcwave::profiles::ContactProfile::read_table(&path).unwrap();
    assert!(p.max_residual() < 1e-8);
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(bin().args(["simulate", "--config", "/no/such/file.toml"]));
    assert_eq!(code, 2);
    assert!(err.contains("error [harness]"), "{err}");
    let (code, _, err) = run(bin().arg("bogus"));
    assert_eq!(code, 2);
    assert!(err.contains("seed_label"), "usage errors print the schema: {err}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(config_path("contact.toml")).unwrap().replace("theta = 1.1", "theta = 1.3");
    std::fs::write(&bad, text).unwrap();
    let (code, _, err) = run(bin().arg("simulate").arg("--config").arg(&bad).arg("--out").arg(dir.path().join("o")));
    assert_eq!(code, 2);
    assert!(err.contains("error [harness]"), "{err}");

    // a verdict failure exits 1: demand an impossible manufactured accuracy
    let strict = dir.path().join("strict.toml");
    let text = std::fs::read_to_string(config_path("manufactured.toml")).unwrap();
    std::fs::write(&strict, text.replace("max_error = 1e-3", "max_error = 1e-12")).unwrap();
    assert_eq!(simulate(&strict, &dir.path().join("s")), 1);
}

#[test]
fn converge_reports_second_order() {
    let (code, out, _) = run(bin().arg("converge").arg("--config").arg(config_path("manufactured.toml")).args(["--levels", "3"]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS observed order"));
}
