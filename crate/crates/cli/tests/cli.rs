//! End-to-end tests of the rotorlab binary: command surfaces, file outputs,
//! determinism of CSV bytes, and snapshot resume.

use std::path::Path;
use std::process::{Command, Output};

fn rotorlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotorlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn aggregate_prints_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotorlab(&["aggregate", "-d", "2", "-n", "3", "--policy", "nesw"], dir.path());
    let text = stdout(&out);
    assert!(text.contains("(0, 0)"), "missing origin in: {text}");
    assert!(text.contains("(1, 0)"));
    assert!(text.contains("(0, -1)"));
    assert!(text.contains("T_n=2"));
}

#[test]
fn shape_curve_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = rotorlab(
            &["shape-curve", "-d", "2", "-n", "500", "--policy", "nesw", "--csv", name],
            dir.path(),
        );
        stdout(&out);
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "identical runs must produce identical CSV bytes");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# schema: shape-curve v1\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("n,psi,psi_ball,"));
}

#[test]
fn snapshot_resume_reproduces_curve() {
    let dir = tempfile::tempdir().unwrap();
    // Straight run, rows at 316 and 400 only.
    stdout(&rotorlab(
        &[
            "aggregate", "-n", "400", "--checkpoints", "316,400", "--csv", "straight.csv",
        ],
        dir.path(),
    ));
    // Stop at 200, snapshot, resume to 400 with the same checkpoint rows.
    stdout(&rotorlab(
        &["aggregate", "-n", "200", "--checkpoints", "none", "--snapshot", "half.rrl"],
        dir.path(),
    ));
    stdout(&rotorlab(
        &[
            "aggregate", "-n", "400", "--resume", "half.rrl", "--checkpoints", "316,400",
            "--csv", "resumed.csv",
        ],
        dir.path(),
    ));
    let straight = std::fs::read(dir.path().join("straight.csv")).unwrap();
    let resumed = std::fs::read(dir.path().join("resumed.csv")).unwrap();
    assert_eq!(straight, resumed, "resumed curve differs from uninterrupted");
}

#[test]
fn config_file_and_unknown_key() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "command = aggregate\nd = 2\nn = 3\npolicy = nesw\n",
    )
    .unwrap();
    let out = rotorlab(&["aggregate", "--config", "run.cfg"], dir.path());
    assert!(stdout(&out).contains("(0, -1)"));

    // Flags override the file.
    let out = rotorlab(&["aggregate", "--config", "run.cfg", "-n", "1"], dir.path());
    assert!(stdout(&out).contains("T_n=0"));

    std::fs::write(dir.path().join("bad.cfg"), "nn = 3\n").unwrap();
    let out = rotorlab(&["aggregate", "--config", "bad.cfg"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nn"));
}

#[test]
fn dump_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "d = 2\nn = 40\npolicy = nesw\nseed = 3\n").unwrap();
    let out = rotorlab(
        &["aggregate", "--config", "run.cfg", "-n", "50", "--dump-config"],
        dir.path(),
    );
    let text = stdout(&out);
    assert!(text.contains("command = aggregate\n"));
    assert!(text.contains("n = 50\n"), "flag must override file: {text}");
    assert!(text.contains("policy = nesw\n"));

    // The dumped config is itself a valid config file.
    std::fs::write(dir.path().join("dumped.cfg"), &text).unwrap();
    let out = rotorlab(&["aggregate", "--config", "dumped.cfg"], dir.path());
    assert!(stdout(&out).contains("n=50"));
}

#[test]
fn verify_emits_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotorlab(&["verify", "-d", "2", "-n", "300"], dir.path());
    let text = stdout(&out);
    let mut checks = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("json line");
        if v.get("check").is_some() {
            checks += 1;
            assert_eq!(v["pass"], true, "check failed: {line}");
        }
    }
    assert!(checks >= 6, "expected at least 6 checks, saw {checks}");
}

#[test]
fn verify_one_dimensional_interval() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotorlab(&["verify", "-d", "1", "-n", "100", "--policy", "alternating"], dir.path());
    let text = stdout(&out);
    assert!(text.contains("interval_deviation"));
}

#[test]
fn bruteforce_iso_reports_pentominoes() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotorlab(&["bruteforce-iso", "-d", "2", "-n", "5", "--csv", "iso.csv"], dir.path());
    let text = stdout(&out);
    assert!(text.contains("n=5: 12 shapes"), "missing pentomino count: {text}");
    let csv = std::fs::read_to_string(dir.path().join("iso.csv")).unwrap();
    assert!(csv.starts_with("# schema: iso-report v1\n"));
    assert_eq!(csv.lines().count(), 2 + 5, "one row per size");
}

#[test]
fn exit_ball_prints_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotorlab(&["exit", "--ball", "-d", "2", "-n", "500", "--csv", "field.csv"], dir.path());
    let text = stdout(&out);
    assert!(text.contains("e_o = "));
    assert!(text.contains("ratio = "));
    let csv = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert!(csv.starts_with("# schema: exit-field v1\nx1,x2,e\n"));
}

#[test]
fn orthant_prints_inequality() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotorlab(
        &["orthant", "-d", "2", "-k", "1", "-r", "9", "--trials", "4000", "--csv", "mc.csv"],
        dir.path(),
    );
    let text = stdout(&out);
    assert!(text.contains("SATISFIED"), "inequality line missing: {text}");
    let csv = std::fs::read_to_string(dir.path().join("mc.csv")).unwrap();
    assert!(csv.starts_with("# schema: mc v1\n"));
    assert_eq!(csv.lines().count(), 2 + 2);
}

#[test]
fn thread_cap_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, csv: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_rotorlab"))
            .args(["orthant", "-d", "2", "-k", "1", "-r", "9", "--trials", "8000", "--csv", csv])
            .env("ROTORLAB_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .expect("binary runs");
        stdout(&out)
    };
    let single = run("1", "single.csv");
    let many = run("4", "many.csv");
    assert_eq!(single, many, "estimates must not depend on thread count");
    assert_eq!(
        std::fs::read(dir.path().join("single.csv")).unwrap(),
        std::fs::read(dir.path().join("many.csv")).unwrap()
    );
}

#[test]
fn idla_deterministic_and_renders() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&rotorlab(&["idla", "-n", "60", "--seed", "9"], dir.path()));
    let b = stdout(&rotorlab(&["idla", "-n", "60", "--seed", "9"], dir.path()));
    assert_eq!(a, b);

    stdout(&rotorlab(
        &["aggregate", "-n", "200", "--render", "out.pgm", "--checkpoints", "none"],
        dir.path(),
    ));
    let pgm = std::fs::read(dir.path().join("out.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n"));
}
