use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

fn qnlp(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qnlp"));
    cmd.args(args).env_remove("QNLP_OUT_DIR");
    if let Some(p) = env_out {
        cmd.env("QNLP_OUT_DIR", p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn train_then_ask() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cfg = config();
    let o = qnlp(
        &[
            "train",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--workers",
            "2",
        ],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("train accuracy 1.000"));
    assert!(out.join("report.json").is_file());

    let model = out.join("model.json");
    let m = model.to_str().unwrap();
    let o = qnlp(&["ask", "--model", m, "Bob who is silly loves Alice who is rich"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("answer false"), "{text}");
    assert!(text.contains("width 12"), "{text}");
    assert!(text.lines().next().unwrap().starts_with("estimate 0."));

    let o = qnlp(&["ask", "--model", m, "Alice", "hates", "Bob"], None);
    assert!(stdout(&o).contains("answer true"), "{}", stdout(&o));

    let o = qnlp(&["ask", "--model", m, "loves", "Alice", "Bob"], None);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("stuck at nʳ · s · n"), "{}", stderr(&o));

    let o = qnlp(&["ask", "--model", m, "Carol", "sleeps"], None);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("unknown word \"Carol\""), "{}", stderr(&o));

    let qasm = dir.path().join("q.qasm");
    let o = qnlp(
        &["export-qasm", "--model", m, "--out", qasm.to_str().unwrap(), "Alice", "is", "rich"],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(std::fs::read_to_string(&qasm).unwrap().starts_with("OPENQASM 2.0;"));
}

#[test]
fn flag_beats_env_and_env_beats_config() {
    let dir = tempfile::tempdir().unwrap();
    let (flag, env) = (dir.path().join("flag"), dir.path().join("env"));
    let cfg = config();
    let c = cfg.to_str().unwrap();
    let o = qnlp(&["generate", "--config", c, "--out", flag.to_str().unwrap()], Some(&env));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(flag.join("corpus.jsonl").is_file());
    assert!(!env.exists());
    let o = qnlp(&["generate", "--config", c, "--seed", "5"], Some(&env));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("12 sentences"));
    assert_ne!(
        std::fs::read(flag.join("corpus.jsonl")).unwrap(),
        std::fs::read(env.join("corpus.jsonl")).unwrap()
    );
}

#[test]
fn config_errors_name_the_file() {
    let o = qnlp(&["train", "--config", "/nonexistent/x.toml"], None);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("/nonexistent/x.toml"));
}

#[test]
fn density_demo_prints_the_chain() {
    let o = qnlp(&["demo-density"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    let lion = text.lines().find(|l| l.starts_with("lion")).unwrap();
    assert_eq!(lion.split_whitespace().filter(|&w| w == "yes").count(), 4);
    let vertebrate = text.lines().find(|l| l.starts_with("vertebrate")).unwrap();
    assert_eq!(vertebrate.split_whitespace().filter(|&w| w == "yes").count(), 1);
}
