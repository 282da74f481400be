use std::process::Command;

fn sbandit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sbandit")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn omega_prints_36() {
    assert_eq!(sbandit(&["omega", "--x", "10"]).1, "36\n");
}

#[test]
fn exit_codes() {
    assert_eq!(sbandit(&["--help"]).0, 0);
    assert_eq!(sbandit(&["bogus"]).0, 1);
    assert_eq!(sbandit(&["run", "--theta", "0", "--bogus-flag"]).0, 1);
    assert_eq!(sbandit(&["run", "--problem", "missing.toml", "--theta", "0"]).0, 2);
}

#[test]
fn every_verb_has_help() {
    for verb in ["run", "sweep", "classify", "bounds", "omega", "reproduce", "concentration-test"] {
        let (code, text, _) = sbandit(&[verb, "--help"]);
        assert_eq!(code, 0, "{verb}");
        assert!(text.contains("Usage"), "{verb}");
    }
}

#[test]
fn horizon_preset_spans_to_one_hundred_thousand() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.dat");
    let p = path.to_str().unwrap();
    let (code, _, err) = sbandit(&["reproduce", "fig-a-horizon", "--reps", "2", "--seed", "1", "--out", p]);
    assert_eq!(code, 0, "{err}");
    let table = sbandit_core::harness::read_table(&path).unwrap();
    assert_eq!(table.meta("theta"), Some("0.04"));
    let x = table.column(0);
    assert_eq!(*x.last().unwrap(), 100_000.0);
    assert_eq!(x.len(), 20);
    assert_eq!(table.rows[0].len(), 3);
}

#[test]
fn problem_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.toml");
    std::fs::write(
        &path,
        "sigma2 = 1.0\n[space]\nlabels = [\"A\", \"B\"]\n[[arm]]\nvalues = [0.0, 0.0]\n[[arm]]\nvalues = [1.0, -1.0]\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (code, text, err) = sbandit(&["run", "--problem", p, "--theta", "B", "--horizon", "500", "--reps", "3"]);
    assert_eq!(code, 0, "{err}");
    assert!(text.starts_with("mean regret "));
    let (code, text, _) = sbandit(&["classify", "--problem", p]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 2);
}
