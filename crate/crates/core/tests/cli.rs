use std::path::Path;
use std::process::{Command, Output};

fn shuntmux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shuntmux"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn tables_match_golden_files() {
    for (args, file) in [
        (&["table", "1"][..], "table1.txt"),
        (&["table", "2"][..], "table2.txt"),
        (&["table", "3"][..], "table3.txt"),
        (&["table", "2", "--emit", "csv"][..], "table2.csv"),
    ] {
        let o = shuntmux(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), golden(file), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep", "--series", "pixel,two-photon,full", "--k-max", "30"];
    let a = shuntmux(&args);
    let b = shuntmux(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn design_verify_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pixel.toml");
    let f = file.to_str().unwrap();

    let o = shuntmux(&["design", "--mode", "pixel", "--n", "4", "--delta-r", "2", "--y", "0", "--out", f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(file.exists());

    let o = shuntmux(&["verify", f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: PASS"));

    let o = shuntmux(&["decode", f, "--v", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("detector 3"));

    let o = shuntmux(&["decode", f, "--v", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("no detection"));

    let o = shuntmux(&["decode", f, "--v", "50"]);
    assert_eq!(o.status.code(), Some(4));

    let o = shuntmux(&["verify", f, "--n", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn loaded_pnr_design_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pnr.toml");
    let f = file.to_str().unwrap();
    let o = shuntmux(&["design", "--mode", "pnr", "--n", "2", "--delta-r", "1", "--y", "0.1", "--out", f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("note:"));

    let o = shuntmux(&["verify", f]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("0.888889 V"), "{text}");
    assert!(text.contains("result: FAIL"));
}

#[test]
fn infeasible_design_exits_2() {
    let o = shuntmux(&["design", "--mode", "pixel", "--n", "24", "--delta-r", "2", "--y", "0.02", "--rn", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}
