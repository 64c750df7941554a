use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const Q2: &str = "(1,-2,-1,-2,-1,2,1,2,1,1,-1,-1,-1,-1,1,1,1,1,-1)";

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_higman")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn extract_rationals() {
    let o = run(&["extract", p(&data("rationals.grp"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], Q2);
    assert_eq!(lines[3], "(1,-5,-1,-5,-1,5,1,5,1,1,-1,-4,-1,-1,1,4,1,4,-1)");
}

#[test]
fn embed_then_extract() {
    let dir = TempDir::new().unwrap();
    let t = dir.path().join("T.grp");
    let o = run(&["embed2", p(&data("rationals.grp")), "--kmax", "3", "-o", p(&t)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&t).unwrap();
    assert!(text.contains("generators: x, y"));
    let o = run(&["extract", p(&t)]);
    assert_eq!(stdout(&o).lines().count(), 2);
    assert_eq!(stdout(&o).lines().next(), Some(Q2));
}

#[test]
fn evalset_lists_in_numeric_order() {
    let o = run(&["evalset", "S", "--B", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "(-2,-1)\n(-1)\n(0,1)\n(1,2)\n");
    let o = run(&["evalset", "omega_3({(7,2,4),(2,5,3)})", "--L", "20", "--N", "3"]);
    assert!(stdout(&o).lines().any(|l| l == "(0,0,0,7,2,4,0,0,0,0,0,0,0,0,0,2,5,3,7,2,4)"));
}

#[test]
fn benign_writes_certificate_and_notes() {
    let dir = TempDir::new().unwrap();
    let o = run(&["benign", "S", "-o", p(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let k = fs::read_to_string(dir.path().join("K.grp")).unwrap();
    assert!(k.contains("generators: a, b, c, t_1, t'_1, u_1, u_2, d, e"));
    assert!(fs::read_to_string(dir.path().join("L.sub")).unwrap().starts_with("subgroup-of:"));

    let dir = TempDir::new().unwrap();
    let o = run(&["benign", "tau(Z)", "-o", p(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let audit = fs::read_to_string(dir.path().join("audit.txt")).unwrap();
    assert!(audit.contains("tau") && audit.contains("disagrees"));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn rope_from_certificate_directory() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert");
    assert!(run(&["benign", "{(0,1)}", "-o", p(&cert)]).status.success());
    let t = dir.path().join("T.grp");
    assert!(run(&["embed2", p(&data("rationals.grp")), "--kmax", "2", "-o", p(&t)]).status.success());
    let out = dir.path().join("rope");
    let o = run(&["rope", p(&cert), p(&t), "-o", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let g = fs::read_to_string(out.join("07_G.grp")).unwrap();
    assert!(g.contains("name: G"));
    assert!(out.join("01_K_Q.sub").exists());
    let audit = fs::read_to_string(out.join("audit.txt")).unwrap();
    assert_eq!(audit.lines().filter(|l| l.contains("pass")).count(), 7, "{audit}");

    let two = dir.path().join("TG.grp");
    assert!(run(&["twogen-final", p(&out.join("07_G.grp")), "-o", p(&two)]).status.success());
    let text = fs::read_to_string(&two).unwrap();
    assert!(text.starts_with("-- 1 a\n"));
    assert!(text.contains("generators: X, Y"));
}

#[test]
fn pipeline_and_verify() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("q2.grp");
    fs::write(
        &input,
        "higman-presentation 1\nname: Q2\ntorsion-free\ngenerators: a_1, a_2\nrelators:\na_2^2 a_1^-1\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    let expr = format!("{{{Q2}}}");
    let o = run(&["pipeline", p(&input), &expr, "--L", "20", "-o", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join("sequences.txt")).unwrap(), format!("{Q2}\n"));
    let manifest = fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"07_G.grp\""));
    assert!(fs::read_to_string(out.join("phi.txt")).unwrap().starts_with("a_1 -> "));

    let o = run(&["verify", p(&out)]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains(&format!("replay {Q2}: pass")), "{}", stdout(&o));
}

#[test]
fn export_gap() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("q.g");
    assert!(run(&["export-gap", p(&data("rationals.grp")), "-o", p(&out)]).status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains(r#"F := FreeGroup("a_1", "a_2", "a_3", "a_4", "a_5");;"#));
    assert!(text.contains("F.2^2*F.1^-1"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.grp");
    fs::write(&bad, "higman-presentation 1\nname: B\ngenerators: a\nrelators:\n  a^0\n").unwrap();
    let o = run(&["extract", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("5:"), "{}", stderr(&o));

    let o = run(&["extract", p(&dir.path().join("missing.grp"))]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["evalset", "rho("]).status.code(), Some(2));
}
