use std::path::PathBuf;
use std::process::{Command, Output};

use w3orb::ope::{Engine, Preset};
use w3orb::orbifold::{appendix_source, c_invariant};
use w3orb::syntax::parse_expr;

fn w3orb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_w3orb")).args(args).output().expect("run w3orb")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("w3orb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn field<'a>(report: &'a str, key: &str) -> Vec<&'a str> {
    report.lines().filter_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": "))).collect()
}

#[test]
fn normal_form_report() {
    let o = w3orb(&["normal-form", "circ(1,W,W)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "command: normal-form\npreset: generic\n---\ninput: circ(1,W,W)\n\
         normal_form: (3*(c-2)/(2*(5*c+22)))*d(2,L) + (32/(5*c+22))*no(L,L)\n---\nchecks: 0\nfailed: 0\npass: true\n"
    );
    let o = w3orb(&["--at-c", "1/2", "normal-form", "circ(1,W,W)"]);
    assert_eq!(field(&stdout(&o), "normal_form"), ["(-9/98)*d(2,L) + (64/49)*no(L,L)"]);
    assert_eq!(field(&stdout(&o), "at_c"), ["1/2"]);
}

#[test]
fn reports_are_byte_stable_and_timing_is_opt_in() {
    let a = stdout(&w3orb(&["verify-F", "--n-max", "4"]));
    let b = stdout(&w3orb(&["verify-F", "--n-max", "4"]));
    assert_eq!(a, b);
    assert!(!a.contains("elapsed_ms"));
    let t = stdout(&w3orb(&["--timing", "verify-appendix"]));
    assert_eq!(field(&t, "elapsed_ms").len(), 1);
    let path = scratch("appendix.txt");
    let o = w3orb(&["verify-appendix", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&w3orb(&["verify-appendix"])));
}

#[test]
fn exit_codes() {
    assert_eq!(w3orb(&["verify-appendix"]).status.code(), Some(0));
    assert_eq!(w3orb(&["normal-form", "no(L,"]).status.code(), Some(2));
    assert_eq!(w3orb(&["normal-form", "no(L,X)"]).status.code(), Some(2));
    assert_eq!(w3orb(&["--at-c", "-22/5", "normal-form", "circ(1,W,W)"]).status.code(), Some(2));
    assert_eq!(w3orb(&["decouple", "--n", "6"]).status.code(), Some(2));
    assert_eq!(w3orb(&["verify-special"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_w3orb"))
        .env("VOA_MAX_WEIGHT", "8")
        .args(["normal-form", "no(U(2,0),W)"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("VOA_MAX_WEIGHT"));
}

#[test]
fn failing_checks_print_a_parsable_residue() {
    // Raising the U(8,0) coefficient by one leaves U(8,0) itself behind.
    let path = scratch("perturbed.expr");
    std::fs::write(&path, format!("{}\n+ U(8,0)\n", appendix_source())).unwrap();
    let o = w3orb(&["verify-appendix", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o);
    assert_eq!(field(&report, "status"), ["FAIL"]);
    let residue = field(&report, "got")[0];
    let mut e = Engine::new(Preset::Generic);
    let x = e.normal_form(&parse_expr(residue).unwrap()).unwrap();
    assert!(c_invariant(&x, 8).unwrap().is_one());

    // A rescaled relation still vanishes.
    let path = scratch("scaled.expr");
    std::fs::write(&path, format!("(22+5*c)*(\n{}\n)\n", appendix_source())).unwrap();
    assert_eq!(w3orb(&["verify-appendix", "--file", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn decoupling_report() {
    let report = stdout(&w3orb(&["decouple", "--n", "8"]));
    assert_eq!(field(&report, "generators"), ["L,U(0,0),U(2,0),U(4,0),U(6,0)"]);
    assert_eq!(field(&report, "discriminant"), ["375619300"]);
    assert_eq!(field(&report, "roots"), ["(559 ± 7√76657)/95"]);
    assert_eq!(field(&report, "pass"), ["true"]);
    let same = stdout(&w3orb(&["decouple", "--n", "8", "--gens", "L,U0,U2,U4,U6"]));
    assert_eq!(report, same);
}

#[test]
fn closed_form_sign_is_reported() {
    let o = w3orb(&["verify-G", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o);
    let claims = field(&report, "claim");
    let status = field(&report, "status");
    for (c, s) in claims.iter().zip(&status) {
        let want = if c.ends_with("equals the closed form") { "FAIL" } else { "PASS" };
        assert_eq!(*s, want, "{c}");
    }
}
