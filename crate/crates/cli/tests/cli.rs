use std::fs;
use std::path::PathBuf;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn modalkit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_modalkit"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(name: &str, contents: &str) -> String {
    let path: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn decide_reports_validity() {
    let r = modalkit(&["decide", "--logic", "S4", "K1 p -> p"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "VALID\n"));

    let r = modalkit(&["decide", "--logic", "K", "K1 p -> p"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("COUNTERMODEL\nworlds 1\n"), "{}", r.stdout);

    let r = modalkit(&["decide", "--logic", "S42", "K1 p -> p"]);
    assert_eq!(r.code, 2);
}

#[test]
fn search_finds_no_dot_two_countermodel_on_weakly_directed_preorders() {
    let r = modalkit(&["search", "--class", "wd-preorder", "--bound", "4", "~K1 ~K1 p -> K1 ~K1 ~p"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "NONE-UP-TO 4\n"));
}

#[test]
fn search_countermodel_round_trips_through_eval() {
    let two = "~K1 ~K1 p -> K1 ~K1 ~p";
    let r = modalkit(&["search", "--logic", "S4", "--bound", "3", two]);
    assert_eq!(r.code, 1);
    let model = r.stdout.strip_prefix("COUNTERMODEL\n").expect("countermodel header");
    assert_eq!(model.lines().next(), Some("worlds 3"));
    let path = file("fork.model", model);

    let r = modalkit(&["eval", "--model", &path, two]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "FALSE\n"));
    let r = modalkit(&["classify", "--model", &path]);
    assert_eq!(
        r.stdout,
        "worlds 3\nagent 1: reflexive transitive\nclasses: all reflexive transitive preorder\n"
    );
}

#[test]
fn check_reports_the_failing_step() {
    let bad = file(
        "broken_mp.prf",
        "system S4\n1: p -> p ; TAUT\n2: K1 (p -> p) ; NEC 1 1\n3: K1 p ; MP 2 5\n",
    );
    let r = modalkit(&["check", "--proof", &bad]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("ERROR line 3: "), "{}", r.stdout);

    let good = file("good.prf", "system S4\n1: p -> p ; TAUT\n2: K1 (p -> p) ; NEC 1 1\n");
    let r = modalkit(&["check", "--proof", &good]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "OK K1 (p -> p)\n"));
    let r = modalkit(&["check", "--proof", &good, "--logic", "K"]);
    assert_eq!(r.code, 1);
}

#[test]
fn derived_certificates_check_and_translate() {
    let r = modalkit(&["derive", "k-thm", "--logic", "S42", "--agent", "2", "p", "q"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("system S42\n"));
    let thm = file("k_thm.prf", &r.stdout);
    let r = modalkit(&["check", "--proof", &thm]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "OK K2 p & ~K2 ~q -> ~K2 ~(p & q)\n"));

    let s4 = file("s4.prf", "system S4\n1: K1 p -> p ; AXT\n2: K1 (K1 p -> p) ; NEC 1 1\n");
    let r = modalkit(&["translate", "--proof", &s4]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("system TOPOS4\n"));
    let topo = file("topo.prf", &r.stdout);
    let r = modalkit(&["check", "--proof", &topo]);
    assert_eq!(r.stdout, "OK K1 (K1 p -> p)\n");
    let r = modalkit(&["translate", "--proof", &topo]);
    let back = file("back.prf", &r.stdout);
    let r = modalkit(&["check", "--proof", &back, "--logic", "S4"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "OK K1 (K1 p -> p)\n"));
}

#[test]
fn mcs_listing() {
    let r = modalkit(&["mcs", "--logic", "S4", "K1 p"]);
    assert_eq!(
        r.stdout,
        "closure 2: p ; K1 p\nmcs 1: { p ; K1 p }\nmcs 2: { p ; ~K1 p }\nmcs 3: { ~p ; ~K1 p }\ntotal 3\n"
    );
    let r = modalkit(&["mcs", "--logic", "S4", "--extend", "K1 p", "--extend", "~p", "K1 p"]);
    assert_eq!(r.code, 1);
}

#[test]
fn topological_eval() {
    let t = file("sierpinski.topo", "points 2\nopen:\nopen: 0\nopen: 0 1\nval p: 0\n");
    let r = modalkit(&["eval", "--topo", "--model", &t, "K0 p"]);
    assert_eq!(r.stdout, "world 0: TRUE\nworld 1: FALSE\n");
    let r = modalkit(&["eval", "--topo", "--model", &t, "K1 p"]);
    assert_eq!(r.code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(modalkit(&["parse", "K1 (p"]).code, 2);
    assert_eq!(modalkit(&["parse", "K1 p & q", "--vars", "p"]).code, 2);
    assert_eq!(modalkit(&["parse", "K1 K2 p", "--agents", "1"]).code, 2);
    assert_eq!(modalkit(&["search", "--class", "nope", "p"]).code, 2);
    assert_eq!(modalkit(&["check", "--proof", "/nonexistent/file.prf"]).code, 2);
    assert_eq!(modalkit(&["suite", "nope"]).code, 2);
    let r = modalkit(&["frobnicate"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("frobnicate"));
}

#[test]
fn output_is_deterministic() {
    let args = ["suite", "roundtrip", "--seed", "7"];
    let a = modalkit(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, modalkit(&args).stdout);
    assert!(a.stdout.starts_with("PASS criterion 9"));
}
