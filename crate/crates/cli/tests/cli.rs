use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_linkoid"))
        .args(args)
        .env("LINKOID_THREADS", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    corpus(name).to_str().unwrap().to_string()
}

#[test]
fn compute_examples() {
    let o = run(&["compute", &path("trivial.lkd"), "--invariant", "bracket"], None);
    assert_eq!(stdout(&o), "l\n");
    let o = run(&["compute", &path("kink.lkd"), "--invariant", "bracket", "--normalized"], None);
    assert_eq!(stdout(&o), "l\n");
    let o = run(&["compute", &path("trefoil.lkd"), "--invariant", "bracket", "--normalized"], None);
    assert_eq!(stdout(&o), "-A^-2-A^-6-A^-10+A^-18\n");
    let o = run(&["compute", &path("trefoil.lkd"), "--invariant", "writhe"], None);
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn scramble_with_no_moves_reserializes() {
    let o = run(&["scramble", &path("trivial.lkd"), "--moves", "0", "--seed", "1"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "surface S2\nT 1 1\nH 1 2\n");
}

#[test]
fn scramble_pipes_into_compute() {
    let s = run(&["scramble", &path("trivial.lkd"), "--moves", "100", "--seed", "7"], None);
    let o = run(&["compute", "--invariant", "bracket", "--normalized"], Some(&stdout(&s)));
    assert_eq!(stdout(&o), "l\n");

    let s = run(&["scramble", &path("kink.lkd"), "--moves", "50", "--seed", "3", "--framed"], None);
    let o = run(&["compute", "-", "--invariant", "writhe"], Some(&stdout(&s)));
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn scramble_is_deterministic() {
    let args = ["scramble", &path("hopf.lkd"), "--moves", "40", "--seed", "11"];
    assert_eq!(stdout(&run(&args, None)), stdout(&run(&args, None)));
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let scrambled = dir.path().join("s.lkd");
    let s = run(&["scramble", &path("trivial.lkd"), "--moves", "30", "--seed", "5"], None);
    std::fs::write(&scrambled, stdout(&s)).unwrap();
    let o = run(&["compare", &path("trivial.lkd"), scrambled.to_str().unwrap(), "--normalized"], None);
    assert_eq!(o.status.code(), Some(0));

    let args = ["compare", &path("pair_l1.lkd"), &path("pair_l2.lkd")];
    let o = run(&[&args[..], &["--invariant", "ordered-bracket", "--normalized"]].concat(), None);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[&args[..], &["--normalized"]].concat(), None);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["compare", &path("trefoil.lkd"), &path("trefoil.lkd"), "--oracle"], None);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["compare", &path("hopf.lkd"), &path("hopf.lkd"), "--invariant", "kbsm", "--oracle"], None);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_two_with_line_number() {
    let o = run(&["compute"], Some("surface S2\nX 1 2\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn unsupported_input_exits_three() {
    let o = run(&["compute", &path("hopf.lkd"), "--invariant", "tcol"], None);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["compute", "--invariant", "tcol", "--scheme", "ordered"], Some("surface S2\nT 1\nH 1\n"));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn tcol_and_theta_output() {
    let a = run(&["compute", &path("theta_trefoil_a.lkd"), "--invariant", "tcol"], None);
    let b = run(&["compute", &path("theta_trefoil_b.lkd"), "--invariant", "tcol"], None);
    let c = run(&["compute", &path("theta_trefoil_c.lkd"), "--invariant", "tcol"], None);
    assert!(stdout(&a).starts_with("outcomes 9\n"));
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));

    let o = run(&["compute", &path("knotoid21.lkd"), "--invariant", "tcol"], None);
    let text = stdout(&o);
    for s in ["[unordered]", "[oriented-strong]", "[ordered-strong]"] {
        assert!(text.contains(s), "{text}");
    }

    let g = run(&["compute", &path("trivial.lkd"), "--invariant", "theta"], None);
    let text = stdout(&g);
    assert!(text.contains("V vinf") && text.contains("V vminf"), "{text}");
    let o = run(&["compute", "--invariant", "tcol"], Some(&text));
    assert!(o.status.success());
}

#[test]
fn json_mirrors_text() {
    let o = run(&["compute", &path("trefoil.lkd"), "--normalized", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariant"], "bracket");
    assert_eq!(v["normalized"], true);
    assert_eq!(v["value"], "-A^-2-A^-6-A^-10+A^-18");

    let o = run(&["compute", &path("collapse_k1.lkd"), "--invariant", "kbsm", "--normalized", "--sphere", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"][0]["basis"], "arc{1,2}");
    assert_eq!(v["value"][0]["coefficient"], "-A^-2-A^-10");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["compute", &path("weave10_r2.lkd"), "--invariant", "kbsm", "--normalized"];
    let first = stdout(&run(&args, None));
    assert!(first.ends_with('\n'));
    assert_eq!(first, stdout(&run(&args, None)));
}

#[test]
fn corpus_commands() {
    let o = run(&["corpus", "list"], None);
    assert!(stdout(&o).lines().any(|l| l.starts_with("trefoil\t")));
    let o = run(&["corpus", "show", "kink"], None);
    assert!(stdout(&o).contains("X "));
    let o = run(&["corpus", "check"], None);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["corpus", "show", "missing"], None);
    assert_eq!(o.status.code(), Some(2));
}
