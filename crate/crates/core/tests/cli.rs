use std::io::Write;
use std::process::{Command, Output, Stdio};

fn propnet(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_propnet"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SERIES: &str = r#"{"nodes": 3, "edges": [
  {"src":0,"tgt":1,"label":{"kind":"resistor","value":"2"}},
  {"src":1,"tgt":2,"label":{"kind":"resistor","value":"3"}}],
  "inputs": [0], "outputs": [2]}"#;

#[test]
fn blackbox_of_a_wire_is_the_identity() {
    let wire = r#"{"nodes": 2, "edges": [{"src":0,"tgt":1,"label":{"kind":"wire"}}], "inputs": [0], "outputs": [1]}"#;
    let o = propnet(&["blackbox", "--circuit", "-"], wire);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "linrel 2 -> 2\nphi_in_1 - phi_out_1 = 0\nI_in_1 - I_out_1 = 0\n");
}

#[test]
fn blackbox_adds_series_resistances() {
    let o = propnet(&["blackbox", "--circuit", "-"], SERIES);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "linrel 2 -> 2\nphi_in_1 - phi_out_1 + 5*I_out_1 = 0\nI_in_1 - I_out_1 = 0\n"
    );
}

#[test]
fn battery_gives_an_affine_relation() {
    let battery = r#"{"nodes": 2, "edges": [
      {"src":0,"tgt":1,"label":{"kind":"vsource","value":"5"}}], "inputs": [0], "outputs": [1]}"#;
    let o = propnet(&["blackbox", "--circuit", "-"], battery);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "affrel 2 -> 2\nphi_in_1 - phi_out_1 = -5\nI_in_1 - I_out_1 = 0\n");
}

#[test]
fn laws_suite_exits_zero_when_all_expected() {
    let o = propnet(&["laws", "fincospan"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("fincospan: 12 checks, 0 unexpected\n"));
}

#[test]
fn eq_reports_equal_and_differ() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.term");
    let b = dir.path().join("b.term");
    let c = dir.path().join("c.term");
    std::fs::write(&a, "(seq (gen d) (gen m))").unwrap();
    std::fs::write(&b, "(id 1)").unwrap();
    std::fs::write(&c, "(seq (gen e) (gen i))").unwrap();
    let (a, b, c) = (a.to_str().unwrap(), b.to_str().unwrap(), c.to_str().unwrap());
    let o = propnet(&["eq", "--model", "corel", a, b], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "EQUAL\n");
    let o = propnet(&["eq", "--model", "corel", c, b], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("DIFFER\n"));
}

#[test]
fn eval_reads_terms_from_stdin() {
    let o = propnet(&["eval", "--model", "corel", "--term", "-"], "(seq (gen d) (gen m))");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "corel 1 1 { {x1 y1} }\n");
}

#[test]
fn errors_exit_with_two() {
    let o = propnet(&["blackbox", "--circuit", "/nonexistent/circuit.json"], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("propnet: "));
    let o = propnet(&["eval", "--model", "nope", "--term", "-"], "(id 1)");
    assert_eq!(o.status.code(), Some(2));
    let o = propnet(&["eval", "--model", "corel", "--term", "-"], "(seq (gen d)");
    assert_eq!(o.status.code(), Some(2));
    let o = propnet(&["laws", "nope"], "");
    assert_eq!(o.status.code(), Some(2));
}
