use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_conservkit"));
    c.env_remove("CONSERVKIT_REPORT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn report(o: &Output, path: &Path) -> Value {
    assert!(
        path.exists(),
        "no report; stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn built_tensor_matches_shipped_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("w2.json");
    for (basis, shipped) in [("alpha", "w2_alpha.json"), ("e", "w2.json")] {
        let o = run(&[
            "build-w",
            "--n",
            "2",
            "--fixed",
            "1",
            "--basis",
            basis,
            "--out",
            p(&out),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(
            std::fs::read_to_string(&out).unwrap(),
            std::fs::read_to_string(data(shipped)).unwrap()
        );
    }
}

#[test]
fn subalgebras_match_shipped_files() {
    let dir = TempDir::new().unwrap();
    for (span, name) in [("1..6", "w2_commutative.json"), ("1..4", "s2.json")] {
        let out = dir.path().join(name);
        let o = run(&["sub", p(&data("w2.json")), "--span", span, "--out", p(&out)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(
            std::fs::read_to_string(&out).unwrap(),
            std::fs::read_to_string(data(name)).unwrap()
        );
    }
}

#[test]
fn non_closed_span_is_a_failed_verdict() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    let o = run(&[
        "sub",
        p(&data("w2.json")),
        "--span",
        "2,3",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("e2*e3"));
    assert!(!out.exists());
}

#[test]
fn der_reports_dimension_two() {
    let o = run(&["der", p(&data("w2.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim Der = 2\n"));
}

#[test]
fn locder_methods_agree() {
    for file in ["w2.json", "w2_commutative.json", "s2.json"] {
        for method in ["sampling", "minors", "both"] {
            let o = run(&["locder", p(&data(file)), "--method", method]);
            assert_eq!(o.status.code(), Some(0), "{file} {method}");
            assert!(stdout(&o).ends_with("verdict: EQUAL\n"));
        }
    }
}

#[test]
fn table_compare_is_empty() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("t.json");
    let o = run(&[
        "table",
        p(&data("w2.json")),
        "--compare",
        "paper",
        "--report",
        p(&rep),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o, &rep)["verdict"]["diff"], Value::Array(vec![]));
}

#[test]
fn table_compare_reports_differences() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("t.json");
    let o = run(&[
        "table",
        p(&data("w2_alpha.json")),
        "--compare",
        "paper",
        "--report",
        p(&rep),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!report(&o, &rep)["verdict"]["diff"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn family_certification() {
    let o = run(&["aut-family-certify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("checked 512 residual coordinates"));
    assert!(stdout(&o).ends_with("CERTIFIED\n"));
}

#[test]
fn aut_verify_by_family_and_matrix() {
    let w2 = data("w2.json");
    assert_eq!(
        run(&["aut-verify", p(&w2), "--family", "a=1/2,b=-2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&[
            "aut-verify",
            p(&w2),
            "--matrix",
            p(&data("aut_member.json"))
        ])
        .status
        .code(),
        Some(0)
    );
    let o = run(&[
        "aut-verify",
        p(&w2),
        "--matrix",
        p(&data("aut_perturbed.json")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NOT_AUTOMORPHISM"));
}

#[test]
fn identity_is_an_automorphism() {
    let o = run(&["aut-verify", p(&data("w2.json")), "--family", "a=0,b=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "AUTOMORPHISM\n");
}

#[test]
fn empty_structure_list_is_the_zero_algebra() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("zero.json");
    std::fs::write(&f, "{\"dim\": 2, \"c\": []}").unwrap();
    let o = run(&["der", p(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim Der = 4\n"));
}

#[test]
fn infinite_rational_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("pole.json");
    std::fs::write(
        &f,
        "{\"dim\": 1, \"c\": [{\"i\": 1, \"j\": 1, \"k\": 1, \"v\": \"1/0\"}]}",
    )
    .unwrap();
    let o = run(&["der", p(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("c[0].v"));
}

#[test]
fn aut_verify_rejects_zero_b() {
    let o = run(&["aut-verify", p(&data("w2.json")), "--family", "a=1,b=0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn locaut_verdicts() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("l.json");
    let w2 = data("w2.json");
    let o = run(&[
        "locaut",
        p(&w2),
        "--matrix",
        p(&data("aut_member.json")),
        "--report",
        p(&rep),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o, &rep);
    assert_eq!(r["verdict"]["tag"], "AUTOMORPHISM");
    assert_eq!(r["verdict"]["a"], "1/2");
    assert_eq!(r["verdict"]["b"], "-2");

    let o = run(&[
        "locaut",
        p(&w2),
        "--matrix",
        p(&data("aut_perturbed.json")),
        "--report",
        p(&rep),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o, &rep);
    assert_eq!(r["verdict"]["tag"], "NOT_IN_FAMILY");
    assert_eq!(r["verdict"]["relation"], "entry (1, 3) must be zero");
}

#[test]
fn twolocal_recovery() {
    let w2 = data("w2.json");
    let o = run(&[
        "twolocal-der",
        p(&w2),
        "--samples",
        p(&data("der_samples.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("alpha=3, beta=-1/2"));
    let o = run(&[
        "twolocal-aut",
        p(&w2),
        "--samples",
        p(&data("aut_samples.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("a=1/2, b=-2"));
}

#[test]
fn twolocal_counterexample() {
    // derivation samples are not consistent with any automorphism
    let o = run(&[
        "twolocal-aut",
        p(&data("w2.json")),
        "--samples",
        p(&data("der_samples.json")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_dir_redirects_relative_paths() {
    let dir = TempDir::new().unwrap();
    let o = bin()
        .env("CONSERVKIT_REPORT_DIR", dir.path())
        .args(["der", p(&data("s2.json")), "--report", "sub/der.json"])
        .output()
        .unwrap();
    let r = report(&o, &dir.path().join("sub/der.json"));
    assert_eq!(r["command"], "der");
    assert_eq!(r["verdict"]["dim"], 2);
    assert_eq!(r["exit_code"], 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    run(&["locder", p(&data("w2.json")), "--report", p(&a)]);
    run(&["locder", p(&data("w2.json")), "--report", p(&b)]);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    // keys come out sorted
    let keys: Vec<&str> = ["\"command\"", "\"exit_code\"", "\"inputs\"", "\"verdict\""].to_vec();
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"dim\": 2, \"c\": [{\"i\": 1, \"j\": 1, \"k\": 3, \"v\": \"1\"}]}",
    )
    .unwrap();
    let o = run(&["der", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));

    assert_eq!(
        run(&["der", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["locder", p(&data("w2.json")), "--method", "guess"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sub", p(&data("w2.json")), "--span", "0..2", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "twolocal-der",
            p(&data("s2.json")),
            "--samples",
            p(&data("der_samples.json"))
        ])
        .status
        .code(),
        Some(2)
    );
}
