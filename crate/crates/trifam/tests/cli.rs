//! End-to-end tests of the command-line interface: output formats,
//! pipelines over the shared file formats, and the exit-code contract.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn trifam(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_trifam"));
    cmd.args(args);
    cmd.stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    if let Some(input) = stdin {
        child.stdin.as_mut().unwrap().write_all(input.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn fn_table_values() {
    let out = trifam(&["fn-table", "--from", "3", "--to", "12"], None);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "3 1\n4 2\n5 5\n6 8\n7 14\n8 20\n9 30\n10 40\n11 55\n12 70\n"
    );
}

#[test]
fn gen_solve_pipeline() {
    let gen = trifam(&["gen", "--kind", "near-regular", "--n", "7"], None);
    assert!(gen.status.success());
    let points = stdout(&gen);
    assert!(points.starts_with("points 7\n"));

    let solve = trifam(&["solve"], Some(&points));
    assert!(solve.status.success());
    let text = stdout(&solve);
    assert!(text.starts_with("family 14\n"), "{text}");
    assert!(text.contains("max=14 optimal=true"), "{text}");

    // The solver's family file (with its trailing summary line) pipes
    // straight back into verify.
    let family_path = std::env::temp_dir().join("trifam-cli-test-family.txt");
    std::fs::write(&family_path, &text).unwrap();
    let verify = trifam(
        &["verify", "--family", family_path.to_str().unwrap()],
        Some(&points),
    );
    assert!(verify.status.success());
    assert!(stdout(&verify).contains("intersecting: 14 triangles"));
    std::fs::remove_file(&family_path).ok();
}

#[test]
fn verify_rejects_disjoint_pair_with_exit_1() {
    let gen = trifam(&["gen", "--kind", "near-regular", "--n", "6"], None);
    let points = stdout(&gen);
    let family_path = std::env::temp_dir().join("trifam-cli-test-bad-family.txt");
    std::fs::write(&family_path, "family 2\n0 1 2\n3 4 5\n").unwrap();
    let verify = trifam(
        &["verify", "--family", family_path.to_str().unwrap()],
        Some(&points),
    );
    assert_eq!(verify.status.code(), Some(1));
    let err = String::from_utf8(verify.stderr).unwrap();
    assert!(err.contains("(0,1,2)") && err.contains("(3,4,5)"), "{err}");
    std::fs::remove_file(&family_path).ok();
}

#[test]
fn usage_errors_exit_2() {
    let gen = trifam(&["gen", "--kind", "near-regular", "--n", "5"], None);
    let points = stdout(&gen);
    let out = trifam(&["depth", "--x", "not-a-number", "--y", "0"], Some(&points));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn depth_at_center() {
    let gen = trifam(&["gen", "--kind", "near-regular", "--n", "9"], None);
    let points = stdout(&gen);
    let out = trifam(&["depth", "--x", "1/100000000", "--y", "1/99999999"], Some(&points));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "depth=30\n");
}

#[test]
fn certificates_and_bound_registry() {
    let gen = trifam(&["gen", "--kind", "near-regular", "--n", "6"], None);
    let points = stdout(&gen);
    let solve = trifam(&["solve"], Some(&points));
    let family_path = std::env::temp_dir().join("trifam-cli-test-cert-family.txt");
    std::fs::write(&family_path, stdout(&solve)).unwrap();
    let fam = family_path.to_str().unwrap();

    let dc = trifam(&["certify-dc", "--family", fam], Some(&points));
    assert!(dc.status.success());
    assert!(stdout(&dc).contains("conclusion: 8 <= 8"));

    let peel = trifam(&["certify-peel", "--family", fam], Some(&points));
    assert!(peel.status.success());
    assert!(stdout(&peel).contains("conclusion |F|=8 <= F(6)=8"));

    let rep = trifam(&["replace", "--family", fam], Some(&points));
    assert!(rep.status.success());
    assert!(stdout(&rep).contains("final-size: 8"));

    let list = trifam(&["bound", "--family", fam, "--list"], None);
    assert!(list.status.success());
    for name in ["double-count", "replace", "peel", "exact"] {
        assert!(stdout(&list).contains(name));
        let run = trifam(&["bound", "--family", fam, "--method", name], Some(&points));
        assert!(run.status.success(), "method {name}");
        assert!(
            stdout(&run).contains(&format!("bound-method={name} size=8 bound=8 ok=true")),
            "method {name}: {}",
            stdout(&run)
        );
    }
    std::fs::remove_file(&family_path).ok();
}

#[test]
fn strips_and_oracle_and_dimacs() {
    let gen = trifam(&["gen", "--kind", "near-regular", "--n", "3"], None);
    let points = stdout(&gen);
    let dimacs = trifam(&["export-dimacs"], Some(&points));
    assert!(dimacs.status.success());
    assert_eq!(stdout(&dimacs), "p edge 1 0\n");

    let gen7 = trifam(&["gen", "--kind", "near-regular", "--n", "7"], None);
    let points7 = stdout(&gen7);
    let oracle = trifam(&["oracle"], Some(&points7));
    assert!(oracle.status.success());
    assert_eq!(stdout(&oracle), "max=14\n");

    let strips = trifam(&["strips"], Some(&points7));
    assert!(strips.status.success());
    assert!(stdout(&strips).starts_with("nontrivial-strips: "));
}

#[test]
fn mc_and_discretize_reports() {
    let mc = trifam(&["mc", "--samples", "20000", "--seed", "6"], None);
    assert!(mc.status.success());
    let text = stdout(&mc);
    assert!(text.starts_with("rng: chacha12\n"), "{text}");
    assert!(text.contains("n_samples=20000 seed=6 bound_ok=true"), "{text}");
    // Byte-stable for a fixed seed.
    assert_eq!(text, stdout(&trifam(&["mc", "--samples", "20000", "--seed", "6"], None)));

    let disc = trifam(
        &["discretize", "--n", "10", "--trials", "20", "--seed", "3"],
        None,
    );
    assert!(disc.status.success());
    assert!(stdout(&disc).contains("n=10 trials=20 seed=3"));

    let piece = trifam(
        &["mc", "--samples", "5000", "--measure", "0,0.5,1:0.8,0.2"],
        None,
    );
    assert!(piece.status.success());

    let bad = trifam(&["mc", "--measure", "0,0.5:0.5"], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn anchor_and_random_gen_deterministic() {
    let a = trifam(&["gen", "--kind", "random-general", "--n", "6", "--seed", "11"], None);
    let b = trifam(&["gen", "--kind", "random-general", "--n", "6", "--seed", "11"], None);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));

    let anchor = trifam(&["anchor"], Some(&stdout(&a)));
    assert!(anchor.status.success());
    assert_eq!(stdout(&anchor).trim().split_whitespace().count(), 2);

    let cluster = trifam(&["gen", "--kind", "three-cluster", "--n", "9"], None);
    assert!(cluster.status.success());
    assert!(stdout(&cluster).starts_with("points 9\n"));
}
