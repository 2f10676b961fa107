//! End-to-end checks of the binary: golden outputs, determinism, input
//! round-trips and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures_dir() -> PathBuf {
    match std::env::var("FEYNMAT_FIXTURES") {
        Ok(dir) => PathBuf::from(dir),
        Err(_) => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"),
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feynmat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(fixture: &str, args: &[&str]) -> Output {
    let path = fixtures_dir().join(fixture);
    let mut full = vec![args[0], path.to_str().unwrap()];
    full.extend(&args[1..]);
    run(&full)
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn symanzik_golden_dunce_cap() {
    let out = run_on("dunces_cap.json", &["symanzik", "--first"]);
    assert_eq!(stdout_of(&out), "psi = a*c + a*d + b*c + b*d + c*d\n");
    let out = run_on("dunces_cap.json", &["symanzik", "--second"]);
    assert_eq!(
        stdout_of(&out),
        "phi = a*b*c*s11 + a*b*d*s11 + a*c*d*s33 + b*c*d*s22\n"
    );
}

#[test]
fn circuits_golden_dunce_cap() {
    let out = run_on("dunces_cap.json", &["circuits"]);
    assert_eq!(stdout_of(&out), "{a, b, c}\n{a, b, d}\n{c, d}\n");
}

#[test]
fn check_path_graph_is_not_1pi() {
    let out = run_on("path.json", &["check"]);
    let text = stdout_of(&out);
    assert!(text.contains("1PI: false"), "{text}");
    assert!(text.contains("totally unimodular (incidence matrix): true"));
}

#[test]
fn check_u24_matrix_input() {
    let out = run_on("u24.mat", &["check"]);
    let text = stdout_of(&out);
    assert!(text.contains("1PI: true"), "{text}");
    assert!(text.contains("determinant -2"), "{text}");
    assert!(text.contains("regular (binary test): false"), "{text}");
}

#[test]
fn reduce_big_example_mentions_raw_cycles() {
    let out = run_on(
        "big_example.json",
        &[
            "reduce",
            "--pairs",
            "a1:a5",
            "--externals",
            "--format",
            "json",
        ],
    );
    let text = stdout_of(&out);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let circuits = doc["circuits"].as_array().unwrap();
    let as_sets: Vec<Vec<String>> = circuits
        .iter()
        .map(|c| {
            c.as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_str().unwrap().to_string())
                .collect()
        })
        .collect();
    // the five-element raw cycle {a1, a2, a6, a7, x1} must be present
    assert!(as_sets
        .iter()
        .any(|c| c.len() == 5 && c.contains(&"a1".into()) && c.contains(&"x1".into())));
    assert_eq!(doc["new_elements"][0]["id"], "x1");
    assert_eq!(doc["scalar_terms"].as_array().unwrap().len(), 3);
}

#[test]
fn reduce_flip_sign_selects_the_other_coextension() {
    let a = stdout_of(&run_on("k33.json", &["reduce", "--pairs", "e7:e8"]));
    let b = stdout_of(&run_on(
        "k33.json",
        &["reduce", "--pairs", "e7:e8", "--flip-sign", "e7:e8"],
    ));
    assert_ne!(a, b);
    assert!(a.contains("block form (6 rows, graph rank 5, new 1)"));
}

#[test]
fn integrand_emits_momentum_space_and_parametric_documents() {
    let out = run_on("dunces_cap.json", &["integrand", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(
        doc["momentum_space"]["propagators"]
            .as_array()
            .unwrap()
            .len(),
        4
    );
    assert_eq!(
        doc["parametric"]["psi"]["terms"].as_array().unwrap().len(),
        5
    );
    assert!(doc["parametric"]["phi"]["text"]
        .as_str()
        .unwrap()
        .contains("s11"));
}

#[test]
fn identical_jobs_are_byte_identical() {
    for args in [
        vec!["symanzik", "--first", "--second", "--format", "json"],
        vec!["circuits"],
        vec!["integrand", "--format", "json"],
    ] {
        let a = stdout_of(&run_on("dunces_cap.json", &args));
        let b = stdout_of(&run_on("dunces_cap.json", &args));
        assert_eq!(a, b);
    }
    let a = stdout_of(&run_on(
        "big_example.json",
        &[
            "reduce",
            "--pairs",
            "a1:a5",
            "--externals",
            "--format",
            "json",
        ],
    ));
    let b = stdout_of(&run_on(
        "big_example.json",
        &[
            "reduce",
            "--pairs",
            "a1:a5",
            "--externals",
            "--format",
            "json",
        ],
    ));
    assert_eq!(a, b);
}

#[test]
fn dual_output_round_trips_as_a_matroid_record() {
    let out = stdout_of(&run_on("triangle.json", &["dual"]));
    assert!(out.starts_with("ground: "));
    // a rank-1 matroid on three elements: every pair is a circuit
    assert!(out.contains("circuits:"));
    let circuits: Vec<&str> = out
        .lines()
        .skip_while(|l| *l != "circuits:")
        .skip(1)
        .collect();
    assert_eq!(circuits.len(), 3);
}

#[test]
fn exit_codes() {
    // success
    let ok = run_on("dunces_cap.json", &["circuits"]);
    assert_eq!(ok.status.code(), Some(0));
    // schema error: malformed JSON
    let dir = std::env::temp_dir().join("feynmat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["circuits", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // unknown edge in a pair: validation error
    let out = run_on("triangle.json", &["reduce", "--pairs", "a:zz"]);
    assert_eq!(out.status.code(), Some(1));
    // bad usage
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_k33_coextension_record_is_not_regular() {
    let out = run_on("k33_coext1.mat", &["check"]);
    let text = stdout_of(&out);
    assert!(text.contains("regular (binary test): false"), "{text}");
    assert!(text.contains("1PI: true"), "{text}");
}
