//! End-to-end tests of the `invkit` binary: JSON schemas, file outputs,
//! and the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn invkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("invkit-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn classify_reports_flags_and_notes() {
    let v = stdout_json(&invkit(&["classify", "(x^3+2x) D3 + x D2 + 1"]));
    assert_eq!(v["fuchs_index"], 0);
    assert_eq!(v["exactly_solvable"], true);
    assert_eq!(v["nondegenerate"], true);

    let v = stdout_json(&invkit(&["classify", "(x+1) D3 + x^4 D2 + 2x"]));
    assert_eq!(v["nondegenerate"], false);
    assert!(v["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n == "all invariant sets unbounded"));

    let v = stdout_json(&invkit(&["classify", "D2 + 1"]));
    assert_eq!(v["subclass"]["kind"], "A-ConstantCoefficients");
}

#[test]
fn disk_decision_and_sampled_modes() {
    let v = stdout_json(&invkit(&["disk", "x D1 + 2", "--n", "1"]));
    assert_eq!(v["verdict"], "InvariantForLargeR");

    let v = stdout_json(&invkit(&["disk", "x D1 + -3", "--n", "1"]));
    assert_eq!(v["verdict"], "NotInvariantForLargeR");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());

    let v = stdout_json(&invkit(&["disk", "x D1 + 2", "--n", "1", "--radius", "10"]));
    assert_eq!(v["outcome"], "VerifiedSampled");

    let v = stdout_json(&invkit(&["disk", "x D1 + 2", "--n", "1", "--half-plane"]));
    assert_eq!(v["decision"]["verdict"], "InvariantForLargeR");
    assert_eq!(v["half_plane_advisory"]["advisory"], true);
}

#[test]
fn hutchinson_writes_csv_svg_and_metadata() {
    let csv = temp_path("julia.csv");
    let svg = temp_path("julia.svg");
    let out = invkit(&[
        "hutchinson",
        "(x^2-x+1i) D1 + 1",
        "--n",
        "1",
        "--steps",
        "2000",
        "--burn-in",
        "50",
        "--chains",
        "2",
        "--seed",
        "7",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    let meta = stdout_json(&out);
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["chains"], 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im"));
    let mut count = 0;
    for line in lines {
        let (re, im) = line.split_once(',').unwrap();
        // 17 significant digits round-trip losslessly through f64
        let re_val: f64 = re.parse().unwrap();
        let im_val: f64 = im.parse().unwrap();
        assert_eq!(format!("{re_val:.16e}"), re);
        assert_eq!(format!("{im_val:.16e}"), im);
        count += 1;
    }
    assert_eq!(count, 2 * (2000 - 50));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("<circle"));
    // metadata sidecar mirrors the stdout JSON
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(csv.with_extension("meta.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar, meta);
    std::fs::remove_file(csv.with_extension("meta.json")).ok();
    std::fs::remove_file(csv).ok();
    std::fs::remove_file(svg).ok();
}

#[test]
fn thread_cap_does_not_change_results() {
    let run = |threads: &str, tag: &str| -> String {
        let csv = temp_path(&format!("threads-{tag}.csv"));
        let out = Command::new(env!("CARGO_BIN_EXE_invkit"))
            .env("INVKIT_THREADS", threads)
            .args([
                "hutchinson",
                "(x^2-x+1i) D1 + 1",
                "--n",
                "1",
                "--steps",
                "1500",
                "--burn-in",
                "20",
                "--chains",
                "4",
                "--seed",
                "99",
                "--out",
                csv.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = std::fs::read_to_string(&csv).unwrap();
        std::fs::remove_file(csv.with_extension("meta.json")).ok();
        std::fs::remove_file(csv).ok();
        text
    };
    assert_eq!(run("1", "a"), run("4", "b"));
}

#[test]
fn newton_reports_example_border() {
    let v = stdout_json(&invkit(&[
        "newton",
        "--bipoly",
        "u^8+u^7 v^2+u^5 v^4+(5+7i)u^3 v^6-23 u v^7",
    ]));
    assert_eq!(v["classification"], "NonDefining");
    assert_eq!(v["u_infty_degree"], 7);
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    assert_eq!(edges[0]["slope"], "-1/2");
    assert_eq!(edges[2]["slope"], "-2/1");
    assert_eq!(v["cone"]["kind"], "FullPlane");

    // operator mode pulls the border back through the exponent map
    let v = stdout_json(&invkit(&["newton", "D1 - x"]));
    assert_eq!(v["classification"], "NonDefining");
    assert!(v["pulled_back_vertices"].is_array());
}

#[test]
fn eigenroots_and_lowerbound() {
    let csv = temp_path("eigen.csv");
    let out = invkit(&[
        "eigenroots",
        "(x^3+2x) D3 + x D2 + 1",
        "--m",
        "3:8",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,re,im"));
    assert_eq!(lines.count(), (3..=8).sum::<usize>());
    std::fs::remove_file(csv).ok();

    let v = stdout_json(&invkit(&["lowerbound", "x(x-1) D2 + (2x-1) D1"]));
    let polygon = v["polygon"].as_array().unwrap();
    assert_eq!(polygon.len(), 2);
}

#[test]
fn degree_search_command() {
    let v = stdout_json(&invkit(&[
        "degree-search",
        "x D1 + 1",
        "--delta",
        "0.01",
        "--n-cap",
        "200",
    ]));
    assert_eq!(v["found"], 99);
}

#[test]
fn exit_code_contract() {
    // 2: parse error with position diagnostics
    let out = invkit(&["classify", "(x^2 + $"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
    // 3: precondition violation (degenerate for n)
    let out = invkit(&["disk", "x D1 + -3", "--n", "3"]);
    assert_eq!(out.status.code(), Some(3));
    // 3: not exactly solvable
    let out = invkit(&["eigenroots", "(x+1) D3 + x^4 D2 + 2x", "--m", "3:5"]);
    assert_eq!(out.status.code(), Some(3));
    // 4: sampler degeneracy (psi constant for the derivative operator)
    let tmp = temp_path("degenerate.csv");
    let out = invkit(&[
        "hutchinson",
        "D1",
        "--n",
        "1",
        "--steps",
        "10",
        "--burn-in",
        "1",
        "--out",
        tmp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    std::fs::remove_file(tmp).ok();
    // 6: I/O failure (unwritable output path)
    let out = invkit(&[
        "hutchinson",
        "(x^2-x+1i) D1 + 1",
        "--n",
        "1",
        "--steps",
        "10",
        "--burn-in",
        "1",
        "--out",
        "/nonexistent-dir/points.csv",
    ]);
    assert_eq!(out.status.code(), Some(6));
}
