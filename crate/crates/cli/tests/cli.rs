use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn gridcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn gridcover_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gridcover"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn fold_example() {
    let out = gridcover(&["fold", "--r", "3", "--shift", "2", "--p", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["p"], 5);
    assert_eq!(v["weights"], serde_json::json!(["5", "5", "5", "5", "5"]));
}

#[test]
fn project_json_and_csv() {
    let out = gridcover(&["project", "--r", "3", "--shift", "2"]);
    let v = json(&out);
    assert_eq!(v["total"], 25);
    let h: Vec<(i64, u64)> = v["profile"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["i"].as_i64().unwrap(), e["h"].as_u64().unwrap()))
        .collect();
    assert!(h.contains(&(-5, 1)) && h.contains(&(3, 3)) && h.contains(&(7, 0)));

    let out = gridcover(&["project", "--r", "2", "--shift", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("i,h\n"));
    assert!(text.contains("\n0,3\n") && text.contains("\n-1,2\n"));
}

#[test]
fn table_csv_in_scope() {
    let out = gridcover(&["table", "--r", "4", "--only-in-scope", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines().any(|l| l.starts_with("Coloring2,18,23,")),
        "{text}"
    );
    // Coloring 4 at r = 4 is (27, 28), out of scope
    assert!(!text.contains("Coloring4"));
}

#[test]
fn table_json_schema() {
    let v = json(&gridcover(&["table", "--r", "2"]));
    let rows = v.as_array().unwrap();
    let first = &rows[0];
    for key in ["family", "r", "alpha", "a", "b", "in_scope"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert_eq!(
        (first["a"].as_u64(), first["b"].as_u64()),
        (Some(3), Some(5))
    );
}

#[test]
fn verify_pattern_100() {
    let out = gridcover(&[
        "verify",
        "--r",
        "2",
        "--pattern",
        "100",
        "--orientation",
        "parallel",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "verified");
    assert_eq!((v["a"].as_u64(), v["b"].as_u64()), (Some(3), Some(5)));
}

#[test]
fn verify_failure_prints_witness() {
    let out = gridcover(&[
        "verify",
        "--r",
        "2",
        "--pattern",
        "1110",
        "--orientation",
        "parallel",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let witness: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(witness["cell"], serde_json::json!([1, 0]));
    assert_ne!(witness["expected"], witness["observed"]);
}

#[test]
fn gen_code_round_trip() {
    for args in [
        vec!["gen-code", "--family", "2", "--r", "4"],
        vec!["gen-code", "--family", "4", "--r", "4"],
        vec!["gen-code", "--family", "3", "--r", "5", "--alpha", "1"],
        vec![
            "gen-code",
            "--family",
            "5",
            "--variant",
            "three-periodic",
            "--r",
            "6",
            "--alpha",
            "1",
        ],
        vec![
            "gen-code",
            "--family",
            "2",
            "--r",
            "4",
            "--orientation",
            "crossed",
        ],
    ] {
        let gen = gridcover(&args);
        assert!(
            gen.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&gen.stderr)
        );
        let code = json(&gen);
        let ver = gridcover_stdin(&["verify"], &gen.stdout);
        assert_eq!(ver.status.code(), Some(0), "{args:?}");
        let v = json(&ver);
        assert_eq!((&v["a"], &v["b"]), (&code["a"], &code["b"]), "{args:?}");
    }
}

#[test]
fn gen_code_checks_crossed_layout() {
    // pattern 100 folds correctly but its crossed layout is not a code
    let out = gridcover(&[
        "gen-code",
        "--family",
        "1",
        "--r",
        "3",
        "--orientation",
        "crossed",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let witness: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(witness["orientation"], "crossed");
    assert!(witness["violation"]["cell"].is_array());
}

#[test]
fn gen_code_examples() {
    let v = json(&gridcover(&[
        "gen-code",
        "--family",
        "2",
        "--r",
        "4",
        "--preset",
        "half-black",
    ]));
    assert_eq!(v["pattern"], "11110000");
    assert_eq!((v["a"].as_u64(), v["b"].as_u64()), (Some(18), Some(23)));
    let v = json(&gridcover(&["gen-code", "--family", "4", "--r", "4"]));
    assert_eq!(v["pattern"], "110110110");
}

#[test]
fn exit_codes_for_bad_input() {
    // Coloring 4 needs 2r+1 ≡ 0 (mod 3)
    let out = gridcover(&["gen-code", "--family", "4", "--r", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2r+1 ≡ 0 (mod 3)"));
    // Type 5 needs p ≡ 1 (mod 4)
    let out = gridcover(&["enumerate", "--type", "5", "--p", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p ≡ 1 (mod 4)"));
    assert_eq!(
        gridcover(&["table", "--r", "2", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gridcover(&["table", "--r", "2", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    // a preset that is not a constant 2-labelling is a mismatch
    let out = gridcover(&[
        "gen-code",
        "--family",
        "2",
        "--r",
        "4",
        "--preset",
        "initial-block",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let witness: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(witness["witness"].is_array());
}

#[test]
fn enumerate_and_cross_check() {
    let out = gridcover(&["enumerate", "--type", "2", "--p", "4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["matches"], true);
    assert_eq!(v["labellings"].as_array().unwrap().len(), 6);

    let out = gridcover(&[
        "enumerate",
        "--type",
        "8",
        "--p",
        "8",
        "--special-t",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("coloring,a,b,rows,structure_ok\n"));
    assert!(text.contains("type8_psi_dense"));

    let out = gridcover(&["cross-check", "--p-max", "9"]);
    assert!(out.status.success());
    let rows = json(&out);
    assert!(rows
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["matches"] == true));
}

#[test]
fn enumeration_bound_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_gridcover"))
        .args(["enumerate", "--type", "1", "--p", "10"])
        .env("GRIDCOVER_MAX_P", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound of 8"));
}

#[test]
fn render_pbm_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let pbm = dir.path().join("white.pbm");
    let out = gridcover(&[
        "render",
        "--pattern",
        "0",
        "--r",
        "2",
        "--window",
        "4x4",
        "-o",
        pbm.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&pbm).unwrap(),
        "P1 4 4\n0000\n0000\n0000\n0000\n"
    );

    let pbm = dir.path().join("third.pbm");
    gridcover(&[
        "render",
        "--pattern",
        "100",
        "--r",
        "2",
        "--window",
        "6x6",
        "-o",
        pbm.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&pbm).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    for (row, line) in rows.iter().enumerate() {
        let x2 = 5 - row as i64;
        for (x1, ch) in line.chars().enumerate() {
            assert_eq!(ch == '1', (x1 as i64 - x2).rem_euclid(3) == 0);
        }
    }

    let svg = dir.path().join("stripes.svg");
    gridcover(&[
        "render",
        "--pattern",
        "10",
        "--r",
        "2",
        "--window",
        "8x8",
        "-o",
        svg.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="black""#).count(), 32);

    let again = dir.path().join("stripes2.svg");
    gridcover(&[
        "render",
        "--pattern",
        "10",
        "--r",
        "2",
        "--window",
        "8x8",
        "-o",
        again.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&svg).unwrap(), std::fs::read(&again).unwrap());

    let coded = dir.path().join("c2.svg");
    let out = gridcover(&[
        "render",
        "--family",
        "2",
        "--r",
        "4",
        "--window",
        "16x16",
        "-o",
        coded.to_str().unwrap(),
    ]);
    assert!(out.status.success());
}

#[test]
fn render_rejects_empty_window() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.pbm");
    let out = gridcover(&[
        "render",
        "--pattern",
        "10",
        "--r",
        "2",
        "--window",
        "0x4",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}
