use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn blockrig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockrig"))
        .args(args)
        .env_remove("BLOCKRIG_BNB_BITS")
        .env_remove("BLOCKRIG_EXHAUSTIVE_BITS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data lines of a CSV result (header comments dropped).
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn game_value_of_swap_game() {
    let g = fixture("swap_game.json");
    let text = stdout(&blockrig(&["game-value", "--game", path(&g)]));
    assert!(text.starts_with(&format!("# blockrig {}\n# config {{", env!("CARGO_PKG_VERSION"))));
    let r = rows(&text);
    let value = r[0].iter().position(|c| c == "value").unwrap();
    assert_eq!(r[1][value], "1/2");
    assert_eq!(r[1][value + 1], "0.500000");
}

#[test]
fn every_csv_column_is_documented_in_help() {
    let g = fixture("swap_game.json");
    let m = fixture("m3.txt");
    let runs: Vec<Vec<&str>> = vec![
        vec!["rank", "--matrix", path(&m)],
        vec!["rigid-matrix", "--matrix", path(&m), "--r", "1", "--s", "1"],
        vec!["rigid-function", "--random-k", "2", "--r", "1", "--s", "1"],
        vec!["census", "--k", "2", "--r", "1", "--s", "1"],
        vec!["game-value", "--game", path(&g)],
        vec!["repeat-decay", "--game", path(&g), "--n-max", "2"],
        vec!["transpose-game", "--n", "2"],
        vec!["product-game", "--n", "2", "--x-views", "1;0", "--y-views", "1;0", "--bnb-bits", "64"],
        vec!["tm-run", "--tensor-k", "1", "--n", "3"],
        vec!["tm-graph", "--tensor-k", "1", "--n", "3"],
        vec!["tensor-k-bench", "--k", "1", "--n", "2"],
    ];
    for args in runs {
        let header = rows(&stdout(&blockrig(&args))).remove(0);
        let help = stdout(&blockrig(&[args[0], "--help"]));
        for column in header {
            assert!(
                help.lines().any(|l| l.trim_start().starts_with(&format!("{column} "))),
                "{}: column {column} missing from --help",
                args[0]
            );
        }
    }
}

#[test]
fn tensor_bench_reports_steps_and_constant() {
    let text = stdout(&blockrig(&["tensor-k-bench", "--k", "2", "--n", "4,8,16,32", "--instances", "2"]));
    let r = rows(&text);
    assert_eq!(r[0], ["k", "n", "m", "instances", "mismatches", "steps", "steps_per_n", "c_k", "bound"]);
    assert_eq!(r.len(), 5);
    for row in &r[1..] {
        assert_eq!(row[4], "0");
        let steps: u64 = row[5].parse().unwrap();
        let bound: u64 = row[8].parse().unwrap();
        assert!(steps <= bound);
    }
}

#[test]
fn budget_errors_name_the_size() {
    let out = blockrig(&["product-game", "--n", "2", "--x-views", "0;1", "--y-views", "0;1"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("needs 64") && err.contains("limit is 40"), "{err}");
}

#[test]
fn env_var_sets_default_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_blockrig"))
        .args(["product-game", "--n", "2", "--x-views", "1;0", "--y-views", "1;0"])
        .env("BLOCKRIG_BNB_BITS", "64")
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.contains(r#""bnb_bits":64"#));
    assert_eq!(rows(&text)[1][3], "19/64");
}

#[test]
fn witness_and_certificate_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture("id3.txt");
    let w = dir.path().join("w.json");
    stdout(&blockrig(&["rigid-matrix", "--matrix", path(&m), "--r", "1", "--s", "1", "--witness-out", path(&w)]));
    let ok = stdout(&blockrig(&["validate", "--matrix", path(&m), "--decomposition", path(&w), "--r", "1", "--s", "1"]));
    assert_eq!(rows(&ok)[1], ["decomposition", "true", "ok"]);
    let bad = blockrig(&["validate", "--matrix", path(&m), "--decomposition", path(&w), "--r", "0", "--s", "1"]);
    assert!(!bad.status.success());

    let f = fixture("identity2.txt");
    let c = dir.path().join("c.json");
    stdout(&blockrig(&["rigid-function", "--function", path(&f), "--r", "1", "--s", "1", "--certificate-out", path(&c)]));
    let ok = stdout(&blockrig(&["validate", "--function", path(&f), "--certificate", path(&c)]));
    assert_eq!(rows(&ok)[1][1], "true");
}

#[test]
fn machine_runs_need_a_block_length() {
    let out = blockrig(&["tm-run", "--machine", path(&fixture("copier.tm")), "--input", "0101"]);
    assert!(!out.status.success());
    let text = stdout(&blockrig(&["tm-run", "--machine", path(&fixture("copier.tm")), "--input", "0101", "--b", "2"]));
    assert_eq!(rows(&text)[1][..6], ["5", "true", "0101", "2", "3", "true"]);
}

#[test]
fn json_output_parses() {
    let text = stdout(&blockrig(&["transpose-game", "--n", "2", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["config"]["command"], "transpose-game");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_usage_fails_with_message() {
    let out = blockrig(&["rank"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--matrix"));
}
