use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pdisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdisk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn example3() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/example3")
}

#[test]
fn cross_reads_arc_files() {
    let dir = scratch("cross");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    std::fs::write(&a, r#"{"type":"peripheral","from":5,"to":3}"#).unwrap();
    std::fs::write(&b, r#"{"type":"peripheral","from":1,"to":6}"#).unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let o = pdisk(&["cross", "--n", "7", a, b]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "2\n"));
    let o = pdisk(&["cross", "--n", "7", a, a]);
    assert_eq!(stdout(&o), "0\n");
    let o = pdisk(&["cross", "--n", "7", "--format", "json", a, b]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["e"], 2);
}

#[test]
fn invalid_input_exits_with_2() {
    let dir = scratch("invalid");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"type":"peripheral","from":1,"to":2}"#).unwrap();
    let o = pdisk(&["cross", "--n", "7", bad.to_str().unwrap(), "P(5,3)"]);
    assert_eq!(o.status.code(), Some(2));
    let broken = dir.join("broken.json");
    std::fs::write(&broken, r#"{"type":"#).unwrap();
    let o = pdisk(&["cross", "--n", "7", broken.to_str().unwrap(), "P(5,3)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json"));
    assert_eq!(pdisk(&["cross", "--n", "7", "P(5,3)", "P(1,6)", "--field", "fp:4"]).status.code(), Some(2));
    assert_eq!(pdisk(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn smooth_lists_four_plus_candidates() {
    let o = pdisk(&["smooth", "--n", "7", "P(5,3)", "P(1,6)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["plus"].as_array().unwrap().len(), 4);
    assert_eq!(v["minus"].as_array().unwrap().len(), 4);
}

#[test]
fn ext_reports_sequences_for_the_examples() {
    for (name, ses) in [("example1", 4), ("example2", 1)] {
        let o = pdisk(&["ext", name, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        let found = v["candidates"].as_array().unwrap().iter().filter(|c| c["verdict"] == "ses").count();
        assert_eq!(found, ses, "{name}");
    }
}

#[test]
fn json_output_is_deterministic() {
    let a = pdisk(&["ext", "example1", "--format", "json", "--seed", "7"]);
    let b = pdisk(&["ext", "example1", "--format", "json", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lemma_fixture_and_characteristic_two() {
    let o = pdisk(&["fixture", "lemma-d", "--n", "8", "--r", "2", "--s", "4", "--i", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["exact"].as_bool(), v["non_split"].as_bool()), (Some(true), Some(true)));
    let o = pdisk(&["fixture", "lemma-d", "--n", "8", "--r", "2", "--s", "4", "--i", "6", "--field", "fp:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_counts_arcs() {
    let o = pdisk(&["enumerate", "--n", "4"]);
    assert!(stdout(&o).starts_with("16 arcs\n"));
}

#[test]
fn verify_qp_from_files() {
    let d = example3();
    let files: Vec<String> = ["quiver.json", "potential.json", "reps.json", "sequences.json"]
        .iter()
        .map(|f| d.join(f).to_str().unwrap().to_string())
        .collect();
    let mut args = vec!["verify-qp"];
    args.extend(files.iter().map(|s| s.as_str()));
    let o = pdisk(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // one entry changed in one middle term
    let mut reps: Value = serde_json::from_str(&std::fs::read_to_string(d.join("reps.json")).unwrap()).unwrap();
    reps["E_a"]["mats"]["a4"][0][0] = Value::String("5".into());
    let dir = scratch("perturbed");
    let perturbed = dir.join("reps.json");
    std::fs::write(&perturbed, serde_json::to_string(&reps).unwrap()).unwrap();
    args[3] = perturbed.to_str().unwrap();
    let o = pdisk(&args);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("relations E_a: FAIL\n  nonzero relation at arrow a10\n"), "{out}");
}

#[test]
fn out_flag_writes_a_file() {
    let path = scratch("out").join("quiver.json");
    let o = pdisk(&["quiver", "example1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["quiver"]["arrows"].as_array().unwrap().len(), 10);
}
