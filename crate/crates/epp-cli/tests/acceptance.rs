//! End-to-end checks of the binary: pipeline determinism, exit codes, and
//! the flag surface.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FOUR_FOLD: &str = "tournament,algorithm,hyperparam_set,split,score\n\
    openml_task,AutoML_1,default,0,0.8\n\
    openml_task,AutoML_1,default,1,0.8\n\
    openml_task,AutoML_1,default,2,0.8\n\
    openml_task,AutoML_1,default,3,0.8\n\
    openml_task,AutoML_2,default,0,0.9\n\
    openml_task,AutoML_2,default,1,0.78\n\
    openml_task,AutoML_2,default,2,0.78\n\
    openml_task,AutoML_2,default,3,0.78\n";

fn epp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn collect_artifacts(dir: &Path, base: &Path, into: &mut BTreeMap<String, Vec<u8>>) {
    for entry in fs::read_dir(dir).expect("readable dir") {
        let path = entry.expect("entry").path();
        if path.is_dir() {
            collect_artifacts(&path, base, into);
        } else {
            let key = path
                .strip_prefix(base)
                .expect("under base")
                .to_string_lossy()
                .into_owned();
            into.insert(key, fs::read(&path).expect("readable artifact"));
        }
    }
}

fn run_pipeline(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let data = root.join("data");
    let art = root.join("art");
    let scores = data.join("scores.csv");
    let scores = scores.to_str().unwrap();
    let data_s = data.to_str().unwrap();
    let art_s = art.to_str().unwrap();

    assert_exit(
        &epp(&[
            "simulate",
            "--tournaments",
            "3",
            "--seed",
            "7",
            "--output",
            data_s,
        ]),
        0,
    );
    assert_exit(
        &epp(&["rate", scores, "--format", "json", "--output", art_s]),
        0,
    );
    assert_exit(
        &epp(&["probs", scores, "--format", "json", "--output", art_s]),
        0,
    );
    assert_exit(&epp(&["embed", scores, "--output", art_s]), 0);

    let mut artifacts = BTreeMap::new();
    collect_artifacts(root, root, &mut artifacts);
    artifacts
}

#[test]
fn a10_pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_pipeline(&dir.path().join("one"));
    let second = run_pipeline(&dir.path().join("two"));

    let names: Vec<&String> = first.keys().collect();
    assert_eq!(names, second.keys().collect::<Vec<_>>());
    assert!(first.contains_key("data/scores.csv"));
    assert!(first.contains_key("art/census.json"));
    assert!(first.contains_key("art/embedding.json"));
    assert_eq!(first.len(), 9);
    for (name, bytes) in &first {
        assert_eq!(bytes, &second[name], "artifact {name} differs between runs");
    }
    println!(
        "[10/11] PASS pipeline determinism: {} artifacts byte-identical",
        first.len()
    );
}

#[test]
fn four_fold_compare_reports_the_win_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("scores.csv");
    fs::write(&input, FOUR_FOLD).unwrap();
    let out = dir.path().join("art");
    let output = epp(&[
        "compare",
        input.to_str().unwrap(),
        "AutoML_1:default",
        "AutoML_2:default",
        "--scheme",
        "same",
        "--ties",
        "ignore",
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    assert!(String::from_utf8_lossy(&output.stdout).contains("0.7500"));

    let artifact: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("compare.json")).unwrap()).unwrap();
    let prob = artifact["prob"].as_f64().unwrap();
    assert!((prob - 0.75).abs() < 2.5e-9, "prob {prob}");
    assert_eq!(artifact["tournament"], "openml_task");
}

#[test]
fn empty_table_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("scores.csv");
    fs::write(&input, "tournament,algorithm,hyperparam_set,split,score\n").unwrap();
    let output = epp(&[
        "rate",
        input.to_str().unwrap(),
        "--output",
        dir.path().join("art").to_str().unwrap(),
    ]);
    assert_exit(&output, 2);
}

#[test]
fn unknown_reference_player_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("scores.csv");
    fs::write(&input, FOUR_FOLD).unwrap();
    let output = epp(&[
        "rate",
        input.to_str().unwrap(),
        "--constraint",
        "reference=gbm:h01",
        "--output",
        dir.path().join("art").to_str().unwrap(),
    ]);
    assert_exit(&output, 3);
    assert!(String::from_utf8_lossy(&output.stderr).contains("gbm:h01"));
}

#[test]
fn elo_single_match_moves_half_the_k_factor() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("matches.csv");
    fs::write(
        &input,
        "algorithm_i,hyperparam_set_i,algorithm_j,hyperparam_set_j,outcome\na,1,b,1,win_i\n",
    )
    .unwrap();
    let out = dir.path().join("art");
    let output = epp(&[
        "elo",
        input.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_exit(&output, 0);
    let table = fs::read_to_string(out.join("elo.csv")).unwrap();
    assert!(table.contains("a:1,1516,1"), "table: {table}");
    assert!(table.contains("b:1,1484,1"), "table: {table}");
}

#[test]
fn masked_matrix_cell_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("scores.csv");
    fs::write(
        &input,
        "tournament,algorithm,hyperparam_set,split,score\n\
         t1,a,1,0,0.5\nt1,a,1,1,0.9\nt1,a,1,2,0.1\n\
         t1,b,1,0,0.4\nt1,b,1,1,0.95\nt1,b,1,2,0.2\n\
         t1,c,1,0,0.45\nt1,c,1,1,0.85\nt1,c,1,2,0.3\n\
         t2,a,1,0,0.6\nt2,a,1,1,0.3\nt2,a,1,2,0.7\n\
         t2,b,1,0,0.55\nt2,b,1,1,0.35\nt2,b,1,2,0.65\n",
    )
    .unwrap();
    let output = epp(&[
        "embed",
        input.to_str().unwrap(),
        "--output",
        dir.path().join("art").to_str().unwrap(),
    ]);
    assert_exit(&output, 3);
}

#[test]
fn help_lists_every_flag_with_its_default() {
    let rate = String::from_utf8(epp(&["rate", "--help"]).stdout).unwrap();
    for needle in [
        "--scheme",
        "--ties",
        "--constraint",
        "--ridge",
        "--tol",
        "--max-iter",
        "--orientation",
        "--format",
        "--output",
        "--audit",
        "[default: cross]",
        "[default: half]",
        "[default: mean-zero]",
        "[default: 100]",
    ] {
        assert!(rate.contains(needle), "rate --help missing {needle}");
    }

    let elo = String::from_utf8(epp(&["elo", "--help"]).stdout).unwrap();
    for needle in [
        "--k-factor",
        "--scale",
        "--initial-rating",
        "[default: 32]",
        "[default: 400]",
        "[default: 1500]",
    ] {
        assert!(elo.contains(needle), "elo --help missing {needle}");
    }

    let simulate = String::from_utf8(epp(&["simulate", "--help"]).stdout).unwrap();
    for needle in [
        "--players",
        "--tournaments",
        "--splits",
        "--noise",
        "--seed",
        "[default: 42]",
    ] {
        assert!(
            simulate.contains(needle),
            "simulate --help missing {needle}"
        );
    }

    let embed = String::from_utf8(epp(&["embed", "--help"]).stdout).unwrap();
    assert!(
        embed.contains("--components"),
        "embed --help missing --components"
    );
}
