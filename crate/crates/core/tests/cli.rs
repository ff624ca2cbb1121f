use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use demovec::harness::{verify_report, SWEEP_HEADER};

fn demovec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_demovec"))
        .args(args)
        .current_dir(dir)
        .env("DEMOVEC_LOG", "warn")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// synth → prep → train on a small planted corpus.
fn prepared(dir: &Path) {
    fs::write(
        dir.join("spec.toml"),
        "n_posts = 20000\nlexicon_size = 40\nbackground_vocab_size = 2000\n",
    )
    .unwrap();
    let o = demovec(
        dir,
        &[
            "synth",
            "--spec",
            "spec.toml",
            "--out",
            "posts.jsonl",
            "--seed",
            "2",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = demovec(
        dir,
        &[
            "prep",
            "--in",
            "posts.jsonl",
            "--out",
            "corpus.txt",
            "--pronouns",
            "en",
            "--age-min",
            "16",
            "--age-max",
            "45",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("pronouns_replaced\t"));
    let o = demovec(
        dir,
        &[
            "train",
            "--in",
            "corpus.txt",
            "--out",
            "m.vec",
            "--dims",
            "16",
            "--epochs",
            "3",
            "--seed",
            "2",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn help_and_version_succeed() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(demovec(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(demovec(dir.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(
        demovec(dir.path(), &["train", "--help"]).status.code(),
        Some(0)
    );
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["frobnicate"][..],
        &["train", "--bogus", "1"],
        &["train", "--arch", "lstm"],
        &[
            "train",
            "--in",
            "corpus.txt",
            "--out",
            "m.vec",
            "--epochs",
            "0",
        ],
        &["permtest", "--model", "m.vec"],
        &[],
    ] {
        let o = demovec(d, args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = demovec(
        d,
        &[
            "train",
            "--in",
            "corpus.txt",
            "--out",
            "m.vec",
            "--epochs",
            "0",
        ],
    );
    assert!(stderr(&o).contains("epochs"));
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("bad.jsonl"),
        "{\"text\": \"I am\", \"gender\": \"f\", \"age\": 30}\nnot json\n",
    )
    .unwrap();
    let o = demovec(d, &["prep", "--in", "bad.jsonl", "--out", "out.txt"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("line 2"));
    let o = demovec(d, &["analyze", "--model", "missing.vec", "--out", "rep"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    fs::write(
        d.join("run.toml"),
        "in = \"corpus.txt\"\ndims = 8\nepochs = 1\nseed = 3\n",
    )
    .unwrap();
    let o = demovec(d, &["train", "--config", "run.toml", "--out", "a.vec"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("dims\t8"));
    let o = demovec(
        d,
        &[
            "train", "--config", "run.toml", "--out", "b.vec", "--dims", "12",
        ],
    );
    assert!(stdout(&o).contains("dims\t12"));

    fs::write(d.join("typo.toml"), "dimz = 8\n").unwrap();
    let o = demovec(
        d,
        &[
            "train",
            "--config",
            "typo.toml",
            "--in",
            "corpus.txt",
            "--out",
            "c.vec",
        ],
    );
    assert_eq!(o.status.code(), Some(1));

    // the same resolved config trains the same model
    let o = demovec(d, &["train", "--config", "run.toml", "--out", "c.vec"]);
    assert!(o.status.success());
    assert_eq!(
        fs::read(d.join("a.vec")).unwrap(),
        fs::read(d.join("c.vec")).unwrap()
    );
}

#[test]
fn resolved_config_is_logged() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_demovec"))
        .args(["train", "--epochs", "0"])
        .current_dir(dir.path())
        .env("DEMOVEC_LOG", "info")
        .output()
        .unwrap();
    // validation runs after resolution, so nothing is logged for a bad config
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_demovec"))
        .args(["prep", "--in", "missing.jsonl", "--out", "x.txt"])
        .current_dir(dir.path())
        .env("DEMOVEC_LOG", "info")
        .output()
        .unwrap();
    assert!(stderr(&o).contains("prep config: {"), "{}", stderr(&o));
    assert!(stderr(&o).contains("\"min-count\":5"));
}

#[test]
fn permtest_reports_a_p_value_above_the_floor() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    let args = [
        "permtest",
        "--model",
        "m.vec",
        "--pos",
        "posts.fem.txt",
        "--neg",
        "posts.mas.txt",
        "--n",
        "999",
        "--seed",
        "7",
    ];
    let o = demovec(d, &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("observed\tp_value\tn_perms"));
    let fields: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let p: f64 = fields[1].parse().unwrap();
    assert!(p >= 1.0 / 1000.0);
    assert_eq!(fields[2], "999");
    assert_eq!(stdout(&demovec(d, &args)), out);
}

#[test]
fn analyze_writes_a_verifiable_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    let o = demovec(
        d,
        &[
            "analyze",
            "--model",
            "m.vec",
            "--pos",
            "posts.fem.txt",
            "--neg",
            "posts.mas.txt",
            "--n",
            "49",
            "--out",
            "rep",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("measure\t"));
    let manifest = verify_report(&d.join("rep")).unwrap();
    assert_eq!(manifest.command, "analyze");
    assert_eq!(manifest.inputs.len(), 3);
    for f in [
        "pca_scores.tsv",
        "projections.tsv",
        "permutation.tsv",
        "config.toml",
    ] {
        assert!(d.join("rep").join(f).exists(), "{f}");
    }
    // feeding the written config back reproduces every table
    let o = demovec(
        d,
        &["analyze", "--config", "rep/config.toml", "--out", "rep2"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let again = verify_report(&d.join("rep2")).unwrap();
    let tables = |m: &demovec::harness::Manifest| {
        m.outputs
            .iter()
            .filter(|o| o.path != "config.toml")
            .cloned()
            .collect::<Vec<_>>()
    };
    assert_eq!(tables(&manifest), tables(&again));
}

#[test]
fn sweep_prints_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    let o = demovec(
        d,
        &[
            "sweep",
            "--in",
            "corpus.txt",
            "--grid-archs",
            "cbow,sg",
            "--grid-dims",
            "8",
            "--grid-epochs",
            "1",
            "--grid-fractions",
            "0.5,1",
            "--workers",
            "2",
            "--out",
            "sw",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1..]
        .iter()
        .all(|l| l.ends_with("\tok") && l.contains("\tNA\t")));
    verify_report(&d.join("sw")).unwrap();
}
