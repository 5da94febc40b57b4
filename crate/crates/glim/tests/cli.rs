use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn glim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| fs::write(dir.path().join(name), text).unwrap();
    write("k3.el", "n 3\n0 1\n0 2\n1 2\n");
    write("p3.el", "n 3\n0 1\n1 2\n");
    write("k2.el", "n 2\n0 1\n");
    write("e13.el", "n 13\n");
    write("half.json", r#"{"weights": [1], "values": [[0.5]]}"#);
    write(
        "bip.json",
        r#"{"weights": ["1/2", "1/2"], "values": [["0", "1"], ["1", "0"]]}"#,
    );
    write("ds.json", r#"{"rows": [[0.25, 0.75], [0.75, 0.25]]}"#);
    dir
}

#[test]
fn every_command_is_reproducible() {
    let dir = fixtures();
    let runs: &[&[&str]] = &[
        &["density", "--motif", "k3.el", "--in", "bip.json", "--rational"],
        &[
            "cutnorm",
            "--a",
            "half.json",
            "--b",
            "bip.json",
            "--heuristic",
            "--seed",
            "3",
        ],
        &["editdist", "--a", "k3.el", "--b", "p3.el", "--seed", "5"],
        &["delta1", "--a", "k2.el", "--b", "p3.el", "--seed", "2"],
        &["birkhoff", "--matrix", "ds.json", "--m", "8"],
        &["extremal", "--template", "p3.el", "--seed", "1"],
        &["sample", "--graphon", "half.json", "--n", "30", "--seed", "9"],
        &[
            "converge",
            "--graphon",
            "half.json",
            "--graphs",
            "k3.el",
            "p3.el",
            "--motifs",
            "k2.el",
        ],
        &["stability", "--n", "16", "--trials", "3", "--k", "0,4", "--seed", "4"],
        &["example41", "--restarts", "1"],
    ];
    for args in runs {
        let a = glim(args, dir.path());
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        let b = glim(args, dir.path());
        assert_eq!(a.stdout, b.stdout, "{args:?} is not deterministic");
    }
}

#[test]
fn exit_codes() {
    let dir = fixtures();
    assert_eq!(glim(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(
        glim(&["editdist", "--a", "k3.el", "--b", "k2.el"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        glim(&["editdist", "--a", "missing.el", "--b", "k2.el"], dir.path())
            .status
            .code(),
        Some(1)
    );
    let capped = glim(&["editdist", "--a", "e13.el", "--b", "e13.el", "--exact"], dir.path());
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(glim(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn outputs() {
    let dir = fixtures();
    let out = glim(
        &["density", "--motif", "k3.el", "--in", "half.json", "--rational"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rational"], "1/8");

    let out = glim(&["stability", "--n", "12", "--trials", "2", "--k", "3"], dir.path());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().next().unwrap().contains("over_n2"));
    assert_eq!(csv.lines().count(), 3);

    assert!(glim(
        &["sample", "--graphon", "bip.json", "--n", "10", "--out", "g.el"],
        dir.path()
    )
    .status
    .success());
    let sampled = fs::read_to_string(dir.path().join("g.el")).unwrap();
    assert!(sampled.starts_with("n 10"));

    let out = glim(&["example41"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ratio"], "11/10");
    assert_eq!(v["identity_mismatches"], 22);
}
