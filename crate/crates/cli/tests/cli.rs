use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use readset_dist::formats::{parse_newick, write_newick};

fn readset_dist(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_readset-dist"))
        .args(args)
        .current_dir(dir)
        .env_remove("READSET_DIST_THREADS")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = readset_dist(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(dir: &Path, args: &[&str]) -> String {
    let out = readset_dist(dir, args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    String::from_utf8(out.stderr).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) {
    fs::write(dir.join(name), content).unwrap();
}

fn counterexample_sets(dir: &Path) {
    write(dir, "A.txt", "ATC\nATC\nGGG\n");
    write(dir, "B.txt", "ATA\nGGG\n");
    write(dir, "C.fa", ">c1\nCTA\n>c2\nGGG\n");
}

fn sequence_fasta(dir: &Path, name: &str, seed: u64, ids: &[&str], len: usize) {
    let mut text = String::new();
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    for id in ids {
        text.push_str(&format!(">{id} some description\n"));
        for i in 0..len {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            text.push(b"ACGT"[(state >> 62) as usize] as char);
            if i % 70 == 69 {
                text.push('\n');
            }
        }
        text.push('\n');
    }
    write(dir, name, &text);
}

#[test]
fn simulate_writes_expected_read_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    sequence_fasta(d, "one.fa", 1, &["seq1"], 1000);
    ok(
        d,
        &[
            "simulate",
            "one.fa",
            "--coverage",
            "2",
            "--read-length",
            "100",
            "-o",
            "out",
        ],
    );
    let text = fs::read_to_string(d.join("out/seq1.reads.fa")).unwrap();
    assert!(text.starts_with("#coverage=2 #readlen=100\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with('>')).count(), 20);
    assert!(text
        .lines()
        .filter(|l| !l.starts_with(['>', '#']))
        .all(|l| l.len() == 100));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    sequence_fasta(d, "seqs.fa", 2, &["x", "y"], 500);
    let run = |seed: &str, out: &str| {
        ok(
            d,
            &[
                "simulate",
                "seqs.fa",
                "--coverage",
                "3",
                "--read-length",
                "50",
                "--strand-noise",
                "--seed",
                seed,
                "-o",
                out,
            ],
        );
        fs::read(d.join(out).join("x.reads.fa")).unwrap()
    };
    assert_eq!(run("11", "a"), run("11", "b"));
    assert_ne!(run("11", "a"), run("12", "c"));
}

#[test]
fn malformed_fasta_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "bad.fa", ">s\nACGT\nACXT\n");
    let err = fails(
        d,
        &[
            "simulate",
            "bad.fa",
            "--coverage",
            "2",
            "--read-length",
            "2",
            "-o",
            "out",
        ],
    );
    assert!(err.contains("line 3"), "{err}");
    write(d, "headless.fa", "ACGT\n>s\nACGT\n");
    let err = fails(
        d,
        &[
            "simulate",
            "headless.fa",
            "--coverage",
            "2",
            "--read-length",
            "2",
            "-o",
            "out",
        ],
    );
    assert!(err.contains("line 1"), "{err}");
    assert!(!d.join("out").exists() || fs::read_dir(d.join("out")).unwrap().next().is_none());
}

#[test]
fn dist_reproduces_counterexample_values() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    counterexample_sets(d);
    ok(d, &["dist", "A.txt", "B.txt", "C.fa", "--preset", "mes", "-o", "m.phy"]);
    assert_eq!(
        fs::read_to_string(d.join("m.phy")).unwrap(),
        "3\n\
         A 0.000000 0.583333 1.166667\n\
         B 0.583333 0.000000 0.500000\n\
         C 1.166667 0.500000 0.000000\n"
    );
    // stdout when no output file is given
    let stdout = ok(d, &["dist", "A.txt", "B.txt", "C.fa"]);
    assert_eq!(stdout, fs::read_to_string(d.join("m.phy")).unwrap());
}

#[test]
fn dist_baseline_and_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    counterexample_sets(d);
    let out = ok(d, &["dist", "A.txt", "B.txt", "--baseline-maxsize"]);
    assert_eq!(out, "2\nA 0.000000 3.000000\nB 3.000000 0.000000\n");
    let out = ok(d, &["dist", "A.txt", "A.txt"]);
    assert_eq!(out, "2\nA 0.000000 0.000000\nA_2 0.000000 0.000000\n");
}

#[test]
fn dist_flags_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    counterexample_sets(d);
    // margin presets need coverage and read length
    let err = fails(d, &["dist", "A.txt", "B.txt", "--preset", "messg"]);
    assert!(err.contains("coverage"), "{err}");
    // t = (3/0.5 - 1)/2 = 2.5 violates t < l/2 for reads of length 3; the set is named
    let err = fails(
        d,
        &[
            "dist",
            "A.txt",
            "B.txt",
            "--preset",
            "messg",
            "--coverage",
            "0.5",
            "--read-length",
            "3",
        ],
    );
    assert!(err.contains("\"A\""), "{err}");
    // scaling multiplies 7/12 by max(|R_A|, |R_B|) = 3
    let out = ok(d, &["dist", "A.txt", "B.txt", "--preset", "mess"]);
    assert_eq!(out, "2\nA 0.000000 1.750000\nB 1.750000 0.000000\n");
    let out = ok(d, &["dist", "A.txt", "B.txt", "--preset", "mess", "--no-scaling"]);
    assert!(out.contains("0.583333"));
    // sidecar metadata is read; flags win
    write(d, "meta.txt", "#coverage=3 #readlen=3\nATC\nATC\nGGG\n");
    ok(
        d,
        &["dist", "meta.txt", "B.txt", "--preset", "messg", "--coverage", "3"],
    );
    // with orientation unknown ATC matches reverse(CTA) exactly
    let known = ok(d, &["dist", "A.txt", "C.fa"]);
    let unknown = ok(d, &["dist", "A.txt", "C.fa", "--orientation-unknown"]);
    assert_ne!(known, unknown);
    // invalid reads are skipped, --replace-n keeps them
    write(d, "n.txt", "ANC\nGGG\n");
    // {GGG} vs {ATA, GGG}: (0 + (3 + 0) / 2) / 2
    assert!(ok(d, &["dist", "n.txt", "B.txt"]).contains(" 0.750000"));
    // {AAC, GGG}: AAC and ATA are 2 apart, both directions average (2 + 0) / 2
    assert!(ok(d, &["dist", "n.txt", "B.txt", "--replace-n"]).contains(" 1.000000"));
    let err = fails(d, &["dist", "A.txt", "B.txt", "--threads", "0"]);
    assert!(err.contains("threads"), "{err}");
    let err = fails(
        d,
        &[
            "dist",
            "A.txt",
            "B.txt",
            "--exact-pruning",
            "--preset",
            "messgq",
            "--margin-t",
            "0",
        ],
    );
    assert!(err.contains("pruning"), "{err}");
}

#[test]
fn threads_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    counterexample_sets(d);
    let out = Command::new(env!("CARGO_BIN_EXE_readset-dist"))
        .args(["dist", "A.txt", "B.txt"])
        .current_dir(d)
        .env("READSET_DIST_THREADS", "0")
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn cluster_renders_newick() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "two.phy", "2\na 0 4\nb 4 0\n");
    assert_eq!(
        ok(d, &["cluster", "two.phy", "--method", "upgma"]),
        "(a:2.000000,b:2.000000);\n"
    );
    write(d, "three.phy", "3\na 0 2 6\nb 2 0 6\nc 6 6 0\n");
    assert_eq!(
        ok(d, &["cluster", "three.phy", "--method", "upgma"]),
        "((a:1.000000,b:1.000000):2.000000,c:3.000000);\n"
    );
    write(d, "quartet.phy", "4\na 0 3 8 9\nb 3 0 9 10\nc 8 9 0 11\nd 9 10 11 0\n");
    for method in ["upgma", "nj"] {
        let text = ok(d, &["cluster", "quartet.phy", "--method", method, "-o", "t.nwk"]);
        assert!(text.is_empty());
        let written = fs::read_to_string(d.join("t.nwk")).unwrap();
        assert!(written.ends_with(";\n"));
        assert_eq!(write_newick(&parse_newick(&written).unwrap()).unwrap(), written);
    }
    let err = fails(d, &["cluster", "quartet.phy", "--method", "ward"]);
    assert!(err.contains("ward"), "{err}");
}

#[test]
fn eval_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "m.phy", "4\na 0 3 8 9\nb 3 0 9 10\nc 8 9 0 11\nd 9 10 11 0\n");
    write(d, "p.phy", "4\nb 0 9 10 3\nc 9 0 11 8\nd 10 11 0 9\na 3 8 9 0\n");
    assert_eq!(
        ok(d, &["eval", "m.phy", "m.phy", "--metric", "pearson"]),
        "pearson\t1.000000\n"
    );
    // row order does not matter
    assert_eq!(
        ok(d, &["eval", "m.phy", "p.phy", "--metric", "pearson"]),
        "pearson\t1.000000\n"
    );
    write(d, "flat.phy", "3\na 0 1 1\nb 1 0 1\nc 1 1 0\n");
    write(d, "other.phy", "3\na 0 1 2\nb 1 0 3\nc 2 3 0\n");
    assert_eq!(
        ok(d, &["eval", "flat.phy", "other.phy", "--metric", "pearson"]),
        "pearson\tundefined\n"
    );

    ok(d, &["cluster", "m.phy", "--method", "nj", "-o", "t.nwk"]);
    assert_eq!(
        ok(d, &["eval", "t.nwk", "t.nwk", "--metric", "fm"]),
        "k\tB_k\n2\t1.000000\n3\t1.000000\n"
    );

    write(d, "x.phy", "4\na 0 3 8 9\nb 3 0 9 10\nc 8 9 0 11\nzz 9 10 11 0\n");
    let err = fails(d, &["eval", "m.phy", "x.phy", "--metric", "pearson"]);
    assert!(err.contains("\"d\"") && err.contains("\"zz\""), "{err}");
    ok(d, &["cluster", "x.phy", "-o", "x.nwk"]);
    let err = fails(d, &["eval", "t.nwk", "x.nwk", "--metric", "fm"]);
    assert!(err.contains("zz"), "{err}");
}

#[test]
fn pipeline_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "family",
            "--length",
            "400",
            "--star-rates",
            "0.05,0.2",
            "--chain-rates",
            "0.05,0.05",
            "--seed",
            "3",
            "-o",
            "fam.fa",
        ],
    );
    let report = ok(
        d,
        &[
            "pipeline",
            "fam.fa",
            "--coverage",
            "3",
            "--read-length",
            "40",
            "--preset",
            "messg",
            "--strand-noise",
            "--seed",
            "5",
            "--method",
            "nj",
            "-o",
            "run",
        ],
    );
    assert!(report.starts_with("pearson\t"), "{report}");
    assert!(report.contains("k\tB_k\n2\t"), "{report}");
    for f in [
        "estimate.phy",
        "reference.phy",
        "estimate.nwk",
        "reference.nwk",
        "report.txt",
        "reads/star1.reads.fa",
    ] {
        assert!(d.join("run").join(f).exists(), "{f} missing");
    }
    assert_eq!(fs::read_to_string(d.join("run/report.txt")).unwrap(), report);
}
