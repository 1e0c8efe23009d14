use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ncwalk::parse_tudataset;

fn mutag_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/MUTAG")
}

fn ncwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Two graphs: a labeled triangle and a path on three nodes.
fn tiny_dataset(dir: &Path) {
    fs::write(dir.join("TINY_A.txt"), "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n5, 6\n6, 5\n").unwrap();
    fs::write(dir.join("TINY_graph_indicator.txt"), "1\n1\n1\n2\n2\n2\n").unwrap();
    fs::write(dir.join("TINY_node_labels.txt"), "0\n0\n1\n0\n1\n0\n").unwrap();
    fs::write(dir.join("TINY_graph_labels.txt"), "1\n-1\n").unwrap();
}

#[test]
fn mutag_loads_with_binary_classes() {
    let c = parse_tudataset(mutag_dir(), "MUTAG").unwrap();
    assert_eq!(c.len(), 188);
    let classes = c.class_labels.as_ref().unwrap();
    let mut distinct = classes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    assert_eq!(distinct, vec![-1, 1]);
    assert_eq!(c.dictionary.len(), 7);
    assert!(c.graphs.iter().all(|g| g.node_count() >= 10));
}

#[test]
fn gram_csv_is_deterministic_across_thread_counts() {
    let dir = mutag_dir();
    let d = dir.to_str().unwrap();
    let one = ncwalk(&["--threads", "1", "gram", "--dataset", d, "--kernel", "ncw", "--l", "2", "--alpha", "0.1"]);
    let many = ncwalk(&["--threads", "4", "gram", "--dataset", d, "--kernel", "ncw", "--l", "2", "--alpha", "0.1"]);
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(stdout(&one), stdout(&many));
    let text = stdout(&one);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 189);
    assert_eq!(lines[1].split(',').count(), 188);
}

#[test]
fn precomputed_export_has_classes_and_ids() {
    let tmp = tempfile::tempdir().unwrap();
    tiny_dataset(tmp.path());
    let out = tmp.path().join("k.txt");
    let o = ncwalk(&[
        "gram",
        "--dataset",
        tmp.path().to_str().unwrap(),
        "--name",
        "TINY",
        "--kernel",
        "wl",
        "--l",
        "1",
        "--format",
        "precomputed",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("1 0:1 1:"));
    assert!(lines[1].starts_with("-1 0:2 1:"));
}

#[test]
fn normalized_gram_has_unit_diagonal() {
    let tmp = tempfile::tempdir().unwrap();
    tiny_dataset(tmp.path());
    let o = ncwalk(&[
        "gram", "--dataset", tmp.path().to_str().unwrap(), "--name", "TINY", "--kernel", "rw", "--l", "3", "--normalize",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    for (i, row) in rows.iter().enumerate() {
        assert!((row[i] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn refine_prints_one_block_per_step() {
    let tmp = tempfile::tempdir().unwrap();
    tiny_dataset(tmp.path());
    let dir = tmp.path().to_str().unwrap();
    let o = ncwalk(&["refine", "--dataset", dir, "--name", "TINY", "--method", "wl", "--iters", "2", "--graph", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("# graph 1 step")).count(), 3);
    assert_eq!(text.lines().count(), 3 * 4);

    let o = ncwalk(&["refine", "--dataset", dir, "--name", "TINY", "--method", "morgan"]);
    assert!(o.status.success());
    let o = ncwalk(&["refine", "--dataset", dir, "--name", "TINY", "--method", "walkp", "--iters", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# graph 0 step 3"));
}

#[test]
fn node_kernel_lists_label_matched_pairs() {
    let tmp = tempfile::tempdir().unwrap();
    tiny_dataset(tmp.path());
    let o = ncwalk(&[
        "node-kernel", "--dataset", tmp.path().to_str().unwrap(), "--name", "TINY", "--graph", "0", "--l", "2",
        "--alpha", "inf",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    // the triangle has labels 0, 0, 1: pairs (0,0), (0,1), (1,0), (1,1), (2,2)
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.ends_with(" 1")));
}

#[test]
fn completeness_and_dedup_run_on_mutag() {
    let d = mutag_dir();
    let o = ncwalk(&["dedup", "--dataset", d.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 175);

    let o = ncwalk(&["completeness", "--dataset", d.to_str().unwrap(), "--kernels", "wl,ncw", "--max-l", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "kernel\tl\tratio");
    assert_eq!(lines.len(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(ncwalk(&["--help"]).status.code(), Some(0));
    assert_eq!(ncwalk(&[]).status.code(), Some(2));
    assert_eq!(ncwalk(&["gram", "--kernel", "ncw"]).status.code(), Some(2));
    assert_eq!(ncwalk(&["gram", "--dataset", "x", "--kernel", "bogus"]).status.code(), Some(2));
    let d = mutag_dir();
    let d = d.to_str().unwrap();
    assert_eq!(ncwalk(&["gram", "--dataset", d, "--kernel", "ncwwl", "--l", "0"]).status.code(), Some(2));
    assert_eq!(ncwalk(&["node-kernel", "--dataset", d, "--graph", "9999"]).status.code(), Some(2));
    assert_eq!(ncwalk(&["gram", "--dataset", "/nonexistent/DS", "--kernel", "vl"]).status.code(), Some(1));
    assert_eq!(
        ncwalk(&["gram", "--dataset", d, "--kernel", "rw", "--max-product-nodes", "10"]).status.code(),
        Some(1)
    );
}
