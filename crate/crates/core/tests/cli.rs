use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphmul")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn numbers(text: &str) -> Vec<f64> {
    text.lines().map(|l| l.parse().unwrap()).collect()
}

#[test]
fn generate_compress_and_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("chain.txt");
    let rmv = dir.path().join("chain.rmv");
    ok(&["gen", "copy-chain", "--n", "500", "--degree", "20", "--seed", "3", "--out", s(&g)]);
    ok(&["compress", s(&g), "--window", "3", "--out", s(&rmv)]);

    let from_graph = ok(&["stats", s(&g), "--window", "3"]);
    let from_rmv = ok(&["stats", s(&rmv)]);
    assert_eq!(from_graph, from_rmv);
    assert!(from_graph.contains("m\t10000\n"));
    assert!(from_graph.contains("m_prime\t20\n"));
    assert!(from_graph.contains("max_chain\t499\n"));

    let csr = numbers(&ok(&["matvec", s(&g), "--uniform"]));
    let diff = numbers(&ok(&["matvec", s(&rmv), "--uniform"]));
    let cov = numbers(&ok(&["matvec", s(&g), "--uniform", "--kernel", "biclique"]));
    assert_eq!(csr.len(), 500);
    for k in 0..500 {
        assert!((csr[k] - 20.0 / 500.0).abs() < 1e-12);
        assert!((csr[k] - diff[k]).abs() < 1e-12);
        assert!((csr[k] - cov[k]).abs() < 1e-12);
    }
}

#[test]
fn matvec_with_vector_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let x = dir.path().join("x.txt");
    let y = dir.path().join("y.txt");
    std::fs::write(&g, "0 1\n0 2\n1 2\n").unwrap();
    std::fs::write(&x, "1\n2\n3\n").unwrap();
    ok(&["matvec", s(&g), "--vector", s(&x), "--kernel", "ref", "--out", s(&y)]);
    assert_eq!(numbers(&std::fs::read_to_string(&y).unwrap()), vec![5.0, 3.0, 0.0]);

    std::fs::write(&x, "1\n2\n").unwrap();
    let o = run(&["matvec", s(&g), "--vector", s(&x)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("dimension"));
}

#[test]
fn pagerank_kernels_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["gen", "er", "--n", "300", "--m", "2000", "--seed", "5", "--out", s(&g)]);
    let base = numbers(&ok(&["pagerank", s(&g), "--iters", "30"]));
    for kernel in ["ref", "biclique"] {
        let other = numbers(&ok(&["pagerank", s(&g), "--iters", "30", "--kernel", kernel]));
        for (a, b) in base.iter().zip(&other) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
    assert!((base.iter().sum::<f64>() - 1.0).abs() < 1e-10);

    let dropped = numbers(&ok(&["pagerank", s(&g), "--dangling", "drop", "--tol", "1e-6", "--iters", "500"]));
    assert!(dropped.iter().sum::<f64>() <= 1.0 + 1e-12);

    assert!(!run(&["pagerank", s(&g), "--alpha", "1.0"]).status.success());
    assert!(!run(&["pagerank", s(&g), "--kernel", "dense"]).status.success());
}

#[test]
fn biclique_extract_writes_cover() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let cover = dir.path().join("cover.txt");
    ok(&["gen", "planted", "--n", "200", "--sources", "20", "--targets", "30", "--noise", "10", "--out", s(&g)]);
    let o = run(&["biclique-extract", s(&g), "--out", s(&cover)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&cover).unwrap();
    assert!(text.starts_with("N 200\nB "));
    assert!(text.contains("\nR\n"));
}

#[test]
fn bench_report() {
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("chain.txt");
    let er = dir.path().join("er.txt");
    let tsv = dir.path().join("report.tsv");
    ok(&["gen", "copy-chain", "--n", "3000", "--degree", "100", "--out", s(&chain)]);
    ok(&["gen", "er", "--n", "3000", "--m", "30000", "--out", s(&er)]);
    ok(&["bench", s(&chain), s(&er), "--reps", "3", "--tsv", s(&tsv)]);
    let report = std::fs::read_to_string(&tsv).unwrap();
    let rows: Vec<Vec<&str>> = report.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "chain");
    let ratio = |r: &Vec<&str>| r[4].parse::<f64>().unwrap();
    assert!(ratio(&rows[0]) >= 50.0);
    assert!(ratio(&rows[1]) <= 1.2);
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(&g, "0 1\nzero 2\n").unwrap();
    let out = dir.path().join("out.rmv");
    let o = run(&["compress", s(&g), "--out", s(&out)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert!(!out.exists());

    std::fs::write(&g, "0 1\n").unwrap();
    assert!(!run(&["compress", s(&g), "--window", "0", "--out", s(&out)]).status.success());
    assert!(!run(&["stats", "/nonexistent/graph.txt"]).status.success());
}
