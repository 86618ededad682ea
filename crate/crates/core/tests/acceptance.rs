//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use graphmul::gen::{copy_chain, copy_model, erdos_renyi, planted_biclique};
use graphmul::io::{decode_rmv, encode_rmv, load_rmv, save_rmv};
use graphmul::pagerank::linf_distance;
use graphmul::{
    compress, extract_greedy, matvec_csr, matvec_ref, pagerank, verify_cover, CsrGraph,
    DanglingPolicy, MatVec, PageRankConfig, DEFAULT_WINDOW,
};

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: &'static str, title: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome { id, title, passed, detail }
}

/// Random graph with n <= 1024 and density in [0.01, 0.5]; half of the corpus
/// has copy structure so that references and minus entries are exercised.
fn corpus_graph(seed: u64) -> (CsrGraph, usize, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=1024);
    let density = rng.random_range(0.01..=0.5);
    let g = if seed % 2 == 0 {
        copy_model(n, density, 0.0, 0.0, seed).unwrap()
    } else {
        copy_model(n, density, 0.8, 0.02, seed).unwrap()
    };
    let window = rng.random_range(1..=32);
    let x = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    (g, window, x)
}

const CORPUS: u64 = 1000;

struct CorpusResult {
    equivalent: bool,
    round_trip: bool,
    op_law: bool,
    worst_rel: f64,
}

fn check_corpus_graph(seed: u64) -> CorpusResult {
    let (g, window, x) = corpus_graph(seed);
    let rm = compress(&g, window).unwrap();
    let expected = matvec_csr(&g, &x).unwrap();
    let (y, ops) = matvec_ref(&rm, &x).unwrap();
    let scale = 1.0 + expected.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let err = linf_distance(&y, &expected);

    let n = g.num_vertices();
    let sampled: Vec<usize> = if n <= 256 { (0..n).collect() } else { (0..n).step_by(n / 32).collect() };
    let round_trip = rm.to_graph() == g
        && sampled.iter().all(|&i| rm.reconstruct_row(i).unwrap() == g.row(i));

    CorpusResult {
        equivalent: err <= 1e-9 * scale,
        round_trip,
        op_law: ops.adds == (rm.m_prime() + rm.references_used()) as u64
            && ops.references_used == rm.references_used() as u64,
        worst_rel: err / scale,
    }
}

fn criteria_1_to_3(out: &mut Vec<Outcome>) {
    let start = Instant::now();
    let results: Vec<CorpusResult> = (0..CORPUS).into_par_iter().map(check_corpus_graph).collect();
    let secs = start.elapsed().as_secs_f64();
    let worst = results.iter().map(|r| r.worst_rel).fold(0.0, f64::max);
    let bad = results.iter().filter(|r| !r.equivalent).count();
    out.push(outcome(
        "C1",
        "reference matvec equals CSR matvec",
        bad == 0 && secs < 60.0,
        format!("{CORPUS} graphs, {bad} violations, worst relative Linf {worst:.2e}, {secs:.1}s"),
    ));
    let bad_rt = results.iter().filter(|r| !r.round_trip).count();
    out.push(outcome(
        "C2",
        "reconstruction reproduces every row",
        bad_rt == 0,
        format!("{CORPUS} graphs, {bad_rt} mismatches"),
    ));

    let bad_ops = results.iter().filter(|r| !r.op_law).count();
    let start = Instant::now();
    let n = 100_000;
    let g = copy_chain(n, 100, 0, 42).unwrap();
    let rm = compress(&g, DEFAULT_WINDOW).unwrap();
    let (_, ops) = matvec_ref(&rm, &vec![1.0; n]).unwrap();
    let m = g.num_edges();
    let ratio = m as f64 / rm.m_prime() as f64;
    let passed = bad_ops == 0
        && m == 10_000_000
        && rm.m_prime() == 100
        && ops.adds == 100 + (n as u64 - 1)
        && ratio > 1e4;
    out.push(outcome(
        "C3",
        "additions = m' + references used",
        passed,
        format!(
            "corpus violations {bad_ops}; copy chain m={m} m'={} adds={} m/m'={ratio:.0} m/adds={:.1} ({:.1}s)",
            rm.m_prime(),
            ops.adds,
            m as f64 / ops.adds as f64,
            start.elapsed().as_secs_f64()
        ),
    ));

    // criterion 4 reuses the copy chain
    let x: Vec<f64> = (0..n).map(|k| (k % 7) as f64 * 0.1).collect();
    let mut y = vec![0.0; n];
    let mut time = |k: &dyn MatVec| -> f64 {
        let mut runs: Vec<f64> = (0..5)
            .map(|_| {
                let t = Instant::now();
                k.matvec_into(&x, &mut y).unwrap();
                t.elapsed().as_secs_f64()
            })
            .collect();
        runs.sort_by(f64::total_cmp);
        runs[2]
    };
    let t_csr = time(&g);
    let t_ref = time(&rm);
    let speedup = t_csr / t_ref;
    out.push(outcome(
        "C4",
        "compressed matvec at least 2x faster on the copy chain",
        speedup >= 2.0,
        format!("median of 5: csr {t_csr:.3e}s, ref {t_ref:.3e}s, speedup {speedup:.1}"),
    ));
}

fn criterion_5(out: &mut Vec<Outcome>) {
    let g = erdos_renyi(10_000, 100_000, 2024).unwrap();
    let ratios: Vec<(usize, f64)> = [1, DEFAULT_WINDOW, 32]
        .iter()
        .map(|&w| (w, compress(&g, w).unwrap().stats(&g).ratio))
        .collect();
    out.push(outcome(
        "C5",
        "no copy structure gives m/m' <= 1.2",
        ratios.iter().all(|&(_, r)| r <= 1.2),
        ratios.iter().map(|(w, r)| format!("W={w}: {r:.4}")).collect::<Vec<_>>().join(", "),
    ));
}

/// Dense power iteration of p_t = a p0 + (1 - a) p_{t-1} M with the uniform
/// row for dangling vertices.
fn dense_pagerank(g: &CsrGraph, alpha: f64, iterations: usize) -> Vec<f64> {
    let n = g.num_vertices();
    let mut m = vec![vec![0.0; n]; n];
    for u in 0..n {
        let row = g.row(u);
        for v in 0..n {
            m[u][v] = if row.is_empty() {
                1.0 / n as f64
            } else if row.binary_search(&(v as u32)).is_ok() {
                1.0 / row.len() as f64
            } else {
                0.0
            };
        }
    }
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        p = (0..n)
            .map(|v| alpha / n as f64 + (1.0 - alpha) * (0..n).map(|u| p[u] * m[u][v]).sum::<f64>())
            .collect();
    }
    p
}

fn small_graph_with_dangling(seed: u64) -> CsrGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=128);
    let density = rng.random_range(0.01..=0.5);
    let g = copy_model(n, density, 0.5, 0.05, seed).unwrap();
    let rows: Vec<Vec<u32>> = g
        .rows()
        .map(|r| if rng.random_bool(0.2) { Vec::new() } else { r.to_vec() })
        .collect();
    CsrGraph::from_rows(&rows).unwrap()
}

fn three_kernels(g: &CsrGraph, window: usize, cfg: &PageRankConfig) -> [graphmul::PageRankOutput; 3] {
    let degrees = g.out_degrees();
    let gt = g.transpose();
    let rm = compress(&gt, window).unwrap();
    let cover = extract_greedy(&gt, 1, None).unwrap();
    [
        pagerank(&gt, &degrees, cfg).unwrap(),
        pagerank(&rm, &degrees, cfg).unwrap(),
        pagerank(&cover, &degrees, cfg).unwrap(),
    ]
}

fn criterion_6(out: &mut Vec<Outcome>) {
    let cfg = PageRankConfig {
        alpha: 0.15,
        iterations: 50,
        l1_tolerance: None,
        dangling: DanglingPolicy::Uniform,
    };
    let graphs = 200u64;
    let results: Vec<(f64, f64)> = (0..graphs)
        .into_par_iter()
        .map(|seed| {
            let g = small_graph_with_dangling(seed);
            let oracle = dense_pagerank(&g, cfg.alpha, cfg.iterations);
            let runs = three_kernels(&g, 1 + seed as usize % 16, &cfg);
            let err = runs.iter().map(|r| linf_distance(&r.ranks, &oracle)).fold(0.0, f64::max);
            let mass = runs
                .iter()
                .flat_map(|r| r.masses.iter())
                .map(|s| (s - 1.0).abs())
                .fold(0.0, f64::max);
            (err, mass)
        })
        .collect();
    let err = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let mass = results.iter().map(|r| r.1).fold(0.0, f64::max);
    out.push(outcome(
        "C6",
        "PageRank matches the dense oracle, mass conserved",
        err <= 1e-10 && mass <= 1e-10,
        format!("{graphs} graphs x 3 kernels, worst Linf {err:.2e}, worst |sum p - 1| {mass:.2e}"),
    ));
}

fn criterion_7(out: &mut Vec<Outcome>) {
    let cfg = PageRankConfig::default();
    let worst = (0..CORPUS)
        .into_par_iter()
        .map(|seed| {
            let (g, window, _) = corpus_graph(seed);
            let [a, b, c] = three_kernels(&g, window, &cfg);
            linf_distance(&a.ranks, &b.ranks)
                .max(linf_distance(&a.ranks, &c.ranks))
                .max(linf_distance(&b.ranks, &c.ranks))
        })
        .reduce(|| 0.0, f64::max);
    out.push(outcome(
        "C7",
        "CSR, reference and biclique PageRank agree",
        worst <= 1e-9,
        format!("{CORPUS} graphs, worst pairwise Linf {worst:.2e}"),
    ));
}

fn criterion_8(out: &mut Vec<Outcome>) {
    let graphs = 500u64;
    let failures = (0..graphs)
        .into_par_iter()
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let n = rng.random_range(2..=300);
            let g = match seed % 3 {
                0 => copy_model(n, rng.random_range(0.01..=0.5), 0.0, 0.0, seed).unwrap(),
                1 => copy_model(n, rng.random_range(0.01..=0.3), 0.7, 0.03, seed).unwrap(),
                _ => planted_biclique(n, rng.random_range(1..=n.min(40)), rng.random_range(1..=n.min(40)), n, seed).unwrap(),
            };
            let cover = extract_greedy(&g, 1, None).unwrap();
            !(verify_cover(&cover, &g) && cover.compressed_size() <= g.num_edges() as u64)
        })
        .count();
    let g = planted_biclique(1000, 50, 50, 100, 7).unwrap();
    let cover = extract_greedy(&g, 1, None).unwrap();
    let planted_ok = verify_cover(&cover, &g);
    let frac = cover.compressed_size() as f64 / g.num_edges() as f64;
    out.push(outcome(
        "C8",
        "biclique covers are exact and compact",
        failures == 0 && planted_ok && frac <= 0.1,
        format!(
            "{graphs} graphs, {failures} invalid; planted K50,50 + noise: {} / {} = {frac:.3}",
            cover.compressed_size(),
            g.num_edges()
        ),
    ));
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_graphmul")).args(args).output().unwrap()
}

fn criterion_9(out: &mut Vec<Outcome>) {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let s = |path: &Path| path.to_str().unwrap().to_string();
    let mut notes = Vec::new();
    let mut ok = true;

    let g = copy_model(300, 0.05, 0.7, 0.02, 9).unwrap();
    graphmul::io::save_edge_list(&g, &p("g.txt")).unwrap();
    for name in ["a.rmv", "b.rmv"] {
        let o = cli(&["compress", &s(&p("g.txt")), "--window", "5", "--out", &s(&p(name))]);
        ok &= o.status.success();
    }
    let a = std::fs::read(p("a.rmv")).unwrap();
    let b = std::fs::read(p("b.rmv")).unwrap();
    ok &= a == b;
    let rm = load_rmv(&p("a.rmv")).unwrap();
    save_rmv(&rm, &p("c.rmv")).unwrap();
    ok &= std::fs::read(p("c.rmv")).unwrap() == a && encode_rmv(&decode_rmv(&a).unwrap()) == a;
    ok &= rm == compress(&g, 5).unwrap();
    notes.push(format!("{} byte container reproducible", a.len()));

    let o = cli(&["decompress", &s(&p("a.rmv")), "--out", &s(&p("back.txt"))]);
    ok &= o.status.success()
        && graphmul::io::load_edge_list(&graphmul::io::EdgeListSource {
            path: Some(p("back.txt")),
            vertices: None,
        })
        .unwrap()
            == g;

    let mut rejected = 0;
    let mut damaged: Vec<Vec<u8>> = [3, 20, a.len() / 2, a.len() - 1].iter().map(|&k| a[..k].to_vec()).collect();
    let mut magic = a.clone();
    magic[0] = b'X';
    damaged.push(magic);
    let mut version = a.clone();
    version[4] = 9;
    damaged.push(version);
    for (k, bytes) in damaged.iter().enumerate() {
        let bad = p(&format!("bad{k}.rmv"));
        std::fs::write(&bad, bytes).unwrap();
        let target = p(&format!("out{k}.txt"));
        let o = cli(&["decompress", &s(&bad), "--out", &s(&target)]);
        let o2 = cli(&["matvec", &s(&bad), "--uniform", "--out", &s(&target)]);
        if !o.status.success() && !o2.status.success() && !target.exists() {
            rejected += 1;
        }
    }
    ok &= rejected == damaged.len();
    notes.push(format!("{rejected}/{} damaged files rejected without output", damaged.len()));
    out.push(outcome("C9", "RMV1 container fidelity", ok, notes.join("; ")));
}

fn main() {
    let mut out = Vec::new();
    criteria_1_to_3(&mut out);
    criterion_5(&mut out);
    criterion_6(&mut out);
    criterion_7(&mut out);
    criterion_8(&mut out);
    criterion_9(&mut out);
    out.sort_by_key(|o| o.id);
    let mut failed = 0;
    for o in &out {
        println!(
            "[{}] {} {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
