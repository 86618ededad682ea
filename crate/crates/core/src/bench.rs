//! PageRank timing harness comparing the plain and the differential kernel.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::Result;
use crate::graph::CsrGraph;
use crate::io::{load_edge_list, EdgeListSource};
use crate::pagerank::{linf_distance, pagerank, PageRankConfig};
use crate::refcompress::compress;

pub const TSV_HEADER: &str = "graph\tn\tm\tm_prime\tratio\tt\tt_prime\tS\tops\tops_prime\tlinf";

/// One dataset. `m_prime` is measured on the transposed matrix, which is the
/// one PageRank multiplies with. `t` and `t_prime` are median seconds per
/// iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub m_prime: usize,
    pub ratio: f64,
    pub t: f64,
    pub t_prime: f64,
    pub speedup: f64,
    pub ops_per_iteration: u64,
    pub ops_prime_per_iteration: u64,
    pub linf: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        0.0
    } else if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

pub fn bench_graph(
    name: &str,
    g: &CsrGraph,
    window: usize,
    cfg: &PageRankConfig,
    repetitions: usize,
) -> Result<BenchRow> {
    let repetitions = repetitions.max(1);
    let degrees = g.out_degrees();
    let gt = g.transpose();
    let rm = compress(&gt, window)?;
    let stats = rm.stats(&gt);

    let mut base_times = Vec::with_capacity(repetitions);
    let mut ref_times = Vec::with_capacity(repetitions);
    let mut base = None;
    let mut diff = None;
    for _ in 0..repetitions {
        let start = Instant::now();
        let out = pagerank(&gt, &degrees, cfg)?;
        base_times.push(start.elapsed().as_secs_f64() / out.iterations.max(1) as f64);
        base = Some(out);

        let start = Instant::now();
        let out = pagerank(&rm, &degrees, cfg)?;
        ref_times.push(start.elapsed().as_secs_f64() / out.iterations.max(1) as f64);
        diff = Some(out);
    }
    let (base, diff) = (base.unwrap(), diff.unwrap());
    let t = median(base_times);
    let t_prime = median(ref_times);
    Ok(BenchRow {
        name: name.to_string(),
        n: g.num_vertices(),
        m: g.num_edges(),
        m_prime: stats.m_prime,
        ratio: stats.ratio,
        t,
        t_prime,
        speedup: if t_prime > 0.0 { t / t_prime } else { 1.0 },
        ops_per_iteration: base.ops.adds / base.iterations.max(1) as u64,
        ops_prime_per_iteration: diff.ops.adds / diff.iterations.max(1) as u64,
        linf: linf_distance(&base.ranks, &diff.ranks),
    })
}

pub fn run_bench(
    paths: &[PathBuf],
    window: usize,
    cfg: &PageRankConfig,
    repetitions: usize,
) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    for path in paths {
        let g = load_edge_list(&EdgeListSource {
            path: Some(path.clone()),
            vertices: None,
        })?;
        let name = Path::new(path)
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        report.rows.push(bench_graph(&name, &g, window, cfg, repetitions)?);
    }
    Ok(report)
}

impl BenchReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(TSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.4}\t{:.6e}\t{:.6e}\t{:.4}\t{}\t{}\t{:.3e}",
                r.name, r.n, r.m, r.m_prime, r.ratio, r.t, r.t_prime, r.speedup,
                r.ops_per_iteration, r.ops_prime_per_iteration, r.linf
            )
            .unwrap();
        }
        out
    }

    pub fn to_table(&self) -> String {
        let header = [
            "graph", "n", "m", "m'", "m/m'", "t", "t'", "S", "ops", "ops'", "Linf",
        ];
        let body: Vec<[String; 11]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.name.clone(),
                    r.n.to_string(),
                    r.m.to_string(),
                    r.m_prime.to_string(),
                    format!("{:.2}", r.ratio),
                    format!("{:.3e}", r.t),
                    format!("{:.3e}", r.t_prime),
                    format!("{:.2}", r.speedup),
                    r.ops_per_iteration.to_string(),
                    r.ops_prime_per_iteration.to_string(),
                    format!("{:.1e}", r.linf),
                ]
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let line = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
            let parts: Vec<String> = cells
                .zip(&widths)
                .enumerate()
                .map(|(k, (c, &w))| if k == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&mut header.iter().copied(), &mut out);
        for row in &body {
            line(&mut row.iter().map(String::as_str), &mut out);
        }
        out
    }
}
