use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphmul::bench::run_bench;
use graphmul::io::{
    is_rmv, load_edge_list, load_rmv, load_vector, save_cover, save_edge_list, save_rmv,
    write_atomic, write_vector, EdgeListSource,
};
use graphmul::{
    compress, extract_greedy, gen, pagerank, CsrGraph, DanglingPolicy, Error, Kernel, KernelKind,
    KernelParams, MatVec, PageRankConfig, ReferencedMatrix, Result, DEFAULT_WINDOW,
};

#[derive(Parser)]
#[command(name = "graphmul", version, about = "Matrix-vector products and PageRank on compressed adjacency matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic edge list.
    Gen {
        #[command(subcommand)]
        mode: GenMode,
    },
    /// Encode a graph as reference-differential rows (RMV1 container).
    Compress {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        /// Encode the transpose, as consumed by `pagerank --kernel ref`.
        #[arg(long)]
        transpose: bool,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        input: InputOpts,
    },
    /// Decode an RMV1 container back into an edge list.
    Decompress {
        container: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print n, m, m', m/m' and reference-chain statistics.
    Stats {
        /// Edge list or RMV1 container.
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[command(flatten)]
        input_opts: InputOpts,
    },
    /// Compute y = A x.
    Matvec {
        /// Edge list or RMV1 container.
        input: PathBuf,
        /// File with one value per line.
        #[arg(long, conflicts_with = "uniform", required_unless_present = "uniform")]
        vector: Option<PathBuf>,
        /// Use x = (1/n, ..., 1/n).
        #[arg(long)]
        uniform: bool,
        /// Defaults to `ref` for containers and `csr` for edge lists.
        #[arg(long, value_enum)]
        kernel: Option<KernelArg>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        input_opts: InputOpts,
    },
    /// Run PageRank power iteration.
    Pagerank {
        graph: PathBuf,
        #[command(flatten)]
        pr: PageRankArgs,
        #[arg(long, value_enum, default_value_t = KernelArg::Csr)]
        kernel: KernelArg,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long, default_value_t = 1)]
        min_gain: u64,
        #[arg(long)]
        max_rounds: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        input: InputOpts,
    },
    /// Time PageRank with the plain and the differential kernel.
    Bench {
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[command(flatten)]
        pr: PageRankArgs,
        /// Also write the report as TSV.
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Extract a greedy biclique cover.
    BicliqueExtract {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_gain: u64,
        #[arg(long)]
        max_rounds: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        input: InputOpts,
    },
}

#[derive(Args)]
struct InputOpts {
    /// Vertex count, overriding the one inferred from an edge list.
    #[arg(long)]
    vertices: Option<usize>,
}

#[derive(Args)]
struct PageRankArgs {
    /// Teleport probability.
    #[arg(long, default_value_t = 0.15)]
    alpha: f64,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    /// Stop once the L1 change between iterations is at most this.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = DanglingArg::Uniform)]
    dangling: DanglingArg,
}

impl PageRankArgs {
    fn config(&self) -> PageRankConfig {
        PageRankConfig {
            alpha: self.alpha,
            iterations: self.iters,
            l1_tolerance: self.tol,
            dangling: match self.dangling {
                DanglingArg::Uniform => DanglingPolicy::Uniform,
                DanglingArg::Drop => DanglingPolicy::Drop,
            },
        }
    }
}

#[derive(Subcommand)]
enum GenMode {
    /// Every row copies the previous one, with optional random toggles.
    CopyChain {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        mutations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform random digraph with m distinct edges.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Complete bipartite block plus random noise edges.
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        sources: usize,
        #[arg(long, default_value_t = 50)]
        targets: usize,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Csr,
    Ref,
    Biclique,
}

impl From<KernelArg> for KernelKind {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Csr => KernelKind::Csr,
            KernelArg::Ref => KernelKind::Ref,
            KernelArg::Biclique => KernelKind::Biclique,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DanglingArg {
    Uniform,
    Drop,
}

enum Matrix {
    Graph(CsrGraph),
    Ref(ReferencedMatrix),
}

fn load_graph(path: &Path, vertices: Option<usize>) -> Result<CsrGraph> {
    load_edge_list(&EdgeListSource {
        path: Some(path.to_path_buf()),
        vertices,
    })
}

fn load_matrix(path: &Path, vertices: Option<usize>) -> Result<Matrix> {
    if is_rmv(path)? {
        Ok(Matrix::Ref(load_rmv(path)?))
    } else {
        Ok(Matrix::Graph(load_graph(path, vertices)?))
    }
}

fn emit_vector(values: &[f64], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, |w| write_vector(values, w)),
        None => write_vector(values, io::stdout().lock()).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { mode } => match mode {
            GenMode::CopyChain { n, degree, mutations, seed, out } => {
                save_edge_list(&gen::copy_chain(n, degree, mutations, seed)?, &out)
            }
            GenMode::Er { n, m, seed, out } => save_edge_list(&gen::erdos_renyi(n, m, seed)?, &out),
            GenMode::Planted { n, sources, targets, noise, seed, out } => {
                save_edge_list(&gen::planted_biclique(n, sources, targets, noise, seed)?, &out)
            }
        },
        Command::Compress { graph, window, transpose, out, input } => {
            let mut g = load_graph(&graph, input.vertices)?;
            if transpose {
                g = g.transpose();
            }
            let rm = compress(&g, window)?;
            save_rmv(&rm, &out)?;
            let s = rm.stats(&g);
            eprintln!("n={} m={} m'={} ratio={:.4}", s.n, s.m, s.m_prime, s.ratio);
            Ok(())
        }
        Command::Decompress { container, out } => save_edge_list(&load_rmv(&container)?.to_graph(), &out),
        Command::Stats { input, window, input_opts } => {
            let (rm, g) = match load_matrix(&input, input_opts.vertices)? {
                Matrix::Ref(rm) => {
                    let g = rm.to_graph();
                    (rm, g)
                }
                Matrix::Graph(g) => (compress(&g, window)?, g),
            };
            let s = rm.stats(&g);
            let mut w = io::stdout().lock();
            let r = writeln!(
                w,
                "n\t{}\nm\t{}\nm_prime\t{}\nratio\t{:.4}{}\nrows_self_coded\t{}\nmax_chain\t{}",
                s.n,
                s.m,
                s.m_prime,
                s.ratio,
                if s.ratio_defined { "" } else { "\t(m_prime = 0)" },
                s.rows_self_coded,
                s.max_chain
            );
            r.map_err(|e| Error::io("<stdout>", e))
        }
        Command::Matvec { input, vector, uniform, kernel, window, out, input_opts } => {
            let matrix = load_matrix(&input, input_opts.vertices)?;
            let params = KernelParams { window, ..KernelParams::default() };
            let kernel = match (matrix, kernel.map(KernelKind::from)) {
                (Matrix::Ref(rm), None | Some(KernelKind::Ref)) => Kernel::Ref(rm),
                (Matrix::Ref(rm), Some(kind)) => Kernel::build(rm.to_graph(), kind, &params)?,
                (Matrix::Graph(g), kind) => Kernel::build(g, kind.unwrap_or_default(), &params)?,
            };
            let n = kernel.dim();
            let x = match vector {
                Some(path) => load_vector(&path)?,
                None if uniform => vec![if n == 0 { 0.0 } else { 1.0 / n as f64 }; n],
                None => unreachable!("clap requires --vector or --uniform"),
            };
            let (y, ops) = kernel.matvec(&x)?;
            eprintln!("adds={} references_used={}", ops.adds, ops.references_used);
            emit_vector(&y, out.as_deref())
        }
        Command::Pagerank { graph, pr, kernel, window, min_gain, max_rounds, out, input } => {
            let cfg = pr.config();
            cfg.validate()?;
            let g = load_graph(&graph, input.vertices)?;
            let degrees = g.out_degrees();
            let params = KernelParams { window, min_gain, max_rounds };
            let provider = Kernel::build(g.transpose(), kernel.into(), &params)?;
            let result = pagerank(&provider, &degrees, &cfg)?;
            eprintln!(
                "iterations={} adds={} final_l1_delta={:.3e}",
                result.iterations,
                result.ops.adds,
                result.l1_deltas.last().copied().unwrap_or(0.0)
            );
            emit_vector(&result.ranks, out.as_deref())
        }
        Command::Bench { graphs, window, reps, pr, tsv } => {
            let cfg = pr.config();
            cfg.validate()?;
            let report = run_bench(&graphs, window, &cfg, reps)?;
            print!("{}", report.to_table());
            println!();
            print!("{}", report.to_tsv());
            if let Some(path) = tsv {
                let text = report.to_tsv();
                write_atomic(&path, |w| w.write_all(text.as_bytes()))?;
            }
            Ok(())
        }
        Command::BicliqueExtract { graph, min_gain, max_rounds, out, input } => {
            let g = load_graph(&graph, input.vertices)?;
            let cover = extract_greedy(&g, min_gain, max_rounds)?;
            eprintln!(
                "bicliques={} residual={} compressed_size={} m={}",
                cover.bicliques().len(),
                cover.residual().len(),
                cover.compressed_size(),
                g.num_edges()
            );
            match out {
                Some(path) => save_cover(&cover, &path),
                None => io::stdout()
                    .lock()
                    .write_all(cover.to_text().as_bytes())
                    .map_err(|e| Error::io("<stdout>", e)),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
