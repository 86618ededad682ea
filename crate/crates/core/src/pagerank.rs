//! Power-iteration PageRank over any [`MatVec`] representation of `A^T`.
//!
//! Each step computes `p_t = alpha * p0 + (1 - alpha) * p_{t-1} * M` with
//! `M = D^-1 A`. The left product `p * M` is evaluated as `A^T * q` where
//! `q[j] = p[j] / d[j]`, so the binary matrix is never rescaled and any
//! compressed form of `A^T` can be plugged in.

use std::str::FromStr;
use std::time::Instant;

use crate::biclique::BicliqueCover;
use crate::error::{Error, Result};
use crate::graph::{CsrGraph, DegreeVector};
use crate::kernel::{MatVec, OpCount};
use crate::refcompress::{compress, ReferencedMatrix};

/// What happens to the rank held by vertices without out-links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DanglingPolicy {
    /// Spread it over all vertices; total mass stays 1.
    #[default]
    Uniform,
    /// Discard it; total mass decays.
    Drop,
}

impl FromStr for DanglingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(DanglingPolicy::Uniform),
            "drop" => Ok(DanglingPolicy::Drop),
            other => Err(Error::Parameter(format!("unknown dangling policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    /// Teleport probability, the weight of `p0` in each step.
    pub alpha: f64,
    pub iterations: usize,
    /// Stop early once `|p_t - p_{t-1}|_1` falls to this value.
    pub l1_tolerance: Option<f64>,
    pub dangling: DanglingPolicy,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            alpha: 0.15,
            iterations: 10,
            l1_tolerance: None,
            dangling: DanglingPolicy::Uniform,
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.iterations == 0 {
            return Err(Error::Parameter("iterations must be positive".into()));
        }
        if let Some(tol) = self.l1_tolerance {
            if tol.is_nan() || tol < 0.0 {
                return Err(Error::Parameter(format!("tolerance must be nonnegative, got {tol}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankOutput {
    pub ranks: Vec<f64>,
    pub iterations: usize,
    /// `|p_t - p_{t-1}|_1` for every step taken.
    pub l1_deltas: Vec<f64>,
    /// `sum(p_t)` after every step.
    pub masses: Vec<f64>,
    /// Additions spent in matrix products over all steps.
    pub ops: OpCount,
}

/// Runs PageRank from the uniform start vector.
pub fn pagerank<K: MatVec + ?Sized>(
    transposed: &K,
    degrees: &DegreeVector,
    cfg: &PageRankConfig,
) -> Result<PageRankOutput> {
    let n = transposed.dim();
    let p0 = vec![if n == 0 { 0.0 } else { 1.0 / n as f64 }; n];
    pagerank_from(transposed, degrees, cfg, &p0)
}

/// Runs PageRank with an arbitrary start / teleport vector `p0`.
pub fn pagerank_from<K: MatVec + ?Sized>(
    transposed: &K,
    degrees: &DegreeVector,
    cfg: &PageRankConfig,
    p0: &[f64],
) -> Result<PageRankOutput> {
    cfg.validate()?;
    let n = transposed.dim();
    Error::check_len(n, degrees.len())?;
    Error::check_len(n, p0.len())?;

    let mut p = p0.to_vec();
    let mut q = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut out = PageRankOutput {
        ranks: Vec::new(),
        iterations: 0,
        l1_deltas: Vec::with_capacity(cfg.iterations),
        masses: Vec::with_capacity(cfg.iterations),
        ops: OpCount::default(),
    };
    if n == 0 {
        return Ok(out);
    }
    let inv_degree: Vec<f64> = degrees
        .0
        .iter()
        .map(|&d| if d > 0 { 1.0 / d as f64 } else { 0.0 })
        .collect();

    let follow = 1.0 - cfg.alpha;
    for _ in 0..cfg.iterations {
        let mut dangling = 0.0;
        for ((qj, &pj), (&inv, &d)) in q.iter_mut().zip(&p).zip(inv_degree.iter().zip(&degrees.0)) {
            *qj = pj * inv;
            if d == 0 {
                dangling += pj;
            }
        }
        out.ops.accumulate(transposed.matvec_into(&q, &mut next)?);
        let spread = match cfg.dangling {
            DanglingPolicy::Uniform => dangling / n as f64,
            DanglingPolicy::Drop => 0.0,
        };
        let mut delta = 0.0;
        let mut mass = 0.0;
        for ((ni, &pi), &p0i) in next.iter_mut().zip(&p).zip(p0) {
            *ni = cfg.alpha * p0i + follow * (*ni + spread);
            delta += (*ni - pi).abs();
            mass += *ni;
        }
        std::mem::swap(&mut p, &mut next);
        out.iterations += 1;
        out.l1_deltas.push(delta);
        out.masses.push(mass);
        if cfg.l1_tolerance.is_some_and(|tol| delta <= tol) {
            break;
        }
    }
    out.ranks = p;
    Ok(out)
}

/// Which representation of `A^T` carries the products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelKind {
    #[default]
    Csr,
    Ref,
    Biclique,
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csr" => Ok(KernelKind::Csr),
            "ref" => Ok(KernelKind::Ref),
            "biclique" => Ok(KernelKind::Biclique),
            other => Err(Error::Parameter(format!("unknown kernel {other:?}"))),
        }
    }
}

/// A matrix in whichever representation was requested.
#[derive(Debug, Clone)]
pub enum Kernel {
    Csr(CsrGraph),
    Ref(ReferencedMatrix),
    Biclique(BicliqueCover),
}

/// Parameters used when a kernel has to be built from a plain graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelParams {
    pub window: usize,
    pub min_gain: u64,
    pub max_rounds: Option<usize>,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            window: crate::refcompress::DEFAULT_WINDOW,
            min_gain: 1,
            max_rounds: None,
        }
    }
}

impl Kernel {
    pub fn build(matrix: CsrGraph, kind: KernelKind, params: &KernelParams) -> Result<Kernel> {
        Ok(match kind {
            KernelKind::Csr => Kernel::Csr(matrix),
            KernelKind::Ref => Kernel::Ref(compress(&matrix, params.window)?),
            KernelKind::Biclique => Kernel::Biclique(crate::biclique::extract_greedy(
                &matrix,
                params.min_gain,
                params.max_rounds,
            )?),
        })
    }
}

impl MatVec for Kernel {
    fn dim(&self) -> usize {
        match self {
            Kernel::Csr(g) => g.dim(),
            Kernel::Ref(rm) => rm.dim(),
            Kernel::Biclique(c) => c.dim(),
        }
    }

    fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<OpCount> {
        match self {
            Kernel::Csr(g) => g.matvec_into(x, y),
            Kernel::Ref(rm) => rm.matvec_into(x, y),
            Kernel::Biclique(c) => c.matvec_into(x, y),
        }
    }
}

/// Outcome of running the same PageRank with the plain and the differential kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub linf: f64,
    pub m: usize,
    pub m_prime: usize,
    pub iterations: usize,
    pub csr_ops_per_iteration: u64,
    pub ref_ops_per_iteration: u64,
    pub csr_seconds: f64,
    pub ref_seconds: f64,
}

/// Runs PageRank on `g` with the CSR kernel and with the differential kernel
/// (compressing `g^T` with the given window) and compares the results.
pub fn pagerank_equivalence_check(
    g: &CsrGraph,
    cfg: &PageRankConfig,
    window: usize,
) -> Result<EquivalenceReport> {
    let degrees = g.out_degrees();
    let gt = g.transpose();
    let rm = compress(&gt, window)?;

    let start = Instant::now();
    let base = pagerank(&gt, &degrees, cfg)?;
    let csr_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let diff = pagerank(&rm, &degrees, cfg)?;
    let ref_seconds = start.elapsed().as_secs_f64();

    let iters = base.iterations.max(1) as u64;
    Ok(EquivalenceReport {
        linf: linf_distance(&base.ranks, &diff.ranks),
        m: g.num_edges(),
        m_prime: rm.m_prime(),
        iterations: base.iterations,
        csr_ops_per_iteration: base.ops.adds / iters,
        ref_ops_per_iteration: diff.ops.adds / diff.iterations.max(1) as u64,
        csr_seconds,
        ref_seconds,
    })
}

pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
