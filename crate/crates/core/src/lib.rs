//! Binary adjacency matrices stored so that `A * x` costs time proportional
//! to their compressed size.
//!
//! Two representations are provided next to the plain [`CsrGraph`]:
//!
//! * [`ReferencedMatrix`]: each row is coded as the difference against an
//!   earlier, similar row. The product reuses the already computed entry of
//!   the reference row and only touches the differing columns.
//! * [`BicliqueCover`]: edges split into complete bipartite blocks, each
//!   summed once, plus residual edges.
//!
//! All three implement [`MatVec`], and [`pagerank()`] runs power iteration on
//! any of them.

pub mod bench;
pub mod biclique;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod pagerank;
pub mod refcompress;
pub mod refmatvec;

pub use biclique::{extract_greedy, matvec_biclique, verify_cover, Biclique, BicliqueCover};
pub use error::{Error, Result};
pub use graph::{matvec_csr, CsrGraph, DegreeVector, VertexId};
pub use kernel::{MatVec, OpCount};
pub use pagerank::{
    pagerank, pagerank_equivalence_check, pagerank_from, DanglingPolicy, Kernel, KernelKind,
    KernelParams, PageRankConfig, PageRankOutput,
};
pub use refcompress::{compress, CompressionStats, ReferencedMatrix, DEFAULT_WINDOW};
pub use refmatvec::{matvec_ref, matvec_ref_left};
