//! Compressed sparse row adjacency matrices and the plain product kernel.

use crate::error::{Error, Result};
use crate::kernel::{MatVec, OpCount};

/// 0-based vertex index.
pub type VertexId = u32;

/// Binary adjacency matrix in CSR layout. Row `u` lists the out-neighbours of
/// `u` in strictly increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrGraph {
    offsets: Vec<usize>,
    columns: Vec<VertexId>,
}

/// Out-degree of every vertex, the diagonal of `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector(pub Vec<u64>);

impl DegreeVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

fn check_vertex_count(n: usize) -> Result<()> {
    if n as u64 > u64::from(VertexId::MAX) + 1 {
        return Err(Error::Parameter(format!(
            "{n} vertices exceed the 32-bit vertex id space"
        )));
    }
    Ok(())
}

impl CsrGraph {
    pub fn empty(n: usize) -> Self {
        CsrGraph {
            offsets: vec![0; n + 1],
            columns: Vec::new(),
        }
    }

    /// Builds the graph from an edge list. Rows come out sorted, duplicate
    /// edges collapse to one and self-loops are kept.
    pub fn from_edges(edges: &[(VertexId, VertexId)], n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        let mut counts = vec![0usize; n + 1];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::OutOfRange {
                    edge: (u.into(), v.into()),
                    n,
                    line: None,
                });
            }
            counts[u as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cursor = counts.clone();
        let mut columns = vec![0; edges.len()];
        for &(u, v) in edges {
            let slot = &mut cursor[u as usize];
            columns[*slot] = v;
            *slot += 1;
        }

        // sort and dedup each row, compacting in place
        let mut offsets = vec![0usize; n + 1];
        let mut write = 0;
        for u in 0..n {
            let row = &mut columns[counts[u]..counts[u + 1]];
            row.sort_unstable();
            let mut last = None;
            for k in counts[u]..counts[u + 1] {
                let v = columns[k];
                if last != Some(v) {
                    columns[write] = v;
                    write += 1;
                    last = Some(v);
                }
            }
            offsets[u + 1] = write;
        }
        columns.truncate(write);
        columns.shrink_to_fit();
        Ok(CsrGraph { offsets, columns })
    }

    /// Assembles a graph from already sorted rows, validating every invariant.
    pub fn from_rows<R: AsRef<[VertexId]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        check_vertex_count(n)?;
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut columns = Vec::new();
        for (u, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            for (k, &v) in row.iter().enumerate() {
                if v as usize >= n {
                    return Err(Error::OutOfRange {
                        edge: (u as u64, v.into()),
                        n,
                        line: None,
                    });
                }
                if k > 0 && row[k - 1] >= v {
                    return Err(Error::Parameter(format!(
                        "row {u} is not strictly increasing"
                    )));
                }
            }
            columns.extend_from_slice(row);
            offsets.push(columns.len());
        }
        Ok(CsrGraph { offsets, columns })
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.columns.len()
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[VertexId] {
        &self.columns[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[VertexId]> + '_ {
        self.offsets.windows(2).map(|w| &self.columns[w[0]..w[1]])
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn columns(&self) -> &[VertexId] {
        &self.columns
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.rows()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&v| (u as VertexId, v)))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.num_vertices() && self.row(u as usize).binary_search(&v).is_ok()
    }

    /// `(u, v)` is an edge of the result iff `(v, u)` is an edge of `self`.
    pub fn transpose(&self) -> CsrGraph {
        let n = self.num_vertices();
        let mut offsets = vec![0usize; n + 1];
        for &v in &self.columns {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut columns = vec![0; self.columns.len()];
        // scanning sources in order keeps every transposed row sorted
        for (u, row) in self.rows().enumerate() {
            for &v in row {
                let slot = &mut cursor[v as usize];
                columns[*slot] = u as VertexId;
                *slot += 1;
            }
        }
        CsrGraph { offsets, columns }
    }

    pub fn out_degrees(&self) -> DegreeVector {
        DegreeVector(
            self.offsets
                .windows(2)
                .map(|w| (w[1] - w[0]) as u64)
                .collect(),
        )
    }
}

/// `y[i] = sum of x[j] over row i`. Costs exactly `m` additions.
pub fn matvec_csr(g: &CsrGraph, x: &[f64]) -> Result<Vec<f64>> {
    Ok(g.matvec(x)?.0)
}

impl MatVec for CsrGraph {
    fn dim(&self) -> usize {
        self.num_vertices()
    }

    fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<OpCount> {
        let n = self.num_vertices();
        Error::check_len(n, x.len())?;
        Error::check_len(n, y.len())?;
        for (yi, w) in y.iter_mut().zip(self.offsets.windows(2)) {
            let mut acc = 0.0;
            for &j in &self.columns[w[0]..w[1]] {
                acc += x[j as usize];
            }
            *yi = acc;
        }
        Ok(OpCount {
            adds: self.columns.len() as u64,
            references_used: 0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rows_of(g: &CsrGraph) -> Vec<Vec<VertexId>> {
        g.rows().map(<[_]>::to_vec).collect()
    }

    #[test]
    fn empty_graph() {
        let g = CsrGraph::from_edges(&[], 3).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert!(g.rows().all(|r| r.is_empty()));
        assert_eq!(g.transpose(), g);
        assert_eq!(CsrGraph::empty(4).out_degrees().0, vec![0; 4]);
    }

    #[test]
    fn duplicates_collapse() {
        let g = CsrGraph::from_edges(&[(0, 1), (0, 1), (1, 0)], 2).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(rows_of(&g), vec![vec![1], vec![0]]);
    }

    #[test]
    fn rows_are_sorted() {
        let g = CsrGraph::from_edges(&[(0, 2), (0, 1), (1, 2)], 3).unwrap();
        assert_eq!(rows_of(&g), vec![vec![1, 2], vec![2], vec![]]);
    }

    #[test]
    fn self_loops_are_kept() {
        let g = CsrGraph::from_edges(&[(1, 1)], 2).unwrap();
        assert!(g.has_edge(1, 1));
    }

    #[test]
    fn out_of_range_endpoint_is_named() {
        let err = CsrGraph::from_edges(&[(0, 1), (2, 5)], 3).unwrap_err();
        match err {
            Error::OutOfRange { edge, n, .. } => {
                assert_eq!(edge, (2, 5));
                assert_eq!(n, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_edge_flip() {
        let g = CsrGraph::from_edges(&[(0, 1)], 2).unwrap();
        assert_eq!(rows_of(&g.transpose()), vec![vec![], vec![0]]);
    }

    #[test]
    fn complete_digraph_degrees() {
        let edges: Vec<_> = (0..3)
            .flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let g = CsrGraph::from_edges(&edges, 3).unwrap();
        assert_eq!(g.out_degrees().0, vec![2, 2, 2]);
    }

    #[test]
    fn matvec_small() {
        let g = CsrGraph::from_rows(&[vec![1, 2], vec![2], vec![]]).unwrap();
        let (y, ops) = g.matvec(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![5.0, 3.0, 0.0]);
        assert_eq!(ops.adds, 3);
    }

    #[test]
    fn matvec_identity_and_zero() {
        let g = CsrGraph::from_rows(&[vec![0], vec![1], vec![2]]).unwrap();
        let x = [0.25, -3.0, 7.5];
        assert_eq!(matvec_csr(&g, &x).unwrap(), x.to_vec());
        assert_eq!(matvec_csr(&g, &[0.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn matvec_dimension_error() {
        let g = CsrGraph::empty(3);
        assert!(matches!(
            matvec_csr(&g, &[1.0]),
            Err(Error::Dimension { expected: 3, actual: 1 })
        ));
    }

    #[test]
    fn from_rows_rejects_unsorted() {
        assert!(CsrGraph::from_rows(&[vec![1, 0], vec![]]).is_err());
        assert!(CsrGraph::from_rows(&[vec![2], vec![]]).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(VertexId, VertexId)>)> {
        (1usize..64).prop_flat_map(|n| {
            let v = 0..n as VertexId;
            (Just(n), prop::collection::vec((v.clone(), v), 0..256))
        })
    }

    proptest! {
        #[test]
        fn matches_sort_dedup_oracle((n, edges) in arb_graph()) {
            let g = CsrGraph::from_edges(&edges, n).unwrap();
            let mut expected = edges.clone();
            expected.sort_unstable();
            expected.dedup();
            prop_assert_eq!(g.edges().collect::<Vec<_>>(), expected);
        }

        #[test]
        fn rebuild_is_idempotent((n, edges) in arb_graph()) {
            let g = CsrGraph::from_edges(&edges, n).unwrap();
            let again = CsrGraph::from_edges(&g.edges().collect::<Vec<_>>(), n).unwrap();
            prop_assert_eq!(again, g);
        }

        #[test]
        fn transpose_is_involution((n, edges) in arb_graph()) {
            let g = CsrGraph::from_edges(&edges, n).unwrap();
            let t = g.transpose();
            for u in 0..n as VertexId {
                for v in 0..n as VertexId {
                    prop_assert_eq!(g.has_edge(u, v), t.has_edge(v, u));
                }
            }
            prop_assert_eq!(t.transpose(), g);
        }

        #[test]
        fn degrees_match_recount((n, edges) in arb_graph()) {
            let g = CsrGraph::from_edges(&edges, n).unwrap();
            let d = g.out_degrees();
            for u in 0..n {
                prop_assert_eq!(d.0[u], (0..n as VertexId).filter(|&v| g.has_edge(u as VertexId, v)).count() as u64);
            }
            prop_assert_eq!(d.total(), g.num_edges() as u64);
        }

        #[test]
        fn unit_vector_selects_in_neighbours((n, edges) in arb_graph(), j in 0usize..64) {
            let g = CsrGraph::from_edges(&edges, n).unwrap();
            let j = j % n;
            let mut x = vec![0.0; n];
            x[j] = 1.0;
            let y = matvec_csr(&g, &x).unwrap();
            for i in 0..n {
                let expected = if g.has_edge(i as VertexId, j as VertexId) { 1.0 } else { 0.0 };
                prop_assert_eq!(y[i], expected);
            }
        }
    }
}
