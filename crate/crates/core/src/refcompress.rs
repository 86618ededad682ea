//! Reference-differential encoding of adjacency rows.
//!
//! Each row `v_i` is stored either verbatim or as the signed difference
//! `v_i - v_r` against an earlier row `r < i`. Entries of the difference that
//! are `+1` go to the plus list, entries that are `-1` to the minus list.

use crate::error::{Error, Result};
use crate::graph::{CsrGraph, VertexId};

/// WebGraph's default reference window.
pub const DEFAULT_WINDOW: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferencedMatrix {
    refs: Vec<Option<u32>>,
    plus_offsets: Vec<usize>,
    plus: Vec<VertexId>,
    minus_offsets: Vec<usize>,
    minus: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionStats {
    pub n: usize,
    pub m: usize,
    pub m_prime: usize,
    /// `m / m_prime`, or 1.0 when `m_prime == 0` (see `ratio_defined`).
    pub ratio: f64,
    pub ratio_defined: bool,
    pub rows_self_coded: usize,
    pub max_chain: usize,
}

/// `|a \ b| + |b \ a|` for sorted slices, or `None` as soon as it reaches `limit`.
fn symmetric_difference_below(a: &[VertexId], b: &[VertexId], limit: usize) -> Option<usize> {
    let (mut i, mut j, mut d) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                d += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                d += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
        if d >= limit {
            return None;
        }
    }
    d += (a.len() - i) + (b.len() - j);
    (d < limit).then_some(d)
}

/// Appends `a \ b` to `out`.
fn push_difference(a: &[VertexId], b: &[VertexId], out: &mut Vec<VertexId>) {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            out.push(x);
        }
    }
}

/// `(base ∪ plus) \ minus` for sorted inputs.
fn apply_difference(base: &[VertexId], plus: &[VertexId], minus: &[VertexId]) -> Vec<VertexId> {
    let mut merged = Vec::with_capacity(base.len() + plus.len());
    let (mut i, mut j) = (0, 0);
    while i < base.len() || j < plus.len() {
        let next = if j == plus.len() || (i < base.len() && base[i] < plus[j]) {
            i += 1;
            base[i - 1]
        } else if i == base.len() || plus[j] < base[i] {
            j += 1;
            plus[j - 1]
        } else {
            i += 1;
            j += 1;
            base[i - 1]
        };
        merged.push(next);
    }
    if minus.is_empty() {
        return merged;
    }
    let mut out = Vec::with_capacity(merged.len());
    push_difference(&merged, minus, &mut out);
    out
}

fn is_strictly_increasing(cols: &[VertexId]) -> bool {
    cols.windows(2).all(|w| w[0] < w[1])
}

fn intersects(a: &[VertexId], b: &[VertexId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Picks, for every row, the earlier row within `window` whose difference has
/// the fewest nonzeros. A row is kept verbatim unless the best difference is
/// strictly smaller than the row itself; ties between candidates go to the
/// nearest one.
pub fn compress(g: &CsrGraph, window: usize) -> Result<ReferencedMatrix> {
    if window < 1 {
        return Err(Error::Parameter("window must be at least 1".into()));
    }
    let n = g.num_vertices();
    let mut refs = Vec::with_capacity(n);
    let mut plus_offsets = Vec::with_capacity(n + 1);
    let mut minus_offsets = Vec::with_capacity(n + 1);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    plus_offsets.push(0);
    minus_offsets.push(0);

    for i in 0..n {
        let row = g.row(i);
        let mut best = row.len();
        let mut chosen = None;
        for c in (i.saturating_sub(window)..i).rev() {
            let cand = g.row(c);
            if row.len().abs_diff(cand.len()) >= best {
                continue;
            }
            if let Some(d) = symmetric_difference_below(row, cand, best) {
                best = d;
                chosen = Some(c);
            }
        }
        match chosen {
            None => {
                refs.push(None);
                plus.extend_from_slice(row);
            }
            Some(c) => {
                refs.push(Some(c as u32));
                push_difference(row, g.row(c), &mut plus);
                push_difference(g.row(c), row, &mut minus);
            }
        }
        plus_offsets.push(plus.len());
        minus_offsets.push(minus.len());
    }

    Ok(ReferencedMatrix {
        refs,
        plus_offsets,
        plus,
        minus_offsets,
        minus,
    })
}

impl ReferencedMatrix {
    /// Assembles a matrix from raw parts and checks that it is a valid
    /// differential encoding of some binary matrix: references point
    /// backwards, column lists are sorted and in range, minus entries are
    /// present in the reference row and plus entries are absent from it.
    pub fn from_parts(
        refs: Vec<Option<u32>>,
        plus_rows: Vec<Vec<VertexId>>,
        minus_rows: Vec<Vec<VertexId>>,
    ) -> Result<Self> {
        let n = refs.len();
        if plus_rows.len() != n || minus_rows.len() != n {
            return Err(Error::Corrupt(format!(
                "{n} references but {} plus rows and {} minus rows",
                plus_rows.len(),
                minus_rows.len()
            )));
        }
        let mut plus_offsets = vec![0];
        let mut minus_offsets = vec![0];
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for i in 0..n {
            if let Some(r) = refs[i] {
                if r as usize >= i {
                    return Err(Error::Corrupt(format!(
                        "row {i} references row {r}, which does not precede it"
                    )));
                }
            } else if !minus_rows[i].is_empty() {
                return Err(Error::Corrupt(format!(
                    "row {i} has no reference but lists removed columns"
                )));
            }
            for cols in [&plus_rows[i], &minus_rows[i]] {
                if !is_strictly_increasing(cols) {
                    return Err(Error::Corrupt(format!("row {i} columns are not sorted")));
                }
                if cols.last().is_some_and(|&c| c as usize >= n) {
                    return Err(Error::Corrupt(format!(
                        "row {i} has a column out of range for {n} vertices"
                    )));
                }
            }
            plus.extend_from_slice(&plus_rows[i]);
            minus.extend_from_slice(&minus_rows[i]);
            plus_offsets.push(plus.len());
            minus_offsets.push(minus.len());
        }
        let rm = ReferencedMatrix {
            refs,
            plus_offsets,
            plus,
            minus_offsets,
            minus,
        };
        rm.validate_against_references()?;
        Ok(rm)
    }

    fn validate_against_references(&self) -> Result<()> {
        let mut rows: Vec<Vec<VertexId>> = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let base: &[VertexId] = match self.refs[i] {
                Some(r) => &rows[r as usize],
                None => &[],
            };
            let plus = self.plus_row(i);
            let minus = self.minus_row(i);
            if intersects(plus, base) {
                return Err(Error::Corrupt(format!(
                    "row {i} adds a column already present in its reference"
                )));
            }
            let mut missing = Vec::new();
            push_difference(minus, base, &mut missing);
            if !missing.is_empty() {
                return Err(Error::Corrupt(format!(
                    "row {i} removes a column absent from its reference"
                )));
            }
            let row = apply_difference(base, plus, minus);
            rows.push(row);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }

    pub fn reference(&self, i: usize) -> Option<usize> {
        self.refs[i].map(|r| r as usize)
    }

    pub fn references(&self) -> &[Option<u32>] {
        &self.refs
    }

    #[inline]
    pub fn plus_row(&self, i: usize) -> &[VertexId] {
        &self.plus[self.plus_offsets[i]..self.plus_offsets[i + 1]]
    }

    #[inline]
    pub fn minus_row(&self, i: usize) -> &[VertexId] {
        &self.minus[self.minus_offsets[i]..self.minus_offsets[i + 1]]
    }

    /// Number of nonzeros of the differential matrix, `+1` and `-1` together.
    pub fn m_prime(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn references_used(&self) -> usize {
        self.refs.iter().filter(|r| r.is_some()).count()
    }

    /// Decodes row `i` by walking its reference chain.
    pub fn reconstruct_row(&self, i: usize) -> Result<Vec<VertexId>> {
        if i >= self.len() {
            return Err(Error::Index { index: i, n: self.len() });
        }
        let mut chain = vec![i];
        while let Some(r) = self.reference(*chain.last().unwrap()) {
            chain.push(r);
        }
        let mut row = Vec::new();
        for &k in chain.iter().rev() {
            row = apply_difference(&row, self.plus_row(k), self.minus_row(k));
        }
        Ok(row)
    }

    /// Decodes every row in one forward pass.
    pub fn to_graph(&self) -> CsrGraph {
        let mut rows: Vec<Vec<VertexId>> = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let base: &[VertexId] = match self.refs[i] {
                Some(r) => &rows[r as usize],
                None => &[],
            };
            let row = apply_difference(base, self.plus_row(i), self.minus_row(i));
            rows.push(row);
        }
        CsrGraph::from_rows(&rows).expect("validated matrix decodes to a valid graph")
    }

    /// Length of the reference chain starting at every row (0 for self-coded rows).
    pub fn chain_lengths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.len()];
        for i in 0..self.len() {
            if let Some(r) = self.refs[i] {
                depth[i] = depth[r as usize] + 1;
            }
        }
        depth
    }

    pub fn stats(&self, g: &CsrGraph) -> CompressionStats {
        debug_assert_eq!(self.len(), g.num_vertices());
        let m = g.num_edges();
        let m_prime = self.m_prime();
        let ratio_defined = m_prime > 0;
        CompressionStats {
            n: self.len(),
            m,
            m_prime,
            ratio: if ratio_defined { m as f64 / m_prime as f64 } else { 1.0 },
            ratio_defined,
            rows_self_coded: self.refs.iter().filter(|r| r.is_none()).count(),
            max_chain: self.chain_lengths().into_iter().max().unwrap_or(0),
        }
    }
}
