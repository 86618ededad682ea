//! The matrix-vector product abstraction shared by every representation.

use crate::error::Result;

/// Scalar additions performed by one product, plus how many rows were seeded
/// from a previously computed row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub adds: u64,
    pub references_used: u64,
}

impl OpCount {
    pub fn accumulate(&mut self, other: OpCount) {
        self.adds += other.adds;
        self.references_used += other.references_used;
    }
}

impl std::ops::Add for OpCount {
    type Output = OpCount;

    fn add(mut self, rhs: OpCount) -> OpCount {
        self.accumulate(rhs);
        self
    }
}

/// A binary `n x n` matrix that can compute `y = A * x`.
pub trait MatVec {
    fn dim(&self) -> usize;

    /// Overwrites `y` with `A * x`. Both slices must have length [`MatVec::dim`].
    fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<OpCount>;

    fn matvec(&self, x: &[f64]) -> Result<(Vec<f64>, OpCount)> {
        let mut y = vec![0.0; self.dim()];
        let ops = self.matvec_into(x, &mut y)?;
        Ok((y, ops))
    }
}
