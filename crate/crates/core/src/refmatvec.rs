//! `y = A * x` evaluated on the differential encoding.
//!
//! Rows are visited in increasing order so that `y[r]` is final by the time
//! row `i` (with reference `r < i`) reads it. The loop is inherently
//! sequential for a single product.

use crate::error::{Error, Result};
use crate::kernel::{MatVec, OpCount};
use crate::refcompress::ReferencedMatrix;

/// Computes `A * x` where `A` is the matrix encoded by `rm`. Performs
/// `m' + references_used` additions.
pub fn matvec_ref(rm: &ReferencedMatrix, x: &[f64]) -> Result<(Vec<f64>, OpCount)> {
    rm.matvec(x)
}

/// Computes `x * A` given the encoding of `A^T`.
pub fn matvec_ref_left(rm_of_transpose: &ReferencedMatrix, x: &[f64]) -> Result<(Vec<f64>, OpCount)> {
    matvec_ref(rm_of_transpose, x)
}

impl MatVec for ReferencedMatrix {
    fn dim(&self) -> usize {
        self.len()
    }

    fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<OpCount> {
        let n = self.len();
        Error::check_len(n, x.len())?;
        Error::check_len(n, y.len())?;
        let mut references_used = 0u64;
        for i in 0..n {
            let mut acc = 0.0;
            for &j in self.plus_row(i) {
                acc += x[j as usize];
            }
            for &j in self.minus_row(i) {
                acc -= x[j as usize];
            }
            y[i] = match self.reference(i) {
                Some(r) => {
                    references_used += 1;
                    y[r] + acc
                }
                None => acc,
            };
        }
        Ok(OpCount {
            adds: self.m_prime() as u64 + references_used,
            references_used,
        })
    }
}
