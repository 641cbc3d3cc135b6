use nalgebra::DMatrix;

use super::sobol::sobol_sequence;
use super::SensitivityError;

/// Paired sample matrices. `ab[i]` is `a` with column `i` taken from `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrices {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub ab: Vec<DMatrix<f64>>,
}

impl SampleMatrices {
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn k(&self) -> usize {
        self.a.ncols()
    }

    /// `a`, `b`, `ab[0]`, .., `ab[k-1]` stacked vertically, for evaluating
    /// everything in one batch.
    pub fn stacked(&self) -> DMatrix<f64> {
        let (n, k) = (self.n(), self.k());
        let mut out = DMatrix::zeros(n * (2 + k), k);
        for (block, m) in [&self.a, &self.b].into_iter().chain(&self.ab).enumerate() {
            out.rows_mut(block * n, n).copy_from(m);
        }
        out
    }
}

pub fn validate_bounds(bounds: &[(f64, f64)]) -> Result<(), SensitivityError> {
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(SensitivityError::InvalidConfig(format!(
                "factor {i} bounds must be finite with max > min, got [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

/// Draw `n` points of a `2k`-dimensional sequence starting at `skip`; the left
/// half becomes `a`, the right half `b`, each column mapped onto its bounds.
pub fn build_sample_matrices(n: usize, bounds: &[(f64, f64)], skip: u64) -> Result<SampleMatrices, SensitivityError> {
    validate_bounds(bounds)?;
    let k = bounds.len();
    let seq = sobol_sequence(n, 2 * k, skip)?;
    let map = |col: usize, (lo, hi): (f64, f64)| seq.column(col).map(|u| lo + (hi - lo) * u);
    let mut a = DMatrix::zeros(n, k);
    let mut b = DMatrix::zeros(n, k);
    for (i, &bound) in bounds.iter().enumerate() {
        a.set_column(i, &map(i, bound));
        b.set_column(i, &map(k + i, bound));
    }
    let ab = (0..k)
        .map(|i| {
            let mut m = a.clone();
            m.set_column(i, &b.column(i));
            m
        })
        .collect();
    Ok(SampleMatrices { a, b, ab })
}
