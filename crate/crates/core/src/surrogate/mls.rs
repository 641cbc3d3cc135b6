//! Moving least squares: at each query point a quadratic (no mixed terms) is
//! fitted to the supports by weighted least squares, with compactly
//! supported cubic weights of the scaled distance.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{fill_basis, BasisKind};
use super::ols::dot;
use super::SurrogateError;

pub const DEFAULT_RIDGE: f64 = 1e-10;
/// A Cholesky pivot below this fraction of the largest diagonal entry marks
/// the weighted normal matrix as near-singular.
const NEAR_SINGULAR: f64 = 1e-12;
/// Query rows per weight block in batch evaluation.
const BLOCK_ROWS: usize = 256;

/// `1 - 3s² + 2s³` on `[0, 1]`, zero beyond.
pub fn mls_weight(s: f64) -> f64 {
    let s = s.abs();
    if s < 1.0 {
        // factored form stays non-negative in floating point
        let u = 1.0 - s;
        u * u * (1.0 + 2.0 * s)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlsOptions {
    /// Influence radius in normalized units; defaults to half the diagonal
    /// of the unit box, `sqrt(k) / 2`.
    pub radius: Option<f64>,
    /// Ridge added to the diagonal, relative to its largest entry, when the
    /// weighted normal matrix is near-singular.
    pub ridge: f64,
    /// Supports with nonzero weight required before solving; defaults to the
    /// number of basis terms.
    pub min_support: Option<usize>,
}

impl Default for MlsOptions {
    fn default() -> Self {
        Self { radius: None, ridge: DEFAULT_RIDGE, min_support: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlsModel {
    pub k: usize,
    /// Normalized support coordinates, one vector per input dimension.
    pub support_columns: Vec<Vec<f64>>,
    pub responses: Vec<f64>,
    pub radius: f64,
    pub ridge: f64,
    pub min_support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlsPrediction {
    pub value: f64,
    /// Radius actually used after any expansion.
    pub radius: f64,
    /// Supports with nonzero weight.
    pub supports: usize,
    pub regularized: bool,
}

/// Counters accumulated over a batch of evaluations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlsEvalStats {
    pub evaluations: usize,
    /// Evaluations that needed the ridge term.
    pub regularized: usize,
    /// Evaluations that needed a larger radius than the default.
    pub expanded: usize,
}

impl MlsEvalStats {
    fn add(&mut self, other: MlsEvalStats) {
        self.evaluations += other.evaluations;
        self.regularized += other.regularized;
        self.expanded += other.expanded;
    }
}

pub fn fit_mls(x: &DMatrix<f64>, y: &[f64], options: &MlsOptions) -> Result<MlsModel, SurrogateError> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(SurrogateError::DimensionMismatch { expected: n, got: y.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(SurrogateError::InvalidInput("samples must be finite".into()));
    }
    if x.iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
        return Err(SurrogateError::InvalidInput("MLS supports must be normalized to [0, 1]".into()));
    }
    let radius = options.radius.unwrap_or(if k == 0 { 1.0 } else { (k as f64).sqrt() / 2.0 });
    if !(radius.is_finite() && radius > 0.0) {
        return Err(SurrogateError::InvalidInput(format!("MLS radius must be positive, got {radius}")));
    }
    if !(options.ridge.is_finite() && options.ridge >= 0.0) {
        return Err(SurrogateError::InvalidInput(format!("MLS ridge must be non-negative, got {}", options.ridge)));
    }
    let k_r = BasisKind::MlsQuadratic.n_terms(k);
    let min_support = options.min_support.unwrap_or(k_r).max(1);
    if n < min_support {
        return Err(SurrogateError::NoSupport { found: n, required: min_support });
    }
    Ok(MlsModel {
        k,
        support_columns: x.column_iter().map(|c| c.iter().copied().collect()).collect(),
        responses: y.to_vec(),
        radius,
        ridge: options.ridge,
        min_support,
    })
}

impl MlsModel {
    pub fn n_supports(&self) -> usize {
        self.responses.len()
    }

    fn n_terms(&self) -> usize {
        BasisKind::MlsQuadratic.n_terms(self.k)
    }

    fn check_point(&self, x: &[f64]) -> Result<(), SurrogateError> {
        if x.len() != self.k {
            return Err(SurrogateError::DimensionMismatch { expected: self.k, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SurrogateError::InvalidInput("query point must be finite".into()));
        }
        Ok(())
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64, SurrogateError> {
        self.predict_detail(x).map(|p| p.value)
    }

    /// Single-point evaluation. The radius is doubled until at least
    /// `min_support` supports carry nonzero weight.
    pub fn predict_detail(&self, x: &[f64]) -> Result<MlsPrediction, SurrogateError> {
        self.check_point(x)?;
        let n = self.n_supports();
        let m = self.n_terms();
        let mut dist = vec![0.0; n];
        for (col, xv) in self.support_columns.iter().zip(x) {
            for (d, c) in dist.iter_mut().zip(col) {
                *d += (xv - c) * (xv - c);
            }
        }
        dist.iter_mut().for_each(|d| *d = d.sqrt());

        let mut radius = self.radius;
        let supports = loop {
            let count = dist.iter().filter(|&&d| mls_weight(d / radius) > 0.0).count();
            if count >= self.min_support {
                break count;
            }
            if count == n {
                return Err(SurrogateError::NoSupport { found: n, required: self.min_support });
            }
            radius *= 2.0;
        };

        let mut solver = Solver::new(m);
        let mut rhs = vec![0.0; m];
        let mut p = vec![0.0; m];
        let mut xi = vec![0.0; self.k];
        for (i, &d) in dist.iter().enumerate() {
            let w = mls_weight(d / radius);
            if w == 0.0 {
                continue;
            }
            for (v, col) in xi.iter_mut().zip(&self.support_columns) {
                *v = col[i];
            }
            fill_basis(&xi, BasisKind::MlsQuadratic, &mut p);
            let mut t = 0;
            for a in 0..m {
                let wa = w * p[a];
                for b in a..m {
                    solver.packed[t] += wa * p[b];
                    t += 1;
                }
                rhs[a] += wa * self.responses[i];
            }
        }
        let mut beta = vec![0.0; m];
        let regularized = solver.solve(&rhs, self.ridge, &mut beta)?;
        fill_basis(x, BasisKind::MlsQuadratic, &mut p);
        Ok(MlsPrediction { value: dot(&p, &beta), radius, supports, regularized })
    }

    /// Evaluate every row of `x`. Weighted moments for a block of queries are
    /// formed as one matrix product of the weight block with per-support
    /// moment rows; rows that lack support fall back to [`Self::predict_detail`].
    pub fn predict_rows(&self, x: &DMatrix<f64>) -> Result<(Vec<f64>, MlsEvalStats), SurrogateError> {
        if x.ncols() != self.k {
            return Err(SurrogateError::DimensionMismatch { expected: self.k, got: x.ncols() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SurrogateError::InvalidInput("query points must be finite".into()));
        }
        let layout = MomentLayout::new(self.k);
        let moments = self.moment_rows(&layout);
        let starts: Vec<usize> = (0..x.nrows()).step_by(BLOCK_ROWS).collect();
        let blocks: Vec<Result<(Vec<f64>, MlsEvalStats), SurrogateError>> = starts
            .par_iter()
            .map(|&start| self.predict_block(x, start, (start + BLOCK_ROWS).min(x.nrows()), &layout, &moments))
            .collect();
        let mut values = Vec::with_capacity(x.nrows());
        let mut stats = MlsEvalStats::default();
        for block in blocks {
            let (v, s) = block?;
            values.extend(v);
            stats.add(s);
        }
        Ok((values, stats))
    }

    /// Row `i` holds each distinct monomial of `p_i p_iᵀ` followed by
    /// `p_i y_i`, zero-padded to the layout width.
    fn moment_rows(&self, layout: &MomentLayout) -> Vec<f64> {
        let m = self.n_terms();
        let mut out = vec![0.0; self.n_supports() * layout.width];
        let mut p = vec![0.0; m];
        let mut xi = vec![0.0; self.k];
        for (i, row) in out.chunks_exact_mut(layout.width).enumerate() {
            for (v, col) in xi.iter_mut().zip(&self.support_columns) {
                *v = col[i];
            }
            fill_basis(&xi, BasisKind::MlsQuadratic, &mut p);
            for (o, &(a, b)) in row.iter_mut().zip(&layout.monomials) {
                *o = p[a] * p[b];
            }
            let rhs = &mut row[layout.monomials.len()..layout.monomials.len() + m];
            for (o, pa) in rhs.iter_mut().zip(&p) {
                *o = pa * self.responses[i];
            }
        }
        out
    }

    fn predict_block(
        &self,
        x: &DMatrix<f64>,
        start: usize,
        end: usize,
        layout: &MomentLayout,
        moments: &[f64],
    ) -> Result<(Vec<f64>, MlsEvalStats), SurrogateError> {
        let n = self.n_supports();
        let m = self.n_terms();
        let width = layout.width;
        let rows = end - start;

        let mut weights = vec![0.0; rows * n];
        let mut supported = vec![0; rows];
        let mut point = vec![0.0; self.k];
        for (r, wr) in weights.chunks_exact_mut(n).enumerate() {
            for (d, v) in point.iter_mut().enumerate() {
                *v = x[(start + r, d)];
            }
            supported[r] = weight_row(&point, &self.support_columns, 1.0 / self.radius, wr);
        }

        let mut acc = vec![0.0; rows * width];
        // SAFETY: `weights` is rows×n, `moments` is n×width and `acc` is
        // rows×width, all row-major and dense.
        unsafe {
            matrixmultiply::dgemm(
                rows,
                n,
                width,
                1.0,
                weights.as_ptr(),
                n as isize,
                1,
                moments.as_ptr(),
                width as isize,
                1,
                0.0,
                acc.as_mut_ptr(),
                width as isize,
                1,
            );
        }

        let mut values = Vec::with_capacity(rows);
        let mut stats = MlsEvalStats { evaluations: rows, ..MlsEvalStats::default() };
        let mut solver = Solver::new(m);
        let mut p = vec![0.0; m];
        let mut beta = vec![0.0; m];
        for r in 0..rows {
            for (d, v) in point.iter_mut().enumerate() {
                *v = x[(start + r, d)];
            }
            if supported[r] < self.min_support {
                let pred = self.predict_detail(&point)?;
                stats.expanded += 1;
                stats.regularized += usize::from(pred.regularized);
                values.push(pred.value);
                continue;
            }
            let row = &acc[r * width..(r + 1) * width];
            for (dst, &mono) in solver.packed.iter_mut().zip(&layout.pair_to_monomial) {
                *dst = row[mono];
            }
            let rhs = &row[layout.monomials.len()..layout.monomials.len() + m];
            stats.regularized += usize::from(solver.solve(rhs, self.ridge, &mut beta)?);
            fill_basis(&point, BasisKind::MlsQuadratic, &mut p);
            values.push(dot(&p, &beta));
        }
        Ok((values, stats))
    }
}

/// Distinct monomials among the products of basis terms. Many entries of
/// `p pᵀ` coincide (`1 * x²` and `x * x`), so only one of each is accumulated.
struct MomentLayout {
    /// A representative basis pair per monomial.
    monomials: Vec<(usize, usize)>,
    /// Monomial index of each packed upper-triangle entry.
    pair_to_monomial: Vec<usize>,
    /// Monomials plus right-hand side terms, rounded up to a multiple of 8
    /// to keep the matrix product on its fast path.
    width: usize,
}

impl MomentLayout {
    fn new(k: usize) -> Self {
        let m = BasisKind::MlsQuadratic.n_terms(k);
        let exponents = |t: usize| -> Vec<u8> {
            let mut e = vec![0u8; k];
            match t {
                0 => {}
                t if t <= k => e[t - 1] = 1,
                t => e[t - k - 1] = 2,
            }
            e
        };
        let mut keys: Vec<Vec<u8>> = Vec::new();
        let mut monomials = Vec::new();
        let mut pair_to_monomial = Vec::with_capacity(packed_len(m));
        for a in 0..m {
            for b in a..m {
                let key: Vec<u8> = exponents(a).iter().zip(exponents(b)).map(|(x, y)| x + y).collect();
                let idx = keys.iter().position(|k| *k == key).unwrap_or_else(|| {
                    keys.push(key);
                    monomials.push((a, b));
                    keys.len() - 1
                });
                pair_to_monomial.push(idx);
            }
        }
        let width = (monomials.len() + m).div_ceil(8) * 8;
        Self { monomials, pair_to_monomial, width }
    }
}

/// Weights of every support for one query point; returns how many are nonzero.
fn weight_row(point: &[f64], columns: &[Vec<f64>], inv_radius: f64, out: &mut [f64]) -> usize {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above.
            return unsafe { weight_row_avx2(point, columns, inv_radius, out) };
        }
    }
    weight_row_generic(point, columns, inv_radius, out)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn weight_row_avx2(point: &[f64], columns: &[Vec<f64>], inv_radius: f64, out: &mut [f64]) -> usize {
    weight_row_generic(point, columns, inv_radius, out)
}

// Same operation order on every code path, so results do not depend on the
// instruction set. Branch-free form of `mls_weight`: clamping at 1 yields
// exactly zero beyond the radius.
#[inline(always)]
fn weight_row_generic(point: &[f64], columns: &[Vec<f64>], inv_radius: f64, out: &mut [f64]) -> usize {
    out.fill(0.0);
    for (xv, col) in point.iter().zip(columns) {
        for (o, c) in out.iter_mut().zip(col) {
            let t = xv - c;
            *o += t * t;
        }
    }
    let mut nonzero = 0;
    for o in out.iter_mut() {
        let s = (o.sqrt() * inv_radius).min(1.0);
        let u = 1.0 - s;
        *o = u * u * (1.0 + 2.0 * s);
        nonzero = usize::wrapping_add(nonzero, usize::from(s < 1.0));
    }
    nonzero
}

pub fn predict_mls(model: &MlsModel, x: &[f64]) -> Result<f64, SurrogateError> {
    model.predict(x)
}

fn packed_len(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Scratch space for solving the weighted normal equations.
struct Solver {
    m: usize,
    /// Packed upper triangle of the system matrix, filled by the caller.
    packed: Vec<f64>,
    factor: Vec<f64>,
}

impl Solver {
    fn new(m: usize) -> Self {
        Self { m, packed: vec![0.0; packed_len(m)], factor: vec![0.0; m * m] }
    }

    fn unpack(&mut self, shift: f64) {
        let m = self.m;
        let mut t = 0;
        for i in 0..m {
            for j in i..m {
                self.factor[i * m + j] = self.packed[t];
                self.factor[j * m + i] = self.packed[t];
                t += 1;
            }
            self.factor[i * m + i] += shift;
        }
    }

    /// Solve with the current `packed` matrix. Returns whether the ridge was needed.
    fn solve(&mut self, rhs: &[f64], ridge: f64, beta: &mut [f64]) -> Result<bool, SurrogateError> {
        let m = self.m;
        let max_diag = (0..m).map(|i| self.packed[diag_index(m, i)]).fold(0.0, f64::max);
        self.unpack(0.0);
        if cholesky(&mut self.factor, m, NEAR_SINGULAR * max_diag) {
            cholesky_solve(&self.factor, m, rhs, beta);
            return Ok(false);
        }
        let shift = ridge * if max_diag > 0.0 { max_diag } else { 1.0 };
        self.unpack(shift);
        if shift > 0.0 && cholesky(&mut self.factor, m, 0.0) {
            cholesky_solve(&self.factor, m, rhs, beta);
            return Ok(true);
        }
        Err(SurrogateError::Singular)
    }
}

/// Position of the `(i, i)` entry in a packed upper triangle.
fn diag_index(m: usize, i: usize) -> usize {
    i * m - i * i.saturating_sub(1) / 2
}

/// In-place lower Cholesky factor of the row-major `m×m` matrix `a`.
/// Fails when a pivot is not above `tol`.
fn cholesky(a: &mut [f64], m: usize, tol: f64) -> bool {
    for j in 0..m {
        let mut d = a[j * m + j];
        for k in 0..j {
            d -= a[j * m + k] * a[j * m + k];
        }
        if d.is_nan() || d <= tol {
            return false;
        }
        let l = d.sqrt();
        a[j * m + j] = l;
        for i in j + 1..m {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= a[i * m + k] * a[j * m + k];
            }
            a[i * m + j] = s / l;
        }
    }
    true
}

fn cholesky_solve(l: &[f64], m: usize, rhs: &[f64], out: &mut [f64]) {
    for i in 0..m {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l[i * m + k] * out[k];
        }
        out[i] = s / l[i * m + i];
    }
    for i in (0..m).rev() {
        let mut s = out[i];
        for k in i + 1..m {
            s -= l[k * m + i] * out[k];
        }
        out[i] = s / l[i * m + i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surrogate::ols::fit_ols;
    use rand::{RngExt, SeedableRng};

    fn random_unit(n: usize, k: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, k, |_, _| rng.random::<f64>())
    }

    #[test]
    fn weight_examples() {
        assert_eq!(mls_weight(0.0), 1.0);
        assert_eq!(mls_weight(0.5), 0.5);
        assert_eq!(mls_weight(1.0), 0.0);
        assert_eq!(mls_weight(2.0), 0.0);
    }

    #[test]
    fn weight_slope_by_finite_differences() {
        let h = 1e-6;
        for i in 1..100 {
            let s = i as f64 / 100.0;
            let fd = (mls_weight(s + h) - mls_weight(s - h)) / (2.0 * h);
            let exact = -6.0 * s + 6.0 * s * s;
            assert!((fd - exact).abs() < 1e-6, "s={s}: {fd} vs {exact}");
        }
        // one-sided at the ends: flat on both sides of the cutoff
        assert!(((mls_weight(h) - mls_weight(0.0)) / h).abs() < 1e-5);
        assert!(((mls_weight(1.0) - mls_weight(1.0 - h)) / h).abs() < 1e-5);
        assert!(((mls_weight(1.0 + h) - mls_weight(1.0)) / h).abs() < 1e-12);
    }

    #[test]
    fn reproduces_quadratic_1d() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 / 9.0).collect();
        let y: Vec<f64> = xs.iter().map(|x| 3.0 + x * x).collect();
        let model = fit_mls(&DMatrix::from_column_slice(10, 1, &xs), &y, &MlsOptions::default()).unwrap();
        for x in [0.05, 0.13, 0.5, 0.77, 0.95] {
            let err = (model.predict(&[x]).unwrap() - (3.0 + x * x)).abs();
            assert!(err < 1e-8, "x={x}: {err}");
        }
    }

    #[test]
    fn reproduces_separable_quadratic_3d() {
        let x = random_unit(80, 3, 4);
        let f = |r: &[f64]| 1.5 - r[0] + 2.0 * r[1] * r[1] + 0.5 * r[2] - 3.0 * r[2] * r[2];
        let y: Vec<f64> = (0..80).map(|i| f(&[x[(i, 0)], x[(i, 1)], x[(i, 2)]])).collect();
        let model = fit_mls(&x, &y, &MlsOptions { radius: Some(0.4), ..MlsOptions::default() }).unwrap();
        let q = random_unit(50, 3, 5);
        let (batch, stats) = model.predict_rows(&q).unwrap();
        assert_eq!(stats.evaluations, 50);
        for (i, v) in batch.iter().enumerate() {
            let exact = f(&[q[(i, 0)], q[(i, 1)], q[(i, 2)]]);
            assert!((v - exact).abs() < 1e-8, "{v} vs {exact}");
        }
    }

    #[test]
    fn large_radius_matches_global_fit() {
        let x = random_unit(60, 2, 6);
        let y: Vec<f64> = (0..60).map(|i| (3.0 * x[(i, 0)]).sin() + x[(i, 0)] * x[(i, 1)]).collect();
        let (ols, _) = fit_ols(&x, &y, BasisKind::QuadraticNoMixed).unwrap();
        let model = fit_mls(&x, &y, &MlsOptions { radius: Some(1e5), ..MlsOptions::default() }).unwrap();
        let q = random_unit(20, 2, 7);
        for i in 0..20 {
            let pt = [q[(i, 0)], q[(i, 1)]];
            let diff = (model.predict(&pt).unwrap() - ols.predict(&pt).unwrap()).abs();
            assert!(diff < 1e-6, "{diff}");
        }
    }

    #[test]
    fn radius_expands_until_supported() {
        // one support near the query, the rest far away
        let xs = [0.0, 0.9, 0.92, 0.94, 0.96, 0.98, 1.0];
        let y: Vec<f64> = xs.iter().map(|x| x * 2.0).collect();
        let x = DMatrix::from_column_slice(7, 1, &xs);
        let opts = MlsOptions { radius: Some(0.1), min_support: Some(6), ..MlsOptions::default() };
        let model = fit_mls(&x, &y, &opts).unwrap();
        let pred = model.predict_detail(&[0.01]).unwrap();
        assert!(pred.radius > 0.1);
        assert!(pred.supports >= 6);
        assert!((pred.value - 0.02).abs() < 1e-8);
        let (_, stats) = model.predict_rows(&DMatrix::from_column_slice(2, 1, &[0.01, 0.95])).unwrap();
        assert_eq!(stats.expanded, 1);

        let small = DMatrix::from_column_slice(5, 1, &xs[..5]);
        assert_eq!(fit_mls(&small, &y[..5], &opts), Err(SurrogateError::NoSupport { found: 5, required: 6 }));
    }

    #[test]
    fn batch_matches_pointwise() {
        let x = random_unit(300, 4, 8);
        let y: Vec<f64> = (0..300).map(|i| (x[(i, 0)] * 4.0).cos() + x[(i, 1)] * x[(i, 2)] + x[(i, 3)]).collect();
        let model = fit_mls(&x, &y, &MlsOptions::default()).unwrap();
        let q = random_unit(300, 4, 9);
        let (batch, stats) = model.predict_rows(&q).unwrap();
        assert_eq!((stats.evaluations, stats.regularized), (300, 0));
        for i in 0..300 {
            let pt: Vec<f64> = (0..4).map(|d| q[(i, d)]).collect();
            let single = model.predict(&pt).unwrap();
            assert!((batch[i] - single).abs() < 1e-9 * (1.0 + single.abs()));
        }
    }

    #[test]
    fn degenerate_dimension_regularized() {
        let mut x = random_unit(40, 2, 10);
        x.column_mut(1).fill(0.0);
        let y: Vec<f64> = (0..40).map(|i| x[(i, 0)]).collect();
        let model = fit_mls(&x, &y, &MlsOptions::default()).unwrap();
        let pred = model.predict_detail(&[0.3, 0.0]).unwrap();
        assert!(pred.regularized);
        assert!((pred.value - 0.3).abs() < 1e-6);
        let (_, stats) = model.predict_rows(&random_unit(5, 2, 11).map(|v| v * 0.0 + 0.5)).unwrap();
        assert_eq!(stats.regularized, 5);
    }

    #[test]
    fn rejects_bad_input() {
        let x = DMatrix::from_column_slice(3, 1, &[0.0, 0.5, 2.0]);
        assert!(fit_mls(&x, &[1.0; 3], &MlsOptions::default()).is_err());
        let x = DMatrix::from_column_slice(3, 1, &[0.0, 0.5, 1.0]);
        assert!(fit_mls(&x, &[1.0; 3], &MlsOptions { radius: Some(0.0), ..MlsOptions::default() }).is_err());
        let model = fit_mls(&x, &[1.0; 3], &MlsOptions::default()).unwrap();
        assert!(model.predict(&[0.1, 0.2]).is_err());
        assert!(model.predict(&[f64::NAN]).is_err());
    }
}
