use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::basis::{fill_basis, term_names, BasisKind};
use super::{FitMetrics, SurrogateError};

/// Columns whose QR pivot falls below this fraction of the largest pivot are
/// treated as linearly dependent on the preceding columns.
const RANK_TOLERANCE: f64 = 1e-10;

/// Global polynomial regressor `y = beta · basis(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyModel {
    pub kind: BasisKind,
    pub k: usize,
    pub beta: Vec<f64>,
}

impl PolyModel {
    pub fn new(kind: BasisKind, k: usize, beta: Vec<f64>) -> Result<Self, SurrogateError> {
        if kind == BasisKind::MlsQuadratic {
            return Err(SurrogateError::InvalidInput("MLS is not a global polynomial".into()));
        }
        let k_r = kind.n_terms(k);
        if beta.len() != k_r {
            return Err(SurrogateError::DimensionMismatch { expected: k_r, got: beta.len() });
        }
        Ok(Self { kind, k, beta })
    }

    pub fn k_r(&self) -> usize {
        self.beta.len()
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64, SurrogateError> {
        if x.len() != self.k {
            return Err(SurrogateError::DimensionMismatch { expected: self.k, got: x.len() });
        }
        let mut p = vec![0.0; self.k_r()];
        fill_basis(x, self.kind, &mut p);
        Ok(dot(&self.beta, &p))
    }

    /// Predict every row of `x`.
    pub fn predict_rows(&self, x: &DMatrix<f64>) -> Result<Vec<f64>, SurrogateError> {
        if x.ncols() != self.k {
            return Err(SurrogateError::DimensionMismatch { expected: self.k, got: x.ncols() });
        }
        let mut row = vec![0.0; self.k];
        let mut p = vec![0.0; self.k_r()];
        Ok((0..x.nrows())
            .map(|i| {
                for (d, v) in row.iter_mut().enumerate() {
                    *v = x[(i, d)];
                }
                fill_basis(&row, self.kind, &mut p);
                dot(&self.beta, &p)
            })
            .collect())
    }
}

pub fn predict_poly(model: &PolyModel, x: &[f64]) -> Result<f64, SurrogateError> {
    model.predict(x)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Design matrix with one basis row per sample.
pub fn design_matrix(x: &DMatrix<f64>, kind: BasisKind) -> DMatrix<f64> {
    let k = x.ncols();
    let k_r = kind.n_terms(k);
    let mut row = vec![0.0; k];
    let mut p = vec![0.0; k_r];
    let mut out = DMatrix::zeros(x.nrows(), k_r);
    for i in 0..x.nrows() {
        for (d, v) in row.iter_mut().enumerate() {
            *v = x[(i, d)];
        }
        fill_basis(&row, kind, &mut p);
        for (j, v) in p.iter().enumerate() {
            out[(i, j)] = *v;
        }
    }
    out
}

/// Least-squares fit through a Householder QR factorization of the design
/// matrix.
pub fn fit_ols(x: &DMatrix<f64>, y: &[f64], kind: BasisKind) -> Result<(PolyModel, FitMetrics), SurrogateError> {
    if kind == BasisKind::MlsQuadratic {
        return Err(SurrogateError::InvalidInput("use fit_mls for the MLS surrogate".into()));
    }
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(SurrogateError::DimensionMismatch { expected: n, got: y.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(SurrogateError::InvalidInput("samples must be finite".into()));
    }
    let k_r = kind.n_terms(k);
    if n < k_r {
        return Err(SurrogateError::Underdetermined { n, k_r });
    }

    let p = design_matrix(x, kind);
    let qr = p.clone().qr();
    let r = qr.r();
    let pivots: Vec<f64> = (0..k_r).map(|j| r[(j, j)].abs()).collect();
    let largest = pivots.iter().copied().fold(0.0, f64::max);
    let dependent: Vec<usize> = (0..k_r).filter(|&j| pivots[j] <= RANK_TOLERANCE * largest).collect();
    if largest == 0.0 || !dependent.is_empty() {
        let names = term_names(k, kind);
        let columns = if largest == 0.0 { (0..k_r).collect() } else { dependent };
        return Err(SurrogateError::RankDeficient { columns: columns.into_iter().map(|j| names[j].clone()).collect() });
    }

    let mut qty = DVector::from_column_slice(y);
    qr.q_tr_mul(&mut qty);
    let rhs = qty.rows(0, k_r).into_owned();
    let beta = r.solve_upper_triangular(&rhs).ok_or_else(|| SurrogateError::RankDeficient { columns: vec![] })?;

    let yhat = &p * &beta;
    let metrics = FitMetrics::compute(y, yhat.as_slice(), k_r);
    Ok((PolyModel { kind, k, beta: beta.as_slice().to_vec() }, metrics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{RngExt, SeedableRng};

    fn column(values: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(values.len(), 1, values)
    }

    fn random_design(n: usize, k: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, k, |_, _| rng.random::<f64>())
    }

    #[test]
    fn line_recovered() {
        let x = column(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let (m, fit) = fit_ols(&x, &y, BasisKind::Linear).unwrap();
        assert!((m.beta[0] - 1.0).abs() < 1e-12 && (m.beta[1] - 2.0).abs() < 1e-12, "{:?}", m.beta);
        assert!((fit.r2.unwrap() - 1.0).abs() < 1e-12);
        assert!((m.predict(&[10.0]).unwrap() - 21.0).abs() < 1e-11);
    }

    #[test]
    fn parabola_recovered() {
        let x = column(&[-2.0, -1.0, 0.0, 0.5, 1.0, 3.0]);
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        let (m, fit) = fit_ols(&x, &y, BasisKind::QuadraticNoMixed).unwrap();
        assert!(m.beta[0].abs() < 1e-12 && m.beta[1].abs() < 1e-12 && (m.beta[2] - 1.0).abs() < 1e-12);
        assert!((fit.r2.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predict_examples() {
        let m = PolyModel::new(BasisKind::Linear, 1, vec![1.0, 2.0]).unwrap();
        assert_eq!(predict_poly(&m, &[3.0]).unwrap(), 7.0);
        let zero = PolyModel::new(BasisKind::FullQuadratic, 3, vec![0.0; 10]).unwrap();
        assert_eq!(zero.predict(&[1.5, -2.0, 7.0]).unwrap(), 0.0);
        assert_eq!(zero.predict(&[1.0]), Err(SurrogateError::DimensionMismatch { expected: 3, got: 1 }));
        assert!(PolyModel::new(BasisKind::Linear, 2, vec![1.0]).is_err());
    }

    #[test]
    fn underdetermined() {
        let x = random_design(5, 2, 1);
        let err = fit_ols(&x, &[1.0; 5], BasisKind::FullQuadratic).unwrap_err();
        assert_eq!(err, SurrogateError::Underdetermined { n: 5, k_r: 6 });
    }

    #[test]
    fn collinear_columns_named() {
        let mut x = random_design(20, 3, 2);
        for i in 0..20 {
            x[(i, 2)] = x[(i, 0)];
        }
        let y: Vec<f64> = (0..20).map(|i| i as f64).collect();
        match fit_ols(&x, &y, BasisKind::Linear) {
            Err(SurrogateError::RankDeficient { columns }) => assert_eq!(columns, ["x3"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_response_fits_without_r2() {
        let x = random_design(10, 2, 3);
        let (m, fit) = fit_ols(&x, &[4.0; 10], BasisKind::Linear).unwrap();
        assert!((m.beta[0] - 4.0).abs() < 1e-12);
        assert_eq!(fit.r2, None);
    }

    #[test]
    fn residuals_orthogonal_and_r2_nested() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for trial in 0..20 {
            let x = random_design(60, 4, 100 + trial);
            let y: Vec<f64> = (0..60)
                .map(|i| {
                    let r = x.row(i);
                    3.0 + r[0] * r[1] - 2.0 * r[2].powi(2) + r[3].sin() + 0.1 * rng.random::<f64>()
                })
                .collect();
            let mut r2 = Vec::new();
            for kind in [BasisKind::Linear, BasisKind::QuadraticNoMixed, BasisKind::FullQuadratic] {
                let (m, fit) = fit_ols(&x, &y, kind).unwrap();
                let p = design_matrix(&x, kind);
                let resid = DVector::from_column_slice(&y) - &p * DVector::from_column_slice(&m.beta);
                let ortho = p.transpose() * resid;
                let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(ortho.amax() <= 1e-8 * y_norm, "{kind:?}: {}", ortho.amax());
                let fit_r2 = fit.r2.unwrap();
                assert!(fit.r2_adj.unwrap() <= fit_r2);
                r2.push(fit_r2);
            }
            assert!(r2[0] <= r2[1] + 1e-12 && r2[1] <= r2[2] + 1e-12, "{r2:?}");
        }
    }

    proptest! {
        #[test]
        fn predict_linear_in_beta(
            b1 in proptest::collection::vec(-10.0f64..10.0, 10),
            b2 in proptest::collection::vec(-10.0f64..10.0, 10),
            a in -5.0f64..5.0, b in -5.0f64..5.0,
            x in proptest::collection::vec(-2.0f64..2.0, 3),
        ) {
            let m1 = PolyModel::new(BasisKind::FullQuadratic, 3, b1.clone()).unwrap();
            let m2 = PolyModel::new(BasisKind::FullQuadratic, 3, b2.clone()).unwrap();
            let combo: Vec<f64> = b1.iter().zip(&b2).map(|(u, v)| a * u + b * v).collect();
            let mc = PolyModel::new(BasisKind::FullQuadratic, 3, combo).unwrap();
            let lhs = mc.predict(&x).unwrap();
            let rhs = a * m1.predict(&x).unwrap() + b * m2.predict(&x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
