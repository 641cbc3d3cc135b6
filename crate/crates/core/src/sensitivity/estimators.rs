use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrices::SampleMatrices;
use super::SensitivityError;

/// Total variance below which indices are undefined.
pub const MIN_VARIANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Jansen,
    Saltelli,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Jansen => "jansen",
            Estimator::Saltelli => "saltelli",
        })
    }
}

impl FromStr for Estimator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jansen" => Ok(Estimator::Jansen),
            "saltelli" => Ok(Estimator::Saltelli),
            other => Err(format!("unknown estimator `{other}` (expected jansen or saltelli)")),
        }
    }
}

/// Model outputs on `a`, `b` and each `ab[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSet {
    pub f_a: Vec<f64>,
    pub f_b: Vec<f64>,
    pub f_ab: Vec<Vec<f64>>,
}

impl EvalSet {
    pub fn new(f_a: Vec<f64>, f_b: Vec<f64>, f_ab: Vec<Vec<f64>>) -> Result<Self, SensitivityError> {
        let n = f_a.len();
        if n == 0 || f_b.len() != n || f_ab.iter().any(|v| v.len() != n) {
            return Err(SensitivityError::LengthMismatch);
        }
        if f_a.iter().chain(&f_b).chain(f_ab.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(SensitivityError::NonFiniteOutput);
        }
        Ok(Self { f_a, f_b, f_ab })
    }

    /// Split outputs laid out as in [`SampleMatrices::stacked`].
    pub fn from_stacked(values: &[f64], n: usize, k: usize) -> Result<Self, SensitivityError> {
        if values.len() != n * (2 + k) {
            return Err(SensitivityError::LengthMismatch);
        }
        let mut blocks = values.chunks_exact(n).map(<[f64]>::to_vec);
        let f_a = blocks.next().unwrap_or_default();
        let f_b = blocks.next().unwrap_or_default();
        Self::new(f_a, f_b, blocks.collect())
    }

    pub fn from_fn(matrices: &SampleMatrices, f: impl Fn(&[f64]) -> f64) -> Result<Self, SensitivityError> {
        let k = matrices.k();
        let eval = |m: &nalgebra::DMatrix<f64>| -> Vec<f64> {
            let mut row = vec![0.0; k];
            (0..m.nrows())
                .map(|i| {
                    for (d, v) in row.iter_mut().enumerate() {
                        *v = m[(i, d)];
                    }
                    f(&row)
                })
                .collect()
        };
        Self::new(eval(&matrices.a), eval(&matrices.b), matrices.ab.iter().map(eval).collect())
    }

    pub fn n(&self) -> usize {
        self.f_a.len()
    }

    pub fn k(&self) -> usize {
        self.f_ab.len()
    }

    /// Mean over the pooled `f_a` and `f_b` values.
    pub fn mean(&self) -> f64 {
        self.f_a.iter().chain(&self.f_b).sum::<f64>() / (2 * self.n()) as f64
    }

    /// Variance over the pooled `f_a` and `f_b` values.
    pub fn variance(&self) -> f64 {
        let f0 = self.mean();
        self.f_a.iter().chain(&self.f_b).map(|v| (v - f0) * (v - f0)).sum::<f64>() / (2 * self.n()) as f64
    }

    fn checked_variance(&self) -> Result<f64, SensitivityError> {
        let v = self.variance();
        if v < MIN_VARIANCE {
            Err(SensitivityError::ZeroVariance { variance: v })
        } else {
            Ok(v)
        }
    }
}

pub fn first_order_indices(evals: &EvalSet, estimator: Estimator) -> Result<Vec<f64>, SensitivityError> {
    let v = evals.checked_variance()?;
    let n = evals.n() as f64;
    let f0 = evals.mean();
    Ok(evals
        .f_ab
        .iter()
        .map(|f_abi| match estimator {
            Estimator::Jansen => {
                let s: f64 = evals.f_b.iter().zip(f_abi).map(|(b, ab)| (b - ab) * (b - ab)).sum();
                1.0 - s / (2.0 * n) / v
            }
            Estimator::Saltelli => {
                let s: f64 = evals
                    .f_b
                    .iter()
                    .zip(f_abi)
                    .zip(&evals.f_a)
                    .map(|((b, ab), a)| (b - f0) * ((ab - f0) - (a - f0)))
                    .sum();
                s / n / v
            }
        })
        .collect())
}

pub fn total_effect_indices(evals: &EvalSet, estimator: Estimator) -> Result<Vec<f64>, SensitivityError> {
    let v = evals.checked_variance()?;
    let n = evals.n() as f64;
    let f0 = evals.mean();
    Ok(evals
        .f_ab
        .iter()
        .map(|f_abi| match estimator {
            Estimator::Jansen => {
                let s: f64 = evals.f_a.iter().zip(f_abi).map(|(a, ab)| (a - ab) * (a - ab)).sum();
                s / (2.0 * n) / v
            }
            Estimator::Saltelli => {
                let s: f64 = evals.f_a.iter().zip(f_abi).map(|(a, ab)| (a - f0) * ((a - f0) - (ab - f0))).sum();
                s / n / v
            }
        })
        .collect())
}

/// Indices with `|value|` below this are indistinguishable from zero at `n` samples.
pub fn noise_floor(n: usize) -> f64 {
    3.0 / (n as f64).sqrt()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::sensitivity::matrices::build_sample_matrices;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TOL: f64 = 0.01;

    pub(crate) fn ishigami(x: &[f64]) -> f64 {
        let (a, b) = (7.0, 0.1);
        x[0].sin() + a * x[1].sin().powi(2) + b * x[2].powi(4) * x[0].sin()
    }

    pub(crate) fn g_function(coeffs: &[f64]) -> impl Fn(&[f64]) -> f64 + '_ {
        move |x: &[f64]| x.iter().zip(coeffs).map(|(xi, a)| ((4.0 * xi - 2.0).abs() + a) / (1.0 + a)).product()
    }

    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let n = 2000;
        let h = (hi - lo) / n as f64;
        let inner: f64 = (1..n).map(|i| f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(lo) + f(hi) + inner) * h / 3.0
    }

    /// Closed-form decomposition of the Ishigami function with a = 7, b = 0.1:
    /// returns (S, ST).
    pub(crate) fn ishigami_oracle() -> ([f64; 3], [f64; 3]) {
        let (a, b) = (7.0f64, 0.1f64);
        let pi4 = PI.powi(4);
        let pi8 = PI.powi(8);
        let v = a * a / 8.0 + b * pi4 / 5.0 + b * b * pi8 / 18.0 + 0.5;
        let v1 = 0.5 * (1.0 + b * pi4 / 5.0).powi(2);
        let v2 = a * a / 8.0;
        let v13 = b * b * pi8 * (1.0 / 18.0 - 1.0 / 50.0);

        // quadrature cross-check of the closed-form partial variances
        let mean = |f: &dyn Fn(f64) -> f64| simpson(f, -PI, PI) / (2.0 * PI);
        let x4 = mean(&|x: f64| x.powi(4));
        let sin2 = mean(&|x: f64| x.sin().powi(2));
        let cond1 = |x1: f64| x1.sin() * (1.0 + b * x4) + a * sin2;
        let f0 = mean(&cond1);
        let v1_quad = mean(&|x1| (cond1(x1) - f0).powi(2));
        let v2_quad = mean(&|x2: f64| (a * x2.sin().powi(2) - a * sin2).powi(2));
        let v3_cond = mean(&|x3: f64| (b * (x3.powi(4) - x4)).powi(2)) * sin2;
        assert!((v1 - v1_quad).abs() < 1e-9 * v1, "{v1} vs {v1_quad}");
        assert!((v2 - v2_quad).abs() < 1e-9 * v2);
        assert!((v13 - v3_cond).abs() < 1e-9 * v13, "{v13} vs {v3_cond}");

        ([v1 / v, v2 / v, 0.0], [(v1 + v13) / v, v2 / v, v13 / v])
    }

    fn g_oracle(coeffs: &[f64]) -> Vec<f64> {
        let partial: Vec<f64> = coeffs.iter().map(|a| 1.0 / (3.0 * (1.0 + a).powi(2))).collect();
        let v = partial.iter().map(|p| 1.0 + p).product::<f64>() - 1.0;
        partial.iter().map(|p| p / v).collect()
    }

    fn estimate(f: impl Fn(&[f64]) -> f64, bounds: &[(f64, f64)], n: usize, est: Estimator) -> (Vec<f64>, Vec<f64>) {
        let m = build_sample_matrices(n, bounds, 0).unwrap();
        let evals = EvalSet::from_fn(&m, f).unwrap();
        (first_order_indices(&evals, est).unwrap(), total_effect_indices(&evals, est).unwrap())
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64, what: &str) {
        for (i, (g, w)) in got.iter().zip(want).enumerate() {
            assert!((g - w).abs() <= tol, "{what}[{i}]: {g} vs {w}");
        }
    }

    #[test]
    fn oracle_values() {
        let (s, st) = ishigami_oracle();
        assert_close(&s, &[0.3139, 0.4424, 0.0], 5e-5, "S");
        assert_close(&st, &[0.5576, 0.4424, 0.2437], 5e-5, "ST");
    }

    #[test]
    fn single_factor() {
        let (s, st) = estimate(|x| x[0], &[(0.0, 1.0); 2], 1 << 14, Estimator::Jansen);
        assert_close(&s, &[1.0, 0.0], TOL, "S");
        assert_close(&st, &[1.0, 0.0], TOL, "ST");
    }

    #[test]
    fn additive_split() {
        for est in [Estimator::Jansen, Estimator::Saltelli] {
            let (s, st) = estimate(|x| x[0] + x[1], &[(0.0, 1.0); 2], 1 << 14, est);
            assert_close(&s, &[0.5, 0.5], TOL, "S");
            assert_close(&st, &s, TOL, "ST vs S");
        }
    }

    #[test]
    fn ishigami_jansen() {
        let (s_ref, st_ref) = ishigami_oracle();
        let (s, st) = estimate(ishigami, &[(-PI, PI); 3], 1 << 15, Estimator::Jansen);
        assert_close(&s, &s_ref, TOL, "S");
        assert_close(&st, &st_ref, TOL, "ST");
    }

    #[test]
    fn estimators_agree() {
        let coeffs = [0.0, 1.0, 4.5, 9.0, 99.0, 99.0, 99.0, 99.0];
        type Case<'a> = (Box<dyn Fn(&[f64]) -> f64 + 'a>, Vec<(f64, f64)>);
        let cases: [Case; 2] =
            [(Box::new(ishigami), vec![(-PI, PI); 3]), (Box::new(g_function(&coeffs)), vec![(0.0, 1.0); 8])];
        for (f, bounds) in cases {
            let (sj, stj) = estimate(&f, &bounds, 1 << 15, Estimator::Jansen);
            let (ss, sts) = estimate(&f, &bounds, 1 << 15, Estimator::Saltelli);
            assert_close(&sj, &ss, 2.0 * TOL, "S");
            assert_close(&stj, &sts, 2.0 * TOL, "ST");
        }
        let (s, _) = estimate(g_function(&coeffs), &[(0.0, 1.0); 8], 1 << 15, Estimator::Jansen);
        assert_close(&s, &g_oracle(&coeffs), TOL, "g S");
    }

    #[test]
    fn error_shrinks_with_samples() {
        let (s_ref, st_ref) = ishigami_oracle();
        let error = |n: usize| {
            let (s, st) = estimate(ishigami, &[(-PI, PI); 3], n, Estimator::Jansen);
            s.iter().zip(&s_ref).chain(st.iter().zip(&st_ref)).map(|(a, b)| (a - b).abs()).sum::<f64>()
        };
        let (coarse, fine) = (error(1 << 11), error(1 << 13));
        assert!(coarse >= 1.5 * fine, "{coarse} vs {fine}");
    }

    #[test]
    fn constant_output_has_zero_variance() {
        let m = build_sample_matrices(64, &[(0.0, 1.0); 2], 0).unwrap();
        let evals = EvalSet::from_fn(&m, |_| 3.0).unwrap();
        for est in [Estimator::Jansen, Estimator::Saltelli] {
            assert!(matches!(first_order_indices(&evals, est), Err(SensitivityError::ZeroVariance { .. })));
            assert!(matches!(total_effect_indices(&evals, est), Err(SensitivityError::ZeroVariance { .. })));
        }
    }

    #[test]
    fn pooled_moments_and_layout() {
        let evals = EvalSet::new(vec![1.0, 3.0], vec![5.0, 7.0], vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(evals.mean(), 4.0);
        assert_eq!(evals.variance(), 5.0);
        let stacked = EvalSet::from_stacked(&[1.0, 3.0, 5.0, 7.0, 0.0, 0.0], 2, 1).unwrap();
        assert_eq!(stacked, evals);
        assert!(EvalSet::new(vec![1.0], vec![], vec![]).is_err());
        assert!(EvalSet::new(vec![f64::NAN], vec![1.0], vec![]).is_err());
        assert_eq!(noise_floor(16), 0.75);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn indices_invariant_under_affine_output_maps(a in 0.1f64..100.0, neg in any::<bool>(), b in -100.0f64..100.0) {
            let a = if neg { -a } else { a };
            let m = build_sample_matrices(1 << 10, &[(-PI, PI); 3], 0).unwrap();
            let base = EvalSet::from_fn(&m, ishigami).unwrap();
            let mapped = EvalSet::from_fn(&m, |x| a * ishigami(x) + b).unwrap();
            for est in [Estimator::Jansen, Estimator::Saltelli] {
                for (u, v) in first_order_indices(&base, est).unwrap().iter().zip(first_order_indices(&mapped, est).unwrap()) {
                    prop_assert!((u - v).abs() < 1e-10, "{:?} S {} vs {}", est, u, v);
                }
                for (u, v) in total_effect_indices(&base, est).unwrap().iter().zip(total_effect_indices(&mapped, est).unwrap()) {
                    prop_assert!((u - v).abs() < 1e-10, "{:?} ST {} vs {}", est, u, v);
                }
            }
        }

        #[test]
        fn total_effect_dominates_first_order(c in proptest::collection::vec(-3.0f64..3.0, 4)) {
            let f = |x: &[f64]| c[0] * x[0] + c[1] * x[1] * x[1] + c[2] * x[0] * x[2] + c[3] * (3.0 * x[1] * x[2]).sin();
            let m = build_sample_matrices(1 << 13, &[(0.0, 1.0); 3], 0).unwrap();
            let evals = EvalSet::from_fn(&m, f).unwrap();
            prop_assume!(evals.variance() > 1e-6);
            for est in [Estimator::Jansen, Estimator::Saltelli] {
                let s = first_order_indices(&evals, est).unwrap();
                let st = total_effect_indices(&evals, est).unwrap();
                for (si, sti) in s.iter().zip(&st) {
                    prop_assert!(*sti >= si - 2.0 * TOL, "{:?}: ST {} < S {}", est, sti, si);
                }
            }
        }
    }
}
