use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Regressor family. The MLS surrogate uses the quadratic basis without
/// mixed terms, evaluated locally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Linear,
    QuadraticNoMixed,
    FullQuadratic,
    MlsQuadratic,
}

impl BasisKind {
    pub const ALL: [BasisKind; 4] =
        [BasisKind::Linear, BasisKind::QuadraticNoMixed, BasisKind::FullQuadratic, BasisKind::MlsQuadratic];

    /// Number of regression coefficients for `k` inputs.
    pub fn n_terms(self, k: usize) -> usize {
        match self {
            BasisKind::Linear => 1 + k,
            BasisKind::QuadraticNoMixed | BasisKind::MlsQuadratic => 1 + 2 * k,
            BasisKind::FullQuadratic => 1 + 2 * k + k * k.saturating_sub(1) / 2,
        }
    }

    /// Short name used on the command line and in file names.
    pub fn short_name(self) -> &'static str {
        match self {
            BasisKind::Linear => "linear",
            BasisKind::QuadraticNoMixed => "quad",
            BasisKind::FullQuadratic => "full",
            BasisKind::MlsQuadratic => "mls",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisKind::Linear => "Linear regression",
            BasisKind::QuadraticNoMixed => "Quadratic without mixed terms",
            BasisKind::FullQuadratic => "Full quadratic regression",
            BasisKind::MlsQuadratic => "MLS",
        }
    }

    fn polynomial(self) -> BasisKind {
        match self {
            BasisKind::MlsQuadratic => BasisKind::QuadraticNoMixed,
            other => other,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for BasisKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(BasisKind::Linear),
            "quad" | "quadratic_no_mixed" => Ok(BasisKind::QuadraticNoMixed),
            "full" | "full_quadratic" => Ok(BasisKind::FullQuadratic),
            "mls" | "mls_quadratic" => Ok(BasisKind::MlsQuadratic),
            other => Err(format!("unknown surrogate `{other}` (expected linear, quad, full or mls)")),
        }
    }
}

/// Write the basis of `x` into `out`, which must hold `kind.n_terms(x.len())`
/// values. Order: `[1, x1..xk, x1²..xk², x1x2, x1x3, .., x(k-1)xk]`.
pub fn fill_basis(x: &[f64], kind: BasisKind, out: &mut [f64]) {
    let k = x.len();
    let kind = kind.polynomial();
    debug_assert_eq!(out.len(), kind.n_terms(k));
    out[0] = 1.0;
    out[1..=k].copy_from_slice(x);
    if kind == BasisKind::Linear {
        return;
    }
    for (o, xi) in out[k + 1..=2 * k].iter_mut().zip(x) {
        *o = xi * xi;
    }
    if kind == BasisKind::FullQuadratic {
        let mut t = 2 * k + 1;
        for i in 0..k {
            for j in i + 1..k {
                out[t] = x[i] * x[j];
                t += 1;
            }
        }
    }
}

pub fn build_basis(x: &[f64], kind: BasisKind) -> Vec<f64> {
    let mut out = vec![0.0; kind.n_terms(x.len())];
    fill_basis(x, kind, &mut out);
    out
}

/// Human-readable name of each basis column, e.g. `x2^2` or `x1*x3`.
pub fn term_names(k: usize, kind: BasisKind) -> Vec<String> {
    let kind = kind.polynomial();
    let mut names = vec!["1".to_string()];
    names.extend((1..=k).map(|i| format!("x{i}")));
    if kind != BasisKind::Linear {
        names.extend((1..=k).map(|i| format!("x{i}^2")));
    }
    if kind == BasisKind::FullQuadratic {
        for i in 1..=k {
            for j in i + 1..=k {
                names.push(format!("x{i}*x{j}"));
            }
        }
    }
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_k2() {
        assert_eq!(build_basis(&[2.0, 3.0], BasisKind::FullQuadratic), [1.0, 2.0, 3.0, 4.0, 9.0, 6.0]);
        assert_eq!(build_basis(&[2.0, 3.0], BasisKind::QuadraticNoMixed), [1.0, 2.0, 3.0, 4.0, 9.0]);
        assert_eq!(build_basis(&[2.0, 3.0], BasisKind::MlsQuadratic), [1.0, 2.0, 3.0, 4.0, 9.0]);
        assert_eq!(build_basis(&[2.0, 3.0], BasisKind::Linear), [1.0, 2.0, 3.0]);
        for kind in BasisKind::ALL {
            let b = build_basis(&[0.0, 0.0], kind);
            assert_eq!(b[0], 1.0);
            assert!(b[1..].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn term_counts() {
        for k in 0..8 {
            for kind in BasisKind::ALL {
                let x: Vec<f64> = (0..k).map(|i| i as f64).collect();
                assert_eq!(build_basis(&x, kind).len(), kind.n_terms(k));
                assert_eq!(term_names(k, kind).len(), kind.n_terms(k));
            }
        }
        assert_eq!(BasisKind::FullQuadratic.n_terms(5), 21);
        assert_eq!(BasisKind::QuadraticNoMixed.n_terms(5), 11);
        assert_eq!(term_names(3, BasisKind::FullQuadratic)[7..], ["x1*x2", "x1*x3", "x2*x3"]);
    }

    #[test]
    fn names_parse() {
        for kind in BasisKind::ALL {
            assert_eq!(kind.short_name().parse::<BasisKind>().unwrap(), kind);
        }
        assert!("kriging".parse::<BasisKind>().is_err());
    }
}
