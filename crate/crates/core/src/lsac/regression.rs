//! Least squares with column equilibration and an SVD pseudo-inverse.

use nalgebra::{DMatrix, DVector};

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    /// Numerical rank of the equilibrated design over its non-zero columns.
    pub rank: usize,
    /// Columns that are not identically zero.
    pub active_columns: usize,
}

impl LeastSquares {
    pub fn is_rank_deficient(&self) -> bool {
        self.rank < self.active_columns
    }
}

/// Minimum-norm solution of `min |X b - y|`.
///
/// Each column is divided by its root mean square before factorizing;
/// identically zero columns (matured basis instruments) are dropped and
/// get a zero coefficient.
pub fn solve(design: &DMatrix<f64>, target: &DVector<f64>) -> LeastSquares {
    let (rows, cols) = design.shape();
    let scales: Vec<f64> = (0..cols)
        .map(|j| (design.column(j).norm_squared() / rows as f64).sqrt())
        .collect();
    let active: Vec<usize> = (0..cols).filter(|&j| scales[j] > 0.0).collect();
    let mut coefficients = vec![0.0; cols];
    if active.is_empty() || rows == 0 {
        return LeastSquares {
            coefficients,
            rank: 0,
            active_columns: 0,
        };
    }

    let scaled = DMatrix::from_fn(rows, active.len(), |i, c| design[(i, active[c])] / scales[active[c]]);
    let svd = scaled.svd(true, true);
    let largest = svd.singular_values.max();
    let cutoff = RANK_TOLERANCE * largest;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let solution = svd
        .solve(target, cutoff)
        .expect("SVD computed with both singular vector sets");
    for (c, &j) in active.iter().enumerate() {
        coefficients[j] = solution[c] / scales[j];
    }
    LeastSquares {
        coefficients,
        rank,
        active_columns: active.len(),
    }
}
