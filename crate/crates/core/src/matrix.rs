//! Dense symmetric matrices, positive-definiteness testing, weightings and
//! matrix magnitude.
//!
//! The main path factors the matrix with an unpivoted Cholesky decomposition
//! and solves `A w = 1` through the triangular factors. The magnitude is the
//! sum of the weighting. [`magnitude_via_adjugate`] computes the same number
//! as `sum(adj A) / det A` by exact cofactor expansion and exists as an
//! independent cross-check for small matrices.

use thiserror::Error;

/// Relative pivot tolerance for the Cholesky positive-definiteness test.
pub const PD_TOLERANCE: f64 = 1e-12;
/// Relative tolerance used when deciding whether a matrix is symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Maximum allowed `‖A w − 1‖_∞` for a returned weighting.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Largest dimension accepted by the cofactor-expansion oracle.
pub const ADJUGATE_MAX_DIM: usize = 8;
/// Relative determinant threshold for the cofactor-expansion oracle.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for a square matrix, got {actual}")]
    Shape { expected: usize, actual: usize },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    AsymmetricInput { row: usize, col: usize },
    #[error("matrix is not positive definite (pivot {} at step {})", .0.min_pivot, .0.failed_at.map_or(-1, |i| i as i64))]
    NotPositiveDefinite(PdCertificate),
    #[error("weighting residual {residual:e} exceeds tolerance {RESIDUAL_TOLERANCE:e}")]
    IllConditioned { residual: f64 },
    #[error("matrix is singular to working precision (det = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("dimension {n} exceeds the cofactor expansion limit of {ADJUGATE_MAX_DIM}")]
    DimensionTooLarge { n: usize },
}

/// Dense `n × n` real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, MatrixError> {
        if entries.len() != n * n {
            return Err(MatrixError::Shape {
                expected: n * n,
                actual: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Ok(SquareMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::Shape {
                    expected: n * n,
                    actual: rows.iter().map(Vec::len).sum(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    /// Builds a matrix from a generator `f(i, j)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, MatrixError> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self::new(n, entries)
    }

    pub fn empty() -> Self {
        SquareMatrix {
            n: 0,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        SquareMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Returns `PᵀAP` for the permutation `perm`, i.e. entry `(i, j)` of the
    /// result is `A[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must match dimension");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                entries.push(self.get(pi, pj));
            }
        }
        SquareMatrix { n, entries }
    }

    /// `A v` for a vector of length `n`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.entries[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `Aᵀ v` for a vector of length `n`.
    pub fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![0.0; self.n];
        for (i, vi) in v.iter().enumerate() {
            let row = &self.entries[i * self.n..(i + 1) * self.n];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * vi;
            }
        }
        out
    }

    /// First index pair violating symmetry, if any.
    pub fn symmetry_violation(&self) -> Option<(usize, usize)> {
        let tol = SYMMETRY_TOLERANCE * self.max_abs().max(1.0);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_violation().is_none()
    }

    fn require_symmetric(&self) -> Result<(), MatrixError> {
        match self.symmetry_violation() {
            Some((row, col)) => Err(MatrixError::AsymmetricInput { row, col }),
            None => Ok(()),
        }
    }
}

/// Outcome of the Cholesky positive-definiteness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdCertificate {
    pub is_pd: bool,
    /// Smallest pivot seen, or the first pivot at or below the threshold.
    pub min_pivot: f64,
    /// Step at which the factorization stopped, when it failed.
    pub failed_at: Option<usize>,
}

/// A solution of `A w = 1` together with its achieved residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Weighting {
    pub components: Vec<f64>,
    /// `‖A w − 1‖_∞`
    pub residual: f64,
}

impl Weighting {
    pub fn total(&self) -> f64 {
        self.components.iter().sum()
    }
}

/// Lower-triangular Cholesky factor, row-major, upper triangle zero.
struct Cholesky {
    n: usize,
    lower: Vec<f64>,
}

enum Factorization {
    Complete(Cholesky, PdCertificate),
    Failed(PdCertificate),
}

fn factor(a: &SquareMatrix) -> Factorization {
    let n = a.n;
    let max_diag = (0..n).map(|i| a.get(i, i)).fold(1.0_f64, f64::max);
    let threshold = PD_TOLERANCE * max_diag;
    let mut l = vec![0.0; n * n];
    let mut min_pivot = f64::INFINITY;

    for j in 0..n {
        let (row_j, _) = l.split_at(j * n + j);
        let row_j = &row_j[j * n..];
        let pivot = a.get(j, j) - row_j.iter().map(|x| x * x).sum::<f64>();
        min_pivot = min_pivot.min(pivot);
        if pivot <= threshold || !pivot.is_finite() {
            return Factorization::Failed(PdCertificate {
                is_pd: false,
                min_pivot: pivot,
                failed_at: Some(j),
            });
        }
        let diag = pivot.sqrt();
        l[j * n + j] = diag;
        for i in (j + 1)..n {
            let (head, tail) = l.split_at_mut(i * n);
            let row_j = &head[j * n..j * n + j];
            let row_i = &mut tail[..n];
            let dot: f64 = row_i[..j].iter().zip(row_j).map(|(x, y)| x * y).sum();
            row_i[j] = (a.get(i, j) - dot) / diag;
        }
    }

    let cert = PdCertificate {
        is_pd: true,
        min_pivot: if n == 0 { 1.0 } else { min_pivot },
        failed_at: None,
    };
    Factorization::Complete(Cholesky { n, lower: l }, cert)
}

impl Cholesky {
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let l = &self.lower;
        // L y = b
        let mut y = rhs.to_vec();
        for i in 0..n {
            let row = &l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / l[i * n + i];
        }
        // Lᵀ x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        y
    }
}

fn residual_against_ones(a: &SquareMatrix, w: &[f64]) -> f64 {
    a.mul_vec(w)
        .iter()
        .fold(0.0, |m, x| m.max((x - 1.0).abs()))
}

/// Tests positive definiteness with an unpivoted Cholesky factorization.
///
/// Every pivot must exceed `1e-12 · max(1, max diagonal)`. The empty matrix is
/// positive definite.
pub fn check_positive_definite(a: &SquareMatrix) -> Result<PdCertificate, MatrixError> {
    a.require_symmetric()?;
    Ok(match factor(a) {
        Factorization::Complete(_, cert) | Factorization::Failed(cert) => cert,
    })
}

/// Solves `A w = 1` for a symmetric positive definite matrix.
pub fn solve_weighting(a: &SquareMatrix) -> Result<Weighting, MatrixError> {
    a.require_symmetric()?;
    let chol = match factor(a) {
        Factorization::Complete(chol, _) => chol,
        Factorization::Failed(cert) => return Err(MatrixError::NotPositiveDefinite(cert)),
    };
    let components = chol.solve(&vec![1.0; a.n]);
    let residual = residual_against_ones(a, &components);
    if !(residual <= RESIDUAL_TOLERANCE) {
        return Err(MatrixError::IllConditioned { residual });
    }
    Ok(Weighting {
        components,
        residual,
    })
}

/// Sum of the weighting of a symmetric positive definite matrix. The empty
/// matrix has magnitude 0.
pub fn matrix_magnitude(a: &SquareMatrix) -> Result<f64, MatrixError> {
    Ok(solve_weighting(a)?.total())
}

/// `sum(adj A) / det A` by exact cofactor expansion, for `n ≤ 8`.
///
/// Shares no code with the Cholesky path.
pub fn magnitude_via_adjugate(a: &SquareMatrix) -> Result<f64, MatrixError> {
    let n = a.n;
    if n > ADJUGATE_MAX_DIM {
        return Err(MatrixError::DimensionTooLarge { n });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let all_rows: Vec<usize> = (0..n).collect();
    let all_cols: u32 = (1u32 << n) - 1;
    let det = laplace_det(a, &all_rows, all_cols);
    let scale = a.max_abs().max(f64::MIN_POSITIVE).powi(n as i32);
    if det.abs() <= SINGULAR_TOLERANCE * scale {
        return Err(MatrixError::SingularMatrix { det });
    }

    // adj(A)[j][i] = (-1)^(i+j) det(minor removing row i, col j); the sum
    // over all entries does not care about the transpose.
    let mut adj_sum = 0.0;
    for i in 0..n {
        let rows: Vec<usize> = all_rows.iter().copied().filter(|&r| r != i).collect();
        for j in 0..n {
            let cols = all_cols & !(1u32 << j);
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj_sum += sign * laplace_det(a, &rows, cols);
        }
    }
    Ok(adj_sum / det)
}

/// Determinant of the submatrix with the given rows and column bitmask,
/// expanding along the first listed row.
fn laplace_det(a: &SquareMatrix, rows: &[usize], cols: u32) -> f64 {
    match rows.split_first() {
        None => 1.0,
        Some((&r, rest)) => {
            let mut det = 0.0;
            let mut sign = 1.0;
            let mut remaining = cols;
            while remaining != 0 {
                let c = remaining.trailing_zeros() as usize;
                remaining &= remaining - 1;
                let entry = a.get(r, c);
                if entry != 0.0 {
                    det += sign * entry * laplace_det(a, rest, cols & !(1u32 << c));
                }
                sign = -sign;
            }
            det
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(u: f64) -> SquareMatrix {
        let z = (-u).exp();
        SquareMatrix::from_rows(&[vec![1.0, z], vec![z, 1.0]]).unwrap()
    }

    #[test]
    fn empty_matrix_is_pd_with_zero_magnitude() {
        let e = SquareMatrix::empty();
        assert!(check_positive_definite(&e).unwrap().is_pd);
        assert_eq!(matrix_magnitude(&e).unwrap(), 0.0);
        assert_eq!(magnitude_via_adjugate(&e).unwrap(), 0.0);
    }

    #[test]
    fn identity_cases() {
        let id = SquareMatrix::identity(3);
        assert!(check_positive_definite(&id).unwrap().is_pd);
        let w = solve_weighting(&id).unwrap();
        assert_eq!(w.components, vec![1.0, 1.0, 1.0]);
        assert_eq!(w.residual, 0.0);
        assert_eq!(matrix_magnitude(&SquareMatrix::identity(5)).unwrap(), 5.0);
        assert!((magnitude_via_adjugate(&SquareMatrix::identity(2)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn all_ones_is_not_pd() {
        let ones = SquareMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let cert = check_positive_definite(&ones).unwrap();
        assert!(!cert.is_pd);
        assert_eq!(cert.failed_at, Some(1));
        assert!(cert.min_pivot.abs() < 1e-15);
        assert!(matches!(
            solve_weighting(&ones),
            Err(MatrixError::NotPositiveDefinite(_))
        ));
        assert!(matches!(
            magnitude_via_adjugate(&ones),
            Err(MatrixError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn two_point_weighting() {
        let a = two_point(1.0);
        let expected = 1.0 / (1.0 + (-1.0f64).exp());
        let w = solve_weighting(&a).unwrap();
        for c in &w.components {
            assert!((c - expected).abs() < 1e-15);
        }
        let mg = matrix_magnitude(&a).unwrap();
        assert!((mg - 1.4621171572600098).abs() < 1e-12);
        assert!((magnitude_via_adjugate(&a).unwrap() - mg).abs() < 1e-10);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let a = SquareMatrix::from_rows(&[vec![1.0, 0.5], vec![0.2, 1.0]]).unwrap();
        assert_eq!(
            check_positive_definite(&a),
            Err(MatrixError::AsymmetricInput { row: 0, col: 1 })
        );
        assert!(matches!(
            matrix_magnitude(&a),
            Err(MatrixError::AsymmetricInput { .. })
        ));
    }

    #[test]
    fn shape_and_dimension_errors() {
        assert!(matches!(
            SquareMatrix::new(2, vec![1.0; 3]),
            Err(MatrixError::Shape { .. })
        ));
        assert!(matches!(
            SquareMatrix::new(1, vec![f64::NAN]),
            Err(MatrixError::NonFinite { .. })
        ));
        assert_eq!(
            magnitude_via_adjugate(&SquareMatrix::identity(9)),
            Err(MatrixError::DimensionTooLarge { n: 9 })
        );
    }

    #[test]
    fn negative_definite_reports_first_pivot() {
        let a = SquareMatrix::from_rows(&[vec![-1.0]]).unwrap();
        let cert = check_positive_definite(&a).unwrap();
        assert!(!cert.is_pd);
        assert_eq!(cert.min_pivot, -1.0);
        assert_eq!(cert.failed_at, Some(0));
    }

    #[test]
    fn cofactor_determinant_known_values() {
        let a = SquareMatrix::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        let rows = [0, 1, 2];
        assert!((laplace_det(&a, &rows, 0b111) - 4.0).abs() < 1e-14);
        // inverse of the tridiagonal matrix sums to 5
        assert!((magnitude_via_adjugate(&a).unwrap() - 5.0).abs() < 1e-13);
        assert!((matrix_magnitude(&a).unwrap() - 5.0).abs() < 1e-13);
    }
}
