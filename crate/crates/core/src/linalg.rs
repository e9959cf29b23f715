//! Dense matrix primitives: the observation matrix, sample covariance,
//! symmetric eigendecomposition and the standardize / whiten transforms.
//!
//! Matrices are backed by `nalgebra`. A [`DataMatrix`] always has rows as
//! observations and columns as features.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance used to decide whether a matrix is symmetric.
const SYMMETRY_TOL: f64 = 1e-10;

/// Largest condition number accepted by [`whiten`].
const MAX_CONDITION: f64 = 1e12;

/// Dense observation matrix: `n_rows` observations of `n_cols` features.
///
/// Always non-empty and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
}

impl DataMatrix {
    /// Builds a matrix from row-major values.
    pub fn from_row_major(n_rows: usize, n_cols: usize, values: &[f64]) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::Degenerate(format!(
                "matrix must be non-empty, got {n_rows}x{n_cols}"
            )));
        }
        if values.len() != n_rows * n_cols {
            return Err(Error::Dimension(format!(
                "{} values cannot fill a {n_rows}x{n_cols} matrix",
                values.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(n_rows, n_cols, values))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut flat = Vec::with_capacity(n_rows * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    r.len()
                )));
            }
            flat.extend_from_slice(r);
        }
        Self::from_row_major(n_rows, n_cols, &flat)
    }

    /// Wraps an existing `nalgebra` matrix, checking the invariants.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::Degenerate("matrix must be non-empty".into()));
        }
        if let Some((idx, _)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            // column-major storage
            let (row, col) = (idx % values.nrows(), idx / values.nrows());
            return Err(Error::Contract(format!(
                "non-finite entry at row {row}, column {col}"
            )));
        }
        Ok(Self { values })
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[(row, col)]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.values.row(i).iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.column(j).iter().copied().collect()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.values
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<f64> {
        self.values.transpose().as_slice().to_vec()
    }

    /// Column means.
    pub fn column_means(&self) -> Vec<f64> {
        let n = self.n_rows() as f64;
        self.values
            .column_iter()
            .map(|c| c.iter().sum::<f64>() / n)
            .collect()
    }

    /// Copy with the column means subtracted.
    pub fn centered(&self) -> DataMatrix {
        let means = self.column_means();
        let mut out = self.values.clone();
        for (j, mut col) in out.column_iter_mut().enumerate() {
            col.add_scalar_mut(-means[j]);
        }
        DataMatrix { values: out }
    }

    /// `X · a` for a direction of length `n_cols`.
    pub fn project(&self, a: &[f64]) -> Result<Vec<f64>> {
        if a.len() != self.n_cols() {
            return Err(Error::Dimension(format!(
                "direction has length {}, data has {} columns",
                a.len(),
                self.n_cols()
            )));
        }
        let z = &self.values * DVector::from_column_slice(a);
        Ok(z.as_slice().to_vec())
    }

    /// `X^T · w` for a weight vector of length `n_rows`.
    pub fn transpose_times(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.n_rows() {
            return Err(Error::Dimension(format!(
                "weight vector has length {}, data has {} rows",
                w.len(),
                self.n_rows()
            )));
        }
        let g = self.values.tr_mul(&DVector::from_column_slice(w));
        Ok(g.as_slice().to_vec())
    }
}

/// Sample covariance with the `n - 1` denominator.
pub fn covariance(x: &DataMatrix) -> Result<DMatrix<f64>> {
    let n = x.n_rows();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "covariance needs at least 2 rows, got {n}"
        )));
    }
    let c = x.centered();
    let mut s = c.values.tr_mul(&c.values) / (n as f64 - 1.0);
    symmetrize(&mut s);
    Ok(s)
}

fn symmetrize(s: &mut DMatrix<f64>) {
    let d = s.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            let m = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = m;
            s[(j, i)] = m;
        }
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// `eigenvalues` are sorted descending and column `j` of `eigenvectors`
/// pairs with `eigenvalues[j]`. Each eigenvector is signed so that its
/// largest-magnitude entry is positive (first such entry on ties).
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymEigen {
    /// Rebuilds `V · diag(λ) · V^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&self.eigenvalues));
        &self.eigenvectors * lambda * self.eigenvectors.transpose()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j).iter().copied().collect()
    }
}

fn check_symmetric(s: &DMatrix<f64>) -> Result<()> {
    if !s.is_square() {
        return Err(Error::Contract(format!(
            "matrix is {}x{}, expected square",
            s.nrows(),
            s.ncols()
        )));
    }
    if s.nrows() == 0 {
        return Err(Error::Degenerate("empty matrix".into()));
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract("matrix has non-finite entries".into()));
    }
    let scale = s.amax().max(1.0);
    let d = s.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            if (s[(i, j)] - s[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::Contract(format!(
                    "matrix is not symmetric at ({i}, {j}): {} vs {}",
                    s[(i, j)],
                    s[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

/// Full symmetric eigendecomposition (Householder tridiagonalization and
/// implicit QR), sorted descending with canonical eigenvector signs.
pub fn sym_eigen(s: &DMatrix<f64>) -> Result<SymEigen> {
    check_symmetric(s)?;
    let mut sym = s.clone();
    symmetrize(&mut sym);
    let eig = sym.symmetric_eigen();

    let d = s.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    // stable sort keeps the solver's order on exact ties
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).clone_owned();
        canonicalize_sign(v.as_mut_slice());
        eigenvectors.set_column(dst, &v);
    }
    Ok(SymEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending. Cheaper than [`sym_eigen`] for large inputs.
pub fn sym_eigenvalues(s: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(s)?;
    let mut sym = s.clone();
    symmetrize(&mut sym);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Flips `v` so that its largest-magnitude entry is positive.
pub(crate) fn canonicalize_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Centers every column and scales it to unit sample variance.
pub fn standardize(x: &DataMatrix) -> Result<DataMatrix> {
    let n = x.n_rows();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "standardize needs at least 2 rows, got {n}"
        )));
    }
    let mut out = x.centered().values;
    for (j, mut col) in out.column_iter_mut().enumerate() {
        let var = col.iter().map(|v| v * v).sum::<f64>() / (n as f64 - 1.0);
        if var <= 0.0 {
            return Err(Error::ZeroVariance { column: j });
        }
        col /= var.sqrt();
    }
    Ok(DataMatrix { values: out })
}

/// Output of [`whiten`].
#[derive(Debug, Clone)]
pub struct Whitening {
    /// Centered and whitened observations; sample covariance is the identity.
    pub data: DataMatrix,
    /// Symmetric transform `W = Σ^{-1/2}`, applied as `(x - mean) · W`.
    pub transform: DMatrix<f64>,
    pub mean: Vec<f64>,
}

impl Whitening {
    /// Maps a direction found in whitened coordinates back to a unit
    /// direction in input coordinates (`normalize(W · a)`).
    pub fn input_direction(&self, a: &[f64]) -> Vec<f64> {
        let v = &self.transform * DVector::from_column_slice(a);
        let norm = v.norm();
        v.iter().map(|x| x / norm).collect()
    }
}

/// Symmetric (ZCA) whitening using the inverse square root of the sample
/// covariance.
pub fn whiten(x: &DataMatrix) -> Result<Whitening> {
    let cov = covariance(x)?;
    let eig = sym_eigen(&cov)?;
    let max = eig.eigenvalues[0];
    let min = *eig.eigenvalues.last().unwrap();
    if max <= 0.0 || min <= 0.0 || max / min > MAX_CONDITION {
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        return Err(Error::RankDeficient { condition });
    }
    let inv_sqrt = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|l| 1.0 / l.sqrt()),
    );
    let v = &eig.eigenvectors;
    let mut transform = v * DMatrix::from_diagonal(&inv_sqrt) * v.transpose();
    symmetrize(&mut transform);

    let mean = x.column_means();
    let centered = x.centered();
    let data = DataMatrix::from_matrix(&centered.values * &transform)?;
    Ok(Whitening {
        data,
        transform,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_mat(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn covariance_two_points() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [2.0, 2.0]]).unwrap();
        let c = covariance(&x).unwrap();
        assert!(approx_mat(&c, &DMatrix::from_element(2, 2, 2.0), 1e-15));
    }

    #[test]
    fn covariance_cross() {
        let x = DataMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap();
        let c = covariance(&x).unwrap();
        let expected = DMatrix::identity(2, 2) * (2.0 / 3.0);
        assert!(approx_mat(&c, &expected, 1e-15));
    }

    #[test]
    fn covariance_constant_column_is_zero() {
        let x =
            DataMatrix::from_rows(&[[1.0, 7.0, 2.0], [3.0, 7.0, -1.0], [0.5, 7.0, 4.0]]).unwrap();
        let c = covariance(&x).unwrap();
        for k in 0..3 {
            assert_eq!(c[(1, k)], 0.0);
            assert_eq!(c[(k, 1)], 0.0);
        }
    }

    #[test]
    fn covariance_needs_two_rows() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(matches!(covariance(&x), Err(Error::Degenerate(_))));
    }

    #[test]
    fn data_matrix_rejects_nan() {
        assert!(DataMatrix::from_rows(&[[1.0, f64::NAN]]).is_err());
        assert!(DataMatrix::from_row_major(2, 2, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn eigen_identity() {
        let e = sym_eigen(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(e.eigenvalues.len(), 3);
        for l in &e.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_diagonal() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        let e = sym_eigen(&s).unwrap();
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!((e.eigenvector(0)[1] - 1.0).abs() < 1e-14);
        assert!((e.eigenvector(1)[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_two_by_two() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let e = sym_eigen(&s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        let v0 = e.eigenvector(0);
        let v1 = e.eigenvector(1);
        assert!((v0[0] - h).abs() < 1e-12 && (v0[1] - h).abs() < 1e-12);
        // (1,-1)/sqrt2: tie on magnitude, first entry carries the sign
        assert!((v1[0] - h).abs() < 1e-12 && (v1[1] + h).abs() < 1e-12);
    }

    #[test]
    fn eigen_rejects_asymmetric() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eigen(&s), Err(Error::Contract(_))));
    }

    #[test]
    fn standardize_column() {
        let x = DataMatrix::from_rows(&[[1.0], [2.0], [3.0]]).unwrap();
        let s = standardize(&x).unwrap();
        assert_eq!(s.column(0), vec![-1.0, 0.0, 1.0]);
        let again = standardize(&s).unwrap();
        for (a, b) in again.column(0).iter().zip(s.column(0)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn standardize_names_zero_variance_column() {
        let x = DataMatrix::from_rows(&[[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]]).unwrap();
        assert!(matches!(
            standardize(&x),
            Err(Error::ZeroVariance { column: 1 })
        ));
    }

    #[test]
    fn whiten_identity_covariance() {
        // rows with sample covariance exactly I
        let x = DataMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        let scale = (3.0f64 / 2.0).sqrt();
        let x = DataMatrix::from_matrix(x.as_matrix() * scale).unwrap();
        let w = whiten(&x).unwrap();
        assert!(approx_mat(&w.transform, &DMatrix::identity(2, 2), 1e-12));
        assert!(approx_mat(
            w.data.as_matrix(),
            x.centered().as_matrix(),
            1e-12
        ));
    }

    #[test]
    fn whiten_diagonal_covariance() {
        // columns with sample variances 4 and 9, uncorrelated
        let x =
            DataMatrix::from_rows(&[[2.0, 3.0], [-2.0, 3.0], [2.0, -3.0], [-2.0, -3.0]]).unwrap();
        let x = DataMatrix::from_matrix(x.as_matrix() * (3.0f64 / 4.0).sqrt()).unwrap();
        let c = covariance(&x).unwrap();
        assert!((c[(0, 0)] - 4.0).abs() < 1e-12 && (c[(1, 1)] - 9.0).abs() < 1e-12);
        let w = whiten(&x).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 1.0 / 3.0]);
        assert!(approx_mat(&w.transform, &expected, 1e-12));
    }

    #[test]
    fn whiten_rejects_duplicate_column() {
        let x = DataMatrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [4.0, 4.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(whiten(&x), Err(Error::RankDeficient { .. })));
    }
}
