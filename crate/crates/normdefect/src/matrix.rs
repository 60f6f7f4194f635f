//! Dense complex matrices and the Hermitian spectral utilities the rest of
//! the crate consumes.
//!
//! Values are immutable after construction and safe to share across threads.
//! Eigenvalues and singular values are delegated to `nalgebra`; everything
//! else is computed directly on the row-major storage.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Shorthand for a purely real complex scalar.
#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Dense complex matrix with row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf components
    /// and length mismatches.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadLength {
                rows,
                cols,
                found: entries.len(),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = re(1.0);
        }
        m
    }

    /// Builds from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| re(x)).collect())
    }

    /// Builds from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds from (row, col, value) triplets; unspecified entries are zero.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, Complex64)],
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        for &(i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "triplet ({i},{j}) outside {rows}x{cols}"
                )));
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite);
            }
            m.set(i, j, v);
        }
        Ok(m)
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    /// The (k+1)x(k+1) matrix with `weights` on the superdiagonal and zeros
    /// elsewhere.
    pub fn superdiagonal(weights: &[Complex64]) -> Self {
        let n = weights.len() + 1;
        let mut m = Self::zeros(n, n);
        for (i, &w) in weights.iter().enumerate() {
            m.entries[i * n + i + 1] = w;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Entrywise (non-conjugating) transpose.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Standard matrix product; errors on inner-dimension mismatch.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.entries[i * self.cols + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += aik * rhs.entries[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("add".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("sub".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    /// The commutator `AA* - A*A`; Hermitian with zero trace for square `A`.
    pub fn commutator(&self) -> Result<Self> {
        self.require_square()?;
        let adj = self.adjoint();
        self.multiply(&adj)?.sub(&adj.multiply(self)?)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self
            .to_na()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Spectral norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Relative Frobenius deviation from Hermitian symmetry.
    pub fn hermitian_asymmetry(&self) -> Result<f64> {
        self.require_square()?;
        let diff = self.sub(&self.adjoint())?;
        Ok(diff.frobenius_norm() / f64::max(1.0, self.frobenius_norm()))
    }

    /// Ascending real eigenvalues of a Hermitian matrix.
    ///
    /// The input must be Hermitian within `1e-12` relative Frobenius
    /// asymmetry; the eigenvalue sum matches the trace to roundoff.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let asym = self.hermitian_asymmetry()?;
        if asym > 1e-12 {
            return Err(Error::NotHermitian(asym));
        }
        if self.rows == 0 {
            return Ok(Vec::new());
        }
        let eig = self.to_na().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    /// Eigenvalue sign counts of a Hermitian matrix, split by an absolute
    /// threshold `tol`.
    pub fn inertia(&self, tol: f64) -> Result<Inertia> {
        if tol < 0.0 {
            return Err(Error::NegativeTolerance(tol));
        }
        let vals = self.hermitian_eigenvalues()?;
        let n_plus = vals.iter().filter(|&&v| v > tol).count();
        let n_minus = vals.iter().filter(|&&v| v < -tol).count();
        Ok(Inertia {
            n_plus,
            n_minus,
            n_zero: vals.len() - n_plus - n_minus,
            tolerance: tol,
        })
    }

    /// [`inertia`](Self::inertia) with the default threshold
    /// `rel_tol * max(1, ‖H‖₂)`.
    pub fn inertia_rel(&self, rel_tol: f64) -> Result<Inertia> {
        if rel_tol < 0.0 {
            return Err(Error::NegativeTolerance(rel_tol));
        }
        let vals = self.hermitian_eigenvalues()?;
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = rel_tol * f64::max(1.0, scale);
        let n_plus = vals.iter().filter(|&&v| v > tol).count();
        let n_minus = vals.iter().filter(|&&v| v < -tol).count();
        Ok(Inertia {
            n_plus,
            n_minus,
            n_zero: vals.len() - n_plus - n_minus,
            tolerance: tol,
        })
    }

    /// Count of singular values above `tol * (largest singular value)`.
    /// The zero matrix has rank 0.
    pub fn numeric_rank(&self, tol: f64) -> Result<usize> {
        if tol < 0.0 {
            return Err(Error::NegativeTolerance(tol));
        }
        let sv = self.singular_values();
        let largest = sv.first().copied().unwrap_or(0.0);
        if largest == 0.0 {
            return Ok(0);
        }
        Ok(sv.iter().filter(|&&s| s > tol * largest).count())
    }

    /// Elementwise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Largest imaginary component in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Copies the `rows x cols` top-left block.
    pub fn leading_block(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows && cols <= self.cols);
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// Copies an arbitrary sub-block.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols);
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(row0 + i, col0 + j));
            }
        }
        out
    }

    pub(crate) fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn from_na(m: &DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                if z.im == 0.0 {
                    write!(f, "{:>12.6} ", z.re)?;
                } else {
                    write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.multiply(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs).expect("matrix difference dimension mismatch")
    }
}

/// Eigenvalue sign counts of a Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    /// Absolute threshold used for the split.
    pub tolerance: f64,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

impl PartialEq<(usize, usize, usize)> for Inertia {
    fn eq(&self, other: &(usize, usize, usize)) -> bool {
        (self.n_plus, self.n_minus, self.n_zero) == *other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;

    #[test]
    fn adjoint_examples() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let expect = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(m.adjoint().approx_eq(&expect, 0.0));

        let i = ComplexMatrix::new(1, 1, vec![Complex64::new(0.0, 1.0)]).unwrap();
        assert_eq!(i.adjoint().get(0, 0), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let mut rng = testkit::rng(7);
        for _ in 0..20 {
            let m = testkit::random_complex(&mut rng, 4, 3);
            assert!(m.adjoint().adjoint().approx_eq(&m, 0.0));
        }
    }

    #[test]
    fn multiply_examples() {
        let m = testkit::random_complex(&mut testkit::rng(3), 3, 3);
        let id = ComplexMatrix::identity(3);
        assert!(id.multiply(&m).unwrap().approx_eq(&m, 1e-15));

        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let b = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        let prod = a.multiply(&b).unwrap();
        let expect = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(prod.approx_eq(&expect, 0.0));

        let bad = ComplexMatrix::zeros(2, 3).multiply(&ComplexMatrix::zeros(2, 3));
        assert!(bad.is_err());
    }

    #[test]
    fn multiply_matches_naive_oracle() {
        // Entry-by-entry triple loop, written independently of `multiply`.
        let mut rng = testkit::rng(11);
        let a = testkit::random_complex(&mut rng, 3, 3);
        let b = testkit::random_complex(&mut rng, 3, 3);
        let prod = a.multiply(&b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..3 {
                    acc += a.get(i, k) * b.get(k, j);
                }
                assert!((prod.get(i, j) - acc).norm() < 1e-12);
            }
        }
        // Cross-check through an unrelated implementation.
        let na_prod = ComplexMatrix::from_na(&(a.to_na() * b.to_na()));
        assert!(prod.approx_eq(&na_prod, 1e-12));
    }

    #[test]
    fn commutator_of_superdiagonal_triple() {
        // diag(|a|^2, |b|^2-|a|^2, -(|b|^2-|c|^2), -|c|^2)
        let a = ComplexMatrix::superdiagonal(&[re(1.0), re(3.0), re(2.0)]);
        let c = a.commutator().unwrap();
        let expect = ComplexMatrix::diagonal(&[re(1.0), re(8.0), re(-5.0), re(-4.0)]);
        assert!(c.approx_eq(&expect, 1e-12));

        let mut rng = testkit::rng(5);
        for _ in 0..25 {
            let (x, y, z) = testkit::random_complex_triple(&mut rng);
            let m = ComplexMatrix::superdiagonal(&[x, y, z]);
            let c = m.commutator().unwrap();
            let expect = ComplexMatrix::diagonal(&[
                re(x.norm_sqr()),
                re(y.norm_sqr() - x.norm_sqr()),
                re(-(y.norm_sqr() - z.norm_sqr())),
                re(-z.norm_sqr()),
            ]);
            assert!(c.approx_eq(&expect, 1e-12));
        }
    }

    #[test]
    fn commutator_of_normal_matrix_vanishes() {
        let u = testkit::random_unitary(&mut testkit::rng(2), 5);
        assert!(u.commutator().unwrap().frobenius_norm() < 1e-13);
        let h = testkit::random_hermitian(&mut testkit::rng(4), 5);
        assert!(h.commutator().unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn commutator_is_hermitian_and_traceless() {
        let mut rng = testkit::rng(9);
        for n in 2..=8 {
            let a = testkit::random_complex(&mut rng, n, n);
            let c = a.commutator().unwrap();
            assert!(c.hermitian_asymmetry().unwrap() <= 1e-12);
            let fro2 = a.frobenius_norm().powi(2);
            assert!(c.trace().norm() <= 1e-10 * f64::max(1.0, fro2));
        }
    }

    #[test]
    fn hermitian_eigenvalues_examples() {
        let d = ComplexMatrix::diagonal(&[re(1.0), re(8.0), re(-5.0), re(-4.0)]);
        let vals = d.hermitian_eigenvalues().unwrap();
        testkit::assert_close_slice(&vals, &[-5.0, -4.0, 1.0, 8.0], 1e-12);

        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        testkit::assert_close_slice(&x.hermitian_eigenvalues().unwrap(), &[-1.0, 1.0], 1e-12);

        let skew = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            skew.hermitian_eigenvalues(),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn hermitian_eigenvalues_match_charpoly_roots() {
        // Independent oracle: roots of the characteristic polynomial via
        // Durand-Kerner iteration, n <= 4.
        let mut rng = testkit::rng(13);
        for n in 2..=4 {
            for _ in 0..10 {
                let h = testkit::random_hermitian(&mut rng, n);
                let got = h.hermitian_eigenvalues().unwrap();
                let expect = testkit::charpoly_real_roots(&h);
                testkit::assert_close_slice(&got, &expect, 1e-8);
                let sum: f64 = got.iter().sum();
                assert!((sum - h.trace().re).abs() <= 1e-10 * f64::max(1.0, h.frobenius_norm()));
            }
        }
    }

    #[test]
    fn inertia_examples() {
        let d = ComplexMatrix::diagonal(&[re(1.0), re(8.0), re(-5.0), re(-4.0)]);
        assert_eq!(d.inertia(1e-9).unwrap(), (2, 2, 0));

        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(z.inertia(1e-9).unwrap(), (0, 0, 3));

        let d2 = ComplexMatrix::diagonal(&[re(1.0), re(3.0), re(-4.0)]);
        assert_eq!(d2.inertia(1e-9).unwrap(), (2, 1, 0));

        assert!(matches!(
            d2.inertia(-1.0),
            Err(Error::NegativeTolerance(_))
        ));
    }

    #[test]
    fn inertia_is_invariant_under_unitary_conjugation() {
        let mut rng = testkit::rng(17);
        for _ in 0..10 {
            let h = testkit::random_hermitian(&mut rng, 5);
            let u = testkit::random_unitary(&mut rng, 5);
            let conj = u.multiply(&h).unwrap().multiply(&u.adjoint()).unwrap();
            assert_eq!(h.inertia(1e-8).unwrap(), conj.inertia(1e-8).unwrap());
            let a = h.hermitian_eigenvalues().unwrap();
            let b = conj.hermitian_eigenvalues().unwrap();
            testkit::assert_close_slice(&a, &b, 1e-9);
        }
    }

    #[test]
    fn numeric_rank_examples() {
        assert_eq!(ComplexMatrix::identity(6).numeric_rank(1e-9).unwrap(), 6);

        let d = ComplexMatrix::diagonal(&[re(9.0), re(8.0), re(0.0), re(5.0)]);
        assert_eq!(d.numeric_rank(1e-9).unwrap(), 3);

        assert_eq!(ComplexMatrix::zeros(4, 4).numeric_rank(1e-9).unwrap(), 0);
        assert!(ComplexMatrix::zeros(2, 2).numeric_rank(-0.5).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![re(0.0); 3]),
            Err(Error::BadLength { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![Complex64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        ));
    }
}
