//! Normal-defect bounds, normality tests, submatrix embedding checks, and
//! the two universal completions (the doubling completion and the
//! scaled-unitary completion realizing the rank upper bound).

use serde::Serialize;

use crate::completion::{assemble, CompletionResult};
use crate::matrix::{re, ComplexMatrix, Inertia};
use crate::{Error, Result};

/// Lower/upper bracket on the normal defect.
///
/// `lower` counts the dominant eigenvalue sign of the commutator `[A,A*]`;
/// `upper` is the numeric rank of `‖A‖² I - A*A`, with `‖A‖` the spectral
/// norm (the operator 2-norm; the bound does not hold for arbitrary norms).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DefectBounds {
    pub lower: usize,
    pub upper: usize,
    pub inertia: Inertia,
}

/// `ε(A)`: max of positive and negative eigenvalue counts of `[A,A*]`.
///
/// `tol` is relative; the zero threshold is `tol * max(1, ‖[A,A*]‖₂)`.
pub fn epsilon(a: &ComplexMatrix, tol: f64) -> Result<usize> {
    let inertia = a.commutator()?.inertia_rel(tol)?;
    Ok(inertia.n_plus.max(inertia.n_minus))
}

/// `‖A‖² I - A*A` together with the spectral norm `‖A‖`.
fn gram_defect(a: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let n = a.require_square()?;
    let norm2 = a.spectral_norm();
    let gram = ComplexMatrix::identity(n)
        .scale(re(norm2 * norm2))
        .sub(&a.adjoint().multiply(a)?)?;
    Ok((gram, norm2))
}

/// Singular values of the Gram defect below this are rounding noise: for a
/// scalar multiple of a unitary the matrix is exactly zero in theory, and
/// a purely relative rank rule would otherwise count noise directions.
fn gram_noise_floor(spectral_norm: f64) -> f64 {
    1e-12 * f64::max(1.0, spectral_norm * spectral_norm)
}

/// Both defect bounds plus the commutator inertia behind the lower one.
pub fn defect_bounds(a: &ComplexMatrix, tol: f64) -> Result<DefectBounds> {
    let inertia = a.commutator()?.inertia_rel(tol)?;
    let lower = inertia.n_plus.max(inertia.n_minus);
    let (gram, norm) = gram_defect(a)?;
    let sv = gram.singular_values();
    let largest = sv.first().copied().unwrap_or(0.0);
    let cut = f64::max(tol * largest, gram_noise_floor(norm));
    let upper = sv.iter().filter(|&&s| s > cut).count();
    Ok(DefectBounds {
        lower,
        upper,
        inertia,
    })
}

/// Relative departure from normality: `‖AA* - A*A‖_F / max(1, ‖A‖²_F)`.
/// Zero (up to roundoff) exactly when `A` is normal.
pub fn normality_residual(a: &ComplexMatrix) -> Result<f64> {
    let c = a.commutator()?;
    let scale = f64::max(1.0, a.frobenius_norm().powi(2));
    Ok(c.frobenius_norm() / scale)
}

/// True when the top-left block of `b` equals `a` elementwise within `tol`.
pub fn is_leading_principal_submatrix(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<bool> {
    if b.rows() < a.rows() || b.cols() < a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "candidate {}x{} is smaller than the embedded {}x{}",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(b.leading_block(a.rows(), a.cols()).approx_eq(a, tol))
}

/// The doubling completion `[[A, A*],[A*, A]]`, normal for every square `A`.
pub fn trivial_completion(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square()?;
    let adj = a.adjoint();
    assemble(a, &adj, &adj, a)
}

/// A normal completion of size `n + rank(‖A‖² I - A*A)`: the matrix is
/// extended to a scalar multiple of a unitary.
///
/// This realizes the upper bound of [`defect_bounds`] constructively. The
/// result is generally not minimal.
pub fn scaled_unitary_completion(a: &ComplexMatrix) -> Result<CompletionResult> {
    let n = a.require_square()?;
    let c = a.spectral_norm();
    if c == 0.0 {
        // Zero matrix is already normal.
        return CompletionResult::from_parts(a.clone(), n);
    }
    let (gram, _) = gram_defect(a)?;
    // W with W*W = c^2 I - A*A, keeping only the numerically nonzero
    // eigendirections; the directions kept match the rank counted by
    // `defect_bounds`.
    let eig = gram.to_na().symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let cut = f64::max(crate::DEFAULT_TOL * lambda_max, gram_noise_floor(c));
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > cut).collect();
    let r = keep.len();
    if r == 0 {
        // A is already a multiple of a unitary, hence normal.
        return CompletionResult::from_parts(a.clone(), n);
    }
    let mut w = ComplexMatrix::zeros(r, n);
    for (row, &idx) in keep.iter().enumerate() {
        let scale = eig.eigenvalues[idx].sqrt();
        for j in 0..n {
            w.set(row, j, eig.eigenvectors[(j, idx)].conj() * re(scale));
        }
    }
    // S = [[A],[W]] / c has orthonormal columns; append an orthonormal basis
    // of the complement to finish the unitary.
    let mut s = ComplexMatrix::zeros(n + r, n);
    for i in 0..n {
        for j in 0..n {
            s.set(i, j, a.get(i, j) / re(c));
        }
    }
    for i in 0..r {
        for j in 0..n {
            s.set(n + i, j, w.get(i, j) / re(c));
        }
    }
    let proj = ComplexMatrix::identity(n + r).sub(&s.multiply(&s.adjoint())?)?;
    let peig = proj.to_na().symmetric_eigen();
    let mut cols: Vec<(f64, usize)> = (0..n + r).map(|i| (peig.eigenvalues[i], i)).collect();
    cols.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut ext = ComplexMatrix::zeros(n + r, n + r);
    for i in 0..n + r {
        for j in 0..n {
            // place the original entries verbatim in the leading block
            let v = if i < n { a.get(i, j) } else { s.get(i, j) * re(c) };
            ext.set(i, j, v);
        }
        for (col, &(_, idx)) in cols.iter().take(r).enumerate() {
            ext.set(i, n + col, peig.eigenvectors[(i, idx)] * re(c));
        }
    }
    CompletionResult::from_parts(ext, n)
}

/// Appends one decoupled zero row/column, turning a size-(n+k) completion
/// into a size-(n+k+1) one. Keeps the base matrix in the leading block.
pub fn pad_completion(result: &CompletionResult) -> Result<CompletionResult> {
    let d = result.a_ext.rows();
    let mut padded = ComplexMatrix::zeros(d + 1, d + 1);
    for i in 0..d {
        for j in 0..d {
            padded.set(i, j, result.a_ext.get(i, j));
        }
    }
    let mut out = CompletionResult::from_parts(padded, result.base_dim())?;
    out.case = result.case;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;
    use num_complex::Complex64;

    fn superdiag132() -> ComplexMatrix {
        ComplexMatrix::superdiagonal(&[re(1.0), re(3.0), re(2.0)])
    }

    fn sqrt2_shift() -> ComplexMatrix {
        let mut m = ComplexMatrix::superdiagonal(&[re(1.0), re(1.0), re(1.0)]);
        m.set(3, 0, re(2.0f64.sqrt()));
        m
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(&superdiag132(), 1e-9).unwrap(), 2);

        let u = testkit::random_unitary(&mut testkit::rng(1), 4);
        assert_eq!(epsilon(&u, 1e-9).unwrap(), 0);

        // 5x5 cyclic shift with weights (-2, 1, -1, i, 2).
        let mut ex2 = ComplexMatrix::superdiagonal(&[
            re(-2.0),
            re(1.0),
            re(-1.0),
            Complex64::new(0.0, 1.0),
        ]);
        ex2.set(4, 0, re(2.0));
        assert_eq!(epsilon(&ex2, 1e-9).unwrap(), 1);
    }

    #[test]
    fn defect_bounds_examples() {
        let b = defect_bounds(&sqrt2_shift(), 1e-9).unwrap();
        assert_eq!((b.lower, b.upper), (1, 3));

        let b = defect_bounds(&superdiag132(), 1e-9).unwrap();
        assert_eq!((b.lower, b.upper), (2, 3));

        let b = defect_bounds(&ComplexMatrix::zeros(4, 4), 1e-9).unwrap();
        assert_eq!((b.lower, b.upper), (0, 0));
    }

    #[test]
    fn bounds_are_ordered_for_random_matrices() {
        let mut rng = testkit::rng(23);
        for n in 2..=8 {
            let a = testkit::random_complex(&mut rng, n, n);
            let b = defect_bounds(&a, 1e-9).unwrap();
            assert!(b.lower <= b.upper, "{} > {}", b.lower, b.upper);
        }
    }

    #[test]
    fn epsilon_is_unitarily_invariant() {
        let mut rng = testkit::rng(29);
        for _ in 0..10 {
            let a = testkit::random_complex(&mut rng, 5, 5);
            let u = testkit::random_unitary(&mut rng, 5);
            let conj = u.multiply(&a).unwrap().multiply(&u.adjoint()).unwrap();
            assert_eq!(
                epsilon(&a, 1e-8).unwrap(),
                epsilon(&conj, 1e-8).unwrap()
            );
        }
    }

    #[test]
    fn residual_examples() {
        let u = testkit::random_unitary(&mut testkit::rng(31), 5);
        assert!(normality_residual(&u).unwrap() <= 1e-14);
        let h = testkit::random_hermitian(&mut testkit::rng(32), 5);
        assert!(normality_residual(&h).unwrap() <= 1e-14);
        assert!(normality_residual(&superdiag132()).unwrap() >= 1e-2);
    }

    #[test]
    fn residual_zero_iff_commutator_inertia_all_zero() {
        let u = testkit::random_unitary(&mut testkit::rng(33), 4);
        let i = u.commutator().unwrap().inertia_rel(1e-9).unwrap();
        assert_eq!(i, (0, 0, 4));

        let a = superdiag132();
        let i = a.commutator().unwrap().inertia_rel(1e-9).unwrap();
        assert!(i.n_plus + i.n_minus > 0);
        assert!(normality_residual(&a).unwrap() > 1e-14);
    }

    #[test]
    fn submatrix_check_examples() {
        let a = superdiag132();
        let t = trivial_completion(&a).unwrap();
        assert!(is_leading_principal_submatrix(&a, &t, 1e-12).unwrap());

        let mut perturbed = t.clone();
        perturbed.set(0, 0, re(1e-3));
        assert!(!is_leading_principal_submatrix(&a, &perturbed, 1e-9).unwrap());

        assert!(is_leading_principal_submatrix(&t, &a, 1e-9).is_err());
    }

    #[test]
    fn trivial_completion_is_normal_and_embeds() {
        let a = superdiag132();
        let t = trivial_completion(&a).unwrap();
        assert_eq!(t.rows(), 8);
        assert!(normality_residual(&t).unwrap() <= 1e-12);

        let mut rng = testkit::rng(37);
        for _ in 0..10 {
            let a = testkit::random_complex(&mut rng, 5, 5);
            let t = trivial_completion(&a).unwrap();
            assert!(normality_residual(&t).unwrap() <= 1e-12);
            assert!(is_leading_principal_submatrix(&a, &t, 1e-14).unwrap());
        }
    }

    #[test]
    fn scaled_unitary_completion_certifies_the_upper_bound() {
        let mut rng = testkit::rng(41);
        for n in 2..=6 {
            let a = testkit::random_complex(&mut rng, n, n);
            let bounds = defect_bounds(&a, 1e-9).unwrap();
            let comp = scaled_unitary_completion(&a).unwrap();
            assert_eq!(comp.defect, bounds.upper);
            assert!(comp.residual <= 1e-10, "residual {}", comp.residual);
            assert!(is_leading_principal_submatrix(&a, &comp.a_ext, 1e-12).unwrap());
        }

        // Exact rank deficiency: the 4x4 chain has upper bound 3.
        let comp = scaled_unitary_completion(&superdiag132()).unwrap();
        assert_eq!(comp.defect, 3);
        assert!(comp.residual <= 1e-12);
    }

    #[test]
    fn pad_preserves_normality_and_embedding() {
        let a = superdiag132();
        let comp = scaled_unitary_completion(&a).unwrap();
        let padded = pad_completion(&comp).unwrap();
        assert_eq!(padded.defect, comp.defect + 1);
        assert!(padded.residual <= 1e-10);
        assert!(is_leading_principal_submatrix(&a, &padded.a_ext, 1e-12).unwrap());
    }
}
