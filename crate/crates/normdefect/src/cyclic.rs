//! Cyclic weighted shifts and the two-level characterization of
//! `nd(A) = ε(A) = 1`.
//!
//! A cyclic weighted shift carries weights `a_1..a_{n-1}` on the
//! superdiagonal and `a_n` in the bottom-left corner. Its commutator is the
//! diagonal matrix with entries `|a_k|² - |a_{k-1}|²` (indices mod n), so
//! everything about `ε` is decided by the multiset of weight magnitudes and
//! their circular layout. The defect equals `ε = 1` exactly when the
//! magnitudes take two values `α > β >= 0` and the lower level occupies one
//! contiguous circular run of length `j`, with `j <= 2` when `β != 0` and
//! `j <= n-1` when `β = 0`. When the criterion fails while `ε(A) = 1`, the
//! matrix is certified to have `nd(A) >= 2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::completion::CompletionResult;
use crate::defect;
use crate::matrix::{re, ComplexMatrix};
use crate::{Error, Result};

/// An n×n cyclic weighted shift, `n >= 4`.
#[derive(Debug, Clone)]
pub struct ShiftMatrix {
    weights: Vec<Complex64>,
}

impl ShiftMatrix {
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() < 4 {
            return Err(Error::ShiftTooSmall(weights.len()));
        }
        if !weights.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// 1-based weight accessor, indices taken mod n.
    fn weight(&self, k: usize) -> Complex64 {
        let n = self.n();
        self.weights[(k + n - 1) % n]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.n();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, self.weights[i]);
        }
        m.set(n - 1, 0, self.weights[n - 1]);
        m
    }

    /// Recognizes the sparsity pattern in a dense matrix. Entries off the
    /// pattern must vanish within `tol * max(1, max|entry|)`.
    pub fn from_matrix(m: &ComplexMatrix, tol: f64) -> Result<Self> {
        let n = m.require_square()?;
        if n < 4 {
            return Err(Error::ShiftTooSmall(n));
        }
        let eps = tol * f64::max(1.0, m.max_abs());
        for i in 0..n {
            for j in 0..n {
                let on_pattern = j == i + 1 || (i == n - 1 && j == 0);
                if !on_pattern && m.get(i, j).norm() > eps {
                    return Err(Error::ConditionViolated(format!(
                        "entry ({},{}) is off the cyclic-shift pattern",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut weights: Vec<Complex64> = (0..n - 1).map(|i| m.get(i, i + 1)).collect();
        weights.push(m.get(n - 1, 0));
        Self::new(weights)
    }
}

/// Why a verdict holds or fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictReason {
    Ok,
    NotTwoLevels,
    NotContiguous,
    JTooLarge,
    NormalMatrix,
}

impl VerdictReason {
    pub fn label(self) -> &'static str {
        match self {
            VerdictReason::Ok => "ok",
            VerdictReason::NotTwoLevels => "not-two-levels",
            VerdictReason::NotContiguous => "not-contiguous",
            VerdictReason::JTooLarge => "j-too-large",
            VerdictReason::NormalMatrix => "normal-matrix",
        }
    }
}

/// Two-level structure of the weight magnitudes.
#[derive(Debug, Clone, Serialize)]
pub struct LevelSetStructure {
    pub alpha: f64,
    /// Magnitude of the lower level (may be zero).
    pub beta: f64,
    /// 1-based indices k with |a_k| = beta, sorted.
    pub members: Vec<usize>,
    pub contiguous: bool,
    /// Start of the circular run (1-based); meaningful when contiguous.
    pub start: usize,
    /// Length of the run.
    pub run_len: usize,
}

/// Clusters the weight magnitudes into levels. Succeeds only with exactly
/// two levels (β = 0 allowed); a single level means the shift is already
/// normal.
pub fn level_sets(shift: &ShiftMatrix, tol: f64) -> std::result::Result<LevelSetStructure, VerdictReason> {
    let n = shift.n();
    let mags: Vec<f64> = shift.weights().iter().map(|z| z.norm()).collect();
    let scale = mags.iter().fold(1.0f64, |m, &v| m.max(v));
    let eps = tol * scale;
    let mut levels: Vec<f64> = Vec::new();
    for &m in &mags {
        if !levels.iter().any(|&l| (l - m).abs() <= eps) {
            levels.push(m);
        }
    }
    levels.sort_by(f64::total_cmp);
    match levels.len() {
        1 => return Err(VerdictReason::NormalMatrix),
        2 => {}
        _ => return Err(VerdictReason::NotTwoLevels),
    }
    let (beta, alpha) = (levels[0], levels[1]);
    let members: Vec<usize> = (1..=n)
        .filter(|&k| (mags[k - 1] - beta).abs() <= eps)
        .collect();
    // A circular arc has exactly one rising edge when walking the circle.
    let in_set = |k: usize| members.contains(&(((k - 1) % n) + 1));
    let mut rises = 0;
    let mut start = 0;
    for k in 1..=n {
        let prev = k == 1 && in_set(n) || k > 1 && in_set(k - 1);
        if in_set(k) && !prev {
            rises += 1;
            start = k;
        }
    }
    let contiguous = rises == 1;
    Ok(LevelSetStructure {
        alpha,
        beta,
        members: members.clone(),
        contiguous,
        start: if contiguous { start } else { 0 },
        run_len: members.len(),
    })
}

/// Verdict of the `nd = ε = 1` characterization.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftVerdict {
    pub holds: bool,
    pub structure: Option<LevelSetStructure>,
    pub reason: VerdictReason,
}

/// Checks whether the shift satisfies the two-level criterion for
/// `nd(A) = ε(A) = 1`.
pub fn check_defect_one(shift: &ShiftMatrix, tol: f64) -> ShiftVerdict {
    let n = shift.n();
    let structure = match level_sets(shift, tol) {
        Ok(s) => s,
        Err(reason) => {
            return ShiftVerdict {
                holds: false,
                structure: None,
                reason,
            }
        }
    };
    if !structure.contiguous {
        return ShiftVerdict {
            holds: false,
            structure: Some(structure),
            reason: VerdictReason::NotContiguous,
        };
    }
    let j = structure.run_len;
    let j_ok = if structure.beta > tol * structure.alpha.max(1.0) {
        (1..=2).contains(&j)
    } else {
        (1..=n - 1).contains(&j)
    };
    if !j_ok {
        return ShiftVerdict {
            holds: false,
            structure: Some(structure),
            reason: VerdictReason::JTooLarge,
        };
    }
    ShiftVerdict {
        holds: true,
        structure: Some(structure),
        reason: VerdictReason::Ok,
    }
}

/// The rank-one decomposition vectors behind a holding verdict:
/// `x = sqrt(α²-β²) e_{i+j}` and `y` supported on `e_i` with a unit phase
/// chosen so the bordered extension is normal. `[A,A*] = xx* - yy*` holds
/// exactly.
pub fn decomposition_vectors(
    shift: &ShiftMatrix,
    structure: &LevelSetStructure,
) -> (ComplexMatrix, ComplexMatrix) {
    let n = shift.n();
    let gamma = (structure.alpha * structure.alpha - structure.beta * structure.beta).sqrt();
    let i = structure.start;
    let j = structure.run_len;
    let x_pos = (i + j - 1) % n + 1;
    let mut x = ComplexMatrix::zeros(n, 1);
    x.set(x_pos - 1, 0, re(gamma));
    let mut y = ComplexMatrix::zeros(n, 1);
    let phase = if structure.beta > 0.0 && j == 2 {
        // Align so A* y matches A x: both land on e_{i+1}.
        let ai = shift.weight(i);
        let ai1 = shift.weight(i + 1);
        ai * ai1 / re(structure.beta * structure.beta)
    } else {
        re(1.0)
    };
    y.set(i - 1, 0, re(gamma) * phase);
    (x, y)
}

/// Builds the (n+1)-size completion `[[A, y],[x*, z]]` certified by a
/// holding verdict. The corner `z` is `-conj(a_i)` for a run of length one
/// and zero otherwise.
pub fn defect_one_completion(
    shift: &ShiftMatrix,
    verdict: &ShiftVerdict,
) -> Result<CompletionResult> {
    if !verdict.holds {
        return Err(Error::VerdictDoesNotHold(verdict.reason.label().into()));
    }
    let structure = verdict
        .structure
        .as_ref()
        .expect("holding verdict carries its structure");
    let n = shift.n();
    let (x, y) = decomposition_vectors(shift, structure);
    let corner = if structure.beta > 0.0 && structure.run_len == 1 {
        -shift.weight(structure.start).conj()
    } else {
        re(0.0)
    };
    let a = shift.to_matrix();
    let mut ext = ComplexMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            ext.set(i, j, a.get(i, j));
        }
        ext.set(i, n, y.get(i, 0));
        ext.set(n, i, x.get(i, 0).conj());
    }
    ext.set(n, n, corner);
    CompletionResult::from_parts(ext, n)
}

/// True exactly when `ε(A) = 1` and the two-level criterion fails,
/// certifying `nd(A) >= 2`.
pub fn certifies_defect_exceeds_one(shift: &ShiftMatrix, tol: f64) -> Result<bool> {
    let eps = defect::epsilon(&shift.to_matrix(), tol)?;
    Ok(eps == 1 && !check_defect_one(shift, tol).holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;
    use rand::Rng;

    fn shift(weights: &[f64]) -> ShiftMatrix {
        ShiftMatrix::new(weights.iter().map(|&x| re(x)).collect()).unwrap()
    }

    fn example2() -> ShiftMatrix {
        ShiftMatrix::new(vec![
            re(-2.0),
            re(1.0),
            re(-1.0),
            Complex64::new(0.0, 1.0),
            re(2.0),
        ])
        .unwrap()
    }

    #[test]
    fn level_sets_examples() {
        let s = level_sets(&shift(&[2.0, 1.0, 1.0, 1.0, 2.0]), 1e-9).unwrap();
        assert_eq!((s.alpha, s.beta), (2.0, 1.0));
        assert_eq!(s.members, vec![2, 3, 4]);
        assert!(s.contiguous);
        assert_eq!((s.start, s.run_len), (2, 3));

        let s = level_sets(&shift(&[2.0, 1.0, 1.0, 1.0]), 1e-9).unwrap();
        assert_eq!(s.members, vec![2, 3, 4]);
        assert_eq!(s.run_len, 3);

        assert_eq!(
            level_sets(&shift(&[2.0, 2.0, 2.0, 2.0]), 1e-9).unwrap_err(),
            VerdictReason::NormalMatrix
        );
        assert_eq!(
            level_sets(&shift(&[1.0, 2.0, 3.0, 1.0]), 1e-9).unwrap_err(),
            VerdictReason::NotTwoLevels
        );
    }

    #[test]
    fn wrap_around_runs_are_contiguous() {
        // lower level {4, 1} wraps around the corner
        let s = level_sets(&shift(&[1.0, 2.0, 2.0, 1.0]), 1e-9).unwrap();
        assert!(s.contiguous);
        assert_eq!((s.start, s.run_len), (4, 2));

        let s = level_sets(&shift(&[1.0, 2.0, 1.0, 2.0]), 1e-9).unwrap();
        assert!(!s.contiguous);
    }

    #[test]
    fn verdict_examples() {
        let v = check_defect_one(&example2(), 1e-9);
        assert!(!v.holds);
        assert_eq!(v.reason, VerdictReason::JTooLarge);

        let v = check_defect_one(&shift(&[2.0, 1.0, 1.0, 2.0]), 1e-9);
        assert!(v.holds);

        let v = check_defect_one(&shift(&[1.0, 0.0, 0.0, 1.0]), 1e-9);
        assert!(v.holds, "beta = 0 allows runs up to n-1");

        let v = check_defect_one(&shift(&[1.0, 2.0, 1.0, 2.0]), 1e-9);
        assert_eq!(v.reason, VerdictReason::NotContiguous);

        assert!(ShiftMatrix::new(vec![re(1.0); 3]).is_err());
    }

    #[test]
    fn completion_examples() {
        let s = shift(&[2.0, 1.0, 1.0, 2.0]);
        let v = check_defect_one(&s, 1e-9);
        let st = v.structure.clone().unwrap();
        let (x, y) = decomposition_vectors(&s, &st);
        let g = 3.0f64.sqrt();
        assert_eq!(x.get(3, 0), re(g));
        assert_eq!(y.get(1, 0), re(g));
        let r = defect_one_completion(&s, &v).unwrap();
        assert_eq!(r.defect, 1);
        assert!(r.residual <= 1e-12);

        let s = shift(&[1.0, 0.0, 0.0, 1.0]);
        let v = check_defect_one(&s, 1e-9);
        let (x, y) = decomposition_vectors(&s, v.structure.as_ref().unwrap());
        assert_eq!(x.get(3, 0), re(1.0));
        assert_eq!(y.get(1, 0), re(1.0));
        let r = defect_one_completion(&s, &v).unwrap();
        assert!(r.residual <= 1e-12);

        // run of length one needs the corner entry
        let s = shift(&[2.0, 1.0, 2.0, 2.0]);
        let v = check_defect_one(&s, 1e-9);
        assert!(v.holds);
        let r = defect_one_completion(&s, &v).unwrap();
        assert_eq!(r.a_ext.get(4, 4), re(-1.0));
        assert!(r.residual <= 1e-12);

        let bad = check_defect_one(&example2(), 1e-9);
        assert!(defect_one_completion(&example2(), &bad).is_err());
    }

    #[test]
    fn decomposition_matches_commutator() {
        let mut rng = testkit::rng(83);
        for _ in 0..200 {
            let s = random_two_level(&mut rng);
            let v = check_defect_one(&s, 1e-9);
            if !v.holds {
                continue;
            }
            let st = v.structure.as_ref().unwrap();
            let (x, y) = decomposition_vectors(&s, st);
            let a = s.to_matrix();
            let c = a.commutator().unwrap();
            let xxt = x.multiply(&x.adjoint()).unwrap();
            let yyt = y.multiply(&y.adjoint()).unwrap();
            let diff = c.sub(&xxt.sub(&yyt).unwrap()).unwrap();
            assert!(diff.max_abs() <= 1e-12);

            let r = defect_one_completion(&s, &v).unwrap();
            assert!(r.residual <= 1e-10, "residual {}", r.residual);
            assert!(defect::is_leading_principal_submatrix(&a, &r.a_ext, 0.0).unwrap());

            // x, y, Ax, A*y span at most three dimensions
            let ax = a.multiply(&x).unwrap();
            let ay = a.adjoint().multiply(&y).unwrap();
            let n = s.n();
            let mut four = ComplexMatrix::zeros(n, 4);
            for i in 0..n {
                four.set(i, 0, x.get(i, 0));
                four.set(i, 1, y.get(i, 0));
                four.set(i, 2, ax.get(i, 0));
                four.set(i, 3, ay.get(i, 0));
            }
            assert!(four.numeric_rank(1e-9).unwrap() <= 3);
        }
    }

    #[test]
    fn verdict_is_phase_invariant() {
        let mut rng = testkit::rng(89);
        for _ in 0..100 {
            let s = random_two_level(&mut rng);
            let rotated: Vec<Complex64> = s
                .weights()
                .iter()
                .map(|w| {
                    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                    w * Complex64::from_polar(1.0, phi)
                })
                .collect();
            let t = ShiftMatrix::new(rotated).unwrap();
            let a = check_defect_one(&s, 1e-9);
            let b = check_defect_one(&t, 1e-9);
            assert_eq!(a.holds, b.holds);
            assert_eq!(a.reason, b.reason);
        }
    }

    #[test]
    fn certificates_for_the_reference_shifts() {
        assert!(certifies_defect_exceeds_one(&example2(), 1e-9).unwrap());
        assert!(certifies_defect_exceeds_one(&shift(&[2.0, 1.0, 1.0, 1.0]), 1e-9).unwrap());
        assert!(!certifies_defect_exceeds_one(&shift(&[2.0, 1.0, 1.0, 2.0]), 1e-9).unwrap());
    }

    fn random_two_level(rng: &mut rand_chacha::ChaCha8Rng) -> ShiftMatrix {
        let n = rng.gen_range(4..=9);
        let alpha = rng.gen_range(1.0..3.0);
        let beta = if rng.gen_bool(0.3) {
            0.0
        } else {
            alpha * rng.gen_range(0.1..0.9)
        };
        let max_j = if beta == 0.0 { n - 1 } else { 2 };
        let j = rng.gen_range(1..=max_j);
        let i = rng.gen_range(1..=n);
        let mut weights = Vec::with_capacity(n);
        for k in 1..=n {
            let dist = (k + n - i) % n;
            let mag = if dist < j { beta } else { alpha };
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            weights.push(Complex64::from_polar(mag, phi));
        }
        ShiftMatrix::new(weights).unwrap()
    }
}
