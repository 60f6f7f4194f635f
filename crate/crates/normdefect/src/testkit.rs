//! Shared helpers for unit tests: seeded generators and independent oracles.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(rows, cols, entries).unwrap()
}

pub fn random_complex_triple(rng: &mut ChaCha8Rng) -> (Complex64, Complex64, Complex64) {
    let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    (z(), z(), z())
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let a = random_complex(rng, n, n);
    a.add(&a.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0))
}

/// Unitary factor of the QR decomposition of a random complex matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let a = random_complex(rng, n, n);
    let qr = a.to_na().qr();
    ComplexMatrix::from_na(&qr.q())
}

pub fn assert_close_slice(got: &[f64], expect: &[f64], tol: f64) {
    assert_eq!(got.len(), expect.len(), "length mismatch");
    for (g, e) in got.iter().zip(expect) {
        assert!(
            (g - e).abs() <= tol,
            "value {g} differs from {e} by more than {tol}"
        );
    }
}

/// Real roots of the characteristic polynomial of a Hermitian matrix,
/// ascending. Coefficients come from Faddeev-LeVerrier; roots from
/// Durand-Kerner iteration. Only intended for n <= 4 test oracles.
pub fn charpoly_real_roots(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    // Faddeev-LeVerrier: c[0] = 1, c[k] = -tr(H * M_k) / k.
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut m = ComplexMatrix::identity(n);
    for k in 1..=n {
        let hm = h.multiply(&m).unwrap();
        let c = hm.trace() * Complex64::new(-1.0 / k as f64, 0.0);
        coeffs.push(c);
        if k < n {
            m = hm.add(&ComplexMatrix::identity(n).scale(c)).unwrap();
        }
    }
    // p(x) = sum coeffs[k] x^(n-k); Durand-Kerner from a spread of starts.
    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &coeffs {
            acc = acc * x + c;
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1) * Complex64::new(1.0, 0.0))
        .collect();
    for _ in 0..200 {
        let prev = roots.clone();
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= prev[i] - prev[j];
                }
            }
            roots[i] = prev[i] - eval(prev[i]) / denom;
        }
        let shift: f64 = roots
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if shift < 1e-14 {
            break;
        }
    }
    let mut out: Vec<f64> = roots
        .iter()
        .map(|z| {
            assert!(z.im.abs() < 1e-6, "expected a real root, got {z}");
            z.re
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}
