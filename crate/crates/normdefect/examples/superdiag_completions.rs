//! Closed-form minimal completions for 4x4 superdiagonal matrices.
//!
//! The magnitude pattern of the three weights decides ε(A) ∈ {0, 1, 2, 3};
//! each case has an explicit completion of size 4 + ε(A).
//!
//! ```bash
//! cargo run -p normdefect --example superdiag_completions
//! ```

use num_complex::Complex64;
use normdefect::defect;
use normdefect::matrix::{re, ComplexMatrix};
use normdefect::superdiag::{classify, minimal_completion, phase_reduce};
use normdefect::DEFAULT_TOL;

fn show(a: Complex64, b: Complex64, c: Complex64) {
    let params = phase_reduce(a, b, c).unwrap();
    let case = classify(&params, DEFAULT_TOL);
    let result = minimal_completion(a, b, c).unwrap();
    println!(
        "weights ({a}, {b}, {c}): case {case}, epsilon {}, completion size {}",
        case.epsilon(),
        result.a_ext.rows()
    );
    println!("  residual {:.3e}", result.residual);
    let base = ComplexMatrix::superdiagonal(&[a, b, c]);
    assert!(defect::is_leading_principal_submatrix(&base, &result.a_ext, 1e-12).unwrap());
    println!("{:?}\n", result.a_ext);
}

fn main() {
    // one representative per epsilon level
    show(re(2.0), re(2.0), re(2.0)); // all equal: a weighted 5-cycle
    show(re(1.0), re(3.0), re(2.0)); // middle weight dominant
    show(re(2.0), re(1.0), re(3.0)); // middle weight smallest
    show(re(1.0), re(2.0), re(3.0)); // strictly ascending: scaled unitary of size 7

    // phases are rotated away and restored, so complex weights work the same
    show(
        Complex64::new(0.0, 1.0),
        re(3.0),
        Complex64::from_polar(2.0, std::f64::consts::PI / 3.0),
    );
}
