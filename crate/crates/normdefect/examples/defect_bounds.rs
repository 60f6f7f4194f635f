//! Bracketing the normal defect: commutator inertia from below, the rank of
//! the spectral-norm Gram defect from above.
//!
//! ```bash
//! cargo run -p normdefect --example defect_bounds
//! ```

use normdefect::defect;
use normdefect::matrix::{re, ComplexMatrix};
use normdefect::DEFAULT_TOL;

fn describe(name: &str, a: &ComplexMatrix) {
    let bounds = defect::defect_bounds(a, DEFAULT_TOL).unwrap();
    let residual = defect::normality_residual(a).unwrap();
    println!("{name}:");
    println!(
        "  commutator inertia (n+, n-, n0) = ({}, {}, {})",
        bounds.inertia.n_plus, bounds.inertia.n_minus, bounds.inertia.n_zero
    );
    println!("  defect bracket nd(A) in [{}, {}]", bounds.lower, bounds.upper);
    println!("  normality residual = {residual:.3e}\n");
}

fn main() {
    describe("identity (normal)", &ComplexMatrix::identity(4));

    describe(
        "4x4 superdiagonal chain (1, 3, 2)",
        &ComplexMatrix::superdiagonal(&[re(1.0), re(3.0), re(2.0)]),
    );

    // cyclic shift whose bracket is strict on both sides: nd is actually 2
    let shift = normdefect::cyclic::ShiftMatrix::new(vec![
        re(1.0),
        re(1.0),
        re(1.0),
        re(2.0f64.sqrt()),
    ])
    .unwrap();
    describe("cyclic shift with corner sqrt(2)", &shift.to_matrix());

    // the universal doubling completion certifies the crudest upper bound
    let a = ComplexMatrix::superdiagonal(&[re(1.0), re(3.0), re(2.0)]);
    let doubled = defect::trivial_completion(&a).unwrap();
    println!(
        "doubling completion: size {} -> residual {:.3e}",
        doubled.rows(),
        defect::normality_residual(&doubled).unwrap()
    );

    // the scaled-unitary completion realizes the rank upper bound
    let unitary_style = defect::scaled_unitary_completion(&a).unwrap();
    println!(
        "scaled-unitary completion: size {} (defect {}), residual {:.3e}",
        unitary_style.a_ext.rows(),
        unitary_style.defect,
        unitary_style.residual
    );
}
