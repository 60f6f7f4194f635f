//! Property-based invariants over the public API.

use num_complex::Complex64;
use proptest::prelude::*;

use normdefect::completion::CompletionResult;
use normdefect::cyclic::ShiftMatrix;
use normdefect::matrix::ComplexMatrix;
use normdefect::superdiag;
use normdefect::{blockdiag, defect, io, DEFAULT_TOL};

fn complex_square(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n).prop_map(move |v| {
            ComplexMatrix::new(
                n,
                n,
                v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
            )
            .unwrap()
        })
    })
}

fn triple() -> impl Strategy<Value = (Complex64, Complex64, Complex64)> {
    let entry = prop_oneof![
        Just(Complex64::new(0.0, 0.0)),
        (-3.0..3.0f64).prop_map(|x| Complex64::new(x, 0.0)),
        ((-3.0..3.0f64), (-3.0..3.0f64)).prop_map(|(a, b)| Complex64::new(a, b)),
    ];
    (entry.clone(), entry.clone(), entry)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_involutive_and_commutator_hermitian(a in complex_square(6)) {
        prop_assert!(a.adjoint().adjoint().approx_eq(&a, 0.0));
        let c = a.commutator().unwrap();
        prop_assert!(c.hermitian_asymmetry().unwrap() <= 1e-12);
        let scale = f64::max(1.0, a.frobenius_norm().powi(2));
        prop_assert!(c.trace().norm() <= 1e-10 * scale);
    }

    #[test]
    fn defect_bounds_bracket_and_doubling_completion_verifies(a in complex_square(6)) {
        let bounds = defect::defect_bounds(&a, DEFAULT_TOL).unwrap();
        prop_assert!(bounds.lower <= bounds.upper);

        let doubled = defect::trivial_completion(&a).unwrap();
        prop_assert!(defect::normality_residual(&doubled).unwrap() <= 1e-12);
        prop_assert!(defect::is_leading_principal_submatrix(&a, &doubled, 0.0).unwrap());

        let unitary_style = defect::scaled_unitary_completion(&a).unwrap();
        prop_assert_eq!(unitary_style.defect, bounds.upper);
        prop_assert!(unitary_style.residual <= 1e-10);
    }

    #[test]
    fn superdiagonal_classification_is_consistent((a, b, c) in triple()) {
        let p = superdiag::phase_reduce(a, b, c).unwrap();
        let case = superdiag::classify(&p, DEFAULT_TOL);
        let m = p.matrix();
        prop_assert_eq!(case.epsilon(), defect::epsilon(&m, DEFAULT_TOL).unwrap());

        let completion = superdiag::minimal_completion(a, b, c).unwrap();
        prop_assert_eq!(completion.defect, case.epsilon());
        prop_assert!(completion.residual <= 1e-10);
        prop_assert!(
            defect::is_leading_principal_submatrix(&m, &completion.a_ext, 1e-12).unwrap()
        );
    }

    #[test]
    fn shift_verdicts_only_certify_verifiable_completions(
        mags in prop::collection::vec(0.0..3.0f64, 4..=9),
        phases in prop::collection::vec(0.0..std::f64::consts::TAU, 9),
        two_level in any::<bool>(),
    ) {
        let weights: Vec<Complex64> = mags
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let m = if two_level {
                    if m < 1.5 { 1.0 } else { 2.5 }
                } else {
                    m
                };
                Complex64::from_polar(m, phases[i])
            })
            .collect();
        let shift = ShiftMatrix::new(weights).unwrap();
        let verdict = normdefect::cyclic::check_defect_one(&shift, DEFAULT_TOL);
        if verdict.holds {
            let completion = normdefect::cyclic::defect_one_completion(&shift, &verdict).unwrap();
            prop_assert!(completion.residual <= 1e-10);
            prop_assert_eq!(completion.defect, 1);
            prop_assert_eq!(
                defect::epsilon(&shift.to_matrix(), DEFAULT_TOL).unwrap(),
                1
            );
        } else {
            prop_assert!(
                normdefect::cyclic::defect_one_completion(&shift, &verdict).is_err()
            );
        }
    }

    #[test]
    fn matrix_files_round_trip_bitwise(
        bits in prop::collection::vec((any::<f64>(), any::<f64>()), 1..=12)
    ) {
        let entries: Vec<Complex64> = bits
            .into_iter()
            .map(|(a, b)| {
                let clean = |x: f64| if x.is_finite() { x } else { 0.25 };
                Complex64::new(clean(a), clean(b))
            })
            .collect();
        let n = entries.len();
        let m = ComplexMatrix::new(1, n, entries).unwrap();
        let back = io::parse_matrix(&io::matrix_to_string(&m)).unwrap();
        for (x, y) in m.entries().iter().zip(back.entries()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn composed_completions_stay_normal(a in complex_square(4), b in complex_square(4)) {
        let ca = CompletionResult::from_parts(defect::trivial_completion(&a).unwrap(), a.rows())
            .unwrap();
        let cb = defect::scaled_unitary_completion(&b).unwrap();
        let residual_bound = ca.residual.max(cb.residual) + 1e-14;
        let combined = blockdiag::compose_completions(&[ca, cb]).unwrap();
        prop_assert!(combined.residual <= residual_bound);
        let sum = blockdiag::direct_sum(
            &blockdiag::BlockList::new(vec![a, b]).unwrap(),
        );
        prop_assert!(
            defect::is_leading_principal_submatrix(&sum, &combined.a_ext, 1e-14).unwrap()
        );
    }

    #[test]
    fn padded_completions_keep_their_certificate(a in complex_square(4)) {
        let comp = defect::scaled_unitary_completion(&a).unwrap();
        let padded = defect::pad_completion(&comp).unwrap();
        prop_assert_eq!(padded.defect, comp.defect + 1);
        prop_assert!(padded.residual <= comp.residual + 1e-14);
        prop_assert!(
            defect::is_leading_principal_submatrix(&a, &padded.a_ext, 1e-12).unwrap()
        );
    }
}
