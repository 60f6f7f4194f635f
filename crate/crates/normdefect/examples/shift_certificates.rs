//! The two-level criterion for cyclic weighted shifts: when it holds the
//! defect is exactly 1 and the bordered completion is written down; when it
//! fails while ε = 1, the matrix is certified to need at least two extra
//! dimensions.
//!
//! ```bash
//! cargo run -p normdefect --example shift_certificates
//! ```

use num_complex::Complex64;
use normdefect::cyclic::{
    certifies_defect_exceeds_one, check_defect_one, defect_one_completion, ShiftMatrix,
};
use normdefect::defect;
use normdefect::matrix::re;
use normdefect::DEFAULT_TOL;

fn verdict_line(label: &str, shift: &ShiftMatrix) {
    let verdict = check_defect_one(shift, DEFAULT_TOL);
    print!("{label}: holds = {}, reason = {}", verdict.holds, verdict.reason.label());
    if let Some(s) = &verdict.structure {
        print!(
            " (alpha {:.3}, beta {:.3}, run start {} length {})",
            s.alpha, s.beta, s.start, s.run_len
        );
    }
    println!();
    if verdict.holds {
        let completion = defect_one_completion(shift, &verdict).unwrap();
        println!(
            "  -> completion of size {} with residual {:.3e}",
            completion.a_ext.rows(),
            completion.residual
        );
    } else if certifies_defect_exceeds_one(shift, DEFAULT_TOL).unwrap() {
        let eps = defect::epsilon(&shift.to_matrix(), DEFAULT_TOL).unwrap();
        println!("  -> epsilon = {eps} but the criterion fails: certified nd >= 2");
    }
}

fn main() {
    // lower level of length 2: the criterion holds
    verdict_line(
        "weights (2, 1, 1, 2)",
        &ShiftMatrix::new(vec![re(2.0), re(1.0), re(1.0), re(2.0)]).unwrap(),
    );

    // zero level may run longer
    verdict_line(
        "weights (1, 0, 0, 1)",
        &ShiftMatrix::new(vec![re(1.0), re(0.0), re(0.0), re(1.0)]).unwrap(),
    );

    // run of length one needs a corner entry in the completion
    verdict_line(
        "weights (2, 1, 2, 2)",
        &ShiftMatrix::new(vec![re(2.0), re(1.0), re(2.0), re(2.0)]).unwrap(),
    );

    // a run of three is an obstruction: nd > epsilon = 1
    verdict_line(
        "weights (-2, 1, -1, i, 2)",
        &ShiftMatrix::new(vec![
            re(-2.0),
            re(1.0),
            re(-1.0),
            Complex64::new(0.0, 1.0),
            re(2.0),
        ])
        .unwrap(),
    );
    verdict_line(
        "weights (2, 1, 1, 1)",
        &ShiftMatrix::new(vec![re(2.0), re(1.0), re(1.0), re(1.0)]).unwrap(),
    );
}
