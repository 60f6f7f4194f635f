//! Numerical completion search: normality of the bordered matrix is a
//! polynomial system in the free block entries, minimized here with
//! multi-restart Levenberg-Marquardt. Failures are inconclusive; successes
//! are verified certificates.
//!
//! ```bash
//! cargo run -p normdefect --example completion_search
//! ```

use normdefect::matrix::{re, ComplexMatrix};
use normdefect::search::{defect_estimate, search_completion, SearchConfig};
use normdefect::{cyclic, defect, DEFAULT_TOL};

fn main() {
    let chain = ComplexMatrix::superdiagonal(&[re(1.0), re(3.0), re(2.0)]);

    // k = 1 sits below the inertia lower bound, so nothing can be found
    let mut config = SearchConfig::new(1);
    config.seed = 7;
    config.restarts = 12;
    config.max_iters = 120;
    let outcome = search_completion(&chain, &config).unwrap();
    println!(
        "k = 1: found = {} (best residual {:.3e}) - inconclusive by design",
        outcome.found, outcome.best.residual
    );

    // k = 2 matches the known defect and converges quickly
    let mut config = SearchConfig::new(2);
    config.seed = 7;
    let outcome = search_completion(&chain, &config).unwrap();
    println!(
        "k = 2: found = {} after {} restarts, residual {:.3e}",
        outcome.found, outcome.restarts_used, outcome.best.residual
    );
    assert!(defect::is_leading_principal_submatrix(&chain, &outcome.best.a_ext, 1e-12).unwrap());

    // bracketing the defect of the corner-sqrt(2) shift: the search fails at
    // k = 1 and succeeds at k = 2, and the two-level obstruction pins the
    // lower end, so the defect is exactly 2
    let shift = cyclic::ShiftMatrix::new(vec![re(1.0), re(1.0), re(1.0), re(2f64.sqrt())]).unwrap();
    let mut budget = SearchConfig::new(1);
    budget.seed = 11;
    budget.restarts = 16;
    let estimate = defect_estimate(&shift.to_matrix(), &budget).unwrap();
    println!(
        "corner-sqrt(2) shift: searched sizes {:?} -> nd in [{}, {}]",
        estimate.probed, estimate.lower, estimate.upper
    );
    let certified = cyclic::certifies_defect_exceeds_one(&shift, DEFAULT_TOL).unwrap();
    println!("two-level obstruction certifies nd >= 2: {certified}");
}
