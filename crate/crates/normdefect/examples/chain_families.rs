//! The three n×n chain families that reuse the 4x4 extension entries: a
//! repeated middle weight, a repeated tail, or a repeated head. The
//! construction is assembled, then verified numerically before being
//! reported as a completion.
//!
//! ```bash
//! cargo run -p normdefect --example chain_families
//! ```

use normdefect::matrix::re;
use normdefect::superdiag::{family_completion, Family, FamilyOutcome};

fn main() {
    for (n, a, b, c, family) in [
        (5, 1.0, 3.0, 2.0, Family::One),
        (7, 1.0, 3.0, 2.0, Family::One),
        (6, 2.0, 1.0, 3.0, Family::Two),
        (6, 3.0, 1.0, 2.0, Family::Three),
        (9, 1.5, 2.5, 0.5, Family::One),
    ] {
        let weights = family.weights(n, re(a), re(b), re(c));
        let pattern: Vec<f64> = weights.iter().map(|w| w.re).collect();
        match family_completion(n, re(a), re(b), re(c), family).unwrap() {
            FamilyOutcome::Verified(result) => println!(
                "family {} at n = {n} (weights {pattern:?}): verified, size {}, residual {:.3e}",
                family.index(),
                result.a_ext.rows(),
                result.residual
            ),
            FamilyOutcome::Unverified { residual, .. } => println!(
                "family {} at n = {n} (weights {pattern:?}): NOT verified, residual {residual:.3e}",
                family.index()
            ),
        }
    }

    // condition mismatch is refused rather than silently built
    let err = family_completion(6, re(3.0), re(1.0), re(2.0), Family::Two).unwrap_err();
    println!("family 2 with |c| < |a|: {err}");
}
