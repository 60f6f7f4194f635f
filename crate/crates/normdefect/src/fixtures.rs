//! Built-in reference matrices: the worked examples this crate reproduces,
//! each with its known completion where one exists.
//!
//! Labels follow a `name` / `name_completion` convention so reports can
//! re-verify every stored completion against its base at runtime instead of
//! trusting stored claims.

use num_complex::Complex64;

use crate::blockdiag::BlockList;
use crate::matrix::{re, ComplexMatrix};
use crate::superdiag;
use crate::{Error, Result};

/// One named matrix inside a fixture.
#[derive(Debug, Clone)]
pub struct FixtureItem {
    pub label: String,
    pub matrix: ComplexMatrix,
    /// Label of the base matrix this one completes, if any.
    pub completes: Option<String>,
}

/// A named bundle of related matrices.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub items: Vec<FixtureItem>,
    pub notes: Vec<String>,
}

impl Fixture {
    pub fn base(&self) -> &ComplexMatrix {
        &self.items[0].matrix
    }

    pub fn item(&self, label: &str) -> Option<&ComplexMatrix> {
        self.items
            .iter()
            .find(|i| i.label == label)
            .map(|i| &i.matrix)
    }
}

pub const NAMES: &[&str] = &[
    "example1",
    "example2",
    "example3",
    "example4",
    "sqrt2shift",
    "eq8-unknown",
    "blockdiag-candidate",
    "eps3-asc",
    "eps3-desc",
];

pub fn get(name: &str) -> Result<Fixture> {
    match name {
        "example1" => Ok(example1()),
        "example2" => Ok(example2()),
        "example3" => Ok(example3()),
        "example4" => Ok(example4()),
        "sqrt2shift" => Ok(sqrt2shift()),
        "eq8-unknown" => Ok(eq8_unknown()),
        "blockdiag-candidate" => Ok(blockdiag_candidate()),
        "eps3-asc" => Ok(eps3_asc()),
        "eps3-desc" => Ok(eps3_desc()),
        other => Err(Error::UnknownFixture(other.into())),
    }
}

fn item(label: &str, matrix: ComplexMatrix) -> FixtureItem {
    FixtureItem {
        label: label.into(),
        matrix,
        completes: None,
    }
}

fn completion_item(label: &str, of: &str, matrix: ComplexMatrix) -> FixtureItem {
    FixtureItem {
        label: label.into(),
        matrix,
        completes: Some(of.into()),
    }
}

fn rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = rows[0].len();
    let flat: Vec<f64> = rows.iter().flat_map(|row| row.iter().copied()).collect();
    ComplexMatrix::from_real(r, c, &flat).expect("fixture rows are finite and rectangular")
}

/// The 4x4 superdiagonal matrix with weights (1, 3, 2) and its minimal 6x6
/// completion.
pub fn example1() -> Fixture {
    let a = ComplexMatrix::superdiagonal(&[re(1.0), re(3.0), re(2.0)]);
    let s = f64::sqrt;
    let completion = rows(&[
        &[0.0, 1.0, 0.0, 0.0, 0.0, -(2.0 / 41.0) * s(410.0)],
        &[0.0, 0.0, 3.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 2.0, -s(5.0), 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, -(18.0 / 41.0) * s(41.0)],
        &[0.0, 2.0 * s(2.0), 0.0, 0.0, 0.0, s(205.0) / 41.0],
        &[
            (9.0 / 41.0) * s(41.0),
            0.0,
            0.0,
            (4.0 / 41.0) * s(410.0),
            (8.0 / 41.0) * s(82.0),
            0.0,
        ],
    ]);
    Fixture {
        name: "example1",
        description: "4x4 superdiagonal (1,3,2), case v, with its minimal 6x6 completion",
        items: vec![item("a", a), completion_item("a_completion", "a", completion)],
        notes: vec!["defect 2: the commutator inertia is (2,2,0)".into()],
    }
}

/// The 5x5 cyclic shift with weights (-2, 1, -1, i, 2): ε = 1 but the
/// two-level run has length 3, so nd >= 2.
pub fn example2() -> Fixture {
    let mut a = ComplexMatrix::superdiagonal(&[
        re(-2.0),
        re(1.0),
        re(-1.0),
        Complex64::new(0.0, 1.0),
    ]);
    a.set(4, 0, re(2.0));
    Fixture {
        name: "example2",
        description: "5x5 cyclic shift with epsilon 1 whose lower level spans three slots",
        items: vec![item("a", a)],
        notes: vec![
            "fails the two-level criterion (j = 3 > 2), so nd >= 2 while epsilon = 1".into(),
        ],
    }
}

pub(crate) fn example3_blocks() -> (ComplexMatrix, ComplexMatrix) {
    let a1 = ComplexMatrix::superdiagonal(&[re(1.0), re(2.0)]);
    let a2 = a1.transpose();
    (a1, a2)
}

/// Block list plus the 9x9 completion of the 6x6 direct sum.
pub fn example3_pair() -> (BlockList, ComplexMatrix) {
    let (a1, a2) = example3_blocks();
    let blocks = BlockList::new(vec![a1, a2]).expect("square blocks");
    let s3 = 3.0f64.sqrt();
    let s7 = 7.0f64.sqrt();
    let s37 = (3.0f64 / 7.0).sqrt();
    let completion = rows(&[
        &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -3.0 / s7],
        &[0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -4.0 / s7],
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -s3, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, s3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s37],
        &[4.0 / s7, 0.0, 0.0, 3.0 / s7, 0.0, 0.0, s37, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0],
    ]);
    (blocks, completion)
}

/// 6x6 block diagonal matrix whose defect (3) is strictly below the sum of
/// its block defects (4).
pub fn example3() -> Fixture {
    let (blocks, completion) = example3_pair();
    let sum = crate::blockdiag::direct_sum(&blocks);
    Fixture {
        name: "example3",
        description: "block diagonal 6x6 whose defect is below the sum of block defects",
        items: vec![
            item("a", sum),
            completion_item("a_completion", "a", completion),
        ],
        notes: vec![
            "block defects are 2 + 2 = 4, but the 9x9 certificate shows nd <= 3".into(),
            "the block commutators have opposed inertia signs (2,1) vs (1,2)".into(),
        ],
    }
}

/// The 4x4 cyclic shift (2,1,1,1) with nd = 2, its 6x6 completion, the
/// extended 5x5 chain, and the 8x8 completion of the extension.
pub fn example4() -> Fixture {
    let mut a = ComplexMatrix::superdiagonal(&[re(2.0), re(1.0), re(1.0)]);
    a.set(3, 0, re(1.0));
    let s3 = 3.0f64.sqrt();
    let completion = rows(&[
        &[0.0, 2.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0, s3, 0.0],
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0, 0.0, -s3],
        &[0.0, 0.0, 0.0, s3, 0.0, 0.0],
        &[s3, 0.0, 0.0, 0.0, 0.0, 1.0],
    ]);
    let extended = ComplexMatrix::superdiagonal(&[re(2.0), re(1.0), re(1.0), re(1.0)]);
    let extended_completion = rows(&[
        &[0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0, 0.0, s3, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -s3, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0],
        &[0.0, 0.0, 0.0, s3, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, s3, 0.0, 1.0, 0.0],
        &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ]);
    Fixture {
        name: "example4",
        description: "4x4 cyclic shift (2,1,1,1) with nd = 2, plus the superdiagonal \
                      5x5 extension and its 8x8 completion",
        items: vec![
            item("a", a),
            completion_item("a_completion", "a", completion),
            item("a_tilde", extended),
            completion_item("a_tilde_completion", "a_tilde", extended_completion),
        ],
        notes: vec![
            "the shift fails the two-level criterion, so nd >= 2; the 6x6 shows nd = 2".into(),
            "appending a row/column of the chain keeps a similar completion one size larger"
                .into(),
        ],
    }
}

/// The cyclic shift (1,1,1,sqrt 2): both defect bounds are strict, nd = 2.
pub fn sqrt2shift() -> Fixture {
    let mut a = ComplexMatrix::superdiagonal(&[re(1.0), re(1.0), re(1.0)]);
    a.set(3, 0, re(2.0f64.sqrt()));
    let completion = rows(&[
        &[0.0, 1.0, 0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        &[2.0f64.sqrt(), 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
    ]);
    Fixture {
        name: "sqrt2shift",
        description: "4x4 cyclic shift with corner sqrt(2): epsilon 1, rank bound 3, nd = 2",
        items: vec![item("a", a), completion_item("a_completion", "a", completion)],
        notes: vec![
            "both bracket bounds are strict: epsilon = 1 < nd = 2 < 3 = rank bound".into(),
        ],
    }
}

/// The 5x5 superdiagonal chain (2,1,1,1): epsilon 2, defect undetermined.
/// Its companion 8x8 completion certifies nd <= 3.
pub fn eq8_unknown() -> Fixture {
    let a = ComplexMatrix::superdiagonal(&[re(2.0), re(1.0), re(1.0), re(1.0)]);
    let companion = example4()
        .item("a_tilde_completion")
        .expect("example4 carries the 8x8 companion")
        .clone();
    Fixture {
        name: "eq8-unknown",
        description: "5x5 superdiagonal chain (2,1,1,1) whose exact defect is undetermined",
        items: vec![
            item("a", a),
            completion_item("a_companion_completion", "a", companion),
        ],
        notes: vec![
            "epsilon gives nd >= 2; the companion 8x8 completion gives nd <= 3".into(),
            "no point value is certified for this matrix".into(),
        ],
    }
}

/// 6x6 block diagonal candidate whose defect is undetermined.
pub fn blockdiag_candidate() -> Fixture {
    let b1 = ComplexMatrix::superdiagonal(&[re(1.0)]);
    let mut b2 = ComplexMatrix::superdiagonal(&[re(1.0), re(1.0), re(1.0)]);
    b2.set(3, 0, re(2.0));
    let sum = crate::blockdiag::direct_sum(
        &BlockList::new(vec![b1, b2]).expect("square blocks"),
    );
    Fixture {
        name: "blockdiag-candidate",
        description: "2x2 nilpotent block plus the sqrt-free 4x4 shift (1,1,1,2); \
                      a candidate for defect additivity without inertia alignment",
        items: vec![item("a", sum)],
        notes: vec!["the defect of this matrix is undetermined".into()],
    }
}

fn eps3(name: &'static str, a: f64, b: f64, c: f64) -> Fixture {
    let base = ComplexMatrix::superdiagonal(&[re(a), re(b), re(c)]);
    let completion = superdiag::minimal_completion(re(a), re(b), re(c))
        .expect("monotone triple has the 7x7 construction")
        .a_ext;
    Fixture {
        name,
        description: "4x4 superdiagonal with strictly monotone magnitudes: epsilon 3",
        items: vec![item("a", base), completion_item("a_completion", "a", completion)],
        notes: vec!["the three-step ladder extends to a scaled unitary of size 7".into()],
    }
}

/// Strictly ascending magnitudes (1, 2, 3).
pub fn eps3_asc() -> Fixture {
    eps3("eps3-asc", 1.0, 2.0, 3.0)
}

/// Strictly descending magnitudes (3, 2, 1).
pub fn eps3_desc() -> Fixture {
    eps3("eps3-desc", 3.0, 2.0, 1.0)
}
