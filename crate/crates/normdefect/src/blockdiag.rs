//! Normal-defect composition for block-diagonal matrices.
//!
//! The defect of `diag(A_1, ..., A_m)` equals the sum of the block defects
//! exactly when every block has `nd(A_i) = ε(A_i)` and the commutator
//! inertias agree in sign across blocks (all `i+ >= i-` or all `i+ <= i-`).
//! Mixed signs let positive and negative eigenvalues of different blocks
//! cancel against each other, which can push the combined defect strictly
//! below the sum.

use serde::Serialize;

use crate::completion::CompletionResult;
use crate::cyclic::{self, ShiftMatrix};
use crate::defect;
use crate::matrix::{ComplexMatrix, Inertia};
use crate::superdiag::{self, SuperdiagCase};
use crate::{Error, Result, DEFAULT_TOL};

/// An ordered list of square diagonal blocks.
#[derive(Debug, Clone)]
pub struct BlockList {
    blocks: Vec<ComplexMatrix>,
}

impl BlockList {
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        for b in &blocks {
            b.require_square()?;
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(ComplexMatrix::rows).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(ComplexMatrix::rows).sum()
    }
}

/// Block-diagonal assembly.
pub fn direct_sum(list: &BlockList) -> ComplexMatrix {
    let total = list.total_dim();
    let mut out = ComplexMatrix::zeros(total, total);
    let mut off = 0;
    for b in list.blocks() {
        let n = b.rows();
        for i in 0..n {
            for j in 0..n {
                out.set(off + i, off + j, b.get(i, j));
            }
        }
        off += n;
    }
    out
}

/// Per-block facts feeding the composition check.
#[derive(Debug, Clone, Serialize)]
pub struct BlockInfo {
    pub epsilon: usize,
    pub inertia: Inertia,
    /// Known defect of the block (supplied or derived).
    pub nd: usize,
    pub nd_equals_epsilon: bool,
    /// How the defect was obtained.
    pub derivation: String,
}

/// Outcome of the composition check.
#[derive(Debug, Clone, Serialize)]
pub struct BlockVerdict {
    /// Whether the per-block defects provably add up for the direct sum.
    pub applies: bool,
    pub per_block: Vec<BlockInfo>,
    /// `Σ ε(A_i) = nd(direct sum)` when `applies`.
    pub combined_nd: Option<usize>,
}

/// Derives `nd` for a block with no supplied value. Policy: normal blocks
/// have defect 0; sizes up to 3 have `nd = ε`; 4x4 superdiagonal matrices
/// are covered by the case constructions; cyclic shifts passing the
/// two-level criterion have defect 1. Anything else is refused rather than
/// guessed.
fn derive_nd(block: &ComplexMatrix, index: usize, tol: f64) -> Result<(usize, String)> {
    let eps = defect::epsilon(block, tol)?;
    if defect::normality_residual(block)? <= 1e-12 {
        return Ok((0, "normal".into()));
    }
    let n = block.rows();
    if n <= 3 {
        return Ok((eps, format!("{n}x{n} block: defect equals epsilon")));
    }
    if n == 4 {
        if let Ok(p) = as_superdiag4(block) {
            let case = superdiag::classify(&p, tol);
            return Ok((case.epsilon(), format!("4x4 superdiagonal case {case}")));
        }
    }
    if let Ok(shift) = ShiftMatrix::from_matrix(block, tol) {
        if cyclic::check_defect_one(&shift, tol).holds {
            return Ok((1, "cyclic shift satisfying the two-level criterion".into()));
        }
    }
    Err(Error::UnderivableBlock {
        index,
        reason: format!("no defect certificate for a {n}x{n} block of this shape"),
    })
}

pub(crate) fn as_superdiag4(m: &ComplexMatrix) -> Result<superdiag::SuperdiagParams> {
    let n = m.require_square()?;
    if n != 4 {
        return Err(Error::ConditionViolated("not a 4x4 matrix".into()));
    }
    let eps = DEFAULT_TOL * f64::max(1.0, m.max_abs());
    for i in 0..4 {
        for j in 0..4 {
            if j != i + 1 && m.get(i, j).norm() > eps {
                return Err(Error::ConditionViolated(
                    "entries off the superdiagonal".into(),
                ));
            }
        }
    }
    superdiag::phase_reduce(m.get(0, 1), m.get(1, 2), m.get(2, 3))
}

/// Checks the composition criterion. `known_nd[i] = Some(k)` supplies the
/// defect of block `i`; unsupplied blocks must be derivable.
pub fn block_check(
    list: &BlockList,
    known_nd: Option<&[Option<usize>]>,
    tol: f64,
) -> Result<BlockVerdict> {
    let mut per_block = Vec::with_capacity(list.blocks().len());
    for (i, block) in list.blocks().iter().enumerate() {
        let inertia = block.commutator()?.inertia_rel(tol)?;
        let epsilon = inertia.n_plus.max(inertia.n_minus);
        let supplied = known_nd.and_then(|k| k.get(i).copied().flatten());
        let (nd, derivation) = match supplied {
            Some(k) => (k, "supplied".to_string()),
            None => derive_nd(block, i, tol)?,
        };
        per_block.push(BlockInfo {
            epsilon,
            inertia,
            nd,
            nd_equals_epsilon: nd == epsilon,
            derivation,
        });
    }
    let all_eq = per_block.iter().all(|b| b.nd_equals_epsilon);
    let all_plus = per_block
        .iter()
        .all(|b| b.inertia.n_plus >= b.inertia.n_minus);
    let all_minus = per_block
        .iter()
        .all(|b| b.inertia.n_plus <= b.inertia.n_minus);
    let applies = all_eq && (all_plus || all_minus);
    let combined_nd = applies.then(|| per_block.iter().map(|b| b.epsilon).sum());
    Ok(BlockVerdict {
        applies,
        per_block,
        combined_nd,
    })
}

/// Direct-sums completions of individual blocks and permutes the result so
/// the original blocks lead: an upper-bound certificate
/// `nd(diag A_i) <= Σ k_i`, with no minimality claim.
pub fn compose_completions(completions: &[CompletionResult]) -> Result<CompletionResult> {
    if completions.is_empty() {
        return Err(Error::DimensionMismatch("no completions supplied".into()));
    }
    for (i, c) in completions.iter().enumerate() {
        if c.residual > 1e-8 {
            return Err(Error::NotNormal {
                index: i,
                residual: c.residual,
            });
        }
    }
    let total: usize = completions.iter().map(|c| c.a_ext.rows()).sum();
    let base_total: usize = completions.iter().map(CompletionResult::base_dim).sum();
    // perm[new] = old index in the plain direct sum
    let mut perm = Vec::with_capacity(total);
    let mut offset = 0;
    for c in completions {
        for r in 0..c.base_dim() {
            perm.push(offset + r);
        }
        offset += c.a_ext.rows();
    }
    offset = 0;
    for c in completions {
        for r in 0..c.defect {
            perm.push(offset + c.base_dim() + r);
        }
        offset += c.a_ext.rows();
    }
    let sum = direct_sum(&BlockList::new(
        completions.iter().map(|c| c.a_ext.clone()).collect(),
    )?);
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out.set(i, j, sum.get(perm[i], perm[j]));
        }
    }
    CompletionResult::from_parts(out, base_total)
}

/// Convenience: classification-aware completion of one block, used when
/// assembling block-diagonal certificates.
pub fn complete_block(block: &ComplexMatrix, tol: f64) -> Result<CompletionResult> {
    if defect::normality_residual(block)? <= 1e-12 {
        return CompletionResult::from_parts(block.clone(), block.rows());
    }
    if block.rows() == 4 {
        if let Ok(p) = as_superdiag4(block) {
            let case = superdiag::classify(&p, tol);
            if case != SuperdiagCase::Zero {
                return superdiag::minimal_completion(p.a, p.b, p.c);
            }
        }
    }
    if let Ok(shift) = ShiftMatrix::from_matrix(block, tol) {
        let verdict = cyclic::check_defect_one(&shift, tol);
        if verdict.holds {
            return cyclic::defect_one_completion(&shift, &verdict);
        }
    }
    defect::scaled_unitary_completion(block)
}
