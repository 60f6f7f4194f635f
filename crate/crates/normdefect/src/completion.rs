//! Extension blocks and assembled completion results shared by every
//! completion constructor in the crate.

use crate::defect;
use crate::matrix::ComplexMatrix;
use crate::superdiag::SuperdiagCase;
use crate::{Error, Result};

/// The new blocks of an extension `A_ext = [[A, V],[W, Z]]`.
#[derive(Debug, Clone)]
pub struct ExtensionBlocks {
    /// n x k top-right block.
    pub v: ComplexMatrix,
    /// k x n bottom-left block.
    pub w: ComplexMatrix,
    /// k x k bottom-right block.
    pub z: ComplexMatrix,
    /// Intermediate discriminant used by the two asymmetric ε=2
    /// constructions; 0 elsewhere.
    pub beta: f64,
}

impl ExtensionBlocks {
    pub fn new(v: ComplexMatrix, w: ComplexMatrix, z: ComplexMatrix) -> Self {
        Self {
            v,
            w,
            z,
            beta: 0.0,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// Extension size k.
    pub fn k(&self) -> usize {
        self.z.rows()
    }
}

/// Assembles `[[A, V],[W, Z]]`, checking block conformance.
pub fn assemble(a: &ComplexMatrix, v: &ComplexMatrix, w: &ComplexMatrix, z: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let k = z.require_square()?;
    if v.rows() != n || v.cols() != k || w.rows() != k || w.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "blocks A {n}x{n}, V {}x{}, W {}x{}, Z {k}x{k}",
            v.rows(),
            v.cols(),
            w.rows(),
            w.cols()
        )));
    }
    let d = n + k;
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, a.get(i, j));
        }
        for j in 0..k {
            out.set(i, n + j, v.get(i, j));
        }
    }
    for i in 0..k {
        for j in 0..n {
            out.set(n + i, j, w.get(i, j));
        }
        for j in 0..k {
            out.set(n + i, n + j, z.get(i, j));
        }
    }
    Ok(out)
}

/// An extension matrix together with the defect value it certifies.
///
/// `defect` is exactly the number of added rows/columns; whether it is the
/// minimal possible size is up to the constructor that produced the result.
#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub a_ext: ComplexMatrix,
    pub defect: usize,
    /// Relative normality residual of `a_ext`.
    pub residual: f64,
    /// Classification of the base matrix when it is a 4x4 superdiagonal.
    pub case: Option<SuperdiagCase>,
    pub blocks: Option<ExtensionBlocks>,
}

impl CompletionResult {
    /// Wraps an assembled extension of an n x n base matrix, slicing out the
    /// V/W/Z blocks and measuring the normality residual.
    pub fn from_parts(a_ext: ComplexMatrix, base_dim: usize) -> Result<Self> {
        let d = a_ext.require_square()?;
        if base_dim > d {
            return Err(Error::DimensionMismatch(format!(
                "base dimension {base_dim} exceeds extension size {d}"
            )));
        }
        let k = d - base_dim;
        let residual = defect::normality_residual(&a_ext)?;
        let blocks = if k > 0 {
            Some(ExtensionBlocks::new(
                a_ext.block(0, base_dim, base_dim, k),
                a_ext.block(base_dim, 0, k, base_dim),
                a_ext.block(base_dim, base_dim, k, k),
            ))
        } else {
            None
        };
        Ok(Self {
            a_ext,
            defect: k,
            residual,
            case: None,
            blocks,
        })
    }

    pub fn with_case(mut self, case: SuperdiagCase) -> Self {
        self.case = Some(case);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        if let Some(b) = self.blocks.as_mut() {
            b.beta = beta;
        }
        self
    }

    /// Dimension of the embedded base matrix.
    pub fn base_dim(&self) -> usize {
        self.a_ext.rows() - self.defect
    }
}
