//! Classification and closed-form minimal normal completions of 4x4
//! matrices whose only nonzero entries lie on the superdiagonal, plus the
//! three n×n families that extend the same constructions.
//!
//! For `A = superdiag(a, b, c)` the commutator is the diagonal matrix
//! `diag(|a|², |b|²-|a|², -(|b|²-|c|²), -|c|²)`, so `ε(A)` is decided by the
//! magnitude pattern of `(|a|, |b|, |c|)`:
//!
//! * `ε = 0` — the zero matrix (case `zero`);
//! * `ε = 1` — cases `i`–`iv` (all magnitudes equal, or equal after dropping
//!   a single zero endpoint, or a single nonzero entry);
//! * `ε = 2` — case `v` (`|b|` dominant, endpoints nonzero), case `vi`
//!   (exactly one endpoint zero), cases `vii.a`/`vii.b` (`|b|` smallest,
//!   split by the sign of `c²(2a²-b²) - a⁴`);
//! * `ε = 3` — strictly ascending or strictly descending magnitudes.
//!
//! Each case has a completion of size `4 + ε(A)` built from explicit
//! radicals; the constructors below reproduce those matrices entry for
//! entry. Completions of real inputs are real.

use num_complex::Complex64;
use serde::Serialize;

use crate::completion::{assemble, CompletionResult, ExtensionBlocks};
use crate::matrix::{re, ComplexMatrix};
use crate::{Error, Result, DEFAULT_TOL};

/// Phase-reduced parameters of a 4x4 superdiagonal matrix.
///
/// `phase_unitary` is the diagonal unitary `U` with
/// `U · superdiag(a,b,c) · U* = superdiag(|a|,|b|,|c|)`.
#[derive(Debug, Clone)]
pub struct SuperdiagParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub reduced_a: f64,
    pub reduced_b: f64,
    pub reduced_c: f64,
    pub phase_unitary: ComplexMatrix,
}

impl SuperdiagParams {
    /// The original (complex) matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::superdiagonal(&[self.a, self.b, self.c])
    }

    /// The reduced (real nonnegative) matrix.
    pub fn reduced_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::superdiagonal(&[
            re(self.reduced_a),
            re(self.reduced_b),
            re(self.reduced_c),
        ])
    }
}

/// Classification of a 4x4 superdiagonal matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SuperdiagCase {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "vii.a")]
    ViiA,
    #[serde(rename = "vii.b")]
    ViiB,
    #[serde(rename = "eps3-asc")]
    Eps3Asc,
    #[serde(rename = "eps3-desc")]
    Eps3Desc,
}

impl SuperdiagCase {
    /// The defect value `ε(A)` certified for this case.
    pub fn epsilon(self) -> usize {
        match self {
            SuperdiagCase::Zero => 0,
            SuperdiagCase::I | SuperdiagCase::II | SuperdiagCase::III | SuperdiagCase::IV => 1,
            SuperdiagCase::V | SuperdiagCase::VI | SuperdiagCase::ViiA | SuperdiagCase::ViiB => 2,
            SuperdiagCase::Eps3Asc | SuperdiagCase::Eps3Desc => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SuperdiagCase::Zero => "zero",
            SuperdiagCase::I => "i",
            SuperdiagCase::II => "ii",
            SuperdiagCase::III => "iii",
            SuperdiagCase::IV => "iv",
            SuperdiagCase::V => "v",
            SuperdiagCase::VI => "vi",
            SuperdiagCase::ViiA => "vii.a",
            SuperdiagCase::ViiB => "vii.b",
            SuperdiagCase::Eps3Asc => "eps3-asc",
            SuperdiagCase::Eps3Desc => "eps3-desc",
        }
    }
}

impl std::fmt::Display for SuperdiagCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn unit_phase(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 {
        re(1.0)
    } else {
        z / re(n)
    }
}

/// Splits `(a, b, c)` into magnitudes and the diagonal unitary that removes
/// the phases. Zero entries take phase 0.
pub fn phase_reduce(a: Complex64, b: Complex64, c: Complex64) -> Result<SuperdiagParams> {
    for z in [a, b, c] {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    // u4 = 1 and u_k = u_{k+1} * conj(phase of the k-th weight); built from
    // exact unit ratios so real inputs stay exactly real.
    let u4 = re(1.0);
    let u3 = u4 * unit_phase(c).conj();
    let u2 = u3 * unit_phase(b).conj();
    let u1 = u2 * unit_phase(a).conj();
    Ok(SuperdiagParams {
        a,
        b,
        c,
        reduced_a: a.norm(),
        reduced_b: b.norm(),
        reduced_c: c.norm(),
        phase_unitary: ComplexMatrix::diagonal(&[u1, u2, u3, u4]),
    })
}

/// Decides the case of a reduced triple. Near-boundary triples resolve to
/// the equality branch.
///
/// Magnitudes within `tol * max(1, |a|, |b|, |c|)` compare equal; so do
/// magnitudes whose squared difference stays under the zero threshold the
/// commutator inertia uses, which keeps the case's ε consistent with the
/// numerically computed one.
pub fn classify(params: &SuperdiagParams, tol: f64) -> SuperdiagCase {
    let (x, y, z) = (params.reduced_a, params.reduced_b, params.reduced_c);
    let s = x.max(y).max(z).max(1.0);
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let commutator_scale = x2.max((y2 - x2).abs()).max((z2 - y2).abs()).max(z2);
    let thr = tol * f64::max(1.0, commutator_scale);
    let lin = tol * s;
    let eq = |u: f64, v: f64| (u - v).abs() <= lin || (u * u - v * v).abs() <= thr;
    let az = x <= lin || x2 <= thr;
    let bz = y <= lin || y2 <= thr;
    let cz = z <= lin || z2 <= thr;

    match (az, bz, cz) {
        (true, true, true) => SuperdiagCase::Zero,
        (false, true, true) | (true, false, true) | (true, true, false) => SuperdiagCase::IV,
        (true, false, false) => {
            if eq(y, z) {
                SuperdiagCase::II
            } else {
                SuperdiagCase::VI
            }
        }
        (false, false, true) => {
            if eq(x, y) {
                SuperdiagCase::III
            } else {
                SuperdiagCase::VI
            }
        }
        (false, true, false) => vii_split(x, y, z, s, tol),
        (false, false, false) => {
            if eq(x, y) && eq(y, z) {
                return SuperdiagCase::I;
            }
            let y_ge_x = y > x || eq(x, y);
            let y_ge_z = y > z || eq(y, z);
            let y_le_x = y < x || eq(x, y);
            let y_le_z = y < z || eq(y, z);
            if y_ge_x && y_ge_z {
                SuperdiagCase::V
            } else if y_le_x && y_le_z {
                vii_split(x, y, z, s, tol)
            } else if y > x {
                SuperdiagCase::Eps3Asc
            } else {
                SuperdiagCase::Eps3Desc
            }
        }
    }
}

/// The dichotomy inside case vii: exactly one of `c² > a⁴/(2a²-b²)` and
/// `a² > c⁴/(2c²-b²)` holds; the boundary routes to vii.b.
fn vii_split(x: f64, y: f64, z: f64, s: f64, tol: f64) -> SuperdiagCase {
    let delta = z * z * (2.0 * x * x - y * y) - x.powi(4);
    if delta > tol * s.powi(4) {
        SuperdiagCase::ViiA
    } else {
        SuperdiagCase::ViiB
    }
}

/// Square root that tolerates tiny negative drift near case boundaries but
/// fails loudly on genuinely negative radicands.
fn guarded_sqrt(value: f64, scale: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value.sqrt())
    } else if value >= -1e-7 * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::ConditionViolated(format!(
            "{what} is negative ({value:.6e}); the triple does not satisfy the case conditions"
        )))
    }
}

struct MiddleDominantEntries {
    v12: f64,
    v31: f64,
    v42: f64,
    w12: f64,
    w21: f64,
    w24: f64,
    z12: f64,
    z21: f64,
}

/// Extension entries for the `|b|`-dominant ε=2 cases.
fn middle_dominant_entries(a: f64, b: f64, c: f64) -> Result<MiddleDominantEntries> {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let s4 = a.max(b).max(c).max(1.0).powi(4);
    let d = b2 * c2 + b2 * a2 - a2 * c2;
    if d <= 0.0 {
        return Err(Error::ConditionViolated(format!(
            "denominator (bc)^2+(ba)^2-(ac)^2 = {d:.6e} must be positive"
        )));
    }
    let sd = d.sqrt();
    let b2ma2 = guarded_sqrt(b2 - a2, s4, "b^2 - a^2")?;
    let b2mc2 = guarded_sqrt(b2 - c2, s4, "b^2 - c^2")?;
    Ok(MiddleDominantEntries {
        v12: -a * b2ma2 * b2mc2 / sd,
        v31: -b2mc2,
        v42: -c * b2 / sd,
        w12: b2ma2,
        w21: a * b2 / sd,
        w24: c * b2ma2 * b2mc2 / sd,
        z12: a2 * b2mc2 / sd,
        z21: c2 * b2ma2 / sd,
    })
}

struct TailDominantEntries {
    beta: f64,
    v12: f64,
    v22: f64,
    v41: f64,
    w11: f64,
    w12: f64,
    w13: f64,
    w21: f64,
    w22: f64,
    w23: f64,
    z12: f64,
    z22: f64,
}

/// Extension entries for case vii.a (`c` dominant among the endpoints).
fn tail_dominant_entries(a: f64, b: f64, c: f64) -> Result<TailDominantEntries> {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let s4 = a.max(b).max(c).max(1.0).powi(4);
    let beta = 2.0 * a2 * c2 - b2 * c2 - a2 * a2;
    if beta <= 0.0 {
        return Err(Error::ConditionViolated(format!(
            "beta = 2(ac)^2-(bc)^2-a^4 = {beta:.6e} must be positive; the triple is misclassified"
        )));
    }
    let sb = beta.sqrt();
    let a2mb2 = guarded_sqrt(a2 - b2, s4, "a^2 - b^2")?;
    let c2mb2 = guarded_sqrt(c2 - b2, s4, "c^2 - b^2")?;
    if c2mb2 == 0.0 && a2mb2 != 0.0 {
        return Err(Error::ConditionViolated(
            "c^2 - b^2 vanishes in a vii.a triple".into(),
        ));
    }
    // ratio sqrt((a^2-b^2)/(c^2-b^2)); both factors vanish together only
    // when a = b, and every use is multiplied by a power of (a^2-b^2).
    let ratio = if a2mb2 == 0.0 { 0.0 } else { a2mb2 / c2mb2 };
    let poly = a2 * a2 * a2 + 3.0 * a2 * b2 * c2 - c2 * b2 * b2 - c2 * a2 * a2
        - 2.0 * b2 * a2 * a2;
    Ok(TailDominantEntries {
        beta,
        v12: a * (c2 - a2) / sb,
        v22: c * a2mb2 * c2mb2 / sb,
        v41: c,
        w11: -b * c / a,
        w12: b * (a2 - c2) / a2 * ratio,
        w13: c * (b2 - a2) / a2,
        w21: c2 * (b2 - a2) / (a * sb),
        w22: c * (a2 - b2) * (a2 - c2) / a2 * (a2mb2 / (sb * c2mb2.max(f64::MIN_POSITIVE))),
        w23: b * sb / a2,
        z12: b / a2 * sb * ratio,
        z22: -c / (beta * a2) * poly * ratio,
    })
}

struct HeadDominantEntries {
    beta: f64,
    v21: f64,
    v22: f64,
    v31: f64,
    v32: f64,
    v41: f64,
    v42: f64,
    w13: f64,
    w14: f64,
    w21: f64,
    z11: f64,
    z12: f64,
}

/// Extension entries for case vii.b (`a` dominant among the endpoints).
fn head_dominant_entries(a: f64, b: f64, c: f64) -> Result<HeadDominantEntries> {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let s4 = a.max(b).max(c).max(1.0).powi(4);
    let beta = 2.0 * a2 * c2 - a2 * b2 - c2 * c2;
    if beta <= 0.0 {
        return Err(Error::ConditionViolated(format!(
            "beta = 2(ac)^2-(ab)^2-c^4 = {beta:.6e} must be positive; the triple is misclassified"
        )));
    }
    let sb = beta.sqrt();
    let a2mb2 = guarded_sqrt(a2 - b2, s4, "a^2 - b^2")?;
    let c2mb2 = guarded_sqrt(c2 - b2, s4, "c^2 - b^2")?;
    if a2mb2 == 0.0 && c2mb2 != 0.0 {
        return Err(Error::ConditionViolated(
            "a^2 - b^2 vanishes in a vii.b triple".into(),
        ));
    }
    let ratio = if c2mb2 == 0.0 { 0.0 } else { c2mb2 / a2mb2 };
    let poly = c2 * c2 * c2 + 3.0 * a2 * b2 * c2 - a2 * b2 * b2 - a2 * c2 * c2
        - 2.0 * b2 * c2 * c2;
    Ok(HeadDominantEntries {
        beta,
        v21: b * sb / c2,
        v22: a * (b2 - c2) / c2,
        v31: a * (c2 - b2) * (c2 - a2) / c2 * (c2mb2 / (sb * a2mb2.max(f64::MIN_POSITIVE))),
        v32: b * (c2 - a2) / c2 * ratio,
        v41: a2 * (b2 - c2) / (c * sb),
        v42: -a * b / c,
        w13: a * a2mb2 * c2mb2 / sb,
        w14: c * (a2 - c2) / sb,
        w21: a,
        z11: -a / (beta * c2) * poly * ratio,
        z12: b / c2 * sb * ratio,
    })
}

fn validated_case(params: &SuperdiagParams, expected: &[SuperdiagCase]) -> Result<SuperdiagCase> {
    let actual = classify(params, DEFAULT_TOL);
    if expected.contains(&actual) {
        Ok(actual)
    } else {
        Err(Error::CaseMismatch {
            expected: expected
                .iter()
                .map(|c| c.label())
                .collect::<Vec<_>>()
                .join("/"),
            found: actual.label().into(),
        })
    }
}

/// 5x5 completion for the ε=1 cases: the chain closes into a cycle whose
/// weights all share one magnitude.
pub fn complete_eps1(params: &SuperdiagParams, case: SuperdiagCase) -> Result<CompletionResult> {
    let actual = validated_case(
        params,
        &[
            SuperdiagCase::I,
            SuperdiagCase::II,
            SuperdiagCase::III,
            SuperdiagCase::IV,
        ],
    )?;
    if actual != case {
        return Err(Error::CaseMismatch {
            expected: case.label().into(),
            found: actual.label().into(),
        });
    }
    let (x, y, z) = (params.reduced_a, params.reduced_b, params.reduced_c);
    let s = x.max(y).max(z).max(1.0);
    let eps = DEFAULT_TOL * s;
    let a4 = params.reduced_matrix();
    let mut v = ComplexMatrix::zeros(4, 1);
    let mut w = ComplexMatrix::zeros(1, 4);
    match case {
        // d at (4,5), f at (5,1): the 5-cycle.
        SuperdiagCase::I => {
            v.set(3, 0, re(y));
            w.set(0, 0, re(y));
        }
        // a = 0: 4-cycle on coordinates 2..5.
        SuperdiagCase::II => {
            v.set(3, 0, re(y));
            w.set(0, 1, re(y));
        }
        // c = 0: cycle on coordinates 1,2,3,5.
        SuperdiagCase::III => {
            v.set(2, 0, re(y));
            w.set(0, 0, re(y));
        }
        // single nonzero weight: a 3-cycle through the new coordinate.
        SuperdiagCase::IV => {
            if x > eps {
                v.set(1, 0, re(x));
                w.set(0, 0, re(x));
            } else if y > eps {
                v.set(2, 0, re(y));
                w.set(0, 1, re(y));
            } else {
                v.set(3, 0, re(z));
                w.set(0, 2, re(z));
            }
        }
        _ => unreachable!(),
    }
    let z_blk = ComplexMatrix::zeros(1, 1);
    let ext = assemble(&a4, &v, &w, &z_blk)?;
    Ok(CompletionResult::from_parts(ext, 4)?.with_case(case))
}

/// 6x6 completion for cases v and vi.
///
/// The `|b|`-dominant region uses the shared radical formulas; the two
/// boundary faces of case vi where `|b|` sits below the nonzero endpoint
/// (only one endpoint nonzero) extend the active 3x3 block to a scalar
/// multiple of a unitary instead.
pub fn complete_case_v_vi(params: &SuperdiagParams) -> Result<CompletionResult> {
    let case = validated_case(params, &[SuperdiagCase::V, SuperdiagCase::VI])?;
    let (x, y, z) = (params.reduced_a, params.reduced_b, params.reduced_c);
    let s = x.max(y).max(z).max(1.0);
    let eps = DEFAULT_TOL * s;

    if case == SuperdiagCase::VI {
        if x <= eps && y < z {
            return vi_tail_heavy(params).map(|r| r.with_case(case));
        }
        if z <= eps && y < x {
            return vi_head_heavy(params).map(|r| r.with_case(case));
        }
    }

    let e = middle_dominant_entries(x, y, z)?;
    let a4 = params.reduced_matrix();
    let mut v = ComplexMatrix::zeros(4, 2);
    v.set(0, 1, re(e.v12));
    v.set(2, 0, re(e.v31));
    v.set(3, 1, re(e.v42));
    let mut w = ComplexMatrix::zeros(2, 4);
    w.set(0, 1, re(e.w12));
    w.set(1, 0, re(e.w21));
    w.set(1, 3, re(e.w24));
    let mut zb = ComplexMatrix::zeros(2, 2);
    zb.set(0, 1, re(e.z12));
    zb.set(1, 0, re(e.z21));
    let ext = assemble(&a4, &v, &w, &zb)?;
    Ok(CompletionResult::from_parts(ext, 4)?.with_case(case))
}

/// Case vi with `a = 0` and `0 < b < c`: the active 3x3 block
/// `superdiag(b, c)` extends to `c`-times-a-unitary of size 5; the zero
/// first coordinate rides along untouched.
fn vi_tail_heavy(params: &SuperdiagParams) -> Result<CompletionResult> {
    let (x, y, z) = (params.reduced_a, params.reduced_b, params.reduced_c);
    let s = guarded_sqrt(z * z - y * y, z * z, "c^2 - b^2")?;
    let mut ext = ComplexMatrix::zeros(6, 6);
    ext.set(0, 1, re(x));
    ext.set(1, 2, re(y));
    ext.set(2, 3, re(z));
    ext.set(1, 4, re(-s));
    ext.set(3, 5, re(z));
    ext.set(4, 1, re(z));
    ext.set(5, 2, re(s));
    ext.set(5, 4, re(y));
    CompletionResult::from_parts(ext, 4)
}

/// Case vi with `c = 0` and `a > b > 0`: mirror of [`vi_tail_heavy`] on the
/// leading 3x3 block `superdiag(a, b)`.
fn vi_head_heavy(params: &SuperdiagParams) -> Result<CompletionResult> {
    let (x, y, z) = (params.reduced_a, params.reduced_b, params.reduced_c);
    let s = guarded_sqrt(x * x - y * y, x * x, "a^2 - b^2")?;
    let mut ext = ComplexMatrix::zeros(6, 6);
    ext.set(0, 1, re(x));
    ext.set(1, 2, re(y));
    ext.set(2, 3, re(z));
    ext.set(1, 4, re(s));
    ext.set(2, 5, re(x));
    ext.set(4, 0, re(x));
    ext.set(5, 2, re(s));
    ext.set(5, 4, re(-y));
    CompletionResult::from_parts(ext, 4)
}

/// 6x6 completion for case vii.a.
///
/// The two asymmetric conditions are not exclusive: a triple can satisfy
/// both. Accordingly this accepts any triple in the `|b|`-smallest region;
/// the sign of its own discriminant β is the effective precondition.
pub fn complete_case_viia(params: &SuperdiagParams) -> Result<CompletionResult> {
    let case = validated_case(params, &[SuperdiagCase::ViiA, SuperdiagCase::ViiB])?;
    let e = tail_dominant_entries(params.reduced_a, params.reduced_b, params.reduced_c)?;
    let a4 = params.reduced_matrix();
    let mut v = ComplexMatrix::zeros(4, 2);
    v.set(0, 1, re(e.v12));
    v.set(1, 1, re(e.v22));
    v.set(3, 0, re(e.v41));
    let mut w = ComplexMatrix::zeros(2, 4);
    w.set(0, 0, re(e.w11));
    w.set(0, 1, re(e.w12));
    w.set(0, 2, re(e.w13));
    w.set(1, 0, re(e.w21));
    w.set(1, 1, re(e.w22));
    w.set(1, 2, re(e.w23));
    let mut zb = ComplexMatrix::zeros(2, 2);
    zb.set(0, 1, re(e.z12));
    zb.set(1, 1, re(e.z22));
    let ext = assemble(&a4, &v, &w, &zb)?;
    Ok(CompletionResult::from_parts(ext, 4)?
        .with_case(case)
        .with_beta(e.beta))
}

/// 6x6 completion for case vii.b; see [`complete_case_viia`] on the
/// precondition.
pub fn complete_case_viib(params: &SuperdiagParams) -> Result<CompletionResult> {
    let case = validated_case(params, &[SuperdiagCase::ViiA, SuperdiagCase::ViiB])?;
    let e = head_dominant_entries(params.reduced_a, params.reduced_b, params.reduced_c)?;
    let a4 = params.reduced_matrix();
    let mut v = ComplexMatrix::zeros(4, 2);
    v.set(1, 0, re(e.v21));
    v.set(1, 1, re(e.v22));
    v.set(2, 0, re(e.v31));
    v.set(2, 1, re(e.v32));
    v.set(3, 0, re(e.v41));
    v.set(3, 1, re(e.v42));
    let mut w = ComplexMatrix::zeros(2, 4);
    w.set(0, 2, re(e.w13));
    w.set(0, 3, re(e.w14));
    w.set(1, 0, re(e.w21));
    let mut zb = ComplexMatrix::zeros(2, 2);
    zb.set(0, 0, re(e.z11));
    zb.set(0, 1, re(e.z12));
    let ext = assemble(&a4, &v, &w, &zb)?;
    Ok(CompletionResult::from_parts(ext, 4)?
        .with_case(case)
        .with_beta(e.beta))
}

fn reversal(k: usize) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        j.set(i, k - 1 - i, re(1.0));
    }
    j
}

/// The change of variables connecting the vii.a and vii.b extensions:
/// `V' = J₄ Wᵀ J₂`, `W' = J₂ Vᵀ J₄`, `Z' = J₂ Zᵀ J₂` with `J` the reversal
/// matrix. Applying it twice is the identity.
pub fn duality_transform(blocks: &ExtensionBlocks) -> Result<ExtensionBlocks> {
    let n = blocks.v.rows();
    let k = blocks.v.cols();
    if blocks.w.rows() != k || blocks.w.cols() != n || blocks.z.rows() != k {
        return Err(Error::DimensionMismatch(
            "extension blocks are not conformable".into(),
        ));
    }
    let jn = reversal(n);
    let jk = reversal(k);
    let v = jn.multiply(&blocks.w.transpose())?.multiply(&jk)?;
    let w = jk.multiply(&blocks.v.transpose())?.multiply(&jn)?;
    let z = jk.multiply(&blocks.z.transpose())?.multiply(&jk)?;
    Ok(ExtensionBlocks::new(v, w, z).with_beta(blocks.beta))
}

/// 7x7 completion for the strictly monotone ε=3 cases. The result is the
/// dominant magnitude times a unitary.
pub fn complete_eps3(params: &SuperdiagParams) -> Result<CompletionResult> {
    let case = validated_case(params, &[SuperdiagCase::Eps3Asc, SuperdiagCase::Eps3Desc])?;
    let (a, b, c) = (params.reduced_a, params.reduced_b, params.reduced_c);
    let s4 = a.max(b).max(c).max(1.0).powi(4);
    let mut ext = ComplexMatrix::zeros(7, 7);
    ext.set(0, 1, re(a));
    ext.set(1, 2, re(b));
    ext.set(2, 3, re(c));
    match case {
        SuperdiagCase::Eps3Asc => {
            let sca = guarded_sqrt(c * c - a * a, s4, "c^2 - a^2")?;
            let scb = guarded_sqrt(c * c - b * b, s4, "c^2 - b^2")?;
            ext.set(0, 6, re(-sca));
            ext.set(1, 4, re(-scb));
            ext.set(3, 5, re(c));
            ext.set(4, 1, re(sca));
            ext.set(4, 6, re(a));
            ext.set(5, 0, re(c));
            ext.set(6, 2, re(scb));
            ext.set(6, 4, re(b));
        }
        SuperdiagCase::Eps3Desc => {
            let sab = guarded_sqrt(a * a - b * b, s4, "a^2 - b^2")?;
            let sac = guarded_sqrt(a * a - c * c, s4, "a^2 - c^2")?;
            ext.set(1, 4, re(-sab));
            ext.set(2, 5, re(-sac));
            ext.set(3, 6, re(a));
            ext.set(4, 3, re(sac));
            ext.set(4, 5, re(c));
            ext.set(5, 0, re(a));
            ext.set(6, 2, re(sab));
            ext.set(6, 4, re(b));
        }
        _ => unreachable!(),
    }
    Ok(CompletionResult::from_parts(ext, 4)?.with_case(case))
}

/// Classifies, dispatches to the matching constructor, and conjugates the
/// phases back so the original complex matrix sits in the leading block.
/// The defect of the result equals `ε(A)`.
pub fn minimal_completion(a: Complex64, b: Complex64, c: Complex64) -> Result<CompletionResult> {
    let params = phase_reduce(a, b, c)?;
    let case = classify(&params, DEFAULT_TOL);
    let reduced = match case {
        SuperdiagCase::Zero => {
            return Ok(CompletionResult::from_parts(params.matrix(), 4)?.with_case(case));
        }
        SuperdiagCase::I | SuperdiagCase::II | SuperdiagCase::III | SuperdiagCase::IV => {
            complete_eps1(&params, case)?
        }
        SuperdiagCase::V | SuperdiagCase::VI => complete_case_v_vi(&params)?,
        SuperdiagCase::ViiA => complete_case_viia(&params)?,
        SuperdiagCase::ViiB => complete_case_viib(&params)?,
        SuperdiagCase::Eps3Asc | SuperdiagCase::Eps3Desc => complete_eps3(&params)?,
    };
    unreduce(&params, reduced)
}

/// Conjugates a completion of the reduced matrix by `diag(U*, I_k)`. This
/// preserves normality and restores the original complex leading block;
/// extension entries may become complex.
fn unreduce(params: &SuperdiagParams, reduced: CompletionResult) -> Result<CompletionResult> {
    let identity = (0..4).all(|i| params.phase_unitary.get(i, i) == re(1.0));
    if identity {
        return Ok(reduced);
    }
    let d = reduced.a_ext.rows();
    let beta = reduced.blocks.as_ref().map_or(0.0, |b| b.beta);
    let case = reduced.case;
    let mut out = ComplexMatrix::zeros(d, d);
    let factor = |i: usize| {
        if i < 4 {
            params.phase_unitary.get(i, i)
        } else {
            re(1.0)
        }
    };
    for i in 0..d {
        for j in 0..d {
            out.set(
                i,
                j,
                factor(i).conj() * reduced.a_ext.get(i, j) * factor(j),
            );
        }
    }
    let mut result = CompletionResult::from_parts(out, 4)?.with_beta(beta);
    result.case = case;
    Ok(result)
}

/// Which of the three n×n chain families a matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Weights `(a, b, ..., b, c)` with `|b| >= |a|, |c|`.
    #[serde(rename = "1")]
    One,
    /// Weights `(a, b, c, ..., c)` with `|b| <= |a|, |c|` and `|c| >= |a|`.
    #[serde(rename = "2")]
    Two,
    /// Weights `(a, ..., a, b, c)` with `|b| <= |a|, |c|` and `|a| >= |c|`.
    #[serde(rename = "3")]
    Three,
}

impl Family {
    pub fn index(self) -> u8 {
        match self {
            Family::One => 1,
            Family::Two => 2,
            Family::Three => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Family::One),
            2 => Some(Family::Two),
            3 => Some(Family::Three),
            _ => None,
        }
    }

    /// The n-1 chain weights of the family member of size n.
    pub fn weights(self, n: usize, a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
        let mut w = Vec::with_capacity(n - 1);
        match self {
            Family::One => {
                w.push(a);
                w.extend(std::iter::repeat_n(b, n - 3));
                w.push(c);
            }
            Family::Two => {
                w.push(a);
                w.push(b);
                w.extend(std::iter::repeat_n(c, n - 3));
            }
            Family::Three => {
                w.extend(std::iter::repeat_n(a, n - 3));
                w.push(b);
                w.push(c);
            }
        }
        w
    }
}

/// Outcome of a family construction: the assembly is always attempted, but a
/// completion is only returned when the normality residual verifies.
#[derive(Debug, Clone)]
pub enum FamilyOutcome {
    Verified(CompletionResult),
    Unverified { a_ext: ComplexMatrix, residual: f64 },
}

/// Builds the size-(n+2) extension of the n×n chain family member, using the
/// 4x4 extension entries at the matching junctions, then verifies normality
/// numerically. No minimality is claimed.
pub fn family_completion(
    n: usize,
    a: Complex64,
    b: Complex64,
    c: Complex64,
    family: Family,
) -> Result<FamilyOutcome> {
    if n < 4 {
        return Err(Error::ConditionViolated(format!(
            "family constructions need n >= 4 (got {n})"
        )));
    }
    let params = phase_reduce(a, b, c)?;
    let (x, y, z) = (params.reduced_a, params.reduced_b, params.reduced_c);
    let s = x.max(y).max(z).max(1.0);
    let eps = DEFAULT_TOL * s;
    let ok = match family {
        Family::One => y + eps >= x && y + eps >= z,
        Family::Two => y <= x + eps && y <= z + eps && z + eps >= x,
        Family::Three => y <= x + eps && y <= z + eps && x + eps >= z,
    };
    if !ok {
        return Err(Error::ConditionViolated(format!(
            "magnitudes (|a|,|b|,|c|) = ({x:.3}, {y:.3}, {z:.3}) violate the family {} conditions",
            family.index()
        )));
    }

    let d = n + 2;
    let mut ext = ComplexMatrix::zeros(d, d);
    let weights = family.weights(n, re(x), re(y), re(z));
    for (i, w) in weights.iter().enumerate() {
        ext.set(i, i + 1, *w);
    }
    match family {
        Family::One => {
            let e = middle_dominant_entries(x, y, z)?;
            ext.set(0, n + 1, re(e.v12));
            ext.set(n - 2, n, re(e.v31));
            ext.set(n - 1, n + 1, re(e.v42));
            ext.set(n, 1, re(e.w12));
            ext.set(n + 1, 0, re(e.w21));
            ext.set(n + 1, n - 1, re(e.w24));
            ext.set(n, n + 1, re(e.z12));
            ext.set(n + 1, n, re(e.z21));
        }
        Family::Two => {
            let e = tail_dominant_entries(x, y, z)?;
            ext.set(0, n + 1, re(e.v12));
            ext.set(1, n + 1, re(e.v22));
            ext.set(n - 1, n, re(e.v41));
            ext.set(n, 0, re(e.w11));
            ext.set(n, 1, re(e.w12));
            ext.set(n, 2, re(e.w13));
            ext.set(n + 1, 0, re(e.w21));
            ext.set(n + 1, 1, re(e.w22));
            ext.set(n + 1, 2, re(e.w23));
            ext.set(n, n + 1, re(e.z12));
            ext.set(n + 1, n + 1, re(e.z22));
        }
        Family::Three => {
            let e = head_dominant_entries(x, y, z)?;
            ext.set(n - 3, n, re(e.v21));
            ext.set(n - 3, n + 1, re(e.v22));
            ext.set(n - 2, n, re(e.v31));
            ext.set(n - 2, n + 1, re(e.v32));
            ext.set(n - 1, n, re(e.v41));
            ext.set(n - 1, n + 1, re(e.v42));
            ext.set(n, n - 2, re(e.w13));
            ext.set(n, n - 1, re(e.w14));
            ext.set(n + 1, 0, re(e.w21));
            ext.set(n, n, re(e.z11));
            ext.set(n, n + 1, re(e.z12));
        }
    }

    // Undo the phase reduction for the full chain.
    let complex_weights = family.weights(n, a, b, c);
    let mut phases = vec![re(1.0); n];
    for i in (0..n - 1).rev() {
        phases[i] = phases[i + 1] * unit_phase(complex_weights[i]).conj();
    }
    let factor = |i: usize| if i < n { phases[i] } else { re(1.0) };
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out.set(i, j, factor(i).conj() * ext.get(i, j) * factor(j));
        }
    }

    let result = CompletionResult::from_parts(out, n)?;
    if result.residual <= 1e-8 {
        Ok(FamilyOutcome::Verified(result))
    } else {
        Ok(FamilyOutcome::Unverified {
            residual: result.residual,
            a_ext: result.a_ext,
        })
    }
}
