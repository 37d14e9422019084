//! Constant R-matrices: construction, box operations, internal-space lifts,
//! the dimension-2 families and crossing symmetry.
//!
//! Index convention: for an R-matrix on `ℂ^d ⊗ ℂ^d`, the entry at row
//! `α·d + β`, column `δ·d + γ` is `S^{αβ}_{δγ} = ⟨e_α ⊗ e_β, S(e_δ ⊗ e_γ)⟩`,
//! all labels 0-based. Every other module inherits this convention.

mod spec;

pub use spec::RMatrixSpec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    self, c, identity, max_abs, op_norm, permutation_matrix, tensor_product, CMatrix, LocalOp,
    ONE, ZERO,
};

/// Default tolerance for axiom checks in double precision.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidParameter(format!(
                "sign must be +1 or -1, got {other}"
            ))),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// An R-matrix on `ℂ^d ⊗ ℂ^d`.
///
/// Box-sums remember their two summands so that sector-resolved checks can
/// be run on the Fock representation later.
#[derive(Clone, Debug)]
pub struct RMatrix {
    dim: usize,
    mat: CMatrix,
    sectors: Option<Box<(RMatrix, RMatrix)>>,
}

impl PartialEq for RMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.mat == other.mat
    }
}

impl RMatrix {
    pub fn from_matrix(dim: usize, mat: CMatrix) -> Result<Self> {
        let d2 = dim * dim;
        if dim == 0 {
            return Err(Error::Dimension("base dimension must be at least 1".into()));
        }
        if mat.nrows() != d2 || mat.ncols() != d2 {
            return Err(Error::Dimension(format!(
                "R-matrix on base dimension {dim} must be {d2}×{d2}, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !tensor::is_finite(&mat) {
            return Err(Error::InvalidParameter("R-matrix has non-finite entries".into()));
        }
        Ok(Self {
            dim,
            mat,
            sectors: None,
        })
    }

    /// The tensor flip `F(x ⊗ y) = y ⊗ x` on `ℂ^d ⊗ ℂ^d`.
    pub fn flip(dim: usize) -> Self {
        let mat = permutation_matrix(dim * dim, |j| (j % dim) * dim + j / dim);
        Self::from_matrix(dim, mat).expect("flip is well formed")
    }

    /// `±1` on `ℂ^d ⊗ ℂ^d`.
    pub fn signed_identity(dim: usize, sign: Sign) -> Self {
        let mat = identity(dim * dim) * c(sign.value(), 0.0);
        Self::from_matrix(dim, mat).expect("identity is well formed")
    }

    pub fn signed_flip(dim: usize, sign: Sign) -> Self {
        let mut f = Self::flip(dim);
        f.mat *= c(sign.value(), 0.0);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// `S^{αβ}_{δγ}`.
    #[inline]
    pub fn entry(&self, alpha: usize, beta: usize, delta: usize, gamma: usize) -> Complex64 {
        let d = self.dim;
        self.mat[(alpha * d + beta, delta * d + gamma)]
    }

    /// The two summands if this matrix was built by [`box_sum`].
    pub fn sectors(&self) -> Option<(&RMatrix, &RMatrix)> {
        self.sectors.as_deref().map(|(s, r)| (s, r))
    }

    pub fn local_op(&self) -> LocalOp {
        LocalOp::new(&self.mat, self.dim)
    }
}

/// Ordered list of normal-form blocks `(ε_i, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormSpec {
    pub blocks: Vec<(Sign, usize)>,
}

impl NormalFormSpec {
    pub fn new(blocks: Vec<(Sign, usize)>) -> Self {
        Self { blocks }
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }
}

/// Iterated box-sum of the blocks `ε_i · 1` on `ℂ^{d_i} ⊗ ℂ^{d_i}`.
pub fn make_normal_form(spec: &NormalFormSpec) -> Result<RMatrix> {
    let mut blocks = spec.blocks.iter();
    let first = blocks
        .next()
        .ok_or_else(|| Error::InvalidParameter("normal form needs at least one block".into()))?;
    let block = |&(sign, d): &(Sign, usize)| {
        if d == 0 {
            Err(Error::InvalidParameter("normal-form block of dimension 0".into()))
        } else {
            Ok(RMatrix::signed_identity(d, sign))
        }
    };
    let mut acc = block(first)?;
    for b in blocks {
        acc = box_sum(&acc, &block(b)?);
    }
    Ok(acc)
}

/// `S ⊞ R`: `S` on `H⊗H`, `R` on `K⊗K`, and the flip between `H⊗K` and `K⊗H`.
pub fn box_sum(s: &RMatrix, r: &RMatrix) -> RMatrix {
    let (dh, dk) = (s.dim, r.dim);
    let d = dh + dk;
    let mut mat = CMatrix::zeros(d * d, d * d);
    for alpha in 0..d {
        for beta in 0..d {
            for delta in 0..d {
                for gamma in 0..d {
                    let in_h = |x: usize| x < dh;
                    let v = if [alpha, beta, delta, gamma].iter().all(|&x| in_h(x)) {
                        s.entry(alpha, beta, delta, gamma)
                    } else if [alpha, beta, delta, gamma].iter().all(|&x| !in_h(x)) {
                        r.entry(alpha - dh, beta - dh, delta - dh, gamma - dh)
                    } else if in_h(delta) != in_h(gamma) && alpha == gamma && beta == delta {
                        ONE
                    } else {
                        ZERO
                    };
                    mat[(alpha * d + beta, delta * d + gamma)] = v;
                }
            }
        }
    }
    RMatrix {
        dim: d,
        mat,
        sectors: Some(Box::new((s.clone(), r.clone()))),
    }
}

/// `S ⊠ R = F₂(S ⊗ R)F₂` on `(H ⊗ K)^{⊗2}`, where `F₂` exchanges the middle
/// factors of `H⊗K⊗H⊗K`. The base index of `h ⊗ k` is `h·d_K + k`.
pub fn box_product(s: &RMatrix, r: &RMatrix) -> RMatrix {
    let (dh, dk) = (s.dim, r.dim);
    let d = dh * dk;
    let mut mat = CMatrix::zeros(d * d, d * d);
    for (row_s, col_s, vs) in nonzeros(&s.mat) {
        let (a1, a2) = (row_s / dh, row_s % dh);
        let (a3, a4) = (col_s / dh, col_s % dh);
        for (row_r, col_r, vr) in nonzeros(&r.mat) {
            let (k1, k2) = (row_r / dk, row_r % dk);
            let (k3, k4) = (col_r / dk, col_r % dk);
            let row = (a1 * dk + k1) * d + (a2 * dk + k2);
            let col = (a3 * dk + k3) * d + (a4 * dk + k4);
            mat[(row, col)] = vs * vr;
        }
    }
    RMatrix {
        dim: d,
        mat,
        sectors: None,
    }
}

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)] != ZERO {
                out.push((i, j, m[(i, j)]));
            }
        }
    }
    out
}

/// `S̃ = S ⊠ F_L` with `L = ℂ^m`, acting on `(H ⊗ L)^{⊗2}` directly.
pub fn lift_with_internal(s: &RMatrix, m: usize) -> Result<RMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("internal dimension must be at least 1".into()));
    }
    if m == 1 {
        return Ok(s.clone());
    }
    Ok(box_product(s, &RMatrix::flip(m)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub unitarity: f64,
    pub involutivity: f64,
    pub yang_baxter: f64,
    pub tol: f64,
}

impl CheckReport {
    pub fn unitary(&self) -> bool {
        self.unitarity <= self.tol
    }

    pub fn involutive(&self) -> bool {
        self.involutivity <= self.tol
    }

    pub fn yang_baxter(&self) -> bool {
        self.yang_baxter <= self.tol
    }

    pub fn all_pass(&self) -> bool {
        self.unitary() && self.involutive() && self.yang_baxter()
    }
}

pub fn involutivity_residual(s: &RMatrix) -> f64 {
    op_norm(&(&s.mat * &s.mat - identity(s.mat.nrows())))
}

pub fn yang_baxter_residual(s: &RMatrix) -> f64 {
    let local = s.local_op();
    let id = identity(s.dim.pow(3));
    // (S⊗1)(1⊗S)(S⊗1), applied right to left.
    let lhs = local.apply_left(&local.apply_left(&local.apply_left(&id, 3, 0), 3, 1), 3, 0);
    let rhs = local.apply_left(&local.apply_left(&local.apply_left(&id, 3, 1), 3, 0), 3, 1);
    op_norm(&(lhs - rhs))
}

/// Unitarity, involutivity and Yang-Baxter residuals, each judged at `tol`.
pub fn check_rmatrix(s: &RMatrix, tol: f64) -> CheckReport {
    CheckReport {
        unitarity: tensor::unitarity_residual(&s.mat),
        involutivity: involutivity_residual(s),
        yang_baxter: yang_baxter_residual(s),
        tol,
    }
}

/// `Ŝ^{αβ}_{δγ} := S^{δα}_{γβ}`.
pub fn crossing_partner(s: &RMatrix) -> RMatrix {
    let d = s.dim;
    let mut mat = CMatrix::zeros(d * d, d * d);
    for alpha in 0..d {
        for beta in 0..d {
            for delta in 0..d {
                for gamma in 0..d {
                    mat[(alpha * d + beta, delta * d + gamma)] = s.entry(delta, alpha, gamma, beta);
                }
            }
        }
    }
    RMatrix {
        dim: d,
        mat,
        sectors: None,
    }
}

/// Largest entrywise deviation `|Ŝ − S|`; zero iff `S` is crossing symmetric.
pub fn crossing_residual(s: &RMatrix) -> f64 {
    max_abs(&(crossing_partner(s).mat - &s.mat))
}

/// The four dimension-2 representatives of unitary R-matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dim2Family {
    R1 { q: Complex64 },
    R2 { p: Complex64, q: Complex64, r: Complex64, s: Complex64 },
    R3 { p: Complex64, q: Complex64, r: Complex64 },
    R4 { q: Complex64 },
}

const UNIT_TOL: f64 = 1e-12;

fn require_unit(name: &str, z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidParameter(format!(
            "{name} = {z} must have unit modulus"
        )));
    }
    Ok(())
}

pub fn make_dim2(family: Dim2Family) -> Result<RMatrix> {
    let z = ZERO;
    let rows: [[Complex64; 4]; 4] = match family {
        Dim2Family::R1 { q } => {
            require_unit("q", q)?;
            [[q, z, z, z], [z, q, z, z], [z, z, q, z], [z, z, z, q]]
        }
        Dim2Family::R2 { p, q, r, s } => {
            for (name, v) in [("p", p), ("q", q), ("r", r), ("s", s)] {
                require_unit(name, v)?;
            }
            [[p, z, z, z], [z, z, q, z], [z, r, z, z], [z, z, z, s]]
        }
        Dim2Family::R3 { p, q, r } => {
            require_unit("q", q)?;
            require_unit("p·r", p * r)?;
            [[z, z, z, p], [z, q, z, z], [z, z, q, z], [r, z, z, z]]
        }
        Dim2Family::R4 { q } => {
            require_unit("q", q)?;
            let h = q / 2f64.sqrt();
            [[h, h, z, z], [-h, h, z, z], [z, z, h, -h], [z, z, h, h]]
        }
    };
    let mat = CMatrix::from_fn(4, 4, |i, j| rows[i][j]);
    RMatrix::from_matrix(2, mat)
}

/// `(Q ⊗ Q) S (Q† ⊗ Q†)`.
pub fn conjugate(s: &RMatrix, q: &CMatrix, tol: f64) -> Result<RMatrix> {
    if q.nrows() != s.dim || q.ncols() != s.dim {
        return Err(Error::Dimension(format!(
            "conjugating unitary must be {0}×{0}, got {1}×{2}",
            s.dim,
            q.nrows(),
            q.ncols()
        )));
    }
    let residual = tensor::unitarity_residual(q);
    if residual > tol {
        return Err(Error::NotUnitary { residual, tol });
    }
    let qq = tensor_product(q, q);
    let mat = &qq * &s.mat * qq.adjoint();
    RMatrix::from_matrix(s.dim, mat)
}

/// One-particle permutation identifying `(H ⊕ K) ⊗ L` with `H̃ ⊕ K̃`, where
/// `H̃ = H ⊗ L`. Columns are indexed by `(a, l) ↦ a·m + l` on the left side.
pub fn distributivity_one_particle(dh: usize, dk: usize, m: usize) -> CMatrix {
    let dim = (dh + dk) * m;
    permutation_matrix(dim, |j| {
        let (a, l) = (j / m, j % m);
        if a < dh {
            a * m + l
        } else {
            dh * m + (a - dh) * m + l
        }
    })
}

/// `‖P · lift(S ⊞ R, m) · P† − lift(S, m) ⊞ lift(R, m)‖` with `P` the explicit
/// two-particle basis permutation.
pub fn distributivity_residual(s: &RMatrix, r: &RMatrix, m: usize) -> Result<f64> {
    let lhs = lift_with_internal(&box_sum(s, r), m)?;
    let rhs = box_sum(&lift_with_internal(s, m)?, &lift_with_internal(r, m)?);
    let p1 = distributivity_one_particle(s.dim, r.dim, m);
    let p = tensor_product(&p1, &p1);
    Ok(op_norm(&(&p * &lhs.mat * p.adjoint() - &rhs.mat)))
}
