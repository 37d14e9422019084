//! Equivalences between representations: explicit intertwiners, character
//! comparison, the factorization unitary of a box-sum Fock space, and probes
//! that tell non-isomorphic Fock representations apart.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{build_truncated_fock, creation_monomials, disentangle_unitary, GradedOp, TruncatedFock};
use crate::rmatrix::{box_sum, conjugate, distributivity_residual, lift_with_internal, RMatrix};
use crate::symgroup::{partitions, rep_permutation, Permutation, RepresentationContext};
use crate::tensor::{
    c, identity, op_norm, tensor_power, tensor_power_product, tensor_product, unitarity_residual,
    CMatrix, CVector, ZERO,
};

/// The three explicit constructions of intertwiners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntertwinerKind {
    /// `Q^{⊗n}`, intertwining `S` with `(Q⊗Q) S (Q⊗Q)*`.
    Type1,
    /// `1 ⊗ Q ⊗ Q² ⊗ ⋯ ⊗ Q^{n−1}` for `[S, Q⊗Q] = 0`, intertwining `S` with
    /// `(1⊗Q) S (1⊗Q*)`.
    Type2,
    /// `D_n^{FSF}(ι_n)^{-1} D_n^F(ι_n)`, intertwining `S` with `FSF`.
    Type3,
}

/// Level matrices `Y_0, …, Y_N`.
#[derive(Clone, Debug)]
pub struct IntertwinerFamily {
    pub levels: Vec<CMatrix>,
}

fn require_unitary(q: Option<&CMatrix>, d: usize, tol: f64) -> Result<&CMatrix> {
    let q = q.ok_or_else(|| Error::InvalidParameter("this intertwiner needs a unitary Q".into()))?;
    if q.shape() != (d, d) {
        return Err(Error::Dimension(format!(
            "Q is {}×{} but the one-particle space has dimension {d}",
            q.nrows(),
            q.ncols()
        )));
    }
    let residual = unitarity_residual(q);
    if residual > tol {
        return Err(Error::NotUnitary { residual, tol });
    }
    Ok(q)
}

fn flip_conjugate(s: &RMatrix) -> Result<RMatrix> {
    let f = RMatrix::flip(s.dim());
    RMatrix::from_matrix(s.dim(), f.matrix() * s.matrix() * f.matrix())
}

/// The R-matrix that the given intertwiner maps `s` onto.
pub fn intertwined_rmatrix(kind: IntertwinerKind, q: Option<&CMatrix>, s: &RMatrix, tol: f64) -> Result<RMatrix> {
    let d = s.dim();
    match kind {
        IntertwinerKind::Type1 => conjugate(s, require_unitary(q, d, tol)?, tol),
        IntertwinerKind::Type2 => {
            let q = require_unitary(q, d, tol)?;
            let w = tensor_product(&identity(d), q);
            RMatrix::from_matrix(d, &w * s.matrix() * w.adjoint())
        }
        IntertwinerKind::Type3 => flip_conjugate(s),
    }
}

/// `Y_n` of the given kind.
pub fn intertwiner(kind: IntertwinerKind, q: Option<&CMatrix>, s: &RMatrix, n: usize, tol: f64) -> Result<CMatrix> {
    let d = s.dim();
    match kind {
        IntertwinerKind::Type1 => Ok(tensor_power(require_unitary(q, d, tol)?, n)),
        IntertwinerKind::Type2 => {
            let q = require_unitary(q, d, tol)?;
            let qq = tensor_product(q, q);
            let residual = op_norm(&(s.matrix() * &qq - &qq * s.matrix()));
            if residual > tol {
                return Err(Error::Precondition {
                    what: "S must commute with Q ⊗ Q".into(),
                    residual,
                });
            }
            let mut powers = vec![identity(d)];
            for k in 1..n {
                powers.push(q * &powers[k - 1]);
            }
            Ok(tensor_power_product(powers.iter().take(n)))
        }
        IntertwinerKind::Type3 => {
            let fsf = flip_conjugate(s)?;
            let flip = RMatrix::flip(d);
            let iota = Permutation::total_inversion(n);
            let d_fsf = rep_permutation(&RepresentationContext::new(&fsf, n, tol)?, &iota)?;
            let d_flip = rep_permutation(&RepresentationContext::new(&flip, n, tol)?, &iota)?;
            Ok(d_fsf.adjoint() * d_flip)
        }
    }
}

pub fn intertwiner_family(
    kind: IntertwinerKind,
    q: Option<&CMatrix>,
    s: &RMatrix,
    n_max: usize,
    tol: f64,
) -> Result<IntertwinerFamily> {
    let levels = (0..=n_max)
        .map(|n| intertwiner(kind, q, s, n, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntertwinerFamily { levels })
}

/// `max_{n, i} ‖Y_n D_n^S(τ_i) − D_n^R(τ_i) Y_n‖`.
pub fn verify_intertwiner(y: &IntertwinerFamily, s: &RMatrix, r: &RMatrix) -> Result<f64> {
    let (ls, lr) = (s.local_op(), r.local_op());
    let mut worst = 0.0f64;
    for (n, yn) in y.levels.iter().enumerate() {
        let expected = (r.dim().pow(n as u32), s.dim().pow(n as u32));
        if yn.shape() != expected {
            return Err(Error::Dimension(format!(
                "Y_{n} is {}×{}, expected {}×{}",
                yn.nrows(),
                yn.ncols(),
                expected.0,
                expected.1
            )));
        }
        for i in 0..n.saturating_sub(1) {
            let lhs = ls.apply_right(yn, n, i);
            let rhs = lr.apply_left(yn, n, i);
            worst = worst.max(op_norm(&(lhs - rhs)));
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterVerdict {
    pub n: usize,
    pub equivalent: bool,
    /// Largest `|tr D_n^S(π) − tr D_n^R(π)|` over cycle types.
    pub max_trace_gap: f64,
}

/// Compares the characters of `D_n^S` and `D_n^R` on one representative per
/// conjugacy class, for `n = 0..=n_max`.
pub fn characters_equivalent(s: &RMatrix, r: &RMatrix, n_max: usize, tol: f64) -> Result<Vec<CharacterVerdict>> {
    (0..=n_max)
        .map(|n| {
            let cs = RepresentationContext::new(s, n, tol)?;
            let cr = RepresentationContext::new(r, n, tol)?;
            let mut gap = 0.0f64;
            for cycle_type in partitions(n) {
                let pi = Permutation::from_cycle_type(&cycle_type);
                let ts = rep_permutation(&cs, &pi)?.trace();
                let tr = rep_permutation(&cr, &pi)?.trace();
                gap = gap.max((ts - tr).norm());
            }
            Ok(CharacterVerdict {
                n,
                equivalent: gap <= tol,
                max_trace_gap: gap,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub level_dims_box_sum: Vec<usize>,
    pub level_dims_tensor: Vec<usize>,
    /// `m_n(S ⊞ R) = Σ_{i+j=n} m_i(S) m_j(R)` for every level.
    pub convolution_match: bool,
    pub unitarity_residual: f64,
    pub vacuum_residual: f64,
    pub creation_residual: f64,
    pub annihilation_residual: f64,
    /// Lifting the box-sum against box-summing the lifts.
    pub distributivity_residual: f64,
    #[serde(skip)]
    pub blocks: Vec<CMatrix>,
}

impl FactorizationReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.unitarity_residual,
            self.vacuum_residual,
            self.creation_residual,
            self.annihilation_residual,
            self.distributivity_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Graded tensor product `F_S ⊗ F_R`, truncated at total particle number `N`.
/// Level `n` is `⊕_{i+j=n} level_i(S) ⊗ level_j(R)`, ordered by `i`.
struct ProductFock {
    dims: Vec<usize>,
    // offsets[n][i]: first coordinate of the (i, n−i) summand inside level n.
    offsets: Vec<Vec<usize>>,
}

impl ProductFock {
    fn new(fs: &TruncatedFock, fr: &TruncatedFock, n_max: usize) -> Self {
        let (ds, dr) = (fs.level_dims(), fr.level_dims());
        let mut dims = Vec::new();
        let mut offsets = Vec::new();
        for n in 0..=n_max {
            let mut off = Vec::new();
            let mut total = 0;
            for i in 0..=n {
                off.push(total);
                total += ds[i] * dr[n - i];
            }
            dims.push(total);
            offsets.push(off);
        }
        Self { dims, offsets }
    }

    // `z ⊗ 1` when `left`, else `1 ⊗ z`, for a creation operator `z` of a factor.
    fn lift_creation(&self, z: &GradedOp, fs: &TruncatedFock, fr: &TruncatedFock, left: bool) -> GradedOp {
        let n_max = self.dims.len() - 1;
        let (ds, dr) = (fs.level_dims(), fr.level_dims());
        let blocks = (0..=n_max)
            .map(|n| {
                if n == n_max {
                    return None;
                }
                let mut block = CMatrix::zeros(self.dims[n + 1], self.dims[n]);
                for i in 0..=n {
                    let j = n - i;
                    let (src, dst, piece) = if left {
                        let c_i = z.block(i as isize).expect("below the top level");
                        (self.offsets[n][i], self.offsets[n + 1][i + 1], tensor_product(&c_i, &identity(dr[j])))
                    } else {
                        let c_j = z.block(j as isize).expect("below the top level");
                        (self.offsets[n][i], self.offsets[n + 1][i], tensor_product(&identity(ds[i]), &c_j))
                    };
                    if piece.nrows() > 0 && piece.ncols() > 0 {
                        block.view_mut((dst, src), piece.shape()).copy_from(&piece);
                    }
                }
                Some(block)
            })
            .collect();
        GradedOp::new(1, self.dims.clone(), blocks)
    }
}

/// Threshold below which a reduced column counts as dependent.
const DEPENDENCE_TOL: f64 = 1e-8;

/// Builds `V : F_{S̃ ⊞ R̃} → F_{S̃} ⊗ F_{R̃}` level by level from the creation
/// monomials of both sides, and measures how well it intertwines.
pub fn build_factorization_unitary(
    s: &RMatrix,
    r: &RMatrix,
    m: usize,
    n_max: usize,
    tol: f64,
) -> Result<FactorizationReport> {
    let sl = lift_with_internal(s, m)?;
    let rl = lift_with_internal(r, m)?;
    let summed = box_sum(&sl, &rl);
    let distributivity_residual = distributivity_residual(s, r, m)?;

    let f_sum = build_truncated_fock(&summed, n_max, tol)?;
    let fs = build_truncated_fock(&sl, n_max, tol)?;
    let fr = build_truncated_fock(&rl, n_max, tol)?;
    let product = ProductFock::new(&fs, &fr, n_max);

    let level_dims_box_sum = f_sum.level_dims().to_vec();
    let level_dims_tensor = product.dims.clone();
    let convolution_match = level_dims_box_sum == level_dims_tensor;
    if !convolution_match {
        return Err(Error::RankMismatch {
            level: level_dims_box_sum
                .iter()
                .zip(&level_dims_tensor)
                .position(|(a, b)| a != b)
                .unwrap_or(0),
            detail: format!("box-sum dims {level_dims_box_sum:?} vs tensor dims {level_dims_tensor:?}"),
        });
    }

    let sum_creators = (0..summed.dim())
        .map(|a| f_sum.create_basis(a))
        .collect::<Result<Vec<_>>>()?;
    let mut tensor_creators = Vec::with_capacity(summed.dim());
    for a in 0..sl.dim() {
        tensor_creators.push(product.lift_creation(&fs.create_basis(a)?, &fs, &fr, true));
    }
    for b in 0..rl.dim() {
        tensor_creators.push(product.lift_creation(&fr.create_basis(b)?, &fs, &fr, false));
    }

    let mono_sum = creation_monomials(&sum_creators, n_max);
    let mono_tensor = creation_monomials(&tensor_creators, n_max);
    let blocks = mono_sum
        .iter()
        .zip(&mono_tensor)
        .enumerate()
        .map(|(n, (a, b))| paired_reduction(n, a, b))
        .collect::<Result<Vec<_>>>()?;

    let v = GradedOp::new(0, level_dims_box_sum.clone(), blocks.iter().cloned().map(Some).collect());
    let v_adj = v.adjoint();
    let unitarity_residual = blocks
        .iter()
        .map(|b| op_norm(&(b.adjoint() * b - identity(b.ncols()))))
        .fold(0.0, f64::max);
    let vacuum_residual = (blocks[0][(0, 0)] - c(1.0, 0.0)).norm();

    let mut creation_residual = 0.0f64;
    let mut annihilation_residual = 0.0f64;
    for (zs, zt) in sum_creators.iter().zip(&tensor_creators) {
        let up = v.compose(zs).compose(&v_adj).sub(zt);
        creation_residual = creation_residual.max(up.norm_up_to(n_max.saturating_sub(1)));
        let down = v.compose(&zs.adjoint()).compose(&v_adj).sub(&zt.adjoint());
        annihilation_residual = annihilation_residual.max(down.norm());
    }

    Ok(FactorizationReport {
        level_dims_box_sum,
        level_dims_tensor,
        convolution_match,
        unitarity_residual,
        vacuum_residual,
        creation_residual,
        annihilation_residual,
        distributivity_residual,
        blocks,
    })
}

/// Gram–Schmidt on the columns of `a` in their given order, replaying every
/// column operation on `b`. Returns `V_n = Q_B Q_A†`.
fn paired_reduction(level: usize, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let mut qa: Vec<CVector> = Vec::new();
    let mut qb: Vec<CVector> = Vec::new();
    let mut worst_dependent = 0.0f64;
    for j in 0..a.ncols() {
        let mut va: CVector = a.column(j).into_owned();
        let mut vb: CVector = b.column(j).into_owned();
        // Two passes keep the basis orthonormal to rounding.
        for _ in 0..2 {
            for (x, y) in qa.iter().zip(&qb) {
                let k = x.dotc(&va);
                if k != ZERO {
                    va.axpy(-k, x, c(1.0, 0.0));
                    vb.axpy(-k, y, c(1.0, 0.0));
                }
            }
        }
        let na = va.norm();
        if na > DEPENDENCE_TOL {
            let inv = c(1.0 / na, 0.0);
            qa.push(va * inv);
            qb.push(vb * inv);
        } else {
            worst_dependent = worst_dependent.max(vb.norm());
        }
    }
    if worst_dependent > 1e-6 {
        return Err(Error::RankMismatch {
            level,
            detail: format!("a dependent box-sum monomial has tensor-side remainder {worst_dependent:.3e}"),
        });
    }
    if qa.len() != a.nrows() || a.nrows() != b.nrows() {
        return Err(Error::RankMismatch {
            level,
            detail: format!("monomials span {} of {} dimensions", qa.len(), a.nrows()),
        });
    }
    if qa.is_empty() {
        return Ok(CMatrix::zeros(b.nrows(), a.nrows()));
    }
    Ok(CMatrix::from_columns(&qb) * CMatrix::from_columns(&qa).adjoint())
}

/// Folds `build_factorization_unitary` over a list of summands: factor `k`
/// splits `R_0 ⊞ ⋯ ⊞ R_{k−1}` against `R_k`.
pub fn iterated_factorization(summands: &[RMatrix], m: usize, n_max: usize, tol: f64) -> Result<Vec<FactorizationReport>> {
    let Some((first, rest)) = summands.split_first() else {
        return Ok(Vec::new());
    };
    let mut acc = first.clone();
    let mut reports = Vec::new();
    for r in rest {
        reports.push(build_factorization_unitary(&acc, r, m, n_max, tol)?);
        acc = box_sum(&acc, r);
    }
    Ok(reports)
}

/// Discrete convolution of two level-dimension sequences, truncated to the
/// shorter length.
pub fn convolve_dims(a: &[usize], b: &[usize]) -> Vec<usize> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairPattern {
    /// Anticommute, not both products zero.
    Car,
    /// Commute, not both products zero.
    Ccr,
    /// `z_A z_B = z_B z_A = 0`.
    Null,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraPattern {
    /// Every pair anticommutes (squares vanish).
    Car,
    /// Every pair commutes with nonzero products.
    Ccr,
    Mixed,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairProbe {
    pub a: usize,
    pub b: usize,
    pub anticommutator: f64,
    pub commutator: f64,
    pub product: f64,
    pub pattern: PairPattern,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationProbe {
    pub pairs: Vec<PairProbe>,
    pub overall: AlgebraPattern,
}

impl RepresentationProbe {
    pub fn all_definite(&self) -> bool {
        self.pairs.iter().all(|p| p.pattern != PairPattern::Neither)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub s: RepresentationProbe,
    pub r: RepresentationProbe,
    pub patterns_differ: bool,
}

const PATTERN_TOL: f64 = 1e-10;

fn probe_representation(s: &RMatrix, m: usize, n_max: usize, tol: f64) -> Result<RepresentationProbe> {
    let sl = lift_with_internal(s, m)?;
    let f = build_truncated_fock(&sl, n_max, tol)?;
    let upto = n_max.saturating_sub(2);
    let z = (0..sl.dim())
        .map(|a| f.annihilate_basis(a))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for a in 0..sl.dim() {
        for b in a..sl.dim() {
            let ab = z[a].compose(&z[b]);
            let ba = z[b].compose(&z[a]);
            let anticommutator = ab.add(&ba).norm_up_to(upto);
            let commutator = ab.sub(&ba).norm_up_to(upto);
            let product = ab.norm_up_to(upto).max(ba.norm_up_to(upto));
            let pattern = if product <= PATTERN_TOL {
                PairPattern::Null
            } else if anticommutator <= PATTERN_TOL {
                PairPattern::Car
            } else if commutator <= PATTERN_TOL {
                PairPattern::Ccr
            } else {
                PairPattern::Neither
            };
            pairs.push(PairProbe {
                a,
                b,
                anticommutator,
                commutator,
                product,
                pattern,
            });
        }
    }
    let overall = if pairs.iter().all(|p| matches!(p.pattern, PairPattern::Car | PairPattern::Null)) {
        AlgebraPattern::Car
    } else if pairs.iter().all(|p| p.pattern == PairPattern::Ccr) {
        AlgebraPattern::Ccr
    } else {
        AlgebraPattern::Mixed
    };
    Ok(RepresentationProbe { pairs, overall })
}

/// Commutation patterns of the annihilators in both Fock representations, on
/// source levels `≤ N − 2`.
pub fn rep_obstruction_probe(s: &RMatrix, r: &RMatrix, m: usize, n_max: usize, tol: f64) -> Result<ObstructionReport> {
    if s.dim() != r.dim() {
        return Err(Error::Dimension(format!(
            "base dimensions differ: {} vs {}",
            s.dim(),
            r.dim()
        )));
    }
    let ps = probe_representation(s, m, n_max, tol)?;
    let pr = probe_representation(r, m, n_max, tol)?;
    let patterns_differ = ps
        .pairs
        .iter()
        .zip(&pr.pairs)
        .any(|(x, y)| x.pattern != y.pattern);
    Ok(ObstructionReport {
        s: ps,
        r: pr,
        patterns_differ,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceCheck {
    /// `max ‖Ŷ z*_S(e_A) Ŷ* − z*_R(Y_1 e_A)‖` on levels `≤ N − 1`.
    pub creation_residual: f64,
    /// Same for annihilators.
    pub annihilation_residual: f64,
    /// `Y_n` against `U_n* (Q^{⊗n} ⊗ 1) U_n`.
    pub tensor_form_residual: f64,
    /// Unitarity of `Y` in level coordinates.
    pub unitarity_residual: f64,
    /// Intertwining of the symmetric-group representations.
    pub intertwining_residual: f64,
}

impl EquivalenceCheck {
    pub fn max_residual(&self) -> f64 {
        [
            self.creation_residual,
            self.annihilation_residual,
            self.tensor_form_residual,
            self.unitarity_residual,
            self.intertwining_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Unitary equivalence of the Fock representations of `S̃` and `R̃` for
/// `R = (Q⊗Q) S (Q⊗Q)*`, implemented by `Y_n = (Q ⊗ 1_m)^{⊗n}`.
pub fn conjugation_equivalence_check(s: &RMatrix, q: &CMatrix, m: usize, n_max: usize, tol: f64) -> Result<EquivalenceCheck> {
    let r = conjugate(s, q, tol)?;
    let sl = lift_with_internal(s, m)?;
    let rl = lift_with_internal(&r, m)?;
    let fs = build_truncated_fock(&sl, n_max, tol)?;
    let fr = build_truncated_fock(&rl, n_max, tol)?;
    if fs.level_dims() != fr.level_dims() {
        return Err(Error::RankMismatch {
            level: 0,
            detail: format!("level dims {:?} vs {:?}", fs.level_dims(), fr.level_dims()),
        });
    }
    let y1 = tensor_product(q, &identity(m));
    let family = IntertwinerFamily {
        levels: (0..=n_max).map(|n| tensor_power(&y1, n)).collect(),
    };
    let intertwining_residual = verify_intertwiner(&family, &sl, &rl)?;

    let mut tensor_form_residual = 0.0f64;
    for (n, yn) in family.levels.iter().enumerate() {
        let u = disentangle_unitary(s.dim(), m, n);
        let split = tensor_product(&tensor_power(q, n), &identity(m.pow(n as u32)));
        tensor_form_residual = tensor_form_residual.max(op_norm(&(u.adjoint() * split * &u - yn)));
    }

    let blocks: Vec<Option<CMatrix>> = family
        .levels
        .iter()
        .enumerate()
        .map(|(n, yn)| Some(fr.basis(n).adjoint() * yn * fs.basis(n)))
        .collect();
    let unitarity_residual = blocks
        .iter()
        .flatten()
        .map(|b| op_norm(&(b.adjoint() * b - identity(b.ncols()))))
        .fold(0.0, f64::max);
    let y = GradedOp::new(0, fs.level_dims().to_vec(), blocks);
    let y_adj = y.adjoint();

    let mut creation_residual = 0.0f64;
    let mut annihilation_residual = 0.0f64;
    for a in 0..sl.dim() {
        let zs = fs.create_basis(a)?;
        let zr = fr.create(&y1.column(a).into_owned())?;
        let up = y.compose(&zs).compose(&y_adj).sub(&zr);
        creation_residual = creation_residual.max(up.norm_up_to(n_max.saturating_sub(1)));
        let down = y.compose(&zs.adjoint()).compose(&y_adj).sub(&zr.adjoint());
        annihilation_residual = annihilation_residual.max(down.norm());
    }

    Ok(EquivalenceCheck {
        creation_residual,
        annihilation_residual,
        tensor_form_residual,
        unitarity_residual,
        intertwining_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{make_normal_form, NormalFormSpec, Sign};

    fn rotation(angle: f64) -> CMatrix {
        let (s, co) = angle.sin_cos();
        CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
    }

    fn phase(a: f64, b: f64) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.0, a).exp(), c(0.0, b).exp()]))
    }

    fn nf(blocks: Vec<(Sign, usize)>) -> RMatrix {
        make_normal_form(&NormalFormSpec::new(blocks)).unwrap()
    }

    #[test]
    fn type1_examples() {
        let s = nf(vec![(Sign::Plus, 1), (Sign::Minus, 1)]);
        let id = identity(2);
        let fam = intertwiner_family(IntertwinerKind::Type1, Some(&id), &s, 3, 1e-10).unwrap();
        for (n, y) in fam.levels.iter().enumerate() {
            assert_eq!(*y, identity(2usize.pow(n as u32)));
        }
        let q = rotation(std::f64::consts::FRAC_PI_4);
        let r = intertwined_rmatrix(IntertwinerKind::Type1, Some(&q), &s, 1e-10).unwrap();
        let fam = intertwiner_family(IntertwinerKind::Type1, Some(&q), &s, 4, 1e-10).unwrap();
        assert!(verify_intertwiner(&fam, &s, &r).unwrap() <= 1e-10);
    }

    #[test]
    fn type2_needs_commutation() {
        let s = nf(vec![(Sign::Plus, 1), (Sign::Minus, 1)]);
        let q = phase(0.4, -1.1);
        let r = intertwined_rmatrix(IntertwinerKind::Type2, Some(&q), &s, 1e-10).unwrap();
        let fam = intertwiner_family(IntertwinerKind::Type2, Some(&q), &s, 4, 1e-10).unwrap();
        assert!(verify_intertwiner(&fam, &s, &r).unwrap() <= 1e-10);

        // −F commutes with every Q ⊗ Q.
        let minus_flip = RMatrix::signed_flip(2, Sign::Minus);
        assert!(intertwiner(IntertwinerKind::Type2, Some(&rotation(0.3)), &minus_flip, 2, 1e-10).is_ok());
        let err = intertwiner(IntertwinerKind::Type2, Some(&rotation(0.3)), &s, 2, 1e-10);
        assert!(matches!(err, Err(Error::Precondition { .. })));
        let not_unitary = CMatrix::identity(2, 2) * c(2.0, 0.0);
        assert!(matches!(
            intertwiner(IntertwinerKind::Type1, Some(&not_unitary), &s, 2, 1e-10),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn type3_examples() {
        let f = RMatrix::flip(2);
        let fam = intertwiner_family(IntertwinerKind::Type3, None, &f, 4, 1e-10).unwrap();
        for (n, y) in fam.levels.iter().enumerate() {
            assert!(op_norm(&(y - identity(2usize.pow(n as u32)))) <= 1e-12);
        }
        let s = crate::rmatrix::make_dim2(crate::rmatrix::Dim2Family::R2 {
            p: c(1.0, 0.0),
            q: c(0.0, 1.0),
            r: c(0.0, -1.0),
            s: c(-1.0, 0.0),
        })
        .unwrap();
        let r = intertwined_rmatrix(IntertwinerKind::Type3, None, &s, 1e-10).unwrap();
        let fam = intertwiner_family(IntertwinerKind::Type3, None, &s, 4, 1e-10).unwrap();
        assert!(verify_intertwiner(&fam, &s, &r).unwrap() <= 1e-10);
    }

    #[test]
    fn swapped_levels_fail() {
        let s = nf(vec![(Sign::Plus, 1), (Sign::Minus, 1)]);
        let q = rotation(0.7);
        let r = intertwined_rmatrix(IntertwinerKind::Type1, Some(&q), &s, 1e-10).unwrap();
        let mut fam = intertwiner_family(IntertwinerKind::Type1, Some(&q), &s, 3, 1e-10).unwrap();
        // Level 2 replaced by an intertwiner in the wrong direction.
        fam.levels[2] = tensor_power(&q.adjoint(), 2);
        assert!(verify_intertwiner(&fam, &s, &r).unwrap() > 0.1);
    }

    #[test]
    fn characters() {
        let minus_flip = RMatrix::signed_flip(2, Sign::Minus);
        let split = nf(vec![(Sign::Minus, 1), (Sign::Minus, 1)]);
        let v = characters_equivalent(&minus_flip, &split, 4, 1e-10).unwrap();
        assert!(v.iter().all(|x| x.equivalent));

        let v = characters_equivalent(&RMatrix::flip(2), &RMatrix::signed_identity(2, Sign::Plus), 2, 1e-10).unwrap();
        assert!(v[1].equivalent);
        assert!(!v[2].equivalent);
        assert!((v[2].max_trace_gap - 2.0).abs() < 1e-12);

        let s = nf(vec![(Sign::Plus, 1), (Sign::Minus, 1)]);
        let r = conjugate(&s, &rotation(1.1), 1e-10).unwrap();
        assert!(characters_equivalent(&s, &r, 4, 1e-10).unwrap().iter().all(|x| x.equivalent));
    }

    #[test]
    fn factorization_examples() {
        let plus = RMatrix::signed_identity(1, Sign::Plus);
        let report = build_factorization_unitary(&plus, &plus, 1, 3, 1e-10).unwrap();
        assert_eq!(report.level_dims_box_sum, vec![1, 2, 3, 4]);
        assert!(report.max_residual() <= 1e-10, "{report:?}");

        let minus = RMatrix::signed_identity(1, Sign::Minus);
        let report = build_factorization_unitary(&minus, &minus, 1, 3, 1e-10).unwrap();
        assert_eq!(report.level_dims_box_sum, vec![1, 2, 1, 0]);
        assert!(report.max_residual() <= 1e-10, "{report:?}");
        assert_eq!(report.vacuum_residual, 0.0);
    }

    #[test]
    fn factorization_with_internal_space() {
        let s = RMatrix::signed_flip(2, Sign::Minus);
        let r = RMatrix::signed_identity(1, Sign::Plus);
        let report = build_factorization_unitary(&s, &r, 2, 3, 1e-10).unwrap();
        assert!(report.max_residual() <= 1e-8, "{report:?}");
    }

    #[test]
    fn convolution() {
        assert_eq!(convolve_dims(&[1, 1, 1, 1], &[1, 1, 1, 1]), vec![1, 2, 3, 4]);
        assert_eq!(convolve_dims(&[1, 1, 0, 0], &[1, 1, 0, 0]), vec![1, 2, 1, 0]);
    }

    #[test]
    fn obstruction_examples() {
        let minus_flip = RMatrix::signed_flip(2, Sign::Minus);
        let split = box_sum(
            &RMatrix::signed_identity(1, Sign::Minus),
            &RMatrix::signed_identity(1, Sign::Minus),
        );
        let report = rep_obstruction_probe(&minus_flip, &split, 1, 4, 1e-10).unwrap();
        assert!(report.s.pairs.iter().all(|p| p.anticommutator <= 1e-10));
        assert_eq!(report.s.overall, AlgebraPattern::Car);
        let cross = report.r.pairs.iter().find(|p| p.a == 0 && p.b == 1).unwrap();
        assert!(cross.commutator <= 1e-10 && cross.product > 0.1);
        assert_eq!(report.r.overall, AlgebraPattern::Mixed);
        assert!(report.patterns_differ);

        let same = rep_obstruction_probe(&minus_flip, &minus_flip, 1, 4, 1e-10).unwrap();
        assert!(!same.patterns_differ);
    }

    #[test]
    fn equivalence_examples() {
        let s = nf(vec![(Sign::Plus, 1), (Sign::Minus, 1)]);
        let check = conjugation_equivalence_check(&s, &identity(2), 1, 3, 1e-10).unwrap();
        assert!(check.max_residual() <= 1e-14, "{check:?}");
        let check = conjugation_equivalence_check(&s, &phase(0.3, 2.0), 2, 3, 1e-10).unwrap();
        assert!(check.max_residual() <= 1e-10, "{check:?}");
        let check = conjugation_equivalence_check(&RMatrix::flip(2), &rotation(0.9), 1, 3, 1e-10).unwrap();
        assert!(check.max_residual() <= 1e-10, "{check:?}");
    }
}
