//! Truncated S-symmetric Fock spaces and their ladder operators.
//!
//! Every level `n ≤ N` is stored through an orthonormal basis `B_n` of the
//! range of `P_n^S`; operators act on level coordinates.

use crate::error::{Error, Result};
use crate::rmatrix::RMatrix;
use crate::symgroup::projector_family;
use crate::tensor::{
    c, digits, from_digits, op_norm, orthonormal_range_basis, permutation_matrix, rank, CMatrix,
    CVector, ZERO,
};

/// Largest ambient dimension `base_dim^N` a Fock space may be built for.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Eigenvalue tolerance used when extracting level bases from projectors.
pub const RANGE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct TruncatedFock {
    r: RMatrix,
    max_level: usize,
    bases: Vec<CMatrix>,
    level_dims: Vec<usize>,
}

pub fn build_truncated_fock(r: &RMatrix, max_level: usize, tol: f64) -> Result<TruncatedFock> {
    build_truncated_fock_capped(r, max_level, tol, DEFAULT_SIZE_CAP)
}

pub fn build_truncated_fock_capped(
    r: &RMatrix,
    max_level: usize,
    tol: f64,
    size_cap: usize,
) -> Result<TruncatedFock> {
    let dim = r
        .dim()
        .checked_pow(max_level as u32)
        .filter(|&d| d <= size_cap)
        .ok_or(Error::SizeCap {
            dim: r.dim().saturating_pow(max_level as u32),
            cap: size_cap,
        })?;
    debug_assert!(dim <= size_cap);
    let projectors = projector_family(r, max_level, tol)?;
    let bases = projectors
        .iter()
        .map(|p| orthonormal_range_basis(p, RANGE_TOL))
        .collect::<Result<Vec<_>>>()?;
    let level_dims = bases.iter().map(|b| b.ncols()).collect();
    Ok(TruncatedFock {
        r: r.clone(),
        max_level,
        bases,
        level_dims,
    })
}

impl TruncatedFock {
    pub fn rmatrix(&self) -> &RMatrix {
        &self.r
    }

    pub fn base_dim(&self) -> usize {
        self.r.dim()
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn level_dims(&self) -> &[usize] {
        &self.level_dims
    }

    /// `B_n`, of size `base_dim^n × m_n`.
    pub fn basis(&self, n: usize) -> &CMatrix {
        &self.bases[n]
    }

    pub fn vacuum(&self) -> FockVector {
        FockVector::vacuum(&self.level_dims)
    }

    /// `z*(ψ)` as a graded operator; defined on levels `0..N−1`.
    pub fn create(&self, psi: &CVector) -> Result<GradedOp> {
        let b = self.base_dim();
        if psi.len() != b {
            return Err(Error::Dimension(format!(
                "one-particle vector of length {} for base dimension {b}",
                psi.len()
            )));
        }
        let mut blocks = vec![None; self.max_level + 1];
        for (n, block) in blocks.iter_mut().enumerate().take(self.max_level) {
            let mut acc = CMatrix::zeros(self.level_dims[n + 1], self.level_dims[n]);
            for (a, &coef) in psi.iter().enumerate() {
                if coef != ZERO {
                    acc += self.basis_creation_block(n, a) * coef;
                }
            }
            *block = Some(acc);
        }
        Ok(GradedOp::new(1, self.level_dims.clone(), blocks))
    }

    /// `z(ψ) = z*(ψ)†`.
    pub fn annihilate(&self, psi: &CVector) -> Result<GradedOp> {
        Ok(self.create(psi)?.adjoint())
    }

    pub fn create_basis(&self, a: usize) -> Result<GradedOp> {
        self.create(&self.unit(a)?)
    }

    pub fn annihilate_basis(&self, a: usize) -> Result<GradedOp> {
        self.annihilate(&self.unit(a)?)
    }

    pub fn ladder_operator(&self, psi: &CVector, kind: LadderKind) -> Result<LadderOperator> {
        let op = match kind {
            LadderKind::Create => self.create(psi)?,
            LadderKind::Annihilate => self.annihilate(psi)?,
        };
        Ok(LadderOperator {
            kind,
            psi: psi.clone(),
            op,
        })
    }

    fn unit(&self, a: usize) -> Result<CVector> {
        let b = self.base_dim();
        if a >= b {
            return Err(Error::LabelOutOfRange { label: a, bound: b });
        }
        let mut v = CVector::zeros(b);
        v[a] = c(1.0, 0.0);
        Ok(v)
    }

    // √(n+1) B_{n+1}† (e_a ⊗ B_n): e_a ⊗ x occupies rows a·b^n .. (a+1)·b^n.
    fn basis_creation_block(&self, n: usize, a: usize) -> CMatrix {
        let stride = self.base_dim().pow(n as u32);
        let rows = self.bases[n + 1].rows(a * stride, stride);
        (rows.adjoint() * &self.bases[n]) * c(((n + 1) as f64).sqrt(), 0.0)
    }

    /// Level-coordinate vector of `x` given in ambient coordinates on level `n`.
    pub fn to_level_coords(&self, n: usize, x: &CVector) -> CVector {
        self.bases[n].adjoint() * x
    }

    pub fn to_ambient(&self, n: usize, x: &CVector) -> CVector {
        &self.bases[n] * x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

#[derive(Clone, Debug)]
pub struct LadderOperator {
    pub kind: LadderKind,
    pub psi: CVector,
    pub op: GradedOp,
}

/// An operator on a truncated graded space that raises the level by `shift`.
///
/// The block for source level `n` is stored when `0 ≤ n + shift ≤ N`. Maps
/// into negative levels are zero; maps past `N` are undefined, and products
/// or sums involving them are undefined on that level.
#[derive(Clone, Debug)]
pub struct GradedOp {
    shift: isize,
    dims: Vec<usize>,
    blocks: Vec<Option<CMatrix>>,
}

impl GradedOp {
    pub fn new(shift: isize, dims: Vec<usize>, blocks: Vec<Option<CMatrix>>) -> Self {
        assert_eq!(dims.len(), blocks.len());
        Self {
            shift,
            dims,
            blocks,
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self::scalar(dims, c(1.0, 0.0))
    }

    pub fn scalar(dims: &[usize], z: num_complex::Complex64) -> Self {
        let blocks = dims
            .iter()
            .map(|&d| Some(CMatrix::identity(d, d) * z))
            .collect();
        Self::new(0, dims.to_vec(), blocks)
    }

    pub fn shift(&self) -> isize {
        self.shift
    }

    pub fn max_level(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn dim(&self, level: isize) -> usize {
        if level < 0 || level as usize >= self.dims.len() {
            0
        } else {
            self.dims[level as usize]
        }
    }

    /// The block leaving `level`, or `None` where truncation leaves it undefined.
    pub fn block(&self, level: isize) -> Option<CMatrix> {
        let target = level + self.shift;
        if level > self.max_level() as isize || target > self.max_level() as isize {
            return None;
        }
        if level < 0 || target < 0 {
            return Some(CMatrix::zeros(self.dim(target), self.dim(level)));
        }
        self.blocks[level as usize].clone()
    }

    /// Source levels `0..=N` on which the operator is defined.
    pub fn defined_levels(&self) -> Vec<usize> {
        (0..=self.max_level())
            .filter(|&n| self.block(n as isize).is_some())
            .collect()
    }

    pub fn compose(&self, rhs: &GradedOp) -> GradedOp {
        assert_eq!(self.dims, rhs.dims, "graded operators on different spaces");
        let shift = self.shift + rhs.shift;
        let blocks = (0..=self.max_level())
            .map(|n| {
                let target = n as isize + shift;
                if target < 0 || target > self.max_level() as isize {
                    return None;
                }
                let inner = rhs.block(n as isize)?;
                let outer = self.block(n as isize + rhs.shift)?;
                Some(outer * inner)
            })
            .collect();
        GradedOp::new(shift, self.dims.clone(), blocks)
    }

    pub fn add(&self, rhs: &GradedOp) -> GradedOp {
        self.combine(rhs, c(1.0, 0.0))
    }

    pub fn sub(&self, rhs: &GradedOp) -> GradedOp {
        self.combine(rhs, c(-1.0, 0.0))
    }

    fn combine(&self, rhs: &GradedOp, factor: num_complex::Complex64) -> GradedOp {
        assert_eq!(self.dims, rhs.dims, "graded operators on different spaces");
        assert_eq!(self.shift, rhs.shift, "adding operators of different degree");
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a + b * factor),
                _ => None,
            })
            .collect();
        GradedOp::new(self.shift, self.dims.clone(), blocks)
    }

    pub fn scale(&self, z: num_complex::Complex64) -> GradedOp {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.as_ref().map(|m| m * z))
            .collect();
        GradedOp::new(self.shift, self.dims.clone(), blocks)
    }

    pub fn adjoint(&self) -> GradedOp {
        let shift = -self.shift;
        let blocks = (0..=self.max_level())
            .map(|n| {
                let target = n as isize + shift;
                if target < 0 || target > self.max_level() as isize {
                    return None;
                }
                self.block(target).map(|m| m.adjoint())
            })
            .collect();
        GradedOp::new(shift, self.dims.clone(), blocks)
    }

    /// Largest spectral norm over the defined levels `≤ max_source`.
    pub fn norm_up_to(&self, max_source: usize) -> f64 {
        (0..=max_source.min(self.max_level()))
            .filter_map(|n| self.block(n as isize))
            .map(|m| op_norm(&m))
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.norm_up_to(self.max_level())
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        assert_eq!(self.dims, v.dims(), "vector and operator on different spaces");
        let mut out = FockVector::zeros(&self.dims);
        for (n, x) in v.levels.iter().enumerate() {
            if x.iter().all(|z| *z == ZERO) {
                continue;
            }
            let target = n as isize + self.shift;
            let block = self.block(n as isize).ok_or_else(|| {
                Error::Dimension(format!(
                    "operator leaves the truncated space from level {n}"
                ))
            })?;
            if target >= 0 {
                out.levels[target as usize] += block * x;
            }
        }
        Ok(out)
    }
}

/// A vector of the truncated space, one coordinate vector per level.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    pub levels: Vec<CVector>,
}

impl FockVector {
    pub fn zeros(dims: &[usize]) -> Self {
        Self {
            levels: dims.iter().map(|&d| CVector::zeros(d)).collect(),
        }
    }

    pub fn vacuum(dims: &[usize]) -> Self {
        let mut v = Self::zeros(dims);
        v.levels[0][0] = c(1.0, 0.0);
        v
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|x| x.len()).collect()
    }

    pub fn inner(&self, other: &FockVector) -> num_complex::Complex64 {
        self.levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.dotc(b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }
}

/// `U_n : (ℂ^{d_h} ⊗ ℂ^{d_l})^{⊗n} → (ℂ^{d_h})^{⊗n} ⊗ (ℂ^{d_l})^{⊗n}`.
pub fn disentangle_unitary(d_h: usize, d_l: usize, n: usize) -> CMatrix {
    let pair = d_h * d_l;
    let l_block = d_l.pow(n as u32);
    permutation_matrix(pair.pow(n as u32), |j| {
        let sites = digits(j, pair, n);
        let hs: Vec<usize> = sites.iter().map(|s| s / d_l).collect();
        let ls: Vec<usize> = sites.iter().map(|s| s % d_l).collect();
        from_digits(&hs, d_h) * l_block + from_digits(&ls, d_l)
    })
}

/// Level coordinates of all creation monomials `z*(e_{A_1}) ⋯ z*(e_{A_n}) Ω`,
/// one column per word, words in lexicographic order with `A_1` most
/// significant. Levels `0..=upto`.
pub fn creation_monomials(creators: &[GradedOp], upto: usize) -> Vec<CMatrix> {
    let dims = creators[0].dims().to_vec();
    let mut out = vec![CMatrix::from_element(1, 1, c(1.0, 0.0))];
    for n in 1..=upto {
        let prev = &out[n - 1];
        let mut cols = CMatrix::zeros(dims[n], prev.ncols() * creators.len());
        for (a, z) in creators.iter().enumerate() {
            let block = z.block(n as isize - 1).expect("creation below the top level");
            cols.columns_mut(a * prev.ncols(), prev.ncols())
                .copy_from(&(block * prev));
        }
        out.push(cols);
    }
    out
}

/// `m_n − rank(span of creation monomials of length n)` for `n = 0..=N`.
pub fn cyclicity_defect(f: &TruncatedFock) -> Result<Vec<usize>> {
    let creators = (0..f.base_dim())
        .map(|a| f.create_basis(a))
        .collect::<Result<Vec<_>>>()?;
    let monomials = creation_monomials(&creators, f.max_level());
    Ok(monomials
        .iter()
        .zip(f.level_dims())
        .map(|(m, &dim)| dim - rank(m, 1e-8).min(dim))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{lift_with_internal, Sign};
    use crate::tensor::{identity, max_abs, tensor_product};

    #[test]
    fn level_dimensions() {
        let cases = [
            (RMatrix::signed_identity(2, Sign::Minus), vec![1, 2, 0, 0]),
            (RMatrix::flip(2), vec![1, 2, 3, 4]),
            (RMatrix::signed_flip(2, Sign::Minus), vec![1, 2, 1, 0]),
            (RMatrix::signed_identity(2, Sign::Plus), vec![1, 2, 4, 8]),
        ];
        for (r, dims) in cases {
            let f = build_truncated_fock(&r, 3, 1e-10).unwrap();
            assert_eq!(f.level_dims(), dims.as_slice());
            for n in 0..=3 {
                let b = f.basis(n);
                assert!(max_abs(&(b.adjoint() * b - identity(b.ncols()))) <= 1e-10);
            }
        }
    }

    #[test]
    fn size_cap() {
        let r = RMatrix::flip(4);
        assert!(matches!(
            build_truncated_fock_capped(&r, 4, 1e-10, 100),
            Err(Error::SizeCap { dim: 256, cap: 100 })
        ));
    }

    #[test]
    fn annihilation_kills_vacuum() {
        let f = build_truncated_fock(&RMatrix::signed_flip(2, Sign::Minus), 3, 1e-10).unwrap();
        let z = f.annihilate_basis(1).unwrap();
        let out = z.apply(&f.vacuum()).unwrap();
        assert_eq!(out.norm(), 0.0);
    }

    #[test]
    fn bosonic_single_mode() {
        let f = build_truncated_fock(&RMatrix::flip(1), 5, 1e-10).unwrap();
        let z = f.create_basis(0).unwrap();
        for n in 0..5 {
            let block = z.block(n as isize).unwrap();
            assert!((block[(0, 0)].norm() - ((n + 1) as f64).sqrt()).abs() <= 1e-12);
        }
        assert!(z.block(5).is_none());
    }

    #[test]
    fn antisymmetric_normalization() {
        let f = build_truncated_fock(&RMatrix::signed_flip(2, Sign::Minus), 3, 1e-10).unwrap();
        let z = f.create_basis(0).unwrap();
        let c1 = z.block(1).unwrap();
        assert_eq!(c1.shape(), (1, 2));
        assert!((op_norm(&c1) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn number_operator() {
        let corpus = [
            RMatrix::flip(2),
            RMatrix::signed_flip(2, Sign::Minus),
            RMatrix::signed_identity(3, Sign::Minus),
            lift_with_internal(&RMatrix::signed_identity(2, Sign::Minus), 2).unwrap(),
        ];
        for r in corpus {
            let f = build_truncated_fock(&r, 3, 1e-10).unwrap();
            let mut number = GradedOp::scalar(f.level_dims(), ZERO);
            for a in 0..f.base_dim() {
                let term = f.create_basis(a).unwrap().compose(&f.annihilate_basis(a).unwrap());
                number = number.add(&term);
            }
            for n in 0..=3 {
                let block = number.block(n).unwrap();
                let expected = identity(block.nrows()) * c(n as f64, 0.0);
                assert!(max_abs(&(block - expected)) <= 1e-8);
            }
        }
    }

    #[test]
    fn ladder_adjointness_on_basis_pairs() {
        let f = build_truncated_fock(&RMatrix::signed_flip(2, Sign::Minus), 3, 1e-10).unwrap();
        let psi = CVector::from_vec(vec![c(0.3, -0.2), c(-0.7, 0.5)]);
        let create = f.ladder_operator(&psi, LadderKind::Create).unwrap().op;
        let annihilate = f.ladder_operator(&psi, LadderKind::Annihilate).unwrap().op;
        for n in 0..3 {
            let up = create.block(n as isize).unwrap();
            let down = annihilate.block(n as isize + 1).unwrap();
            for i in 0..up.ncols() {
                for j in 0..up.nrows() {
                    let lhs = up[(j, i)].conj();
                    let rhs = down[(i, j)];
                    assert!((lhs - rhs).norm() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn cyclicity() {
        for r in [
            RMatrix::flip(2),
            RMatrix::signed_identity(2, Sign::Minus),
            RMatrix::signed_flip(3, Sign::Minus),
        ] {
            let f = build_truncated_fock(&r, 3, 1e-10).unwrap();
            assert!(cyclicity_defect(&f).unwrap().iter().all(|&d| d == 0));
        }
    }

    #[test]
    fn flip_level_two_monomials_have_rank_three() {
        let f = build_truncated_fock(&RMatrix::flip(2), 2, 1e-10).unwrap();
        let creators: Vec<_> = (0..2).map(|a| f.create_basis(a).unwrap()).collect();
        let m = creation_monomials(&creators, 2);
        assert_eq!(m[2].ncols(), 4);
        assert_eq!(rank(&m[2], 1e-8), 3);
    }

    #[test]
    fn disentangling() {
        assert_eq!(disentangle_unitary(2, 3, 1), identity(6));
        let u = disentangle_unitary(2, 2, 2);
        // Swapping the middle two of four qubit-sized factors.
        let expected = permutation_matrix(16, |j| {
            let d = digits(j, 2, 4);
            from_digits(&[d[0], d[2], d[1], d[3]], 2)
        });
        assert_eq!(u, expected);

        let s = RMatrix::signed_flip(2, Sign::Minus);
        for m in [1, 2, 3] {
            let lifted = lift_with_internal(&s, m).unwrap();
            let u = disentangle_unitary(2, m, 2);
            let conj = &u * lifted.matrix() * u.adjoint();
            let expected = tensor_product(s.matrix(), RMatrix::flip(m).matrix());
            assert!(max_abs(&(conj - expected)) == 0.0);
        }
    }

    #[test]
    fn graded_truncation() {
        let f = build_truncated_fock(&RMatrix::flip(2), 3, 1e-10).unwrap();
        let z = f.create_basis(0).unwrap();
        let zz = z.compose(&z);
        assert_eq!(zz.defined_levels(), vec![0, 1]);
        let back = f.annihilate_basis(0).unwrap().compose(&z);
        assert_eq!(back.defined_levels(), vec![0, 1, 2]);
    }
}
