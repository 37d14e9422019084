//! Dense complex matrix kernels shared by every other module.
//!
//! All composite indices are row-major: in `a ⊗ b` the pair `(i, j)` sits at
//! `i * b.nrows() + j`. Multi-site vectors on `(ℂ^b)^{⊗n}` use the same rule,
//! so site 0 is the most significant digit.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Kronecker product with row-major composite indexing.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right. The empty product
/// is the 1×1 identity.
pub fn tensor_power_product<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    factors
        .into_iter()
        .fold(identity(1), |acc, f| tensor_product(&acc, f))
}

pub fn tensor_power(a: &CMatrix, n: usize) -> CMatrix {
    (0..n).fold(identity(1), |acc, _| tensor_product(&acc, a))
}

/// Block-diagonal `a ⊕ b`.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    for (name, m) in [("left", a), ("right", b)] {
        if !m.is_square() {
            return Err(Error::NotSquare {
                what: name,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
    }
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(a);
    out.view_mut((na, na), (nb, nb)).copy_from(b);
    Ok(out)
}

/// Largest entry modulus; 0 for an empty matrix.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral norm (largest singular value). Empty matrices have norm 0.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    // Rank-one and tiny cases dominate the callers; the Gram eigenproblem on
    // the smaller side is both cheaper and accurate enough for residuals.
    let gram = if a.nrows() <= a.ncols() {
        a * a.adjoint()
    } else {
        a.adjoint() * a
    };
    let eig = SymmetricEigen::new(hermitian_part(&gram)).eigenvalues;
    eig.iter().cloned().fold(0.0_f64, f64::max).max(0.0).sqrt()
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * c(0.5, 0.0)
}

pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `‖a†a − I‖` in spectral norm.
pub fn unitarity_residual(a: &CMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    op_norm(&(a.adjoint() * a - identity(a.ncols())))
}

/// Orthonormal basis of the range of an (approximate) orthogonal projector.
///
/// The eigenvalues of the Hermitian part are classified as 1 when above 1/2;
/// any eigenvalue farther than `tol` from both 0 and 1 is rejected.
pub fn orthonormal_range_basis(p: &CMatrix, tol: f64) -> Result<CMatrix> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            what: "projector",
            rows: p.nrows(),
            cols: p.ncols(),
        });
    }
    let n = p.nrows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let skew = max_abs(&(p - p.adjoint()));
    if skew > tol {
        return Err(Error::NotProjector {
            detail: format!("‖p − p†‖ = {skew:.3e} exceeds {tol:.1e}"),
        });
    }
    let eig = SymmetricEigen::new(hermitian_part(p));
    let mut keep = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let dist = lambda.abs().min((lambda - 1.0).abs());
        if dist > tol {
            return Err(Error::NotProjector {
                detail: format!("eigenvalue {lambda:.6e} is not within {tol:.1e} of 0 or 1"),
            });
        }
        if lambda > 0.5 {
            keep.push(k);
        }
    }
    let mut basis = CMatrix::zeros(n, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        basis.set_column(j, &eig.eigenvectors.column(k));
    }
    Ok(basis)
}

/// Numerical rank from singular values above `tol` (relative to 1).
pub fn rank(a: &CMatrix, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let gram = if a.nrows() <= a.ncols() {
        a * a.adjoint()
    } else {
        a.adjoint() * a
    };
    SymmetricEigen::new(hermitian_part(&gram))
        .eigenvalues
        .iter()
        .filter(|&&l| l > tol * tol)
        .count()
}

/// Sparse view of a two-site operator: for every input column, the list of
/// `(output row, value)` pairs with nonzero value.
#[derive(Clone, Debug)]
pub struct LocalOp {
    pub base: usize,
    columns: Vec<Vec<(usize, Complex64)>>,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl LocalOp {
    pub fn new(op: &CMatrix, base: usize) -> Self {
        let d2 = base * base;
        assert_eq!(op.nrows(), d2, "two-site operator must be {d2}×{d2}");
        assert_eq!(op.ncols(), d2, "two-site operator must be {d2}×{d2}");
        let mut columns = vec![Vec::new(); d2];
        let mut rows = vec![Vec::new(); d2];
        for j in 0..d2 {
            for i in 0..d2 {
                let v = op[(i, j)];
                if v != ZERO {
                    columns[j].push((i, v));
                    rows[i].push((j, v));
                }
            }
        }
        Self {
            base,
            columns,
            rows,
        }
    }

    /// `(1^{site} ⊗ op ⊗ 1^{n−site−2}) · m` for `m` with `base^n` rows.
    pub fn apply_left(&self, m: &CMatrix, n: usize, site: usize) -> CMatrix {
        let b = self.base;
        assert!(site + 1 < n, "site {site} out of range for {n} sites");
        let inner = b.pow((n - site - 2) as u32);
        let outer = b.pow(site as u32);
        assert_eq!(m.nrows(), outer * b * b * inner);
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for col in 0..m.ncols() {
            let src = m.column(col);
            let mut dst = out.column_mut(col);
            for o in 0..outer {
                for pair_in in 0..b * b {
                    for t in 0..inner {
                        let x = src[(o * b * b + pair_in) * inner + t];
                        if x == ZERO {
                            continue;
                        }
                        for &(pair_out, v) in &self.columns[pair_in] {
                            dst[(o * b * b + pair_out) * inner + t] += v * x;
                        }
                    }
                }
            }
        }
        out
    }

    /// `m · (1^{site} ⊗ op ⊗ 1^{n−site−2})` for `m` with `base^n` columns.
    pub fn apply_right(&self, m: &CMatrix, n: usize, site: usize) -> CMatrix {
        let b = self.base;
        assert!(site + 1 < n, "site {site} out of range for {n} sites");
        let inner = b.pow((n - site - 2) as u32);
        let outer = b.pow(site as u32);
        assert_eq!(m.ncols(), outer * b * b * inner);
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        // (m L)[r, c] = Σ_{c'} m[r, c'] L[c', c]; row-pair `p` of L feeds the
        // output columns listed in `rows[p]`.
        for o in 0..outer {
            for pair_mid in 0..b * b {
                for t in 0..inner {
                    let c_src = (o * b * b + pair_mid) * inner + t;
                    let targets = &self.rows[pair_mid];
                    if targets.is_empty() {
                        continue;
                    }
                    let src = m.column(c_src);
                    for &(pair_out, v) in targets {
                        let c_dst = (o * b * b + pair_out) * inner + t;
                        out.column_mut(c_dst).axpy(v, &src, ONE);
                    }
                }
            }
        }
        out
    }
}

/// Row-major multi-index of `index` in `(ℂ^base)^{⊗n}`, most significant first.
pub fn digits(mut index: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = index % base;
        index /= base;
    }
    out
}

pub fn from_digits(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Permutation matrix with a one at `(map(j), j)` for every column `j`.
pub fn permutation_matrix(dim: usize, map: impl Fn(usize) -> usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        p[(map(j), j)] = ONE;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0))))
    }

    #[test]
    fn kron_with_scalar_identity_is_noop() {
        let m = CMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64));
        assert_eq!(tensor_product(&identity(1), &m), m);
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(tensor_product(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn kron_sign_pattern() {
        let z = diag(&[1.0, -1.0]);
        assert_eq!(tensor_product(&z, &z), diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_index_convention() {
        let a = CMatrix::from_fn(2, 2, |i, j| c((10 * i + j) as f64, 0.0));
        let b = CMatrix::from_fn(3, 3, |i, j| c((10 * i + j) as f64, 1.0));
        let k = tensor_product(&a, &b);
        for (i, j, p, q) in [(1, 0, 2, 1), (0, 1, 1, 2), (1, 1, 0, 0)] {
            assert_eq!(k[(i * 3 + p, j * 3 + q)], a[(i, j)] * b[(p, q)]);
        }
    }

    #[test]
    fn direct_sum_cases() {
        assert_eq!(
            direct_sum(&diag(&[1.0]), &diag(&[-1.0])).unwrap(),
            diag(&[1.0, -1.0])
        );
        assert_eq!(direct_sum(&identity(2), &identity(3)).unwrap(), identity(5));
        let a = CMatrix::from_fn(2, 2, |i, j| c(i as f64, j as f64));
        assert_eq!(direct_sum(&a, &CMatrix::zeros(0, 0)).unwrap(), a);
        assert!(matches!(
            direct_sum(&CMatrix::zeros(2, 3), &identity(1)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn range_of_identity_and_zero() {
        let b = orthonormal_range_basis(&identity(3), 1e-10).unwrap();
        assert_eq!(b.ncols(), 3);
        assert_abs_diff_eq!(unitarity_residual(&b), 0.0, epsilon = 1e-12);
        let z = orthonormal_range_basis(&CMatrix::zeros(3, 3), 1e-10).unwrap();
        assert_eq!(z.ncols(), 0);
    }

    #[test]
    fn range_of_antisymmetric_projector() {
        // (1 − F)/2 on ℂ²⊗ℂ²; brute-force rank is 1.
        let flip = permutation_matrix(4, |j| (j % 2) * 2 + j / 2);
        let p = (identity(4) - flip) * c(0.5, 0.0);
        let b = orthonormal_range_basis(&p, 1e-10).unwrap();
        assert_eq!(b.ncols(), 1);
        assert_abs_diff_eq!(max_abs(&(&b * b.adjoint() - &p)), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn range_rejects_non_projector() {
        let half = identity(2) * c(0.5, 0.0);
        assert!(matches!(
            orthonormal_range_basis(&half, 1e-10),
            Err(Error::NotProjector { .. })
        ));
        let mut skew = identity(2);
        skew[(0, 1)] = c(0.3, 0.0);
        assert!(orthonormal_range_basis(&skew, 1e-10).is_err());
    }

    #[test]
    fn op_norm_matches_known_values() {
        assert_abs_diff_eq!(op_norm(&diag(&[3.0, -4.0])), 4.0, epsilon = 1e-12);
        let rank_one = CMatrix::from_element(2, 3, c(1.0, 0.0));
        assert_abs_diff_eq!(op_norm(&rank_one), 6f64.sqrt(), epsilon = 1e-12);
        assert_eq!(op_norm(&CMatrix::zeros(0, 4)), 0.0);
    }

    #[test]
    fn local_op_left_and_right_match_dense() {
        let b = 2;
        let n = 3;
        let op = CMatrix::from_fn(4, 4, |i, j| c((i * 4 + j) as f64 * 0.1, (i as f64) - (j as f64)));
        let local = LocalOp::new(&op, b);
        let m = CMatrix::from_fn(8, 8, |i, j| c((i + 2 * j) as f64, (i * j) as f64 * 0.01));
        for site in 0..2 {
            let dense = tensor_power_product(
                [
                    &identity(b.pow(site as u32)),
                    &op,
                    &identity(b.pow((n - site - 2) as u32)),
                ]
                .into_iter(),
            );
            assert_abs_diff_eq!(
                max_abs(&(local.apply_left(&m, n, site) - &dense * &m)),
                0.0,
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                max_abs(&(local.apply_right(&m, n, site) - &m * &dense)),
                0.0,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn digits_roundtrip() {
        for i in 0..27 {
            assert_eq!(from_digits(&digits(i, 3, 3), 3), i);
        }
        assert_eq!(digits(5, 2, 3), vec![1, 0, 1]);
    }
}
