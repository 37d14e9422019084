//! Permutations, the representations `D_n^S` of the symmetric group generated
//! by an involutive R-matrix, and the symmetrization projectors `P_n^S`.
//!
//! `D_n^S(τ_i)` acts as `S` on tensor sites `i, i+1` (0-based) of
//! `(ℂ^b)^{⊗n}`. A permutation sends the factor at site `i` to site `π(i)`,
//! and composition is `(π ∘ ρ)(i) = π(ρ(i))`, so `D(π∘ρ) = D(π)D(ρ)`.

use crate::error::{Error, Result};
use crate::rmatrix::{involutivity_residual, RMatrix};
use crate::tensor::{c, identity, tensor_product, CMatrix, LocalOp};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// `τ_i`, exchanging sites `i` and `i + 1`.
    pub fn transposition(n: usize, i: usize) -> Self {
        assert!(i + 1 < n, "τ_{i} does not exist in S_{n}");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, i + 1);
        Self { images }
    }

    /// `ι_n`, reversing all sites.
    pub fn total_inversion(n: usize) -> Self {
        Self {
            images: (0..n).rev().collect(),
        }
    }

    /// `τ_{w[0]} ∘ τ_{w[1]} ∘ …`.
    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter()
            .fold(Self::identity(n), |acc, &i| acc.compose(&Self::transposition(n, i)))
    }

    /// Consecutive cycles of the given lengths, e.g. `[2, 1]` ↦ `(0 1)(2)`.
    pub fn from_cycle_type(lengths: &[usize]) -> Self {
        let n = lengths.iter().sum();
        let mut images: Vec<usize> = (0..n).collect();
        let mut start = 0;
        for &len in lengths {
            for k in 0..len {
                images[start + k] = start + (k + 1) % len;
            }
            start += len;
        }
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    /// A reduced word `w` with `self = τ_{w[0]} ∘ τ_{w[1]} ∘ …`, from a
    /// bubble sort of the image array.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut arr = self.images.clone();
        let mut swaps = Vec::new();
        let n = arr.len();
        for pass in 0..n {
            for j in 0..n.saturating_sub(pass + 1) {
                if arr[j] > arr[j + 1] {
                    arr.swap(j, j + 1);
                    swaps.push(j);
                }
            }
        }
        // arr ∘ τ_{s1} ∘ … ∘ τ_{sk} = id, hence self = τ_{sk} ∘ … ∘ τ_{s1}.
        swaps.reverse();
        swaps
    }

    pub fn inversions(&self) -> usize {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count()
    }

    /// Cycle lengths in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

/// `σ_k ∈ S_n`: the factor at site 1 moves to site `k`, sites `2..k` shift
/// down by one (1-based `k`). Equals `τ_{k−1} ⋯ τ_1`; `σ_1` is the identity.
pub fn sigma_cycle(n: usize, k: usize) -> Result<Permutation> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "σ_k needs 1 ≤ k ≤ n, got k = {k}, n = {n}"
        )));
    }
    let mut images: Vec<usize> = (0..n).collect();
    images[0] = k - 1;
    for (j, img) in images.iter_mut().enumerate().take(k).skip(1) {
        *img = j - 1;
    }
    Ok(Permutation { images })
}

/// Integer partitions of `n` in non-increasing part order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Adjacent-swap positions of the Steinhaus–Johnson–Trotter order: starting
/// from the identity arrangement and swapping positions `j, j+1` at each step
/// visits every permutation of `n` letters exactly once.
pub fn sjt_swaps(n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut dir: Vec<isize> = vec![-1; n];
    let mut swaps = Vec::new();
    loop {
        let mut mobile: Option<usize> = None;
        for i in 0..n {
            let v = perm[i];
            let j = i as isize + dir[v];
            if j >= 0 && (j as usize) < n && perm[j as usize] < v && mobile.is_none_or(|m| perm[m] < v) {
                mobile = Some(i);
            }
        }
        let Some(i) = mobile else { break };
        let v = perm[i];
        let j = (i as isize + dir[v]) as usize;
        perm.swap(i, j);
        swaps.push(i.min(j));
        for (w, d) in dir.iter_mut().enumerate() {
            if w > v {
                *d = -*d;
            }
        }
    }
    swaps
}

/// An involutive R-matrix together with a particle number `n`.
#[derive(Clone, Debug)]
pub struct RepresentationContext<'a> {
    r: &'a RMatrix,
    n: usize,
    space_dim: usize,
    local: LocalOp,
}

impl<'a> RepresentationContext<'a> {
    pub fn new(r: &'a RMatrix, n: usize, tol: f64) -> Result<Self> {
        let residual = involutivity_residual(r);
        if residual > tol {
            return Err(Error::NotInvolutive { residual, tol });
        }
        Ok(Self {
            r,
            n,
            space_dim: r.dim().pow(n as u32),
            local: r.local_op(),
        })
    }

    pub fn rmatrix(&self) -> &RMatrix {
        self.r
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn local(&self) -> &LocalOp {
        &self.local
    }
}

/// `D_n^S(τ_i)` as a dense matrix.
pub fn rep_generator(ctx: &RepresentationContext, i: usize) -> CMatrix {
    ctx.local.apply_left(&identity(ctx.space_dim), ctx.n, i)
}

/// `D_n^S(π)`, multiplied out along the bubble-sort reduced word of `π`.
pub fn rep_permutation(ctx: &RepresentationContext, pi: &Permutation) -> Result<CMatrix> {
    if pi.len() != ctx.n {
        return Err(Error::Dimension(format!(
            "permutation of {} letters used at level {}",
            pi.len(),
            ctx.n
        )));
    }
    Ok(rep_word(ctx, &pi.reduced_word()))
}

/// `D(τ_{w[0]}) D(τ_{w[1]}) ⋯` for an arbitrary (not necessarily reduced) word.
pub fn rep_word(ctx: &RepresentationContext, word: &[usize]) -> CMatrix {
    word.iter()
        .rev()
        .fold(identity(ctx.space_dim), |acc, &i| ctx.local.apply_left(&acc, ctx.n, i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorMethod {
    /// Mean over all `n!` group elements.
    Brute,
    /// `P_n = (1/n) Σ_k D(σ_k)(1 ⊗ P_{n−1})`.
    Recursive,
}

/// Default cap on `n` for brute-force enumeration of `S_n`.
pub const DEFAULT_BRUTE_CAP: usize = 8;

pub fn projector(ctx: &RepresentationContext, method: ProjectorMethod) -> Result<CMatrix> {
    projector_capped(ctx, method, DEFAULT_BRUTE_CAP)
}

pub fn projector_capped(
    ctx: &RepresentationContext,
    method: ProjectorMethod,
    brute_cap: usize,
) -> Result<CMatrix> {
    match method {
        ProjectorMethod::Brute => {
            if ctx.n > brute_cap {
                return Err(Error::EnumerationCap {
                    n: ctx.n,
                    cap: brute_cap,
                });
            }
            Ok(brute_projector(ctx))
        }
        ProjectorMethod::Recursive => Ok(recursive_projectors(ctx.r, ctx.n, &ctx.local)
            .pop()
            .expect("at least P_0")),
    }
}

// Sequential sum in SJT order; the summation order is fixed, so the result is
// bitwise reproducible.
fn brute_projector(ctx: &RepresentationContext) -> CMatrix {
    let n = ctx.n;
    let mut current = identity(ctx.space_dim);
    let mut sum = current.clone();
    let mut count = 1usize;
    for j in sjt_swaps(n) {
        current = ctx.local.apply_right(&current, n, j);
        sum += &current;
        count += 1;
    }
    sum * c(1.0 / count as f64, 0.0)
}

fn recursive_projectors(r: &RMatrix, n_max: usize, local: &LocalOp) -> Vec<CMatrix> {
    let b = r.dim();
    let mut out = vec![identity(1)];
    for n in 1..=n_max {
        if n == 1 {
            out.push(identity(b));
            continue;
        }
        let shifted = tensor_product(&identity(b), &out[n - 1]);
        let mut term = shifted.clone();
        let mut sum = shifted;
        for k in 2..=n {
            // D(σ_k) = D(τ_{k−1}) D(σ_{k−1}); τ_{k−1} acts on sites k−2, k−1.
            term = local.apply_left(&term, n, k - 2);
            sum += &term;
        }
        out.push(sum * c(1.0 / n as f64, 0.0));
    }
    out
}

/// `[P_0, P_1, …, P_{n_max}]` by the recursive formula.
pub fn projector_family(r: &RMatrix, n_max: usize, tol: f64) -> Result<Vec<CMatrix>> {
    let ctx = RepresentationContext::new(r, n_max, tol)?;
    Ok(recursive_projectors(r, n_max, &ctx.local))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{make_normal_form, NormalFormSpec, Sign};
    use crate::tensor::{from_digits, max_abs, digits, permutation_matrix, op_norm};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn factor_permutation_matrix(pi: &Permutation, b: usize) -> CMatrix {
        let n = pi.len();
        // The factor at site i lands at site π(i).
        permutation_matrix(b.pow(n as u32), |j| {
            let src = digits(j, b, n);
            let mut dst = vec![0; n];
            for i in 0..n {
                dst[pi.apply(i)] = src[i];
            }
            from_digits(&dst, b)
        })
    }

    #[test]
    fn sigma_cycle_examples() {
        for n in 1..5 {
            assert_eq!(sigma_cycle(n, 1).unwrap(), Permutation::identity(n));
        }
        assert_eq!(sigma_cycle(2, 2).unwrap(), Permutation::transposition(2, 0));
        assert_eq!(sigma_cycle(3, 3).unwrap().images(), &[2, 0, 1]);
        assert_eq!(
            sigma_cycle(3, 3).unwrap(),
            Permutation::from_word(3, &[1, 0])
        );
        assert!(sigma_cycle(3, 0).is_err());
        assert!(sigma_cycle(3, 4).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![2, 0]).is_err());
        assert!(Permutation::new(vec![1, 2, 0]).is_ok());
    }

    #[test]
    fn sjt_visits_everything_once() {
        for n in 0..=6 {
            let mut arr: Vec<usize> = (0..n).collect();
            let mut seen = std::collections::HashSet::new();
            seen.insert(arr.clone());
            for j in sjt_swaps(n) {
                arr.swap(j, j + 1);
                assert!(seen.insert(arr.clone()));
            }
            assert_eq!(seen.len(), (1..=n).product::<usize>());
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
        for p in partitions(5) {
            assert_eq!(Permutation::from_cycle_type(&p).cycle_type(), p);
        }
    }

    #[test]
    fn rep_examples() {
        let s = RMatrix::signed_flip(2, Sign::Minus);
        let ctx = RepresentationContext::new(&s, 2, 1e-10).unwrap();
        assert_eq!(rep_permutation(&ctx, &Permutation::identity(2)).unwrap(), identity(4));
        assert_eq!(
            rep_permutation(&ctx, &Permutation::transposition(2, 0)).unwrap(),
            *s.matrix()
        );

        let f = RMatrix::flip(2);
        let ctx = RepresentationContext::new(&f, 3, 1e-10).unwrap();
        let iota = Permutation::total_inversion(3);
        assert_eq!(
            rep_permutation(&ctx, &iota).unwrap(),
            factor_permutation_matrix(&iota, 2)
        );
    }

    #[test]
    fn flip_rep_is_the_factor_permutation() {
        let f = RMatrix::flip(3);
        let ctx = RepresentationContext::new(&f, 3, 1e-10).unwrap();
        for images in [vec![1, 2, 0], vec![2, 0, 1], vec![0, 2, 1]] {
            let pi = Permutation::new(images).unwrap();
            assert_eq!(rep_permutation(&ctx, &pi).unwrap(), factor_permutation_matrix(&pi, 3));
        }
    }

    #[test]
    fn non_involutive_rejected() {
        let r4 = crate::rmatrix::make_dim2(crate::rmatrix::Dim2Family::R4 {
            q: crate::tensor::ONE,
        })
        .unwrap();
        assert!(matches!(
            RepresentationContext::new(&r4, 2, 1e-10),
            Err(Error::NotInvolutive { .. })
        ));
    }

    #[test]
    fn projector_examples() {
        let plus = RMatrix::signed_identity(3, Sign::Plus);
        for n in 0..=3 {
            let ctx = RepresentationContext::new(&plus, n, 1e-10).unwrap();
            let p = projector(&ctx, ProjectorMethod::Brute).unwrap();
            assert_abs_diff_eq!(max_abs(&(p - identity(3usize.pow(n as u32)))), 0.0, epsilon = 1e-14);
        }

        let minus = RMatrix::signed_identity(2, Sign::Minus);
        let ctx = RepresentationContext::new(&minus, 2, 1e-10).unwrap();
        let p = projector(&ctx, ProjectorMethod::Recursive).unwrap();
        assert_abs_diff_eq!(max_abs(&p), 0.0, epsilon = 1e-15);

        let mf = RMatrix::signed_flip(2, Sign::Minus);
        let ctx = RepresentationContext::new(&mf, 2, 1e-10).unwrap();
        let brute = projector(&ctx, ProjectorMethod::Brute).unwrap();
        // (1 + D(τ))/2 with D(τ) = −F.
        let oracle = (identity(4) - RMatrix::flip(2).matrix()) * c(0.5, 0.0);
        assert_abs_diff_eq!(max_abs(&(&brute - &oracle)), 0.0, epsilon = 1e-15);
        assert_eq!(crate::tensor::rank(&brute, 1e-8), 1);
    }

    #[test]
    fn brute_cap_enforced() {
        let f = RMatrix::flip(1);
        let ctx = RepresentationContext::new(&f, 4, 1e-10).unwrap();
        assert!(matches!(
            projector_capped(&ctx, ProjectorMethod::Brute, 3),
            Err(Error::EnumerationCap { n: 4, cap: 3 })
        ));
    }

    fn corpus() -> Vec<RMatrix> {
        let nf = |b: Vec<(Sign, usize)>| make_normal_form(&NormalFormSpec::new(b)).unwrap();
        vec![
            RMatrix::flip(2),
            RMatrix::signed_flip(2, Sign::Minus),
            RMatrix::signed_identity(2, Sign::Minus),
            nf(vec![(Sign::Plus, 1), (Sign::Minus, 2)]),
            crate::rmatrix::lift_with_internal(&RMatrix::signed_flip(2, Sign::Minus), 2).unwrap(),
        ]
    }

    #[test]
    fn generator_relations() {
        for s in corpus() {
            let ctx = RepresentationContext::new(&s, 4, 1e-10).unwrap();
            let gens: Vec<CMatrix> = (0..3).map(|i| rep_generator(&ctx, i)).collect();
            let id = identity(ctx.space_dim());
            for i in 0..3 {
                assert!(op_norm(&(&gens[i] * &gens[i] - &id)) <= 1e-10);
                if i + 1 < 3 {
                    let braid = &gens[i] * &gens[i + 1] * &gens[i] - &gens[i + 1] * &gens[i] * &gens[i + 1];
                    assert!(op_norm(&braid) <= 1e-10);
                }
            }
            let far = &gens[0] * &gens[2] - &gens[2] * &gens[0];
            assert!(op_norm(&far) <= 1e-10);
        }
    }

    #[test]
    fn brute_and_recursive_agree_and_absorb() {
        for s in corpus() {
            for n in 0..=4 {
                if s.dim().pow(n as u32) > 256 {
                    continue;
                }
                let ctx = RepresentationContext::new(&s, n, 1e-10).unwrap();
                let brute = projector(&ctx, ProjectorMethod::Brute).unwrap();
                let rec = projector(&ctx, ProjectorMethod::Recursive).unwrap();
                assert!(max_abs(&(&brute - &rec)) <= 1e-10);
                assert!(op_norm(&(&rec * &rec - &rec)) <= 1e-10);
                assert!(op_norm(&(&rec - rec.adjoint())) <= 1e-10);
                if n >= 2 {
                    let pi = Permutation::from_cycle_type(&[n]);
                    let d = rep_permutation(&ctx, &pi).unwrap();
                    assert!(op_norm(&(&rec * &d - &rec)) <= 1e-10);
                    assert!(op_norm(&(&d * &rec - &rec)) <= 1e-10);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reduced_word_reconstructs(images in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle()) {
            let pi = Permutation::new(images).unwrap();
            let word = pi.reduced_word();
            prop_assert_eq!(word.len(), pi.inversions());
            prop_assert_eq!(Permutation::from_word(5, &word), pi);
        }

        #[test]
        fn rep_is_word_independent_and_multiplicative(
            word in prop::collection::vec(0usize..3, 0..10),
            images in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(),
        ) {
            let s = crate::rmatrix::conjugate(
                &make_normal_form(&NormalFormSpec::new(vec![(Sign::Plus, 1), (Sign::Minus, 1)])).unwrap(),
                &CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.0, -0.8), c(0.0, -0.8), c(0.6, 0.0)]),
                1e-12,
            ).unwrap();
            let ctx = RepresentationContext::new(&s, 4, 1e-10).unwrap();
            let pi = Permutation::from_word(4, &word);
            let along_word = rep_word(&ctx, &word);
            let reduced = rep_permutation(&ctx, &pi).unwrap();
            prop_assert!(max_abs(&(along_word - &reduced)) <= 1e-10);

            let rho = Permutation::new(images).unwrap();
            let lhs = rep_permutation(&ctx, &pi.compose(&rho)).unwrap();
            let rhs = &reduced * rep_permutation(&ctx, &rho).unwrap();
            prop_assert!(max_abs(&(lhs - rhs)) <= 1e-10);
        }
    }
}
