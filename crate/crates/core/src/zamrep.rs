//! Exchange relations of the ladder operators on a truncated Fock space, and a
//! symbolic Wick-ordering evaluator of the vacuum functional `ω`.
//!
//! Letters carry composite labels `A = α·m + l` of the lifted one-particle
//! space `ℂ^d ⊗ ℂ^m`. `Z_A` is represented by `z(e_A)` and `Z*_A` by `z*(e_A)`.
//! The rewriting rule is
//! `Z_A Z*_B = Σ_{C,D} S̃^{AC}_{BD} Z*_C Z_D + δ_{AB}`.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{GradedOp, TruncatedFock};
use crate::rmatrix::RMatrix;
use crate::tensor::{c, max_abs, CMatrix, ONE, ZERO};

/// Longest word the Wick evaluator accepts.
pub const DEFAULT_WORD_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LetterKind {
    /// `Z*`
    Create,
    /// `Z`
    Annihilate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub kind: LetterKind,
    pub label: usize,
}

impl Letter {
    pub fn create(label: usize) -> Self {
        Self {
            kind: LetterKind::Create,
            label,
        }
    }

    pub fn annihilate(label: usize) -> Self {
        Self {
            kind: LetterKind::Annihilate,
            label,
        }
    }

    /// Letter for base label `alpha` and internal label `l` of `ℂ^m`.
    pub fn with_internal(kind: LetterKind, alpha: usize, l: usize, m: usize) -> Self {
        assert!(l < m, "internal label {l} out of range for m = {m}");
        Self {
            kind,
            label: alpha * m + l,
        }
    }

    pub fn adjoint(self) -> Self {
        let kind = match self.kind {
            LetterKind::Create => LetterKind::Annihilate,
            LetterKind::Annihilate => LetterKind::Create,
        };
        Self { kind, ..self }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraWord {
    pub letters: Vec<Letter>,
    pub coefficient: Complex64,
}

impl AlgebraWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self {
            letters,
            coefficient: ONE,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reversed word with every letter adjoined and the coefficient conjugated.
    pub fn adjoint(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.adjoint()).collect(),
            coefficient: self.coefficient.conj(),
        }
    }

    /// Concatenation `self · other`.
    pub fn times(&self, other: &AlgebraWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self {
            letters,
            coefficient: self.coefficient * other.coefficient,
        }
    }
}

/// Every word of exactly `len` letters over labels `0..labels`, both kinds.
pub fn all_words(labels: usize, len: usize) -> Vec<AlgebraWord> {
    let alphabet: Vec<Letter> = (0..labels)
        .flat_map(|a| [Letter::create(a), Letter::annihilate(a)])
        .collect();
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w: Vec<Letter>| {
                alphabet.iter().map(move |&l| {
                    let mut next = w.clone();
                    next.push(l);
                    next
                })
            })
            .collect();
    }
    words.into_iter().map(AlgebraWord::new).collect()
}

/// Linear combination of letter sequences.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WickPolynomial {
    pub terms: BTreeMap<Vec<Letter>, Complex64>,
}

impl WickPolynomial {
    pub fn from_word(word: &AlgebraWord) -> Self {
        let mut p = Self::default();
        p.add_term(word.letters.clone(), word.coefficient);
        p
    }

    pub fn add_term(&mut self, letters: Vec<Letter>, coef: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(letters) {
            Entry::Vacant(e) => {
                if coef != ZERO {
                    e.insert(coef);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if *e.get() == ZERO {
                    e.remove();
                }
            }
        }
    }

    /// Coefficient of the empty word.
    pub fn scalar(&self) -> Complex64 {
        self.terms.get(&Vec::new()).copied().unwrap_or(ZERO)
    }

    /// All creators stand left of all annihilators in every term.
    pub fn is_wick_ordered(&self) -> bool {
        self.terms.keys().all(|w| inversion_positions(w).next().is_none())
    }
}

/// Which `(Z, Z*)` inversion is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

fn inversion_positions(w: &[Letter]) -> impl DoubleEndedIterator<Item = usize> + '_ {
    (0..w.len().saturating_sub(1)).filter(move |&i| {
        w[i].kind == LetterKind::Annihilate && w[i + 1].kind == LetterKind::Create
    })
}

fn validate(s: &RMatrix, word: &AlgebraWord, cap: usize) -> Result<()> {
    if word.len() > cap {
        return Err(Error::WordTooLong {
            len: word.len(),
            cap,
        });
    }
    if let Some(l) = word.letters.iter().find(|l| l.label >= s.dim()) {
        return Err(Error::LabelOutOfRange {
            label: l.label,
            bound: s.dim(),
        });
    }
    Ok(())
}

// One application of the exchange rule at position i.
fn rewrite_at(s: &RMatrix, w: &[Letter], i: usize, coef: Complex64, out: &mut WickPolynomial) {
    let (a, b) = (w[i].label, w[i + 1].label);
    let d = s.dim();
    for cc in 0..d {
        for dd in 0..d {
            let e = s.entry(a, cc, b, dd);
            if e == ZERO {
                continue;
            }
            let mut next = Vec::with_capacity(w.len());
            next.extend_from_slice(&w[..i]);
            next.push(Letter::create(cc));
            next.push(Letter::annihilate(dd));
            next.extend_from_slice(&w[i + 2..]);
            out.add_term(next, coef * e);
        }
    }
    if a == b {
        let mut next = Vec::with_capacity(w.len() - 2);
        next.extend_from_slice(&w[..i]);
        next.extend_from_slice(&w[i + 2..]);
        out.add_term(next, coef);
    }
}

fn pick(w: &[Letter], strategy: Strategy) -> Option<usize> {
    let mut it = inversion_positions(w);
    match strategy {
        Strategy::Leftmost => it.next(),
        Strategy::Rightmost => it.next_back(),
    }
}

/// Full Wick ordering of a word: every term of the result has its creators
/// to the left of its annihilators.
pub fn normal_order(s: &RMatrix, word: &AlgebraWord, strategy: Strategy) -> Result<WickPolynomial> {
    validate(s, word, DEFAULT_WORD_CAP)?;
    let mut pending = WickPolynomial::from_word(word);
    let mut done = WickPolynomial::default();
    while let Some((w, coef)) = pending.terms.pop_first() {
        match pick(&w, strategy) {
            None => done.add_term(w, coef),
            Some(i) => rewrite_at(s, &w, i, coef, &mut pending),
        }
    }
    Ok(done)
}

/// `ω(word)` by rewriting, dropping every term that starts with a creator or
/// ends with an annihilator since `ω` vanishes on those.
pub fn wick_vacuum_expectation(s: &RMatrix, word: &AlgebraWord) -> Result<Complex64> {
    wick_vacuum_expectation_with(s, word, Strategy::Leftmost, DEFAULT_WORD_CAP)
}

pub fn wick_vacuum_expectation_with(
    s: &RMatrix,
    word: &AlgebraWord,
    strategy: Strategy,
    cap: usize,
) -> Result<Complex64> {
    validate(s, word, cap)?;
    let mut pending = WickPolynomial::from_word(word);
    let mut total = ZERO;
    while let Some((w, coef)) = pending.terms.pop_first() {
        let (Some(first), Some(last)) = (w.first(), w.last()) else {
            total += coef;
            continue;
        };
        if first.kind == LetterKind::Create || last.kind == LetterKind::Annihilate {
            continue;
        }
        let i = pick(&w, strategy).expect("a word starting with Z and ending with Z* has an inversion");
        rewrite_at(s, &w, i, coef, &mut pending);
    }
    Ok(total)
}

/// Largest operator-norm residual of each relation family.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ResidualReport {
    /// `z_A z_B − Σ S̃^{BA}_{DC} z_C z_D`
    pub annihilator_exchange: f64,
    /// `z_A z*_B − Σ S̃^{AC}_{BD} z*_C z_D − δ_{AB}`
    pub mixed_exchange: f64,
    /// The six sector relations when the R-matrix is a box-sum.
    pub sectors: Option<[f64; 6]>,
    /// Highest source level on which residuals were measured.
    pub max_level_checked: Option<usize>,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        let base = self.annihilator_exchange.max(self.mixed_exchange);
        self.sectors
            .map_or(base, |s| s.iter().copied().fold(base, f64::max))
    }
}

struct Ladders {
    create: Vec<GradedOp>,
    annihilate: Vec<GradedOp>,
}

impl Ladders {
    fn new(f: &TruncatedFock) -> Result<Self> {
        let create = (0..f.base_dim())
            .map(|a| f.create_basis(a))
            .collect::<Result<Vec<_>>>()?;
        let annihilate = create.iter().map(GradedOp::adjoint).collect();
        Ok(Self { create, annihilate })
    }
}

// Residual norms over the given label sets, with `s` read in the offset
// coordinates `labels[i] ↦ i`.
struct RelationScope<'a> {
    s: &'a RMatrix,
    labels: Vec<usize>,
}

fn exchange_residuals(ladders: &Ladders, scope: &RelationScope, upto: usize, dims: &[usize]) -> (f64, f64) {
    let labels = &scope.labels;
    let k = labels.len();
    let zz: Vec<Vec<GradedOp>> = labels
        .iter()
        .map(|&c| labels.iter().map(|&d| ladders.annihilate[c].compose(&ladders.annihilate[d])).collect())
        .collect();
    let zsz: Vec<Vec<GradedOp>> = labels
        .iter()
        .map(|&c| labels.iter().map(|&d| ladders.create[c].compose(&ladders.annihilate[d])).collect())
        .collect();
    let mut first = 0.0f64;
    let mut second = 0.0f64;
    for a in 0..k {
        for b in 0..k {
            let mut lhs1 = zz[a][b].clone();
            let mut lhs2 = ladders.annihilate[labels[a]].compose(&ladders.create[labels[b]]);
            if a == b {
                lhs2 = lhs2.sub(&GradedOp::identity(dims));
            }
            for cc in 0..k {
                for dd in 0..k {
                    let e1 = scope.s.entry(b, a, dd, cc);
                    if e1 != ZERO {
                        lhs1 = lhs1.sub(&zz[cc][dd].scale(e1));
                    }
                    let e2 = scope.s.entry(a, cc, b, dd);
                    if e2 != ZERO {
                        lhs2 = lhs2.sub(&zsz[cc][dd].scale(e2));
                    }
                }
            }
            first = first.max(lhs1.norm_up_to(upto));
            second = second.max(lhs2.norm_up_to(upto));
        }
    }
    (first, second)
}

/// Exchange-relation residuals on source levels `≤ N − 2`.
pub fn relation_residuals(f: &TruncatedFock) -> Result<ResidualReport> {
    let n = f.max_level();
    if n < 2 {
        return Ok(ResidualReport::default());
    }
    let upto = n - 2;
    let dims = f.level_dims();
    let ladders = Ladders::new(f)?;
    let all = RelationScope {
        s: f.rmatrix(),
        labels: (0..f.base_dim()).collect(),
    };
    let (annihilator_exchange, mixed_exchange) = exchange_residuals(&ladders, &all, upto, dims);

    let sectors = f.rmatrix().sectors().map(|(s, r)| {
        let dh = s.dim();
        let h = RelationScope {
            s,
            labels: (0..dh).collect(),
        };
        let k = RelationScope {
            s: r,
            labels: (dh..dh + r.dim()).collect(),
        };
        let (r1, r2) = exchange_residuals(&ladders, &h, upto, dims);
        let (r3, r4) = exchange_residuals(&ladders, &k, upto, dims);
        let mut r5 = 0.0f64;
        let mut r6 = 0.0f64;
        for &a in &h.labels {
            for &b in &k.labels {
                let (za, zb) = (&ladders.annihilate[a], &ladders.annihilate[b]);
                let (sa, sb) = (&ladders.create[a], &ladders.create[b]);
                r5 = r5.max(za.compose(zb).sub(&zb.compose(za)).norm_up_to(upto));
                r6 = r6.max(za.compose(sb).sub(&sb.compose(za)).norm_up_to(upto));
                r6 = r6.max(zb.compose(sa).sub(&sa.compose(zb)).norm_up_to(upto));
            }
        }
        [r1, r2, r3, r4, r5, r6]
    });

    Ok(ResidualReport {
        annihilator_exchange,
        mixed_exchange,
        sectors,
        max_level_checked: Some(upto),
    })
}

/// `⟨Ω, π(word)Ω⟩` in the truncated Fock representation.
pub fn fock_vacuum_expectation(f: &TruncatedFock, word: &AlgebraWord) -> Result<Complex64> {
    let ladders = Ladders::new(f)?;
    fock_expectation_with(f, &ladders, word)
}

fn fock_expectation_with(f: &TruncatedFock, ladders: &Ladders, word: &AlgebraWord) -> Result<Complex64> {
    if let Some(l) = word.letters.iter().find(|l| l.label >= f.base_dim()) {
        return Err(Error::LabelOutOfRange {
            label: l.label,
            bound: f.base_dim(),
        });
    }
    let creations = word.letters.iter().filter(|l| l.kind == LetterKind::Create).count();
    if 2 * creations != word.len() {
        // π(word)Ω lies in level #creations − #annihilations, orthogonal to Ω.
        return Ok(ZERO);
    }
    let mut v = f.vacuum();
    for letter in word.letters.iter().rev() {
        let op = match letter.kind {
            LetterKind::Create => &ladders.create[letter.label],
            LetterKind::Annihilate => &ladders.annihilate[letter.label],
        };
        v = op.apply(&v)?;
    }
    Ok(word.coefficient * v.levels[0][0])
}

#[derive(Clone, Debug, Serialize)]
pub struct GnsReport {
    pub words_checked: usize,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compares `⟨Ω, π(w)Ω⟩` with the Wick evaluator for every word.
pub fn gns_match(f: &TruncatedFock, words: &[AlgebraWord], tol: f64) -> Result<GnsReport> {
    let ladders = Ladders::new(f)?;
    let mut max_deviation = 0.0f64;
    for w in words {
        let fock = fock_expectation_with(f, &ladders, w)?;
        let oracle = wick_vacuum_expectation(f.rmatrix(), w)?;
        max_deviation = max_deviation.max((fock - oracle).norm());
    }
    Ok(GnsReport {
        words_checked: words.len(),
        max_deviation,
        tol,
        pass: max_deviation <= tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub trials: usize,
    /// Smallest Gram eigenvalue over all trials.
    pub min_eigenvalue: f64,
    /// Largest `|ω(X*) − conj ω(X)|` over the random polynomials.
    pub hermiticity_deviation: f64,
}

/// Words per Gram matrix and their maximal length.
const GRAM_WORDS: usize = 8;
const GRAM_WORD_LEN: usize = 3;

fn random_word(rng: &mut ChaCha8Rng, labels: usize) -> AlgebraWord {
    let len = rng.gen_range(0..=GRAM_WORD_LEN);
    let letters = (0..len)
        .map(|_| {
            let label = rng.gen_range(0..labels);
            if rng.gen_bool(0.5) {
                Letter::create(label)
            } else {
                Letter::annihilate(label)
            }
        })
        .collect();
    AlgebraWord::new(letters)
}

/// Minimum eigenvalue of random Gram matrices `[ω(w_i* w_j)]`, plus a
/// hermiticity cross-check of `ω` on random polynomials.
pub fn positivity_probe(s: &RMatrix, trials: usize, seed: u64) -> Result<PositivityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_eigenvalue = f64::INFINITY;
    let mut hermiticity_deviation = 0.0f64;
    for _ in 0..trials {
        let words: Vec<AlgebraWord> = (0..GRAM_WORDS).map(|_| random_word(&mut rng, s.dim())).collect();
        let mut gram = CMatrix::zeros(words.len(), words.len());
        for (i, wi) in words.iter().enumerate() {
            let wi_star = wi.adjoint();
            for (j, wj) in words.iter().enumerate() {
                gram[(i, j)] = wick_vacuum_expectation(s, &wi_star.times(wj))?;
            }
        }
        // Symmetrize before diagonalizing; the skew part is itself a
        // hermiticity defect and is recorded as such.
        let skew = max_abs(&(&gram - gram.adjoint())) / 2.0;
        hermiticity_deviation = hermiticity_deviation.max(skew);
        let herm = (&gram + gram.adjoint()) * c(0.5, 0.0);
        let eig = SymmetricEigen::new(herm).eigenvalues;
        min_eigenvalue = min_eigenvalue.min(eig.iter().copied().fold(f64::INFINITY, f64::min));

        let coefs: Vec<Complex64> = words
            .iter()
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut omega_x = ZERO;
        let mut omega_x_star = ZERO;
        for (w, &k) in words.iter().zip(&coefs) {
            omega_x += k * wick_vacuum_expectation(s, w)?;
            omega_x_star += k.conj() * wick_vacuum_expectation(s, &w.adjoint())?;
        }
        hermiticity_deviation = hermiticity_deviation.max((omega_x_star - omega_x.conj()).norm());
    }
    Ok(PositivityReport {
        trials,
        min_eigenvalue: if trials == 0 { 0.0 } else { min_eigenvalue },
        hermiticity_deviation,
    })
}
