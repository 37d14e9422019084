//! Named involutive R-matrices used across tests, the CLI and the bundled specs.

use crate::rmatrix::{
    box_sum, lift_with_internal, make_dim2, make_normal_form, Dim2Family, NormalFormSpec, RMatrix,
    Sign,
};
use crate::tensor::c;

#[derive(Clone, Debug)]
pub struct Specimen {
    pub name: String,
    pub r: RMatrix,
}

fn specimen(name: impl Into<String>, r: RMatrix) -> Specimen {
    Specimen {
        name: name.into(),
        r,
    }
}

fn nf(blocks: &[(Sign, usize)]) -> RMatrix {
    make_normal_form(&NormalFormSpec::new(blocks.to_vec())).expect("valid normal form")
}

/// `(+1, 1)` style label for a normal form.
fn nf_name(blocks: &[(Sign, usize)]) -> String {
    let parts: Vec<String> = blocks
        .iter()
        .map(|(s, d)| format!("{}{}", if *s == Sign::Plus { '+' } else { '-' }, d))
        .collect();
    format!("normal_form[{}]", parts.join(","))
}

pub const NORMAL_FORMS: &[&[(Sign, usize)]] = &[
    &[(Sign::Plus, 1), (Sign::Minus, 1)],
    &[(Sign::Minus, 1), (Sign::Minus, 1)],
    &[(Sign::Plus, 1), (Sign::Plus, 1)],
    &[(Sign::Plus, 2), (Sign::Minus, 1)],
    &[(Sign::Minus, 1), (Sign::Plus, 1), (Sign::Minus, 1)],
];

/// Flip and `±1` for `d = 1, 2, 3`, `−F` for `d = 2, 3`, and normal forms
/// with up to three blocks.
pub fn base_corpus() -> Vec<Specimen> {
    let mut out = Vec::new();
    for d in 1..=3 {
        out.push(specimen(format!("flip_d{d}"), RMatrix::flip(d)));
        out.push(specimen(format!("plus1_d{d}"), RMatrix::signed_identity(d, Sign::Plus)));
        out.push(specimen(format!("minus1_d{d}"), RMatrix::signed_identity(d, Sign::Minus)));
    }
    for d in 2..=3 {
        out.push(specimen(format!("minus_flip_d{d}"), RMatrix::signed_flip(d, Sign::Minus)));
    }
    for blocks in NORMAL_FORMS {
        out.push(specimen(nf_name(blocks), nf(blocks)));
    }
    out
}

/// Involutive samples of the dimension-2 families.
pub fn dim2_samples() -> Vec<Specimen> {
    let one = c(1.0, 0.0);
    vec![
        specimen("R1[q=-1]", make_dim2(Dim2Family::R1 { q: -one }).expect("valid")),
        specimen(
            "R2[p=1,q=i,r=-i,s=-1]",
            make_dim2(Dim2Family::R2 {
                p: one,
                q: c(0.0, 1.0),
                r: c(0.0, -1.0),
                s: -one,
            })
            .expect("valid"),
        ),
        specimen(
            "R3[p=q=r=1]",
            make_dim2(Dim2Family::R3 { p: one, q: one, r: one }).expect("valid"),
        ),
    ]
}

/// Box-sums that keep their sectors.
pub fn box_sum_specimens() -> Vec<Specimen> {
    vec![
        specimen(
            "minus1_boxsum_minus1",
            box_sum(
                &RMatrix::signed_identity(1, Sign::Minus),
                &RMatrix::signed_identity(1, Sign::Minus),
            ),
        ),
        specimen(
            "minus_flip_d2_boxsum_plus1_d1",
            box_sum(
                &RMatrix::signed_flip(2, Sign::Minus),
                &RMatrix::signed_identity(1, Sign::Plus),
            ),
        ),
    ]
}

/// Lifts with internal dimension `m` of the base specimens with `d ≤ 2`;
/// larger bases exceed desk-scale sizes at five particles.
pub fn lifted_corpus(m: usize) -> Vec<Specimen> {
    base_corpus()
        .into_iter()
        .filter(|s| s.r.dim() <= 2)
        .map(|s| {
            let r = lift_with_internal(&s.r, m).expect("m ≥ 1");
            specimen(format!("{}~L{m}", s.name), r)
        })
        .collect()
}

/// Everything above, with lifts at `m = 2`.
pub fn full_corpus() -> Vec<Specimen> {
    let mut out = base_corpus();
    out.extend(dim2_samples());
    out.extend(box_sum_specimens());
    out.extend(lifted_corpus(2));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::check_rmatrix;

    #[test]
    fn corpus_is_involutive_and_braided() {
        for s in full_corpus() {
            assert!(check_rmatrix(&s.r, 1e-10).all_pass(), "{}", s.name);
        }
    }

    #[test]
    fn names_are_unique() {
        let corpus = full_corpus();
        let mut names: Vec<_> = corpus.iter().map(|s| s.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), corpus.len());
    }
}
