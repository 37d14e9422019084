use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use zfock_core::corpus::base_corpus;
use zfock_core::fock::build_truncated_fock;
use zfock_core::isofactory::{
    characters_equivalent, convolve_dims, intertwined_rmatrix, intertwiner_family, iterated_factorization,
    verify_intertwiner, IntertwinerKind,
};
use zfock_core::rmatrix::{box_sum, make_normal_form, NormalFormSpec, RMatrix, RMatrixSpec, Sign};
use zfock_core::tensor::{c, max_abs};
use zfock_core::zamrep::{all_words, fock_vacuum_expectation, wick_vacuum_expectation};

fn rotation(t: f64) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(t.cos(), 0.0), c(-t.sin(), 0.0), c(t.sin(), 0.0), c(t.cos(), 0.0)])
}

#[test]
fn normal_form_dims_are_iterated_convolutions() {
    let blocks = vec![(Sign::Plus, 1), (Sign::Minus, 1), (Sign::Minus, 1)];
    let summands: Vec<RMatrix> = blocks
        .iter()
        .map(|&(sign, _)| RMatrix::signed_identity(1, sign))
        .collect();
    let reports = iterated_factorization(&summands, 1, 4, 1e-10).unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        assert!(r.max_residual() < 1e-8, "{r:?}");
    }

    let level = |r: &RMatrix| build_truncated_fock(r, 4, 1e-10).unwrap().level_dims().to_vec();
    let expected = summands[1..]
        .iter()
        .fold(level(&summands[0]), |acc, r| convolve_dims(&acc, &level(r)));
    let nf = make_normal_form(&NormalFormSpec::new(blocks)).unwrap();
    assert_eq!(level(&nf), expected);
    assert_eq!(reports[1].level_dims_box_sum, expected);
}

#[test]
fn intertwined_pairs_have_equal_characters() {
    let s = box_sum(&RMatrix::flip(1), &RMatrix::signed_identity(1, Sign::Minus));
    let q = rotation(0.4);
    for kind in [IntertwinerKind::Type1, IntertwinerKind::Type3] {
        let qref = matches!(kind, IntertwinerKind::Type1).then_some(&q);
        let r = intertwined_rmatrix(kind, qref, &s, 1e-10).unwrap();
        let y = intertwiner_family(kind, qref, &s, 4, 1e-10).unwrap();
        assert!(verify_intertwiner(&y, &s, &r).unwrap() < 1e-10);
        assert!(characters_equivalent(&s, &r, 4, 1e-10).unwrap().iter().all(|v| v.equivalent));
    }
}

#[test]
fn wick_evaluator_agrees_with_fock_for_base_corpus() {
    for sp in base_corpus() {
        let f = build_truncated_fock(&sp.r, 2, 1e-10).unwrap();
        for len in [2, 4] {
            for w in all_words(sp.r.dim(), len) {
                let a = wick_vacuum_expectation(&sp.r, &w).unwrap();
                let b = fock_vacuum_expectation(&f, &w).unwrap();
                assert!((a - b).norm() < 1e-10, "{}: {w:?}", sp.name);
            }
        }
    }
}

#[test]
fn spec_json_builds_match_constructors() {
    let built = RMatrixSpec::from_json(r#"{"boxsum": [{"signed_flip": [-1, 2]}, {"normal_form": [[1, 1]]}]}"#)
        .unwrap()
        .build()
        .unwrap();
    let direct = box_sum(&RMatrix::signed_flip(2, Sign::Minus), &RMatrix::signed_identity(1, Sign::Plus));
    assert!(max_abs(&(built.matrix() - direct.matrix())) < 1e-15);
    let nf = RMatrixSpec::from_json(r#"{"normal_form": [[1, 2]]}"#).unwrap().build().unwrap();
    assert_eq!(nf.matrix(), RMatrix::signed_identity(2, Sign::Plus).matrix());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn conjugation_preserves_level_dims(t in 0.0f64..6.3, idx in 0usize..4) {
        let forms = [
            RMatrix::flip(2),
            RMatrix::signed_flip(2, Sign::Minus),
            RMatrix::signed_identity(2, Sign::Minus),
            box_sum(&RMatrix::flip(1), &RMatrix::signed_identity(1, Sign::Minus)),
        ];
        let s = &forms[idx];
        let q = rotation(t);
        let r = intertwined_rmatrix(IntertwinerKind::Type1, Some(&q), s, 1e-10).unwrap();
        let ds = build_truncated_fock(s, 3, 1e-10).unwrap().level_dims().to_vec();
        let dr = build_truncated_fock(&r, 3, 1e-10).unwrap().level_dims().to_vec();
        prop_assert_eq!(ds, dr);
    }
}
