use anyhow::{Context, Result};
use zfock_core::fock::{build_truncated_fock, cyclicity_defect, TruncatedFock};
use zfock_core::rmatrix::{check_rmatrix, lift_with_internal, RMatrix, RMatrixSpec};
use zfock_core::symgroup::{projector, ProjectorMethod, RepresentationContext, DEFAULT_BRUTE_CAP};
use zfock_core::tensor::{identity, max_abs};
use zfock_core::zamrep::{
    all_words, gns_match, positivity_probe, relation_residuals, wick_vacuum_expectation_with,
    AlgebraWord, Strategy, DEFAULT_WORD_CAP,
};

use crate::report::{spec_hash, Recorder, VerificationReport};
use crate::{read_input, seed, CheckArgs};

/// Longest words compared between the Fock representation and the Wick evaluator.
const GNS_WORD_LEN: usize = 4;
const POSITIVITY_TOL: f64 = 1e-8;
const HERMITICITY_TOL: f64 = 1e-12;
const CONFLUENCE_TOL: f64 = 1e-12;

pub fn load_rmatrix(bytes: &[u8], what: &str) -> Result<RMatrix> {
    let text = std::str::from_utf8(bytes).with_context(|| format!("{what} is not UTF-8"))?;
    let spec = RMatrixSpec::from_json(text).with_context(|| format!("cannot parse {what}"))?;
    spec.build().with_context(|| format!("cannot build the R-matrix of {what}"))
}

pub fn run(args: &CheckArgs) -> Result<VerificationReport> {
    let bytes = read_input(&args.spec)?;
    let base = load_rmatrix(&bytes, &args.spec.display().to_string())?;
    let m = args.internal_dim as usize;
    let s = lift_with_internal(&base, m)?;
    let seed = seed()?;
    let (n_max, tol) = (args.max_level, args.tol);

    let mut rec = Recorder::new("check", spec_hash(&[&bytes]), !args.output.no_timing);
    rec.detail("base_dim", base.dim());
    rec.detail("internal_dim", m);
    rec.detail("max_level", n_max);
    rec.detail("seed", seed);

    let axioms = rec.time(|| check_rmatrix(&s, tol));
    rec.record("rmatrix.unitarity", axioms.value.unitarity, tol, axioms.ms);
    rec.record("rmatrix.involutivity", axioms.value.involutivity, tol, axioms.ms);
    rec.record("rmatrix.yang_baxter", axioms.value.yang_baxter, tol, axioms.ms);
    if !axioms.value.all_pass() {
        rec.warn("R-matrix axioms fail; projector, Fock space and relation checks skipped");
        return Ok(rec.finish());
    }

    check_projectors(&mut rec, &s, n_max, tol);

    let built = rec.time(|| build_truncated_fock(&s, n_max, tol));
    let fock = match built.value {
        Ok(f) => f,
        Err(e) => {
            rec.record_error("fock.build", tol, built.ms, e);
            return Ok(rec.finish());
        }
    };
    rec.detail("level_dims", fock.level_dims());
    let ortho = (0..=n_max)
        .map(|n| {
            let b = fock.basis(n);
            max_abs(&(b.adjoint() * b - identity(b.ncols())))
        })
        .fold(0.0, f64::max);
    rec.record("fock.basis_orthonormality", ortho, tol, built.ms);

    check_relations(&mut rec, &fock, tol);

    let cyc = rec.time(|| cyclicity_defect(&fock));
    match cyc.value {
        Ok(defects) => {
            let worst = defects.iter().copied().max().unwrap_or(0);
            rec.detail("cyclicity_defects", &defects);
            rec.record("fock.cyclicity_defect", worst as f64, 0.0, cyc.ms);
        }
        Err(e) => rec.record_error("fock.cyclicity_defect", 0.0, cyc.ms, e),
    }

    check_vacuum_functional(&mut rec, &s, &fock, tol);

    let probe = rec.time(|| positivity_probe(&s, args.trials, seed));
    match probe.value {
        Ok(p) => {
            rec.detail("positivity", &p);
            rec.record("omega.positivity", (-p.min_eigenvalue).max(0.0), POSITIVITY_TOL, probe.ms);
            rec.record("omega.hermiticity", p.hermiticity_deviation, HERMITICITY_TOL, probe.ms);
        }
        Err(e) => rec.record_error("omega.positivity", POSITIVITY_TOL, probe.ms, e),
    }

    Ok(rec.finish())
}

fn check_projectors(rec: &mut Recorder, s: &RMatrix, n_max: usize, tol: f64) {
    let upto = n_max.min(DEFAULT_BRUTE_CAP);
    if upto < n_max {
        rec.warn(format!(
            "brute-force projector compared only up to n = {upto}; higher levels use the recursion alone"
        ));
    }
    let timed = rec.time(|| -> zfock_core::Result<f64> {
        let mut worst = 0.0f64;
        for n in 0..=upto {
            let ctx = RepresentationContext::new(s, n, tol)?;
            let brute = projector(&ctx, ProjectorMethod::Brute)?;
            let rec = projector(&ctx, ProjectorMethod::Recursive)?;
            worst = worst.max(max_abs(&(brute - rec)));
        }
        Ok(worst)
    });
    match timed.value {
        Ok(r) => {
            rec.record("projector.brute_vs_recursive", r, tol, timed.ms);
        }
        Err(e) => rec.record_error("projector.brute_vs_recursive", tol, timed.ms, e),
    }
}

fn check_relations(rec: &mut Recorder, fock: &TruncatedFock, tol: f64) {
    let timed = rec.time(|| relation_residuals(fock));
    match timed.value {
        Ok(r) => {
            if r.max_level_checked.is_none() {
                rec.warn("truncation below 2: exchange relations have no level to be checked on");
            }
            rec.record("relations.annihilator_exchange", r.annihilator_exchange, tol, timed.ms);
            rec.record("relations.mixed_exchange", r.mixed_exchange, tol, timed.ms);
            if let Some(sectors) = r.sectors {
                for (i, v) in sectors.iter().enumerate() {
                    rec.record(&format!("relations.sector_{}", i + 1), *v, tol, timed.ms);
                }
            }
        }
        Err(e) => rec.record_error("relations", tol, timed.ms, e),
    }
}

fn check_vacuum_functional(rec: &mut Recorder, s: &RMatrix, fock: &TruncatedFock, tol: f64) {
    let words: Vec<AlgebraWord> = (0..=GNS_WORD_LEN)
        .flat_map(|len| all_words(s.dim(), len))
        .collect();
    // Balanced words of length 2k reach level k at most.
    let deep;
    let target = if fock.max_level() >= GNS_WORD_LEN / 2 {
        fock
    } else {
        match build_truncated_fock(s, GNS_WORD_LEN / 2, tol) {
            Ok(f) => {
                deep = f;
                &deep
            }
            Err(e) => {
                rec.record_error("omega.gns_match", tol, 0.0, e);
                return;
            }
        }
    };
    let gns = rec.time(|| gns_match(target, &words, tol));
    match gns.value {
        Ok(g) => {
            rec.detail("gns_words_checked", g.words_checked);
            rec.record("omega.gns_match", g.max_deviation, tol, gns.ms);
        }
        Err(e) => rec.record_error("omega.gns_match", tol, gns.ms, e),
    }

    let confluence = rec.time(|| -> zfock_core::Result<f64> {
        let mut worst = 0.0f64;
        for w in &words {
            let left = wick_vacuum_expectation_with(s, w, Strategy::Leftmost, DEFAULT_WORD_CAP)?;
            let right = wick_vacuum_expectation_with(s, w, Strategy::Rightmost, DEFAULT_WORD_CAP)?;
            worst = worst.max((left - right).norm());
        }
        Ok(worst)
    });
    match confluence.value {
        Ok(r) => {
            rec.record("omega.strategy_independence", r, CONFLUENCE_TOL, confluence.ms);
        }
        Err(e) => rec.record_error("omega.strategy_independence", CONFLUENCE_TOL, confluence.ms, e),
    }
}
