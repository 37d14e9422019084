use anyhow::Result;
use zfock_core::isofactory::{
    build_factorization_unitary, characters_equivalent, rep_obstruction_probe, PairPattern,
};
use zfock_core::rmatrix::{check_rmatrix, lift_with_internal};

use crate::check::load_rmatrix;
use crate::report::{spec_hash, Recorder, VerificationReport};
use crate::{read_input, IsoArgs, IsoMode};

const UNITARY_TOL: f64 = 1e-8;
const VACUUM_TOL: f64 = 1e-10;
const INTERTWINING_TOL: f64 = 1e-8;
const DISTRIBUTIVITY_TOL: f64 = 1e-12;

pub fn run(args: &IsoArgs) -> Result<VerificationReport> {
    let left_bytes = read_input(&args.left)?;
    let right_bytes = read_input(&args.right)?;
    let s = load_rmatrix(&left_bytes, &args.left.display().to_string())?;
    let r = load_rmatrix(&right_bytes, &args.right.display().to_string())?;
    let m = args.internal_dim as usize;
    let tol = args.tol;

    let suite = match args.mode {
        IsoMode::Factorize => "iso.factorize",
        IsoMode::Equivalence => "iso.equivalence",
        IsoMode::Obstruction => "iso.obstruction",
    };
    let mut rec = Recorder::new(suite, spec_hash(&[&left_bytes, &right_bytes]), !args.output.no_timing);
    rec.detail("internal_dim", m);

    for (side, x) in [("left", &s), ("right", &r)] {
        let report = check_rmatrix(x, tol);
        if !report.all_pass() {
            rec.record(&format!("{side}.involutivity"), report.involutivity, tol, 0.0);
            rec.record(&format!("{side}.yang_baxter"), report.yang_baxter, tol, 0.0);
            rec.warn(format!("{side} R-matrix fails its axioms; comparison skipped"));
            return Ok(rec.finish());
        }
    }

    match args.mode {
        IsoMode::Factorize => factorize(&mut rec, &s, &r, m, args.max_level, tol),
        IsoMode::Equivalence => {
            rec.detail("n_max", args.n_max);
            let sl = lift_with_internal(&s, m)?;
            let rl = lift_with_internal(&r, m)?;
            let timed = rec.time(|| characters_equivalent(&sl, &rl, args.n_max, tol));
            match timed.value {
                Ok(verdicts) => {
                    let equivalent = verdicts.iter().all(|v| v.equivalent);
                    for v in &verdicts {
                        rec.record(&format!("characters.n{}", v.n), v.max_trace_gap, tol, timed.ms);
                    }
                    rec.detail("equivalent", equivalent);
                    rec.detail("verdicts", &verdicts);
                }
                Err(e) => rec.record_error("characters", tol, timed.ms, e),
            }
        }
        IsoMode::Obstruction => {
            rec.detail("max_level", args.max_level);
            let timed = rec.time(|| rep_obstruction_probe(&s, &r, m, args.max_level, tol));
            match timed.value {
                Ok(probe) => {
                    for (side, p) in [("left", &probe.s), ("right", &probe.r)] {
                        let indefinite = p
                            .pairs
                            .iter()
                            .filter(|x| x.pattern == PairPattern::Neither)
                            .count();
                        rec.record(&format!("{side}.indefinite_pairs"), indefinite as f64, 0.0, timed.ms);
                    }
                    rec.detail("left_pattern", probe.s.overall);
                    rec.detail("right_pattern", probe.r.overall);
                    rec.detail("patterns_differ", probe.patterns_differ);
                    rec.detail("left_pairs", &probe.s.pairs);
                    rec.detail("right_pairs", &probe.r.pairs);
                }
                Err(e) => rec.record_error("obstruction", 0.0, timed.ms, e),
            }
        }
    }
    Ok(rec.finish())
}

fn factorize(rec: &mut Recorder, s: &zfock_core::rmatrix::RMatrix, r: &zfock_core::rmatrix::RMatrix, m: usize, n_max: usize, tol: f64) {
    rec.detail("max_level", n_max);
    let timed = rec.time(|| build_factorization_unitary(s, r, m, n_max, tol));
    match timed.value {
        Ok(f) => {
            rec.detail("level_dims_box_sum", &f.level_dims_box_sum);
            rec.detail("level_dims_tensor", &f.level_dims_tensor);
            let ms = timed.ms;
            rec.record("v.unitarity", f.unitarity_residual, UNITARY_TOL, ms);
            rec.record("v.vacuum", f.vacuum_residual, VACUUM_TOL, ms);
            rec.record("v.creation_intertwining", f.creation_residual, INTERTWINING_TOL, ms);
            rec.record("v.annihilation_intertwining", f.annihilation_residual, INTERTWINING_TOL, ms);
            rec.record("distributivity", f.distributivity_residual, DISTRIBUTIVITY_TOL, ms);
            rec.record("level_dims.convolution", if f.convolution_match { 0.0 } else { 1.0 }, 0.0, ms);
        }
        Err(e) => rec.record_error("v.construction", tol, timed.ms, e),
    }
}
