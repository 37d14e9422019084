use anyhow::{bail, Context, Result};
use zfock_core::smatrix::{
    glim_check, linspace, matrix_rows, smatrix_axiom_residuals, smatrix_limits, DiagonalSMatrix,
    MARGIN_WARNING,
};

use crate::report::{spec_hash, Recorder, VerificationReport};
use crate::{read_input, SmatrixArgs};

const ENTRY_TOL: f64 = 1e-10;
const LIMIT_TOL: f64 = 1e-8;
const LIMIT_AXIOM_TOL: f64 = 1e-12;

pub fn run(args: &SmatrixArgs) -> Result<VerificationReport> {
    let bytes = read_input(&args.spec)?;
    let text = std::str::from_utf8(&bytes).context("S-matrix spec is not UTF-8")?;
    let sd = DiagonalSMatrix::from_json(text)
        .with_context(|| format!("cannot parse {}", args.spec.display()))?;
    if !(args.theta_min < args.theta_max) || args.points == 0 || args.ybe_points == 0 {
        bail!("the rapidity grid needs theta-min < theta-max and at least one point");
    }
    let grid = linspace(args.theta_min, args.theta_max, args.points);
    let pair_grid = linspace(args.theta_min, args.theta_max, args.ybe_points);
    let tol = args.tol;

    let mut rec = Recorder::new("smatrix", spec_hash(&[&bytes]), !args.output.no_timing);
    rec.detail("d", sd.dim());
    rec.detail("grid", [args.theta_min, args.theta_max, args.points as f64]);
    rec.detail("ybe_points", args.ybe_points);
    rec.detail("margin", sd.margin());

    let d = sd.dim();
    for alpha in 0..d {
        for beta in 0..d {
            let name = format!("entry_{alpha}_{beta}");
            let timed = rec.time(|| glim_check(sd.entry(alpha, beta), &grid));
            match timed.value {
                Ok(g) => {
                    rec.record(&format!("{name}.unit_modulus"), g.unit_modulus, ENTRY_TOL, timed.ms);
                    rec.record(&format!("{name}.strip_reflection"), g.strip_reflection, ENTRY_TOL, timed.ms);
                    rec.record(&format!("{name}.factor_reflection"), g.factor_reflection, ENTRY_TOL, timed.ms);
                    rec.record(&format!("{name}.limit"), g.limit, LIMIT_TOL, timed.ms);
                    if g.margin_warning {
                        rec.warn(format!(
                            "{name}: zero margin {:.3e} is below {MARGIN_WARNING:.0e}; values near the real axis are ill-conditioned",
                            g.margin
                        ));
                    }
                    rec.detail(&format!("{name}.min_pole_distance"), g.min_pole_distance);
                }
                Err(e) => rec.record_error(&format!("{name}.evaluation"), ENTRY_TOL, timed.ms, e),
            }
        }
    }

    let axioms = rec.time(|| smatrix_axiom_residuals(&sd, &grid, &pair_grid));
    match axioms.value {
        Ok(a) => {
            rec.record("axioms.unitarity", a.unitarity, tol, axioms.ms);
            rec.record("axioms.hermitian_analyticity", a.hermitian_analyticity, tol, axioms.ms);
            rec.record("axioms.yang_baxter", a.yang_baxter, tol, axioms.ms);
            rec.record("axioms.crossing", a.crossing, tol, axioms.ms);
        }
        Err(e) => rec.record_error("axioms", tol, axioms.ms, e),
    }

    let limits = rec.time(|| smatrix_limits(&sd));
    match limits.value {
        Ok(l) => {
            let ms = limits.ms;
            rec.record("limits.plus_equals_minus", l.report.plus_minus_gap, 0.0, ms);
            rec.record("limits.numeric", l.report.numeric_limit, LIMIT_TOL, ms);
            rec.record("limits.s0_involutivity", l.report.s0_involutivity, tol, ms);
            rec.record("limits.limit_involutivity", l.report.limit_involutivity, LIMIT_AXIOM_TOL, ms);
            rec.record("limits.limit_crossing", l.report.limit_crossing, LIMIT_AXIOM_TOL, ms);
            rec.detail("s0", matrix_rows(&l.s0));
            rec.detail("s_plus", matrix_rows(&l.s_plus));
            rec.detail("s_minus", matrix_rows(&l.s_minus));
            rec.detail("s0_yang_baxter", l.report.s0_yang_baxter);
        }
        Err(e) => rec.record_error("limits", tol, limits.ms, e),
    }
    Ok(rec.finish())
}
