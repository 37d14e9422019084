//! Declarative JSON description of an R-matrix.
//!
//! ```json
//! {"boxsum": [{"normal_form": [[-1, 1]]}, {"normal_form": [[-1, 1]]}]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs throughout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    box_product, box_sum, conjugate, lift_with_internal, make_dim2, make_normal_form, Dim2Family,
    NormalFormSpec, RMatrix, Sign, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::tensor::{c, CMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RMatrixSpec {
    NormalForm(Vec<(i64, usize)>),
    Dim2 {
        kind: String,
        params: BTreeMap<String, [f64; 2]>,
    },
    Boxsum(Box<RMatrixSpec>, Box<RMatrixSpec>),
    Boxprod(Box<RMatrixSpec>, Box<RMatrixSpec>),
    Lift(Box<RMatrixSpec>, usize),
    /// Unitary given as rows of `[re, im]` entries.
    Conjugate(Box<RMatrixSpec>, Vec<Vec<[f64; 2]>>),
    /// `±F` on `ℂ^d ⊗ ℂ^d`: `[sign, d]`.
    SignedFlip(i64, usize),
    /// Row-major `d⁴` entries.
    Dense { d: usize, entries: Vec<[f64; 2]> },
}

impl RMatrixSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn build(&self) -> Result<RMatrix> {
        match self {
            RMatrixSpec::NormalForm(blocks) => {
                let blocks = blocks
                    .iter()
                    .map(|&(s, d)| Ok((Sign::from_i64(s)?, d)))
                    .collect::<Result<Vec<_>>>()?;
                make_normal_form(&NormalFormSpec::new(blocks))
            }
            RMatrixSpec::Dim2 { kind, params } => make_dim2(dim2_family(kind, params)?),
            RMatrixSpec::Boxsum(a, b) => Ok(box_sum(&a.build()?, &b.build()?)),
            RMatrixSpec::Boxprod(a, b) => Ok(box_product(&a.build()?, &b.build()?)),
            RMatrixSpec::Lift(a, m) => lift_with_internal(&a.build()?, *m),
            RMatrixSpec::Conjugate(a, rows) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Spec("conjugating unitary must be square".into()));
                }
                let q = CMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1]));
                conjugate(&a.build()?, &q, DEFAULT_TOL)
            }
            RMatrixSpec::SignedFlip(s, d) => {
                if *d == 0 {
                    return Err(Error::Spec("flip dimension must be at least 1".into()));
                }
                Ok(RMatrix::signed_flip(*d, Sign::from_i64(*s)?))
            }
            RMatrixSpec::Dense { d, entries } => {
                let d2 = d * d;
                if entries.len() != d2 * d2 {
                    return Err(Error::Spec(format!(
                        "dense R-matrix with d = {d} needs {} entries, got {}",
                        d2 * d2,
                        entries.len()
                    )));
                }
                let mat = CMatrix::from_fn(d2, d2, |i, j| {
                    let [re, im] = entries[i * d2 + j];
                    c(re, im)
                });
                RMatrix::from_matrix(*d, mat)
            }
        }
    }
}

fn dim2_family(kind: &str, params: &BTreeMap<String, [f64; 2]>) -> Result<Dim2Family> {
    let get = |name: &str| {
        params
            .get(name)
            .map(|&[re, im]| c(re, im))
            .ok_or_else(|| Error::Spec(format!("{kind} needs parameter `{name}`")))
    };
    let allowed: &[&str] = match kind {
        "R1" | "R4" => &["q"],
        "R2" => &["p", "q", "r", "s"],
        "R3" => &["p", "q", "r"],
        other => return Err(Error::Spec(format!("unknown dim2 family `{other}`"))),
    };
    if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Spec(format!("{kind} has no parameter `{extra}`")));
    }
    Ok(match kind {
        "R1" => Dim2Family::R1 { q: get("q")? },
        "R2" => Dim2Family::R2 {
            p: get("p")?,
            q: get("q")?,
            r: get("r")?,
            s: get("s")?,
        },
        "R3" => Dim2Family::R3 {
            p: get("p")?,
            q: get("q")?,
            r: get("r")?,
        },
        _ => Dim2Family::R4 { q: get("q")? },
    })
}
