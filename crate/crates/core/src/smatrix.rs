//! Rapidity-dependent diagonal two-particle S-matrices whose entries are
//! finite Blaschke-type products on the strip `0 ≤ Im ζ ≤ π`.
//!
//! Each entry is
//! `G(ζ) = ε ∏_k (e^ζ − e^{z_k})/(e^ζ − e^{z̄_k}) · (e^ζ − e^{z̄_k+iπ})/(e^ζ − e^{z_k−iπ})`
//! with `0 < Im z_k ≤ π/2`, and `S(θ)` maps `e_β ⊗ e_α ↦ ω_{αβ}(θ) e_α ⊗ e_β`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rmatrix::{crossing_residual, involutivity_residual, RMatrix, Sign};
use crate::tensor::{c, identity, max_abs, op_norm, tensor_product, CMatrix, ZERO};

/// Relative denominator size below which evaluation is refused.
pub const POLE_THRESHOLD: f64 = 1e-12;

/// Smallest imaginary part of a zero that is not flagged.
pub const MARGIN_WARNING: f64 = 1e-3;

/// Rapidity used for the numerical limit check.
pub const LIMIT_PROBE: f64 = 30.0;

#[derive(Clone, Debug, PartialEq)]
pub struct GLimFunction {
    epsilon: Sign,
    zeros: Vec<Complex64>,
}

impl GLimFunction {
    pub fn new(epsilon: Sign, zeros: Vec<Complex64>) -> Result<Self> {
        if let Some(z) = zeros
            .iter()
            .find(|z| !(z.im > 0.0 && z.im <= PI / 2.0 + 1e-12) || !z.re.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "zero {z} must satisfy 0 < Im z ≤ π/2"
            )));
        }
        Ok(Self { epsilon, zeros })
    }

    pub fn constant(epsilon: Sign) -> Self {
        Self {
            epsilon,
            zeros: Vec::new(),
        }
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// `min Im z_k`, or `π/2` for a constant.
    pub fn margin(&self) -> f64 {
        self.zeros.iter().map(|z| z.im).fold(PI / 2.0, f64::min)
    }

    /// `G` with every zero replaced by `−z̄`, so that `conj G(−θ)` equals it
    /// on the real line.
    pub fn reflected(&self) -> Self {
        Self {
            epsilon: self.epsilon,
            zeros: self.zeros.iter().map(|z| -z.conj()).collect(),
        }
    }
}

fn relative_gap(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm())
}

/// One Blaschke factor `g_z(ζ)`, with the smallest relative denominator seen.
fn factor(z: Complex64, zeta: Complex64) -> (Complex64, f64) {
    let ipi = c(0.0, PI);
    let e = zeta.exp();
    let (a, b) = (z.exp(), z.conj().exp());
    let (a_pi, b_pi) = ((z.conj() + ipi).exp(), (z - ipi).exp());
    let den = relative_gap(e, b).min(relative_gap(e, b_pi));
    ((e - a) / (e - b) * ((e - a_pi) / (e - b_pi)), den)
}

pub fn glim_eval(g: &GLimFunction, zeta: Complex64) -> Result<Complex64> {
    let mut value = c(g.epsilon.value(), 0.0);
    for &z in &g.zeros {
        let (f, den) = factor(z, zeta);
        if den < POLE_THRESHOLD {
            return Err(Error::NearPole {
                point: format!("{zeta}"),
                distance: den,
            });
        }
        value *= f;
    }
    Ok(value)
}

/// Smallest relative denominator of `G` at `ζ`; `∞` for a constant.
pub fn pole_distance(g: &GLimFunction, zeta: Complex64) -> f64 {
    g.zeros
        .iter()
        .map(|&z| factor(z, zeta).1)
        .fold(f64::INFINITY, f64::min)
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Default real grid: 1000 points on `[−10, 10]`.
pub fn default_grid() -> Vec<f64> {
    linspace(-10.0, 10.0, 1000)
}

#[derive(Clone, Debug, Serialize)]
pub struct GLimReport {
    /// `max | |G(θ)| − 1 |`
    pub unit_modulus: f64,
    /// `max |G(θ) − conj G(iπ + θ)|`
    pub strip_reflection: f64,
    /// Same identity for every single factor.
    pub factor_reflection: f64,
    /// `max |G(±30) − ε|`
    pub limit: f64,
    /// Smallest relative denominator on a grid of the closed strip.
    pub min_pole_distance: f64,
    pub margin: f64,
    pub margin_warning: bool,
}

pub fn glim_check(g: &GLimFunction, grid: &[f64]) -> Result<GLimReport> {
    let ipi = c(0.0, PI);
    let mut unit_modulus = 0.0f64;
    let mut strip_reflection = 0.0f64;
    let mut factor_reflection = 0.0f64;
    for &theta in grid {
        let t = c(theta, 0.0);
        let v = glim_eval(g, t)?;
        unit_modulus = unit_modulus.max((v.norm() - 1.0).abs());
        strip_reflection = strip_reflection.max((v - glim_eval(g, t + ipi)?.conj()).norm());
        for &z in &g.zeros {
            let lower = factor(z, t).0;
            let upper = factor(z, t + ipi).0;
            factor_reflection = factor_reflection.max((upper - lower.conj()).norm());
        }
    }
    let eps = c(g.epsilon.value(), 0.0);
    let limit = [LIMIT_PROBE, -LIMIT_PROBE]
        .iter()
        .map(|&t| glim_eval(g, c(t, 0.0)).map(|v| (v - eps).norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut min_pole_distance = f64::INFINITY;
    for &theta in grid {
        for y in linspace(0.0, PI, 21) {
            min_pole_distance = min_pole_distance.min(pole_distance(g, c(theta, y)));
        }
    }
    Ok(GLimReport {
        unit_modulus,
        strip_reflection,
        factor_reflection,
        limit,
        min_pole_distance,
        margin: g.margin(),
        margin_warning: g.margin() < MARGIN_WARNING,
    })
}

/// `d × d` array of entry functions `ω_{αβ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSMatrix {
    d: usize,
    entries: Vec<Vec<GLimFunction>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub eps: i64,
    #[serde(default)]
    pub zeros: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SMatrixSpec {
    pub d: usize,
    pub entries: Vec<Vec<EntrySpec>>,
}

impl DiagonalSMatrix {
    pub fn new(entries: Vec<Vec<GLimFunction>>) -> Result<Self> {
        let d = entries.len();
        if d == 0 || entries.iter().any(|row| row.len() != d) {
            return Err(Error::Dimension("entry table must be a nonempty square array".into()));
        }
        Ok(Self { d, entries })
    }

    pub fn from_spec(spec: &SMatrixSpec) -> Result<Self> {
        if spec.entries.len() != spec.d {
            return Err(Error::Spec(format!(
                "d = {} but {} entry rows given",
                spec.d,
                spec.entries.len()
            )));
        }
        let entries = spec
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let eps = Sign::from_i64(e.eps).map_err(|err| Error::Spec(err.to_string()))?;
                        let zeros = e.zeros.iter().map(|&[re, im]| c(re, im)).collect();
                        GLimFunction::new(eps, zeros).map_err(|err| Error::Spec(err.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries).map_err(|err| Error::Spec(err.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SMatrixSpec = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, alpha: usize, beta: usize) -> &GLimFunction {
        &self.entries[alpha][beta]
    }

    pub fn entries(&self) -> impl Iterator<Item = &GLimFunction> {
        self.entries.iter().flatten()
    }

    /// Smallest zero margin over all entries.
    pub fn margin(&self) -> f64 {
        self.entries().map(GLimFunction::margin).fold(PI / 2.0, f64::min)
    }

    fn assemble(&self, value: impl Fn(&GLimFunction) -> Result<Complex64>) -> Result<CMatrix> {
        let d = self.d;
        let mut m = CMatrix::zeros(d * d, d * d);
        for alpha in 0..d {
            for beta in 0..d {
                m[(alpha * d + beta, beta * d + alpha)] = value(&self.entries[alpha][beta])?;
            }
        }
        Ok(m)
    }

    /// `S(ζ)` as a `d² × d²` matrix.
    pub fn eval(&self, zeta: Complex64) -> Result<CMatrix> {
        self.assemble(|g| glim_eval(g, zeta))
    }

    /// The matrix with `ε_{αβ}` in place of `ω_{αβ}`.
    pub fn limit_matrix(&self) -> CMatrix {
        self.assemble(|g| Ok(c(g.epsilon.value(), 0.0))).expect("constants never hit poles")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    /// `max ‖S(θ)†S(θ) − 1‖`
    pub unitarity: f64,
    /// `max ‖S(−θ) − S(θ)†‖`
    pub hermitian_analyticity: f64,
    /// Parameter-dependent Yang–Baxter residual over the pair grid.
    pub yang_baxter: f64,
    /// `max |S^{αβ}_{δγ}(θ) − S^{δα}_{γβ}(iπ − θ)|`
    pub crossing: f64,
}

impl AxiomReport {
    pub fn max(&self) -> f64 {
        self.unitarity
            .max(self.hermitian_analyticity)
            .max(self.yang_baxter)
            .max(self.crossing)
    }
}

fn ybe_residual(d: usize, s1: &CMatrix, s12: &CMatrix, s2: &CMatrix) -> f64 {
    let one = identity(d);
    let left = |m: &CMatrix| tensor_product(m, &one);
    let right = |m: &CMatrix| tensor_product(&one, m);
    let lhs = left(s1) * right(s12) * left(s2);
    let rhs = right(s2) * left(s12) * right(s1);
    op_norm(&(lhs - rhs))
}

fn crossing_gap(d: usize, s: &CMatrix, crossed: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for alpha in 0..d {
        for beta in 0..d {
            for delta in 0..d {
                for gamma in 0..d {
                    let lhs = s[(alpha * d + beta, delta * d + gamma)];
                    let rhs = crossed[(delta * d + alpha, gamma * d + beta)];
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// Unitarity, Hermitian analyticity and crossing on `grid`; the Yang–Baxter
/// relation on all pairs from `pair_grid`.
pub fn smatrix_axiom_residuals(sd: &DiagonalSMatrix, grid: &[f64], pair_grid: &[f64]) -> Result<AxiomReport> {
    let d = sd.d;
    let mut report = AxiomReport {
        unitarity: 0.0,
        hermitian_analyticity: 0.0,
        yang_baxter: 0.0,
        crossing: 0.0,
    };
    for &theta in grid {
        let s = sd.eval(c(theta, 0.0))?;
        let s_neg = sd.eval(c(-theta, 0.0))?;
        let s_crossed = sd.eval(c(-theta, PI))?;
        report.unitarity = report
            .unitarity
            .max(op_norm(&(s.adjoint() * &s - identity(d * d))));
        report.hermitian_analyticity = report.hermitian_analyticity.max(op_norm(&(s_neg - s.adjoint())));
        report.crossing = report.crossing.max(crossing_gap(d, &s, &s_crossed));
    }
    for &t1 in pair_grid {
        for &t2 in pair_grid {
            let s1 = sd.eval(c(t1, 0.0))?;
            let s2 = sd.eval(c(t2, 0.0))?;
            let s12 = sd.eval(c(t1 + t2, 0.0))?;
            report.yang_baxter = report.yang_baxter.max(ybe_residual(d, &s1, &s12, &s2));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    /// `max |S₊ − S₋|` entrywise.
    pub plus_minus_gap: f64,
    /// `max ‖S(±30) − S_±‖`
    pub numeric_limit: f64,
    pub s0_involutivity: f64,
    pub limit_involutivity: f64,
    pub limit_crossing: f64,
    pub s0_yang_baxter: f64,
}

#[derive(Clone, Debug)]
pub struct SMatrixLimits {
    pub s0: CMatrix,
    pub s_plus: CMatrix,
    pub s_minus: CMatrix,
    pub report: LimitReport,
}

pub fn smatrix_limits(sd: &DiagonalSMatrix) -> Result<SMatrixLimits> {
    let d = sd.d;
    let s0 = sd.eval(c(0.0, 0.0))?;
    // Each factor tends to 1 as Re ζ → ±∞, in both directions.
    let s_plus = sd.limit_matrix();
    let s_minus = sd.limit_matrix();
    let numeric_limit = op_norm(&(sd.eval(c(LIMIT_PROBE, 0.0))? - &s_plus))
        .max(op_norm(&(sd.eval(c(-LIMIT_PROBE, 0.0))? - &s_minus)));
    let s0_r = RMatrix::from_matrix(d, s0.clone())?;
    let limit_r = RMatrix::from_matrix(d, s_plus.clone())?;
    let report = LimitReport {
        plus_minus_gap: max_abs(&(&s_plus - &s_minus)),
        numeric_limit,
        s0_involutivity: involutivity_residual(&s0_r),
        limit_involutivity: involutivity_residual(&limit_r),
        limit_crossing: crossing_residual(&limit_r),
        s0_yang_baxter: crate::rmatrix::yang_baxter_residual(&s0_r),
    };
    Ok(SMatrixLimits {
        s0,
        s_plus,
        s_minus,
        report,
    })
}

/// Complex entries as `[re, im]` rows, for reports.
pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// `true` when `m` has no entry off the weighted-flip pattern.
pub fn is_weighted_flip(m: &CMatrix, d: usize) -> bool {
    (0..d * d).all(|row| {
        (0..d * d).all(|col| {
            let (a, b) = (row / d, row % d);
            col == b * d + a || m[(row, col)] == ZERO
        })
    })
}
