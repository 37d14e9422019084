use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// `null` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub tool_version: String,
    pub spec_hash: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    pub details: Map<String, Value>,
    pub warnings: Vec<String>,
}

/// SHA-256 of one input, or of the concatenated digests of several.
pub fn spec_hash(inputs: &[&[u8]]) -> String {
    match inputs {
        [single] => format!("{:x}", Sha256::digest(single)),
        many => {
            let mut h = Sha256::new();
            for input in many {
                h.update(Sha256::digest(input));
            }
            format!("{:x}", h.finalize())
        }
    }
}

/// Accumulates check records; wall times are zeroed when timing is off so
/// that reports are byte-for-byte reproducible.
pub struct Recorder {
    report: VerificationReport,
    timing: bool,
}

pub struct Timed<T> {
    pub value: T,
    pub ms: f64,
}

impl Recorder {
    pub fn new(suite: &str, spec_hash: String, timing: bool) -> Self {
        Self {
            report: VerificationReport {
                schema: SCHEMA_VERSION,
                suite: suite.to_string(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                spec_hash,
                pass: true,
                checks: Vec::new(),
                details: Map::new(),
                warnings: Vec::new(),
            },
            timing,
        }
    }

    pub fn time<T>(&self, f: impl FnOnce() -> T) -> Timed<T> {
        let start = Instant::now();
        let value = f();
        let ms = if self.timing {
            start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        };
        Timed { value, ms }
    }

    /// Passes when `residual ≤ tolerance`.
    pub fn record(&mut self, name: &str, residual: f64, tolerance: f64, ms: f64) -> bool {
        let pass = residual <= tolerance;
        self.push(CheckRecord {
            name: name.to_string(),
            residual: Some(residual),
            tolerance,
            pass,
            wall_time_ms: ms,
            error: None,
        });
        pass
    }

    pub fn record_error(&mut self, name: &str, tolerance: f64, ms: f64, error: impl ToString) {
        self.push(CheckRecord {
            name: name.to_string(),
            residual: None,
            tolerance,
            pass: false,
            wall_time_ms: ms,
            error: Some(error.to_string()),
        });
    }

    fn push(&mut self, record: CheckRecord) {
        self.report.pass &= record.pass;
        self.report.checks.push(record);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report details serialize");
        self.report.details.insert(key.to_string(), value);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.report.warnings.push(message.into());
    }

    pub fn finish(self) -> VerificationReport {
        self.report
    }
}

impl VerificationReport {
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let residual = c
                .residual
                .map_or_else(|| "n/a".to_string(), |r| format!("{r:.3e}"));
            out.push_str(&format!(
                "{verdict}  {:<40} residual {residual:>10}  tol {:.1e}\n",
                c.name, c.tolerance
            ));
            if let Some(e) = &c.error {
                out.push_str(&format!("      error: {e}\n"));
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str(&format!(
            "{}: {}\n",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}
