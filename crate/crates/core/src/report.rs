//! Verification reports: per-case records with residuals, plus pass/fail
//! certificates for symbolic identities.

use serde::{Serialize, Serializer};

use crate::interp::InterpTable;
use crate::scalar::Backend;

/// Configuration shared by every verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub backend: Backend,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            backend: Backend::Exact,
            tol: 1e-9,
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn exact() -> Self {
        SuiteConfig::default()
    }

    pub fn float(tol: f64) -> Self {
        SuiteConfig {
            backend: Backend::Float,
            tol,
            seed: 0,
        }
    }
}

/// Residual of one check: exact arithmetic either matches or it does not;
/// float arithmetic carries a magnitude.
#[derive(Debug, Clone, PartialEq)]
pub enum Residual {
    ExactZero,
    ExactMismatch,
    Float(f64),
}

impl Residual {
    pub fn worse_than(&self, other: &Residual) -> bool {
        self.rank() > other.rank()
    }

    fn rank(&self) -> (u8, f64) {
        match self {
            Residual::ExactZero => (0, 0.0),
            Residual::Float(x) => (1, *x),
            Residual::ExactMismatch => (2, 0.0),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Residual::ExactZero => 0.0,
            Residual::Float(x) => *x,
            Residual::ExactMismatch => f64::NAN,
        }
    }
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::ExactZero => s.serialize_str("0"),
            Residual::ExactMismatch => s.serialize_str("exact-mismatch"),
            Residual::Float(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseRecord {
    pub index: usize,
    pub label: String,
    pub residual: Residual,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseRecord {
    pub fn pass(index: usize, label: impl Into<String>, residual: Residual) -> CaseRecord {
        CaseRecord {
            index,
            label: label.into(),
            residual,
            pass: true,
            detail: None,
        }
    }

    pub fn fail(
        index: usize,
        label: impl Into<String>,
        residual: Residual,
        detail: impl Into<String>,
    ) -> CaseRecord {
        CaseRecord {
            index,
            label: label.into(),
            residual,
            pass: false,
            detail: Some(detail.into()),
        }
    }
}

/// Result of one exact symbolic check.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Certificate {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Certificate {
        Certificate {
            name: name.into(),
            pass: true,
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Certificate {
        Certificate {
            name: name.into(),
            pass: false,
            detail: detail.into(),
        }
    }
}

/// A resolved shear-function table embedded in the report so a failed run
/// can be re-checked independently.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedTable {
    pub name: String,
    pub table: InterpTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub max_residual: Residual,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub task: String,
    pub config: SuiteConfig,
    pub cases: Vec<CaseRecord>,
    pub tables: Vec<ResolvedTable>,
    pub summary: Summary,
}

impl Report {
    pub fn new(task: impl Into<String>, config: SuiteConfig) -> Report {
        Report {
            task: task.into(),
            config,
            cases: Vec::new(),
            tables: Vec::new(),
            summary: Summary {
                total: 0,
                passed: 0,
                max_residual: Residual::ExactZero,
                wall_time: 0.0,
            },
        }
    }

    pub fn push(&mut self, case: CaseRecord) {
        self.cases.push(case);
    }

    pub fn push_certificate(&mut self, cert: &Certificate) {
        let index = self.cases.len();
        self.cases.push(CaseRecord {
            index,
            label: cert.name.clone(),
            residual: if cert.pass {
                Residual::ExactZero
            } else {
                Residual::ExactMismatch
            },
            pass: cert.pass,
            detail: if cert.pass {
                None
            } else {
                Some(cert.detail.clone())
            },
        });
    }

    pub fn attach_table(&mut self, name: impl Into<String>, table: InterpTable) {
        self.tables.push(ResolvedTable {
            name: name.into(),
            table,
        });
    }

    /// Recomputes the summary; call once all cases are in.
    pub fn finalize(&mut self, wall_time: f64) {
        let mut max = Residual::ExactZero;
        for c in &self.cases {
            if c.residual.worse_than(&max) {
                max = c.residual.clone();
            }
        }
        self.summary = Summary {
            total: self.cases.len(),
            passed: self.cases.iter().filter(|c| c.pass).count(),
            max_residual: max,
            wall_time,
        };
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}
