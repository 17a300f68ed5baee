//! Experiment configuration files.
//!
//! ```json
//! {
//!   "task": { "type": "weight", "operator": { ... }, "r": 2, "c": 2 },
//!   "solver": { "seed": 7 },
//!   "output_dir": "out"
//! }
//! ```
//!
//! Unknown fields are rejected everywhere.

use std::path::{Path, PathBuf};

use kothe::constants::ConstantKind;
use kothe::measure::DiscreteMeasure;
use kothe::operator::{FormSpec, OperatorSpec};
use kothe::search::SearchBudget;
use kothe::solvers::{SolverConfig, WeightCertificate};
use kothe::space::SpaceDescriptor;
use kothe::vectorvalued::{lift_vector_valued, make_representation, BlockOperator, RepresentationSpec, VectorNorm, VectorValuedSpace};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Relative to the config file; `--out` takes precedence.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    /// Definitional power norms against the simplified descriptors.
    NormTable { cases: Vec<NormCase>, powers: Vec<f64> },
    Constants {
        cases: Vec<SpaceCase>,
        r: Vec<f64>,
        kinds: Vec<ConstantKind>,
        #[serde(default)]
        budget: Option<SearchBudget>,
    },
    Weight {
        operator: OperatorConfig,
        r: f64,
        c: f64,
        #[serde(default)]
        route: Route,
    },
    Pietsch { operator: OperatorConfig, r: f64, pi: f64 },
    Minimax {
        left: RepresentationSpec,
        right: RepresentationSpec,
        /// Bilinear form `u(x, y) = xᵀ A y`.
        matrix: Vec<Vec<f64>>,
        r1: f64,
        r2: f64,
        constants: [f64; 2],
    },
    VvWeight { operator: BlockOperator, domain: VvSpace, codomain: VvSpace, r: f64, c: f64 },
    Verify { operator: OperatorConfig, certificate: WeightCertificate },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::NormTable { .. } => "norm-table",
            Task::Constants { .. } => "constants",
            Task::Weight { .. } => "weight",
            Task::Pietsch { .. } => "pietsch",
            Task::Minimax { .. } => "minimax",
            Task::VvWeight { .. } => "vv-weight",
            Task::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Codomain weight, cutting-plane route.
    #[default]
    Direct,
    /// Codomain weight through the scaled variable.
    Scaled,
    /// Domain weight.
    Domain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceCase {
    pub space: SpaceDescriptor,
    pub measure: DiscreteMeasure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormCase {
    pub space: SpaceDescriptor,
    pub measure: DiscreteMeasure,
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    /// Row-major; `rows = codomain input dimension`, `columns = domain input dimension`.
    pub matrix: Vec<Vec<f64>>,
    pub domain: RepresentationSpec,
    pub codomain: RepresentationSpec,
}

impl OperatorConfig {
    pub fn build(&self) -> kothe::Result<OperatorSpec> {
        OperatorSpec::matrix(&self.matrix, make_representation(self.domain.clone())?, make_representation(self.codomain.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VvSpace {
    pub outer: SpaceDescriptor,
    pub measure: DiscreteMeasure,
    pub inner: VectorNorm,
    pub block_dim: usize,
}

impl VvSpace {
    pub fn build(&self) -> VectorValuedSpace {
        VectorValuedSpace::new(self.outer.clone(), self.measure.clone(), self.inner.clone(), self.block_dim)
    }
}

pub fn lift(operator: &BlockOperator, domain: &VvSpace, codomain: &VvSpace) -> kothe::Result<OperatorSpec> {
    lift_vector_valued(operator, &domain.build(), &codomain.build())
}

pub fn bilinear(left: &RepresentationSpec, right: &RepresentationSpec, matrix: &[Vec<f64>], r1: f64, r2: f64) -> kothe::Result<FormSpec> {
    let left = make_representation(left.clone())?;
    let right = make_representation(right.clone())?;
    let cols = matrix.first().map_or(0, Vec::len);
    if let Some(bad) = matrix.iter().find(|row| row.len() != cols) {
        return Err(kothe::Error::DimensionMismatch { expected: cols, got: bad.len() });
    }
    let a = DMatrix::from_fn(matrix.len(), cols, |i, j| matrix[i][j]);
    FormSpec::bilinear(a, left, right, r1, r2)
}

/// Errors that map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{path}: task `{found}` does not match subcommand `{expected}`")]
    TaskMismatch { path: PathBuf, expected: &'static str, found: &'static str },
    #[error("{path}: invalid {field}: {source}")]
    Invalid { path: PathBuf, field: &'static str, source: kothe::Error },
}

pub fn load(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> Result<ExperimentConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| {
        let message = e.to_string().split(" at line ").next().unwrap_or_default().to_string();
        let (line, column) = unknown_field_position(text, &message, (e.line(), e.column())).unwrap_or((e.line(), e.column()));
        ConfigError::Parse { path: path.to_path_buf(), line, column, message }
    })
}

/// Tagged enums are buffered before they are checked, so serde reports
/// unknown fields at the end of the enclosing object. Points at the last
/// occurrence of the key before that position instead.
fn unknown_field_position(text: &str, message: &str, (line, column): (usize, usize)) -> Option<(usize, usize)> {
    let field = message.strip_prefix("unknown field `")?.split('`').next()?;
    let end: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum::<usize>() + column;
    let at = text[..end.min(text.len())].rfind(&format!("\"{field}\""))?;
    let line = text[..at].matches('\n').count() + 1;
    let column = at - text[..at].rfind('\n').map_or(0, |i| i + 1) + 1;
    Some((line, column))
}

/// Builds every mathematical object the task needs, so that malformed
/// inputs are reported before any computation starts.
pub fn validate(cfg: &ExperimentConfig, path: &Path) -> Result<(), ConfigError> {
    let invalid = |field: &'static str| move |source| ConfigError::Invalid { path: path.to_path_buf(), field, source };
    match &cfg.task {
        Task::NormTable { cases, powers } => {
            for case in cases {
                case.space.validate().map_err(invalid("space"))?;
                if let Some(v) = case.vectors.iter().find(|v| v.len() != case.measure.len()) {
                    return Err(invalid("vectors")(kothe::Error::DimensionMismatch { expected: case.measure.len(), got: v.len() }));
                }
            }
            for &r in powers {
                kothe::space::power_space(&SpaceDescriptor::lp(1.0), r).map_err(invalid("powers"))?;
            }
        }
        Task::Constants { cases, r, .. } => {
            for case in cases {
                case.space.validate().map_err(invalid("space"))?;
            }
            for &r in r {
                if !(r.is_finite() && r > 0.0) {
                    return Err(invalid("r")(kothe::Error::InvalidExponent { value: r, reason: "r must be in (0, ∞)" }));
                }
            }
        }
        Task::Weight { operator, .. } | Task::Pietsch { operator, .. } | Task::Verify { operator, .. } => {
            operator.build().map_err(invalid("operator"))?;
        }
        Task::Minimax { left, right, matrix, r1, r2, .. } => {
            bilinear(left, right, matrix, *r1, *r2).map_err(invalid("form"))?;
        }
        Task::VvWeight { operator, domain, codomain, .. } => {
            lift(operator, domain, codomain).map_err(invalid("operator"))?;
        }
    }
    Ok(())
}
