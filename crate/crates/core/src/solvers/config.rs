use serde::{Deserialize, Serialize};

use crate::search::SearchBudget;

/// Shared solver settings. Every random choice a solver makes is derived
/// from `seed`, so equal configs give equal certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub seed: u64,
    /// Relative tolerance for certified bounds and residuals.
    pub tolerance: f64,
    /// Outer cutting-plane rounds.
    pub max_iterations: usize,
    /// Multi-start budget for adversarial inner searches.
    pub search: SearchBudget,
    /// Random samples drawn by the verifier for each check.
    pub verify_samples: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { seed: 0, tolerance: 1e-6, max_iterations: 300, search: SearchBudget::default(), verify_samples: 100 }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub(crate) fn budget(&self) -> SearchBudget {
        self.search.clone().with_seed(self.seed)
    }
}
