use serde::{Deserialize, Serialize};

/// Report attached to [`crate::Error::Infeasible`]: the hypothesis constant
/// was too small for the instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Infeasibility {
    pub constant: f64,
    /// Smallest constant the solver would have accepted, when known.
    pub required: Option<f64>,
    pub best_residual: f64,
    pub witness: Vec<f64>,
    pub message: String,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (C = {}, residual {:e})", self.message, self.constant, self.best_residual)
    }
}

use crate::duality::BoundStatus;

/// How a best constant entering a bound was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantUsed {
    pub value: f64,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverMetadata {
    pub method: String,
    pub seed: u64,
    pub iterations: usize,
    /// Final gap between the relaxation and the best feasible point, when
    /// the method produces one.
    pub gap: Option<f64>,
    /// Whether the inner domination oracle was exact.
    pub exact_oracle: bool,
}

/// Weights for the two-sided weighted domination
/// `∫ |ψ(Tx)|^r / ω₂ dν ≤ ∫ |φ(x)|^r ω₁ dμ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightCertificate {
    pub r: f64,
    pub constant: f64,
    /// Codomain weight over `ν`; zero exactly on atoms never reached by `T`.
    pub omega2: Vec<f64>,
    /// Domain weight over `μ`; `None` for a Dirac domain, where the scalar 1
    /// is used.
    pub omega1: Option<Vec<f64>>,
    /// `sup_{‖y‖_{L_r(ν)} ≤ 1} ‖ω₂^{1/r} y‖_Y`.
    pub multiplication_norm: f64,
    /// `sup_{‖x‖_X ≤ 1} ‖ω₁^{1/r} x‖_{L_r(μ)}`.
    pub domain_norm: f64,
    /// `M_(r)(Y)` as used for the multiplication bound.
    pub codomain_concavity: ConstantUsed,
    /// `M^(r)(X)` as used for the domain bound.
    pub domain_convexity: ConstantUsed,
    /// Worst relative domination violation found when the weights were built.
    pub residual: f64,
    pub metadata: SolverMetadata,
}

impl WeightCertificate {
    /// `C · M_(r)(Y)`.
    pub fn multiplication_bound(&self) -> f64 {
        self.constant * self.codomain_concavity.value
    }

    /// `M^(r)(X)`.
    pub fn domain_bound(&self) -> f64 {
        self.domain_convexity.value
    }

    /// `ω₁`, with the Dirac convention of a single unit weight.
    pub fn omega1_or_unit(&self) -> Vec<f64> {
        self.omega1.clone().unwrap_or_else(|| vec![1.0])
    }
}

/// Probability weights `λ` on the coordinate functionals of `ℓ_∞^N` with
/// `‖Tx‖^r ≤ π^r Σ λ_j |x_j|^r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PietschCertificate {
    pub r: f64,
    pub lambda: Vec<f64>,
    /// The summing-norm bound the certificate is stated with.
    pub constant: f64,
    /// Smallest constant the solver could certify on its witness set.
    pub optimal_constant: f64,
    /// `max(0, sup_{‖x‖_∞ ≤ 1} ‖Tx‖^r − π^r Σ λ_j |x_j|^r)` over the search.
    pub residual: f64,
    pub witnesses: Vec<Vec<f64>>,
    pub metadata: SolverMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorSide {
    /// `T = M_g ∘ R` with `R: U → L_r(ν)`.
    Range,
    /// `T = R ∘ M_f` with `M_f: X(μ) → L_r(μ)`.
    Domain,
}

/// A multiplication operator and the complementary factor `R`, stored as a
/// matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResult {
    pub side: FactorSide,
    pub r: f64,
    pub multiplier: Vec<f64>,
    /// Row-major rows of `R`.
    pub r_matrix: Vec<Vec<f64>>,
    pub multiplier_norm: f64,
    pub r_norm: f64,
    pub norm_product: f64,
    /// The bound `‖M‖‖R‖` should satisfy.
    pub declared_bound: f64,
    pub composition_residual: f64,
}

/// Positive functionals `φ₁`, `φ₂` (as densities, already scaled by
/// `M^(rℓ)(Xℓ)^{rℓ}`) for `|u(x,y)| ≤ φ₁(|φ₁x|^{r₁})^{1/r₁} φ₂(|φ₂y|^{r₂})^{1/r₂}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxCertificate {
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    /// `1 − sup_z ⟨φℓ, |z|^{rℓ}⟩ / (Mℓ^{rℓ} ‖z‖^{rℓ})`; nonnegative when `φℓ`
    /// lies in its dual ball.
    pub margin1: f64,
    pub margin2: f64,
    /// `min 1 − |u(x,y)| / (a₁(x) a₂(y))` over retained and sampled pairs.
    pub form_margin: f64,
    pub retained_pairs: usize,
    pub metadata: SolverMetadata,
}

/// Independent re-check of a [`WeightCertificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Worst relative violation of the domination inequality (`+∞` when
    /// `ω₂` vanishes where `Tx` does not).
    pub domination_residual: f64,
    pub multiplication_norm: f64,
    pub multiplication_bound: f64,
    pub domain_norm: f64,
    pub domain_bound: f64,
    /// Worst ratio of the vector-valued inequality over random tuples.
    pub reverse_ratio: f64,
    pub reverse_bound: f64,
    pub domination_ok: bool,
    pub bounds_ok: bool,
    pub reverse_ok: bool,
    pub samples: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.domination_ok && self.bounds_ok && self.reverse_ok
    }
}

/// Domain weight `ω₁` with `‖Tx‖_F ≤ (∫ |φ(x)|^r ω₁ dμ)^{1/r}` and
/// `sup_{‖x‖_X ≤ 1} (∫ |x|^r ω₁ dμ)^{1/r} ≤ C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainWeightCertificate {
    pub r: f64,
    pub constant: f64,
    pub omega1: Vec<f64>,
    /// `sup_{‖x‖_X ≤ 1} (∫ |x|^r ω₁ dμ)^{1/r}`.
    pub domain_norm: f64,
    /// Worst relative domination violation found.
    pub residual: f64,
    pub metadata: SolverMetadata,
}
