//! Certificate-producing solvers: weighted domination, summing-norm
//! domination, minimax functionals and factorizations.

mod barrier;
mod certificate;
mod config;
pub(crate) mod inner;

pub use certificate::{
    ConstantUsed, DomainWeightCertificate, FactorSide, FactorizationResult, Infeasibility, MinimaxCertificate, PietschCertificate, SolverMetadata,
    VerificationReport, WeightCertificate,
};
pub use config::SolverConfig;
mod weights;

pub use weights::{lp_multiplication_norm, solve_weight_pair};
mod scaled;

pub use scaled::solve_weight_pair_scaled;
mod domain;

pub use domain::solve_weight_domain;
mod factorization;
mod verify;

pub use factorization::{build_factorization_domain, build_factorization_range, operator_matrix};
pub use verify::verify_weight_certificate;
mod pietsch;

pub use pietsch::solve_pietsch;
mod minimax;

pub use minimax::solve_minimax;
