//! Quasi-Köthe function spaces on finite measure spaces: norm oracles,
//! convexity constants, and certified weights and factorizations for
//! vector-valued norm inequalities.

pub mod constants;
pub mod duality;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod measure;
pub mod operator;
pub mod oracles;
pub mod rearrangement;
pub mod search;
pub mod solvers;
pub mod space;
pub mod vectorvalued;
pub mod young;

pub use error::{Error, Result};
pub use measure::{DiscreteMeasure, LatticeFunction};
pub use rearrangement::{decreasing_rearrangement, StepFunction};
pub use space::{power_space, SpaceDescriptor};
pub use young::YoungFunction;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/summing.md")]
    mod summing {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
