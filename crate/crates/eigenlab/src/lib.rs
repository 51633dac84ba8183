//! Numerical laboratory for eigenvalue fluctuation statistics of Wigner and
//! sample covariance random matrices.
//!
//! The crate provides, in rough dependency order:
//!
//! * [`limit_laws`] — semicircle and Marchenko-Pastur laws: densities, CDFs,
//!   quantiles (classical eigenvalue locations), moments, sampling;
//! * [`variance`] — the limiting variance functionals of linear eigenvalue
//!   statistics, by Chebyshev quadrature adapted to the edge singularities;
//! * [`ensembles`] — seeded Wigner / sample covariance generators with
//!   configurable entry laws, moment-condition checkers, and the
//!   truncation-plus-mixture entry surgery;
//! * [`spectra`] — a dense symmetric eigensolver and the full / partial
//!   linear eigenvalue statistics;
//! * [`rigidity`] — deviations of ordered eigenvalues from their classical
//!   locations under the bulk/edge-sensitive normalizations;
//! * [`sampling`] — finite-population sampling without replacement, its
//!   martingale decomposition, and exact exhaustive checks;
//! * [`montecarlo`] — experiment orchestration and distribution comparison.
//!
//! The numerical kernels are generic over the scalar type via [`Real`]
//! (`f32` or `f64`); the orchestration layer and the aliases below fix `f64`.

pub mod ensembles;
pub mod limit_laws;
pub mod montecarlo;
pub mod quad;
pub mod real;
pub mod rigidity;
pub mod rng;
pub mod sampling;
pub mod spectra;
pub mod stats;
pub mod test_functions;
pub mod variance;

pub use ensembles::{EntryDistribution, SampleCovSpec, SymmetryClass, WignerSpec};
pub use limit_laws::{ClassicalLocations, LimitLaw};
pub use real::Real;
pub use spectra::Spectrum;
pub use test_functions::TestFunction;

/// Concrete `f64` aliases for the generic core types.
pub type Locations64 = ClassicalLocations<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type RigidityProfile64 = rigidity::RigidityProfile<f64>;
pub type VarianceReport64 = variance::VarianceReport<f64>;
