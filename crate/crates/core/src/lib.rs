//! Uhlmann geometric phase of a thermal spin-j particle in a slowly rotating
//! magnetic field.
//!
//! The phase is `arg[(-1)^{2j} U_{2j}(z)]` with `U_n` the second-kind Chebyshev
//! polynomial and `z(theta, beta B)` a closed curve in the complex plane
//! ([`chebyshev`]). [`holonomy`] recomputes the same quantity from the Uhlmann
//! connection and its path-ordered holonomy, and [`topology`] extracts the
//! critical temperatures and integer Uhlmann numbers.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`.

pub mod chebyshev;
pub mod engine;
pub mod error;
pub mod holonomy;
pub mod scalar;
pub mod spin;
pub mod thermal;
pub mod topology;
pub mod validate;

pub use chebyshev::{chebyshev_u, trace_via_lambda, uhlmann_phase_closed, z_variable};
pub use engine::PhaseEngine;
pub use error::{Error, Result};
pub use holonomy::{
    connection_closed_form, connection_spectral, holonomy_closed_form, holonomy_path_ordered,
    uhlmann_phase_trace, HolonomyMethod, PathIntegrator,
};
pub use scalar::{circle_distance, Cplx, Real};
pub use spin::{angular_momentum_matrices, matrix_exponential, rotated_eigenbasis, SpinNumber};
pub use thermal::{gibbs_state, occupation_probabilities};
pub use topology::{critical_temperatures, roots_enclosed, staircase, winding_number};

pub type Complex64 = scalar::Cplx<f64>;
pub type ComplexMatrix = spin::ComplexMatrix<f64>;
pub type LoopConfig = thermal::LoopConfig<f64>;
pub type ThermalSpectrum = thermal::ThermalSpectrum<f64>;
pub type ConnectionOneForm = holonomy::ConnectionOneForm<f64>;
pub type HolonomyMatrix = holonomy::HolonomyMatrix<f64>;
pub type PhaseResult = holonomy::PhaseResult<f64>;
pub type ZPoint = chebyshev::ZPoint<f64>;
pub type TraceValue = chebyshev::TraceValue<f64>;
pub type CriticalTable = topology::CriticalTable<f64>;
pub type CriticalEntry = topology::CriticalEntry<f64>;
pub type WindingResult = topology::WindingResult<f64>;
