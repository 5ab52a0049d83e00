//! Quasi-exact spectrum of a neutral particle with an induced electric
//! dipole under Landau-type quantization, seen from a rotating frame and
//! bound by a Kratzer potential `V = -2D(a/rho - a^2/(2 rho^2))`.
//!
//! The radial equation reduces to a biconfluent Heun equation. Bound states
//! exist only where its series terminates, which ties the cyclotron frequency
//! to the quantum numbers. [`spectrum::allowed_frequencies`] finds those
//! frequencies, [`wavefunction`] builds the matching radial profiles and
//! [`oracle`] checks them against a finite-difference discretization.
//!
//! Numerical code is generic over [`scalar::Real`]; the coefficient recurrence
//! and the truncation polynomial also run over exact rationals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod heun;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod spectrum;
pub mod tridiag;
pub mod wavefunction;

pub use error::{Error, Result};
pub use heun::{generate_coefficients, termination_check, HeunParams, HeunSeries};
pub use model::{channel_params, ChannelParams, ConfigFile, Kratzer, PhysicalConfig};
pub use oracle::{verify_line, verify_quasi_exact, OracleReport, OracleStatus, RadialGrid};
pub use scalar::{Field, Real};
pub use spectrum::{allowed_frequencies, Branch, BranchSelection, SpectrumLine};
pub use wavefunction::{radial_wavefunction, RadialFunction};

use num_rational::BigRational;

pub type Config = PhysicalConfig<f64>;
pub type Channel = ChannelParams<f64>;
pub type Line = SpectrumLine<f64>;
pub type Profile = RadialFunction<f64>;
pub type Report = OracleReport<f64>;
pub type Grid = RadialGrid<f64>;
pub type Series = HeunSeries<f64>;
pub type ExactParams = HeunParams<BigRational>;
pub type ExactSeries = HeunSeries<BigRational>;
