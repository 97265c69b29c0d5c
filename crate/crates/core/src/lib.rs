//! Entanglement generated between Hawking radiation and horizon-infalling
//! field modes when a Vaidya shell collapses to a black hole.
//!
//! Per frequency the in-vacuum becomes a pure state of one `out` mode (reaching
//! future null infinity) and one `hor` mode (falling through the horizon):
//! a two-mode squeezed vacuum for bosons, a four-term state on the
//! particle/antiparticle double Fock basis for fermions. Either reduction is
//! thermal at the Hawking temperature `1/(8πm)`, and its von Neumann entropy
//! is the entanglement of the pair.
//!
//! Closed forms live in [`entanglement`]; [`states`] and [`fock`] build the
//! explicit truncated states and reduce them numerically so every closed form
//! has an independent check.
//!
//! ```
//! use collapse_entanglement::entanglement::{boson_entropy_x, fermion_entropy_x, default_crossover};
//!
//! // fermionic entanglement is bounded by two bits
//! assert!(fermion_entropy_x(1e-6) <= 2.0);
//! // and overtakes the bosonic one past x* ≈ 0.4067
//! let c = default_crossover().unwrap();
//! assert!(fermion_entropy_x(1.0) > boson_entropy_x(1.0));
//! assert!((c.x_star - 0.4067).abs() < 1e-4);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod geometry;
pub mod states;

pub use entanglement::{
    boson_entropy, crossover, entropy_report, fermion_entropy, sweep, CrossoverResult,
    EntropyReport,
};
pub use error::{Error, Result};
pub use fock::{BasisLabel, DensityOperator, Occupation, PureBipartiteState, Sector, Subsystem};
pub use geometry::{
    dimensionless_x, squeezing_for, BlackHoleParams, ModeChannel, SqueezingParams, Statistics,
};
pub use states::{
    boson_reduced_analytic, build_boson_state, build_fermion_state, fermion_reduced_analytic,
    BosonSqueezedVacuum, FermionOutHorState,
};
