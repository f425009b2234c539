//! Geometric phases and gauge structure of two-level ("qubit") evolution.
//!
//! A qubit with `H = omega1 |0><0| + omega2 |1><1|` is prepared in the
//! rotated pair `|phi> = cos theta |0> + sin theta |1>`,
//! `|psi> = -sin theta |0> + cos theta |1>`. Over each period
//! `T = 2 pi / (omega2 - omega1)` the state returns to itself up to a phase,
//! which splits into a dynamical part `-omega_phiphi T` and a geometric part
//! `2 pi sin^2 theta` that depends on the mixing angle alone.
//!
//! Modules:
//!
//! * [`qubit`]: parameters, state preparation, closed-form evolution, matrix
//!   elements of `H`; [`integrator`] holds the RK4 oracle.
//! * [`phase`]: total/dynamical/geometric phases, overlaps, the
//!   gauge-filtered integral and the discrete Pancharatnam oracle.
//! * [`gauge`]: tilde states, the doublet covariant derivative and the
//!   gauge-field transformation law.
//! * [`thermo`]: free-energy operator, entropy term and the
//!   Anandan-Aharonov invariant.
//!
//! Units: `hbar = 1`, energies are angular frequencies.
//!
//! ## Feature flags
//!
//! * `parallel` (default): quadrature and trajectory grids are sampled on the
//!   rayon pool. Reductions stay sequential, so results are bit-identical
//!   with and without the feature. See [`exec::Strategy`].

pub mod error;
pub mod exec;
pub mod gauge;
pub mod integrator;
pub mod linalg;
pub mod phase;
pub mod qubit;
pub mod thermo;
pub mod unwrap;

pub use error::{Error, Result};
pub use exec::Strategy;
pub use linalg::{Operator2, QubitState, C64};
pub use qubit::{
    basis_states, evolve_phi, evolve_psi, hamiltonian_elements, make_params, reconstruct_H,
    EnergyElements, StateDoublet, StateSelector, TwoLevelParams,
};
