//! Photon Loschmidt echoes in binary waveguide lattices.
//!
//! A binary lattice alternates the propagation constant of neighbouring
//! waveguides by `±δ`. Propagating a state over a length `L`, exchanging the
//! two sublattices (`δ → −δ`) and propagating another `L` approximately undoes
//! the first segment. This crate builds the lattice Hamiltonians, evaluates
//! the two-segment echo exactly through spectral propagators, and scores the
//! revival for classical light and for single-photon, Fock, NOON and W inputs.
//!
//! Modules:
//! - [`lattice`]: 1D/2D Hamiltonians, coupling disorder, mini-band dispersion.
//! - [`propagator`]: spectral `exp(−iHz)`, an RK4 oracle, the echo protocol.
//! - [`states`]: input states, closed-form fidelities, permanent-based oracle.
//! - [`effective`]: second-order sublattice-decoupled effective Hamiltonian.
//! - [`scenario`]: declarative scenario configs, runner and file output.

pub mod effective;
pub mod error;
pub mod lattice;
pub mod propagator;
pub mod scenario;
pub mod states;

pub use error::{Error, Result};
pub use lattice::{DisorderSpec, Geometry, Hamiltonian, LatticeSpec};
pub use num_complex::Complex64;
pub use propagator::{EchoProtocol, EvolutionTrace, SecondSegment, SpectralPropagator, Unitary};
pub use states::InputState;
