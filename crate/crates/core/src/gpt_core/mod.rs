//! State spaces, effects, measurements and transformations of generalized
//! probabilistic theories.
//!
//! Polytopal state spaces are handled exactly. The qubit's Bloch ball has an
//! irrational boundary and lives in floating point in [`bloch`]; nothing in
//! that module feeds back into exact code.

pub mod affine;
pub mod bloch;
pub mod effect;
pub mod space;

pub use affine::{is_reversible_transformation, AffineMap};
pub use bloch::{bloch_density, unitary_to_rotation, BlochState, Complex2x2, Rotation3};
pub use effect::{validate_effect, Effect, Measurement};
pub use space::{
    decompose_state, decompose_state_limited, gbit_pure_states, make_ball3, make_classical, make_gbit, Decomposition,
    SpaceKind, StateSpace,
};
