//! Exact rational geometry: linear algebra, linear programming and polytope
//! representation conversion.

pub mod adjacency;
pub mod dd;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod rational;

pub use adjacency::{vertex_adjacency, Graph};
pub use dd::{facet_enumeration, vertex_enumeration};
pub use lp::{dual_certificate, feasible_point, solve_lp, DualCertificate, FarkasCertificate, LpResult, LpStatus, Sense};
pub use polytope::{affine_dimension, Constraint, HRep, VRep};
pub use rational::{Rational, RationalVector};
