//! Exact contact-symmetry algebra of the minimal surface equation and
//! synthesis of the associated minimal surfaces.
//!
//! * [`symkernel`]: canonical exact expressions in `(p, q)`, the linearised
//!   equation's residual, parsing and formatting.
//! * [`contact`]: generator catalog, the contact Jacobi bracket, recursion
//!   operators and proliferation.
//! * [`legendre`]: inverse Legendre synthesis, fundamental forms and mean
//!   curvature on sampled grids.
//! * [`mesh_io`]: triangulation and OBJ/PLY/CSV export.

pub mod contact;
pub mod legendre;
pub mod mesh_io;
pub mod symkernel;

pub use symkernel::{ContactExpr, Rational};
