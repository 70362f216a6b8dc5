//! Contact symmetries of the minimal surface equation: the generator
//! catalog, the Jacobi bracket on first-order generators and the recursion
//! operators on the commutative subalgebra of `(p, q)`-only generators.

mod bracket;
mod catalog;
mod jet;

pub use bracket::{jacobi_bracket, recursion_rot12, recursion_t, verify_prop3, Operator, Prop3Check, Prop3Report};
pub use catalog::{
    builtin_names, CatalogEntry, GeneratorCatalog, Provenance, H_BUILTIN, MANIFEST_HEADER, PHI12_AS_PRINTED,
};
pub use jet::{JetFunction, JetMonomial};

use thiserror::Error;

use crate::symkernel::{ClassError, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("unknown generator '{name}'; available: {available}")]
    UnknownName { name: String, available: String },
    #[error("unknown operator '{0}'; expected one of rot12, t1, t2, dil")]
    UnknownOperator(String),
    #[error("generator '{0}' depends on x, y or u and is not a function of (p, q)")]
    NotInSubalgebra(String),
    #[error("bracket result has degree above one in (x, y, u)")]
    DegreeOverflow,
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("parse error: {0}")]
    Parse(ParseError),
    #[error("internal consistency failure: '{name}' has nonzero residual {residual}")]
    ResidualNonzero { name: String, residual: String },
    #[error("name '{0}' is already registered with a different generator")]
    NameConflict(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
}
