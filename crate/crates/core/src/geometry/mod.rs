//! Finite fields, the standard forms, point counts of the classical
//! geometries, `d*` values with exact square roots, and envelopes.

pub mod counts;
pub mod envelope;
pub mod field;
pub mod forms;
pub mod radical;

pub use counts::{brute_force_point_count, orthogonal_zero_count, projective_point_count, GeometryKind, MAX_BRUTE_FORCE};
pub use envelope::{build_envelope, dstar_of_member, eval_poly_at_dstar, DimensionFunction, Envelope, EnvelopeExample};
pub use field::{is_prime, prime_power, Gf};
pub use forms::{FormSign, OrthogonalForm};
pub use radical::{DStarValue, RadicalNumber};

use crate::families::FamilyError;
use crate::poly::PolyError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("{0} is not the order of a supported finite field")]
    BadField(u64),
    #[error("linear dimension must be at least 1")]
    DimensionZero,
    #[error("{0} is not a field element")]
    NotInField(u32),
    #[error("no such orthogonal form in characteristic 2")]
    NoSuchForm,
    #[error("dimension {dim} is not 2i+{j}")]
    DimensionParity { dim: u64, j: usize },
    #[error("{0} geometries carry no form to count values of")]
    NoForm(&'static str),
    #[error("{0} vectors exceed the enumeration limit")]
    TooLarge(u128),
    #[error("bad envelope dimensions {0:?}")]
    BadDimensions(alloc::vec::Vec<u64>),
    #[error("no d* vector for {0} members")]
    NoDStar(&'static str),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
