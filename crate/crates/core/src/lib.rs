//! Computational model of adic spaces over a p-adic base field.

pub mod basefield;
pub mod linalg;
pub mod point;
pub mod presentation;
pub mod series;
pub mod sheafcheck;
pub mod subset;
pub mod valgroup;

pub type Rational = num_rational::BigRational;

pub use basefield::{BaseField, FieldElement};
pub use series::{Precision, Series, SeriesError, Tail};
pub use valgroup::Value;
