//! Exact computer algebra for truncated multivariate power series over the
//! tower O_N -> V_N -> V_hat_N, together with an experiment lab that measures
//! Diophantine-approximation and Artin-function bounds on concrete
//! polynomial families.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals or
//! prime-field elements, and all valuations are tracked in log scale as
//! integer orders with explicit truncation (`OrderValue::AtLeast`).

pub mod algebra;
pub mod completion;
pub mod error;
pub mod membership;
pub mod lab;
pub mod parse;
pub mod fields;
pub mod series;

pub use algebra::{HomogForm, SeriesPoly};
pub use completion::{distance, embed_blowup, CompletedElement, Fraction, Limits};
pub use error::{Error, Result};
pub use fields::{BaseField, Coeff, Mono, Poly, RatFunc};
pub use series::{exact_divide, DivisionOutcome, OrderValue, Series};
