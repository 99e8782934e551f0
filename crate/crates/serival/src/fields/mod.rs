//! Exact coefficient arithmetic: the base field k and the rational-function
//! field K = k(t_1, ..., t_{N-1}) that carries the coefficients of the
//! blow-up completion.

mod coeff;
mod poly;
mod ratfunc;

pub use coeff::{is_prime_u64, BaseField, Coeff};
pub use poly::{check_compatible, format_mono, format_poly, Mono, Poly};
pub use ratfunc::RatFunc;
