//! Exact rational arithmetic, polynomials, Sturm sequences, and root finding.

mod poly;
mod rational;
mod roots;
mod sturm;

pub use poly::Poly;
pub use rational::{
    format_rational, from_f64, parse_rational, rat, ratio, round_dyadic, terminating_decimal,
    to_f64, Rational,
};
pub use roots::{
    complex_roots, isolate_real_roots, narrow_interval, nonreal_root_count, refine_root,
    scaled_residual, IsolatingInterval, RootIsolation, DEFAULT_COMPLEX_TOL, DEFAULT_REFINE_TOL,
};
pub use sturm::{sturm_count, Bound, SturmChain};
