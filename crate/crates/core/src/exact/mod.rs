//! Exact arithmetic: Laurent polynomials, rational functions, truncated
//! series in `u`, and virtual characters.
//!
//! The variable universe is fixed once and for all: the quantum parameter
//! `q`, the toroidal parameter `t`, the symbolic root-of-unity stand-in `z`,
//! the framing characters `x1, x2, ...`, and the loop variable `u`. The
//! canonical term order is graded lexicographic with `q < t < z < x_s < u`.

mod laurent;
mod mono;
mod ratfunc;
mod series;
mod vchar;

pub use laurent::LaurentPoly;
pub use mono::{Mono, Var};
pub use ratfunc::RatFunc;
pub use series::{
    analyze_pole, cross_difference, exp_series, expand, log_series, residue,
    residue_at_infinity, residue_at_zero, PoleAnalysis, Series, SeriesDir,
};
pub use vchar::{lambda_series, VChar};
