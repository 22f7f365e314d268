//! Exact symbolic computation for shifted quantum loop groups.
//!
//! The crate is organized around six subsystems:
//!
//! - [`exact`]: multivariate Laurent polynomials over big integers, rational
//!   functions compared by cross-multiplication (no gcd), truncated `u`-series
//!   with exact expansion of rational functions at `u = 0` and `u = ∞`,
//!   residues, and virtual characters with Adams/lambda operations.
//! - [`quiver`]: quivers with symmetric Cartan data, the derived quiver
//!   constructions (double, triple, framed, graded), dimension vectors on `I`
//!   and `I×ℤ`, Cartan pairings and the arrow-wise Hall form.
//! - [`present`]: the Drinfeld relation catalogue for shifted simply-laced
//!   loop groups and the shifted toroidal gl(1) algebra, together with an
//!   exact relation checker running against finite operator tables.
//! - [`lattice`]: the A1/Jordan fixed-point representation on tuples in `ℕ^w`,
//!   with closed-form matrix coefficients, psi-series, the residue-theorem
//!   commutator identity, and Quot-scheme cell counting.
//! - [`qchar`]: Y/A-monomial combinatorics, the Frenkel-Mukhin character
//!   algorithm, Kirillov-Reshetikhin data, tensor-product simplicity criteria,
//!   and the stabilizing limit of normalized KR characters.
//! - [`grass`]: generalized preprojective algebras `Π ⊗ C[e]/(e^l)` for small
//!   type A quivers, their graded injectives, and exhaustive enumeration of
//!   graded submodule Grassmannians.
//!
//! Everything is exact: coefficients are big integers or rational functions,
//! never floats. All values are immutable after construction and safe to
//! share across threads.

pub mod error;
pub mod exact;
pub mod grass;
pub mod lattice;
pub mod present;
pub mod qchar;
pub mod quiver;

pub use error::Error;
pub use exact::{LaurentPoly, Mono, RatFunc, Series, SeriesDir, VChar, Var};
pub use quiver::{DimKey, DimVec, QuiverData, Support};
