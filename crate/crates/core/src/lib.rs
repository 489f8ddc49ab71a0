//! Fixed-point statistics of pattern-avoiding involutions.
//!
//! An involution is a permutation equal to its own inverse; its fixed points
//! are the positions `i` with `pi(i) = i`. This crate studies how the number
//! of fixed points behaves on involutions (and, in one case, on all
//! permutations) constrained to avoid a short pattern, from three angles:
//!
//! * exact enumeration and bivariate generating functions (`perm`, `series`),
//! * bijections carrying the fixed-point statistic onto compositions, Dyck
//!   paths, and standard Young tableaux (`bijections`, `tableaux`),
//! * reproducible Monte Carlo simulation of the limit laws — Rayleigh,
//!   Gaussian, negative binomial, eigenvalue statistics of trace-centered
//!   random symmetric matrices, and the two-point lattice laws of the
//!   Ehrenfest chain (`stochastic`, `dist`).
//!
//! The numerical kernels are generic over their scalar: series arithmetic
//! over any commutative ring with exact division (instantiated with
//! arbitrary-precision rationals below), dense symmetric eigensolving over
//! any [`num_traits::Float`]. The concrete aliases at the crate root are the
//! types the rest of the crate and the CLI actually use.

pub mod bijections;
pub mod dist;
pub mod experiments;
pub mod perm;
pub mod series;
pub mod special;
pub mod stochastic;
pub mod tableaux;

/// Exact scalar used for generating-function coefficients, probability
/// masses, and Markov-chain arithmetic. Always stored reduced with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Unbounded non-negative integer: class cardinalities, tableau counts,
/// binomial/ballot numbers.
pub type Count = num_bigint::BigUint;

/// Signed companion of [`Count`], used where subtraction can occur.
pub type Int = num_bigint::BigInt;

/// Bivariate series truncated in `t` with exact rational coefficients; the
/// concrete instantiation every generating function in this crate uses.
pub type BivariateSeries = series::TruncatedBivariateSeries<Rational>;

/// Dense symmetric matrix over `f64`, the instantiation used by the random
/// matrix samplers.
pub type SymMatrix64 = stochastic::SymMatrix<f64>;
