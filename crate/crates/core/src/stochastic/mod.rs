//! Reproducible randomness and the stochastic side of the limit laws:
//! a counter-based random stream, trace-centered random symmetric (GOE)
//! matrices with a dense Jacobi eigensolver, the Ehrenfest urn chain in
//! exact rational arithmetic, and the direct composition sampler for
//! involutions avoiding 231.

mod ehrenfest;
mod goe;
mod matrix;
mod rng;

pub use ehrenfest::{
    ehrenfest_evolve, ehrenfest_matrix, ehrenfest_stationary, parity_limits, point_mass,
};
pub use goe::{goe_density, sample_goe_alternating_sum, sample_goe_traceless};
pub use matrix::{eigen_sym, eigenvalues_sym, SymEigen, SymMatrix};
pub use rng::RandomStream;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StochasticError {
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("invalid distribution vector: {0}")]
    InvalidDistribution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Number of fixed points of a uniform involution of `[n]` avoiding 231,
/// sampled directly through the composition bijection: a uniform composition
/// of `n` (a fair coin at each of the `n - 1` boundaries) whose number of
/// odd parts is the fixed-point count.
pub fn sample_iv231(n: usize, rng: &mut RandomStream) -> usize {
    if n == 0 {
        return 0;
    }
    let mut odd_parts = 0usize;
    let mut run = 1usize; // length of the part under construction
    for _ in 1..n {
        if rng.bit() {
            odd_parts += run & 1;
            run = 1;
        } else {
            run += 1;
        }
    }
    odd_parts + (run & 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iv231_edge_cases_and_parity() {
        let mut rng = RandomStream::new(7, 0);
        assert_eq!(sample_iv231(0, &mut rng), 0);
        assert_eq!(sample_iv231(1, &mut rng), 1); // the single part (1)
        for n in 2..40 {
            for _ in 0..50 {
                let fp = sample_iv231(n, &mut rng);
                // number of odd parts has the parity of n, and at most n parts
                assert_eq!(fp % 2, n % 2);
                assert!(fp <= n);
            }
        }
    }

    #[test]
    fn iv231_matches_exact_two_part_probabilities() {
        // n = 2: compositions (2) and (1,1) each w.p. 1/2, giving fp 0 or 2.
        let mut rng = RandomStream::new(99, 1);
        let draws = 40_000;
        let zeros = (0..draws)
            .filter(|_| sample_iv231(2, &mut rng) == 0)
            .count();
        let frac = zeros as f64 / draws as f64;
        assert!((frac - 0.5).abs() < 0.02, "P(fp=0) ~ {frac}");
    }
}
