//! Trace-centered Gaussian orthogonal ensemble.
//!
//! The sampled matrix is M = X − (tr X / k)·I where X is symmetric with
//! independent N(0, 1) diagonal and N(0, 1/2) off-diagonal entries. The
//! alternating sum of its ordered eigenvalues Λ₁ ≥ … ≥ Λ_k is the limit
//! statistic the tableau experiments converge to.

use super::matrix::{eigenvalues_sym, SymMatrix};
use super::rng::RandomStream;
use super::StochasticError;

/// Draws M = X − (tr X / k)·I with the entry variances above. Entries are
/// drawn in row-major upper-triangle order, so the draw is reproducible for
/// a given stream position.
pub fn sample_goe_traceless(k: usize, rng: &mut RandomStream) -> SymMatrix<f64> {
    let mut m = SymMatrix::from_fn(k, |i, j| {
        if i == j {
            rng.normal()
        } else {
            rng.normal() * std::f64::consts::FRAC_1_SQRT_2
        }
    });
    let shift = m.trace() / k as f64;
    for i in 0..k {
        let d = m.get(i, i);
        m.set(i, i, d - shift);
    }
    m
}

/// Λ₁ − Λ₂ + Λ₃ − … over the descending spectrum of a fresh trace-centered
/// GOE draw.
pub fn sample_goe_alternating_sum(
    k: usize,
    rng: &mut RandomStream,
) -> Result<f64, StochasticError> {
    let m = sample_goe_traceless(k, rng);
    let vals = eigenvalues_sym(&m)?;
    Ok(alternating_sum(&vals))
}

pub(crate) fn alternating_sum(vals: &[f64]) -> f64 {
    vals.iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
        .sum()
}

/// Unnormalized density of the ordered trace-zero spectrum:
/// exp(−½ Σ xⱼ²) · Π_{i<j} (x_i − x_j) on x₁ ≥ … ≥ x_k, Σ xⱼ = 0.
///
/// The normalizing constant is never computed; only ratios of this density
/// are meaningful.
pub fn goe_density(xs: &[f64], k: usize) -> Result<f64, StochasticError> {
    if xs.len() != k {
        return Err(StochasticError::InvalidArgument(format!(
            "expected {k} ordered eigenvalues, got {}",
            xs.len()
        )));
    }
    if xs.windows(2).any(|w| w[0] < w[1]) {
        return Err(StochasticError::InvalidArgument(
            "eigenvalues must be in descending order".into(),
        ));
    }
    let sum: f64 = xs.iter().sum();
    if sum.abs() > 1e-9 {
        return Err(StochasticError::InvalidArgument(format!(
            "spectrum must be traceless, got sum {sum}"
        )));
    }
    let gauss = (-0.5 * xs.iter().map(|x| x * x).sum::<f64>()).exp();
    let mut vandermonde = 1.0;
    for i in 0..k {
        for j in (i + 1)..k {
            vandermonde *= xs[i] - xs[j];
        }
    }
    Ok(gauss * vandermonde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn samples_are_traceless_and_reproducible() {
        let mut rng = RandomStream::new(11, 0);
        for k in 2..=6 {
            let m = sample_goe_traceless(k, &mut rng);
            assert!(m.trace().abs() < 1e-12, "trace {}", m.trace());
        }
        let a = sample_goe_traceless(4, &mut RandomStream::new(3, 5));
        let b = sample_goe_traceless(4, &mut RandomStream::new(3, 5));
        assert_eq!(a, b);
    }

    #[test]
    fn entry_variances_match_the_ensemble() {
        // Var(M₁₁) = 1 − 1/k and Var(M₁₂) = 1/2, within 1% over 10⁶ draws.
        let k = 3;
        let n = 1_000_000;
        let mut rng = RandomStream::new(42, 1);
        let (mut s11, mut q11, mut s12, mut q12) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let m = sample_goe_traceless(k, &mut rng);
            let a = m.get(0, 0);
            let b = m.get(0, 1);
            s11 += a;
            q11 += a * a;
            s12 += b;
            q12 += b * b;
        }
        let nf = n as f64;
        let var11 = q11 / nf - (s11 / nf).powi(2);
        let var12 = q12 / nf - (s12 / nf).powi(2);
        assert_relative_eq!(var11, 1.0 - 1.0 / k as f64, max_relative = 0.01);
        assert_relative_eq!(var12, 0.5, max_relative = 0.01);
    }

    #[test]
    fn alternating_sum_of_k2_is_twice_the_top_eigenvalue() {
        // For k = 2 the spectrum is ±λ, so Λ₁ − Λ₂ = 2Λ₁ ≥ 0.
        let mut rng = RandomStream::new(8, 2);
        for _ in 0..200 {
            let m = sample_goe_traceless(2, &mut rng);
            let vals = eigenvalues_sym(&m).unwrap();
            assert_relative_eq!(vals[0], -vals[1], epsilon = 1e-10);
            let alt = alternating_sum(&vals);
            assert!(alt >= 0.0);
            assert_relative_eq!(alt, 2.0 * vals[0], epsilon = 1e-10);
        }
    }

    #[test]
    fn density_validates_and_evaluates() {
        // Balanced spectrum (1, 0, -1): e^{-1} · (1·2·1) = 2/e.
        let d = goe_density(&[1.0, 0.0, -1.0], 3).unwrap();
        assert_relative_eq!(d, 2.0 * (-1.0f64).exp(), epsilon = 1e-12);
        assert!(goe_density(&[1.0, 0.0], 3).is_err());
        assert!(goe_density(&[0.0, 1.0, -1.0], 3).is_err());
        assert!(goe_density(&[2.0, 0.0, -1.0], 3).is_err());
    }
}
