//! The Ehrenfest urn chain on states 0..=k in exact rational arithmetic.
//!
//! From state i the chain moves to i−1 with probability i/k and to i+1 with
//! probability 1 − i/k. The chain is periodic with period 2, its stationary
//! law is Binomial(k, 1/2), and started from a fixed parity class the
//! two-step chain converges to the stationary law conditioned on that
//! parity — the lattice laws the fixed-point statistic of monotone-pattern
//! avoiders converges to.

use num_integer::binomial;
use num_traits::{One, Zero};

use super::StochasticError;
use crate::{Count, Rational};

/// Row-stochastic transition matrix, `(k+1) x (k+1)`.
pub fn ehrenfest_matrix(k: usize) -> Vec<Vec<Rational>> {
    assert!(k >= 1, "the chain needs at least two states");
    let kf = Rational::from_integer(k.into());
    let mut p = vec![vec![Rational::zero(); k + 1]; k + 1];
    for i in 0..=k {
        let down = Rational::from_integer(i.into()) / &kf;
        if i > 0 {
            p[i][i - 1] = down.clone();
        }
        if i < k {
            p[i][i + 1] = Rational::one() - down;
        }
    }
    p
}

/// Stationary law f(i) = C(k, i) / 2^k (exact).
pub fn ehrenfest_stationary(k: usize) -> Vec<Rational> {
    let denom: Count = Count::from(1u32) << k;
    (0..=k)
        .map(|i| {
            Rational::new(
                binomial(Count::from(k), Count::from(i)).into(),
                denom.clone().into(),
            )
        })
        .collect()
}

/// The two alternation limits: masses C(k, i)/2^(k-1) restricted to even i
/// (first component) and to odd i (second).
pub fn parity_limits(k: usize) -> (Vec<Rational>, Vec<Rational>) {
    let denom: Count = Count::from(1u32) << (k - 1);
    let mass = |i: usize| {
        Rational::new(
            binomial(Count::from(k), Count::from(i)).into(),
            denom.clone().into(),
        )
    };
    let even = (0..=k)
        .map(|i| if i % 2 == 0 { mass(i) } else { Rational::zero() })
        .collect();
    let odd = (0..=k)
        .map(|i| if i % 2 == 1 { mass(i) } else { Rational::zero() })
        .collect();
    (even, odd)
}

/// Evolves a distribution row vector `steps` times: v ← v P, exactly.
pub fn ehrenfest_evolve(
    k: usize,
    start: &[Rational],
    steps: usize,
) -> Result<Vec<Rational>, StochasticError> {
    if start.len() != k + 1 {
        return Err(StochasticError::InvalidDistribution(format!(
            "expected {} states, got {}",
            k + 1,
            start.len()
        )));
    }
    let total: Rational = start.iter().sum();
    if !total.is_one() || start.iter().any(|m| m < &Rational::zero()) {
        return Err(StochasticError::InvalidDistribution(
            "masses must be non-negative and sum to 1".into(),
        ));
    }
    let p = ehrenfest_matrix(k);
    let mut v = start.to_vec();
    for _ in 0..steps {
        let mut next = vec![Rational::zero(); k + 1];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, pij) in p[i].iter().enumerate() {
                if !pij.is_zero() {
                    next[j] += vi * pij;
                }
            }
        }
        v = next;
    }
    Ok(v)
}

/// Point mass at a state, as a distribution vector over 0..=k.
pub fn point_mass(k: usize, state: usize) -> Vec<Rational> {
    assert!(state <= k);
    let mut v = vec![Rational::zero(); k + 1];
    v[state] = Rational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn matrix_rows_are_stochastic() {
        for k in 1..=10 {
            let p = ehrenfest_matrix(k);
            for row in &p {
                let sum: Rational = row.iter().sum();
                assert!(sum.is_one());
            }
            // Boundary states reflect.
            assert!(p[0][1].is_one());
            assert!(p[k][k - 1].is_one());
        }
    }

    #[test]
    fn stationary_law_is_exactly_invariant() {
        // f P = f in exact arithmetic for k up to 10.
        for k in 1..=10 {
            let f = ehrenfest_stationary(k);
            let evolved = ehrenfest_evolve(k, &f, 1).unwrap();
            assert_eq!(evolved, f, "k = {k}");
        }
    }

    #[test]
    fn parity_limits_match_known_k3_values() {
        let (even, odd) = parity_limits(3);
        assert_eq!(even, vec![rat(1, 4), rat(0, 1), rat(3, 4), rat(0, 1)]);
        assert_eq!(odd, vec![rat(0, 1), rat(3, 4), rat(0, 1), rat(1, 4)]);
    }

    #[test]
    fn period_two_from_a_point_mass() {
        // Starting at state 0, even steps stay on even states.
        let k = 4;
        let v = ehrenfest_evolve(k, &point_mass(k, 0), 6).unwrap();
        for (i, m) in v.iter().enumerate() {
            if i % 2 == 1 {
                assert!(m.is_zero(), "odd state {i} has mass {m}");
            }
        }
        let total: Rational = v.iter().sum();
        assert!(total.is_one());
    }

    #[test]
    fn evolve_rejects_bad_vectors() {
        assert!(ehrenfest_evolve(3, &[Rational::one()], 1).is_err());
        let not_one = vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)];
        assert!(ehrenfest_evolve(3, &not_one, 1).is_err());
    }
}
