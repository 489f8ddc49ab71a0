//! Dense symmetric matrices over any floating scalar, with eigendecomposition
//! by the cyclic Jacobi method. Dimensions here are tiny (the random-matrix
//! limit laws use k ≤ 10), where Jacobi is simple, robust, and as accurate
//! as anything.

use num_traits::Float;

use super::StochasticError;

/// Symmetric matrix storing a single upper triangle, so `get(i, j)` and
/// `get(j, i)` are the same memory and can never disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<F> {
    k: usize,
    tri: Vec<F>, // row-major upper triangle, length k(k+1)/2
}

impl<F: Float> SymMatrix<F> {
    pub fn zeros(k: usize) -> Self {
        Self {
            k,
            tri: vec![F::zero(); k * (k + 1) / 2],
        }
    }

    /// Builds from a function of `(i, j)` evaluated only on `i <= j`.
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in i..k {
                let v = f(i, j);
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        r * self.k - r * (r + 1) / 2 + c
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.tri[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        let idx = self.idx(i, j);
        self.tri[idx] = v;
    }

    pub fn trace(&self) -> F {
        (0..self.k).fold(F::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn frobenius_norm(&self) -> F {
        let mut sum = F::zero();
        for i in 0..self.k {
            for j in 0..self.k {
                let v = self.get(i, j);
                sum = sum + v * v;
            }
        }
        sum.sqrt()
    }
}

/// Eigendecomposition of a symmetric matrix: `values` descending,
/// `vectors[c]` the unit eigenvector paired with `values[c]`.
#[derive(Debug, Clone)]
pub struct SymEigen<F> {
    pub values: Vec<F>,
    pub vectors: Vec<Vec<F>>,
}

const MAX_SWEEPS: usize = 64;

/// Full eigendecomposition by cyclic Jacobi rotations.
pub fn eigen_sym<F: Float>(m: &SymMatrix<F>) -> Result<SymEigen<F>, StochasticError> {
    let k = m.dim();
    if k == 0 {
        return Ok(SymEigen {
            values: vec![],
            vectors: vec![],
        });
    }
    // Dense working copy and accumulated rotations.
    let mut a: Vec<Vec<F>> = (0..k)
        .map(|i| (0..k).map(|j| m.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<F>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { F::one() } else { F::zero() })
                .collect()
        })
        .collect();

    let norm = m.frobenius_norm();
    let tol = F::epsilon() * norm.max(F::one());

    let off = |a: &Vec<Vec<F>>| {
        let mut s = F::zero();
        for i in 0..k {
            for j in (i + 1)..k {
                s = s + a[i][j] * a[i][j];
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = a[p][q];
                if apq == F::zero() {
                    continue;
                }
                // Rotation angle zeroing a[p][q] (Golub & Van Loan 8.4).
                let theta = (a[q][q] - a[p][p]) / (apq + apq);
                let t = {
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    sign / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                // Update rows/columns p and q of A.
                for i in 0..k {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for j in 0..k {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = c * apj - s * aqj;
                    a[q][j] = s * apj + c * aqj;
                }
                // Accumulate the rotation into the eigenvector columns.
                for i in 0..k {
                    let vip = v[i][p];
                    let viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    if !converged && off(&a) > tol {
        return Err(StochasticError::NonConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..k).collect();
    // Descending eigenvalues; total order keeps the sort deterministic.
    order.sort_by(|&x, &y| a[y][y].partial_cmp(&a[x][x]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&c| (0..k).map(|r| v[r][c]).collect())
        .collect();
    Ok(SymEigen { values, vectors })
}

/// Eigenvalues only, in descending order.
pub fn eigenvalues_sym<F: Float>(m: &SymMatrix<F>) -> Result<Vec<F>, StochasticError> {
    Ok(eigen_sym(m)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn storage_is_symmetric_by_construction() {
        let mut m = SymMatrix::<f64>::zeros(3);
        m.set(0, 2, 5.0);
        assert_eq!(m.get(2, 0), 5.0);
        m.set(2, 1, -1.0);
        assert_eq!(m.get(1, 2), -1.0);
    }

    #[test]
    fn eigenvalues_of_known_2x2() {
        // [[2, 1], [1, 2]] has eigenvalues 3 and 1.
        let m = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let vals = eigenvalues_sym(&m).unwrap();
        assert_relative_eq!(vals[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_matrix_is_already_solved() {
        let m = SymMatrix::from_fn(4, |i, j| if i == j { (i as f64) - 1.5 } else { 0.0 });
        let vals = eigenvalues_sym(&m).unwrap();
        assert_eq!(vals, vec![1.5, 0.5, -0.5, -1.5]);
    }

    #[test]
    fn reconstruction_from_eigen_pairs() {
        // Fixed deterministic matrix; check Q Λ Qᵀ = M to 1e-12.
        let m = SymMatrix::from_fn(5, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let e = eigen_sym(&m).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let mut rec = 0.0;
                for c in 0..5 {
                    rec += e.vectors[c][i] * e.values[c] * e.vectors[c][j];
                }
                assert_relative_eq!(rec, m.get(i, j), epsilon = 1e-11);
            }
        }
        // Eigenvalue sum equals the trace.
        let sum: f64 = e.values.iter().sum();
        assert_relative_eq!(sum, m.trace(), epsilon = 1e-11);
    }

    #[test]
    fn works_in_f32_too() {
        let m = SymMatrix::<f32>::from_fn(3, |i, j| if i == j { 1.0 } else { 0.5 });
        let vals = eigenvalues_sym(&m).unwrap();
        // Eigenvalues of I/2 + J/2 (J all-ones): 2.0, 0.5, 0.5.
        assert_relative_eq!(vals[0], 2.0, epsilon = 1e-5);
        assert_relative_eq!(vals[1], 0.5, epsilon = 1e-5);
        assert_relative_eq!(vals[2], 0.5, epsilon = 1e-5);
    }
}
