//! Truncated bivariate power series and the generating functions that
//! enumerate pattern-avoiding involutions by length and fixed points.
//!
//! A series is stored as rows in the length variable `t`, each row a dense
//! polynomial in the statistic variable `x`; everything is exact when the
//! coefficient type is rational. Division is coefficient long division
//! against a divisor with an invertible constant term, and square roots are
//! Newton iterations that reuse division as their kernel, so the engine
//! stays small. The named enumerators at the bottom additionally get an
//! integer-arithmetic construction (closed-form Catalan square roots plus
//! one exact long division): their coefficients are counts, and carrying
//! rationals through the expansion would pay a gcd normalization on every
//! operation — ruinous at the orders the verification suites ask for. A
//! test pins the two constructions to each other.

use std::fmt::Debug;
use std::ops::Neg;

use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::dist::{DistError, FiniteLaw};
use crate::{Count, Int, Rational};

/// Everything the engine needs of a coefficient: a commutative ring with
/// exact division where defined (`Num` supplies the arithmetic and 0/1).
pub trait Coefficient: Num + Clone + Neg<Output = Self> + Debug {}
impl<T: Num + Clone + Neg<Output = T> + Debug> Coefficient for T {}

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("divisor must have an invertible constant term (nonzero, degree 0 in x)")]
    NonUnitDivisor,
    #[error("square root requires constant term exactly 1")]
    SqrtBase,
    #[error("series is truncated at order {order}, coefficient {requested} requested")]
    OrderExceeded { order: usize, requested: usize },
    #[error("cannot divide by t^{shift}: a lower-order row is nonzero")]
    ShiftUnderflow { shift: usize },
    #[error("row {n} of the series has zero total mass")]
    EmptyRow { n: usize },
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// Dense polynomial in `x`; trailing zero coefficients are kept trimmed so
/// equality and degree are structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> XPoly<C> {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `x`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, j: usize) -> C {
        self.coeffs.get(j).cloned().unwrap_or_else(C::zero)
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            (0..n)
                .map(|j| self.coefficient(j) + other.coefficient(j))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            (0..n)
                .map(|j| self.coefficient(j) - other.coefficient(j))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    fn div_constant(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() / c.clone()).collect())
    }

    /// Value at `x = 1`: the sum of the coefficients.
    pub fn eval_one(&self) -> C {
        self.coeffs
            .iter()
            .fold(C::zero(), |acc, c| acc + c.clone())
    }
}

/// A power series in `t` truncated after `t^order`, with coefficients in
/// `C[x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBivariateSeries<C> {
    order: usize,
    rows: Vec<XPoly<C>>,
}

impl<C: Coefficient> TruncatedBivariateSeries<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            rows: vec![XPoly::zero(); order + 1],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::from_rows(vec![XPoly::constant(c)], order)
    }

    /// Rows `t^0, t^1, …`, padded with zeros or truncated to exactly
    /// `order + 1`.
    pub fn from_rows(mut rows: Vec<XPoly<C>>, order: usize) -> Self {
        rows.resize(order + 1, XPoly::zero());
        Self { order, rows }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, n: usize) -> Result<&XPoly<C>, SeriesError> {
        self.rows.get(n).ok_or(SeriesError::OrderExceeded {
            order: self.order,
            requested: n,
        })
    }

    /// The coefficient of `x^j t^n`.
    pub fn coefficient(&self, n: usize, j: usize) -> Result<C, SeriesError> {
        Ok(self.row(n)?.coefficient(j))
    }

    /// Truncation to `new_order` (no-op if already shorter).
    pub fn truncated(&self, new_order: usize) -> Self {
        let order = new_order.min(self.order);
        Self {
            order,
            rows: self.rows[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Self {
            order,
            rows: (0..=order)
                .map(|i| self.rows[i].add(&other.rows[i]))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Self {
            order,
            rows: (0..=order)
                .map(|i| self.rows[i].sub(&other.rows[i]))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let rows = (0..=order)
            .map(|k| {
                let mut acc = XPoly::zero();
                for i in 0..=k {
                    if !self.rows[i].is_zero() && !other.rows[k - i].is_zero() {
                        acc = acc.add(&self.rows[i].mul(&other.rows[k - i]));
                    }
                }
                acc
            })
            .collect();
        Self { order, rows }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            order: self.order,
            rows: self.rows.iter().map(|r| r.scale(c)).collect(),
        }
    }

    /// Long division: requires the divisor's constant term to be a nonzero
    /// constant `c`, so each quotient row is determined by the rows before
    /// it and one exact division by `c`.
    pub fn div(&self, divisor: &Self) -> Result<Self, SeriesError> {
        let b0 = &divisor.rows[0];
        if b0.is_zero() || b0.degree() != Some(0) {
            return Err(SeriesError::NonUnitDivisor);
        }
        let c = b0.coefficient(0);
        let order = self.order.min(divisor.order);
        let mut q: Vec<XPoly<C>> = Vec::with_capacity(order + 1);
        for i in 0..=order {
            let mut acc = self.rows[i].clone();
            for j in 1..=i {
                if !divisor.rows[j].is_zero() && !q[i - j].is_zero() {
                    acc = acc.sub(&divisor.rows[j].mul(&q[i - j]));
                }
            }
            q.push(acc.div_constant(&c));
        }
        Ok(Self { order, rows: q })
    }

    /// Newton square root: with `s` correct mod `t^p`, one step of
    /// `s ← (s + a/s) / 2` doubles the correct prefix. Requires constant
    /// term exactly 1 so the iteration starts at 1 and `1/2` exists for the
    /// coefficient type.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let row0 = &self.rows[0];
        if row0.degree() != Some(0) || !row0.coefficient(0).is_one() {
            return Err(SeriesError::SqrtBase);
        }
        let half = C::one() / (C::one() + C::one());
        let target = self.order + 1;
        let mut s = Self::constant(C::one(), 0);
        let mut correct = 1usize;
        while correct < target {
            correct = (2 * correct).min(target);
            let prefix = self.truncated(correct - 1);
            let s_ext = Self::from_rows(s.rows, correct - 1);
            let quotient = prefix.div(&s_ext)?;
            s = s_ext.add(&quotient).scale(&half);
        }
        Ok(s)
    }

    /// Exact division by `t^shift`; the low-order rows must vanish. The
    /// result is only known to order `order − shift`.
    pub fn shift_down(&self, shift: usize) -> Result<Self, SeriesError> {
        if shift > self.order || self.rows[..shift].iter().any(|r| !r.is_zero()) {
            return Err(SeriesError::ShiftUnderflow { shift });
        }
        Ok(Self {
            order: self.order - shift,
            rows: self.rows[shift..].to_vec(),
        })
    }

    /// Row sums: the univariate series at `x = 1`.
    pub fn eval_x_one(&self) -> Vec<C> {
        self.rows.iter().map(|r| r.eval_one()).collect()
    }
}

#[cfg(test)]
fn rat(i: i64) -> Rational {
    Rational::from_integer(i.into())
}

#[cfg(test)]
fn xp(coeffs: &[i64]) -> XPoly<Rational> {
    XPoly::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
}

/// Integer rows for the enumerator kernel below.
type ZPoly = XPoly<Int>;

fn zp(coeffs: &[i64]) -> ZPoly {
    XPoly::from_coeffs(coeffs.iter().map(|&c| Int::from(c)).collect())
}

/// `C_0 ..= C_{count−1}` by the exact ratio `C_{m+1} = C_m · 2(2m+1)/(m+2)`.
fn catalans(count: usize) -> Vec<Int> {
    let mut cs = Vec::with_capacity(count);
    let mut c = Int::one();
    for m in 0..count {
        cs.push(c.clone());
        let (next, rem) = (&c * Int::from(2 * (2 * m as i64 + 1))).div_rem(&Int::from(m as i64 + 2));
        debug_assert!(rem.is_zero());
        c = next;
    }
    cs
}

/// Rows of `√(1 − 4 t^spread) = 1 − 2 Σ_{m≥1} C_{m−1} t^{m·spread}`, the
/// closed form of what the generic engine reaches by Newton iteration.
fn sqrt_rows(order: usize, spread: usize) -> Vec<ZPoly> {
    let mut rows = vec![ZPoly::zero(); order + 1];
    rows[0] = zp(&[1]);
    let cats = catalans(order / spread);
    for m in 1..=order / spread {
        rows[m * spread] = XPoly::constant(Int::from(-2) * &cats[m - 1]);
    }
    rows
}

/// Long division over integer rows: the same recurrence as
/// [`TruncatedBivariateSeries::div`], but accumulating each quotient row in
/// place and dividing by the constant term exactly. Requires what the named
/// enumerators guarantee — `deg divisor_j ≤ j`, so `deg quotient_i ≤ i`,
/// and a true quotient with integer coefficients so every division by the
/// leading constant is exact.
fn div_integer(dividend: &[ZPoly], divisor: &[ZPoly], order: usize) -> Vec<ZPoly> {
    let d0 = divisor[0].coefficient(0);
    debug_assert_eq!(divisor[0].degree(), Some(0));
    let mut q: Vec<Vec<Int>> = Vec::with_capacity(order + 1);
    for i in 0..=order {
        let mut acc = vec![Int::zero(); i + 1];
        if let Some(row) = dividend.get(i) {
            for (a, c) in row.coefficients().iter().enumerate() {
                acc[a] = c.clone();
            }
        }
        for j in 1..=i {
            let Some(dj) = divisor.get(j) else { break };
            if dj.is_zero() {
                continue;
            }
            debug_assert!(dj.degree().unwrap_or(0) <= j);
            for (a, ca) in dj.coefficients().iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (b, cb) in q[i - j].iter().enumerate() {
                    if !cb.is_zero() {
                        acc[a + b] -= ca * cb;
                    }
                }
            }
        }
        if !d0.is_one() {
            for c in acc.iter_mut() {
                let (quot, rem) = c.div_rem(&d0);
                debug_assert!(rem.is_zero(), "inexact division in enumerator kernel");
                *c = quot;
            }
        }
        q.push(acc);
    }
    q.into_iter().map(XPoly::from_coeffs).collect()
}

/// Lifts integer rows into the rational series type the callers work with.
fn to_rational_series(rows: Vec<ZPoly>, order: usize) -> TruncatedBivariateSeries<Rational> {
    let rows = rows
        .into_iter()
        .map(|r| {
            XPoly::from_coeffs(
                r.coefficients()
                    .iter()
                    .map(|c| Rational::from_integer(c.clone()))
                    .collect(),
            )
        })
        .collect();
    TruncatedBivariateSeries::from_rows(rows, order)
}

/// Joint enumerator of involutions avoiding `231` by length (`t`) and fixed
/// points (`x`):  (1 − t²) / (1 − x t − 2 t²).
///
/// Row `n` lists, per fixed-point count, how many such involutions of `[n]`
/// exist; the row total is `2^(n−1)` for `n ≥ 1`.
pub fn gf_iv231(order: usize) -> TruncatedBivariateSeries<Rational> {
    let num = [zp(&[1]), ZPoly::zero(), zp(&[-1])];
    let den = [zp(&[1]), zp(&[0, -1]), zp(&[-2])];
    to_rational_series(div_integer(&num, &den, order), order)
}

/// Joint enumerator of involutions avoiding `321`:
/// 2 / (1 − 2 x t + √(1 − 4 t²)).  Row totals are the central binomial
/// coefficients C(n, ⌊n/2⌋).
pub fn gf_iv321(order: usize) -> TruncatedBivariateSeries<Rational> {
    // 1 − 2xt + √(1 − 4t²): the square root fills only even rows, so the
    // two low rows can be overwritten outright.
    let mut den = sqrt_rows(order, 2);
    den[0] = zp(&[2]);
    if order >= 1 {
        den[1] = zp(&[0, -2]);
    }
    to_rational_series(div_integer(&[zp(&[2])], &den, order), order)
}

/// Joint enumerator of involutions avoiding `123`:
/// 1 + (x t + (1 + x²) t²) · (1 − √(1 − 4 t²)) / (2 t² √(1 − 4 t²)).
/// Row totals are again C(n, ⌊n/2⌋); fixed points stay at most 2 because an
/// increasing subsequence of length 3 is forbidden.
pub fn gf_iv123(order: usize) -> TruncatedBivariateSeries<Rational> {
    // The inner factor (1 − √(1 − 4t²)) / (2t²√(1 − 4t²)) expands to
    // Σ_m C(2m+1, m) t^{2m}, so the whole series is the direct sum
    // 1 + Σ_m C(2m+1, m) (x t^{2m+1} + (1 + x²) t^{2m+2}).
    let mut rows = vec![ZPoly::zero(); order + 1];
    rows[0] = zp(&[1]);
    // b = C(2m+1, m), advanced by the exact ratio b ← b · 2(2m+3)/(m+2).
    let mut b = Int::one();
    for m in 0.. {
        let odd = 2 * m + 1;
        if odd > order {
            break;
        }
        rows[odd] = XPoly::from_coeffs(vec![Int::zero(), b.clone()]);
        if odd + 1 <= order {
            rows[odd + 1] = XPoly::from_coeffs(vec![b.clone(), Int::zero(), b.clone()]);
        }
        let (next, rem) =
            (&b * Int::from(2 * (2 * m as i64 + 3))).div_rem(&Int::from(m as i64 + 2));
        debug_assert!(rem.is_zero());
        b = next;
    }
    to_rational_series(rows, order)
}

/// Joint enumerator of ALL permutations avoiding `321` by length and fixed
/// points: 2 / (1 + 2 t (1 − x) + √(1 − 4 t)).  Row totals are the Catalan
/// numbers.
pub fn gf_av321(order: usize) -> TruncatedBivariateSeries<Rational> {
    // 1 + 2t(1 − x) + √(1 − 4t): the square root's −2C_0 t cancels the 2t,
    // leaving row 1 as −2x alone.
    let mut den = sqrt_rows(order, 1);
    den[0] = zp(&[2]);
    if order >= 1 {
        den[1] = den[1].add(&zp(&[2, -2]));
    }
    to_rational_series(div_integer(&[zp(&[2])], &den, order), order)
}

/// The fixed-point law encoded in row `n` of a joint enumerator: mass of
/// `j` proportional to the coefficient of `x^j t^n`.
pub fn fp_distribution_from_gf(
    gf: &TruncatedBivariateSeries<Rational>,
    n: usize,
) -> Result<FiniteLaw, SeriesError> {
    let row = gf.row(n)?;
    let total = row.eval_one();
    if total.is_zero() {
        return Err(SeriesError::EmptyRow { n });
    }
    let atoms = row
        .coefficients()
        .iter()
        .enumerate()
        .map(|(j, c)| (j as i64, c.clone() / total.clone()))
        .collect();
    Ok(FiniteLaw::from_integer_atoms(atoms)?)
}

/// CSV dump of the nonzero coefficients, `n,j,coefficient`, exact integers.
pub fn gf_to_csv(gf: &TruncatedBivariateSeries<Rational>) -> String {
    let mut out = String::from("n,j,coefficient\n");
    for n in 0..=gf.order() {
        let row = gf.row(n).expect("n <= order");
        for (j, c) in row.coefficients().iter().enumerate() {
            if !c.is_zero() {
                debug_assert!(c.is_integer(), "enumerators have integer coefficients");
                out.push_str(&format!("{n},{j},{}\n", c.to_integer()));
            }
        }
    }
    out
}

/// Per-`n` growth coefficients of the fixed-point count of a uniform
/// involution avoiding `231`: mean ≈ n · mean_coefficient, variance ≈
/// n · variance_coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltConstants {
    pub mean_coefficient: f64,
    pub variance_coefficient: f64,
}

// Radius of convergence in t of Σ_n c_n(x) tⁿ for the 231 enumerator: the
// smaller positive root of the denominator, 2ρ² + xρ − 1 = 0.
fn iv231_radius(x: f64) -> f64 {
    (-x + (x * x + 8.0).sqrt()) / 4.0
}

/// The growth coefficients (1/3 and 8/27) in closed form, by
/// differentiating the reciprocal radius f(x) = 1/(2ρ(x)) of the `231`
/// enumerator at x = 1:
///   mean_coefficient = f′(1)/f(1),
///   variance_coefficient = f″/f + f′/f − (f′/f)² at 1.
pub fn clt_constants_iv231() -> CltConstants {
    let x = 1.0f64;
    let r = (x * x + 8.0).sqrt();
    let rho = iv231_radius(x);
    let rho1 = (-1.0 + x / r) / 4.0;
    let rho2 = 2.0 / (r * r * r);
    let f = 1.0 / (2.0 * rho);
    let f1 = -rho1 / (2.0 * rho * rho);
    let f2 = rho1 * rho1 / (rho * rho * rho) - rho2 / (2.0 * rho * rho);
    let m = f1 / f;
    CltConstants {
        mean_coefficient: m,
        variance_coefficient: f2 / f + m - m * m,
    }
}

/// The same two coefficients by central finite differences of
/// g(x) = ln f(x), treating f as a black box: mean = g′(1), variance =
/// g″(1) + g′(1). A step near 1e-5 balances truncation against roundoff;
/// expect agreement with the closed form to ~1e-4, not machine precision.
pub fn clt_constants_iv231_finite_difference(h: f64) -> CltConstants {
    let g = |x: f64| (1.0 / (2.0 * iv231_radius(x))).ln();
    let m = (g(1.0 + h) - g(1.0 - h)) / (2.0 * h);
    let second = (g(1.0 + h) - 2.0 * g(1.0) + g(1.0 - h)) / (h * h);
    CltConstants {
        mean_coefficient: m,
        variance_coefficient: second + m,
    }
}

/// One row of the singularity comparison for `321`-avoiding permutations.
#[derive(Debug, Clone)]
pub struct SingularityRow {
    pub n: usize,
    /// Exact count |Av_n(321)| (the n-th Catalan number), read off the
    /// enumerator at x = 1.
    pub exact: Count,
    /// First-order singularity estimate 4ⁿ / √(π n³).
    pub estimate: f64,
    /// exact / estimate, computed as (exact / 4ⁿ) · √(π n³) so the huge
    /// numerator and denominator cancel before any float conversion.
    pub ratio: f64,
}

/// Compares exact counts of `321`-avoiding permutations against the
/// square-root singularity estimate for n = 1..=n_max. The ratio climbs
/// toward 1 like 1 − 9/(8n).
pub fn singularity_check_av321(n_max: usize) -> Vec<SingularityRow> {
    // At x = 1 the enumerator collapses to 2 / (1 + √(1 − 4t)), which is
    // univariate; rows are plain constants.
    let mut den = sqrt_rows(n_max, 1);
    den[0] = zp(&[2]);
    let f = div_integer(&[zp(&[2])], &den, n_max);
    (1..=n_max)
        .map(|n| {
            let c = f[n].coefficient(0);
            debug_assert!(c.is_positive());
            let exact = c.to_biguint().expect("positive count");
            let scale = (std::f64::consts::PI * (n as f64).powi(3)).sqrt();
            let estimate = ((n as f64) * 4.0f64.ln() - scale.ln()).exp();
            let pow4 = Int::from(4).pow(n as u32);
            let ratio = Rational::new(c.clone(), pow4).to_f64().unwrap() * scale;
            SingularityRow {
                n,
                exact,
                estimate,
                ratio,
            }
        })
        .collect()
}
