//! Young shapes, standard Young tableaux, hook-length counting, and the
//! shape distributions induced by uniform involutions with a bounded longest
//! monotone subsequence.
//!
//! A uniform involution of `[n]` whose decreasing subsequences are capped at
//! `k` corresponds (via the insertion tableau) to a random standard Young
//! tableau with at most `k` rows, where a shape λ carries probability
//! proportional to the number `f_λ` of tableaux of that shape. This module
//! computes `f_λ` exactly (arbitrary precision) or in log space, builds the
//! induced shape distribution under either weight regime, samples from it,
//! and extracts the statistics the limit theorems are about: odd columns,
//! odd rows, row gaps, and the scaled alternating row sum.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::dist::{DistError, Distribution, FiniteLaw};
use crate::special::ln_gamma;
use crate::stochastic::RandomStream;
use crate::{Count, Rational};

/// Hard cap for a single exact hook-length count.
pub const HOOK_COUNT_CAP: usize = 10_000;
/// Exact big-integer shape weights are available up to this `n` for general
/// `k`; beyond it the distribution switches to log-space weights.
pub const EXACT_WEIGHT_CAP: usize = 300;
/// The two-row case has a cheap incremental recurrence, so exact weights
/// reach much further.
pub const EXACT_WEIGHT_CAP_TWO_ROWS: usize = 50_000;
/// Maximum number of shapes a distribution may enumerate.
pub const SHAPE_BUDGET: u128 = 4_000_000;
/// Largest `k` accepted by [`shape_distribution`].
pub const MAX_ROW_BOUND: usize = 32;
/// Caps for tableau sampling and exhaustive tableau enumeration.
pub const SYT_SAMPLE_CAP: usize = 200;
pub const SYT_ENUM_CAP: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum TableauxError {
    #[error("invalid shape {0:?}: rows must be positive and weakly decreasing")]
    InvalidShape(Vec<usize>),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("{what} is capped at {cap} (requested {got})")]
    SizeCap {
        what: &'static str,
        cap: usize,
        got: usize,
    },
    #[error("shape has {rows} rows, more than the bound k = {k}")]
    TooManyRows { rows: usize, k: usize },
    #[error("shape of size {size} used where n = {n} was required")]
    SizeMismatch { size: usize, n: usize },
    #[error("row bound k = {k} out of range [{min}, {max}]")]
    RowBoundOutOfRange { k: usize, min: usize, max: usize },
    #[error("n = {n}, k = {k} needs {shapes} shapes, over the {budget} enumeration budget")]
    Budget {
        n: usize,
        k: usize,
        shapes: u128,
        budget: u128,
    },
    #[error("exact weights unavailable at n = {n}, k = {k}; see the EXACT_WEIGHT caps")]
    ExactUnavailable { n: usize, k: usize },
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// An integer partition drawn as a Young diagram: weakly decreasing positive
/// row lengths. The empty shape (n = 0) is valid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungShape {
    rows: Vec<usize>,
}

impl YoungShape {
    pub fn new(rows: Vec<usize>) -> Result<Self, TableauxError> {
        let decreasing = rows.windows(2).all(|w| w[0] >= w[1]);
        if !decreasing || rows.iter().any(|&r| r == 0) {
            return Err(TableauxError::InvalidShape(rows));
        }
        Ok(Self { rows })
    }

    pub fn empty() -> Self {
        Self { rows: vec![] }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of cells.
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// The transposed diagram: column lengths become row lengths.
    pub fn conjugate(&self) -> YoungShape {
        let cols = self.rows.first().copied().unwrap_or(0);
        let rows = (0..cols)
            .map(|j| self.rows.iter().take_while(|&&r| r > j).count())
            .collect();
        YoungShape { rows }
    }

    /// Number of columns of odd length. Equals the alternating row sum
    /// λ₁ − λ₂ + λ₃ − …, which is how the fixed-point statistic reads off a
    /// shape.
    pub fn odd_columns(&self) -> usize {
        self.conjugate().odd_rows()
    }

    /// Number of rows of odd length.
    pub fn odd_rows(&self) -> usize {
        self.rows.iter().filter(|&&r| r % 2 == 1).count()
    }

    /// Hook length of every cell, row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let col_lens = self.conjugate();
        self.rows
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                (0..len)
                    .map(|j| len - j + col_lens.rows[j] - i - 1)
                    .collect()
            })
            .collect()
    }

    /// Row indices whose last cell is removable (row strictly longer than
    /// the next).
    pub fn removable_corners(&self) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| i + 1 == self.rows.len() || self.rows[i] > self.rows[i + 1])
            .collect()
    }

    /// The shape with the corner cell of row `i` removed.
    pub fn remove_corner(&self, i: usize) -> YoungShape {
        debug_assert!(self.removable_corners().contains(&i));
        let mut rows = self.rows.clone();
        rows[i] -= 1;
        if rows[i] == 0 {
            rows.remove(i);
        }
        YoungShape { rows }
    }
}

impl fmt::Display for YoungShape {
    /// Dash-separated row lengths: `3-2-3` is not a shape, `3-2-1` is.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in &self.rows {
            if !first {
                write!(f, "-")?;
            }
            write!(f, "{r}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for YoungShape {
    type Err = TableauxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(YoungShape::empty());
        }
        let rows = s
            .split('-')
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| TableauxError::InvalidTableau(format!("bad row length {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        YoungShape::new(rows)
    }
}

/// A standard Young tableau: rows and columns strictly increasing, entries
/// exactly `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardYoungTableau {
    rows: Vec<Vec<usize>>,
}

impl StandardYoungTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, TableauxError> {
        let t = Self { rows };
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<usize>>) -> Self {
        let t = Self { rows };
        debug_assert!(t.validate().is_ok(), "invalid tableau {t:?}");
        t
    }

    fn validate(&self) -> Result<(), TableauxError> {
        let shape_rows: Vec<usize> = self.rows.iter().map(|r| r.len()).collect();
        YoungShape::new(shape_rows)
            .map_err(|_| TableauxError::InvalidTableau("row lengths are not a shape".into()))?;
        let n = self.size();
        let mut seen = vec![false; n];
        for row in &self.rows {
            for &v in row {
                if v == 0 || v > n || seen[v - 1] {
                    return Err(TableauxError::InvalidTableau(format!(
                        "entries are not a permutation of 1..={n}"
                    )));
                }
                seen[v - 1] = true;
            }
        }
        for row in &self.rows {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(TableauxError::InvalidTableau(
                    "a row is not strictly increasing".into(),
                ));
            }
        }
        for (i, row) in self.rows.iter().enumerate().skip(1) {
            for (j, &v) in row.iter().enumerate() {
                if self.rows[i - 1][j] >= v {
                    return Err(TableauxError::InvalidTableau(
                        "a column is not strictly increasing".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn shape(&self) -> YoungShape {
        YoungShape {
            rows: self.rows.iter().map(|r| r.len()).collect(),
        }
    }

    /// Columns of odd length; under the insertion correspondence this is the
    /// number of fixed points of the originating involution.
    pub fn odd_columns(&self) -> usize {
        self.shape().odd_columns()
    }
}

impl fmt::Display for StandardYoungTableau {
    /// One row per line, entries space-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let mut first = true;
            for v in row {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Number of standard Young tableaux of `shape`, by the hook length formula
/// `n! / Π hooks`, exactly.
pub fn hook_count(shape: &YoungShape) -> Result<Count, TableauxError> {
    let n = shape.size();
    if n > HOOK_COUNT_CAP {
        return Err(TableauxError::SizeCap {
            what: "hook_count",
            cap: HOOK_COUNT_CAP,
            got: n,
        });
    }
    let mut numer = Count::one();
    for i in 2..=n.max(1) {
        numer *= Count::from(i);
    }
    let mut denom = Count::one();
    for row in shape.hook_lengths() {
        for h in row {
            denom *= Count::from(h);
        }
    }
    let (q, r) = numer.div_rem(&denom);
    debug_assert!(r.is_zero(), "hook product must divide n!");
    Ok(q)
}

/// ln of the hook-length count, as a compensated sum of cell logarithms;
/// works far beyond the exact cap.
pub fn log_hook_count(shape: &YoungShape) -> f64 {
    let n = shape.size();
    // Kahan summation: the two log-sums are each ~n·ln n and nearly cancel,
    // so the naive error would be visible against the 1e-9 agreement the
    // tests demand.
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut add = |x: f64| {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    for i in 2..=n.max(1) {
        add((i as f64).ln());
    }
    for row in shape.hook_lengths() {
        for h in row {
            add(-((h as f64).ln()));
        }
    }
    sum
}

// ln f_λ by the padded-row determinant form: with ℓ_i = λ_i + k − i over
// exactly k rows (zeros appended),
//   ln f = ln n! + Σ_{i<j} ln(ℓ_i − ℓ_j) − Σ_i ln ℓ_i! .
// O(k²) log-gamma evaluations per shape instead of O(n) logs, which is what
// makes log-space distributions over hundreds of thousands of shapes cheap.
fn log_hook_count_padded(shape: &YoungShape, k: usize) -> f64 {
    debug_assert!(shape.num_rows() <= k);
    let n = shape.size();
    let ell: Vec<f64> = (0..k)
        .map(|i| (shape.rows.get(i).copied().unwrap_or(0) + k - i - 1) as f64)
        .collect();
    let mut s = ln_gamma(n as f64 + 1.0);
    for i in 0..k {
        for j in (i + 1)..k {
            s += (ell[i] - ell[j]).ln();
        }
        s -= ln_gamma(ell[i] + 1.0);
    }
    s
}

/// All shapes of `n` with at most `k` rows, first row descending; the
/// enumeration order every distribution in this module uses.
pub fn shapes_at_most_rows(n: usize, k: usize) -> Vec<YoungShape> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(n: usize, k: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<YoungShape>) {
        if n == 0 {
            out.push(YoungShape {
                rows: prefix.clone(),
            });
            return;
        }
        if k == 0 || max_part * k < n {
            return;
        }
        for part in (1..=n.min(max_part)).rev() {
            if part * k < n {
                break;
            }
            prefix.push(part);
            rec(n - part, k - 1, part, prefix, out);
            prefix.pop();
        }
    }
    rec(n, k, n, &mut prefix, &mut out);
    out
}

/// Number of partitions of `n` into at most `k` parts, saturating at
/// `u128::MAX`; used to enforce [`SHAPE_BUDGET`] before enumerating.
pub fn count_shapes(n: usize, k: usize) -> u128 {
    // Partitions into at most k parts = partitions into parts of size <= k.
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=k.min(n.max(1)) {
        for m in part..=n {
            ways[m] = ways[m].saturating_add(ways[m - part]);
        }
    }
    ways[n]
}

// Exact weights (f_λ) for all shapes of n with at most k rows, in
// enumeration order.
fn exact_shape_weights(n: usize, k: usize) -> (Vec<YoungShape>, Vec<Count>) {
    if k == 2 {
        return two_row_weights(n);
    }
    let shapes = shapes_at_most_rows(n, k);
    let mut fact = Count::one();
    for i in 2..=n.max(1) {
        fact *= Count::from(i);
    }
    let weights = shapes
        .iter()
        .map(|s| {
            let mut denom = Count::one();
            for row in s.hook_lengths() {
                for h in row {
                    denom *= Count::from(h);
                }
            }
            let (q, r) = fact.div_rem(&denom);
            debug_assert!(r.is_zero());
            q
        })
        .collect();
    (shapes, weights)
}

// Two-row shapes (n-b, b) for b = 0..=n/2 with f computed by the exact
// incremental recurrence
//   f(b+1) = f(b) · (n-2b-1)(n-b+1) / ((n-2b+1)(b+1)),
// a rearrangement of the hook-length formula that avoids factorials; every
// division is exact.
fn two_row_weights(n: usize) -> (Vec<YoungShape>, Vec<Count>) {
    if n == 0 {
        return (vec![YoungShape::empty()], vec![Count::one()]);
    }
    let mut shapes = Vec::with_capacity(n / 2 + 1);
    let mut weights = Vec::with_capacity(n / 2 + 1);
    let mut f = Count::one();
    for b in 0..=n / 2 {
        let rows = if b == 0 { vec![n] } else { vec![n - b, b] };
        shapes.push(YoungShape { rows });
        weights.push(f.clone());
        if 2 * (b + 1) <= n {
            f = f * Count::from(n - 2 * b - 1) * Count::from(n - b + 1);
            let (q, r) = f.div_rem(&Count::from((n - 2 * b + 1) * (b + 1)));
            debug_assert!(r.is_zero());
            f = q;
        }
    }
    (shapes, weights)
}

/// Exact big-integer weights of a shape distribution.
#[derive(Debug, Clone)]
pub struct ExactWeights {
    pub weights: Vec<Count>,
    pub total: Count,
}

/// The law of the insertion-tableau shape of a uniform involution with
/// longest decreasing subsequence at most `k`: shape λ ⊢ n carries weight
/// `f_λ`.
///
/// Weights are kept as exact big integers when affordable (see the
/// `EXACT_WEIGHT` caps) and always as log-space floats; the exact side, when
/// present, is the source of truth.
#[derive(Debug, Clone)]
pub struct ShapeDistribution {
    n: usize,
    k: usize,
    shapes: Vec<YoungShape>,
    log_weights: Vec<f64>,
    log_total: f64,
    exact: Option<ExactWeights>,
}

// ln of a big integer, exact for small values and via the top 64 bits
// beyond; error is ~1e-15 relative either way.
fn ln_count(x: &Count) -> f64 {
    let bits = x.bits();
    if bits <= 900 {
        x.to_f64().expect("fits f64").ln()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64 bits fit");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Builds the shape distribution for `(n, k)`, choosing the weight regime
/// automatically. Enumerations beyond [`SHAPE_BUDGET`] shapes are refused.
pub fn shape_distribution(n: usize, k: usize) -> Result<ShapeDistribution, TableauxError> {
    if k < 1 || k > MAX_ROW_BOUND {
        return Err(TableauxError::RowBoundOutOfRange {
            k,
            min: 1,
            max: MAX_ROW_BOUND,
        });
    }
    let count = count_shapes(n, k);
    if count > SHAPE_BUDGET {
        return Err(TableauxError::Budget {
            n,
            k,
            shapes: count,
            budget: SHAPE_BUDGET,
        });
    }
    let exact_ok = if k == 2 {
        n <= EXACT_WEIGHT_CAP_TWO_ROWS
    } else {
        n <= EXACT_WEIGHT_CAP
    };
    if exact_ok {
        let (shapes, weights) = exact_shape_weights(n, k);
        let total: Count = weights.iter().sum();
        let log_weights: Vec<f64> = weights.iter().map(ln_count).collect();
        let log_total = ln_count(&total);
        Ok(ShapeDistribution {
            n,
            k,
            shapes,
            log_weights,
            log_total,
            exact: Some(ExactWeights { weights, total }),
        })
    } else {
        let shapes = shapes_at_most_rows(n, k);
        let log_weights: Vec<f64> = shapes
            .iter()
            .map(|s| log_hook_count_padded(s, k))
            .collect();
        let log_total = log_sum_exp(&log_weights);
        Ok(ShapeDistribution {
            n,
            k,
            shapes,
            log_weights,
            log_total,
            exact: None,
        })
    }
}

impl ShapeDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn shapes(&self) -> &[YoungShape] {
        &self.shapes
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_weights(&self) -> Option<&ExactWeights> {
        self.exact.as_ref()
    }

    /// Unnormalized ln f_λ per shape, in enumeration order.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// ln Σ f_λ. At k = 2 the total is the central binomial coefficient;
    /// in general it is the cardinality of the avoidance class.
    pub fn log_total(&self) -> f64 {
        self.log_total
    }

    pub fn probability(&self, i: usize) -> f64 {
        match &self.exact {
            Some(e) => Rational::new(e.weights[i].clone().into(), e.total.clone().into())
                .to_f64()
                .unwrap(),
            None => (self.log_weights[i] - self.log_total).exp(),
        }
    }

    pub fn exact_probability(&self, i: usize) -> Option<Rational> {
        self.exact
            .as_ref()
            .map(|e| Rational::new(e.weights[i].clone().into(), e.total.clone().into()))
    }

    /// Probability mass of the shapes satisfying a predicate; exact-mode
    /// sums rationals, log-mode sums in log space.
    pub fn mass_where(&self, pred: impl Fn(&YoungShape) -> bool) -> f64 {
        match &self.exact {
            Some(e) => {
                let mut acc = Count::zero();
                for (s, w) in self.shapes.iter().zip(&e.weights) {
                    if pred(s) {
                        acc += w;
                    }
                }
                Rational::new(acc.into(), e.total.clone().into())
                    .to_f64()
                    .unwrap()
            }
            None => {
                let subset: Vec<f64> = self
                    .shapes
                    .iter()
                    .zip(&self.log_weights)
                    .filter(|(s, _)| pred(s))
                    .map(|(_, &lw)| lw)
                    .collect();
                if subset.is_empty() {
                    0.0
                } else {
                    (log_sum_exp(&subset) - self.log_total).exp()
                }
            }
        }
    }

    /// Exact law of an integer statistic of the shape. Requires exact
    /// weights.
    pub fn statistic_law(
        &self,
        stat: impl Fn(&YoungShape) -> usize,
    ) -> Result<FiniteLaw, TableauxError> {
        let exact = self
            .exact
            .as_ref()
            .ok_or(TableauxError::ExactUnavailable { n: self.n, k: self.k })?;
        let mut agg: BTreeMap<usize, Count> = BTreeMap::new();
        for (s, w) in self.shapes.iter().zip(&exact.weights) {
            *agg.entry(stat(s)).or_insert_with(Count::zero) += w;
        }
        let atoms = agg
            .into_iter()
            .map(|(v, w)| {
                (
                    v as i64,
                    Rational::new(w.into(), exact.total.clone().into()),
                )
            })
            .collect();
        Ok(FiniteLaw::from_integer_atoms(atoms)?)
    }

    /// One draw by the Gumbel-max trick over the log weights: no
    /// normalization pass and no overflow regardless of weight magnitudes.
    /// O(#shapes) per draw; use [`ShapeDistribution::sampler`] for bulk
    /// sampling.
    pub fn sample_index(&self, rng: &mut RandomStream) -> usize {
        let mut best = 0usize;
        let mut best_score = f64::NEG_INFINITY;
        for (i, &lw) in self.log_weights.iter().enumerate() {
            let gumbel = -(-rng.uniform().ln()).ln();
            let score = lw + gumbel;
            if score > best_score {
                best_score = score;
                best = i;
            }
        }
        best
    }

    /// O(1)-per-draw sampler (Walker alias table over the normalized
    /// probabilities, built after a max-shifted softmax so the exponentials
    /// cannot overflow).
    pub fn sampler(&self) -> AliasSampler {
        let probs: Vec<f64> = self
            .log_weights
            .iter()
            .map(|&lw| (lw - self.log_total).exp())
            .collect();
        AliasSampler::new(&probs)
    }

    /// CSV rows `lambda,log_weight` where `lambda` is dash-separated and
    /// `log_weight` is the natural log of the shape's probability.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,log_weight\n");
        for (shape, &lw) in self.shapes.iter().zip(&self.log_weights) {
            s.push_str(&format!("{shape},{}\n", lw - self.log_total));
        }
        s
    }
}

/// One shape drawn from the distribution (Gumbel-max; see
/// [`ShapeDistribution::sample_index`]).
pub fn sample_shape(dist: &ShapeDistribution, rng: &mut RandomStream) -> YoungShape {
    dist.shapes[dist.sample_index(rng)].clone()
}

/// Walker alias table: O(n) construction, O(1) per draw, deterministic for
/// a given stream.
#[derive(Debug, Clone)]
pub struct AliasSampler {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasSampler {
    pub fn new(probs: &[f64]) -> Self {
        let n = probs.len();
        assert!(n > 0, "alias table over empty support");
        let total: f64 = probs.iter().sum();
        let scaled: Vec<f64> = probs.iter().map(|p| p * n as f64 / total).collect();
        let mut prob = vec![0.0; n];
        let mut alias = vec![0usize; n];
        let mut small: Vec<usize> = Vec::new();
        let mut large: Vec<usize> = Vec::new();
        let mut work = scaled;
        for (i, &w) in work.iter().enumerate() {
            if w < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            large.pop();
            prob[s] = work[s];
            alias[s] = l;
            work[l] = (work[l] + work[s]) - 1.0;
            if work[l] < 1.0 {
                small.push(l);
            } else {
                large.push(l);
            }
        }
        for &i in small.iter().chain(large.iter()) {
            prob[i] = 1.0;
            alias[i] = i;
        }
        Self { prob, alias }
    }

    pub fn sample(&self, rng: &mut RandomStream) -> usize {
        let i = rng.below(self.prob.len() as u64) as usize;
        if rng.uniform() < self.prob[i] {
            i
        } else {
            self.alias[i]
        }
    }
}

/// Direction of the monotone pattern whose avoidance defines the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    /// Longest decreasing subsequence at most `k` (tableau has ≤ k rows);
    /// the fixed-point statistic is the number of odd columns.
    Decreasing,
    /// Longest increasing subsequence at most `k` (tableau has ≤ k
    /// columns); the statistic becomes the number of odd rows of the
    /// conjugate shape.
    Increasing,
}

/// Exact law of the fixed-point count of a uniform involution of `[n]`
/// whose longest monotone subsequence (in the given direction) has length
/// at most `k`. Requires the exact weight regime.
pub fn fp_distribution_monotone(
    n: usize,
    k: usize,
    direction: Monotone,
) -> Result<Distribution, TableauxError> {
    let dist = shape_distribution(n, k)?;
    if !dist.is_exact() {
        return Err(TableauxError::ExactUnavailable { n, k });
    }
    let law = match direction {
        Monotone::Decreasing => dist.statistic_law(|s| s.odd_columns())?,
        Monotone::Increasing => dist.statistic_law(|s| s.odd_rows())?,
    };
    Ok(Distribution::ExactFinite(law))
}

/// The alternating row sum, centered and scaled:
/// Σ_{j=1}^{k} (−1)^{j+1} √(k/n) (λ_j − n/k), rows padded with zeros to
/// exactly `k`. For even `k` this is √(k/n) times the odd-column count; for
/// odd `k` the lattice is shifted by n/k.
pub fn scaled_alternating_sum(
    shape: &YoungShape,
    n: usize,
    k: usize,
) -> Result<f64, TableauxError> {
    if shape.num_rows() > k {
        return Err(TableauxError::TooManyRows {
            rows: shape.num_rows(),
            k,
        });
    }
    if shape.size() != n || n == 0 {
        return Err(TableauxError::SizeMismatch {
            size: shape.size(),
            n,
        });
    }
    let alt: f64 = shape
        .rows
        .iter()
        .enumerate()
        .map(|(j, &len)| if j % 2 == 0 { len as f64 } else { -(len as f64) })
        .sum();
    let centered = if k % 2 == 1 { alt - n as f64 / k as f64 } else { alt };
    Ok((k as f64 / n as f64).sqrt() * centered)
}

/// Minimum gap δ = min_{2 ≤ i ≤ k} (λ_{i−1} − λ_i) over the rows padded
/// with zeros to exactly `k`; needs `k ≥ 2`.
pub fn min_gap(shape: &YoungShape, k: usize) -> Result<usize, TableauxError> {
    if k < 2 {
        return Err(TableauxError::RowBoundOutOfRange { k, min: 2, max: MAX_ROW_BOUND });
    }
    if shape.num_rows() > k {
        return Err(TableauxError::TooManyRows {
            rows: shape.num_rows(),
            k,
        });
    }
    let row = |i: usize| shape.rows.get(i).copied().unwrap_or(0);
    Ok((1..k).map(|i| row(i - 1) - row(i)).min().expect("k >= 2"))
}

/// Uniform sampler for standard Young tableaux of a fixed shape.
///
/// Entries are placed largest first: the cell for `m` is a removable corner
/// `c` of the current shape μ, chosen with probability `f_{μ−c} / f_μ` by an
/// exact big-integer draw, so the tableau is uniform with no floating-point
/// bias. Hook counts are memoized across draws.
#[derive(Debug, Default)]
pub struct SytSampler {
    fcache: HashMap<Vec<usize>, Count>,
}

impl SytSampler {
    pub fn new() -> Self {
        Self::default()
    }

    fn f(&mut self, shape: &YoungShape) -> Count {
        if let Some(v) = self.fcache.get(&shape.rows) {
            return v.clone();
        }
        let v = hook_count(shape).expect("size below SYT_SAMPLE_CAP");
        self.fcache.insert(shape.rows.clone(), v.clone());
        v
    }

    pub fn sample(
        &mut self,
        shape: &YoungShape,
        rng: &mut RandomStream,
    ) -> Result<StandardYoungTableau, TableauxError> {
        let n = shape.size();
        if n > SYT_SAMPLE_CAP {
            return Err(TableauxError::SizeCap {
                what: "sample_syt",
                cap: SYT_SAMPLE_CAP,
                got: n,
            });
        }
        let mut entries: Vec<Vec<usize>> = shape.rows.iter().map(|&len| vec![0; len]).collect();
        let mut cur = shape.clone();
        for m in (1..=n).rev() {
            let corners = cur.removable_corners();
            let row = if corners.len() == 1 {
                corners[0]
            } else {
                let total = self.f(&cur);
                let mut r = rng.below_biguint(&total);
                let mut chosen = corners[0];
                for &c in &corners {
                    let w = self.f(&cur.remove_corner(c));
                    if r < w {
                        chosen = c;
                        break;
                    }
                    r -= w;
                }
                chosen
            };
            entries[row][cur.rows()[row] - 1] = m;
            cur = cur.remove_corner(row);
        }
        Ok(StandardYoungTableau::from_rows_unchecked(entries))
    }
}

/// One-shot uniform tableau draw; for bulk draws reuse a [`SytSampler`] to
/// keep its hook-count cache warm.
pub fn sample_syt(
    shape: &YoungShape,
    rng: &mut RandomStream,
) -> Result<StandardYoungTableau, TableauxError> {
    SytSampler::new().sample(shape, rng)
}

/// Every standard Young tableau of `shape`, by recursive corner removal;
/// independent of the hook-length formula, so it doubles as its test oracle.
/// Capped at [`SYT_ENUM_CAP`] cells.
pub fn enumerate_syt(shape: &YoungShape) -> Result<Vec<StandardYoungTableau>, TableauxError> {
    let n = shape.size();
    if n > SYT_ENUM_CAP {
        return Err(TableauxError::SizeCap {
            what: "enumerate_syt",
            cap: SYT_ENUM_CAP,
            got: n,
        });
    }
    fn rec(shape: &YoungShape, m: usize, entries: &mut Vec<Vec<usize>>, out: &mut Vec<StandardYoungTableau>) {
        if m == 0 {
            out.push(StandardYoungTableau::from_rows_unchecked(entries.clone()));
            return;
        }
        for c in shape.removable_corners() {
            let col = shape.rows()[c] - 1;
            entries[c][col] = m;
            let smaller = shape.remove_corner(c);
            rec(&smaller, m - 1, entries, out);
            entries[c][col] = 0;
        }
    }
    let mut entries: Vec<Vec<usize>> = shape.rows.iter().map(|&len| vec![0; len]).collect();
    let mut out = Vec::new();
    rec(shape, n, &mut entries, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shape(rows: &[usize]) -> YoungShape {
        YoungShape::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn shape_validation_and_conjugate() {
        assert!(YoungShape::new(vec![2, 3]).is_err());
        assert!(YoungShape::new(vec![2, 0]).is_err());
        let s = shape(&[3, 3, 2]);
        assert_eq!(s.conjugate(), shape(&[3, 3, 2]).conjugate());
        assert_eq!(s.conjugate().rows(), &[3, 3, 2]);
        assert_eq!(shape(&[4, 2, 1]).conjugate().rows(), &[3, 2, 1, 1]);
        assert_eq!(shape(&[4, 2, 1]).conjugate().conjugate(), shape(&[4, 2, 1]));
    }

    #[test]
    fn odd_columns_equals_alternating_row_sum() {
        for s in shapes_at_most_rows(9, 9) {
            let alt: i64 = s
                .rows()
                .iter()
                .enumerate()
                .map(|(j, &len)| if j % 2 == 0 { len as i64 } else { -(len as i64) })
                .sum();
            assert_eq!(s.odd_columns() as i64, alt, "shape {s}");
        }
    }

    #[test]
    fn shape_string_round_trip() {
        let s = shape(&[3, 2, 1]);
        assert_eq!(s.to_string(), "3-2-1");
        assert_eq!("3-2-1".parse::<YoungShape>().unwrap(), s);
        assert_eq!("".parse::<YoungShape>().unwrap(), YoungShape::empty());
        assert!("3-4".parse::<YoungShape>().is_err());
    }

    #[test]
    fn hook_lengths_of_known_shape() {
        // Shape (3,2): hooks are [4,3,1] / [2,1].
        assert_eq!(
            shape(&[3, 2]).hook_lengths(),
            vec![vec![4, 3, 1], vec![2, 1]]
        );
    }

    #[test]
    fn hook_count_small_cases() {
        assert_eq!(hook_count(&YoungShape::empty()).unwrap(), Count::from(1u32));
        assert_eq!(hook_count(&shape(&[4])).unwrap(), Count::from(1u32));
        assert_eq!(hook_count(&shape(&[2, 1])).unwrap(), Count::from(2u32));
        assert_eq!(hook_count(&shape(&[3, 1])).unwrap(), Count::from(3u32));
        assert_eq!(hook_count(&shape(&[2, 2])).unwrap(), Count::from(2u32));
        assert_eq!(hook_count(&shape(&[2, 2, 1])).unwrap(), Count::from(5u32));
    }

    #[test]
    fn hook_count_matches_exhaustive_enumeration() {
        // The enumerator removes corners recursively and never touches hook
        // lengths, so it is an independent oracle.
        for n in 0..=7 {
            for s in shapes_at_most_rows(n, n.max(1)) {
                let listed = enumerate_syt(&s).unwrap();
                assert_eq!(
                    Count::from(listed.len()),
                    hook_count(&s).unwrap(),
                    "shape {s}"
                );
                for t in &listed {
                    assert_eq!(t.shape(), s);
                }
            }
        }
    }

    #[test]
    fn two_row_recurrence_agrees_with_hook_formula() {
        for n in 0..=60 {
            let (shapes, weights) = two_row_weights(n);
            for (s, w) in shapes.iter().zip(&weights) {
                assert_eq!(w, &hook_count(s).unwrap(), "n = {n}, shape {s}");
            }
        }
    }

    #[test]
    fn log_hook_count_tracks_exact_values() {
        let mut rng = RandomStream::new(31, 0);
        for &n in &[50usize, 100, 200] {
            for _ in 0..30 {
                // Random shape of size n with at most 8 rows.
                let mut rows = Vec::new();
                let mut rem = n;
                let mut max_part = n;
                while rem > 0 {
                    let lo = rem.div_ceil(8);
                    let part = lo + (rng.below((max_part.min(rem) - lo + 1) as u64) as usize);
                    rows.push(part);
                    max_part = part;
                    rem -= part;
                    if rows.len() == 7 {
                        // force completion within the row budget
                        if rem > 0 && rem <= max_part {
                            rows.push(rem);
                            rem = 0;
                        }
                    }
                }
                let s = YoungShape::new(rows).unwrap();
                let exact = ln_count(&hook_count(&s).unwrap());
                let viakahan = log_hook_count(&s);
                let viapad = log_hook_count_padded(&s, s.num_rows());
                assert_relative_eq!(viakahan, exact, max_relative = 1e-9, epsilon = 1e-9);
                assert_relative_eq!(viapad, exact, max_relative = 1e-9, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn shape_enumeration_counts_match_dp() {
        for n in 0..=20 {
            for k in 1..=6 {
                assert_eq!(
                    shapes_at_most_rows(n, k).len() as u128,
                    count_shapes(n, k),
                    "n={n}, k={k}"
                );
            }
        }
        // Partitions of 10: 42.
        assert_eq!(count_shapes(10, 10), 42);
    }

    #[test]
    fn shape_distribution_exact_probabilities_n4_k2() {
        let d = shape_distribution(4, 2).unwrap();
        assert!(d.is_exact());
        assert_eq!(d.len(), 3);
        let probs: Vec<Rational> = (0..3).map(|i| d.exact_probability(i).unwrap()).collect();
        let expect = |n: i64, den: i64| Rational::new(n.into(), den.into());
        // shapes (4), (3,1), (2,2) with weights 1, 3, 2 out of 6
        assert_eq!(probs, vec![expect(1, 6), expect(1, 2), expect(1, 3)]);
        assert_relative_eq!(d.probability(1), 0.5);
    }

    #[test]
    fn fp_distribution_decreasing_n4_k2() {
        let Distribution::ExactFinite(law) = fp_distribution_monotone(4, 2, Monotone::Decreasing).unwrap()
        else {
            unreachable!()
        };
        // odd columns: (4) -> 4, (3,1) -> 2, (2,2) -> 0
        assert_eq!(law.positions(), &[0.0, 2.0, 4.0]);
        let expect = |n: i64, den: i64| Rational::new(n.into(), den.into());
        assert_eq!(
            law.masses(),
            &[expect(1, 3), expect(1, 2), expect(1, 6)]
        );
    }

    #[test]
    fn fp_distribution_increasing_small_cases() {
        // n = 3, k = 2: all three involutions avoiding 123 have one fixed point.
        let Distribution::ExactFinite(law) = fp_distribution_monotone(3, 2, Monotone::Increasing).unwrap()
        else {
            unreachable!()
        };
        assert_eq!(law.positions(), &[1.0]);
        assert!(law.masses()[0].is_one());
    }

    #[test]
    fn mass_where_matches_statistic_law() {
        let d = shape_distribution(12, 3).unwrap();
        let law = d.statistic_law(|s| s.odd_columns()).unwrap();
        let direct = d.mass_where(|s| s.odd_columns() == 2);
        let idx = law.positions().iter().position(|&x| x == 2.0).unwrap();
        assert_relative_eq!(direct, law.masses()[idx].to_f64().unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn log_mode_activates_beyond_the_exact_cap() {
        let d = shape_distribution(400, 3).unwrap();
        assert!(!d.is_exact());
        // Probabilities still sum to one.
        let total: f64 = (0..d.len()).map(|i| d.probability(i)).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-9);
        assert!(fp_distribution_monotone(400, 3, Monotone::Decreasing).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        match shape_distribution(10_000, 4) {
            Err(TableauxError::Budget { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn gumbel_and_alias_sampling_are_deterministic_and_consistent() {
        let d = shape_distribution(10, 2).unwrap();
        let mut a = RandomStream::new(77, 0);
        let mut b = RandomStream::new(77, 0);
        let via_gumbel: Vec<usize> = (0..50).map(|_| d.sample_index(&mut a)).collect();
        let again: Vec<usize> = (0..50).map(|_| d.sample_index(&mut b)).collect();
        assert_eq!(via_gumbel, again);

        // Alias sampler frequencies track the exact probabilities.
        let sampler = d.sampler();
        let mut rng = RandomStream::new(77, 1);
        let draws = 60_000;
        let mut counts = vec![0u32; d.len()];
        for _ in 0..draws {
            counts[sampler.sample(&mut rng)] += 1;
        }
        for i in 0..d.len() {
            let freq = counts[i] as f64 / draws as f64;
            assert!(
                (freq - d.probability(i)).abs() < 0.01,
                "shape {} freq {freq} prob {}",
                d.shapes()[i],
                d.probability(i)
            );
        }
    }

    #[test]
    fn syt_sampler_is_uniform_on_a_small_shape() {
        // Shape (2,1) has two tableaux; both should appear ~half the time.
        let s = shape(&[2, 1]);
        let mut sampler = SytSampler::new();
        let mut rng = RandomStream::new(5, 0);
        let mut first = 0u32;
        let draws = 20_000;
        for _ in 0..draws {
            let t = sampler.sample(&s, &mut rng).unwrap();
            if t.rows()[0] == [1, 2] {
                first += 1;
            }
        }
        let frac = first as f64 / draws as f64;
        assert!((frac - 0.5).abs() < 0.02, "P = {frac}");
    }

    #[test]
    fn sampled_tableaux_are_valid_and_match_shape() {
        let s = shape(&[5, 3, 3, 1]);
        let mut sampler = SytSampler::new();
        let mut rng = RandomStream::new(6, 0);
        for _ in 0..100 {
            let t = sampler.sample(&s, &mut rng).unwrap();
            assert_eq!(t.shape(), s);
            assert!(StandardYoungTableau::new(t.rows().to_vec()).is_ok());
        }
    }

    #[test]
    fn alternating_sum_and_gap_statistics() {
        // Balanced shape: statistic 0 and gap 0.
        let s = shape(&[4, 4, 4]);
        assert_relative_eq!(scaled_alternating_sum(&s, 12, 3).unwrap(), 0.0);
        assert_eq!(min_gap(&s, 3).unwrap(), 0);

        // k even: the statistic is sqrt(k/n) times the odd-column count.
        let t = shape(&[5, 2]);
        let expected = (2.0f64 / 7.0).sqrt() * t.odd_columns() as f64;
        assert_relative_eq!(scaled_alternating_sum(&t, 7, 2).unwrap(), expected);

        // Padding: (3) with k = 3 has gaps 3 - 0 = 3 then 0 - 0 = 0.
        assert_eq!(min_gap(&shape(&[3]), 3).unwrap(), 0);
        assert_eq!(min_gap(&shape(&[4, 1]), 2).unwrap(), 3);

        assert!(scaled_alternating_sum(&shape(&[2, 1, 1]), 4, 2).is_err());
        assert!(min_gap(&shape(&[1]), 1).is_err());
    }

    #[test]
    fn tableau_validation_rejects_bad_arrays() {
        assert!(StandardYoungTableau::new(vec![vec![1, 2], vec![3]]).is_ok());
        // column not increasing
        assert!(StandardYoungTableau::new(vec![vec![2, 3], vec![1]]).is_err());
        // not a permutation of 1..=n
        assert!(StandardYoungTableau::new(vec![vec![1, 1], vec![2]]).is_err());
        // ragged rows that are no shape
        assert!(StandardYoungTableau::new(vec![vec![1], vec![2, 3]]).is_err());
    }

    #[test]
    fn csv_export_shape() {
        let d = shape_distribution(2, 2).unwrap();
        let csv = d.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("lambda,log_weight"));
        // shapes (2) and (1,1), each probability 1/2
        let row = lines.next().unwrap();
        assert!(row.starts_with("2,"), "row {row}");
        let lw: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_relative_eq!(lw, 0.5f64.ln(), epsilon = 1e-12);
    }
}
