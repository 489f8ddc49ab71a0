//! Permutations in one-line notation, pattern containment, and exhaustive
//! enumeration of involutions and pattern-avoiding classes.
//!
//! Everything here is exact and deliberately brute-force: these routines are
//! the ground truth the generating functions, bijections, and samplers are
//! tested against, so they stay as close to the definitions as possible.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest `n` for which involutions of `[n]` are enumerated exhaustively.
/// There are 140 152 involutions of `[12]`; beyond that the list stops being
/// useful as a test oracle and the cost stops being interactive.
pub const MAX_INVOLUTION_ENUM: usize = 12;

/// Largest `n` for which all of `S_n` is enumerated (`10! = 3 628 800`).
pub const MAX_PERMUTATION_ENUM: usize = 10;

/// Longest pattern accepted by [`Pattern::new`]. Containment is checked by
/// exhaustive subsequence search, which is only sensible for short patterns.
pub const MAX_PATTERN_LEN: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    /// The supplied values are not a rearrangement of `1..=n`.
    #[error("not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    /// A pattern longer than [`MAX_PATTERN_LEN`] was requested.
    #[error("pattern of length {len} exceeds the supported maximum {max}")]
    PatternTooLong { len: usize, max: usize },
    /// An enumeration was requested beyond its documented cap.
    #[error("{what} is capped at n <= {cap} (requested n = {n})")]
    SizeCap {
        what: &'static str,
        cap: usize,
        n: usize,
    },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// A permutation of `{1, ..., n}` in one-line notation.
///
/// `values[i]` is the image of `i + 1`; the public interface is 1-based
/// throughout, matching the combinatorial conventions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from one-line notation, checking that the values
    /// are exactly `1..=n` in some order.
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v > n {
                return Err(PermError::NotAPermutation {
                    n,
                    reason: format!("value {v} out of range"),
                });
            }
            if seen[v - 1] {
                return Err(PermError::NotAPermutation {
                    n,
                    reason: format!("value {v} repeated"),
                });
            }
            seen[v - 1] = true;
        }
        Ok(Self { values })
    }

    /// Identity permutation of `[n]`.
    pub fn identity(n: usize) -> Self {
        Self {
            values: (1..=n).collect(),
        }
    }

    // Internal constructor for enumeration loops that build valid one-line
    // arrays by construction.
    fn from_valid(values: Vec<usize>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok());
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One-line notation as a slice; entry `i` is the image of `i + 1`.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Image of `i` (1-based).
    pub fn value(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { values: inv }
    }

    /// Number of indices with `pi(i) = i`.
    pub fn fixed_points(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v == i + 1)
            .count()
    }

    /// Whether the permutation equals its own inverse.
    pub fn is_involution(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(i, &v)| self.values[v - 1] == i + 1)
    }

    /// Whether some subsequence of `self` is order-isomorphic to `pat`.
    ///
    /// Exhaustive depth-first search over index subsequences with pruning on
    /// partial order-isomorphism; exponential in the pattern length, which is
    /// why patterns are capped at length [`MAX_PATTERN_LEN`].
    pub fn contains(&self, pat: &Pattern) -> bool {
        let k = pat.len();
        if k == 0 {
            return true;
        }
        if k > self.len() {
            return false;
        }
        let mut chosen = Vec::with_capacity(k);
        self.search(pat.0.values(), 0, &mut chosen)
    }

    /// Complement of [`Permutation::contains`].
    pub fn avoids(&self, pat: &Pattern) -> bool {
        !self.contains(pat)
    }

    fn search(&self, pat: &[usize], start: usize, chosen: &mut Vec<usize>) -> bool {
        let d = chosen.len();
        if d == pat.len() {
            return true;
        }
        // Enough positions must remain to finish the pattern.
        let last = self.len() - (pat.len() - d);
        for i in start..=last {
            let v = self.values[i];
            let compatible = chosen
                .iter()
                .enumerate()
                .all(|(e, &w)| (pat[e] < pat[d]) == (w < v));
            if compatible {
                chosen.push(v);
                if self.search(pat, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

impl fmt::Display for Permutation {
    /// One-line notation, space separated: `3 2 1 5 4 8 7 6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| PermError::Parse(format!("bad value {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(values)
    }
}

/// A short permutation used as a forbidden pattern.
///
/// Construction enforces the length cap so that containment queries stay
/// total; see [`MAX_PATTERN_LEN`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern(Permutation);

impl Pattern {
    pub fn new(p: Permutation) -> Result<Self, PermError> {
        if p.len() > MAX_PATTERN_LEN {
            return Err(PermError::PatternTooLong {
                len: p.len(),
                max: MAX_PATTERN_LEN,
            });
        }
        Ok(Self(p))
    }

    /// Parses the compact digit form used on the command line, e.g. `"231"`.
    pub fn from_digits(s: &str) -> Result<Self, PermError> {
        let values = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| PermError::Parse(format!("bad pattern digit {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(Permutation::new(values)?)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn permutation(&self) -> &Permutation {
        &self.0
    }

    /// The decreasing pattern `k k-1 ... 1`.
    pub fn decreasing(k: usize) -> Result<Self, PermError> {
        Self::new(Permutation::from_valid((1..=k).rev().collect()))
    }

    /// The increasing pattern `1 2 ... k`.
    pub fn increasing(k: usize) -> Result<Self, PermError> {
        Self::new(Permutation::identity(k))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.0.values() {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// All involutions of `[n]` by recursive matching construction: the largest
/// unplaced element is either a fixed point or paired with a smaller free
/// element. Deterministic order; capped at [`MAX_INVOLUTION_ENUM`].
pub fn involutions(n: usize) -> Result<Vec<Permutation>, PermError> {
    if n > MAX_INVOLUTION_ENUM {
        return Err(PermError::SizeCap {
            what: "involution enumeration",
            cap: MAX_INVOLUTION_ENUM,
            n,
        });
    }
    let mut out = Vec::new();
    let mut vals = vec![0usize; n];
    fn rec(vals: &mut [usize], out: &mut Vec<Permutation>) {
        match (0..vals.len()).rev().find(|&i| vals[i] == 0) {
            None => out.push(Permutation::from_valid(vals.to_vec())),
            Some(i) => {
                // i + 1 as a fixed point
                vals[i] = i + 1;
                rec(vals, out);
                vals[i] = 0;
                // or transposed with a smaller free element j + 1
                for j in (0..i).rev() {
                    if vals[j] == 0 {
                        vals[i] = j + 1;
                        vals[j] = i + 1;
                        rec(vals, out);
                        vals[i] = 0;
                        vals[j] = 0;
                    }
                }
            }
        }
    }
    rec(&mut vals, &mut out);
    Ok(out)
}

/// Visits every permutation of `[n]` in lexicographic order.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut vals = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, vals: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
        if vals.len() == n {
            f(vals);
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                vals.push(v);
                rec(n, vals, used, f);
                vals.pop();
                used[v - 1] = false;
            }
        }
    }
    rec(n, &mut vals, &mut used, &mut f);
}

/// Histogram of the fixed-point statistic over a pattern-avoiding class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpHistogram {
    n: usize,
    counts: BTreeMap<usize, u64>,
}

impl FpHistogram {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Count of class members with exactly `fp` fixed points (zero counts
    /// are not stored).
    pub fn count(&self, fp: usize) -> u64 {
        self.counts.get(&fp).copied().unwrap_or(0)
    }

    /// Non-zero counts keyed by fixed-point value, in increasing order.
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    /// Size of the enumerated class.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// CSV rows `fp,count` sorted by fixed-point value, with header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("fp,count\n");
        for (fp, c) in &self.counts {
            s.push_str(&format!("{fp},{c}\n"));
        }
        s
    }
}

/// Exhaustive fixed-point histogram over the permutations of `[n]` avoiding
/// `pat`, restricted to involutions when `involutions_only` is set.
///
/// Caps: [`MAX_INVOLUTION_ENUM`] for the involution class,
/// [`MAX_PERMUTATION_ENUM`] for the full symmetric group.
pub fn fp_histogram(
    n: usize,
    pat: &Pattern,
    involutions_only: bool,
) -> Result<FpHistogram, PermError> {
    let mut counts = BTreeMap::new();
    if involutions_only {
        for p in involutions(n)? {
            if p.avoids(pat) {
                *counts.entry(p.fixed_points()).or_insert(0) += 1;
            }
        }
    } else {
        if n > MAX_PERMUTATION_ENUM {
            return Err(PermError::SizeCap {
                what: "permutation enumeration",
                cap: MAX_PERMUTATION_ENUM,
                n,
            });
        }
        // Check containment in place to avoid 3.6M heap clones at n = 10.
        let mut fps = Vec::new();
        for_each_permutation(n, |vals| {
            let p = Permutation {
                values: vals.to_vec(),
            };
            if p.avoids(pat) {
                fps.push(p.fixed_points());
            }
        });
        for fp in fps {
            *counts.entry(fp).or_insert(0) += 1;
        }
    }
    Ok(FpHistogram { n, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Pattern {
        Pattern::from_digits(s).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0]).is_err());
        assert!(Permutation::new(vec![2, 3]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
    }

    #[test]
    fn fixed_points_and_involution_basics() {
        let p: Permutation = "3 2 1 5 4 8 7 6".parse().unwrap();
        assert_eq!(p.fixed_points(), 2); // positions 2 and 7
        assert!(p.is_involution());
        assert_eq!(p.inverse(), p);

        let q: Permutation = "2 3 1".parse().unwrap();
        assert!(!q.is_involution());
        assert_eq!(q.fixed_points(), 0);
    }

    #[test]
    fn one_line_round_trip() {
        let p: Permutation = "3 2 1 5 4 8 7 6".parse().unwrap();
        assert_eq!(p.to_string(), "3 2 1 5 4 8 7 6");
        assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }

    #[test]
    fn containment_examples() {
        let p: Permutation = "3 2 1 5 4 8 7 6".parse().unwrap();
        assert!(p.contains(&pat("321")));
        assert!(p.avoids(&pat("231")));
        assert!(p.avoids(&pat("1234")));
        assert!(p.contains(&pat("123"))); // e.g. 3 5 8

        // Patterns longer than the target cannot occur.
        let q: Permutation = "1 2".parse().unwrap();
        assert!(q.avoids(&pat("123")));
    }

    #[test]
    fn pattern_cap_is_enforced() {
        let long = Permutation::identity(5);
        assert_eq!(
            Pattern::new(long),
            Err(PermError::PatternTooLong { len: 5, max: 4 })
        );
    }

    #[test]
    fn involution_counts_match_telephone_numbers() {
        // 1, 1, 2, 4, 10, 26, 76, 232, 764, 2620, 9496
        let expected = [1, 1, 2, 4, 10, 26, 76, 232, 764, 2620, 9496];
        for (n, &count) in expected.iter().enumerate() {
            let ivs = involutions(n).unwrap();
            assert_eq!(ivs.len(), count, "n = {n}");
            assert!(ivs.iter().all(|p| p.is_involution()));
        }
        assert!(involutions(MAX_INVOLUTION_ENUM + 1).is_err());
    }

    #[test]
    fn involution_fixed_point_parity() {
        // fp(pi) and n have the same parity: non-fixed points come in pairs.
        for n in 0..=8 {
            for p in involutions(n).unwrap() {
                assert_eq!(p.fixed_points() % 2, n % 2, "pi = {p}");
            }
        }
    }

    #[test]
    fn histogram_involutions_avoiding_231_n3() {
        let h = fp_histogram(3, &pat("231"), true).unwrap();
        let expected: BTreeMap<usize, u64> = [(1, 3), (3, 1)].into_iter().collect();
        assert_eq!(h.counts(), &expected);
        assert_eq!(h.total(), 4);
        assert_eq!(h.to_csv(), "fp,count\n1,3\n3,1\n");
    }

    #[test]
    fn histogram_involutions_avoiding_123_n4() {
        let h = fp_histogram(4, &pat("123"), true).unwrap();
        // Binomial(4, 2) = 6 involutions of [4] avoid 123.
        assert_eq!(h.total(), 6);
        let expected: BTreeMap<usize, u64> = [(0, 3), (2, 3)].into_iter().collect();
        assert_eq!(h.counts(), &expected);
    }

    #[test]
    fn histogram_all_permutations_avoiding_231_n3() {
        let h = fp_histogram(3, &pat("231"), false).unwrap();
        let expected: BTreeMap<usize, u64> = [(0, 1), (1, 3), (3, 1)].into_iter().collect();
        assert_eq!(h.counts(), &expected);
        assert_eq!(h.total(), 5); // Catalan number C_3
    }

    #[test]
    fn histogram_caps() {
        assert!(fp_histogram(11, &pat("231"), false).is_err());
        assert!(fp_histogram(13, &pat("231"), true).is_err());
    }

    #[test]
    fn avoidance_counts_are_catalan_for_all_length_3_patterns() {
        // |Av_n(tau)| = Catalan(n) for every length-3 pattern.
        let catalan = [1u64, 1, 2, 5, 14, 42, 132];
        for tau in ["123", "132", "213", "231", "312", "321"] {
            for (n, &c) in catalan.iter().enumerate() {
                assert_eq!(
                    fp_histogram(n, &pat(tau), false).unwrap().total(),
                    c,
                    "tau = {tau}, n = {n}"
                );
            }
        }
    }
}
