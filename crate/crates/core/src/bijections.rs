//! Structure-preserving correspondences that explain *why* the fixed-point
//! laws look the way they do, by transporting the statistic onto objects
//! where it is easy to read off:
//!
//! * involutions avoiding `231` ↔ compositions of `n` (fixed points ↔ odd
//!   parts), via direct sums of decreasing blocks;
//! * involutions ↔ standard Young tableaux (fixed points ↔ odd columns),
//!   via row insertion;
//! * involutions avoiding `321` ↔ symmetric Dyck paths (fixed points ↔
//!   tunnels centered on the midpoint).

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use thiserror::Error;

use crate::perm::{Pattern, Permutation};
use crate::tableaux::StandardYoungTableau;
use crate::Count;

#[derive(Debug, Error, PartialEq)]
pub enum BijectionError {
    #[error("permutation is not an involution")]
    NotAnInvolution,
    #[error("involution contains the pattern {0}, outside this bijection's domain")]
    PatternPresent(&'static str),
    #[error("invalid composition: parts must be positive")]
    InvalidComposition,
    #[error("invalid Dyck path: {0}")]
    InvalidPath(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// An ordered sequence of positive parts. The empty composition (of 0) is
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, BijectionError> {
        if parts.iter().any(|&p| p == 0) {
            return Err(BijectionError::InvalidComposition);
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn odd_parts(&self) -> usize {
        self.parts.iter().filter(|&&p| p % 2 == 1).count()
    }
}

impl fmt::Display for Composition {
    /// Comma-separated parts: `3,2,3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Composition {
    type Err = BijectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Composition::new(vec![]);
        }
        let parts = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| BijectionError::Parse(format!("bad part {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Composition::new(parts)
    }
}

/// The involution obtained by reversing each block of a composition: part
/// `a_i` starting at offset `b_i = a_1 + … + a_{i−1}` maps position
/// `b_i + r` to `b_i + a_i + 1 − r`.
///
/// The image is exactly the class of involutions avoiding `231`; a part
/// contributes a fixed point (its middle) iff it is odd, so fixed points
/// correspond to odd parts. `3,2,3` maps to `3 2 1 5 4 8 7 6`.
pub fn composition_to_involution(c: &Composition) -> Permutation {
    let n = c.total();
    let mut values = vec![0usize; n];
    let mut offset = 0;
    for &a in c.parts() {
        for r in 1..=a {
            values[offset + r - 1] = offset + a + 1 - r;
        }
        offset += a;
    }
    Permutation::new(values).expect("block reversals form a permutation")
}

/// Inverse of [`composition_to_involution`]: splits a `231`-avoiding
/// involution back into its decreasing blocks. Errors when the input is
/// outside the class.
pub fn involution_to_composition(p: &Permutation) -> Result<Composition, BijectionError> {
    if !p.is_involution() {
        return Err(BijectionError::NotAnInvolution);
    }
    let pat = Pattern::from_digits("231").expect("literal pattern");
    if !p.avoids(&pat) {
        return Err(BijectionError::PatternPresent("231"));
    }
    // Each block starts at the smallest unconsumed position i and has
    // length p(i) - i + 1; avoidance of 231 guarantees the blocks tile [n].
    let mut parts = Vec::new();
    let mut i = 1;
    while i <= p.len() {
        debug_assert!(p.value(i) >= i, "block start must look forward");
        let a = p.value(i) + 1 - i;
        parts.push(a);
        i += a;
    }
    let c = Composition { parts };
    debug_assert_eq!(&composition_to_involution(&c), p);
    Ok(c)
}

/// Insertion tableau of an involution under row insertion. For involutions
/// the recording tableau coincides with the insertion tableau, so this is a
/// bijection onto standard Young tableaux; it carries fixed points to odd
/// columns, and the longest decreasing subsequence to the number of rows.
pub fn rsk_tableau(p: &Permutation) -> Result<StandardYoungTableau, BijectionError> {
    if !p.is_involution() {
        return Err(BijectionError::NotAnInvolution);
    }
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &v in p.values() {
        let mut item = v;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![item]);
                break;
            }
            // First entry strictly larger than the incoming one gets bumped.
            let pos = rows[r].partition_point(|&x| x < item);
            if pos == rows[r].len() {
                rows[r].push(item);
                break;
            }
            std::mem::swap(&mut rows[r][pos], &mut item);
            r += 1;
        }
    }
    Ok(StandardYoungTableau::from_rows_unchecked(rows))
}

/// One step of a lattice path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Down,
}

impl Step {
    fn flipped(self) -> Step {
        match self {
            Step::Up => Step::Down,
            Step::Down => Step::Up,
        }
    }
}

/// A Dyck path: equally many up- and down-steps, never dipping below the
/// start height.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self, BijectionError> {
        let mut height = 0i64;
        for s in &steps {
            height += match s {
                Step::Up => 1,
                Step::Down => -1,
            };
            if height < 0 {
                return Err(BijectionError::InvalidPath(
                    "path dips below its start".into(),
                ));
            }
        }
        if height != 0 {
            return Err(BijectionError::InvalidPath(
                "path does not return to its start".into(),
            ));
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of steps (twice the semilength).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether the path equals its own reverse-complement, i.e. is
    /// mirror-symmetric about its midpoint.
    pub fn is_symmetric(&self) -> bool {
        let m = self.steps.len();
        (0..m / 2).all(|i| self.steps[i] == self.steps[m - 1 - i].flipped())
    }

    /// Number of tunnels centered on the path's midpoint. A tunnel is a
    /// matched pair (up-step at `i`, down-step at `j`); it is centered when
    /// `i + j` equals `len − 1`. Matching is done with a stack, using no
    /// information beyond the path itself.
    pub fn centered_tunnels(&self) -> usize {
        let mid = match self.steps.len().checked_sub(1) {
            Some(m) => m,
            None => return 0,
        };
        let mut stack = Vec::new();
        let mut centered = 0;
        for (j, s) in self.steps.iter().enumerate() {
            match s {
                Step::Up => stack.push(j),
                Step::Down => {
                    let i = stack.pop().expect("valid path");
                    if i + j == mid {
                        centered += 1;
                    }
                }
            }
        }
        centered
    }
}

impl fmt::Display for DyckPath {
    /// One character per step: `UUDD`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", if *s == Step::Up { 'U' } else { 'D' })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = BijectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps = s
            .chars()
            .map(|c| match c {
                'U' => Ok(Step::Up),
                'D' => Ok(Step::Down),
                other => Err(BijectionError::Parse(format!("bad step {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        DyckPath::new(steps)
    }
}

/// Maps a `321`-avoiding involution to a symmetric Dyck path of twice its
/// length, returning the path together with its centered-tunnel count.
///
/// The insertion tableau of such an involution has at most two rows; the
/// half-path reads the values `1..=n` in order, stepping up for first-row
/// values and down for second-row values (a ballot sequence), and the full
/// path is the half-path followed by its reverse-complement. Fixed points
/// of the involution become exactly the centered tunnels, which the second
/// component counts from the path alone. `2 1 3` maps to `UDUDUD` with one
/// centered tunnel.
pub fn involution_to_dyck(p: &Permutation) -> Result<(DyckPath, usize), BijectionError> {
    if !p.is_involution() {
        return Err(BijectionError::NotAnInvolution);
    }
    let pat = Pattern::from_digits("321").expect("literal pattern");
    if !p.avoids(&pat) {
        return Err(BijectionError::PatternPresent("321"));
    }
    let tableau = rsk_tableau(p)?;
    debug_assert!(tableau.rows().len() <= 2, "avoidance bounds the rows");
    let n = p.len();
    let mut in_second_row = vec![false; n + 1];
    if let Some(row2) = tableau.rows().get(1) {
        for &v in row2 {
            in_second_row[v] = true;
        }
    }
    let mut steps: Vec<Step> = (1..=n)
        .map(|v| if in_second_row[v] { Step::Down } else { Step::Up })
        .collect();
    for i in (0..n).rev() {
        let s = steps[i].flipped();
        steps.push(s);
    }
    let path = DyckPath::new(steps).expect("ballot half-path completes to a Dyck path");
    let tunnels = path.centered_tunnels();
    Ok((path, tunnels))
}

/// Number of `321`-avoiding involutions of length `2d + k` with exactly `k`
/// fixed points: the ballot number C(2d+k, d) − C(2d+k, d−1), counting
/// two-row tableaux of shape (d+k, d).
pub fn ballot_count(d: usize, k: usize) -> Count {
    if d == 0 {
        return Count::one();
    }
    let n = Count::from(2 * d + k);
    num_integer::binomial(n.clone(), Count::from(d))
        - num_integer::binomial(n, Count::from(d - 1))
}
