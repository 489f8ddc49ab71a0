//! Probability distributions in the three representations the verification
//! suites compare — exact finite laws with rational masses, sorted empirical
//! samples, and closed-form continuous laws — plus the distances between
//! them (total variation, Kolmogorov–Smirnov, chi-square).

use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::special::{chi_square_sf, normal_cdf};
use crate::{Count, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum DistError {
    #[error("exact finite law invalid: {0}")]
    InvalidLaw(String),
    #[error("empirical distribution needs at least one sample")]
    Empty,
    #[error("{metric} is not defined between {a} and {b} representations")]
    IncompatibleKinds {
        metric: &'static str,
        a: &'static str,
        b: &'static str,
    },
    #[error("chi-square: sample value {0} is not an atom of the reference law")]
    ValueOffSupport(f64),
    #[error("chi-square: fewer than two bins after pooling")]
    TooFewBins,
}

/// A finite law: atoms at real positions with exact rational masses that sum
/// to one. Positions are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteLaw {
    positions: Vec<f64>,
    masses: Vec<Rational>,
}

impl FiniteLaw {
    pub fn new(atoms: Vec<(f64, Rational)>) -> Result<Self, DistError> {
        if atoms.is_empty() {
            return Err(DistError::InvalidLaw("no atoms".into()));
        }
        let mut total = Rational::zero();
        for w in atoms.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(DistError::InvalidLaw(format!(
                    "positions not strictly increasing at {}",
                    w[1].0
                )));
            }
        }
        for (x, m) in &atoms {
            if !x.is_finite() {
                return Err(DistError::InvalidLaw(format!("non-finite position {x}")));
            }
            if m.is_negative() {
                return Err(DistError::InvalidLaw(format!("negative mass at {x}")));
            }
            total += m;
        }
        if !total.is_one() {
            return Err(DistError::InvalidLaw(format!(
                "masses sum to {total}, not 1"
            )));
        }
        let (positions, masses) = atoms.into_iter().unzip();
        Ok(Self { positions, masses })
    }

    /// Law on integer positions; zero masses are dropped.
    pub fn from_integer_atoms(atoms: Vec<(i64, Rational)>) -> Result<Self, DistError> {
        let mut atoms: Vec<_> = atoms
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (i as f64, m))
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self::new(atoms)
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mean(&self) -> f64 {
        self.positions
            .iter()
            .zip(&self.masses)
            .map(|(x, m)| x * m.to_f64().unwrap())
            .sum()
    }

    /// Rescales every position by a positive factor (order-preserving).
    pub fn scale_positions(&self, factor: f64) -> Result<Self, DistError> {
        if !(factor > 0.0) {
            return Err(DistError::InvalidLaw(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Self::new(
            self.positions
                .iter()
                .zip(&self.masses)
                .map(|(x, m)| (x * factor, m.clone()))
                .collect(),
        )
    }

    /// CSV rows `fp,probability` (probability printed as f64).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("fp,probability\n");
        for (x, m) in self.positions.iter().zip(&self.masses) {
            s.push_str(&format!("{x},{}\n", m.to_f64().unwrap()));
        }
        s
    }
}

/// A continuous limit law with a closed-form CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticLaw {
    /// Rayleigh with scale 1: density x·exp(-x²/2) on x >= 0.
    Rayleigh1,
    /// Standard normal.
    StdNormal,
}

impl AnalyticLaw {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            AnalyticLaw::Rayleigh1 => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - (-x * x / 2.0).exp()
                }
            }
            AnalyticLaw::StdNormal => normal_cdf(x),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            AnalyticLaw::Rayleigh1 => (std::f64::consts::PI / 2.0).sqrt(),
            AnalyticLaw::StdNormal => 0.0,
        }
    }
}

/// A distribution in one of the three representations understood by
/// [`distance`].
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    /// Exact finite law (rational masses).
    ExactFinite(FiniteLaw),
    /// Sorted sample vector.
    Empirical(Vec<f64>),
    /// Closed-form continuous law.
    Analytic(AnalyticLaw),
}

impl Distribution {
    pub fn exact(law: FiniteLaw) -> Self {
        Distribution::ExactFinite(law)
    }

    pub fn empirical(mut samples: Vec<f64>) -> Result<Self, DistError> {
        if samples.is_empty() {
            return Err(DistError::Empty);
        }
        samples.sort_by(f64::total_cmp);
        Ok(Distribution::Empirical(samples))
    }

    pub fn rayleigh1() -> Self {
        Distribution::Analytic(AnalyticLaw::Rayleigh1)
    }

    pub fn std_normal() -> Self {
        Distribution::Analytic(AnalyticLaw::StdNormal)
    }

    /// Negative binomial with r = 2, p = 1/3: P(N = j) = 4(j+1)/9 · (1/3)^j.
    ///
    /// The law has infinite support; it is stored truncated at j = 200 with
    /// the (≈ 1e-93) tail folded into the last atom so the masses still sum
    /// to one exactly. No comparison in this crate can see a perturbation
    /// that small.
    pub fn negbin_2_third() -> Self {
        const CUT: i64 = 200;
        let third = Rational::new(1.into(), 3.into());
        let scale = Rational::new(4.into(), 9.into());
        let mut atoms = Vec::new();
        let mut pow = Rational::one();
        let mut acc = Rational::zero();
        for j in 0..CUT {
            let mass = &scale * Rational::from_integer((j + 1).into()) * &pow;
            acc += &mass;
            atoms.push((j, mass));
            pow *= &third;
        }
        atoms.push((CUT, Rational::one() - acc));
        Distribution::ExactFinite(FiniteLaw::from_integer_atoms(atoms).expect("negbin law"))
    }

    /// The even-parity lattice law: P(X = i) = C(k, i)/2^(k-1) for even i.
    pub fn x_even(k: usize) -> Self {
        Self::parity_law(k, 0)
    }

    /// The odd-parity lattice law: P(X = i) = C(k, i)/2^(k-1) for odd i.
    pub fn x_odd(k: usize) -> Self {
        Self::parity_law(k, 1)
    }

    fn parity_law(k: usize, parity: usize) -> Self {
        assert!(k >= 1, "parity laws need k >= 1");
        let denom = Count::from(1u32) << (k - 1);
        let atoms = (0..=k)
            .filter(|i| i % 2 == parity)
            .map(|i| {
                let num = binomial(Count::from(k), Count::from(i));
                (i as i64, Rational::new(num.into(), denom.clone().into()))
            })
            .collect();
        Distribution::ExactFinite(FiniteLaw::from_integer_atoms(atoms).expect("parity law"))
    }

    pub fn mean(&self) -> f64 {
        match self {
            Distribution::ExactFinite(law) => law.mean(),
            Distribution::Empirical(s) => s.iter().sum::<f64>() / s.len() as f64,
            Distribution::Analytic(law) => law.mean(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Distribution::ExactFinite(_) => "exact-finite",
            Distribution::Empirical(_) => "empirical",
            Distribution::Analytic(_) => "analytic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    TotalVariation,
    KolmogorovSmirnov,
    ChiSquare,
}

/// Distance between two distributions.
///
/// Supported combinations: total variation between exact finite laws
/// (computed in exact rational arithmetic); Kolmogorov–Smirnov between any
/// pair involving at least one non-analytic side; chi-square statistic of
/// empirical samples against an exact finite law. Anything else is an
/// incompatibility error.
pub fn distance(a: &Distribution, b: &Distribution, metric: Metric) -> Result<f64, DistError> {
    use Distribution::*;
    match metric {
        Metric::TotalVariation => match (a, b) {
            (ExactFinite(p), ExactFinite(q)) => Ok(total_variation_exact(p, q)
                .to_f64()
                .expect("tv fits in f64")),
            _ => Err(DistError::IncompatibleKinds {
                metric: "total variation",
                a: a.kind(),
                b: b.kind(),
            }),
        },
        Metric::KolmogorovSmirnov => match (a, b) {
            (Empirical(s), Analytic(law)) | (Analytic(law), Empirical(s)) => {
                Ok(ks_steps_vs_cdf(&step_cdf_empirical(s), |x| law.cdf(x)))
            }
            (ExactFinite(p), Analytic(law)) | (Analytic(law), ExactFinite(p)) => {
                Ok(ks_steps_vs_cdf(&step_cdf_exact(p), |x| law.cdf(x)))
            }
            (Empirical(s), Empirical(t)) => Ok(ks_two_step(
                &step_cdf_empirical(s),
                &step_cdf_empirical(t),
            )),
            (Empirical(s), ExactFinite(p)) | (ExactFinite(p), Empirical(s)) => {
                Ok(ks_two_step(&step_cdf_empirical(s), &step_cdf_exact(p)))
            }
            _ => Err(DistError::IncompatibleKinds {
                metric: "Kolmogorov-Smirnov",
                a: a.kind(),
                b: b.kind(),
            }),
        },
        Metric::ChiSquare => match (a, b) {
            (Empirical(s), ExactFinite(p)) | (ExactFinite(p), Empirical(s)) => {
                Ok(chi_square_test(s, p, 5.0)?.statistic)
            }
            _ => Err(DistError::IncompatibleKinds {
                metric: "chi-square",
                a: a.kind(),
                b: b.kind(),
            }),
        },
    }
}

/// Exact total variation ½ Σ |p_i - q_i| over the union of supports.
pub fn total_variation_exact(p: &FiniteLaw, q: &FiniteLaw) -> Rational {
    let mut acc = Rational::zero();
    let (mut i, mut j) = (0, 0);
    while i < p.positions.len() || j < q.positions.len() {
        let xp = p.positions.get(i).copied().unwrap_or(f64::INFINITY);
        let xq = q.positions.get(j).copied().unwrap_or(f64::INFINITY);
        if xp < xq {
            acc += p.masses[i].abs();
            i += 1;
        } else if xq < xp {
            acc += q.masses[j].abs();
            j += 1;
        } else {
            acc += (&p.masses[i] - &q.masses[j]).abs();
            i += 1;
            j += 1;
        }
    }
    acc / Rational::from_integer(2.into())
}

// A right-continuous step CDF: jump positions with cumulative values after
// each jump.
struct StepCdf {
    xs: Vec<f64>,
    after: Vec<f64>,
}

fn step_cdf_empirical(sorted: &[f64]) -> StepCdf {
    let n = sorted.len() as f64;
    let mut xs = Vec::new();
    let mut after = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        xs.push(sorted[i]);
        after.push(j as f64 / n);
        i = j;
    }
    StepCdf { xs, after }
}

fn step_cdf_exact(law: &FiniteLaw) -> StepCdf {
    let mut cum = Rational::zero();
    let mut after = Vec::with_capacity(law.positions.len());
    for m in &law.masses {
        cum += m;
        after.push(cum.to_f64().unwrap());
    }
    StepCdf {
        xs: law.positions.clone(),
        after,
    }
}

// sup_x |F(x) - G(x)| for a step CDF F against a continuous CDF G: checked
// just before and just after every jump of F.
fn ks_steps_vs_cdf(f: &StepCdf, g: impl Fn(f64) -> f64) -> f64 {
    let mut d: f64 = 0.0;
    let mut before = 0.0;
    for (x, &a) in f.xs.iter().zip(&f.after) {
        let gx = g(*x);
        d = d.max((gx - before).abs()).max((a - gx).abs());
        before = a;
    }
    d
}

// sup_x |F(x) - G(x)| for two step CDFs: constant between jumps, so the
// merged jump points suffice.
fn ks_two_step(f: &StepCdf, g: &StepCdf) -> f64 {
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    let (mut cf, mut cg) = (0.0, 0.0);
    while i < f.xs.len() || j < g.xs.len() {
        let xf = f.xs.get(i).copied().unwrap_or(f64::INFINITY);
        let xg = g.xs.get(j).copied().unwrap_or(f64::INFINITY);
        if xf <= xg {
            cf = f.after[i];
            i += 1;
        }
        if xg <= xf {
            cg = g.after[j];
            j += 1;
        }
        d = d.max((cf - cg).abs());
    }
    d
}

/// Result of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Chi-square test of integer-lattice samples against an exact finite law.
///
/// Samples must land exactly on atoms of the reference law. Adjacent bins
/// are pooled until every expected count reaches `min_expected`.
pub fn chi_square_test(
    samples: &[f64],
    law: &FiniteLaw,
    min_expected: f64,
) -> Result<ChiSquareOutcome, DistError> {
    if samples.is_empty() {
        return Err(DistError::Empty);
    }
    let n = samples.len() as f64;
    let mut observed = vec![0u64; law.positions.len()];
    for &s in samples {
        match law.positions.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(idx) => observed[idx] += 1,
            Err(_) => return Err(DistError::ValueOffSupport(s)),
        }
    }
    let expected: Vec<f64> = law.masses.iter().map(|m| m.to_f64().unwrap() * n).collect();

    // Pool adjacent bins left to right until each pooled bin's expectation
    // clears the floor; a deficient final bin merges backwards.
    let mut bins: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let mut acc = (0.0, 0.0);
    for (o, e) in observed.iter().zip(&expected) {
        acc.0 += *o as f64;
        acc.1 += *e;
        if acc.1 >= min_expected {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    if bins.len() < 2 {
        return Err(DistError::TooFewBins);
    }
    let statistic: f64 = bins
        .iter()
        .map(|(o, e)| {
            let d = o - e;
            d * d / e
        })
        .sum();
    let dof = bins.len() - 1;
    Ok(ChiSquareOutcome {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
    })
}
