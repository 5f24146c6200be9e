//! Where does the root of a uniformly chosen layer-`i` vertex sit?
//!
//! Two answers are computed. The asymptotic one takes the limits `K` and `M`
//! of the spectral constants:
//!
//! ```text
//! P(j = i)     = K
//! P(j), 0<j<i  = (1−K)·M·(1−M)^(i−j−1)
//! P(j = 0)     = (1−K)·(1−M)^(i−1)
//! ```
//!
//! The exact one follows the forced fan-outs of the forest: the main root has
//! `q` children, every other root `q−2`, every non-root `q−3`. A root on
//! level `j` therefore has `(q−2)(q−3)^(i−j−1)` descendants on level `i`, and
//! the main root `q(q−3)^(i−1)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quadratic::QuadraticNumber;
use crate::recurrence::{LayerCounts, SpectralConstants};
use crate::symbol::SchlafliSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Asymptotic,
    Exact,
}

/// Root-level distribution for one level `i`; index `j` runs over `0..=i`.
#[derive(Debug, Clone)]
pub struct RootDistribution<T> {
    pub symbol: SchlafliSymbol,
    pub level: usize,
    pub kind: DistributionKind,
    point_mass: Vec<T>,
    cumulative_below: Vec<T>,
}

pub type ExactDistribution = RootDistribution<BigRational>;
pub type AsymptoticDistribution = RootDistribution<QuadraticNumber>;

impl<T> RootDistribution<T>
where
    T: Clone,
    for<'a> &'a T: std::ops::Add<&'a T, Output = T>,
{
    fn from_masses(
        symbol: SchlafliSymbol,
        level: usize,
        kind: DistributionKind,
        point_mass: Vec<T>,
    ) -> Self {
        let mut cumulative_below: Vec<T> = Vec::with_capacity(point_mass.len());
        for mass in &point_mass {
            let next = match cumulative_below.last() {
                Some(prev) => prev + mass,
                None => mass.clone(),
            };
            cumulative_below.push(next);
        }
        Self {
            symbol,
            level,
            kind,
            point_mass,
            cumulative_below,
        }
    }
}

impl<T> RootDistribution<T> {
    /// `P(root on level j)`.
    pub fn point_mass(&self, j: usize) -> &T {
        &self.point_mass[j]
    }

    /// `P(root on level ≤ j)`.
    pub fn cumulative_below(&self, j: usize) -> &T {
        &self.cumulative_below[j]
    }

    pub fn masses(&self) -> &[T] {
        &self.point_mass
    }

    /// Sum of all masses.
    pub fn total(&self) -> &T {
        self.cumulative_below.last().expect("at least one level")
    }
}

/// The limiting model built from `K` and `M`, exact in ℚ[√(c²−4)].
pub fn asymptotic_distribution(
    consts: &SpectralConstants,
    level: usize,
) -> Result<AsymptoticDistribution> {
    if level == 0 {
        return Err(Error::Precondition(
            "the asymptotic model starts at level 1".into(),
        ));
    }
    let one = BigRational::one();
    let not_root = &(-&consts.k) + &one;
    let stay = &(-&consts.m) + &one;
    let mut masses = Vec::with_capacity(level + 1);
    masses.push(&not_root * &stay.pow(level as u32 - 1));
    for j in 1..level {
        let tail = stay.pow((level - j - 1) as u32);
        masses.push(&(&not_root * &consts.m) * &tail);
    }
    masses.push(consts.k.clone());
    Ok(RootDistribution::from_masses(
        consts.symbol,
        level,
        DistributionKind::Asymptotic,
        masses,
    ))
}

/// The finite-level distribution from tree fan-outs, given counts for
/// levels `0..=level`.
pub fn exact_distribution(
    pq: SchlafliSymbol,
    level: usize,
    counts: &[LayerCounts],
) -> Result<ExactDistribution> {
    pq.require_tree_recursion()?;
    if counts.len() <= level || counts.iter().enumerate().any(|(j, c)| c.level != j) {
        return Err(Error::Precondition(format!(
            "counts must cover levels 0..={level} in order"
        )));
    }
    let total = BigInt::from(counts[level].total());
    if total.is_zero() {
        return Err(Error::Precondition(format!("level {level} is empty")));
    }
    let frac = |n: BigUint| BigRational::new(n.into(), total.clone());
    if level == 0 {
        return Ok(RootDistribution::from_masses(
            pq,
            0,
            DistributionKind::Exact,
            vec![frac(counts[0].b.clone())],
        ));
    }
    let q = pq.q();
    let branch = BigUint::from(q - 3);
    let mut masses = Vec::with_capacity(level + 1);
    masses.push(frac(BigUint::from(q) * branch.pow(level as u32 - 1)));
    for (j, c) in counts.iter().enumerate().take(level).skip(1) {
        let descendants = BigUint::from(q - 2) * branch.pow((level - j - 1) as u32);
        masses.push(frac(&c.b * descendants));
    }
    masses.push(frac(counts[level].b.clone()));
    Ok(RootDistribution::from_masses(
        pq,
        level,
        DistributionKind::Exact,
        masses,
    ))
}

/// Empirical distribution from a root-level histogram.
pub fn histogram_distribution(
    pq: SchlafliSymbol,
    level: usize,
    histogram: &[u64],
) -> Result<ExactDistribution> {
    if histogram.len() != level + 1 {
        return Err(Error::Precondition(format!(
            "histogram for level {level} must have {} entries",
            level + 1
        )));
    }
    let total: u64 = histogram.iter().sum();
    if total == 0 {
        return Err(Error::Precondition("empty histogram".into()));
    }
    let masses = histogram
        .iter()
        .map(|&n| BigRational::new(n.into(), total.into()))
        .collect();
    Ok(RootDistribution::from_masses(
        pq,
        level,
        DistributionKind::Exact,
        masses,
    ))
}

#[derive(Debug, Clone)]
pub struct ErrorRow {
    pub j: usize,
    pub asymptotic: QuadraticNumber,
    pub exact: BigRational,
    pub abs_error: QuadraticNumber,
    /// `e` with `10^e ≤ |error| < 10^(e+1)`; `None` when the error is zero.
    pub order: Option<i32>,
}

#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub symbol: SchlafliSymbol,
    pub level: usize,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    /// Order of magnitude of the error at `j = 0`.
    pub fn main_root_order(&self) -> Option<i32> {
        self.rows[0].order
    }

    pub fn row(&self, j: usize) -> &ErrorRow {
        &self.rows[j]
    }
}

/// Per-level absolute gap between the asymptotic model and the exact distribution.
pub fn distribution_error_report(
    asymptotic: &AsymptoticDistribution,
    exact: &ExactDistribution,
) -> Result<ErrorReport> {
    if asymptotic.symbol != exact.symbol || asymptotic.level != exact.level {
        return Err(Error::MismatchedDistributions);
    }
    let rows = asymptotic
        .masses()
        .iter()
        .zip(exact.masses())
        .enumerate()
        .map(|(j, (a, e))| {
            let abs_error = (a - e).abs();
            ErrorRow {
                j,
                asymptotic: a.clone(),
                exact: e.clone(),
                order: abs_error.decimal_exponent(),
                abs_error,
            }
        })
        .collect();
    Ok(ErrorReport {
        symbol: asymptotic.symbol,
        level: asymptotic.level,
        rows,
    })
}
