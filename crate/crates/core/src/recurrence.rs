//! Exact layer counts for the layered tree forest and their spectral closed form.
//!
//! For `p, q ≥ 4` the number of non-root vertices `aᵢ` and roots `bᵢ` on
//! layer `i` obey
//!
//! ```text
//! a(i+1) = (q−3)·a(i) + (q−2)·b(i)
//! b(i+1) = ((q−3)(p−3)−1)·a(i) + ((q−2)(p−3)−1)·b(i)
//! ```
//!
//! from `a₀ = 0, b₀ = 1, a₁ = q, b₁ = q(p−3)`. The 2×2 matrix has determinant
//! 1 and trace `c = (p−2)(q−2)−2`, so for `c > 2` its eigenvalues are
//! `z₁,₂ = (c ± √(c²−4))/2` and every sequence `rᵢ = g₁z₁ⁱ + g₂z₂ⁱ` for
//! `i ≥ 1`. All of that is computed exactly in ℚ[√(c²−4)].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quadratic::QuadraticNumber;
use crate::symbol::{Geometry, SchlafliSymbol};

/// Vertex counts on one layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerCounts {
    pub level: usize,
    /// Non-root vertices.
    pub a: BigUint,
    /// Roots.
    pub b: BigUint,
}

impl LayerCounts {
    pub fn total(&self) -> BigUint {
        &self.a + &self.b
    }
}

/// Which layer sequence to look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sequence {
    /// `aᵢ`, non-root vertices.
    A,
    /// `bᵢ`, roots.
    B,
    /// `aᵢ + bᵢ`, all layer vertices.
    AB,
}

impl Sequence {
    pub const ALL: [Sequence; 3] = [Sequence::A, Sequence::B, Sequence::AB];

    pub fn of(self, counts: &LayerCounts) -> BigUint {
        match self {
            Sequence::A => counts.a.clone(),
            Sequence::B => counts.b.clone(),
            Sequence::AB => counts.total(),
        }
    }
}

/// The recursion matrix `[[q−3, q−2], [(q−3)(p−3)−1, (q−2)(p−3)−1]]`.
pub fn recursion_matrix(pq: SchlafliSymbol) -> [[i64; 2]; 2] {
    let (p, q) = (pq.p() as i64, pq.q() as i64);
    [
        [q - 3, q - 2],
        [(q - 3) * (p - 3) - 1, (q - 2) * (p - 3) - 1],
    ]
}

/// Layer counts for levels `0..=n`.
pub fn layer_counts(pq: SchlafliSymbol, n: usize) -> Result<Vec<LayerCounts>> {
    pq.require_tree_recursion()?;
    let m = recursion_matrix(pq);
    let coeff = |x: i64| BigUint::from(x as u64);
    let (m00, m01, m10, m11) = (
        coeff(m[0][0]),
        coeff(m[0][1]),
        coeff(m[1][0]),
        coeff(m[1][1]),
    );

    let mut out = Vec::with_capacity(n + 1);
    out.push(LayerCounts {
        level: 0,
        a: BigUint::zero(),
        b: BigUint::one(),
    });
    if n == 0 {
        return Ok(out);
    }
    let q = BigUint::from(pq.q());
    out.push(LayerCounts {
        level: 1,
        b: &q * BigUint::from(pq.p() - 3),
        a: q,
    });
    for level in 2..=n {
        let prev = &out[level - 1];
        let a = &m00 * &prev.a + &m01 * &prev.b;
        let b = &m10 * &prev.a + &m11 * &prev.b;
        out.push(LayerCounts { level, a, b });
    }
    Ok(out)
}

/// Closed-form `{4,4}` counts: `aᵢ = 8i − 4`, `bᵢ = 4`.
pub fn euclidean_counts(level: usize) -> Result<LayerCounts> {
    if level == 0 {
        return Err(Error::Precondition(
            "euclidean_counts is defined for levels ≥ 1".into(),
        ));
    }
    Ok(LayerCounts {
        level,
        a: BigUint::from(8 * level - 4),
        b: BigUint::from(4u32),
    })
}

/// Exact spectral data of the recursion for a hyperbolic symbol.
#[derive(Debug, Clone)]
pub struct SpectralConstants {
    pub symbol: SchlafliSymbol,
    /// Trace `(p−2)(q−2)−2`.
    pub c: i64,
    /// `c² − 4`, the radicand of every irrational constant below.
    pub radicand: BigInt,
    pub z1: QuadraticNumber,
    pub z2: QuadraticNumber,
    pub g_a1: QuadraticNumber,
    pub g_a2: QuadraticNumber,
    pub g_b1: QuadraticNumber,
    pub g_b2: QuadraticNumber,
    pub g_ab1: QuadraticNumber,
    pub g_ab2: QuadraticNumber,
    /// `(q−2)/(q−3)`.
    pub h: BigRational,
    /// `lim bᵢ/aᵢ = g_b1/g_a1`.
    pub l: QuadraticNumber,
    /// `lim bᵢ/(aᵢ+bᵢ) = L/(1+L)`.
    pub k: QuadraticNumber,
    /// `hL/(1+hL)`.
    pub m: QuadraticNumber,
    /// Digits after the decimal point used by [`SpectralConstants::decimal_views`].
    pub precision: usize,
}

impl SpectralConstants {
    pub fn coefficients(&self, which: Sequence) -> (&QuadraticNumber, &QuadraticNumber) {
        match which {
            Sequence::A => (&self.g_a1, &self.g_a2),
            Sequence::B => (&self.g_b1, &self.g_b2),
            Sequence::AB => (&self.g_ab1, &self.g_ab2),
        }
    }

    /// `lim bᵢ / Σⱼ≤ᵢ bⱼ = (z₁−1)/z₁`.
    pub fn cumulative_root_limit(&self) -> QuadraticNumber {
        let one = BigRational::one();
        &(&self.z1 - &one) / &self.z1
    }

    /// Every constant by name, in display order.
    pub fn named(&self) -> Vec<(&'static str, QuadraticNumber)> {
        let h = QuadraticNumber::from_rational(self.h.clone(), self.radicand.clone())
            .expect("radicand validated at construction");
        vec![
            ("z1", self.z1.clone()),
            ("z2", self.z2.clone()),
            ("g_a1", self.g_a1.clone()),
            ("g_a2", self.g_a2.clone()),
            ("g_b1", self.g_b1.clone()),
            ("g_b2", self.g_b2.clone()),
            ("g_ab1", self.g_ab1.clone()),
            ("g_ab2", self.g_ab2.clone()),
            ("h", h),
            ("L", self.l.clone()),
            ("K", self.k.clone()),
            ("M", self.m.clone()),
        ]
    }

    /// Name, exact radical form and decimal rendering at `self.precision`.
    pub fn decimal_views(&self) -> Vec<(&'static str, String, String)> {
        self.named()
            .into_iter()
            .map(|(name, v)| (name, v.radical_form(), v.to_decimal(self.precision)))
            .collect()
    }
}

/// `g₁ = (r₂ − z₂r₁) / (z₁(z₁−z₂))`, `g₂ = (z₁r₁ − r₂) / (z₂(z₁−z₂))`.
fn closed_form_coefficients(
    r1: &BigUint,
    r2: &BigUint,
    z1: &QuadraticNumber,
    z2: &QuadraticNumber,
) -> (QuadraticNumber, QuadraticNumber) {
    let r1 = BigRational::from_integer(BigInt::from(r1.clone()));
    let r2 = BigRational::from_integer(BigInt::from(r2.clone()));
    let gap = z1 - z2;
    let g1 = &(-(z2 * &r1) + &r2) / &(z1 * &gap);
    let g2 = &(&(z1 * &r1) - &r2) / &(z2 * &gap);
    (g1, g2)
}

pub fn spectral_constants(pq: SchlafliSymbol, precision: usize) -> Result<SpectralConstants> {
    pq.require_tree_recursion()?;
    if pq.geometry() == Geometry::Euclidean {
        return Err(Error::RepeatedEigenvalue {
            p: pq.p(),
            q: pq.q(),
        });
    }
    if precision == 0 {
        return Err(Error::Precondition(
            "precision must be at least 1 digit".into(),
        ));
    }
    let c = pq.trace();
    let radicand = BigInt::from(c * c - 4);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let sqrt_d = QuadraticNumber::sqrt_of(radicand.clone())
        .expect("c² − 4 lies strictly between (c−1)² and c² for c ≥ 3");
    let c_q = QuadraticNumber::from_integer(c, radicand.clone()).expect("valid radicand");
    let z1 = &(&c_q + &sqrt_d) * &half;
    let z2 = &(&c_q - &sqrt_d) * &half;

    let counts = layer_counts(pq, 2)?;
    let (g_a1, g_a2) = closed_form_coefficients(&counts[1].a, &counts[2].a, &z1, &z2);
    let (g_b1, g_b2) = closed_form_coefficients(&counts[1].b, &counts[2].b, &z1, &z2);
    let (g_ab1, g_ab2) = closed_form_coefficients(&counts[1].total(), &counts[2].total(), &z1, &z2);

    let one = BigRational::one();
    let h = BigRational::new(BigInt::from(pq.q() - 2), BigInt::from(pq.q() - 3));
    let l = &g_b1 / &g_a1;
    let k = &l / &(&l + &one);
    let hl = &l * &h;
    let m = &hl / &(&hl + &one);

    Ok(SpectralConstants {
        symbol: pq,
        c,
        radicand,
        z1,
        z2,
        g_a1,
        g_a2,
        g_b1,
        g_b2,
        g_ab1,
        g_ab2,
        h,
        l,
        k,
        m,
        precision,
    })
}

/// `g₁z₁ⁱ + g₂z₂ⁱ`, which must come out as a non-negative integer.
pub fn closed_form_count(
    consts: &SpectralConstants,
    level: usize,
    which: Sequence,
) -> Result<BigInt> {
    if level == 0 {
        return Err(Error::Precondition(
            "the closed form holds for levels ≥ 1".into(),
        ));
    }
    let exp = u32::try_from(level)
        .map_err(|_| Error::Precondition(format!("level {level} too large")))?;
    let (g1, g2) = consts.coefficients(which);
    let value = &(g1 * &consts.z1.pow(exp)) + &(g2 * &consts.z2.pow(exp));
    value
        .to_integer()
        .ok_or_else(|| Error::NonIntegralClosedForm {
            level,
            value: value.radical_form(),
        })
}

/// Closed-form values for levels `1..=n`, with the powers of `z₁`, `z₂`
/// accumulated level by level.
pub fn closed_form_counts(
    consts: &SpectralConstants,
    n: usize,
    which: Sequence,
) -> Result<Vec<BigInt>> {
    let (g1, g2) = consts.coefficients(which);
    let mut p1 = consts.z1.clone();
    let mut p2 = consts.z2.clone();
    let mut out = Vec::with_capacity(n);
    for level in 1..=n {
        let value = &(g1 * &p1) + &(g2 * &p2);
        out.push(
            value
                .to_integer()
                .ok_or_else(|| Error::NonIntegralClosedForm {
                    level,
                    value: value.radical_form(),
                })?,
        );
        p1 = &p1 * &consts.z1;
        p2 = &p2 * &consts.z2;
    }
    Ok(out)
}

/// `r(i+1) / r(i)` as an exact rational.
pub fn growth_ratio(pq: SchlafliSymbol, level: usize, which: Sequence) -> Result<BigRational> {
    if level == 0 {
        return Err(Error::Precondition("growth ratio needs level ≥ 1".into()));
    }
    let counts = layer_counts(pq, level + 1)?;
    let num = which.of(&counts[level + 1]);
    let den = which.of(&counts[level]);
    Ok(BigRational::new(num.into(), den.into()))
}

/// `|r(i+1)/r(i) − z₁|`, exactly.
pub fn growth_ratio_error(
    consts: &SpectralConstants,
    level: usize,
    which: Sequence,
) -> Result<QuadraticNumber> {
    let ratio = growth_ratio(consts.symbol, level, which)?;
    Ok((&consts.z1 - &ratio).abs())
}

/// `bᵢ / Σ_{j≤i} bⱼ`.
pub fn cumulative_root_ratio(pq: SchlafliSymbol, level: usize) -> Result<BigRational> {
    if level == 0 {
        return Err(Error::Precondition(
            "cumulative root ratio is degenerate at level 0".into(),
        ));
    }
    if pq.geometry() == Geometry::Euclidean {
        return Err(Error::RepeatedEigenvalue {
            p: pq.p(),
            q: pq.q(),
        });
    }
    let counts = layer_counts(pq, level)?;
    let sum: BigUint = counts.iter().map(|c| &c.b).sum();
    Ok(BigRational::new(counts[level].b.clone().into(), sum.into()))
}
