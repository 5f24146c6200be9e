use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Curvature class of a regular tessellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

/// A validated Schläfli symbol `{p,q}`: p-gon cells, q cells at every vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchlafliSymbol {
    p: u32,
    q: u32,
}

impl SchlafliSymbol {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p < 3 || q < 3 {
            return Err(Error::InvalidSymbol { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn geometry(self) -> Geometry {
        match ((self.p - 2) * (self.q - 2)).cmp(&4) {
            std::cmp::Ordering::Less => Geometry::Spherical,
            std::cmp::Ordering::Equal => Geometry::Euclidean,
            std::cmp::Ordering::Greater => Geometry::Hyperbolic,
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        self.geometry() == Geometry::Hyperbolic
    }

    /// Trace of the layer recursion matrix, `(p−2)(q−2) − 2`.
    pub fn trace(self) -> i64 {
        (self.p as i64 - 2) * (self.q as i64 - 2) - 2
    }

    /// The dual symbol `{q,p}`.
    pub fn dual(self) -> Self {
        Self {
            p: self.q,
            q: self.p,
        }
    }

    /// Both entries at least 4, as the layer recursion requires.
    pub(crate) fn require_tree_recursion(self) -> Result<()> {
        if self.q == 3 {
            return Err(Error::TrivalentVertices { p: self.p });
        }
        if self.p == 3 {
            return Err(Error::TriangularCells { q: self.q });
        }
        Ok(())
    }
}

impl fmt::Display for SchlafliSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.p, self.q)
    }
}

impl FromStr for SchlafliSymbol {
    type Err = Error;

    /// Accepts `p:q`, `p,q` or `{p,q}`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse Schläfli symbol '{s}'"));
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let (p, q) = inner
            .split_once(':')
            .or_else(|| inner.split_once(','))
            .ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let class = |p, q| SchlafliSymbol::new(p, q).unwrap().geometry();
        assert_eq!(class(4, 4), Geometry::Euclidean);
        assert_eq!(class(3, 6), Geometry::Euclidean);
        assert_eq!(class(6, 3), Geometry::Euclidean);
        assert_eq!(class(4, 5), Geometry::Hyperbolic);
        assert_eq!(class(3, 7), Geometry::Hyperbolic);
        assert_eq!(class(3, 5), Geometry::Spherical);
        assert_eq!(class(5, 3), Geometry::Spherical);
    }

    #[test]
    fn rejects_small_entries() {
        assert_eq!(
            SchlafliSymbol::new(2, 7),
            Err(Error::InvalidSymbol { p: 2, q: 7 })
        );
        assert!(SchlafliSymbol::new(5, 2).is_err());
    }

    #[test]
    fn parsing() {
        let s: SchlafliSymbol = "4:5".parse().unwrap();
        assert_eq!((s.p(), s.q()), (4, 5));
        assert_eq!("{5,4}".parse::<SchlafliSymbol>().unwrap(), s.dual());
        assert!("45".parse::<SchlafliSymbol>().is_err());
        assert_eq!(s.to_string(), "{4,5}");
        assert_eq!(s.trace(), 4);
    }
}
