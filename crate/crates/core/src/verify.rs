//! Three-way cross-validation: mosaic enumeration, integer recursion and
//! spectral closed form, plus forest histograms against the exact
//! root-level distribution.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::forest::Forest;
use crate::mosaic::{Mosaic, VertexId, DEFAULT_VERTEX_CAP};
use crate::probability::{exact_distribution, histogram_distribution};
use crate::recurrence::{
    closed_form_counts, euclidean_counts, layer_counts, spectral_constants, Sequence,
};
use crate::symbol::{Geometry, SchlafliSymbol};

/// The symbols checked when none are given.
pub const DEFAULT_SYMBOLS: [(u32, u32); 6] = [(4, 5), (5, 4), (4, 6), (6, 4), (5, 5), (4, 4)];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub levels: usize,
    pub vertex_cap: u64,
    /// Closed form is compared with the recursion on levels `1..=closed_form_levels`.
    pub closed_form_levels: usize,
    /// Delete one forest edge from the mosaic before growing; every run
    /// with this set must fail.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            levels: 5,
            vertex_cap: DEFAULT_VERTEX_CAP,
            closed_form_levels: 200,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SymbolReport {
    pub symbol: SchlafliSymbol,
    pub levels: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SymbolReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

/// Runs every symbol independently; the output keeps the input order.
pub fn verify_symbols(symbols: &[SchlafliSymbol], options: &VerifyOptions) -> Vec<SymbolReport> {
    symbols
        .par_iter()
        .map(|&pq| verify_symbol(pq, options))
        .collect()
}

pub fn verify_symbol(pq: SchlafliSymbol, options: &VerifyOptions) -> SymbolReport {
    let mut report = SymbolReport {
        symbol: pq,
        levels: options.levels,
        checks: Vec::new(),
    };
    let mut record = |name, result: Result<String, String>| {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        report.checks.push(CheckOutcome {
            name,
            passed,
            detail,
        });
    };
    let levels = options.levels;

    let counts = match layer_counts(pq, options.closed_form_levels.max(levels)) {
        Ok(c) => c,
        Err(e) => {
            record("recursion", Err(e.to_string()));
            return report;
        }
    };
    let mut mosaic = match Mosaic::build_with_cap(pq, levels.max(1), options.vertex_cap) {
        Ok(m) => m,
        Err(e) => {
            record("mosaic build", Err(e.to_string()));
            return report;
        }
    };
    if options.inject_fault {
        inject_fault(&mut mosaic);
    }

    let validation = mosaic.validate();
    record(
        "mosaic invariants",
        if validation.is_ok() {
            Ok(format!(
                "{} vertices, {} cells",
                mosaic.vertex_count(),
                mosaic.cell_count()
            ))
        } else {
            Err(format!(
                "{} violations, first: {:?}",
                validation.violations.len(),
                validation.violations[0]
            ))
        },
    );

    let sizes = mosaic.layer_sizes();
    record(
        "layer sizes = a+b",
        first_mismatch(
            (0..=levels).map(|i| (BigInt::from(sizes[i]), BigInt::from(counts[i].total()))),
        ),
    );

    let forest = match Forest::grow(&mosaic, levels) {
        Ok(f) => f,
        Err(e) => {
            record("forest", Err(e.to_string()));
            return report;
        }
    };
    record(
        "forest (a,b) = recursion",
        (0..=levels)
            .find_map(|i| {
                let got = forest.counts(i).ok()?;
                (got.a != counts[i].a || got.b != counts[i].b).then(|| {
                    format!(
                        "level {i}: forest ({}, {}) vs recursion ({}, {})",
                        got.a, got.b, counts[i].a, counts[i].b
                    )
                })
            })
            .map_or_else(|| Ok(format!("levels 0..={levels}")), Err),
    );

    let n = options.closed_form_levels;
    record(
        "closed form = recursion",
        match pq.geometry() {
            Geometry::Euclidean => first_mismatch(
                (1..=n).map(|i| (euclidean_counts(i).expect("i ≥ 1"), counts[i].clone())),
            )
            .map(|_| format!("affine formula on levels 1..={n}")),
            _ => closed_form_check(pq, &counts, n),
        },
    );

    record(
        "histogram = exact distribution",
        (1..=levels)
            .find_map(|i| {
                let hist = forest.root_level_histogram(i).ok()?;
                let empirical = histogram_distribution(pq, i, &hist).ok()?;
                let exact = exact_distribution(pq, i, &counts[..=i]).ok()?;
                (empirical.masses() != exact.masses()).then(|| format!("level {i} differs"))
            })
            .map_or_else(|| Ok(format!("levels 1..={levels}")), Err),
    );

    let violations = forest.audit();
    let s_i = (1..=levels).find_map(|i| {
        let expected = pq.q() as u64 * (pq.q() as u64 - 3).pow(i as u32 - 1);
        let got = forest.main_root_descendants(i).ok()?;
        (got != expected)
            .then(|| format!("level {i}: {got} main-root descendants, expected {expected}"))
    });
    record(
        "forest structure",
        match (violations.first(), s_i) {
            (Some(v), _) => Err(format!("{} violations, first: {v:?}", violations.len())),
            (None, Some(e)) => Err(e),
            (None, None) => Ok("fan-out, layers, leaves, main-root descendants".into()),
        },
    );

    record(
        "spanning tree",
        forest
            .spanning_tree(&mosaic)
            .map_err(|e| e.to_string())
            .and_then(|tree| {
                let edges: Vec<_> = tree.edges().collect();
                if edges.len() + 1 != tree.vertex_count {
                    return Err(format!(
                        "{} edges for {} vertices",
                        edges.len(),
                        tree.vertex_count
                    ));
                }
                if components(tree.vertex_count, &edges) != 1 {
                    return Err("not connected".into());
                }
                Ok(format!("{} edges", edges.len()))
            }),
    );
    report
}

fn closed_form_check(
    pq: SchlafliSymbol,
    counts: &[crate::recurrence::LayerCounts],
    n: usize,
) -> Result<String, String> {
    let consts = spectral_constants(pq, 6).map_err(|e| e.to_string())?;
    for which in [Sequence::A, Sequence::B] {
        let values = closed_form_counts(&consts, n, which).map_err(|e| e.to_string())?;
        first_mismatch(
            values
                .into_iter()
                .enumerate()
                .map(|(k, v)| (v, BigInt::from(which.of(&counts[k + 1])))),
        )
        .map_err(|e| format!("{which:?}: {e}"))?;
    }
    Ok(format!("levels 1..={n}"))
}

fn first_mismatch<T: PartialEq + std::fmt::Debug>(
    pairs: impl Iterator<Item = (T, T)>,
) -> Result<String, String> {
    let mut n = 0;
    for (i, (x, y)) in pairs.enumerate() {
        if x != y {
            return Err(format!("entry {i}: {x:?} vs {y:?}"));
        }
        n += 1;
    }
    Ok(format!("{n} entries"))
}

/// Connected components of an undirected graph on `0..n`.
fn components(n: usize, edges: &[(VertexId, VertexId)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// Removes the edge between the first outer-layer vertex that has an
/// upward neighbour and that neighbour.
fn inject_fault(mosaic: &mut Mosaic) {
    let outer = mosaic.belts();
    let range = mosaic.layer_range(outer).expect("outer layer");
    let target = range.clone().find_map(|v| {
        mosaic
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| mosaic.layer_of(w) + 1 == outer)
            .map(|w| (v, w))
    });
    if let Some((v, w)) = target {
        mosaic.remove_edge(v, w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_symbols_pass_at_four_levels() {
        let symbols: Vec<_> = DEFAULT_SYMBOLS
            .iter()
            .map(|&(p, q)| SchlafliSymbol::new(p, q).unwrap())
            .collect();
        let opts = VerifyOptions {
            levels: 4,
            closed_form_levels: 40,
            ..Default::default()
        };
        let reports = verify_symbols(&symbols, &opts);
        for (r, s) in reports.iter().zip(&symbols) {
            assert_eq!(r.symbol, *s);
            assert!(r.passed(), "{:#?}", r);
        }
    }

    #[test]
    fn injected_fault_fails() {
        let opts = VerifyOptions {
            levels: 3,
            closed_form_levels: 10,
            inject_fault: true,
            ..Default::default()
        };
        let r = verify_symbol(SchlafliSymbol::new(4, 5).unwrap(), &opts);
        assert!(!r.passed());
        assert!(r
            .checks
            .iter()
            .any(|c| c.name == "mosaic invariants" && !c.passed));
    }

    #[test]
    fn triangles_are_reported_not_verified() {
        let r = verify_symbol(
            SchlafliSymbol::new(3, 7).unwrap(),
            &VerifyOptions::default(),
        );
        assert!(!r.passed());
    }
}
