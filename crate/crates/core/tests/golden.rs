//! Graphviz snapshots. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;

use mosaic_trees::forest::{DotOptions, Forest};
use mosaic_trees::mosaic::Mosaic;
use mosaic_trees::recurrence::layer_counts;
use mosaic_trees::SchlafliSymbol;

fn check(name: &str, p: u32, q: u32, levels: usize) {
    let pq = SchlafliSymbol::new(p, q).unwrap();
    let mosaic = Mosaic::build(pq, levels.max(1)).unwrap();
    let dot = Forest::grow(&mosaic, levels)
        .unwrap()
        .to_dot(&DotOptions::default());

    // Every non-root is the child end of exactly one edge.
    let counts = layer_counts(pq, levels).unwrap();
    let vertices: u64 = counts
        .iter()
        .map(|c| u64::try_from(c.total()).unwrap())
        .sum();
    let roots: u64 = counts.iter().map(|c| u64::try_from(&c.b).unwrap()).sum();
    assert_eq!(dot.matches(" -- ").count() as u64, vertices - roots);
    assert_eq!(dot.matches("class=B").count() as u64, roots);

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &dot).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert!(dot == expected, "{name} differs from the snapshot");
}

#[test]
fn four_five_three_levels() {
    check("forest_4_5_levels3.dot", 4, 5, 3);
}

#[test]
fn single_vertex() {
    check("forest_single_vertex.dot", 4, 5, 0);
}

#[test]
fn square_grid_three_levels() {
    check("forest_4_4_levels3.dot", 4, 4, 3);
}
