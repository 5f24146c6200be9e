//! The layered tree forest grown on a mosaic.
//!
//! Layer by layer, every vertex with a neighbour on the previous layer hangs
//! below that neighbour (class A); every other vertex starts a new tree
//! (class B, a root). Edges inside a layer are never used. For `p ≥ 4` a
//! layer vertex has at most one upward neighbour, so the forest is forced;
//! a second upward neighbour is reported as [`Error::AmbiguousParent`].

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::mosaic::{Mosaic, VertexId};
use crate::recurrence::LayerCounts;
use crate::symbol::SchlafliSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    /// Attached to a parent on the previous layer.
    A,
    /// Root of a tree.
    B,
}

/// How to treat layer vertices with several upward neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowMode {
    /// `p ≥ 4` only; parents are forced and ambiguity is an error.
    #[default]
    Strict,
    /// Opt-in mode for `p = 3`. Parents are picked greedily in boundary
    /// order: first a candidate that has no child yet and no later chance to
    /// get one, then any childless candidate, then the smallest id.
    TriangleGreedy,
}

#[derive(Debug, Clone)]
pub struct Forest {
    symbol: SchlafliSymbol,
    mode: GrowMode,
    levels: usize,
    layer_start: Vec<u32>,
    class: Vec<VertexClass>,
    parent: Vec<Option<VertexId>>,
    root: Vec<VertexId>,
    root_level: Vec<u32>,
    children: Vec<u32>,
}

impl Forest {
    /// Grows the forest over layers `0..=levels` of `mosaic`.
    pub fn grow(mosaic: &Mosaic, levels: usize) -> Result<Self> {
        Self::grow_with(mosaic, levels, GrowMode::Strict)
    }

    pub fn grow_with(mosaic: &Mosaic, levels: usize, mode: GrowMode) -> Result<Self> {
        let pq = mosaic.symbol();
        if pq.q() == 3 {
            return Err(Error::TrivalentVertices { p: pq.p() });
        }
        if pq.p() == 3 && mode == GrowMode::Strict {
            return Err(Error::TriangularCells { q: pq.q() });
        }
        if levels > mosaic.belts() {
            return Err(Error::LevelOutOfRange {
                level: levels,
                max: mosaic.belts(),
            });
        }
        let end = mosaic.layer_range(levels)?.end as usize;
        let mut forest = Forest {
            symbol: pq,
            mode,
            levels,
            layer_start: (0..=levels)
                .map(|i| mosaic.layer_range(i).map(|r| r.start))
                .collect::<Result<Vec<_>>>()?,
            class: vec![VertexClass::B; end],
            parent: vec![None; end],
            root: vec![0; end],
            root_level: vec![0; end],
            children: vec![0; end],
        };
        forest.layer_start.push(end as u32);

        for i in 1..=levels {
            let range = mosaic.layer_range(i)?;
            let upward: Vec<Vec<VertexId>> = range
                .clone()
                .map(|v| {
                    let mut up: Vec<VertexId> = mosaic
                        .neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&w| mosaic.layer_of(w) + 1 == i)
                        .collect();
                    up.sort_unstable();
                    up
                })
                .collect();

            let mut later = std::collections::HashMap::<VertexId, u32>::new();
            if mode == GrowMode::TriangleGreedy {
                for up in &upward {
                    for &c in up {
                        *later.entry(c).or_default() += 1;
                    }
                }
            }

            for (v, up) in range.zip(&upward) {
                let chosen = match (mode, up.len()) {
                    (_, 0) => None,
                    (_, 1) => Some(up[0]),
                    (GrowMode::Strict, count) => {
                        return Err(Error::AmbiguousParent {
                            vertex: v,
                            layer: i,
                            count,
                        })
                    }
                    (GrowMode::TriangleGreedy, _) => {
                        for c in up {
                            *later.get_mut(c).expect("counted above") -= 1;
                        }
                        let childless = |c: &&VertexId| forest.children[**c as usize] == 0;
                        up.iter()
                            .filter(childless)
                            .find(|c| later[c] == 0)
                            .or_else(|| up.iter().find(childless))
                            .or(up.first())
                            .copied()
                    }
                };
                let vi = v as usize;
                match chosen {
                    Some(parent) => {
                        forest.class[vi] = VertexClass::A;
                        forest.parent[vi] = Some(parent);
                        forest.root[vi] = forest.root[parent as usize];
                        forest.root_level[vi] = forest.root_level[parent as usize];
                        forest.children[parent as usize] += 1;
                    }
                    None => {
                        forest.root[vi] = v;
                        forest.root_level[vi] = i as u32;
                    }
                }
            }
        }
        Ok(forest)
    }

    pub fn symbol(&self) -> SchlafliSymbol {
        self.symbol
    }

    pub fn mode(&self) -> GrowMode {
        self.mode
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn vertex_count(&self) -> usize {
        self.class.len()
    }

    pub fn main_root(&self) -> VertexId {
        0
    }

    pub fn class(&self, v: VertexId) -> VertexClass {
        self.class[v as usize]
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v as usize]
    }

    pub fn root(&self, v: VertexId) -> VertexId {
        self.root[v as usize]
    }

    pub fn root_level(&self, v: VertexId) -> usize {
        self.root_level[v as usize] as usize
    }

    pub fn child_count(&self, v: VertexId) -> usize {
        self.children[v as usize] as usize
    }

    pub fn layer_of(&self, v: VertexId) -> usize {
        self.layer_start.partition_point(|&s| s <= v) - 1
    }

    fn range(&self, i: usize) -> Result<std::ops::Range<VertexId>> {
        if i > self.levels {
            return Err(Error::LevelOutOfRange {
                level: i,
                max: self.levels,
            });
        }
        Ok(self.layer_start[i]..self.layer_start[i + 1])
    }

    /// Empirical `(aᵢ, bᵢ)`.
    pub fn counts(&self, i: usize) -> Result<LayerCounts> {
        let (mut a, mut b) = (0u64, 0u64);
        for v in self.range(i)? {
            match self.class(v) {
                VertexClass::A => a += 1,
                VertexClass::B => b += 1,
            }
        }
        Ok(LayerCounts {
            level: i,
            a: BigUint::from(a),
            b: BigUint::from(b),
        })
    }

    /// Entry `j` counts the layer-`i` vertices whose root sits on level `j`.
    pub fn root_level_histogram(&self, i: usize) -> Result<Vec<u64>> {
        let mut hist = vec![0u64; i + 1];
        for v in self.range(i)? {
            hist[self.root_level(v)] += 1;
        }
        Ok(hist)
    }

    /// Layer-`i` vertices in the tree of the main root.
    pub fn main_root_descendants(&self, i: usize) -> Result<u64> {
        if i == 0 {
            return Err(Error::Precondition(
                "main root descendants are counted from level 1".into(),
            ));
        }
        Ok(self.range(i)?.filter(|&v| self.root(v) == 0).count() as u64)
    }

    /// Structural rules every grown forest must satisfy.
    pub fn audit(&self) -> Vec<ForestViolation> {
        let mut out = Vec::new();
        let q = self.symbol.q() as usize;
        for v in 0..self.vertex_count() as VertexId {
            let layer = self.layer_of(v);
            match (self.class(v), self.parent(v)) {
                (VertexClass::A, Some(parent)) => {
                    if self.layer_of(parent) + 1 != layer {
                        out.push(ForestViolation::ParentNotOnPreviousLayer { vertex: v, parent });
                    }
                }
                (VertexClass::B, None) => {}
                _ => out.push(ForestViolation::ClassParentMismatch { vertex: v }),
            }

            // parent chain ends at the recorded root
            let mut cur = v;
            let mut steps = 0;
            while let Some(parent) = self.parent(cur) {
                cur = parent;
                steps += 1;
                if steps > self.levels {
                    break;
                }
            }
            if cur != self.root(v) || self.layer_of(cur) != self.root_level(v) {
                out.push(ForestViolation::RootMismatch { vertex: v });
            }

            let children = self.child_count(v);
            if layer < self.levels {
                if children == 0 {
                    out.push(ForestViolation::LeafBeforeFinalLayer { vertex: v, layer });
                }
                if self.mode == GrowMode::Strict {
                    let expected = if v == 0 {
                        q
                    } else if self.class(v) == VertexClass::B {
                        q - 2
                    } else {
                        q - 3
                    };
                    if children != expected {
                        out.push(ForestViolation::FanOut {
                            vertex: v,
                            class: self.class(v),
                            children,
                            expected,
                        });
                    }
                }
            }
        }
        out
    }

    /// Forest edges plus one connector per non-main root: the root's
    /// same-layer edge to its counter-clockwise successor on the layer.
    pub fn spanning_tree(&self, mosaic: &Mosaic) -> Result<SpanningTree> {
        if mosaic.symbol() != self.symbol || mosaic.belts() < self.levels {
            return Err(Error::Precondition(
                "the forest was not grown on this mosaic".into(),
            ));
        }
        let mut forest_edges = Vec::new();
        let mut connectors = Vec::new();
        for v in 0..self.vertex_count() as VertexId {
            match self.parent(v) {
                Some(parent) => forest_edges.push((parent, v)),
                None if v != 0 => {
                    let range = self.range(self.layer_of(v))?;
                    let next = if v + 1 == range.end {
                        range.start
                    } else {
                        v + 1
                    };
                    if !mosaic.has_edge(v, next) {
                        return Err(Error::Precondition(format!(
                            "root {v} has no layer edge to {next}"
                        )));
                    }
                    connectors.push((v, next));
                }
                None => {}
            }
        }
        Ok(SpanningTree {
            vertex_count: self.vertex_count(),
            forest_edges,
            connectors,
        })
    }

    /// Graphviz rendering: A vertices are circles, roots boxes, the main
    /// root a filled box; every node carries `layer` and `class` attributes.
    pub fn to_dot(&self, options: &DotOptions) -> String {
        self.render_dot(options, None)
    }

    fn render_dot(&self, options: &DotOptions, spanning: Option<&SpanningTree>) -> String {
        let mut s = String::new();
        let name = options
            .graph_name
            .clone()
            .unwrap_or_else(|| format!("forest_{}_{}", self.symbol.p(), self.symbol.q()));
        let _ = writeln!(s, "graph {name} {{");
        let _ = writeln!(
            s,
            "  // {} levels={} vertices={}",
            self.symbol,
            self.levels,
            self.vertex_count()
        );
        let _ = writeln!(s, "  node [shape=circle, fontsize=10];");
        for i in 0..=self.levels {
            let range = self.layer_start[i]..self.layer_start[i + 1];
            if options.rank_by_layer {
                let _ = writeln!(s, "  subgraph layer_{i} {{");
                let _ = writeln!(s, "    rank=same;");
            }
            for v in range {
                let indent = if options.rank_by_layer { "    " } else { "  " };
                let (class, shape) = match self.class(v) {
                    VertexClass::A => ("A", "circle"),
                    VertexClass::B if v == 0 => ("B", "box, style=filled"),
                    VertexClass::B => ("B", "box"),
                };
                let _ = writeln!(
                    s,
                    "{indent}{v} [label=\"{v}\", layer={i}, class={class}, shape={shape}];"
                );
            }
            if options.rank_by_layer {
                let _ = writeln!(s, "  }}");
            }
        }
        for v in 0..self.vertex_count() as VertexId {
            if let Some(parent) = self.parent(v) {
                let _ = writeln!(s, "  {parent} -- {v};");
            }
        }
        if let Some(tree) = spanning {
            for &(root, next) in &tree.connectors {
                let _ = writeln!(s, "  {root} -- {next} [style=dashed];");
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct DotOptions {
    /// Defaults to `forest_<p>_<q>`.
    pub graph_name: Option<String>,
    /// Wrap each layer in a `rank=same` subgraph.
    pub rank_by_layer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForestViolation {
    ParentNotOnPreviousLayer {
        vertex: VertexId,
        parent: VertexId,
    },
    ClassParentMismatch {
        vertex: VertexId,
    },
    RootMismatch {
        vertex: VertexId,
    },
    LeafBeforeFinalLayer {
        vertex: VertexId,
        layer: usize,
    },
    FanOut {
        vertex: VertexId,
        class: VertexClass,
        children: usize,
        expected: usize,
    },
}

/// The forest joined into one tree over every grown vertex.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub vertex_count: usize,
    /// `(parent, child)`.
    pub forest_edges: Vec<(VertexId, VertexId)>,
    /// `(root, successor on its layer)`.
    pub connectors: Vec<(VertexId, VertexId)>,
}

impl SpanningTree {
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.forest_edges.iter().chain(&self.connectors).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.forest_edges.len() + self.connectors.len()
    }

    /// Forest rendering with connectors drawn dashed.
    pub fn to_dot(&self, forest: &Forest, options: &DotOptions) -> String {
        forest.render_dot(options, Some(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grown(p: u32, q: u32, levels: usize) -> (Mosaic, Forest) {
        let m = Mosaic::build(SchlafliSymbol::new(p, q).unwrap(), levels.max(1)).unwrap();
        let f = Forest::grow(&m, levels).unwrap();
        (m, f)
    }

    fn counts(f: &Forest, i: usize) -> (u64, u64) {
        let c = f.counts(i).unwrap();
        (c.a.try_into().unwrap(), c.b.try_into().unwrap())
    }

    #[test]
    fn four_five_rows() {
        let (_, f) = grown(4, 5, 4);
        assert_eq!(counts(&f, 0), (0, 1));
        assert_eq!(counts(&f, 1), (5, 5));
        assert_eq!(counts(&f, 4), (355, 205));
        assert!(f.audit().is_empty());
        assert!(f.counts(5).is_err());
    }

    #[test]
    fn first_level_is_q_and_q_p_minus_3() {
        for (p, q) in [(4, 5), (5, 4), (6, 7), (4, 4)] {
            let (_, f) = grown(p, q, 1);
            assert_eq!(counts(&f, 1), (q as u64, (q * (p - 3)) as u64));
        }
    }

    #[test]
    fn histogram_and_main_root() {
        let (_, f) = grown(4, 5, 5);
        let hist = f.root_level_histogram(3).unwrap();
        assert_eq!(hist, vec![20, 30, 45, 55]);
        assert_eq!(f.main_root_descendants(1).unwrap(), 5);
        assert_eq!(f.main_root_descendants(5).unwrap(), 5 * 2u64.pow(4));
        assert!(f.main_root_descendants(0).is_err());

        let (_, f) = grown(4, 6, 4);
        assert_eq!(f.main_root_descendants(4).unwrap(), 162);
    }

    #[test]
    fn degenerate_symbols() {
        let m = Mosaic::build(SchlafliSymbol::new(7, 3).unwrap(), 2).unwrap();
        assert_eq!(
            Forest::grow(&m, 2).unwrap_err(),
            Error::TrivalentVertices { p: 7 }
        );
        let m = Mosaic::build(SchlafliSymbol::new(3, 7).unwrap(), 2).unwrap();
        assert_eq!(
            Forest::grow(&m, 2).unwrap_err(),
            Error::TriangularCells { q: 7 }
        );
        assert!(Forest::grow(&m, 3).is_err());
    }

    #[test]
    fn triangle_mode_gives_a_single_tree() {
        for q in [7, 8] {
            let m = Mosaic::build(SchlafliSymbol::new(3, q).unwrap(), 4).unwrap();
            let f = Forest::grow_with(&m, 4, GrowMode::TriangleGreedy).unwrap();
            for i in 1..=4 {
                assert_eq!(f.counts(i).unwrap().b, BigUint::from(0u32));
            }
            assert!((0..f.vertex_count() as VertexId).all(|v| f.root(v) == 0));
            let t = f.spanning_tree(&m).unwrap();
            assert!(t.connectors.is_empty());
            assert_eq!(t.edge_count(), f.vertex_count() - 1);
        }
    }

    #[test]
    fn connectors_follow_the_layer() {
        let (m, f) = grown(4, 5, 2);
        let t = f.spanning_tree(&m).unwrap();
        assert_eq!(t.connectors.len(), 5 + 15);
        for &(r, next) in &t.connectors {
            assert_eq!(f.class(r), VertexClass::B);
            assert_eq!(f.layer_of(r), f.layer_of(next));
        }
        assert_eq!(t.edge_count(), f.vertex_count() - 1);
    }

    #[test]
    fn dot_is_deterministic() {
        let (_, f) = grown(4, 5, 2);
        let a = f.to_dot(&DotOptions::default());
        let b = f.to_dot(&DotOptions::default());
        assert_eq!(a, b);
        assert!(a.starts_with("graph forest_4_5 {"));
        assert_eq!(a.matches(" -- ").count(), 5 + 25);
    }
}
