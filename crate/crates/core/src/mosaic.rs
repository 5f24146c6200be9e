//! Belt-by-belt construction of a regular `{p,q}` tessellation as a planar map.
//!
//! Belt 0 is a single vertex. Belt `i+1` is every cell that touches the
//! outer boundary of belts `0..=i` (layer `i`) and is not already built.
//! The builder walks layer `i` counter-clockwise; every layer vertex still
//! missing `d` cells receives `d − 1` outward spokes, consecutive spokes
//! bound a vertex-attached cell, and a run of boundary edges between two
//! spoke-carrying vertices bounds an edge-attached cell. New vertices are
//! numbered in the order they appear along the new boundary, so every layer
//! is a contiguous, counter-clockwise id range.
//!
//! Cells are stored as counter-clockwise vertex cycles; the rotation system
//! (counter-clockwise neighbour order per vertex) is derived from them once
//! all belts are in place. For a vertex on the outer layer the list runs from
//! its forward boundary neighbour round to its backward one, and the outer
//! face sits in the gap.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};
use std::ops::Range;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::recurrence::layer_counts;
use crate::symbol::{Geometry, SchlafliSymbol};

pub type VertexId = u32;
pub type CellId = u32;

/// Default upper bound on the number of vertices a build may create.
pub const DEFAULT_VERTEX_CAP: u64 = 10_000_000;

/// How a cell of belt `i+1` meets layer `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attachment {
    /// Touches the previous layer in a single vertex.
    Vertex,
    /// Shares this many consecutive edges with the previous layer.
    Edges(u32),
}

#[derive(Debug, Clone)]
pub struct Mosaic {
    symbol: SchlafliSymbol,
    belts: usize,
    layer_of: Vec<u32>,
    /// Layer `i` is `layer_start[i]..layer_start[i + 1]`.
    layer_start: Vec<u32>,
    /// Counter-clockwise neighbours, `q` slots per vertex.
    rotation: Vec<VertexId>,
    degree: Vec<u32>,
    cell_vertices: Vec<VertexId>,
    cell_belt: Vec<u32>,
    cell_attachment: Vec<Attachment>,
    /// Belt `i` (i ≥ 1) is cells `belt_start[i - 1]..belt_start[i]`.
    belt_start: Vec<u32>,
}

impl Mosaic {
    /// Builds belts `0..=belts` with the default vertex cap.
    pub fn build(pq: SchlafliSymbol, belts: usize) -> Result<Self> {
        Self::build_with_cap(pq, belts, DEFAULT_VERTEX_CAP)
    }

    pub fn build_with_cap(pq: SchlafliSymbol, belts: usize, cap: u64) -> Result<Self> {
        if pq.geometry() == Geometry::Spherical {
            return Err(Error::Spherical {
                p: pq.p(),
                q: pq.q(),
            });
        }
        if belts == 0 {
            return Err(Error::Precondition(
                "a mosaic needs at least one belt".into(),
            ));
        }
        let cap = cap.min(u32::MAX as u64);
        if let Ok(counts) = layer_counts(pq, belts) {
            let projected: u64 = counts
                .iter()
                .map(|c| c.total().to_u64().unwrap_or(u64::MAX))
                .fold(0u64, u64::saturating_add);
            if projected > cap {
                return Err(Error::VertexCapExceeded { projected, cap });
            }
        }
        let mut builder = Builder::new(pq, cap);
        builder.first_belt()?;
        for belt in 2..=belts {
            builder.next_belt(belt)?;
        }
        Ok(builder.finish(belts))
    }

    pub fn symbol(&self) -> SchlafliSymbol {
        self.symbol
    }

    /// Number of belts built (not counting belt 0).
    pub fn belts(&self) -> usize {
        self.belts
    }

    pub fn vertex_count(&self) -> usize {
        self.layer_of.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cell_belt.len()
    }

    pub fn edge_count(&self) -> usize {
        self.degree.iter().map(|&d| d as usize).sum::<usize>() / 2
    }

    pub fn main_root(&self) -> VertexId {
        0
    }

    pub fn layer_of(&self, v: VertexId) -> usize {
        self.layer_of[v as usize] as usize
    }

    /// Id range of layer `i`, in counter-clockwise boundary order.
    pub fn layer_range(&self, i: usize) -> Result<Range<VertexId>> {
        if i > self.belts {
            return Err(Error::LevelOutOfRange {
                level: i,
                max: self.belts,
            });
        }
        Ok(self.layer_start[i]..self.layer_start[i + 1])
    }

    /// Layer `i` as an ordered vertex list; layer 0 is the main root alone.
    pub fn layer(&self, i: usize) -> Result<Vec<VertexId>> {
        Ok(self.layer_range(i)?.collect())
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layer_start
            .windows(2)
            .map(|w| (w[1] - w[0]) as usize)
            .collect()
    }

    /// Cells per belt; index 0 is belt 0 (the fixed vertex, no cells).
    pub fn belt_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0];
        let mut prev = 0;
        for &end in &self.belt_start {
            sizes.push((end - prev) as usize);
            prev = end;
        }
        sizes
    }

    /// Counter-clockwise neighbours of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let q = self.symbol.q() as usize;
        let start = v as usize * q;
        &self.rotation[start..start + self.degree[v as usize] as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v as usize] as usize
    }

    pub fn cell(&self, c: CellId) -> &[VertexId] {
        let p = self.symbol.p() as usize;
        &self.cell_vertices[c as usize * p..(c as usize + 1) * p]
    }

    pub fn cell_belt(&self, c: CellId) -> usize {
        self.cell_belt[c as usize] as usize
    }

    pub fn cell_attachment(&self, c: CellId) -> Attachment {
        self.cell_attachment[c as usize]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).contains(&v)
    }

    /// Deletes the edge `u v` from both rotations. Intended for fault
    /// injection; the result no longer passes [`Mosaic::validate`].
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let a = self.detach(u, v);
        let b = self.detach(v, u);
        a && b
    }

    fn detach(&mut self, from: VertexId, to: VertexId) -> bool {
        let q = self.symbol.q() as usize;
        let start = from as usize * q;
        let deg = self.degree[from as usize] as usize;
        let slot = &mut self.rotation[start..start + deg];
        match slot.iter().position(|&x| x == to) {
            Some(pos) => {
                slot[pos..].rotate_left(1);
                self.degree[from as usize] -= 1;
                true
            }
            None => false,
        }
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() as VertexId {
            let mut higher: Vec<VertexId> = self
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&v| v > u)
                .collect();
            higher.sort_unstable();
            out.extend(higher.into_iter().map(|v| (u, v)));
        }
        out
    }

    /// Plain edge list: a `#` header with the symbol and sizes, then one
    /// `u v` pair per line.
    pub fn write_edge_list<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let edges = self.edges();
        writeln!(
            out,
            "# p={} q={} belts={} vertices={} edges={}",
            self.symbol.p(),
            self.symbol.q(),
            self.belts,
            self.vertex_count(),
            edges.len()
        )?;
        for (u, v) in edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// Checks every structural invariant and lists what fails.
    pub fn validate(&self) -> ValidationReport {
        validate::run(self)
    }
}

struct Builder {
    pq: SchlafliSymbol,
    cap: u64,
    layer_of: Vec<u32>,
    layer_start: Vec<u32>,
    /// Cells incident to each vertex so far.
    incidence: Vec<u32>,
    cell_vertices: Vec<VertexId>,
    cell_belt: Vec<u32>,
    cell_attachment: Vec<Attachment>,
    belt_start: Vec<u32>,
}

impl Builder {
    fn new(pq: SchlafliSymbol, cap: u64) -> Self {
        Self {
            pq,
            cap,
            layer_of: vec![0],
            layer_start: vec![0, 1],
            incidence: vec![0],
            cell_vertices: Vec::new(),
            cell_belt: Vec::new(),
            cell_attachment: Vec::new(),
            belt_start: Vec::new(),
        }
    }

    fn vertex(&mut self, layer: usize) -> Result<VertexId> {
        let id = self.layer_of.len() as u64;
        if id >= self.cap {
            return Err(Error::VertexCapExceeded {
                projected: id + 1,
                cap: self.cap,
            });
        }
        self.layer_of.push(layer as u32);
        self.incidence.push(0);
        Ok(id as VertexId)
    }

    fn fresh(&mut self, layer: usize, n: usize) -> Result<Vec<VertexId>> {
        (0..n).map(|_| self.vertex(layer)).collect()
    }

    fn cell(&mut self, belt: usize, attachment: Attachment, cycle: &[VertexId]) {
        debug_assert_eq!(cycle.len(), self.pq.p() as usize);
        for &v in cycle {
            self.incidence[v as usize] += 1;
        }
        self.cell_vertices.extend_from_slice(cycle);
        self.cell_belt.push(belt as u32);
        self.cell_attachment.push(attachment);
    }

    fn close_belt(&mut self) {
        self.layer_start.push(self.layer_of.len() as u32);
        self.belt_start.push(self.cell_belt.len() as u32);
    }

    /// q cells around the fixed vertex.
    fn first_belt(&mut self) -> Result<()> {
        let (p, q) = (self.pq.p() as usize, self.pq.q() as usize);
        let first = self.vertex(1)?;
        let mut spoke = first;
        for t in 0..q {
            let fresh = self.fresh(1, p - 3)?;
            let next = if t + 1 == q { first } else { self.vertex(1)? };
            let mut cycle = Vec::with_capacity(p);
            cycle.push(0);
            cycle.push(spoke);
            cycle.extend_from_slice(&fresh);
            cycle.push(next);
            self.cell(1, Attachment::Vertex, &cycle);
            spoke = next;
        }
        self.close_belt();
        Ok(())
    }

    fn next_belt(&mut self, belt: usize) -> Result<()> {
        let (p, q) = (self.pq.p() as i64, self.pq.q());
        let degenerate = |reason: String| Error::DegenerateFrontier { belt, reason };
        let boundary: Vec<VertexId> =
            (self.layer_start[belt - 1]..self.layer_start[belt]).collect();
        let n = boundary.len();

        let missing: Vec<u32> = boundary
            .iter()
            .map(|&v| q.saturating_sub(self.incidence[v as usize]))
            .collect();
        if let Some(j) = missing.iter().position(|&d| d == 0) {
            return Err(degenerate(format!(
                "boundary vertex {} already has all {q} cells",
                boundary[j]
            )));
        }
        let starts: Vec<usize> = (0..n).filter(|&j| missing[j] >= 2).collect();
        if starts.is_empty() {
            return Err(degenerate("no boundary vertex can carry a spoke".into()));
        }
        // Fresh vertices in the edge cell from starts[k] to the next start;
        // −1 means the two spokes coincide.
        let run_fresh = |k: usize| -> i64 {
            let from = starts[k];
            let to = if k + 1 < starts.len() {
                starts[k + 1]
            } else {
                starts[0] + n
            };
            p - (to - from + 1) as i64 - 2
        };
        let wrap_merges = run_fresh(starts.len() - 1) == -1;

        let first_spoke = self.vertex(belt)?;
        let mut carry = Some(first_spoke);
        for k in 0..starts.len() {
            let j = starts[k];
            let v = boundary[j];
            let spokes = missing[j] as usize - 1;
            let last_start = k + 1 == starts.len();

            let mut spoke = match carry.take() {
                Some(s) => s,
                None if last_start && wrap_merges && spokes == 1 => first_spoke,
                None => self.vertex(belt)?,
            };
            if last_start && wrap_merges && spokes == 1 && spoke != first_spoke {
                return Err(degenerate(format!(
                    "spokes {spoke} and {first_spoke} would have to be identified"
                )));
            }
            for t in 1..spokes {
                let fresh = self.fresh(belt, p as usize - 3)?;
                let next = if last_start && wrap_merges && t + 1 == spokes {
                    first_spoke
                } else {
                    self.vertex(belt)?
                };
                let mut cycle = Vec::with_capacity(p as usize);
                cycle.push(v);
                cycle.push(spoke);
                cycle.extend_from_slice(&fresh);
                cycle.push(next);
                self.cell(belt, Attachment::Vertex, &cycle);
                spoke = next;
            }

            // edge cell over the run boundary[j..=to]
            let fresh_count = run_fresh(k);
            if fresh_count < -1 {
                return Err(degenerate(format!(
                    "a {p}-gon cannot span the {} boundary vertices after {v}",
                    (p - fresh_count - 2)
                )));
            }
            let to = if last_start {
                starts[0] + n
            } else {
                starts[k + 1]
            };
            let mut cycle: Vec<VertexId> = (j..=to).rev().map(|t| boundary[t % n]).collect();
            cycle.push(spoke);
            if fresh_count >= 0 {
                let fresh = self.fresh(belt, fresh_count as usize)?;
                cycle.extend_from_slice(&fresh);
                let next_first = if last_start {
                    first_spoke
                } else {
                    let s = self.vertex(belt)?;
                    carry = Some(s);
                    s
                };
                cycle.push(next_first);
            } else if !last_start {
                carry = Some(spoke);
            }
            self.cell(belt, Attachment::Edges((to - j) as u32), &cycle);
        }

        if let Some(&v) = boundary.iter().find(|&&v| self.incidence[v as usize] != q) {
            return Err(degenerate(format!(
                "vertex {v} ends up with {} of {q} cells",
                self.incidence[v as usize]
            )));
        }
        let new_layer = self.layer_of.len() - self.layer_start[belt] as usize;
        if new_layer < 3 {
            return Err(degenerate(format!(
                "layer {belt} collapsed to {new_layer} vertices"
            )));
        }
        self.close_belt();
        Ok(())
    }

    fn finish(self, belts: usize) -> Mosaic {
        let (p, q) = (self.pq.p() as usize, self.pq.q() as usize);
        let nv = self.layer_of.len();
        // succ[w] = u at v for every cell (.., u, v, w, ..)
        let mut pairs: Vec<(VertexId, VertexId)> = vec![(0, 0); nv * q];
        let mut pair_count = vec![0u32; nv];
        for cycle in self.cell_vertices.chunks_exact(p) {
            for t in 0..p {
                let u = cycle[(t + p - 1) % p];
                let v = cycle[t] as usize;
                let w = cycle[(t + 1) % p];
                pairs[v * q + pair_count[v] as usize] = (w, u);
                pair_count[v] += 1;
            }
        }
        let mut rotation = vec![0; nv * q];
        let mut degree = vec![0u32; nv];
        for v in 0..nv {
            let mine = &pairs[v * q..v * q + pair_count[v] as usize];
            if mine.is_empty() {
                continue;
            }
            let complete = mine.len() == q;
            let start = if complete {
                mine.iter().map(|&(w, _)| w).min().unwrap()
            } else {
                // the neighbour nobody precedes: forward boundary neighbour
                mine.iter()
                    .map(|&(w, _)| w)
                    .find(|w| !mine.iter().any(|&(_, u)| u == *w))
                    .expect("open fan has a first neighbour")
            };
            let slot = &mut rotation[v * q..(v + 1) * q];
            let mut cur = start;
            let mut len = 0;
            loop {
                slot[len] = cur;
                len += 1;
                let Some(&(_, u)) = mine.iter().find(|&&(w, _)| w == cur) else {
                    break;
                };
                if u == start || len == q {
                    break;
                }
                cur = u;
            }
            degree[v] = len as u32;
        }
        Mosaic {
            symbol: self.pq,
            belts,
            layer_of: self.layer_of,
            layer_start: self.layer_start,
            rotation,
            degree,
            cell_vertices: self.cell_vertices,
            cell_belt: self.cell_belt,
            cell_attachment: self.cell_attachment,
            belt_start: self.belt_start,
        }
    }
}

/// Which structural property a [`Violation`] concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    CellSize,
    Degree,
    Rotation,
    BoundarySimplicity,
    EdgeCoverage,
    LayerCycle,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::CellSize,
        Check::Degree,
        Check::Rotation,
        Check::BoundarySimplicity,
        Check::EdgeCoverage,
        Check::LayerCycle,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Element {
    Vertex(VertexId),
    Cell(CellId),
    Edge(VertexId, VertexId),
    Layer(usize),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(v) => write!(f, "vertex {v}"),
            Element::Cell(c) => write!(f, "cell {c}"),
            Element::Edge(u, v) => write!(f, "edge {u}-{v}"),
            Element::Layer(i) => write!(f, "layer {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: Check,
    pub element: Element,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed(&self, check: Check) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.check == check)
    }

    pub fn passed(&self, check: Check) -> bool {
        self.failed(check).next().is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in Check::ALL {
            let n = self.failed(check).count();
            writeln!(
                f,
                "{check:?}: {}",
                if n == 0 {
                    "ok".to_string()
                } else {
                    format!("{n} violations")
                }
            )?;
        }
        for v in &self.violations {
            writeln!(f, "  {:?} {}: {}", v.check, v.element, v.detail)?;
        }
        Ok(())
    }
}

mod validate {
    use super::*;

    const MAX_REPORTED: usize = 64;

    pub(super) fn run(m: &Mosaic) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut push = |check, element, detail: String| {
            if report.violations.len() < MAX_REPORTED {
                report.violations.push(Violation {
                    check,
                    element,
                    detail,
                });
            }
        };
        let (p, q) = (m.symbol.p() as usize, m.symbol.q() as usize);
        let nv = m.vertex_count();
        let outer = m.belts;

        // cells: p distinct vertices, consecutive ones adjacent
        let mut incidence = vec![0u32; nv];
        for c in 0..m.cell_count() as CellId {
            let cycle = m.cell(c);
            let mut sorted = cycle.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != p {
                push(
                    Check::CellSize,
                    Element::Cell(c),
                    format!("{} distinct vertices", sorted.len()),
                );
            }
            for t in 0..p {
                incidence[cycle[t] as usize] += 1;
                let (u, v) = (cycle[t], cycle[(t + 1) % p]);
                if !m.has_edge(u, v) {
                    push(
                        Check::CellSize,
                        Element::Cell(c),
                        format!("{u} and {v} are not adjacent"),
                    );
                }
            }
        }

        // degrees
        for v in 0..nv as VertexId {
            let (deg, cells) = (m.degree(v), incidence[v as usize] as usize);
            if m.layer_of(v) < outer {
                if deg != q || cells != q {
                    push(
                        Check::Degree,
                        Element::Vertex(v),
                        format!("degree {deg}, {cells} cells; expected {q}"),
                    );
                }
            } else if deg != cells + 1 || cells == 0 || cells >= q {
                push(
                    Check::Degree,
                    Element::Vertex(v),
                    format!("boundary vertex with degree {deg} and {cells} cells"),
                );
            }
        }

        // dart index: position of `to` in the rotation of `from`
        let dart = |from: VertexId, to: VertexId| -> Option<usize> {
            m.neighbors(from)
                .iter()
                .position(|&x| x == to)
                .map(|k| from as usize * q + k)
        };
        // face successor of dart u→v is v→pred_v(u)
        let face_next = |u: VertexId, v: VertexId| -> Option<VertexId> {
            let nb = m.neighbors(v);
            let k = nb.iter().position(|&x| x == u)?;
            Some(nb[(k + nb.len() - 1) % nb.len()])
        };

        let mut used = vec![0u8; nv * q];
        for c in 0..m.cell_count() as CellId {
            let cycle = m.cell(c);
            for t in 0..p {
                let (u, v, w) = (cycle[t], cycle[(t + 1) % p], cycle[(t + 2) % p]);
                if let Some(d) = dart(u, v) {
                    used[d] = used[d].saturating_add(1);
                }
                if face_next(u, v) != Some(w) {
                    push(
                        Check::Rotation,
                        Element::Cell(c),
                        format!("rotation at {v} does not turn from {u} to {w}"),
                    );
                }
            }
        }
        let mut coverage: HashMap<(VertexId, VertexId), u32> = HashMap::new();
        for v in 0..nv as VertexId {
            for (k, &w) in m.neighbors(v).iter().enumerate() {
                let d = v as usize * q + k;
                if used[d] > 1 {
                    push(
                        Check::Rotation,
                        Element::Edge(v, w),
                        format!("dart {v}→{w} lies on {} cells", used[d]),
                    );
                }
                *coverage.entry((v.min(w), v.max(w))).or_default() += used[d] as u32;
            }
        }

        // the darts left over must form exactly one face: the outer layer, clockwise
        let outer_range = m.layer_range(outer).expect("outer layer exists");
        let mut faces = 0;
        let mut outer_face_len = 0;
        let mut seen = used.iter().map(|&u| u > 0).collect::<Vec<_>>();
        for v in 0..nv as VertexId {
            for k in 0..m.degree(v) {
                if seen[v as usize * q + k] {
                    continue;
                }
                faces += 1;
                let (mut a, mut b) = (v, m.neighbors(v)[k]);
                let mut len = 0;
                while let Some(d) = dart(a, b) {
                    if seen[d] {
                        break;
                    }
                    seen[d] = true;
                    len += 1;
                    if !outer_range.contains(&a) {
                        push(
                            Check::Rotation,
                            Element::Vertex(a),
                            "outer face passes an inner vertex".into(),
                        );
                    }
                    let Some(c) = face_next(a, b) else { break };
                    (a, b) = (b, c);
                }
                outer_face_len = len;
            }
        }
        if faces != 1 || outer_face_len != outer_range.len() {
            push(
                Check::Rotation,
                Element::Layer(outer),
                format!("{faces} faces besides the cells (outer walk length {outer_face_len}, layer size {})", outer_range.len()),
            );
        }

        // each layer is a simple cycle in id order; the outer one bounds the map
        for i in 1..=outer {
            let range = m.layer_range(i).expect("layer exists");
            let ids: Vec<VertexId> = range.clone().collect();
            for (t, &v) in ids.iter().enumerate() {
                if m.layer_of(v) != i {
                    push(
                        Check::LayerCycle,
                        Element::Vertex(v),
                        format!("listed on layer {i}, tagged {}", m.layer_of(v)),
                    );
                }
                let w = ids[(t + 1) % ids.len()];
                if !m.has_edge(v, w) {
                    let check = if i == outer {
                        Check::BoundarySimplicity
                    } else {
                        Check::LayerCycle
                    };
                    push(
                        check,
                        Element::Edge(v, w),
                        format!("consecutive vertices of layer {i} are not adjacent"),
                    );
                }
            }
        }
        if m.layer(0).map(|l| l != vec![0]).unwrap_or(true) {
            push(
                Check::LayerCycle,
                Element::Layer(0),
                "layer 0 must be the main root".into(),
            );
        }

        for (&(u, v), &count) in &coverage {
            let boundary = outer_range.contains(&u) && outer_range.contains(&v) && {
                let n = outer_range.len() as VertexId;
                let (a, b) = (u - outer_range.start, v - outer_range.start);
                (a + 1) % n == b || (b + 1) % n == a
            };
            let expected = if boundary { 1 } else { 2 };
            if count != expected {
                push(
                    Check::EdgeCoverage,
                    Element::Edge(u, v),
                    format!("covered by {count} cells, expected {expected}"),
                );
            }
        }
        report
            .violations
            .sort_by_key(|v| (v.check as u8, format!("{}", v.element)));
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(p: u32, q: u32) -> SchlafliSymbol {
        SchlafliSymbol::new(p, q).unwrap()
    }

    #[test]
    fn first_belt_of_four_five() {
        let m = Mosaic::build(sym(4, 5), 1).unwrap();
        assert_eq!(m.belt_sizes(), vec![0, 5]);
        assert_eq!(m.layer_sizes(), vec![1, 10]);
        assert_eq!(m.layer(0).unwrap(), vec![0]);
        assert!(m.validate().is_ok(), "{}", m.validate());
    }

    #[test]
    fn square_grid_layers() {
        let m = Mosaic::build(sym(4, 4), 3).unwrap();
        assert_eq!(m.layer_sizes(), vec![1, 8, 16, 24]);
        assert_eq!(m.belt_sizes(), vec![0, 4, 12, 20]);
        assert!(m.validate().is_ok(), "{}", m.validate());
    }

    #[test]
    fn four_five_layers_match_totals() {
        let m = Mosaic::build(sym(4, 5), 5).unwrap();
        assert_eq!(m.layer_sizes(), vec![1, 10, 40, 150, 560, 2090]);
        assert_eq!(m.layer(2).unwrap().len(), 40);
        assert!(m.validate().is_ok(), "{}", m.validate());
    }

    #[test]
    fn layer_out_of_range() {
        let m = Mosaic::build(sym(4, 5), 2).unwrap();
        assert_eq!(
            m.layer(3).unwrap_err(),
            Error::LevelOutOfRange { level: 3, max: 2 }
        );
    }

    #[test]
    fn triangle_and_trivalent_symbols_build() {
        for (p, q, belts) in [
            (3, 7, 4),
            (3, 6, 4),
            (6, 3, 4),
            (7, 3, 4),
            (3, 8, 3),
            (8, 3, 4),
        ] {
            let m = Mosaic::build(sym(p, q), belts).unwrap();
            let report = m.validate();
            assert!(report.is_ok(), "{{{p},{q}}}: {report}");
        }
        // triangular grid: hexagonal rings of 6i vertices
        let tri = Mosaic::build(sym(3, 6), 4).unwrap();
        assert_eq!(tri.layer_sizes(), vec![1, 6, 12, 18, 24]);
    }

    #[test]
    fn spherical_and_empty_builds_are_rejected() {
        assert_eq!(
            Mosaic::build(sym(3, 5), 2).unwrap_err(),
            Error::Spherical { p: 3, q: 5 }
        );
        assert!(Mosaic::build(sym(4, 5), 0).is_err());
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let err = Mosaic::build_with_cap(sym(4, 5), 6, 1000).unwrap_err();
        assert!(matches!(err, Error::VertexCapExceeded { cap: 1000, .. }));
        // no projection for triangles: the builder stops on creation
        let err = Mosaic::build_with_cap(sym(3, 7), 8, 500).unwrap_err();
        assert!(matches!(err, Error::VertexCapExceeded { cap: 500, .. }));
    }

    #[test]
    fn removed_edge_is_reported_on_both_endpoints() {
        let mut m = Mosaic::build(sym(4, 5), 3).unwrap();
        let (u, v) = (0, m.neighbors(0)[0]);
        assert!(m.remove_edge(u, v));
        let report = m.validate();
        assert!(!report.is_ok());
        let named: Vec<Element> = report.failed(Check::Degree).map(|x| x.element).collect();
        assert!(named.contains(&Element::Vertex(u)));
        assert!(named.contains(&Element::Vertex(v)));
    }

    #[test]
    fn attachments_follow_the_frontier() {
        let m = Mosaic::build(sym(4, 5), 2).unwrap();
        let belt2: Vec<Attachment> = (0..m.cell_count() as CellId)
            .filter(|&c| m.cell_belt(c) == 2)
            .map(|c| m.cell_attachment(c))
            .collect();
        let edge = belt2
            .iter()
            .filter(|a| matches!(a, Attachment::Edges(1)))
            .count();
        let vertex = belt2.iter().filter(|a| **a == Attachment::Vertex).count();
        // one edge cell per layer-1 edge, d − 2 vertex cells at each layer-1 vertex
        assert_eq!(edge, 10);
        assert_eq!(vertex, 5 + 5 * 2);
    }

    #[test]
    fn edge_list_header() {
        let m = Mosaic::build(sym(4, 5), 1).unwrap();
        let mut buf = Vec::new();
        m.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "# p=4 q=5 belts=1 vertices=11 edges=15"
        );
        assert_eq!(lines.count(), 15);
    }

    #[test]
    fn builds_are_deterministic() {
        let a = Mosaic::build(sym(5, 4), 4).unwrap();
        let b = Mosaic::build(sym(5, 4), 4).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.cell_vertices, b.cell_vertices);
    }
}
