use super::{Graph, GraphError, ParityContext};

/// Endpoint of an edge: an internal vertex or an external (hair) vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Int(usize),
    Ext(usize),
}

/// A cell that may carry an orientation sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
    Ext(usize),
}

/// An oriented labeled graph.
///
/// Edges are directed from the first to the second endpoint. Each external
/// vertex is the endpoint of exactly one edge. `cells` lists every odd cell
/// of the context exactly once; its order is the orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawGraph {
    pub l: usize,
    pub x: usize,
    pub edges: Vec<(End, End)>,
    pub cells: Vec<Cell>,
}

impl RawGraph {
    /// Checks the structural invariants (not valence or connectivity).
    pub fn check(&self, ctx: &ParityContext) -> Result<(), GraphError> {
        let bad = |s: String| Err(GraphError::InvalidGraph(s));
        if self.x > 0 && !ctx.is_hairy() {
            return bad("hairs in a non-hairy context".into());
        }
        let mut ext_seen = vec![0u32; self.x];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            for e in [a, b] {
                match e {
                    End::Int(u) if u >= self.l => return bad(format!("edge {i} leaves the graph")),
                    End::Ext(j) if j >= self.x => return bad(format!("edge {i} leaves the graph")),
                    End::Ext(j) => ext_seen[j] += 1,
                    End::Int(_) => {}
                }
            }
            if matches!((a, b), (End::Ext(_), End::Ext(_)))
                && (self.l != 0 || self.edges.len() != 1)
            {
                return bad("an edge between two external vertices only forms the segment".into());
            }
        }
        if ext_seen.iter().any(|&c| c != 1) {
            return bad("external vertices must be univalent".into());
        }
        if self.l == 0 && !(self.x == 2 && self.edges.len() == 1) {
            return bad("a graph without internal vertices must be the segment".into());
        }
        let mut expect = 0;
        let mut seen_v = vec![false; self.l];
        let mut seen_e = vec![false; self.edges.len()];
        let mut seen_x = vec![false; self.x];
        for c in &self.cells {
            let slot = match *c {
                Cell::Vertex(u) if ctx.vertex_odd() && u < self.l => &mut seen_v[u],
                Cell::Edge(e) if ctx.edge_odd() && e < self.edges.len() => &mut seen_e[e],
                Cell::Ext(j) if ctx.ext_odd() && j < self.x => &mut seen_x[j],
                _ => return bad(format!("{c:?} is not an odd cell here")),
            };
            if *slot {
                return bad(format!("{c:?} listed twice"));
            }
            *slot = true;
        }
        if ctx.vertex_odd() {
            expect += self.l;
        }
        if ctx.edge_odd() {
            expect += self.edges.len();
        }
        if ctx.ext_odd() {
            expect += self.x;
        }
        if self.cells.len() != expect {
            return bad("orientation misses odd cells".into());
        }
        Ok(())
    }

    /// Number of half-edges at internal vertex `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == End::Int(v)) as usize + (b == End::Int(v)) as usize)
            .sum()
    }

    pub fn is_segment(&self) -> bool {
        self.l == 0
    }

    /// Drops the orientation.
    pub fn underlying(&self) -> Graph {
        if self.l == 0 {
            return Graph::segment();
        }
        let mut edges = Vec::new();
        let mut hairs = vec![0u8; self.l];
        for &(a, b) in &self.edges {
            match (a, b) {
                (End::Int(u), End::Int(v)) => edges.push((u as u8, v as u8)),
                (End::Int(u), End::Ext(_)) | (End::Ext(_), End::Int(u)) => hairs[u] += 1,
                (End::Ext(_), End::Ext(_)) => unreachable!("checked"),
            }
        }
        Graph::from_parts(self.l, edges, hairs)
    }
}

impl Graph {
    /// The reference orientation of this labeled graph: internal edges in
    /// sorted order directed low to high, then one hair edge per hair
    /// (vertex order) directed towards its external vertex; odd cells in the
    /// block order vertices, edges, external vertices.
    pub fn to_raw(&self, ctx: &ParityContext) -> RawGraph {
        let mut edges = Vec::with_capacity(self.k() + self.h());
        let x;
        if self.is_segment() {
            edges.push((End::Ext(0), End::Ext(1)));
            x = 2;
        } else {
            for (u, v) in self.edges() {
                edges.push((End::Int(u), End::Int(v)));
            }
            let mut j = 0;
            for (u, h) in self.hairs().enumerate() {
                for _ in 0..h {
                    edges.push((End::Int(u), End::Ext(j)));
                    j += 1;
                }
            }
            x = j;
        }
        let l = self.l();
        let mut cells = Vec::new();
        if ctx.vertex_odd() {
            cells.extend((0..l).map(Cell::Vertex));
        }
        if ctx.edge_odd() {
            cells.extend((0..edges.len()).map(Cell::Edge));
        }
        if ctx.ext_odd() {
            cells.extend((0..x).map(Cell::Ext));
        }
        RawGraph { l, x, edges, cells }
    }
}
