use std::fmt;
use std::str::FromStr;

use super::GraphError;

/// A labeled multigraph with hairs, or the degenerate segment.
///
/// Edges are unordered pairs stored as `(u, v)` with `u <= v` and kept
/// sorted; `u == v` is a tadpole. `hairs[u]` counts the hairs at `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    segment: bool,
    l: usize,
    edges: Vec<(u8, u8)>,
    hairs: Vec<u8>,
}

impl Graph {
    pub fn new(l: usize, edges: &[(usize, usize)], hairs: &[usize]) -> Result<Graph, GraphError> {
        if l == 0 {
            return Err(GraphError::InvalidGraph(
                "a graph needs an internal vertex (use Graph::segment)".into(),
            ));
        }
        if l > 250 {
            return Err(GraphError::InvalidGraph(format!(
                "{l} vertices is too many"
            )));
        }
        let hairs = if hairs.is_empty() {
            vec![0; l]
        } else {
            hairs.to_vec()
        };
        if hairs.len() != l {
            return Err(GraphError::InvalidGraph(format!(
                "{} hair counts for {l} vertices",
                hairs.len()
            )));
        }
        let mut es = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= l || v >= l {
                return Err(GraphError::InvalidGraph(format!(
                    "edge {u}-{v} out of range"
                )));
            }
            es.push((u.min(v) as u8, u.max(v) as u8));
        }
        es.sort_unstable();
        if hairs.iter().any(|&h| h > 250) {
            return Err(GraphError::InvalidGraph("too many hairs".into()));
        }
        Ok(Graph {
            segment: false,
            l,
            edges: es,
            hairs: hairs.into_iter().map(|h| h as u8).collect(),
        })
    }

    pub(crate) fn from_parts(l: usize, mut edges: Vec<(u8, u8)>, hairs: Vec<u8>) -> Graph {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        Graph {
            segment: false,
            l,
            edges,
            hairs,
        }
    }

    /// The line graph: one edge between two external vertices.
    pub fn segment() -> Graph {
        Graph {
            segment: true,
            l: 0,
            edges: Vec::new(),
            hairs: Vec::new(),
        }
    }

    /// Loop graph with `r` vertices (a tadpole for `r = 1`).
    pub fn loop_graph(r: usize) -> Graph {
        assert!(r >= 1);
        let edges: Vec<_> = (0..r).map(|i| (i, (i + 1) % r)).collect();
        Graph::new(r, &edges, &[]).unwrap()
    }

    /// Complete graph on `l` vertices.
    pub fn complete(l: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..l {
            for j in i + 1..l {
                edges.push((i, j));
            }
        }
        Graph::new(l, &edges, &[]).unwrap()
    }

    /// One vertex carrying `h` hairs.
    pub fn star(h: usize) -> Graph {
        Graph::new(1, &[], &[h]).unwrap()
    }

    /// Cycle of `k` vertices with one hair each.
    pub fn hedgehog(k: usize) -> Graph {
        let mut g = Graph::loop_graph(k);
        g.hairs = vec![1; k];
        g
    }

    pub fn is_segment(&self) -> bool {
        self.segment
    }

    /// Number of internal vertices.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of internal edges (hairs excluded).
    pub fn k(&self) -> usize {
        self.edges.len()
    }

    /// Number of hairs; the segment counts as one hair.
    pub fn h(&self) -> usize {
        if self.segment {
            1
        } else {
            self.hairs.iter().map(|&x| x as usize).sum()
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn hairs(&self) -> impl Iterator<Item = usize> + '_ {
        self.hairs.iter().map(|&h| h as usize)
    }

    pub fn hairs_at(&self, v: usize) -> usize {
        self.hairs[v] as usize
    }

    pub(crate) fn raw_edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub(crate) fn raw_hairs(&self) -> &[u8] {
        &self.hairs
    }

    /// Edge endpoints (tadpoles twice) plus hairs.
    pub fn valence(&self, v: usize) -> usize {
        let mut d = self.hairs[v] as usize;
        for &(a, b) in &self.edges {
            if a as usize == v {
                d += 1;
            }
            if b as usize == v {
                d += 1;
            }
        }
        d
    }

    pub fn min_valence(&self) -> Option<usize> {
        (0..self.l).map(|v| self.valence(v)).min()
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|(a, b)| a == b)
    }

    /// Canonical text encoding, e.g. `G l=2 h=1,0 e=0-1,0-1,1-1`.
    pub fn encode(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segment {
            return f.write_str("SEG");
        }
        write!(f, "G l={} h=", self.l)?;
        for (i, h) in self.hairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{h}")?;
        }
        f.write_str(" e=")?;
        for (i, (u, v)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}-{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Graph, GraphError> {
        let bad = || GraphError::Parse(s.to_string());
        let s = s.trim();
        if s == "SEG" {
            return Ok(Graph::segment());
        }
        let mut parts = s.split(' ');
        if parts.next() != Some("G") {
            return Err(bad());
        }
        let l: usize = parts
            .next()
            .and_then(|p| p.strip_prefix("l="))
            .and_then(|p| p.parse().ok())
            .ok_or_else(bad)?;
        let hs = parts
            .next()
            .and_then(|p| p.strip_prefix("h="))
            .ok_or_else(bad)?;
        let es = parts
            .next()
            .and_then(|p| p.strip_prefix("e="))
            .ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let hairs = if hs.is_empty() {
            Vec::new()
        } else {
            hs.split(',')
                .map(|x| x.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        };
        let edges = if es.is_empty() {
            Vec::new()
        } else {
            es.split(',')
                .map(|e| {
                    let (a, b) = e.split_once('-').ok_or_else(bad)?;
                    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
                })
                .collect::<Result<Vec<(usize, usize)>, GraphError>>()?
        };
        if hairs.len() != l {
            return Err(bad());
        }
        Graph::new(l, &edges, &hairs)
    }
}

/// `k - l + 1`; the segment has loop order 0.
pub fn loop_order(g: &Graph) -> usize {
    if g.segment {
        return 0;
    }
    (g.k() + 1)
        .checked_sub(g.l)
        .expect("loop order of a disconnected graph")
}

/// Connectivity over internal vertices. Hairs never disconnect.
pub fn is_connected(g: &Graph) -> bool {
    if g.segment || g.l <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..g.l).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut comps = g.l;
    for &(a, b) in &g.edges {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let g = Graph::new(3, &[(1, 0), (2, 2), (0, 1)], &[1, 0, 2]).unwrap();
        let s = g.encode();
        assert_eq!(s, "G l=3 h=1,0,2 e=0-1,0-1,2-2");
        assert_eq!(s.parse::<Graph>().unwrap(), g);
        assert_eq!("SEG".parse::<Graph>().unwrap(), Graph::segment());
        assert_eq!(Graph::star(3).encode(), "G l=1 h=3 e=");
        assert!("G l=2 h=0 e=".parse::<Graph>().is_err());
        assert!("G l=1 h=0 e=0-1".parse::<Graph>().is_err());
    }

    #[test]
    fn loop_orders() {
        assert_eq!(loop_order(&Graph::complete(4)), 3);
        assert_eq!(loop_order(&Graph::hedgehog(5)), 1);
        assert_eq!(loop_order(&Graph::star(3)), 0);
        assert_eq!(loop_order(&Graph::segment()), 0);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&Graph::complete(4)));
        let two_triangles =
            Graph::new(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], &[]).unwrap();
        assert!(!is_connected(&two_triangles));
        assert!(is_connected(&Graph::star(3)));
        assert!(is_connected(&Graph::segment()));
    }

    #[test]
    fn valences() {
        let g = Graph::new(2, &[(0, 0), (0, 1)], &[0, 2]).unwrap();
        assert_eq!(g.valence(0), 3);
        assert_eq!(g.valence(1), 3);
        assert!(g.has_tadpole());
        assert_eq!(g.h(), 2);
    }
}
