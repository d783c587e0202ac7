use num_bigint::BigInt;

use super::canon::{canonical_labeling, Multi};
use super::{is_connected, Cell, End, Graph, GraphError, ParityContext, RawGraph};

/// Canonical representative of a raw graph together with the sign relating
/// the raw orientation to the reference orientation of the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalTerm {
    pub graph: Graph,
    pub sign: i32,
    /// Number of vertex automorphisms (hair counts preserved).
    pub aut: usize,
}

impl CanonicalTerm {
    /// See [`orbit_weight`].
    pub fn weight(&self) -> BigInt {
        weight_from(&self.graph, self.aut)
    }
}

fn weight_from(g: &Graph, aut: usize) -> BigInt {
    if g.is_segment() {
        return BigInt::from(2);
    }
    let mut w = BigInt::from(aut);
    for h in g.hairs() {
        for i in 2..=h {
            w *= i;
        }
    }
    w
}

/// The factor between a graph's reference representative and the orbit-sum
/// basis vector used for all user-facing coefficients:
/// `|Aut_V| * prod_v (hairs at v)!`, and 2 for the segment.
pub fn orbit_weight(g: &Graph) -> BigInt {
    if g.is_segment() {
        return BigInt::from(2);
    }
    weight_from(g, automorphism_count(g))
}

pub fn automorphism_count(g: &Graph) -> usize {
    if g.is_segment() {
        return 1;
    }
    canonical_labeling(&multi_of_graph(g)).autos.len()
}

fn multi_of_graph(g: &Graph) -> Multi {
    let mut m = Multi::new(g.l());
    for (u, v) in g.edges() {
        m.add_edge(u, v);
    }
    for (u, h) in g.hairs().enumerate() {
        m.color[u] = h as u16;
    }
    m
}

fn multi_of_raw(raw: &RawGraph) -> Multi {
    let mut m = Multi::new(raw.l);
    for &(a, b) in &raw.edges {
        match (a, b) {
            (End::Int(u), End::Int(v)) => m.add_edge(u, v),
            (End::Int(u), End::Ext(_)) | (End::Ext(_), End::Int(u)) => m.color[u] += 1,
            _ => {}
        }
    }
    m
}

/// True if some symmetry that fixes every vertex reverses the orientation:
/// a tadpole when edges carry direction signs, two parallel edges or two
/// tadpoles at a vertex when edges are odd, two hairs at a vertex when hairs
/// are odd.
fn locally_zero(m: &Multi, ctx: &ParityContext) -> bool {
    let l = m.l;
    for u in 0..l {
        let t = m.adj[u * l + u];
        if t > 0 && ctx.flip_odd() {
            return true;
        }
        if ctx.edge_odd() {
            if t >= 2 {
                return true;
            }
            if (u + 1..l).any(|v| m.adj[u * l + v] >= 2) {
                return true;
            }
        }
        if ctx.hairs_odd() && m.color[u] >= 2 {
            return true;
        }
    }
    false
}

/// Parity of a permutation given as a sequence of distinct `0..len` values.
fn permutation_odd(seq: &[usize]) -> bool {
    let mut seen = vec![false; seq.len()];
    let mut odd = false;
    for i in 0..seq.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = seq[j];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Sign of `raw` relative to the reference orientation of `target`, where
/// `perm` relabels raw internal vertices so that the underlying graph becomes
/// `target`. Parallel edges and hairs are matched in occurrence order.
fn orientation_sign(raw: &RawGraph, perm: &[usize], target: &Graph, ctx: &ParityContext) -> i32 {
    let l = raw.l;
    let k = target.k();
    let nedges = raw.edges.len();
    let ebase = if ctx.vertex_odd() { l } else { 0 };
    let xbase = ebase + if ctx.edge_odd() { nedges } else { 0 };

    // first canonical position of each internal edge and of each vertex's hairs
    let tedges = target.raw_edges();
    let mut next_hair = Vec::with_capacity(l);
    let mut acc = k;
    for h in target.raw_hairs() {
        next_hair.push(acc);
        acc += *h as usize;
    }
    let mut used = vec![false; k];
    let mut edge_pos = vec![0usize; nedges];
    let mut ext_pos = vec![0usize; raw.x];
    let mut flips = 0usize;
    for (i, &(a, b)) in raw.edges.iter().enumerate() {
        match (a, b) {
            (End::Int(u), End::Int(v)) => {
                let (pu, pv) = (perm[u], perm[v]);
                if pu > pv {
                    flips += 1;
                }
                let key = (pu.min(pv) as u8, pu.max(pv) as u8);
                let mut p = tedges.partition_point(|e| *e < key);
                while used[p] {
                    p += 1;
                }
                debug_assert_eq!(tedges[p], key);
                used[p] = true;
                edge_pos[i] = p;
            }
            (End::Int(u), End::Ext(j)) | (End::Ext(j), End::Int(u)) => {
                if matches!(a, End::Ext(_)) {
                    flips += 1;
                }
                let pu = perm[u];
                let p = next_hair[pu];
                next_hair[pu] += 1;
                edge_pos[i] = p;
                ext_pos[j] = p - k;
            }
            (End::Ext(ja), End::Ext(jb)) => {
                edge_pos[i] = 0;
                ext_pos[ja] = 0;
                ext_pos[jb] = 1;
            }
        }
    }
    let seq: Vec<usize> = raw
        .cells
        .iter()
        .map(|c| match *c {
            Cell::Vertex(u) => perm[u],
            Cell::Edge(e) => ebase + edge_pos[e],
            Cell::Ext(j) => xbase + ext_pos[j],
        })
        .collect();
    let mut odd = permutation_odd(&seq);
    if ctx.flip_odd() && flips % 2 == 1 {
        odd = !odd;
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Canonicalizes without validity checks beyond debug assertions. Returns
/// `None` when the oriented graph is zero.
pub(crate) fn canon_raw(raw: &RawGraph, ctx: &ParityContext) -> Option<CanonicalTerm> {
    debug_assert!(raw.check(ctx).is_ok(), "{:?}", raw.check(ctx));
    if raw.l == 0 {
        if !ctx.segment_exists() {
            return None;
        }
        let g = Graph::segment();
        let sign = orientation_sign(raw, &[], &g, ctx);
        return Some(CanonicalTerm {
            graph: g,
            sign,
            aut: 1,
        });
    }
    let m = multi_of_raw(raw);
    if locally_zero(&m, ctx) {
        return None;
    }
    let lab = canonical_labeling(&m);
    let l = raw.l;
    let mut edges = Vec::new();
    let mut hairs = vec![0u8; l];
    for &(a, b) in &raw.edges {
        match (a, b) {
            (End::Int(u), End::Int(v)) => edges.push((lab.perm[u] as u8, lab.perm[v] as u8)),
            (End::Int(u), End::Ext(_)) | (End::Ext(_), End::Int(u)) => hairs[lab.perm[u]] += 1,
            _ => unreachable!(),
        }
    }
    let g = Graph::from_parts(l, edges, hairs);
    if lab.autos.len() > 1 {
        let reference = g.to_raw(ctx);
        for sigma in &lab.autos {
            if sigma.iter().enumerate().all(|(i, &s)| i == s) {
                continue;
            }
            let moved = relabel(&reference, sigma);
            let ident: Vec<usize> = (0..l).collect();
            if orientation_sign(&moved, &ident, &g, ctx) < 0 {
                return None;
            }
        }
    }
    let sign = orientation_sign(raw, &lab.perm, &g, ctx);
    Some(CanonicalTerm {
        graph: g,
        sign,
        aut: lab.autos.len(),
    })
}

fn relabel(raw: &RawGraph, sigma: &[usize]) -> RawGraph {
    let map = |e: End| match e {
        End::Int(u) => End::Int(sigma[u]),
        x => x,
    };
    RawGraph {
        l: raw.l,
        x: raw.x,
        edges: raw.edges.iter().map(|&(a, b)| (map(a), map(b))).collect(),
        cells: raw
            .cells
            .iter()
            .map(|c| match *c {
                Cell::Vertex(u) => Cell::Vertex(sigma[u]),
                c => c,
            })
            .collect(),
    }
}

fn check_valid(g: &Graph, ctx: &ParityContext) -> Result<(), GraphError> {
    if g.is_segment() {
        return Ok(());
    }
    if let Some(v) = (0..g.l()).find(|&v| g.valence(v) < ctx.min_valence) {
        return Err(GraphError::InvalidGraph(format!(
            "vertex {v} has valence {} < {}",
            g.valence(v),
            ctx.min_valence
        )));
    }
    if !ctx.allow_tadpoles && g.has_tadpole() {
        return Err(GraphError::InvalidGraph("tadpoles are not allowed".into()));
    }
    if !is_connected(g) {
        return Err(GraphError::InvalidGraph("graph is disconnected".into()));
    }
    Ok(())
}

/// Canonical representative and sign of an oriented graph, or `None` if the
/// graph has an orientation reversing automorphism.
pub fn canonicalize(
    raw: &RawGraph,
    ctx: &ParityContext,
) -> Result<Option<(Graph, i32)>, GraphError> {
    ctx.validate()?;
    raw.check(ctx)?;
    check_valid(&raw.underlying(), ctx)?;
    Ok(canon_raw(raw, ctx).map(|t| (t.graph, t.sign)))
}

/// Like [`canonicalize`] but without the valence, tadpole and connectivity
/// checks, for intermediate terms that are expected to cancel.
pub fn canonicalize_relaxed(
    raw: &RawGraph,
    ctx: &ParityContext,
) -> Result<Option<CanonicalTerm>, GraphError> {
    raw.check(ctx)?;
    Ok(canon_raw(raw, ctx))
}

/// Canonicalizes a labeled graph taken with its reference orientation.
pub fn canonicalize_graph(
    g: &Graph,
    ctx: &ParityContext,
) -> Result<Option<(Graph, i32)>, GraphError> {
    canonicalize(&g.to_raw(ctx), ctx)
}

pub(crate) fn is_valid(g: &Graph, ctx: &ParityContext) -> bool {
    check_valid(g, ctx).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn theta() -> Graph {
        Graph::new(2, &[(0, 1), (0, 1), (0, 1)], &[]).unwrap()
    }

    #[test]
    fn spec_examples() {
        // theta, n even: parallel edges are odd
        assert_eq!(
            canonicalize_graph(&theta(), &ParityContext::gc(2)).unwrap(),
            None
        );
        let t = canonicalize_graph(&theta(), &ParityContext::gc(3)).unwrap();
        assert!(t.is_some());
        let l3 = Graph::loop_graph(3);
        let (g, s) = canonicalize_graph(&l3, &ParityContext::gc2(3))
            .unwrap()
            .unwrap();
        assert_eq!((g, s), (l3.clone(), 1));
        // with odd edges the rotation of L_3 is an even permutation but the
        // reflection swaps one pair of edges
        assert_eq!(
            canonicalize_graph(&l3, &ParityContext::gc2(2)).unwrap(),
            None
        );
        let tad = Graph::new(1, &[(0, 0)], &[]).unwrap();
        let ctx = ParityContext::gc(3).with_tadpoles(true);
        let ctx1 = ParityContext {
            min_valence: 2,
            ..ctx
        };
        assert_eq!(canonicalize_graph(&tad, &ctx1).unwrap(), None);
    }

    #[test]
    fn invalid_graphs_are_rejected() {
        let ctx = ParityContext::gc(3);
        assert!(canonicalize_graph(&Graph::loop_graph(3), &ctx).is_err());
        let tad = Graph::new(2, &[(0, 0), (0, 1), (1, 1), (0, 1)], &[]).unwrap();
        assert!(canonicalize_graph(&tad, &ctx.with_tadpoles(false)).is_err());
    }

    #[test]
    fn k4_symmetry() {
        // K4 survives in both parities, its hairy version too
        let k4 = Graph::complete(4);
        assert!(canonicalize_graph(&k4, &ParityContext::gc(2))
            .unwrap()
            .is_some());
        assert!(canonicalize_graph(&k4, &ParityContext::gc(3))
            .unwrap()
            .is_some());
        assert_eq!(automorphism_count(&k4), 24);
        assert_eq!(orbit_weight(&Graph::star(3)), BigInt::from(6));
        assert_eq!(orbit_weight(&Graph::segment()), BigInt::from(2));
    }

    #[test]
    fn segment_rule() {
        for (m, n) in [(2, 4), (3, 5), (2, 5), (3, 4), (1, 3), (2, 3)] {
            let ctx = ParityContext::hgc(m, n);
            let r = canonicalize_graph(&Graph::segment(), &ctx).unwrap();
            assert_eq!(r.is_some(), (n - m) % 2 == 0);
            if let Some((_, s)) = r {
                assert_eq!(s, 1);
                // reversing the edge costs the same as swapping the labels of
                // the two ends, so the end swap is a symmetry of sign +1
                let mut raw = Graph::segment().to_raw(&ctx);
                raw.edges[0] = (End::Ext(1), End::Ext(0));
                let swapped = canon_raw(&raw, &ctx).unwrap();
                let expect = if ctx.flip_odd() { -1 } else { 1 };
                assert_eq!(swapped.sign, expect);
                assert_eq!(expect, if ctx.ext_odd() { -1 } else { 1 });
            }
        }
    }

    /// A random relabeling, edge reversal and cell shuffle of a reference
    /// orientation, with the sign it should carry.
    fn scramble<R: Rng>(g: &Graph, ctx: &ParityContext, rng: &mut R) -> (RawGraph, i32) {
        let raw = g.to_raw(ctx);
        let mut perm: Vec<usize> = (0..raw.l).collect();
        perm.shuffle(rng);
        let mut xperm: Vec<usize> = (0..raw.x).collect();
        xperm.shuffle(rng);
        let mut eperm: Vec<usize> = (0..raw.edges.len()).collect();
        eperm.shuffle(rng);
        let mut sign = 1;
        let mut edges = vec![(End::Int(0), End::Int(0)); raw.edges.len()];
        for (i, &(a, b)) in raw.edges.iter().enumerate() {
            let map = |e: End| match e {
                End::Int(u) => End::Int(perm[u]),
                End::Ext(j) => End::Ext(xperm[j]),
            };
            let (mut a, mut b) = (map(a), map(b));
            if rng.gen_bool(0.5) {
                std::mem::swap(&mut a, &mut b);
                if ctx.flip_odd() {
                    sign = -sign;
                }
            }
            edges[eperm[i]] = (a, b);
        }
        let mut cells: Vec<Cell> = raw
            .cells
            .iter()
            .map(|c| match *c {
                Cell::Vertex(u) => Cell::Vertex(perm[u]),
                Cell::Edge(e) => Cell::Edge(eperm[e]),
                Cell::Ext(j) => Cell::Ext(xperm[j]),
            })
            .collect();
        // random transpositions of cells
        for _ in 0..cells.len() {
            if cells.len() < 2 {
                break;
            }
            let i = rng.gen_range(0..cells.len());
            let j = rng.gen_range(0..cells.len());
            if i != j {
                cells.swap(i, j);
                sign = -sign;
            }
        }
        (
            RawGraph {
                l: raw.l,
                x: raw.x,
                edges,
                cells,
            },
            sign,
        )
    }

    #[test]
    fn signs_are_functorial_under_relabeling() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let samples = [
            Graph::complete(4),
            Graph::new(
                4,
                &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)],
                &[1, 0, 0, 1],
            )
            .unwrap(),
            Graph::new(3, &[(0, 1), (1, 2), (0, 2), (0, 0)], &[0, 1, 2]).unwrap(),
            Graph::hedgehog(5),
            Graph::star(4),
            Graph::new(2, &[(0, 1), (0, 1), (0, 1)], &[1, 0]).unwrap(),
        ];
        for ctx in [
            ParityContext::hgc2(2, 4),
            ParityContext::hgc2(3, 4),
            ParityContext::hgc2(2, 5),
            ParityContext::hgc2(3, 5),
        ] {
            for g in &samples {
                let Some(base) = canon_raw(&g.to_raw(&ctx), &ctx) else {
                    continue;
                };
                // idempotent
                let again = canon_raw(&base.graph.to_raw(&ctx), &ctx).unwrap();
                assert_eq!((&again.graph, again.sign), (&base.graph, 1));
                for _ in 0..30 {
                    let (raw, s) = scramble(g, &ctx, &mut rng);
                    let t = canon_raw(&raw, &ctx).unwrap();
                    assert_eq!(t.graph, base.graph, "{g} in {ctx:?}");
                    assert_eq!(t.sign, s * base.sign, "{g} in {ctx:?}");
                }
            }
        }
    }
}
