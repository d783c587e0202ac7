use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::canon::{canonical_labeling, Multi};
use super::orient::canon_raw;
use super::{Graph, ParityContext};

/// Connected graphs of a fixed loop order and hair count, grouped by vertex
/// count, up to isomorphism and before any sign or tadpole filtering.
/// `levels[l]` holds the graphs with `l` internal vertices.
#[derive(Clone, Debug)]
pub struct EnumerationLevels {
    pub levels: Vec<Vec<Graph>>,
}

/// Relabels `g` into its combinatorial canonical form (no orientation).
pub(crate) fn shape_canon(g: &Graph) -> Graph {
    let mut m = Multi::new(g.l());
    for (u, v) in g.edges() {
        m.add_edge(u, v);
    }
    for (u, h) in g.hairs().enumerate() {
        m.color[u] = h as u16;
    }
    let lab = canonical_labeling(&m);
    let edges = g
        .edges()
        .map(|(u, v)| (lab.perm[u] as u8, lab.perm[v] as u8))
        .collect();
    let mut hairs = vec![0u8; g.l()];
    for (u, h) in g.hairs().enumerate() {
        hairs[lab.perm[u]] = h as u8;
    }
    Graph::from_parts(g.l(), edges, hairs)
}

/// All ways of splitting vertex `v` of `g` into `v` and a new vertex joined
/// by an edge, keeping both at valence `>= min_valence`. Graphs are returned
/// in arbitrary labeling.
fn splits(g: &Graph, v: usize, min_valence: usize, out: &mut Vec<Graph>) {
    let l = g.l();
    let w = l as u8;
    let mut mult = vec![0usize; l];
    let mut tadpoles = 0;
    let mut rest: Vec<(u8, u8)> = Vec::new();
    for (a, b) in g.edges() {
        if a == v && b == v {
            tadpoles += 1;
        } else if a == v {
            mult[b] += 1;
        } else if b == v {
            mult[a] += 1;
        } else {
            rest.push((a as u8, b as u8));
        }
    }
    let hv = g.hairs_at(v);
    let nbrs: Vec<usize> = (0..l).filter(|&u| mult[u] > 0).collect();
    let total = g.valence(v);
    // odometer over the neighbor shares
    let mut share = vec![0usize; nbrs.len()];
    loop {
        let moved: usize = share.iter().sum();
        for t_new in 0..=tadpoles {
            for t_split in 0..=tadpoles - t_new {
                for jh in 0..=hv {
                    let new_val = moved + 2 * t_new + t_split + jh + 1;
                    let kept_val = total - (moved + 2 * t_new + t_split + jh) + 1;
                    if new_val < min_valence || kept_val < min_valence {
                        continue;
                    }
                    let mut edges = rest.clone();
                    for (i, &u) in nbrs.iter().enumerate() {
                        for _ in 0..share[i] {
                            edges.push((u as u8, w));
                        }
                        for _ in share[i]..mult[u] {
                            edges.push((u as u8, v as u8));
                        }
                    }
                    let t_keep = tadpoles - t_new - t_split;
                    edges.extend(std::iter::repeat((v as u8, v as u8)).take(t_keep));
                    edges.extend(std::iter::repeat((w, w)).take(t_new));
                    edges.extend(std::iter::repeat((v as u8, w)).take(t_split + 1));
                    let mut hairs: Vec<u8> = g.hairs().map(|h| h as u8).collect();
                    hairs[v] -= jh as u8;
                    hairs.push(jh as u8);
                    out.push(Graph::from_parts(l + 1, edges, hairs));
                }
            }
        }
        let mut i = 0;
        loop {
            if i == nbrs.len() {
                return;
            }
            if share[i] < mult[nbrs[i]] {
                share[i] += 1;
                break;
            }
            share[i] = 0;
            i += 1;
        }
    }
}

type LevelKey = (usize, usize, usize);

fn level_cache() -> &'static Mutex<HashMap<LevelKey, Arc<Vec<Vec<Graph>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<LevelKey, Arc<Vec<Vec<Graph>>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Connected multigraphs (tadpoles allowed) of loop order `g` with `h` hairs
/// and all vertices at valence `>= min_valence`, for `1 <= l <= l_max`.
///
/// Every such graph with `l + 1` vertices contracts along a non-tadpole edge
/// to a valid graph with `l` vertices, so splitting vertices level by level
/// starting from the single vertex reaches all of them.
pub fn enumerate_up_to(min_valence: usize, g: usize, h: usize, l_max: usize) -> EnumerationLevels {
    let key = (min_valence, g, h);
    let cached = level_cache().lock().unwrap().get(&key).cloned();
    let mut levels: Vec<Vec<Graph>> = match cached {
        Some(c) if c.len() > l_max => {
            return EnumerationLevels {
                levels: c[..=l_max].to_vec(),
            }
        }
        Some(c) => c.as_ref().clone(),
        None => {
            let start = Graph::new(1, &vec![(0, 0); g], &[h]).unwrap();
            let first = if 2 * g + h >= min_valence {
                vec![start]
            } else {
                vec![]
            };
            vec![vec![], first]
        }
    };
    let mut buf = Vec::new();
    while levels.len() <= l_max {
        let prev = levels.last().unwrap();
        let mut seen = HashSet::new();
        for gr in prev {
            for v in 0..gr.l() {
                buf.clear();
                splits(gr, v, min_valence, &mut buf);
                for s in buf.drain(..) {
                    seen.insert(shape_canon(&s));
                }
            }
        }
        let mut next: Vec<Graph> = seen.into_iter().collect();
        next.sort();
        levels.push(next);
    }
    level_cache()
        .lock()
        .unwrap()
        .insert(key, Arc::new(levels.clone()));
    levels.truncate(l_max + 1);
    EnumerationLevels { levels }
}

/// One canonical representative per isomorphism class of nonzero generators
/// with `l` internal vertices, `k` internal edges and `h` hairs, in a
/// deterministic order.
pub fn enumerate(ctx: &ParityContext, l: usize, k: usize, h: usize) -> Vec<Graph> {
    if ctx.validate().is_err() || (h > 0 && !ctx.is_hairy()) {
        return Vec::new();
    }
    if l == 0 {
        return if k == 0 && h == 1 && ctx.segment_exists() {
            vec![Graph::segment()]
        } else {
            Vec::new()
        };
    }
    if k + 1 < l {
        return Vec::new();
    }
    let g = k + 1 - l;
    let levels = enumerate_up_to(ctx.min_valence, g, h, l);
    let mut out: Vec<Graph> = levels.levels[l]
        .iter()
        .filter(|gr| ctx.allow_tadpoles || !gr.has_tadpole())
        .filter_map(|gr| canon_raw(&gr.to_raw(ctx), ctx).map(|t| t.graph))
        .collect();
    out.sort();
    out.dedup();
    out
}
