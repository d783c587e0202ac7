//! Operations on oriented representatives shared by the plain and hairy
//! complexes: vertex splitting, insertion and the passage to orbit-sum
//! coefficients.

use num_bigint::BigInt;

use crate::exact::Rational;
use crate::graphkit::{Cell, End, Graph, LinearCombo, ParityContext, RawGraph};

/// Prepends the cell created by a splitting: the new vertex when vertices
/// are odd, the new edge when edges are odd.
fn prepend_new_cell(
    cells: &[Cell],
    ctx: &ParityContext,
    new_vertex: usize,
    new_edge: usize,
) -> Vec<Cell> {
    let mut out = Vec::with_capacity(cells.len() + 1);
    if ctx.vertex_odd() {
        out.push(Cell::Vertex(new_vertex));
    } else {
        out.push(Cell::Edge(new_edge));
    }
    out.extend_from_slice(cells);
    out
}

/// All splitting terms of `raw`, each with sign `+1`.
///
/// Internal vertex `v` becomes `v` and a new last vertex `w` joined by a new
/// last edge `v -> w`; the half-edges at `v` are shared out in all unordered
/// ways with both shares nonempty. In hairy contexts every external vertex is
/// split as well: its half-edge moves to a new internal vertex `w` and the
/// new edge runs from the external vertex to `w`.
pub(crate) fn split_terms(raw: &RawGraph, ctx: &ParityContext) -> Vec<RawGraph> {
    let mut out = Vec::new();
    let w = raw.l;
    let e0 = raw.edges.len();
    for v in 0..raw.l {
        let mut halves = Vec::new();
        for (i, &(a, b)) in raw.edges.iter().enumerate() {
            if a == End::Int(v) {
                halves.push((i, 0));
            }
            if b == End::Int(v) {
                halves.push((i, 1));
            }
        }
        let rest = halves.len() - 1;
        assert!(rest < 24, "vertex of valence {} is too large", halves.len());
        for mask in 1u32..(1 << rest) {
            let mut edges = raw.edges.clone();
            for (bit, &(i, side)) in halves[1..].iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    if side == 0 {
                        edges[i].0 = End::Int(w);
                    } else {
                        edges[i].1 = End::Int(w);
                    }
                }
            }
            edges.push((End::Int(v), End::Int(w)));
            out.push(RawGraph {
                l: raw.l + 1,
                x: raw.x,
                edges,
                cells: prepend_new_cell(&raw.cells, ctx, w, e0),
            });
        }
    }
    if ctx.is_hairy() {
        for j in 0..raw.x {
            let mut edges = raw.edges.clone();
            let i = edges
                .iter()
                .position(|&(a, b)| a == End::Ext(j) || b == End::Ext(j))
                .expect("external vertex without edge");
            if edges[i].0 == End::Ext(j) {
                edges[i].0 = End::Int(w);
            } else {
                edges[i].1 = End::Int(w);
            }
            edges.push((End::Ext(j), End::Int(w)));
            out.push(RawGraph {
                l: raw.l + 1,
                x: raw.x,
                edges,
                cells: prepend_new_cell(&raw.cells, ctx, w, e0),
            });
        }
    }
    out
}

/// Removes `target` from a cell list after moving it to the end, returning
/// the remaining cells and the sign of the move.
fn pull_out(cells: &[Cell], target: Cell) -> (Vec<Cell>, i32) {
    match cells.iter().position(|&c| c == target) {
        None => (cells.to_vec(), 1),
        Some(p) => {
            let after = cells.len() - 1 - p;
            let mut rest = cells.to_vec();
            rest.remove(p);
            (rest, if after % 2 == 0 { 1 } else { -1 })
        }
    }
}

/// Terms of `alpha • beta` in a non-hairy context: `beta` is plugged into
/// each vertex `v` of `alpha` and every half-edge at `v` is reattached to any
/// vertex of `beta`.
pub(crate) fn insert_terms_gc(alpha: &RawGraph, beta: &RawGraph) -> Vec<(RawGraph, i32)> {
    let mut out = Vec::new();
    let (la, lb) = (alpha.l, beta.l);
    let ka = alpha.edges.len();
    for v in 0..la {
        let (acells, sign) = pull_out(&alpha.cells, Cell::Vertex(v));
        let map_a = |u: usize| if u < v { u } else { u - 1 };
        let halves: Vec<(usize, usize)> = alpha
            .edges
            .iter()
            .enumerate()
            .flat_map(|(i, &(a, b))| {
                let mut h = Vec::new();
                if a == End::Int(v) {
                    h.push((i, 0));
                }
                if b == End::Int(v) {
                    h.push((i, 1));
                }
                h
            })
            .collect();
        let mut cells = Vec::with_capacity(acells.len() + beta.cells.len());
        for c in &acells {
            cells.push(match *c {
                Cell::Vertex(u) => Cell::Vertex(map_a(u)),
                c => c,
            });
        }
        for c in &beta.cells {
            cells.push(match *c {
                Cell::Vertex(u) => Cell::Vertex(u + la - 1),
                Cell::Edge(e) => Cell::Edge(e + ka),
                c => c,
            });
        }
        let bedges: Vec<(End, End)> = beta
            .edges
            .iter()
            .map(|&(a, b)| (shift_int(a, la - 1), shift_int(b, la - 1)))
            .collect();
        // odometer over targets in beta
        let mut target = vec![0usize; halves.len()];
        loop {
            let mut edges: Vec<(End, End)> = alpha
                .edges
                .iter()
                .map(|&(a, b)| {
                    let m = |e: End| match e {
                        End::Int(u) if u != v => End::Int(map_a(u)),
                        e => e,
                    };
                    (m(a), m(b))
                })
                .collect();
            for (t, &(i, side)) in target.iter().zip(&halves) {
                let end = End::Int(la - 1 + t);
                if side == 0 {
                    edges[i].0 = end;
                } else {
                    edges[i].1 = end;
                }
            }
            edges.extend_from_slice(&bedges);
            out.push((
                RawGraph {
                    l: la - 1 + lb,
                    x: 0,
                    edges,
                    cells: cells.clone(),
                },
                sign,
            ));
            let mut i = 0;
            loop {
                if i == target.len() {
                    break;
                }
                target[i] += 1;
                if target[i] < lb {
                    break;
                }
                target[i] = 0;
                i += 1;
            }
            if i == target.len() {
                break;
            }
        }
    }
    out
}

fn shift_int(e: End, by: usize) -> End {
    match e {
        End::Int(u) => End::Int(u + by),
        e => e,
    }
}

/// Terms of `alpha • beta` in a hairy context: each hair (external vertex)
/// of `alpha` is attached to each internal vertex of `beta`.
pub(crate) fn insert_terms_hairy(alpha: &RawGraph, beta: &RawGraph) -> Vec<(RawGraph, i32)> {
    let mut out = Vec::new();
    let (la, lb) = (alpha.l, beta.l);
    let ka = alpha.edges.len();
    let xa = alpha.x;
    for j in 0..xa {
        let (acells, sign) = pull_out(&alpha.cells, Cell::Ext(j));
        let map_x = |i: usize| if i < j { i } else { i - 1 };
        let mut cells = Vec::with_capacity(acells.len() + beta.cells.len());
        for c in &acells {
            cells.push(match *c {
                Cell::Ext(i) => Cell::Ext(map_x(i)),
                c => c,
            });
        }
        for c in &beta.cells {
            cells.push(match *c {
                Cell::Vertex(u) => Cell::Vertex(u + la),
                Cell::Edge(e) => Cell::Edge(e + ka),
                Cell::Ext(i) => Cell::Ext(i + xa - 1),
            });
        }
        let bedges: Vec<(End, End)> = beta
            .edges
            .iter()
            .map(|&(a, b)| {
                let m = |e: End| match e {
                    End::Int(u) => End::Int(u + la),
                    End::Ext(i) => End::Ext(i + xa - 1),
                };
                (m(a), m(b))
            })
            .collect();
        for u in 0..lb {
            let mut edges: Vec<(End, End)> = alpha
                .edges
                .iter()
                .map(|&(a, b)| {
                    let m = |e: End| match e {
                        End::Ext(i) if i == j => End::Int(la + u),
                        End::Ext(i) => End::Ext(map_x(i)),
                        e => e,
                    };
                    (m(a), m(b))
                })
                .collect();
            edges.extend_from_slice(&bedges);
            out.push((
                RawGraph {
                    l: la + lb,
                    x: xa - 1 + beta.x,
                    edges,
                    cells: cells.clone(),
                },
                sign,
            ));
        }
    }
    out
}

/// Adds `scale * sign * [term]` for every raw term, in orbit-sum coordinates:
/// a raw term canonicalizing to `G` with sign `s` contributes
/// `scale * s * orbit_weight(G)` to the coefficient of `G`.
pub(crate) fn collect(
    terms: impl IntoIterator<Item = (RawGraph, i32)>,
    ctx: &ParityContext,
    scale: &Rational,
    out: &mut LinearCombo,
) {
    let mut acc: std::collections::HashMap<Graph, (BigInt, BigInt)> = Default::default();
    for (raw, s) in terms {
        if let Some(t) = crate::graphkit::canon_raw_internal(&raw, ctx) {
            let entry = acc
                .entry(t.graph.clone())
                .or_insert_with(|| (BigInt::from(0), t.weight()));
            entry.0 += s * t.sign;
        }
    }
    for (g, (count, w)) in acc {
        if count != BigInt::from(0) {
            out.add_term(g, scale * Rational::from_integer(count * w));
        }
    }
}

/// `1 / orbit_weight(g)` as a rational.
pub(crate) fn inv_weight(g: &Graph) -> Rational {
    Rational::new(BigInt::from(1), crate::graphkit::orbit_weight(g))
}
