//! Shared generators and identity checks for the integration tests and the
//! acceptance runner.
#![allow(dead_code)]

use graphhom::exact::{q, RankStrategy, Rational};
use graphhom::gc::{bracket_gc, bracket_with_edge, diff_gc, insert, GcElement};
use graphhom::graphkit::{enumerate, ParityContext};
use graphhom::hgc::{bracket_hgc, diff_hgc, HairyElement};
use graphhom::homology::{build_block, euler_check, BlockKind};

pub fn koszul(p: i64) -> Rational {
    if p.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// Nonzero basis vectors of GC_n / GC2_n with loop order in `loops` and at
/// most `l_max` vertices.
pub fn gc_generators(
    ctx: ParityContext,
    loops: std::ops::RangeInclusive<usize>,
    l_max: usize,
) -> Vec<GcElement> {
    let mut out = Vec::new();
    for g in loops {
        for l in 1..=l_max {
            if l + g < 1 {
                continue;
            }
            for gr in enumerate(&ctx, l, l + g - 1, 0) {
                let x = GcElement::from_graph(ctx, &gr).unwrap();
                if !x.is_zero() {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Nonzero basis vectors of a hairy complex with loop order `<= g_max`,
/// `1..=h_max` hairs and at most `l_max` vertices, the segment included.
pub fn hgc_generators(
    ctx: ParityContext,
    g_max: usize,
    h_max: usize,
    l_max: usize,
) -> Vec<HairyElement> {
    let mut out = Vec::new();
    for g in 0..=g_max {
        for h in 1..=h_max {
            for l in 0..=l_max {
                if l + g < 1 {
                    continue;
                }
                for gr in enumerate(&ctx, l, l + g - 1, h) {
                    let x = HairyElement::from_graph(ctx, &gr).unwrap();
                    if !x.is_zero() {
                        out.push(x);
                    }
                }
            }
        }
    }
    if ctx.segment_exists() && h_max >= 1 {
        let x = HairyElement::from_graph(ctx, &graphhom::graphkit::Graph::segment()).unwrap();
        out.insert(0, x);
    }
    out
}

fn fail(what: &str, a: &str, b: &str) -> String {
    format!("{what} fails for {a} and {b}")
}

/// `(a•b)•c - a•(b•c)` is graded symmetric in `b, c`.
pub fn check_prelie(gens: &[GcElement], limit: usize) -> Result<usize, String> {
    let mut count = 0;
    for a in gens.iter().take(limit) {
        for b in gens.iter().take(limit) {
            let ab = insert(a, b).unwrap();
            for c in gens.iter().take(limit) {
                let lhs = &insert(&ab, c).unwrap().terms
                    - &insert(a, &insert(b, c).unwrap()).unwrap().terms;
                let ac = insert(a, c).unwrap();
                let rhs = &insert(&ac, b).unwrap().terms
                    - &insert(a, &insert(c, b).unwrap()).unwrap().terms;
                if lhs != rhs.scale(&koszul(b.degree * c.degree)) {
                    return Err(fail(
                        "pre-Lie symmetry",
                        &a.terms.to_json().to_string(),
                        &b.terms.to_json().to_string(),
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Graded Jacobi and Leibniz for the GC bracket.
pub fn check_gc_lie(gens: &[GcElement], limit: usize) -> Result<usize, String> {
    let mut count = 0;
    for a in gens.iter().take(limit) {
        for b in gens.iter().take(limit) {
            let ab = bracket_gc(a, b).unwrap();
            let lhs = diff_gc(&ab).terms;
            let rhs = &bracket_gc(&diff_gc(a), b).unwrap().terms
                + &bracket_gc(a, &diff_gc(b))
                    .unwrap()
                    .terms
                    .scale(&koszul(a.degree));
            if lhs != rhs {
                return Err(fail(
                    "Leibniz",
                    &a.terms.to_json().to_string(),
                    &b.terms.to_json().to_string(),
                ));
            }
            let anti = bracket_gc(b, a)
                .unwrap()
                .terms
                .scale(&-koszul(a.degree * b.degree));
            if ab.terms != anti {
                return Err(fail(
                    "graded antisymmetry",
                    &a.terms.to_json().to_string(),
                    &b.terms.to_json().to_string(),
                ));
            }
            for c in gens.iter().take(limit) {
                let lhs = bracket_gc(a, &bracket_gc(b, c).unwrap()).unwrap().terms;
                let rhs = &bracket_gc(&ab, c).unwrap().terms
                    + &bracket_gc(b, &bracket_gc(a, c).unwrap())
                        .unwrap()
                        .terms
                        .scale(&koszul(a.degree * b.degree));
                if lhs != rhs {
                    return Err(fail(
                        "Jacobi",
                        &a.terms.to_json().to_string(),
                        &b.terms.to_json().to_string(),
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Graded Jacobi and Leibniz for the hairy bracket.
pub fn check_hgc_lie(gens: &[HairyElement], limit: usize) -> Result<usize, String> {
    let mut count = 0;
    for a in gens.iter().take(limit) {
        for b in gens.iter().take(limit) {
            let ab = bracket_hgc(a, b).unwrap();
            let lhs = diff_hgc(&ab).terms;
            let rhs = &bracket_hgc(&diff_hgc(a), b).unwrap().terms
                + &bracket_hgc(a, &diff_hgc(b))
                    .unwrap()
                    .terms
                    .scale(&koszul(a.degree));
            if lhs != rhs {
                return Err(fail(
                    "Leibniz",
                    &a.terms.to_json().to_string(),
                    &b.terms.to_json().to_string(),
                ));
            }
            for c in gens.iter().take(limit) {
                let lhs = bracket_hgc(a, &bracket_hgc(b, c).unwrap()).unwrap().terms;
                let rhs = &bracket_hgc(&ab, c).unwrap().terms
                    + &bracket_hgc(b, &bracket_hgc(a, c).unwrap())
                        .unwrap()
                        .terms
                        .scale(&koszul(a.degree * b.degree));
                if lhs != rhs {
                    return Err(fail(
                        "Jacobi",
                        &a.terms.to_json().to_string(),
                        &b.terms.to_json().to_string(),
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The splitting differential agrees with bracketing by the one-edge graph.
pub fn check_d_is_edge_bracket(gens: &[GcElement]) -> Result<usize, String> {
    for a in gens {
        if diff_gc(a).terms != bracket_with_edge(a).terms {
            return Err(format!("d != [e, -] on {}", a.terms.to_json()));
        }
    }
    Ok(gens.len())
}

/// Euler characteristic identity on every trivalent block with loop order
/// `2..=g_max` (GC) or `<= g_max` and `1..=h_max` hairs (HGC).
pub fn check_euler(n: i64, m: Option<i64>, g_max: usize, h_max: usize) -> Result<usize, String> {
    let strategy = RankStrategy::default();
    let mut count = 0;
    let blocks: Vec<_> = match m {
        None => (2..=g_max)
            .map(|g| build_block(BlockKind::Gc, ParityContext::gc(n), g, None, None))
            .collect(),
        Some(m) => (0..=g_max)
            .flat_map(|g| (1..=h_max).map(move |h| (g, h)))
            .map(|(g, h)| build_block(BlockKind::Hgc, ParityContext::hgc(m, n), g, Some(h), None))
            .collect(),
    };
    for b in blocks {
        let b = b.map_err(|e| e.to_string())?;
        let e = euler_check(&b, &strategy).map_err(|e| e.to_string())?;
        if !e.holds() {
            return Err(format!(
                "Euler characteristic mismatch on {} g={} h={:?}: {} vs {}",
                b.kind, b.g, b.h, e.chains, e.homology
            ));
        }
        count += 1;
    }
    Ok(count)
}
