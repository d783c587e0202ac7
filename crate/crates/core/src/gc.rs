//! Kontsevich's graph complexes GC_n (at least trivalent vertices) and GC²_n
//! (at least bivalent): degrees, the vertex splitting differential, the
//! pre-Lie insertion product and its Lie bracket.

use num_traits::One;
use thiserror::Error;

use crate::exact::Rational;
use crate::graphkit::{
    canonicalize_graph, is_valid, Graph, GraphError, LinearCombo, ParityContext,
};
use crate::ops::{collect, insert_terms_gc, inv_weight, split_terms};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("terms of degrees {0} and {1} in one element")]
    MixedDegrees(i64, i64),
    #[error("elements live in different contexts")]
    ContextMismatch,
    #[error("this operation needs {0}")]
    WrongContext(&'static str),
    #[error("expected m = {expected}, got m = {got}")]
    WrongCodimension { expected: i64, got: i64 },
    #[error("element has degree {0}, a Maurer-Cartan element needs degree -1")]
    NotDegreeMinusOne(i64),
}

/// `(n-1) k - n l + n`.
pub fn degree_gc(g: &Graph, n: i64) -> i64 {
    (n - 1) * g.k() as i64 - n * g.l() as i64 + n
}

/// Sign in front of the splitting sum, one per parity of `n`, chosen so that
/// `d = [e, -]` holds on the nose for the two-vertex graph `e`.
fn split_sign(ctx: &ParityContext) -> i32 {
    if ctx.edge_odd() {
        -1
    } else {
        1
    }
}

/// A homogeneous element of GC_n or GC²_n in orbit-sum coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcElement {
    pub ctx: ParityContext,
    pub terms: LinearCombo,
    pub degree: i64,
}

impl GcElement {
    pub fn zero(ctx: ParityContext, degree: i64) -> Self {
        GcElement {
            ctx,
            terms: LinearCombo::new(),
            degree,
        }
    }

    /// Checks that the context is non-hairy and all terms share one degree.
    pub fn new(ctx: ParityContext, terms: LinearCombo) -> Result<Self, ComplexError> {
        if ctx.is_hairy() {
            return Err(ComplexError::WrongContext("a non-hairy context"));
        }
        let mut degree = None;
        for g in terms.graphs() {
            let d = degree_gc(g, ctx.n);
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(ComplexError::MixedDegrees(d0, d)),
                _ => {}
            }
        }
        let degree = degree.ok_or(ComplexError::WrongContext(
            "a nonzero element to infer a degree",
        ))?;
        Ok(GcElement { ctx, terms, degree })
    }

    /// The orbit-sum basis vector of `g`, or zero if `g` has an orientation
    /// reversing symmetry.
    pub fn from_graph(ctx: ParityContext, g: &Graph) -> Result<Self, ComplexError> {
        if ctx.is_hairy() {
            return Err(ComplexError::WrongContext("a non-hairy context"));
        }
        let degree = degree_gc(g, ctx.n);
        let mut terms = LinearCombo::new();
        if let Some((c, s)) = canonicalize_graph(g, &ctx)? {
            terms.add_term(c, Rational::from_integer(s.into()));
        }
        Ok(GcElement { ctx, terms, degree })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }
}

/// Splitting differential on orbit-sum coordinates, without the validity
/// assertion.
pub(crate) fn split_combo(terms: &LinearCombo, ctx: &ParityContext, eps: i32) -> LinearCombo {
    let eps = Rational::from_integer(eps.into());
    let mut out = LinearCombo::new();
    for (g, c) in terms.iter() {
        let raw = g.to_raw(ctx);
        let scale = c * inv_weight(g) * &eps;
        collect(
            split_terms(&raw, ctx).into_iter().map(|r| (r, 1)),
            ctx,
            &scale,
            &mut out,
        );
    }
    out
}

/// Vertex splitting differential. Terms with vertices below the valence
/// floor are generated and must cancel; a surviving one is a sign bug and
/// panics.
pub fn diff_gc(gamma: &GcElement) -> GcElement {
    let out = split_combo(&gamma.terms, &gamma.ctx, split_sign(&gamma.ctx));
    for g in out.graphs() {
        assert!(
            is_valid(g, &gamma.ctx),
            "uncancelled splitting term {g} in d({:?})",
            gamma.terms.to_json()
        );
    }
    GcElement {
        ctx: gamma.ctx,
        terms: out,
        degree: gamma.degree - 1,
    }
}

pub(crate) fn insert_combo(a: &LinearCombo, b: &LinearCombo, ctx: &ParityContext) -> LinearCombo {
    let mut out = LinearCombo::new();
    for (ga, ca) in a.iter() {
        let ra = ga.to_raw(ctx);
        for (gb, cb) in b.iter() {
            let rb = gb.to_raw(ctx);
            let scale = ca * cb * inv_weight(ga) * inv_weight(gb);
            collect(insert_terms_gc(&ra, &rb), ctx, &scale, &mut out);
        }
    }
    out
}

/// Pre-Lie product: `beta` plugged into every vertex of `alpha`, each
/// half-edge at that vertex reattached to any vertex of `beta`.
pub fn insert(alpha: &GcElement, beta: &GcElement) -> Result<GcElement, ComplexError> {
    if alpha.ctx != beta.ctx {
        return Err(ComplexError::ContextMismatch);
    }
    Ok(GcElement {
        ctx: alpha.ctx,
        terms: insert_combo(&alpha.terms, &beta.terms, &alpha.ctx),
        degree: alpha.degree + beta.degree,
    })
}

/// `alpha • beta - (-1)^{|alpha||beta|} beta • alpha`.
pub fn bracket_gc(alpha: &GcElement, beta: &GcElement) -> Result<GcElement, ComplexError> {
    let ab = insert(alpha, beta)?;
    let ba = insert(beta, alpha)?;
    let s = if (alpha.degree * beta.degree).rem_euclid(2) == 0 {
        -Rational::one()
    } else {
        Rational::one()
    };
    let mut terms = ab.terms;
    terms.add_scaled(&ba.terms, &s);
    Ok(GcElement {
        ctx: alpha.ctx,
        terms,
        degree: ab.degree,
    })
}

/// `[e, gamma]` for the two-vertex graph `e`, computed through insertions
/// in the full graph complex (univalent vertices allowed) and restricted to
/// the terms that survive.
pub fn bracket_with_edge(gamma: &GcElement) -> GcElement {
    let ctx = gamma.ctx;
    let e = Graph::new(2, &[(0, 1)], &[]).unwrap();
    let mut ecombo = LinearCombo::new();
    let (ce, s) = canonicalize_relaxed_graph(&e, &ctx);
    ecombo.add_term(ce, Rational::from_integer(s.into()));
    let ab = insert_combo(&ecombo, &gamma.terms, &ctx);
    let ba = insert_combo(&gamma.terms, &ecombo, &ctx);
    // |e| = -1
    let s = if gamma.degree.rem_euclid(2) == 0 {
        -Rational::one()
    } else {
        Rational::one()
    };
    let mut terms = ab;
    terms.add_scaled(&ba, &s);
    GcElement {
        ctx,
        terms,
        degree: gamma.degree - 1,
    }
}

fn canonicalize_relaxed_graph(g: &Graph, ctx: &ParityContext) -> (Graph, i32) {
    let t = crate::graphkit::canonicalize_relaxed(&g.to_raw(ctx), ctx)
        .expect("well formed")
        .expect("nonzero");
    (t.graph, t.sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        for n in [2, 3, 4] {
            assert_eq!(degree_gc(&Graph::complete(4), n), 3 * n - 6);
            for r in 1..6 {
                assert_eq!(degree_gc(&Graph::loop_graph(r), n), n - r as i64);
            }
            let theta = Graph::new(2, &[(0, 1), (0, 1), (0, 1)], &[]).unwrap();
            assert_eq!(degree_gc(&theta, n), 2 * n - 3);
        }
    }

    #[test]
    fn k4_is_closed() {
        for n in [2, 3] {
            let k4 = GcElement::from_graph(ParityContext::gc(n), &Graph::complete(4)).unwrap();
            assert!(!k4.is_zero());
            assert!(diff_gc(&k4).is_zero());
        }
    }

    #[test]
    fn empty_sums() {
        let z = GcElement::zero(ParityContext::gc(2), 0);
        assert!(diff_gc(&z).is_zero());
        let k4 = GcElement::from_graph(ParityContext::gc(2), &Graph::complete(4)).unwrap();
        assert!(insert(&k4, &z).unwrap().is_zero());
    }
}
