//! Hairy graph complexes HGC_{m,n} and HGC²_{m,n}: degrees, differential,
//! the hairy bracket, Maurer-Cartan series, twisted differentials and the
//! maps out of GC²_n that attach hairs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::Rational;
use crate::gc::{split_combo, ComplexError, GcElement};
use crate::graphkit::{
    canonicalize_graph, is_valid, Cell, End, Graph, LinearCombo, ParityContext, RawGraph,
};
use crate::ops::{collect, insert_terms_hairy, inv_weight};

/// `(n-1) k - n l + (n-m-1) h + m`, and `n-m-1` for the segment.
pub fn degree_hgc(g: &Graph, m: i64, n: i64) -> i64 {
    if g.is_segment() {
        return n - m - 1;
    }
    (n - 1) * g.k() as i64 - n * g.l() as i64 + (n - m - 1) * g.h() as i64 + m
}

fn ctx_degree(g: &Graph, ctx: &ParityContext) -> i64 {
    degree_hgc(g, ctx.m.expect("hairy context"), ctx.n)
}

/// Same convention as the plain complex: `-1` exactly when edges are odd.
fn split_sign(ctx: &ParityContext) -> i32 {
    if ctx.edge_odd() {
        -1
    } else {
        1
    }
}

/// A homogeneous element of HGC_{m,n} or HGC²_{m,n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HairyElement {
    pub ctx: ParityContext,
    pub terms: LinearCombo,
    pub degree: i64,
}

impl HairyElement {
    pub fn zero(ctx: ParityContext, degree: i64) -> Self {
        HairyElement {
            ctx,
            terms: LinearCombo::new(),
            degree,
        }
    }

    pub fn new(ctx: ParityContext, terms: LinearCombo) -> Result<Self, ComplexError> {
        if !ctx.is_hairy() {
            return Err(ComplexError::WrongContext("a hairy context"));
        }
        let mut degree = None;
        for g in terms.graphs() {
            let d = ctx_degree(g, &ctx);
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(ComplexError::MixedDegrees(d0, d)),
                _ => {}
            }
        }
        let degree = degree.ok_or(ComplexError::WrongContext(
            "a nonzero element to infer a degree",
        ))?;
        Ok(HairyElement { ctx, terms, degree })
    }

    pub fn from_graph(ctx: ParityContext, g: &Graph) -> Result<Self, ComplexError> {
        if !ctx.is_hairy() {
            return Err(ComplexError::WrongContext("a hairy context"));
        }
        let degree = ctx_degree(g, &ctx);
        let mut terms = LinearCombo::new();
        if let Some((c, s)) = canonicalize_graph(g, &ctx)? {
            terms.add_term(c, Rational::from_integer(s.into()));
        }
        Ok(HairyElement { ctx, terms, degree })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Part with exactly `h` hairs.
    pub fn with_hairs(&self, h: usize) -> HairyElement {
        HairyElement {
            ctx: self.ctx,
            terms: self.terms.filter(|g| g.h() == h),
            degree: self.degree,
        }
    }
}

pub(crate) fn diff_combo(terms: &LinearCombo, ctx: &ParityContext) -> LinearCombo {
    let out = split_combo(terms, ctx, split_sign(ctx));
    for g in out.graphs() {
        assert!(
            is_valid(g, ctx),
            "uncancelled splitting term {g} in d({})",
            terms.to_json()
        );
    }
    out
}

/// Splitting of internal vertices, with hairs shared out like edges.
pub fn diff_hgc(gamma: &HairyElement) -> HairyElement {
    HairyElement {
        ctx: gamma.ctx,
        terms: diff_combo(&gamma.terms, &gamma.ctx),
        degree: gamma.degree - 1,
    }
}

fn insert_combo(a: &LinearCombo, b: &LinearCombo, ctx: &ParityContext) -> LinearCombo {
    let mut out = LinearCombo::new();
    for (ga, ca) in a.iter() {
        let ra = ga.to_raw(ctx);
        for (gb, cb) in b.iter() {
            let rb = gb.to_raw(ctx);
            let scale = ca * cb * inv_weight(ga) * inv_weight(gb);
            collect(insert_terms_hairy(&ra, &rb), ctx, &scale, &mut out);
        }
    }
    out
}

/// Graded commutator of hair attachment, termwise in the degrees of the
/// graphs so that inhomogeneous sums work too.
pub(crate) fn bracket_combo(a: &LinearCombo, b: &LinearCombo, ctx: &ParityContext) -> LinearCombo {
    let mut out = LinearCombo::new();
    for (ga, ca) in a.iter() {
        let da = ctx_degree(ga, ctx);
        let sa = LinearCombo::single(ga.clone(), ca.clone());
        for (gb, cb) in b.iter() {
            let db = ctx_degree(gb, ctx);
            let sb = LinearCombo::single(gb.clone(), cb.clone());
            out = &out + &insert_combo(&sa, &sb, ctx);
            let s = if (da * db).rem_euclid(2) == 0 {
                -Rational::one()
            } else {
                Rational::one()
            };
            out.add_scaled(&insert_combo(&sb, &sa, ctx), &s);
        }
    }
    out
}

/// Attaches hairs of one graph to internal vertices of the other, as the
/// commutator of the one-sided attachment. A hair never attaches to the
/// segment, which has no internal vertex; the segment's own two ends both
/// attach.
pub fn bracket_hgc(
    alpha: &HairyElement,
    beta: &HairyElement,
) -> Result<HairyElement, ComplexError> {
    if alpha.ctx != beta.ctx {
        return Err(ComplexError::ContextMismatch);
    }
    Ok(HairyElement {
        ctx: alpha.ctx,
        terms: bracket_combo(&alpha.terms, &beta.terms, &alpha.ctx),
        degree: alpha.degree + beta.degree,
    })
}

/// One-sided attachment `alpha • beta`: every hair of `alpha` glued to every
/// internal vertex of `beta`.
pub fn insert_hairy(
    alpha: &HairyElement,
    beta: &HairyElement,
) -> Result<HairyElement, ComplexError> {
    if alpha.ctx != beta.ctx {
        return Err(ComplexError::ContextMismatch);
    }
    Ok(HairyElement {
        ctx: alpha.ctx,
        terms: insert_combo(&alpha.terms, &beta.terms, &alpha.ctx),
        degree: alpha.degree + beta.degree,
    })
}

/// A degree −1 series graded by hair count, kept up to a cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McSeries {
    pub ctx: ParityContext,
    /// hair count -> homogeneous piece
    pub pieces: BTreeMap<usize, LinearCombo>,
}

impl McSeries {
    pub fn zero(ctx: ParityContext) -> Self {
        McSeries {
            ctx,
            pieces: BTreeMap::new(),
        }
    }

    /// All pieces summed.
    pub fn total(&self) -> LinearCombo {
        let mut out = LinearCombo::new();
        for p in self.pieces.values() {
            out = &out + p;
        }
        out
    }

    /// Pieces with at most `cutoff` hairs.
    pub fn truncate(&self, cutoff: usize) -> LinearCombo {
        let mut out = LinearCombo::new();
        for (h, p) in &self.pieces {
            if *h <= cutoff {
                out = &out + p;
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> McSeries {
        McSeries {
            ctx: self.ctx,
            pieces: self
                .pieces
                .iter()
                .map(|(h, p)| (*h, p.scale(s)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    fn from_total(ctx: ParityContext, total: LinearCombo) -> McSeries {
        let mut pieces: BTreeMap<usize, LinearCombo> = BTreeMap::new();
        for (g, c) in total.iter() {
            pieces
                .entry(g.h())
                .or_default()
                .add_term(g.clone(), c.clone());
        }
        McSeries { ctx, pieces }
    }
}

fn require_m(ctx: &ParityContext, expected: i64) -> Result<(), ComplexError> {
    match ctx.m {
        None => Err(ComplexError::WrongContext("a hairy context")),
        Some(m) if m != expected => Err(ComplexError::WrongCodimension { expected, got: m }),
        _ => Ok(()),
    }
}

/// `lambda` times the segment, in HGC²_{n,n}.
pub fn line_mc(ctx: ParityContext, lambda: Rational) -> Result<McSeries, ComplexError> {
    require_m(&ctx, ctx.n)?;
    let mut s = McSeries::zero(ctx);
    if !lambda.is_zero() {
        s.pieces
            .insert(1, LinearCombo::single(Graph::segment(), lambda));
    }
    Ok(s)
}

/// `sum_{k >= 1, 2k+1 <= cutoff} lambda^k star_{2k+1}` in HGC_{n-1,n}.
pub fn tripod_mc(
    ctx: ParityContext,
    lambda: Rational,
    cutoff: usize,
) -> Result<McSeries, ComplexError> {
    require_m(&ctx, ctx.n - 1)?;
    let mut s = McSeries::zero(ctx);
    let mut pow = lambda.clone();
    let mut k = 1;
    while 2 * k + 1 <= cutoff {
        if !pow.is_zero() {
            s.pieces.insert(
                2 * k + 1,
                LinearCombo::single(Graph::star(2 * k + 1), pow.clone()),
            );
        }
        pow *= &lambda;
        k += 1;
    }
    Ok(s)
}

/// `sum_{k >= 1} (2k+1) star_{2k+1}`, truncated. Not claimed to be
/// Maurer-Cartan.
pub fn tripod_prime(ctx: ParityContext, cutoff: usize) -> Result<McSeries, ComplexError> {
    require_m(&ctx, ctx.n - 1)?;
    let mut s = McSeries::zero(ctx);
    let mut k = 1;
    while 2 * k + 1 <= cutoff {
        s.pieces.insert(
            2 * k + 1,
            LinearCombo::single(
                Graph::star(2 * k + 1),
                Rational::from_integer((2 * k + 1).into()),
            ),
        );
        k += 1;
    }
    Ok(s)
}

/// Outcome of [`mc_check`]: the nonzero parts of `d alpha + 1/2 [alpha, alpha]`
/// by hair count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McReport {
    pub cutoff: usize,
    pub residues: BTreeMap<usize, LinearCombo>,
    /// Hair counts of pieces whose degree is not −1.
    pub bad_degrees: Vec<(usize, i64)>,
}

impl McReport {
    pub fn is_mc(&self) -> bool {
        self.residues.is_empty() && self.bad_degrees.is_empty()
    }
}

/// `d alpha + 1/2 [alpha, alpha]` up to `cutoff` hairs. Pieces with more hairs
/// than the cutoff never contribute below it, since the bracket of pieces
/// with `h1` and `h2` hairs has `h1 + h2 - 1 >= max(h1, h2)` hairs.
pub fn mc_check(alpha: &McSeries, cutoff: usize) -> McReport {
    let ctx = alpha.ctx;
    let mut bad_degrees = Vec::new();
    for (h, p) in &alpha.pieces {
        for g in p.graphs() {
            let d = ctx_degree(g, &ctx);
            if d != -1 {
                bad_degrees.push((*h, d));
                break;
            }
        }
    }
    let a = alpha.truncate(cutoff);
    let mut res = diff_combo(&a, &ctx);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    res.add_scaled(&bracket_combo(&a, &a, &ctx), &half);
    let residues = McSeries::from_total(ctx, res.filter(|g| g.h() <= cutoff)).pieces;
    McReport {
        cutoff,
        residues,
        bad_degrees,
    }
}

/// `d gamma + [alpha, gamma]`, keeping terms with at most `cutoff` hairs.
pub fn twist_diff(alpha: &McSeries, gamma: &HairyElement, cutoff: usize) -> HairyElement {
    let ctx = gamma.ctx;
    let a = alpha.truncate(cutoff);
    let g = gamma.terms.filter(|g| g.h() <= cutoff);
    let mut out = diff_combo(&g, &ctx);
    out = &out + &bracket_combo(&a, &g, &ctx);
    HairyElement {
        ctx,
        terms: out.filter(|g| g.h() <= cutoff),
        degree: gamma.degree - 1,
    }
}

/// `twist_diff` on a bare combination.
pub(crate) fn twist_combo(
    alpha: &LinearCombo,
    gamma: &LinearCombo,
    ctx: &ParityContext,
) -> LinearCombo {
    let out = diff_combo(gamma, ctx);
    if alpha.is_zero() {
        return out;
    }
    &out + &bracket_combo(alpha, gamma, ctx)
}

/// Appends hairs `(v_i -> new external vertex)` to a non-hairy reference
/// orientation, each hair's odd cells appended at the end.
fn with_hairs(raw: &RawGraph, at: &[usize], ctx: &ParityContext) -> RawGraph {
    let mut edges = raw.edges.clone();
    let mut cells = raw.cells.clone();
    for (j, &v) in at.iter().enumerate() {
        edges.push((End::Int(v), End::Ext(j)));
        if ctx.edge_odd() {
            cells.push(Cell::Edge(edges.len() - 1));
        }
        if ctx.ext_odd() {
            cells.push(Cell::Ext(j));
        }
    }
    RawGraph {
        l: raw.l,
        x: at.len(),
        edges,
        cells,
    }
}

fn gc_context(hctx: &ParityContext) -> ParityContext {
    ParityContext { m: None, ..*hctx }
}

/// Sum over attachments of `j` labeled hairs to vertices of `gamma`, each
/// hair independently.
fn attach_hairs(gamma: &GcElement, ctx: &ParityContext, j: usize, scale: &Rational) -> LinearCombo {
    let gctx = gc_context(ctx);
    let mut out = LinearCombo::new();
    for (g, c) in gamma.terms.iter() {
        let raw = g.to_raw(&gctx);
        let l = raw.l;
        let mut terms = Vec::new();
        let mut at = vec![0usize; j];
        loop {
            terms.push((with_hairs(&raw, &at, ctx), 1));
            let mut i = 0;
            while i < j {
                at[i] += 1;
                if at[i] < l {
                    break;
                }
                at[i] = 0;
                i += 1;
            }
            if i == j {
                break;
            }
        }
        let s = c * inv_weight(g) * scale;
        collect(terms, ctx, &s, &mut out);
    }
    out
}

/// `gamma ↦ sum_v (gamma with one hair at v)`, from GC²_n into HGC²_{n,n}.
pub fn attach_one_hair(
    gamma: &GcElement,
    ctx: ParityContext,
) -> Result<HairyElement, ComplexError> {
    require_m(&ctx, ctx.n)?;
    if gamma.ctx.n != ctx.n {
        return Err(ComplexError::ContextMismatch);
    }
    let terms = attach_hairs(gamma, &ctx, 1, &Rational::one());
    Ok(HairyElement {
        ctx,
        terms,
        degree: gamma.degree - 1,
    })
}

/// `gamma ↦ sum_{k} 4^{-k} sum(attach 2k+1 hairs)` for `2k+1 <= cutoff`, from
/// GC²_n into HGC²_{n-1,n}, one series piece per hair count.
pub fn attach_odd_hairs(
    gamma: &GcElement,
    ctx: ParityContext,
    cutoff: usize,
) -> Result<McSeries, ComplexError> {
    require_m(&ctx, ctx.n - 1)?;
    if gamma.ctx.n != ctx.n {
        return Err(ComplexError::ContextMismatch);
    }
    let mut s = McSeries::zero(ctx);
    let mut k = 0;
    while 2 * k + 1 <= cutoff {
        let scale = Rational::new(BigInt::one(), BigInt::from(4).pow(k as u32));
        let p = attach_hairs(gamma, &ctx, 2 * k + 1, &scale);
        if !p.is_zero() {
            s.pieces.insert(2 * k + 1, p);
        }
        k += 1;
    }
    Ok(s)
}
