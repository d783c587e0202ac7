//! Bigraded blocks of the graph complexes, their homology tables, Euler
//! characteristic cross-checks and the comparison with the known two-loop
//! generating functions.
//!
//! A block fixes the loop order `g` and, for hairy complexes, the hair count
//! `h`. Inside a block the vertex count determines the degree, so a block is a
//! finite chain complex as soon as its degree range is.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{homology_dim, ExactError, RankStrategy, Rational, SparseMatrix};
use crate::gc::{diff_gc, ComplexError, GcElement};
use crate::graphkit::{enumerate, Graph, LinearCombo, ParityContext};
use crate::hgc::{diff_combo, twist_combo, McSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("block is infinite: {0}")]
    InfiniteBlock(String),
    #[error("differential produced {0}, which is not in the target basis")]
    MissingGenerator(String),
    #[error("block kind {kind} does not fit the context: {reason}")]
    KindMismatch { kind: BlockKind, reason: String },
    #[error("unknown block kind `{0}`")]
    UnknownKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockKind {
    #[serde(rename = "GC")]
    Gc,
    #[serde(rename = "GC2")]
    Gc2,
    #[serde(rename = "HGC")]
    Hgc,
    #[serde(rename = "HGC2")]
    Hgc2,
    #[serde(rename = "HGC-twisted")]
    HgcTwisted,
}

impl BlockKind {
    pub fn name(&self) -> &'static str {
        match self {
            BlockKind::Gc => "GC",
            BlockKind::Gc2 => "GC2",
            BlockKind::Hgc => "HGC",
            BlockKind::Hgc2 => "HGC2",
            BlockKind::HgcTwisted => "HGC-twisted",
        }
    }

    fn check(&self, ctx: &ParityContext) -> Result<(), HomologyError> {
        let (hairy, valence) = match self {
            BlockKind::Gc => (false, Some(3)),
            BlockKind::Gc2 => (false, Some(2)),
            BlockKind::Hgc => (true, Some(3)),
            BlockKind::Hgc2 => (true, Some(2)),
            BlockKind::HgcTwisted => (true, None),
        };
        let bad = |reason: &str| {
            Err(HomologyError::KindMismatch {
                kind: *self,
                reason: reason.to_string(),
            })
        };
        if ctx.is_hairy() != hairy {
            return bad(if hairy { "needs m" } else { "must not have m" });
        }
        if valence.is_some_and(|v| v != ctx.min_valence) {
            return bad("valence floor differs");
        }
        Ok(())
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockKind {
    type Err = HomologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "GC" => BlockKind::Gc,
            "GC2" => BlockKind::Gc2,
            "HGC" => BlockKind::Hgc,
            "HGC2" => BlockKind::Hgc2,
            "HGC-twisted" => BlockKind::HgcTwisted,
            _ => return Err(HomologyError::UnknownKind(s.to_string())),
        })
    }
}

/// A finite slice of a graph complex with its differentials in matrix form.
///
/// `matrices[d]` maps `bases[d]` (columns) to `bases[d - 1]` (rows) and is
/// present whenever both degrees lie in `degrees`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBlock {
    pub kind: BlockKind,
    pub ctx: ParityContext,
    pub g: usize,
    /// Hair count, or the hair cutoff of a twisted block.
    pub h: Option<usize>,
    /// Inclusive degree range that was built.
    pub degrees: (i64, i64),
    pub bases: BTreeMap<i64, Vec<Graph>>,
    pub matrices: BTreeMap<i64, SparseMatrix>,
    /// Degrees whose neighbors are either built or known to be empty.
    pub complete: BTreeMap<i64, bool>,
}

/// One row of a homology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub kind: BlockKind,
    pub n: i64,
    pub m: Option<i64>,
    pub g: usize,
    pub h: Option<usize>,
    pub degree: i64,
    pub dim: usize,
    pub complete: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub rows: Vec<HomologyRow>,
}

pub const CSV_HEADER: &str = "kind,n,m,g,h,degree,dim,complete";

impl HomologyRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.kind,
            self.n,
            opt(self.m.map(|m| m.to_string())),
            self.g,
            opt(self.h.map(|h| h.to_string())),
            self.degree,
            self.dim,
            self.complete
        )
    }
}

impl HomologyTable {
    pub fn extend(&mut self, other: HomologyTable) {
        self.rows.extend(other.rows);
    }

    /// Nonzero rows only.
    pub fn nonzero(&self) -> impl Iterator<Item = &HomologyRow> {
        self.rows.iter().filter(|r| r.dim > 0)
    }

    pub fn total_dim(&self) -> usize {
        self.rows.iter().map(|r| r.dim).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.to_csv());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.rows).expect("rows serialize")
    }
}

/// `deg = base - l` inside a block; this returns `base`.
fn degree_base(ctx: &ParityContext, g: usize, h: usize) -> i64 {
    let n = ctx.n;
    let g = g as i64;
    match ctx.m {
        None => (n - 1) * (g - 1) + n,
        Some(m) => (n - 1) * (g - 1) + (n - m - 1) * h as i64 + m,
    }
}

/// Largest vertex count of a generator with loop order `g` and `h` hairs
/// (negative when there is none), or `None` when bivalent vertices make it
/// unbounded.
fn max_vertices(ctx: &ParityContext, g: usize, h: usize) -> Option<i64> {
    if ctx.min_valence < 3 {
        return None;
    }
    // sum of valences 2k + h >= 3l with k = l + g - 1
    Some(2 * g as i64 + h as i64 - 2)
}

/// Inclusive range of degrees carrying generators, with `None` as lower end
/// when it is unbounded. `None` overall when the slice is empty.
fn natural_degrees(ctx: &ParityContext, g: usize, h: usize) -> Option<(Option<i64>, i64)> {
    let base = degree_base(ctx, g, h);
    let mut range: Option<(Option<i64>, i64)> = None;
    let mut widen = |lo: Option<i64>, hi: i64| {
        range = Some(match range {
            None => (lo, hi),
            Some((l0, h0)) => (lo.zip(l0).map(|(a, b)| a.min(b)), hi.max(h0)),
        });
    };
    if ctx.is_hairy() && g == 0 && h == 1 && ctx.segment_exists() {
        let d = ctx.n - ctx.m.unwrap() - 1;
        widen(Some(d), d);
    }
    match max_vertices(ctx, g, h) {
        Some(lmax) if lmax >= 1 => widen(Some(base - lmax), base - 1),
        Some(_) => {}
        None => widen(None, base - 1),
    }
    range
}

fn basis_at(ctx: &ParityContext, g: usize, h: usize, d: i64) -> Vec<Graph> {
    let mut out = Vec::new();
    if ctx.is_hairy() && g == 0 && h == 1 && ctx.segment_exists() && d == ctx.n - ctx.m.unwrap() - 1
    {
        out.push(Graph::segment());
    }
    let l = degree_base(ctx, g, h) - d;
    if l >= 1 {
        let l = l as usize;
        if l + g >= 1 {
            out.extend(enumerate(ctx, l, l + g - 1, h));
        }
    }
    out
}

fn resolve_range(
    natural: &[(Option<i64>, i64)],
    degrees: Option<(i64, i64)>,
) -> Result<Option<(i64, i64)>, HomologyError> {
    if let Some(r) = degrees {
        return Ok(Some(r));
    }
    let mut lo: Option<i64> = None;
    let mut hi: Option<i64> = None;
    for &(l, h) in natural {
        let l = l.ok_or_else(|| {
            HomologyError::InfiniteBlock("bivalent vertices need an explicit degree range".into())
        })?;
        lo = Some(lo.map_or(l, |x| x.min(l)));
        hi = Some(hi.map_or(h, |x| x.max(h)));
    }
    Ok(lo.zip(hi))
}

fn in_natural(natural: &[(Option<i64>, i64)], d: i64) -> bool {
    natural
        .iter()
        .any(|&(lo, hi)| d <= hi && lo.map_or(true, |lo| d >= lo))
}

/// Builds one `(g, h)` slice of GC, GC², HGC or HGC². With `degrees = None`
/// the full slice is built, which requires trivalent vertices.
pub fn build_block(
    kind: BlockKind,
    ctx: ParityContext,
    g: usize,
    h: Option<usize>,
    degrees: Option<(i64, i64)>,
) -> Result<ComplexBlock, HomologyError> {
    kind.check(&ctx)?;
    if kind == BlockKind::HgcTwisted {
        return Err(HomologyError::KindMismatch {
            kind,
            reason: "twisted blocks are built by build_twisted_block".into(),
        });
    }
    let hh = if ctx.is_hairy() {
        match h {
            Some(h) if h >= 1 => h,
            _ => {
                return Err(HomologyError::KindMismatch {
                    kind,
                    reason: "hairy blocks need at least one hair".into(),
                })
            }
        }
    } else {
        0
    };
    let natural: Vec<_> = natural_degrees(&ctx, g, hh).into_iter().collect();
    let range = resolve_range(&natural, degrees)?;
    let basis = |d: i64| basis_at(&ctx, g, hh, d);
    let column = |gr: &Graph, d: i64| -> LinearCombo {
        let single = LinearCombo::single(gr.clone(), Rational::one());
        if ctx.is_hairy() {
            diff_combo(&single, &ctx)
        } else {
            diff_gc(&GcElement {
                ctx,
                terms: single,
                degree: d,
            })
            .terms
        }
    };
    assemble(
        kind,
        ctx,
        g,
        if ctx.is_hairy() { Some(hh) } else { None },
        range,
        &natural,
        basis,
        column,
        |_| true,
    )
}

/// Builds loop order `g` of HGC_{m,n} (trivalent) twisted by `alpha`, keeping
/// hair counts `1..=h_max`. The twist raises the hair count, so graphs with
/// more than `h_max` hairs form a subcomplex and the block is the quotient by
/// it.
pub fn build_twisted_block(
    alpha: &McSeries,
    g: usize,
    h_max: usize,
    degrees: Option<(i64, i64)>,
) -> Result<ComplexBlock, HomologyError> {
    let ctx = alpha.ctx;
    BlockKind::HgcTwisted.check(&ctx)?;
    let natural: Vec<_> = (1..=h_max)
        .filter_map(|h| natural_degrees(&ctx, g, h))
        .collect();
    let range = resolve_range(&natural, degrees)?;
    let a = alpha.truncate(h_max);
    let basis = |d: i64| {
        let mut out: Vec<Graph> = (1..=h_max).flat_map(|h| basis_at(&ctx, g, h, d)).collect();
        out.sort();
        out
    };
    let column = |gr: &Graph, _d: i64| -> LinearCombo {
        let single = LinearCombo::single(gr.clone(), Rational::one());
        twist_combo(&a, &single, &ctx)
    };
    assemble(
        BlockKind::HgcTwisted,
        ctx,
        g,
        Some(h_max),
        range,
        &natural,
        basis,
        column,
        |gr| gr.h() <= h_max,
    )
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    kind: BlockKind,
    ctx: ParityContext,
    g: usize,
    h: Option<usize>,
    range: Option<(i64, i64)>,
    natural: &[(Option<i64>, i64)],
    basis: impl Fn(i64) -> Vec<Graph>,
    column: impl Fn(&Graph, i64) -> LinearCombo + Sync,
    keep: impl Fn(&Graph) -> bool + Sync,
) -> Result<ComplexBlock, HomologyError> {
    let mut block = ComplexBlock {
        kind,
        ctx,
        g,
        h,
        degrees: range.unwrap_or((1, 0)),
        bases: BTreeMap::new(),
        matrices: BTreeMap::new(),
        complete: BTreeMap::new(),
    };
    let Some((lo, hi)) = range else {
        return Ok(block);
    };
    for d in lo..=hi {
        block.bases.insert(d, basis(d));
    }
    for d in lo..=hi {
        let inside = |e: i64| (lo..=hi).contains(&e) || !in_natural(natural, e);
        block.complete.insert(d, inside(d - 1) && inside(d + 1));
    }
    for d in (lo + 1)..=hi {
        let src = &block.bases[&d];
        let dst = &block.bases[&(d - 1)];
        let index: HashMap<&Graph, usize> = dst.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let cols: Vec<Result<Vec<(usize, usize, Rational)>, HomologyError>> = src
            .par_iter()
            .enumerate()
            .map(|(j, gr)| {
                let mut out = Vec::new();
                for (t, c) in column(gr, d).iter() {
                    if !keep(t) {
                        continue;
                    }
                    let i = index
                        .get(t)
                        .ok_or_else(|| HomologyError::MissingGenerator(t.to_string()))?;
                    out.push((*i, j, c.clone()));
                }
                Ok(out)
            })
            .collect();
        let mut triplets = Vec::new();
        for c in cols {
            triplets.extend(c?);
        }
        let mat = SparseMatrix::from_triplets(dst.len(), src.len(), triplets)?;
        block.matrices.insert(d, mat);
    }
    Ok(block)
}

impl ComplexBlock {
    pub fn dim(&self, d: i64) -> usize {
        self.bases.get(&d).map_or(0, Vec::len)
    }

    /// Total number of generators over all degrees.
    pub fn size(&self) -> usize {
        self.bases.values().map(Vec::len).sum()
    }

    /// The differential out of degree `d`, zero when the target lies outside
    /// the block.
    pub fn differential(&self, d: i64) -> SparseMatrix {
        self.matrices
            .get(&d)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(d - 1), self.dim(d)))
    }

    /// Coordinates of a linear combination in the basis of degree `d`, or
    /// `None` if it has a term outside that basis.
    pub fn coordinates(&self, d: i64, x: &LinearCombo) -> Option<Vec<Rational>> {
        let basis = self.bases.get(&d)?;
        let mut out = vec![Rational::zero(); basis.len()];
        for (g, c) in x.iter() {
            let i = basis.iter().position(|b| b == g)?;
            out[i] = c.clone();
        }
        Some(out)
    }
}

/// Homology of the block per degree. Differentials leaving the block are
/// treated as zero, so rows flagged incomplete describe the truncated complex
/// only.
pub fn homology_table(
    block: &ComplexBlock,
    strategy: &RankStrategy,
) -> Result<HomologyTable, HomologyError> {
    let mut rows = Vec::new();
    for (&d, basis) in &block.bases {
        let d_out = block.differential(d);
        let d_in = match block.matrices.get(&(d + 1)) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(basis.len(), 0),
        };
        let dim = homology_dim(&d_out, &d_in, strategy)?;
        rows.push(HomologyRow {
            kind: block.kind,
            n: block.ctx.n,
            m: block.ctx.m,
            g: block.g,
            h: block.h,
            degree: d,
            dim,
            complete: block.complete[&d],
        });
    }
    Ok(HomologyTable { rows })
}

/// Chain-level and homology-level Euler characteristics of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerCheck {
    pub chains: i64,
    pub homology: i64,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.chains == self.homology
    }
}

pub fn euler_check(
    block: &ComplexBlock,
    strategy: &RankStrategy,
) -> Result<EulerCheck, HomologyError> {
    let sign = |d: i64| if d.rem_euclid(2) == 0 { 1 } else { -1 };
    let chains = block
        .bases
        .iter()
        .map(|(d, b)| sign(*d) * b.len() as i64)
        .sum();
    let homology = homology_table(block, strategy)?
        .rows
        .iter()
        .map(|r| sign(r.degree) * r.dim as i64)
        .sum();
    Ok(EulerCheck { chains, homology })
}

/// Coefficients of `1 / ((1 - T^a)(1 - T^b))` up to `T^kmax`.
fn two_factor_series(a: usize, b: usize, kmax: usize) -> Vec<i64> {
    let mut out = vec![0i64; kmax + 1];
    for i in (0..=kmax).step_by(a) {
        for j in (0..=kmax - i).step_by(b) {
            out[i + j] += 1;
        }
    }
    out
}

/// Predicted dimensions of the two-loop hairy homology, from the known
/// generating function in `s` (degree) and `t` (hairs) with
/// `T = s^(n-m-2) t`, expanded up to `t^h_max`. Keys are `(degree, hairs)`.
pub fn twoloop_predicted(m: i64, n: i64, h_max: usize) -> BTreeMap<(i64, usize), i64> {
    let lo = n - 3 + m;
    let hi = n - 2 + m;
    // (s exponent, T exponent, coefficient) over the denominator (a, b)
    let (num, den, minus_one): (Vec<(i64, usize, i64)>, (usize, usize), bool) =
        match (m.rem_euclid(2), n.rem_euclid(2)) {
            (0, 0) => (vec![(lo, 6, 1), (hi, 7, 1)], (2, 6), false),
            (1, 1) => (vec![(lo, 0, 1), (hi, 1, 1)], (2, 6), true),
            (0, 1) => (
                vec![
                    (lo, 3, 1),
                    (lo, 11, 1),
                    (lo, 14, 1),
                    (lo, 15, -1),
                    (hi, 1, 1),
                    (hi, 16, 1),
                ],
                (4, 12),
                false,
            ),
            _ => (
                vec![(lo, 2, 1), (lo, 11, 1), (hi, 4, 1), (hi, 13, 1)],
                (4, 12),
                false,
            ),
        };
    let inv = two_factor_series(den.0, den.1, h_max);
    let mut out: BTreeMap<(i64, usize), i64> = BTreeMap::new();
    for (e, t0, c) in num {
        for k in t0..=h_max {
            let v = c * inv[k - t0];
            if v != 0 {
                let j = e + (n - m - 2) * k as i64;
                *out.entry((j, k)).or_default() += v;
            }
        }
    }
    if minus_one {
        *out.entry((lo, 0)).or_default() -= 1;
    }
    out.retain(|&(_, k), v| *v != 0 && k >= 1);
    out
}

/// A computed two-loop dimension next to its predicted value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenfunCoeff {
    pub computed: usize,
    pub predicted: i64,
}

/// Two-loop homology of HGC_{m,n} for `1 <= h <= h_max`, paired with the
/// generating-function prediction. Every `(degree, hairs)` where either side
/// is nonzero is listed.
pub fn twoloop_genfun_coeffs(
    m: i64,
    n: i64,
    h_max: usize,
    strategy: &RankStrategy,
) -> Result<BTreeMap<(i64, usize), GenfunCoeff>, HomologyError> {
    let ctx = ParityContext::hgc(m, n);
    let predicted = twoloop_predicted(m, n, h_max);
    let tables: Vec<Result<HomologyTable, HomologyError>> = (1..=h_max)
        .into_par_iter()
        .map(|h| {
            let block = build_block(BlockKind::Hgc, ctx, 2, Some(h), None)?;
            homology_table(&block, strategy)
        })
        .collect();
    let mut out = BTreeMap::new();
    for t in tables {
        for r in t?.rows {
            let key = (r.degree, r.h.unwrap_or(0));
            let p = predicted.get(&key).copied().unwrap_or(0);
            if r.dim > 0 || p != 0 {
                out.insert(
                    key,
                    GenfunCoeff {
                        computed: r.dim,
                        predicted: p,
                    },
                );
            }
        }
    }
    for (key, p) in predicted {
        out.entry(key).or_insert(GenfunCoeff {
            computed: 0,
            predicted: p,
        });
    }
    Ok(out)
}

/// Checks that an explicit cycle lies in the kernel of the block
/// differential out of degree `d`, working in exact arithmetic.
pub fn is_cycle(block: &ComplexBlock, d: i64, x: &LinearCombo) -> Option<bool> {
    let v = block.coordinates(d, x)?;
    let m = block.differential(d);
    let mut acc = vec![Rational::zero(); m.nrows()];
    for (r, c, val) in m.entries() {
        acc[*r] += val * &v[*c];
    }
    Some(acc.iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_block() {
        let b = build_block(BlockKind::Gc, ParityContext::gc(3), 2, None, None).unwrap();
        let t = homology_table(&b, &RankStrategy::Exact).unwrap();
        let nz: Vec<_> = t.nonzero().map(|r| (r.degree, r.dim)).collect();
        assert_eq!(nz, vec![(3, 1)]);
        assert!(b.matrices.values().all(|m| m.nnz() == 0));
    }

    #[test]
    fn segment_block() {
        let b = build_block(BlockKind::Hgc, ParityContext::hgc(2, 4), 0, Some(1), None).unwrap();
        assert_eq!(
            b.bases.values().flatten().cloned().collect::<Vec<_>>(),
            vec![Graph::segment()]
        );
        assert_eq!(b.bases.keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn empty_range() {
        let b = build_block(BlockKind::Gc, ParityContext::gc(3), 3, None, Some((5, 4))).unwrap();
        assert_eq!(b.size(), 0);
        assert!(homology_table(&b, &RankStrategy::default())
            .unwrap()
            .rows
            .is_empty());
    }

    #[test]
    fn bivalent_needs_range() {
        let err = build_block(BlockKind::Gc2, ParityContext::gc2(2), 1, None, None).unwrap_err();
        assert!(matches!(err, HomologyError::InfiniteBlock(_)));
    }

    #[test]
    fn series_expansion() {
        assert_eq!(two_factor_series(2, 6, 8), vec![1, 0, 1, 0, 1, 0, 2, 0, 2]);
        let p = twoloop_predicted(2, 4, 8);
        let keys: Vec<_> = p.keys().copied().collect();
        assert_eq!(keys, vec![(3, 6), (3, 8), (4, 7)]);
    }

    #[test]
    fn csv_row() {
        let r = HomologyRow {
            kind: BlockKind::Gc,
            n: 3,
            m: None,
            g: 2,
            h: None,
            degree: 3,
            dim: 1,
            complete: true,
        };
        assert_eq!(r.to_csv(), "GC,3,,2,,3,1,true");
    }
}
