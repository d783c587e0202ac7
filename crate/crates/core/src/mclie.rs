//! Finite truncations of complete weight-graded dg Lie algebras: Maurer-Cartan
//! elements, twisting, homotopy groups of the MC space through the twisted
//! homology, and the Baker-Campbell-Hausdorff product.
//!
//! An algebra is stored through structure constants on a basis. Basis vectors
//! are addressed by [`Key`] `(weight, degree, index)`; weights run over
//! `1..=cutoff` and anything of higher weight is dropped.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{homology_dim, ExactError, RankStrategy, Rational, SparseMatrix};
use crate::graphkit::{enumerate, Graph, LinearCombo, ParityContext};
use crate::hgc::{bracket_combo, degree_hgc, diff_combo, McSeries};

/// `(weight, degree, index within that weight and degree)`.
pub type Key = (usize, i64, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MclieError {
    #[error("element is not Maurer-Cartan; residue in weights {0:?}")]
    NotMaurerCartan(Vec<usize>),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("no basis vector {0:?}")]
    UnknownKey(Key),
    #[error("weight {weight} is outside 1..={cutoff}")]
    WeightOutOfRange { weight: usize, cutoff: usize },
    #[error("element must have degree {expected}")]
    WrongDegree { expected: i64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("cannot import: {0}")]
    Import(String),
}

/// A finite linear combination of basis vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    pub coeffs: BTreeMap<Key, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(k: Key) -> Self {
        Element::from_iter([(k, Rational::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, k: Key, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, other: &Element, s: &Rational) {
        for (k, c) in &other.coeffs {
            self.add_term(*k, c * s);
        }
    }

    pub fn scale(&self, s: &Rational) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Rational::one())
    }

    /// Part of weight exactly `w`.
    pub fn weight_part(&self, w: usize) -> Element {
        Element::from_iter(
            self.coeffs
                .iter()
                .filter(|(k, _)| k.0 == w)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn weights(&self) -> BTreeSet<usize> {
        self.coeffs.keys().map(|k| k.0).collect()
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.coeffs.keys().map(|k| k.1).collect()
    }
}

impl FromIterator<(Key, Rational)> for Element {
    fn from_iter<I: IntoIterator<Item = (Key, Rational)>>(iter: I) -> Self {
        let mut out = Element::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

fn koszul(p: i64) -> Rational {
    if p.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// A dg Lie algebra `L = prod_{w >= 1} L_w` kept in weights `1..=cutoff`.
///
/// The differential has degree −1 and never lowers weight; it is weight
/// preserving unless the algebra is a twist. The bracket has degree 0 and adds
/// weights. Only binary brackets exist.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightGradedDgLie {
    pub cutoff: usize,
    dims: BTreeMap<(usize, i64), usize>,
    /// image of each basis vector under `d`, with no zero entries stored
    diff: BTreeMap<Key, Element>,
    /// `[a, b]` for basis vectors with `a <= b`; the other order follows from
    /// graded antisymmetry
    bracket: BTreeMap<(Key, Key), Element>,
    labels: BTreeMap<Key, String>,
}

impl WeightGradedDgLie {
    /// The zero algebra with the given weight cutoff.
    pub fn new(cutoff: usize) -> Self {
        WeightGradedDgLie {
            cutoff,
            dims: BTreeMap::new(),
            diff: BTreeMap::new(),
            bracket: BTreeMap::new(),
            labels: BTreeMap::new(),
        }
    }

    /// Adds `dim` basis vectors in weight `w` and degree `d`, returning the
    /// first new index.
    pub fn add_space(&mut self, w: usize, d: i64, dim: usize) -> Result<usize, MclieError> {
        if w == 0 || w > self.cutoff {
            return Err(MclieError::WeightOutOfRange {
                weight: w,
                cutoff: self.cutoff,
            });
        }
        let e = self.dims.entry((w, d)).or_insert(0);
        let first = *e;
        *e += dim;
        Ok(first)
    }

    pub fn dim(&self, w: usize, d: i64) -> usize {
        self.dims.get(&(w, d)).copied().unwrap_or(0)
    }

    pub fn spaces(&self) -> impl Iterator<Item = ((usize, i64), usize)> + '_ {
        self.dims.iter().map(|(k, v)| (*k, *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        self.dims
            .iter()
            .flat_map(|(&(w, d), &n)| (0..n).map(move |i| (w, d, i)))
    }

    fn check_key(&self, k: Key) -> Result<(), MclieError> {
        if k.2 < self.dim(k.0, k.1) {
            Ok(())
        } else {
            Err(MclieError::UnknownKey(k))
        }
    }

    pub fn set_label(&mut self, k: Key, label: impl Into<String>) {
        self.labels.insert(k, label.into());
    }

    pub fn label(&self, k: Key) -> Option<&str> {
        self.labels.get(&k).map(String::as_str)
    }

    /// Sets `d(basis k) = image`. Terms above the cutoff are dropped.
    pub fn set_differential(&mut self, k: Key, image: Element) -> Result<(), MclieError> {
        self.check_key(k)?;
        let image = self.truncate(&image);
        for t in image.coeffs.keys() {
            self.check_key(*t)?;
            if t.1 != k.1 - 1 || t.0 < k.0 {
                return Err(MclieError::Invariant(format!("d{k:?} has a term {t:?}")));
            }
        }
        if image.is_zero() {
            self.diff.remove(&k);
        } else {
            self.diff.insert(k, image);
        }
        Ok(())
    }

    /// Sets `[a, b] = value`; `[b, a]` is implied by graded antisymmetry.
    pub fn set_bracket(&mut self, a: Key, b: Key, value: Element) -> Result<(), MclieError> {
        self.check_key(a)?;
        self.check_key(b)?;
        let value = self.truncate(&value);
        for t in value.coeffs.keys() {
            self.check_key(*t)?;
            if t.1 != a.1 + b.1 || t.0 != a.0 + b.0 {
                return Err(MclieError::Invariant(format!(
                    "[{a:?}, {b:?}] has a term {t:?}"
                )));
            }
        }
        let (key, value) = if a <= b {
            ((a, b), value)
        } else {
            ((b, a), value.scale(&-koszul(a.1 * b.1)))
        };
        if value.is_zero() {
            self.bracket.remove(&key);
        } else {
            self.bracket.insert(key, value);
        }
        Ok(())
    }

    /// Drops terms of weight above the cutoff.
    pub fn truncate(&self, x: &Element) -> Element {
        Element::from_iter(
            x.coeffs
                .iter()
                .filter(|(k, _)| k.0 <= self.cutoff)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn d(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (k, c) in &x.coeffs {
            if let Some(img) = self.diff.get(k) {
                out.add_scaled(img, c);
            }
        }
        out
    }

    fn bracket_basis(&self, a: Key, b: Key) -> Option<Element> {
        if a.0 + b.0 > self.cutoff {
            return None;
        }
        if a <= b {
            self.bracket.get(&(a, b)).cloned()
        } else {
            self.bracket
                .get(&(b, a))
                .map(|v| v.scale(&-koszul(a.1 * b.1)))
        }
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (a, ca) in &x.coeffs {
            for (b, cb) in &y.coeffs {
                if let Some(v) = self.bracket_basis(*a, *b) {
                    out.add_scaled(&v, &(ca * cb));
                }
            }
        }
        out
    }

    /// `d x + 1/2 [x, x]` in weights up to the cutoff.
    pub fn mc_residue(&self, x: &Element) -> Element {
        let mut r = self.d(x);
        r.add_scaled(
            &self.bracket(x, x),
            &Rational::new(BigInt::one(), BigInt::from(2)),
        );
        r
    }

    /// Checks `d² = 0`, graded antisymmetry of the stored brackets, the
    /// Leibniz rule and the Jacobi identity on all basis vectors whose weights
    /// fit under the cutoff.
    pub fn check_invariants(&self) -> Result<(), MclieError> {
        let keys: Vec<Key> = self.keys().collect();
        for &k in &keys {
            if !self.d(&self.d(&Element::basis(k))).is_zero() {
                return Err(MclieError::Invariant(format!("d² != 0 on {k:?}")));
            }
        }
        for &a in &keys {
            if let Some(v) = self.bracket.get(&(a, a)) {
                if a.1.rem_euclid(2) == 0 && !v.is_zero() {
                    return Err(MclieError::Invariant(format!("[x, x] != 0 for even {a:?}")));
                }
            }
        }
        for &a in &keys {
            let ea = Element::basis(a);
            for &b in &keys {
                if a.0 + b.0 > self.cutoff {
                    continue;
                }
                let eb = Element::basis(b);
                let ab = self.bracket(&ea, &eb);
                let lhs = self.d(&ab);
                let mut rhs = self.bracket(&self.d(&ea), &eb);
                rhs.add_scaled(&self.bracket(&ea, &self.d(&eb)), &koszul(a.1));
                if lhs != rhs {
                    return Err(MclieError::Invariant(format!(
                        "Leibniz fails on {a:?}, {b:?}"
                    )));
                }
                for &c in &keys {
                    if a.0 + b.0 + c.0 > self.cutoff {
                        continue;
                    }
                    let ec = Element::basis(c);
                    let lhs = self.bracket(&ea, &self.bracket(&eb, &ec));
                    let mut rhs = self.bracket(&ab, &ec);
                    rhs.add_scaled(
                        &self.bracket(&eb, &self.bracket(&ea, &ec)),
                        &koszul(a.1 * b.1),
                    );
                    if lhs != rhs {
                        return Err(MclieError::Invariant(format!(
                            "Jacobi fails on {a:?}, {b:?}, {c:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of the differential from degree `d` to degree `d - 1`, over
    /// weights `1..=w`.
    fn diff_matrix(&self, d: i64, w: usize) -> SparseMatrix {
        let index = |deg: i64| -> BTreeMap<Key, usize> {
            self.keys()
                .filter(|k| k.1 == deg && k.0 <= w)
                .enumerate()
                .map(|(i, k)| (k, i))
                .collect()
        };
        let src = index(d);
        let dst = index(d - 1);
        let mut triplets = Vec::new();
        for (k, &j) in &src {
            if let Some(img) = self.diff.get(k) {
                for (t, c) in &img.coeffs {
                    if let Some(&i) = dst.get(t) {
                        triplets.push((i, j, c.clone()));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(dst.len(), src.len(), triplets).expect("distinct positions")
    }

    /// Homology in degree `d` of the quotient by weights above `w`. The
    /// differential never lowers weight, so those form a subcomplex.
    pub fn homology_dim_upto(
        &self,
        d: i64,
        w: usize,
        strategy: &RankStrategy,
    ) -> Result<usize, MclieError> {
        let d_out = self.diff_matrix(d, w);
        let d_in = self.diff_matrix(d + 1, w);
        Ok(homology_dim(&d_out, &d_in, strategy)?)
    }

    /// All degrees that carry a basis vector.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.dims
            .iter()
            .filter(|(_, n)| **n > 0)
            .map(|((_, d), _)| *d)
            .collect()
    }
}

/// `d α + ½[α, α] = 0` in all weights up to the cutoff. Elements with a
/// component outside degree −1 are never Maurer-Cartan.
pub fn is_mc(l: &WeightGradedDgLie, alpha: &Element) -> bool {
    alpha.coeffs.keys().all(|k| k.1 == -1) && l.mc_residue(&l.truncate(alpha)).is_zero()
}

/// The algebra with differential `d + [α, −]` and the same bracket.
pub fn twist(l: &WeightGradedDgLie, alpha: &Element) -> Result<WeightGradedDgLie, MclieError> {
    if !is_mc(l, alpha) {
        let mut w: Vec<usize> = l
            .mc_residue(&l.truncate(alpha))
            .weights()
            .into_iter()
            .collect();
        if w.is_empty() {
            // wrong degree rather than a residue
            w = alpha.weights().into_iter().collect();
        }
        return Err(MclieError::NotMaurerCartan(w));
    }
    let mut out = l.clone();
    let keys: Vec<Key> = l.keys().collect();
    for k in keys {
        let x = Element::basis(k);
        let mut img = l.d(&x);
        img.add_scaled(&l.bracket(alpha, &x), &Rational::one());
        out.set_differential(k, img)?;
    }
    Ok(out)
}

/// Twisted homology in one degree, per weight cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BerglundCount {
    pub degree: i64,
    /// `(w, dim H of the quotient by weights > w, complete)` for
    /// `w = 1..=cutoff`. A row is complete when no component of α can carry
    /// weight from above `cutoff` down to it, i.e. `w + min weight(α) >
    /// cutoff` never happens.
    pub per_weight: Vec<(usize, usize, bool)>,
}

impl BerglundCount {
    /// The dimension at the full cutoff.
    pub fn total(&self) -> usize {
        self.per_weight.last().map_or(0, |r| r.1)
    }
}

/// `π_k` of the MC space at α, computed as `H_{k−1}` of the twisted algebra.
pub fn berglund_pi(
    l: &WeightGradedDgLie,
    alpha: &Element,
    k: usize,
    strategy: &RankStrategy,
) -> Result<BerglundCount, MclieError> {
    if k == 0 {
        return Err(MclieError::Invariant(
            "homotopy groups start at k = 1".into(),
        ));
    }
    twisted_homology(l, alpha, k as i64 - 1, strategy)
}

/// `H_d` of `l` twisted by `alpha`, per weight cutoff. Unlike
/// [`berglund_pi`] any degree is allowed.
pub fn twisted_homology(
    l: &WeightGradedDgLie,
    alpha: &Element,
    d: i64,
    strategy: &RankStrategy,
) -> Result<BerglundCount, MclieError> {
    let t = twist(l, alpha)?;
    let shift = alpha.weights().into_iter().next();
    let mut per_weight = Vec::new();
    for w in 1..=l.cutoff {
        let dim = t.homology_dim_upto(d, w, strategy)?;
        let complete = match shift {
            None => true,
            Some(s) => w + s <= l.cutoff,
        };
        per_weight.push((w, dim, complete));
    }
    Ok(BerglundCount {
        degree: d,
        per_weight,
    })
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `[a_1, [a_2, ..., [a_{m-1}, a_m]]]` for a word in `x` (false) and `y`
/// (true).
fn nested(l: &WeightGradedDgLie, word: &[bool], x: &Element, y: &Element) -> Element {
    let pick = |b: bool| if b { y } else { x };
    let mut acc = pick(*word.last().unwrap()).clone();
    for &b in word[..word.len() - 1].iter().rev() {
        if acc.is_zero() {
            break;
        }
        acc = l.bracket(pick(b), &acc);
    }
    acc
}

/// Baker-Campbell-Hausdorff product of two degree 0 elements in Dynkin's
/// form, up to the cutoff `w` (at most the algebra's cutoff).
pub fn bch(
    l: &WeightGradedDgLie,
    x: &Element,
    y: &Element,
    w: usize,
) -> Result<Element, MclieError> {
    for e in [x, y] {
        if e.coeffs.keys().any(|k| k.1 != 0) {
            return Err(MclieError::WrongDegree { expected: 0 });
        }
    }
    let w = w.min(l.cutoff);
    let keep = |e: &Element| {
        Element::from_iter(
            e.coeffs
                .iter()
                .filter(|(k, _)| k.0 <= w)
                .map(|(k, c)| (*k, c.clone())),
        )
    };
    let (x, y) = (keep(x), keep(y));
    let mut out = Element::zero();
    // Each block (r_i, s_i) with r_i + s_i >= 1 contributes at least weight
    // one, so words of length above w vanish.
    fn blocks(rem: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for len in 1..=rem {
            for r in 0..=len {
                cur.push((r, len - r));
                blocks(rem - len, cur, out);
                cur.pop();
            }
        }
    }
    let mut all = Vec::new();
    blocks(w, &mut Vec::new(), &mut all);
    for seq in all {
        let n = seq.len();
        let total: usize = seq.iter().map(|(r, s)| r + s).sum();
        // the innermost bracket [y, y] or [x, x] vanishes
        let (rl, sl) = *seq.last().unwrap();
        if sl > 1 || (sl == 0 && rl > 1) {
            continue;
        }
        let mut word = Vec::with_capacity(total);
        let mut denom = BigInt::from(n) * BigInt::from(total);
        for &(r, s) in &seq {
            word.extend(std::iter::repeat(false).take(r));
            word.extend(std::iter::repeat(true).take(s));
            denom *= factorial(r) * factorial(s);
        }
        let v = nested(l, &word, &x, &y);
        if v.is_zero() {
            continue;
        }
        let sign = if n % 2 == 1 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        out.add_scaled(&v, &Rational::new(sign, denom));
    }
    Ok(out)
}

/// The weight used when viewing a hairy graph complex as a complete weight
/// graded algebra: `h + g - 1`, additive under the bracket.
pub fn hgc_weight(g: &Graph) -> usize {
    g.h() + crate::graphkit::loop_order(g) - 1
}

/// HGC_{m,n} (trivalent) restricted to loop orders `0..=max_loop` and weights
/// `1..=cutoff`, as an explicit dg Lie algebra. Returns the algebra and the
/// graph behind every basis vector.
pub fn from_hgc(
    ctx: ParityContext,
    max_loop: usize,
    cutoff: usize,
) -> Result<(WeightGradedDgLie, BTreeMap<Key, Graph>), MclieError> {
    let (Some(m), 3) = (ctx.m, ctx.min_valence) else {
        return Err(MclieError::Import("needs a trivalent hairy context".into()));
    };
    let mut l = WeightGradedDgLie::new(cutoff);
    let mut graphs: BTreeMap<Key, Graph> = BTreeMap::new();
    let mut index: BTreeMap<Graph, Key> = BTreeMap::new();
    for g in 0..=max_loop {
        for w in 1..=cutoff {
            let Some(h) = (w + 1).checked_sub(g) else {
                continue;
            };
            if h == 0 {
                continue;
            }
            let lmax = 2 * g + h - 2;
            let mut by_degree: BTreeMap<i64, Vec<Graph>> = BTreeMap::new();
            for v in 1..=lmax {
                if v + g == 0 {
                    continue;
                }
                for gr in enumerate(&ctx, v, v + g - 1, h) {
                    by_degree
                        .entry(degree_hgc(&gr, m, ctx.n))
                        .or_default()
                        .push(gr);
                }
            }
            for (d, gs) in by_degree {
                let first = l.add_space(w, d, gs.len())?;
                for (i, gr) in gs.into_iter().enumerate() {
                    let k = (w, d, first + i);
                    l.set_label(k, gr.to_string());
                    index.insert(gr.clone(), k);
                    graphs.insert(k, gr);
                }
            }
        }
    }
    let to_element = |c: &LinearCombo| -> Result<Element, MclieError> {
        let mut out = Element::zero();
        for (gr, v) in c.iter() {
            if hgc_weight(gr) > cutoff || crate::graphkit::loop_order(gr) > max_loop {
                continue;
            }
            let k = index
                .get(gr)
                .ok_or_else(|| MclieError::Import(format!("{gr} is not a basis graph")))?;
            out.add_term(*k, v.clone());
        }
        Ok(out)
    };
    let keys: Vec<Key> = graphs.keys().copied().collect();
    for &k in &keys {
        let single = LinearCombo::single(graphs[&k].clone(), Rational::one());
        l.set_differential(k, to_element(&diff_combo(&single, &ctx))?)?;
    }
    for (i, &a) in keys.iter().enumerate() {
        let sa = LinearCombo::single(graphs[&a].clone(), Rational::one());
        for &b in &keys[i..] {
            if a.0 + b.0 > cutoff
                || crate::graphkit::loop_order(&graphs[&a])
                    + crate::graphkit::loop_order(&graphs[&b])
                    > max_loop
            {
                continue;
            }
            let sb = LinearCombo::single(graphs[&b].clone(), Rational::one());
            l.set_bracket(a, b, to_element(&bracket_combo(&sa, &sb, &ctx))?)?;
        }
    }
    Ok((l, graphs))
}

/// An MC series of a hairy complex as an element of [`from_hgc`]'s algebra.
pub fn import_series(
    graphs: &BTreeMap<Key, Graph>,
    series: &McSeries,
) -> Result<Element, MclieError> {
    let index: BTreeMap<&Graph, Key> = graphs.iter().map(|(k, g)| (g, *k)).collect();
    let mut out = Element::zero();
    let cutoff = graphs.keys().map(|k| k.0).max().unwrap_or(0);
    for (gr, c) in series.total().iter() {
        if hgc_weight(gr) > cutoff {
            continue;
        }
        let k = index
            .get(gr)
            .ok_or_else(|| MclieError::Import(format!("{gr} is not a basis graph")))?;
        out.add_term(*k, c.clone());
    }
    Ok(out)
}
