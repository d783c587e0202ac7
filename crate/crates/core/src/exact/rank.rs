use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{ExactError, SparseMatrix};

/// Random primes for modular ranks are drawn from `[floor, 2 floor)`.
pub const DEFAULT_PRIME_FLOOR: u64 = 1 << 30;

/// How ranks are computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankStrategy {
    /// Rank modulo two distinct primes. If the two ranks disagree the exact
    /// routine decides. `None` draws fresh random primes above
    /// [`DEFAULT_PRIME_FLOOR`] on every call.
    Modular { primes: Option<(u64, u64)> },
    /// Fraction-free elimination over the integers.
    Exact,
}

impl Default for RankStrategy {
    fn default() -> Self {
        RankStrategy::Modular { primes: None }
    }
}

pub fn rank(m: &SparseMatrix) -> Result<usize, ExactError> {
    rank_with(m, &RankStrategy::default())
}

pub fn rank_with(m: &SparseMatrix, strategy: &RankStrategy) -> Result<usize, ExactError> {
    if m.nnz() == 0 {
        return Ok(0);
    }
    match strategy {
        RankStrategy::Exact => Ok(rank_exact(m)),
        RankStrategy::Modular { primes } => {
            let (p1, p2) = match primes {
                Some((a, b)) => (*a, *b),
                None => {
                    let mut rng = rand::thread_rng();
                    let a = random_prime_above(DEFAULT_PRIME_FLOOR, &mut rng);
                    let mut b = a;
                    while b == a {
                        b = random_prime_above(DEFAULT_PRIME_FLOOR, &mut rng);
                    }
                    (a, b)
                }
            };
            if p1 == p2 {
                return Err(ExactError::BadModulus(p2));
            }
            let r1 = rank_mod_p(m, p1)?;
            let r2 = rank_mod_p(m, p2)?;
            if r1 == r2 {
                Ok(r1)
            } else {
                Ok(rank_exact(m))
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn random_prime_above<R: Rng + ?Sized>(floor: u64, rng: &mut R) -> u64 {
    assert!(floor >= 3 && floor < (1 << 62));
    loop {
        let c = rng.gen_range(floor..2 * floor) | 1;
        if is_probable_prime(c) {
            return c;
        }
    }
}

fn check_modulus(p: u64) -> Result<(), ExactError> {
    if p < 3 || p >= (1 << 62) || !is_probable_prime(p) {
        return Err(ExactError::BadModulus(p));
    }
    Ok(())
}

/// Rows of `m` as sorted `(col, value)` lists.
fn rows_of<T>(
    m: &SparseMatrix,
    mut f: impl FnMut(usize, usize, &super::Rational) -> Result<T, ExactError>,
) -> Result<Vec<Vec<(u32, T)>>, ExactError> {
    let mut rows: Vec<Vec<(u32, T)>> = (0..m.nrows()).map(|_| Vec::new()).collect();
    for (r, c, v) in m.entries() {
        rows[*r].push((*c as u32, f(*r, *c, v)?));
    }
    Ok(rows)
}

/// Field or ring operations used by the shared sparse elimination driver.
trait Eliminator {
    type V: Clone;
    /// `target <- target * a - pivot_row * b` style update. Returns the new
    /// row; zero entries must be dropped.
    fn eliminate(
        &self,
        pivot: &[(u32, Self::V)],
        target: &[(u32, Self::V)],
        pc: u32,
    ) -> Vec<(u32, Self::V)>;
}

struct ModP(u64);

impl Eliminator for ModP {
    type V = u64;
    fn eliminate(&self, pivot: &[(u32, u64)], target: &[(u32, u64)], pc: u32) -> Vec<(u32, u64)> {
        let p = self.0;
        let a = lookup(pivot, pc).expect("pivot entry");
        let b = lookup(target, pc).expect("target entry");
        // target - (b / a) * pivot
        let f = mul_mod(*b, inv_mod(*a, p), p);
        merge(pivot, target, |x, y| {
            let sub = x.map_or(0, |x| mul_mod(*x, f, p));
            let base = y.copied().unwrap_or(0);
            let v = (base + p - sub) % p;
            (v != 0).then_some(v)
        })
    }
}

struct Integers;

impl Eliminator for Integers {
    type V = BigInt;
    fn eliminate(
        &self,
        pivot: &[(u32, BigInt)],
        target: &[(u32, BigInt)],
        pc: u32,
    ) -> Vec<(u32, BigInt)> {
        let a = lookup(pivot, pc).expect("pivot entry");
        let b = lookup(target, pc).expect("target entry");
        let g = a.gcd(b);
        let (fa, fb) = (a / &g, b / &g);
        // fa * target - fb * pivot, then divide by the row content
        let mut row = merge(pivot, target, |x, y| {
            let mut v = y.map_or_else(BigInt::zero, |y| y * &fa);
            if let Some(x) = x {
                v -= x * &fb;
            }
            (!v.is_zero()).then_some(v)
        });
        let mut content = BigInt::zero();
        for (_, v) in &row {
            content = content.gcd(v);
            if content.is_one() {
                break;
            }
        }
        if !content.is_zero() && !content.is_one() {
            for (_, v) in row.iter_mut() {
                *v /= &content;
            }
        }
        row
    }
}

fn lookup<V>(row: &[(u32, V)], c: u32) -> Option<&V> {
    row.binary_search_by_key(&c, |e| e.0)
        .ok()
        .map(|i| &row[i].1)
}

fn merge<V: Clone>(
    pivot: &[(u32, V)],
    target: &[(u32, V)],
    mut f: impl FnMut(Option<&V>, Option<&V>) -> Option<V>,
) -> Vec<(u32, V)> {
    let mut out = Vec::with_capacity(pivot.len() + target.len());
    let (mut i, mut j) = (0, 0);
    while i < pivot.len() || j < target.len() {
        let ci = pivot.get(i).map_or(u32::MAX, |e| e.0);
        let cj = target.get(j).map_or(u32::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, f(Some(&pivot[i - 1].1), None))
        } else if cj < ci {
            j += 1;
            (cj, f(None, Some(&target[j - 1].1)))
        } else {
            i += 1;
            j += 1;
            (ci, f(Some(&pivot[i - 1].1), Some(&target[j - 1].1)))
        };
        if let Some(v) = v {
            out.push((c, v));
        }
    }
    out
}

/// Sparse Gaussian elimination. Pivot rows are taken shortest first and the
/// pivot column inside a row is the one touching the fewest other rows, a
/// cheap stand-in for the Markowitz cost `(r - 1)(c - 1)`.
fn eliminate_rank<E: Eliminator>(ncols: usize, mut rows: Vec<Vec<(u32, E::V)>>, e: &E) -> usize {
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut heap = BinaryHeap::new();
    for (i, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(i as u32);
        }
        if !row.is_empty() {
            heap.push(Reverse((row.len(), i)));
        }
    }
    let mut alive = vec![true; rows.len()];
    let mut rank = 0;
    while let Some(Reverse((len, r))) = heap.pop() {
        if !alive[r] || rows[r].len() != len {
            continue;
        }
        if len == 0 {
            alive[r] = false;
            continue;
        }
        let pc = rows[r]
            .iter()
            .map(|(c, _)| *c)
            .min_by_key(|c| col_rows[*c as usize].len())
            .unwrap();
        alive[r] = false;
        rank += 1;
        let pivot = std::mem::take(&mut rows[r]);
        let touched = std::mem::take(&mut col_rows[pc as usize]);
        for r2 in touched {
            let r2 = r2 as usize;
            if !alive[r2] || lookup(&rows[r2], pc).is_none() {
                continue;
            }
            let new_row = e.eliminate(&pivot, &rows[r2], pc);
            // register fill-in
            {
                let old = &rows[r2];
                let mut k = 0;
                for (c, _) in &new_row {
                    while k < old.len() && old[k].0 < *c {
                        k += 1;
                    }
                    if k >= old.len() || old[k].0 != *c {
                        col_rows[*c as usize].push(r2 as u32);
                    }
                }
            }
            rows[r2] = new_row;
            if rows[r2].is_empty() {
                alive[r2] = false;
            } else {
                heap.push(Reverse((rows[r2].len(), r2)));
            }
        }
    }
    rank
}

/// Rank over `F_p`. Fails if `p` is not a usable prime or divides a
/// denominator.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Result<usize, ExactError> {
    check_modulus(p)?;
    let big_p = BigInt::from(p);
    let rows = rows_of(m, |r, c, v| {
        let d = (v.denom() % &big_p).to_u64().unwrap();
        if d == 0 {
            return Err(ExactError::DenominatorDivisibleByP { p, row: r, col: c });
        }
        let mut n = v.numer() % &big_p;
        if n.is_negative() {
            n += &big_p;
        }
        Ok(mul_mod(n.to_u64().unwrap(), inv_mod(d, p), p))
    })?;
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| *v != 0).collect())
        .collect();
    Ok(eliminate_rank(m.ncols(), rows, &ModP(p)))
}

/// Exact rank over the rationals by fraction-free elimination over the
/// integers, each row cleared of denominators first.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    let mut rows: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); m.nrows()];
    let mut dens: Vec<BigInt> = vec![BigInt::one(); m.nrows()];
    for (r, _, v) in m.entries() {
        dens[*r] = dens[*r].lcm(v.denom());
    }
    for (r, c, v) in m.entries() {
        rows[*r].push((*c as u32, v.numer() * (&dens[*r] / v.denom())));
    }
    eliminate_rank(m.ncols(), rows, &Integers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qq, Rational};
    use proptest::prelude::*;

    /// Dense Gaussian elimination over the rationals, kept deliberately naive.
    fn dense_rank(mut a: Vec<Vec<Rational>>) -> usize {
        let nrows = a.len();
        let ncols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..nrows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..nrows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for k in 0..ncols {
                        let sub = &a[rank][k] * &f;
                        a[r][k] -= sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn primes() {
        assert!(is_probable_prime(2));
        assert!(is_probable_prime(1_000_000_007));
        assert!(!is_probable_prime(1_000_000_007u64 * 998_244_353));
        assert!(!is_probable_prime(3215031751)); // strong pseudoprime to 2,3,5,7
        let mut rng = rand::thread_rng();
        let p = random_prime_above(DEFAULT_PRIME_FLOOR, &mut rng);
        assert!(p >= DEFAULT_PRIME_FLOOR && is_probable_prime(p));
    }

    #[test]
    fn bad_moduli() {
        let m = SparseMatrix::identity(2);
        assert_eq!(rank_mod_p(&m, 4), Err(ExactError::BadModulus(4)));
        let m = SparseMatrix::from_dense(&[vec![qq(1, 7)]]);
        assert!(matches!(
            rank_mod_p(&m, 7),
            Err(ExactError::DenominatorDivisibleByP { p: 7, .. })
        ));
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 3
        let m = SparseMatrix::from_dense(&[vec![q(1), q(1)], vec![q(1), q(4)]]);
        assert_eq!(rank_mod_p(&m, 3).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 5).unwrap(), 2);
        assert_eq!(rank_exact(&m), 2);
        // disagreeing primes fall back to the exact rank
        let s = RankStrategy::Modular {
            primes: Some((3, 5)),
        };
        assert_eq!(rank_with(&m, &s).unwrap(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec(
                    prop_oneof![
                        4 => Just(q(0)),
                        3 => (-3i64..=3).prop_map(q),
                        1 => (-5i64..=5, 1i64..=4).prop_map(|(n, d)| qq(n, d)),
                    ],
                    c,
                ),
                r,
            )
        })
    }

    proptest! {
        #[test]
        fn ranks_agree_with_dense_oracle(a in small_matrix()) {
            let m = SparseMatrix::from_dense(&a);
            let expect = dense_rank(a);
            prop_assert_eq!(rank_exact(&m), expect);
            prop_assert_eq!(rank(&m).unwrap(), expect);
            prop_assert_eq!(rank_exact(&m.transpose()), expect);
        }

        #[test]
        fn low_rank_products(a in small_matrix(), b in small_matrix()) {
            // force compatible shapes by truncating b
            let k = a[0].len().min(b.len());
            let a: Vec<Vec<Rational>> = a.into_iter().map(|r| r[..k].to_vec()).collect();
            let b: Vec<Vec<Rational>> = b[..k].to_vec();
            let p = SparseMatrix::from_dense(&a).mul(&SparseMatrix::from_dense(&b)).unwrap();
            prop_assert_eq!(rank_exact(&p), dense_rank(p.to_dense()));
            prop_assert!(rank_exact(&p) <= k);
        }
    }
}
