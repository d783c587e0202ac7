use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExactError, Rational};

/// Immutable sparse matrix over the rationals in coordinate form.
///
/// Entries are sorted by `(row, col)`, unique and nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            entries: (0..n).map(|i| (i, i, Rational::one())).collect(),
        }
    }

    /// Builds a matrix from triplets. Duplicate positions are an error, zero
    /// values are dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: Vec<(usize, usize, Rational)>,
    ) -> Result<Self, ExactError> {
        let mut entries = Vec::with_capacity(triplets.len());
        for (row, col, v) in triplets {
            if row >= nrows || col >= ncols {
                return Err(ExactError::OutOfRange {
                    row,
                    col,
                    nrows,
                    ncols,
                });
            }
            if !v.is_zero() {
                entries.push((row, col, v));
            }
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(ExactError::Duplicate {
                    row: w[0].0,
                    col: w[0].1,
                });
            }
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            entries,
        })
    }

    /// Like [`SparseMatrix::from_triplets`] but sums values at repeated
    /// positions.
    pub fn from_accumulated(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, ExactError> {
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (row, col, v) in triplets {
            if row >= nrows || col >= ncols {
                return Err(ExactError::OutOfRange {
                    row,
                    col,
                    nrows,
                    ncols,
                });
            }
            *acc.entry((row, col)).or_insert_with(Rational::zero) += v;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseMatrix {
            nrows,
            ncols,
            entries,
        })
    }

    /// Dense constructor, mostly for tests.
    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    entries.push((i, j, v.clone()));
                }
            }
        }
        SparseMatrix {
            nrows,
            ncols,
            entries,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        match self
            .entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(row, col)))
        {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.ncols]; self.nrows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            entries,
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return SparseMatrix::zeros(self.nrows, self.ncols);
        }
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| (*r, *c, v * s))
                .collect(),
        }
    }

    /// Exact product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, ExactError> {
        if self.ncols != rhs.nrows {
            return Err(ExactError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        // rows of rhs as slices into its sorted entry list
        let mut row_start = vec![0usize; rhs.nrows + 1];
        for (r, _, _) in &rhs.entries {
            row_start[r + 1] += 1;
        }
        for i in 0..rhs.nrows {
            row_start[i + 1] += row_start[i];
        }
        let mut entries = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            while i < self.entries.len() && self.entries[i].0 == row {
                let (_, k, a) = &self.entries[i];
                for (_, c, b) in &rhs.entries[row_start[*k]..row_start[k + 1]] {
                    *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                }
                i += 1;
            }
            entries.extend(
                acc.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (row, c, v)),
            );
        }
        Ok(SparseMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            entries,
        })
    }

    /// Serializes to the line based `sms` text format:
    /// a header `sms <nrows> <ncols>`, one `<row> <col> <num>/<den>` line per
    /// nonzero entry (1-based indices) and the terminator `0 0 0`.
    pub fn to_sms(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "sms {} {}", self.nrows, self.ncols);
        for (r, c, v) in &self.entries {
            let _ = writeln!(s, "{} {} {}/{}", r + 1, c + 1, v.numer(), v.denom());
        }
        s.push_str("0 0 0\n");
        s
    }

    pub fn from_sms(text: &str) -> Result<SparseMatrix, ExactError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| ExactError::Parse("empty input".into()))?;
        let mut hw = header.split_whitespace();
        if hw.next() != Some("sms") {
            return Err(ExactError::Parse(format!("bad header `{header}`")));
        }
        let nrows = parse_usize(hw.next(), header)?;
        let ncols = parse_usize(hw.next(), header)?;
        if hw.next().is_some() {
            return Err(ExactError::Parse(format!("bad header `{header}`")));
        }
        let mut triplets = Vec::new();
        let mut terminated = false;
        for line in lines.by_ref() {
            let mut w = line.split_whitespace();
            let r = parse_usize(w.next(), line)?;
            let c = parse_usize(w.next(), line)?;
            let v = w
                .next()
                .ok_or_else(|| ExactError::Parse(format!("missing value in `{line}`")))?;
            if w.next().is_some() {
                return Err(ExactError::Parse(format!("trailing data in `{line}`")));
            }
            if r == 0 && c == 0 {
                if v != "0" {
                    return Err(ExactError::Parse(format!("bad terminator `{line}`")));
                }
                terminated = true;
                break;
            }
            if r == 0 || c == 0 {
                return Err(ExactError::Parse(format!(
                    "indices are 1-based in `{line}`"
                )));
            }
            triplets.push((r - 1, c - 1, parse_rational(v)?));
        }
        if !terminated {
            return Err(ExactError::Parse("missing `0 0 0` terminator".into()));
        }
        if let Some(extra) = lines.next() {
            return Err(ExactError::Parse(format!(
                "data after terminator: `{extra}`"
            )));
        }
        SparseMatrix::from_triplets(nrows, ncols, triplets)
    }
}

fn parse_usize(tok: Option<&str>, line: &str) -> Result<usize, ExactError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| ExactError::Parse(format!("expected an index in `{line}`")))
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qq};

    #[test]
    fn sms_roundtrip() {
        let m =
            SparseMatrix::from_triplets(3, 2, vec![(0, 1, qq(-3, 4)), (2, 0, q(5)), (1, 1, q(0))])
                .unwrap();
        assert_eq!(m.nnz(), 2);
        let text = m.to_sms();
        assert_eq!(text, "sms 3 2\n1 2 -3/4\n3 1 5/1\n0 0 0\n");
        assert_eq!(SparseMatrix::from_sms(&text).unwrap(), m);
    }

    #[test]
    fn sms_rejects_garbage() {
        assert!(SparseMatrix::from_sms("").is_err());
        assert!(SparseMatrix::from_sms("sms 2 2\n1 1 1\n").is_err());
        assert!(SparseMatrix::from_sms("sms 2 2\n3 1 1\n0 0 0\n").is_err());
        assert!(SparseMatrix::from_sms("sms 2 2\n1 1 1/0\n0 0 0\n").is_err());
        assert!(SparseMatrix::from_sms("sms 2 2\n1 1 1\n1 1 2\n0 0 0\n").is_err());
        assert!(SparseMatrix::from_sms("mat 2 2\n0 0 0\n").is_err());
    }

    #[test]
    fn accumulate_cancels() {
        let m = SparseMatrix::from_accumulated(1, 1, vec![(0, 0, q(2)), (0, 0, q(-2))]).unwrap();
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseMatrix::from_dense(&[vec![q(1), q(2)], vec![q(0), qq(1, 2)]]);
        let b = SparseMatrix::from_dense(&[vec![q(3), q(0), q(1)], vec![q(-1), q(4), q(0)]]);
        let p = a.mul(&b).unwrap();
        assert_eq!(
            p.to_dense(),
            vec![vec![q(1), q(8), q(1)], vec![qq(-1, 2), q(2), q(0)]]
        );
        assert_eq!(p.transpose().transpose(), p);
    }
}
