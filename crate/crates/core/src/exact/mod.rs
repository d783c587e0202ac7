//! Exact linear algebra over the rationals and prime fields.
//!
//! Everything here is pure: matrices are immutable values and every rank
//! routine runs single-threaded on its own copy of the data.

mod rank;
mod sparse;

pub use rank::{
    is_probable_prime, random_prime_above, rank, rank_exact, rank_mod_p, rank_with, RankStrategy,
    DEFAULT_PRIME_FLOOR,
};
pub use sparse::{parse_rational, SparseMatrix};

use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Builds a rational from a machine integer.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn qq(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("prime {p} divides the denominator of entry ({row}, {col})")]
    DenominatorDivisibleByP { p: u64, row: usize, col: usize },
    #[error("composition of consecutive differentials is nonzero ({nonzero} entries)")]
    CompositionNonzero { nonzero: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({row}, {col}) out of range for a {nrows}x{ncols} matrix")]
    OutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("duplicate entry at ({row}, {col})")]
    Duplicate { row: usize, col: usize },
    #[error("malformed matrix text: {0}")]
    Parse(String),
    #[error("{0} is not a usable prime modulus")]
    BadModulus(u64),
}

/// `dim C_d - rank(d_out) - rank(d_in)` for the chain group `C_d` sitting
/// between `d_in: C_{d+1} -> C_d` and `d_out: C_d -> C_{d-1}`.
///
/// Fails with [`ExactError::CompositionNonzero`] when `d_out * d_in != 0`,
/// which upstream always means a sign convention is broken.
pub fn homology_dim(
    d_out: &SparseMatrix,
    d_in: &SparseMatrix,
    strategy: &RankStrategy,
) -> Result<usize, ExactError> {
    if d_out.ncols() != d_in.nrows() {
        return Err(ExactError::Shape(format!(
            "d_out has {} columns but d_in has {} rows",
            d_out.ncols(),
            d_in.nrows()
        )));
    }
    let prod = d_out.mul(d_in)?;
    if prod.nnz() != 0 {
        return Err(ExactError::CompositionNonzero {
            nonzero: prod.nnz(),
        });
    }
    let dim = d_out.ncols();
    let r_out = rank_with(d_out, strategy)?;
    let r_in = rank_with(d_in, strategy)?;
    debug_assert!(r_out + r_in <= dim);
    Ok(dim - r_out - r_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_of_zero_maps_is_the_chain_group() {
        let d_out = SparseMatrix::zeros(0, 5);
        let d_in = SparseMatrix::zeros(5, 0);
        assert_eq!(
            homology_dim(&d_out, &d_in, &RankStrategy::default()).unwrap(),
            5
        );
    }

    #[test]
    fn identity_kills_everything() {
        let d_out = SparseMatrix::identity(4);
        let d_in = SparseMatrix::zeros(4, 3);
        assert_eq!(
            homology_dim(&d_out, &d_in, &RankStrategy::Exact).unwrap(),
            0
        );
    }

    #[test]
    fn nonzero_composition_is_reported() {
        let d = SparseMatrix::identity(2);
        let err = homology_dim(&d, &d, &RankStrategy::Exact).unwrap_err();
        assert!(matches!(err, ExactError::CompositionNonzero { .. }));
    }

    #[test]
    fn shape_mismatch() {
        let a = SparseMatrix::zeros(2, 3);
        let b = SparseMatrix::zeros(2, 2);
        assert!(matches!(
            homology_dim(&a, &b, &RankStrategy::Exact),
            Err(ExactError::Shape(_))
        ));
    }
}
