//! Multigraphs with hairs, their orientation signs, canonical forms and
//! enumeration.
//!
//! Two kinds of graph live here. [`Graph`] is a plain labeled multigraph and
//! is what canonical forms are stored as. [`RawGraph`] additionally carries an
//! orientation: directed edges, explicit external vertices for hairs and an
//! ordered list of odd cells. All sign bookkeeping happens on raw graphs.

mod canon;
mod combo;
mod enumerate;
mod graph;
mod orient;
mod raw;

pub use combo::LinearCombo;
pub use enumerate::{enumerate, enumerate_up_to, EnumerationLevels};
pub use graph::{is_connected, loop_order, Graph};
pub use orient::{
    automorphism_count, canonicalize, canonicalize_graph, canonicalize_relaxed, orbit_weight,
    CanonicalTerm,
};
pub(crate) use orient::{canon_raw as canon_raw_internal, is_valid};
pub use raw::{Cell, End, RawGraph};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("cannot parse graph `{0}`")]
    Parse(String),
}

/// Parities, valence floor and shape policy of a graph complex.
///
/// `n` is the target dimension and `m`, when present, the source dimension of
/// a hairy complex. Sign rules depend only on `n mod 2` and `m mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityContext {
    pub n: i64,
    pub m: Option<i64>,
    pub min_valence: usize,
    pub allow_tadpoles: bool,
    pub require_connected: bool,
}

impl ParityContext {
    /// GC_n: at least trivalent, tadpoles allowed.
    pub fn gc(n: i64) -> Self {
        ParityContext {
            n,
            m: None,
            min_valence: 3,
            allow_tadpoles: true,
            require_connected: true,
        }
    }

    /// GC²_n: at least bivalent.
    pub fn gc2(n: i64) -> Self {
        ParityContext {
            min_valence: 2,
            ..Self::gc(n)
        }
    }

    /// HGC_{m,n}: internal vertices at least trivalent.
    pub fn hgc(m: i64, n: i64) -> Self {
        ParityContext {
            m: Some(m),
            ..Self::gc(n)
        }
    }

    /// HGC²_{m,n}: internal vertices at least bivalent.
    pub fn hgc2(m: i64, n: i64) -> Self {
        ParityContext {
            m: Some(m),
            ..Self::gc2(n)
        }
    }

    pub fn with_tadpoles(self, allow: bool) -> Self {
        ParityContext {
            allow_tadpoles: allow,
            ..self
        }
    }

    pub fn is_hairy(&self) -> bool {
        self.m.is_some()
    }

    pub fn vertex_odd(&self) -> bool {
        self.n.rem_euclid(2) == 1
    }

    pub fn edge_odd(&self) -> bool {
        self.n.rem_euclid(2) == 0
    }

    /// Reversing an edge costs a sign exactly when `n` is odd.
    pub fn flip_odd(&self) -> bool {
        self.vertex_odd()
    }

    pub fn ext_odd(&self) -> bool {
        self.m.is_some_and(|m| m.rem_euclid(2) == 1)
    }

    /// A hair is an edge plus an external vertex; it is odd iff `n ≡ m`.
    pub fn hairs_odd(&self) -> bool {
        self.edge_odd() != self.ext_odd()
    }

    /// The segment generator survives iff `n ≡ m (mod 2)`.
    pub fn segment_exists(&self) -> bool {
        self.m.is_some_and(|m| (self.n - m).rem_euclid(2) == 0)
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.n < 1 || self.m.is_some_and(|m| m < 1) {
            return Err(GraphError::InvalidGraph(format!(
                "dimensions must be positive, got n={} m={:?}",
                self.n, self.m
            )));
        }
        if !self.require_connected {
            return Err(GraphError::InvalidGraph(
                "only connected graph complexes are supported".into(),
            ));
        }
        Ok(())
    }
}
