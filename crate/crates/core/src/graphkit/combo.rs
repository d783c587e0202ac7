use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use super::{Graph, GraphError};
use crate::exact::{parse_rational, Rational};

/// Finite linear combination of canonical graphs.
///
/// Coefficients are with respect to orbit-sum basis vectors (see
/// [`super::orbit_weight`]). Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearCombo {
    terms: BTreeMap<Graph, Rational>,
}

impl LinearCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(g: Graph, c: Rational) -> Self {
        let mut s = Self::new();
        s.add_term(g, c);
        s
    }

    pub fn add_term(&mut self, g: Graph, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinearCombo, s: &Rational) {
        if s.is_zero() {
            return;
        }
        for (g, c) in &other.terms {
            self.add_term(g.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &Rational) -> LinearCombo {
        let mut out = LinearCombo::new();
        out.add_scaled(self, s);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, g: &Graph) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Graph, &Rational)> {
        self.terms.iter()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Graph> {
        self.terms.keys()
    }

    /// The part whose graphs satisfy `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Graph) -> bool) -> LinearCombo {
        LinearCombo {
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        }
    }

    /// `{ "<canonical string>": "<p/q>" }`.
    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .terms
            .iter()
            .map(|(g, c)| {
                (
                    g.encode(),
                    serde_json::Value::String(format!("{}/{}", c.numer(), c.denom())),
                )
            })
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LinearCombo, GraphError> {
        let obj = v
            .as_object()
            .ok_or_else(|| GraphError::Parse(v.to_string()))?;
        let mut out = LinearCombo::new();
        for (k, c) in obj {
            let g: Graph = k.parse()?;
            let c = c
                .as_str()
                .and_then(|s| parse_rational(s).ok())
                .ok_or_else(|| GraphError::Parse(c.to_string()))?;
            out.add_term(g, c);
        }
        Ok(out)
    }
}

impl FromIterator<(Graph, Rational)> for LinearCombo {
    fn from_iter<I: IntoIterator<Item = (Graph, Rational)>>(iter: I) -> Self {
        let mut out = LinearCombo::new();
        for (g, c) in iter {
            out.add_term(g, c);
        }
        out
    }
}

impl Add<&LinearCombo> for &LinearCombo {
    type Output = LinearCombo;
    fn add(self, rhs: &LinearCombo) -> LinearCombo {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }
}

impl Sub<&LinearCombo> for &LinearCombo {
    type Output = LinearCombo;
    fn sub(self, rhs: &LinearCombo) -> LinearCombo {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LinearCombo {
    type Output = LinearCombo;
    fn neg(self) -> LinearCombo {
        LinearCombo {
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.clone(), -c.clone()))
                .collect(),
        }
    }
}
