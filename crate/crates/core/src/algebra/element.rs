use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Sparse rational combination of basis elements of a [`FiniteCdga`](super::FiniteCdga).
///
/// May mix degrees. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseElement {
    terms: BTreeMap<usize, Scalar>,
}

impl BaseElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Scalar::one())
    }

    pub fn term(i: usize, q: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(i, q);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Scalar)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (i, q) in terms {
            e.add_term(i, q);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.terms.iter().map(|(&i, q)| (i, q))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.terms.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, i: usize, q: Scalar) {
        crate::linalg::add_entry(&mut self.terms, i, q);
    }

    pub fn add_scaled(&mut self, other: &BaseElement, q: &Scalar) {
        if q.is_zero() {
            return;
        }
        for (&i, c) in &other.terms {
            self.add_term(i, c * q);
        }
    }

    pub fn add(&self, other: &BaseElement) -> BaseElement {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &BaseElement) -> BaseElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn neg(&self) -> BaseElement {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, q: &Scalar) -> BaseElement {
        if q.is_zero() {
            return Self::zero();
        }
        BaseElement { terms: self.terms.iter().map(|(&i, c)| (i, c * q)).collect() }
    }

    /// Keeps only the terms whose basis index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> BaseElement {
        BaseElement {
            terms: self.terms.iter().filter(|(&i, _)| keep(i)).map(|(&i, q)| (i, q.clone())).collect(),
        }
    }

    pub fn to_vector(&self, dim: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        for (&i, q) in &self.terms {
            v[i] = q.clone();
        }
        v
    }

    pub fn from_vector(v: &[Scalar]) -> BaseElement {
        Self::from_terms(v.iter().enumerate().map(|(i, q)| (i, q.clone())))
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear(&self, image: impl Fn(usize) -> BaseElement) -> BaseElement {
        let mut out = Self::zero();
        for (&i, q) in &self.terms {
            out.add_scaled(&image(i), q);
        }
        out
    }
}
