use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::BaseElement;
use crate::scalar::Scalar;

/// Element of a transgressive complex: a sparse map from generator
/// monomials (bitmasks in declaration order) to base coefficients.
///
/// The term `(mask, b)` stands for `ψ_{i1} ∧ … ∧ ψ_{ik} ∧ b` with
/// `i1 < … < ik` the set bits of `mask`. Which model an element belongs to
/// is carried by the operations that take it, not by the element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TcElement {
    terms: BTreeMap<u32, BaseElement>,
}

impl TcElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(mask: u32, coeff: BaseElement) -> Self {
        let mut x = Self::zero();
        x.add_coefficient(mask, &coeff, &Scalar::one());
        x
    }

    pub fn term(mask: u32, basis: usize, q: Scalar) -> Self {
        Self::monomial(mask, BaseElement::term(basis, q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BaseElement)> + '_ {
        self.terms.iter().map(|(&m, b)| (m, b))
    }

    /// Flat iteration over `(mask, basis index, coefficient)`.
    pub fn flat_terms(&self) -> impl Iterator<Item = (u32, usize, &Scalar)> + '_ {
        self.terms.iter().flat_map(|(&m, b)| b.terms().map(move |(i, q)| (m, i, q)))
    }

    pub fn coefficient(&self, mask: u32) -> BaseElement {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn add_coefficient(&mut self, mask: u32, b: &BaseElement, q: &Scalar) {
        let entry = self.terms.entry(mask).or_default();
        entry.add_scaled(b, q);
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add_term(&mut self, mask: u32, basis: usize, q: Scalar) {
        let entry = self.terms.entry(mask).or_default();
        entry.add_term(basis, q);
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add_scaled(&mut self, other: &TcElement, q: &Scalar) {
        for (&m, b) in &other.terms {
            self.add_coefficient(m, b, q);
        }
    }

    pub fn add(&self, other: &TcElement) -> TcElement {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &TcElement) -> TcElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn neg(&self) -> TcElement {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, q: &Scalar) -> TcElement {
        let mut out = Self::zero();
        out.add_scaled(self, q);
        out
    }

    /// Union of the generator masks of all terms.
    pub fn support_mask(&self) -> u32 {
        self.terms.keys().fold(0, |acc, m| acc | m)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients(&self, mut f: impl FnMut(u32, &BaseElement) -> BaseElement) -> TcElement {
        let mut out = Self::zero();
        for (&m, b) in &self.terms {
            out.add_coefficient(m, &f(m, b), &Scalar::one());
        }
        out
    }

    /// Keeps the terms whose mask satisfies `keep`.
    pub fn filter_masks(&self, mut keep: impl FnMut(u32) -> bool) -> TcElement {
        TcElement { terms: self.terms.iter().filter(|(&m, _)| keep(m)).map(|(&m, b)| (m, b.clone())).collect() }
    }

    /// Relabels masks by an injective map.
    pub fn remap_masks(&self, f: impl Fn(u32) -> u32) -> TcElement {
        let mut out = Self::zero();
        for (&m, b) in &self.terms {
            out.add_coefficient(f(m), b, &Scalar::one());
        }
        out
    }
}
