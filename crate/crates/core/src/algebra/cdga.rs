use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::element::BaseElement;
use super::validate::{self, ValidationReport};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A degree −1 linear operator on the base, modelling the contraction ι_X
/// with a vector field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub name: String,
    pub images: Vec<BaseElement>,
}

/// Finite-dimensional graded-commutative differential algebra given by
/// structure constants on a labelled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCdga {
    labels: Vec<String>,
    degrees: Vec<u32>,
    unit: usize,
    products: Vec<BaseElement>,
    differential: Vec<BaseElement>,
    contractions: Vec<Contraction>,
    index: HashMap<String, usize>,
}

impl FiniteCdga {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn one(&self) -> BaseElement {
        BaseElement::basis(self.unit)
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn basis_of_degree(&self, k: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &BaseElement {
        &self.products[i * self.dim() + j]
    }

    pub fn mul(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        let mut out = BaseElement::zero();
        for (i, p) in a.terms() {
            for (j, q) in b.terms() {
                out.add_scaled(self.mul_basis(i, j), &(p * q));
            }
        }
        out
    }

    pub fn d_basis(&self, i: usize) -> &BaseElement {
        &self.differential[i]
    }

    pub fn d(&self, a: &BaseElement) -> BaseElement {
        a.map_linear(|i| self.differential[i].clone())
    }

    pub fn contractions(&self) -> &[Contraction] {
        &self.contractions
    }

    pub fn contraction_index(&self, name: &str) -> Option<usize> {
        self.contractions.iter().position(|c| c.name == name)
    }

    pub fn contract(&self, k: usize, a: &BaseElement) -> BaseElement {
        let c = &self.contractions[k];
        a.map_linear(|i| c.images[i].clone())
    }

    /// The degree of `a` if it is nonzero and homogeneous.
    pub fn degree_of(&self, a: &BaseElement) -> Option<u32> {
        let mut degs = a.terms().map(|(i, _)| self.degrees[i]);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True when every term of `a` has degree `k` (vacuously for zero).
    pub fn is_homogeneous_of(&self, a: &BaseElement, k: u32) -> bool {
        a.terms().all(|(i, _)| self.degrees[i] == k)
    }

    pub fn component(&self, a: &BaseElement, k: u32) -> BaseElement {
        a.filter(|i| self.degrees[i] == k)
    }

    pub fn odd_part(&self, a: &BaseElement) -> BaseElement {
        a.filter(|i| self.is_odd(i))
    }

    pub fn even_part(&self, a: &BaseElement) -> BaseElement {
        a.filter(|i| !self.is_odd(i))
    }

    /// `(-1)^{|b|·k}` applied termwise to `a`, i.e. the sign picked up when
    /// `a` is moved past something of parity `k`.
    pub fn koszul_twist(&self, a: &BaseElement, k_odd: bool) -> BaseElement {
        if !k_odd {
            return a.clone();
        }
        BaseElement::from_terms(a.terms().map(|(i, q)| (i, if self.is_odd(i) { -q.clone() } else { q.clone() })))
    }

    pub fn is_closed(&self, a: &BaseElement) -> bool {
        self.d(a).is_zero()
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// Renders a base element as `q * label + ...`.
    pub fn render(&self, a: &BaseElement) -> String {
        crate::scenario::render_terms(a.terms().map(|(i, q)| (q.clone(), None, self.labels[i].clone())))
    }

    /// The one-point algebra, spanned by its unit.
    pub fn point() -> FiniteCdga {
        let mut b = CdgaBuilder::new();
        b.basis("1", 0);
        b.unit("1");
        b.build().expect("point algebra")
    }

    /// Constant forms on the torus T^n: the exterior algebra on degree-one
    /// generators `prefix1..prefixn` with zero differential and the dual
    /// contractions `iota1..iotan`.
    pub fn torus(n: usize, prefix: &str) -> FiniteCdga {
        Self::point().with_torus_factor(n, prefix, "iota")
    }

    /// Tensor product with constant forms on T^n. Basis indices of `self`
    /// are preserved.
    ///
    /// Basis elements are `b ∧ t_S`; labels are `b_tS`, or `tS` when `b` is the
    /// unit. Existing contractions extend by `ι(b t_S) = ι(b) t_S`; new
    /// contractions `iota_prefix{i}` are dual to the new generators.
    pub fn with_torus_factor(&self, n: usize, prefix: &str, contraction_prefix: &str) -> FiniteCdga {
        assert!(n <= 8, "torus factor too large");
        let nb = self.dim();
        let subsets = 1usize << n;
        let idx = |b: usize, s: usize| s * nb + b;
        let mut labels = Vec::with_capacity(nb * subsets);
        let mut degrees = Vec::with_capacity(nb * subsets);
        for s in 0..subsets {
            let tag: String = (0..n).filter(|i| s >> i & 1 == 1).map(|i| format!("{prefix}{}", i + 1)).collect();
            for b in 0..nb {
                let label = match (s, b == self.unit) {
                    (0, _) => self.labels[b].clone(),
                    (_, true) => tag.clone(),
                    (_, false) => format!("{}_{}", self.labels[b], tag),
                };
                labels.push(label);
                degrees.push(self.degrees[b] + s.count_ones());
            }
        }
        let dim = nb * subsets;
        let lift = |e: &BaseElement, s: usize, sign_odd: bool| {
            let mut out = BaseElement::zero();
            for (b, q) in e.terms() {
                out.add_term(idx(b, s), if sign_odd { -q.clone() } else { q.clone() });
            }
            out
        };
        let mut products = vec![BaseElement::zero(); dim * dim];
        for s in 0..subsets {
            for t in 0..subsets {
                if s & t != 0 {
                    continue;
                }
                let wedge_sign = merge_sign(s as u32, t as u32);
                for b in 0..nb {
                    for c in 0..nb {
                        // (b t_S)(c t_T) = (-1)^{|S||c|} b c t_S t_T
                        let swap = s.count_ones() % 2 == 1 && self.is_odd(c);
                        let odd = swap ^ wedge_sign;
                        products[idx(b, s) * dim + idx(c, t)] = lift(self.mul_basis(b, c), s | t, odd);
                    }
                }
            }
        }
        let mut differential = vec![BaseElement::zero(); dim];
        for s in 0..subsets {
            for b in 0..nb {
                differential[idx(b, s)] = lift(&self.differential[b], s, false);
            }
        }
        let mut contractions = Vec::new();
        for c in &self.contractions {
            let mut images = vec![BaseElement::zero(); dim];
            for s in 0..subsets {
                for b in 0..nb {
                    images[idx(b, s)] = lift(&c.images[b], s, false);
                }
            }
            contractions.push(Contraction { name: c.name.clone(), images });
        }
        for k in 0..n {
            let mut images = vec![BaseElement::zero(); dim];
            for s in 0..subsets {
                if s >> k & 1 == 0 {
                    continue;
                }
                // ι_k(b t_S) = (-1)^{|b|} b ι_k(t_S), ι_k(t_S) = (-1)^{#S below k} t_{S∖k}
                let below = (s & ((1 << k) - 1)).count_ones() % 2 == 1;
                for b in 0..nb {
                    let odd = below ^ self.is_odd(b);
                    images[idx(b, s)] = BaseElement::term(idx(b, s & !(1 << k)), scalar::sign(odd));
                }
            }
            contractions.push(Contraction { name: format!("{contraction_prefix}{}", k + 1), images });
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        FiniteCdga { labels, degrees, unit: self.unit, products, differential, contractions, index }
    }
}

/// Sign of merging two disjoint ascending index sets: true when odd.
pub(crate) fn merge_sign(s: u32, t: u32) -> bool {
    let mut inversions = 0u32;
    let mut rest = s;
    while rest != 0 {
        let i = rest.trailing_zeros();
        inversions += (t & ((1u32 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    inversions % 2 == 1
}

pub(crate) fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Incremental construction of a [`FiniteCdga`] from labelled data.
///
/// Unit products are filled in automatically, and a product declared for
/// one order is mirrored to the other with the graded-commutative sign
/// unless that order was declared too. Axioms are not checked here; see
/// [`FiniteCdga::validate`].
#[derive(Clone, Debug, Default)]
pub struct CdgaBuilder {
    labels: Vec<String>,
    degrees: Vec<u32>,
    unit: Option<String>,
    products: BTreeMap<(usize, usize), BaseElement>,
    differential: BTreeMap<usize, BaseElement>,
    contractions: Vec<(String, BTreeMap<usize, BaseElement>)>,
}

impl CdgaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(&mut self, label: &str, degree: u32) -> usize {
        self.labels.push(label.to_string());
        self.degrees.push(degree);
        self.labels.len() - 1
    }

    pub fn unit(&mut self, label: &str) -> &mut Self {
        self.unit = Some(label.to_string());
        self
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Base element from `(coefficient, label)` pairs.
    pub fn elem(&self, terms: &[(i64, &str)]) -> Result<BaseElement> {
        let mut e = BaseElement::zero();
        for &(q, l) in terms {
            e.add_term(self.index(l)?, scalar::int(q));
        }
        Ok(e)
    }

    pub fn product(&mut self, a: &str, b: &str, value: BaseElement) -> Result<&mut Self> {
        let key = (self.index(a)?, self.index(b)?);
        self.products.insert(key, value);
        Ok(self)
    }

    pub fn differential(&mut self, a: &str, value: BaseElement) -> Result<&mut Self> {
        let i = self.index(a)?;
        self.differential.insert(i, value);
        Ok(self)
    }

    pub fn contraction(&mut self, name: &str, images: Vec<(&str, BaseElement)>) -> Result<&mut Self> {
        let mut map = BTreeMap::new();
        for (l, v) in images {
            map.insert(self.index(l)?, v);
        }
        self.contractions.push((name.to_string(), map));
        Ok(self)
    }

    pub fn build(&self) -> Result<FiniteCdga> {
        let n = self.labels.len();
        let mut index = HashMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if !(is_label(l) || l == "1") {
                return Err(Error::InvalidLabel(l.clone()));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let unit_label = self.unit.as_deref().ok_or_else(|| Error::InvalidAlgebra("no unit declared".into()))?;
        let unit = *index.get(unit_label).ok_or_else(|| Error::UnknownLabel(unit_label.to_string()))?;
        let check = |e: &BaseElement| -> Result<()> {
            match e.terms().find(|&(i, _)| i >= n) {
                Some((i, _)) => Err(Error::InvalidAlgebra(format!("basis index {i} out of range"))),
                None => Ok(()),
            }
        };
        let mut products = vec![BaseElement::zero(); n * n];
        for (&(i, j), v) in &self.products {
            check(v)?;
            products[i * n + j] = v.clone();
        }
        for (&(i, j), v) in &self.products {
            if !self.products.contains_key(&(j, i)) {
                let odd = self.degrees[i] % 2 == 1 && self.degrees[j] % 2 == 1;
                products[j * n + i] = v.scale(&scalar::sign(odd));
            }
        }
        for k in 0..n {
            if !self.products.contains_key(&(unit, k)) {
                products[unit * n + k] = BaseElement::basis(k);
            }
            if !self.products.contains_key(&(k, unit)) {
                products[k * n + unit] = BaseElement::basis(k);
            }
        }
        let mut differential = vec![BaseElement::zero(); n];
        for (&i, v) in &self.differential {
            check(v)?;
            differential[i] = v.clone();
        }
        let mut contractions = Vec::new();
        let mut names = std::collections::HashSet::new();
        for (name, map) in &self.contractions {
            if !is_label(name) || index.contains_key(name) {
                return Err(Error::InvalidLabel(name.clone()));
            }
            if !names.insert(name.clone()) {
                return Err(Error::DuplicateLabel(name.clone()));
            }
            let mut images = vec![BaseElement::zero(); n];
            for (&i, v) in map {
                check(v)?;
                images[i] = v.clone();
            }
            contractions.push(Contraction { name: name.clone(), images });
        }
        Ok(FiniteCdga {
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            unit,
            products,
            differential,
            contractions,
            index,
        })
    }
}

impl FiniteCdga {
    /// Nonzero products `(i, j, value)` with `i <= j`, excluding the unit.
    pub fn declared_products(&self) -> Vec<(usize, usize, &BaseElement)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if i == self.unit || j == self.unit {
                    continue;
                }
                let v = self.mul_basis(i, j);
                if !v.is_zero() {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Products `(i, j)` with `i > j` that are not the graded-commutative
    /// mirror of `(j, i)`; empty for every valid algebra.
    pub fn asymmetric_products(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..i {
                if i == self.unit || j == self.unit {
                    continue;
                }
                let odd = self.is_odd(i) && self.is_odd(j);
                if *self.mul_basis(i, j) != self.mul_basis(j, i).scale(&scalar::sign(odd)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn coefficient_is_constant(&self, a: &BaseElement) -> Option<Scalar> {
        if a.is_zero() {
            return Some(Scalar::zero());
        }
        (a.len() == 1 && !a.coeff(self.unit).is_zero()).then(|| a.coeff(self.unit))
    }
}
