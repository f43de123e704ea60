use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::element::TcElement;
use crate::algebra::{BaseElement, FiniteCdga};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::SparseMatrix;
use crate::scalar::{self, Scalar};

pub(crate) use crate::algebra::{is_label, merge_sign};

/// An odd generator ψ with its transgression dψ = c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddGenerator {
    pub label: String,
    pub degree: u32,
    pub transgression: BaseElement,
}

impl OddGenerator {
    pub fn new(label: &str, degree: u32, transgression: BaseElement) -> Self {
        OddGenerator { label: label.to_string(), degree, transgression }
    }
}

/// Ordered generators. The order fixes monomial canonical form and the
/// orientation of the volume element σ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratingSet {
    gens: Vec<OddGenerator>,
}

impl GeneratingSet {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, i: usize) -> &OddGenerator {
        &self.gens[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &OddGenerator> {
        self.gens.iter()
    }

    /// Number of generators of each degree, ascending by degree.
    pub fn counts_per_degree(&self) -> Vec<(u32, usize)> {
        let mut degs: Vec<u32> = self.gens.iter().map(|g| g.degree).collect();
        degs.sort_unstable();
        degs.dedup();
        degs.into_iter().map(|d| (d, self.gens.iter().filter(|g| g.degree == d).count())).collect()
    }
}

/// Maximum number of generators of a model; masks are `u32` and the
/// complexes grow as `2^N`.
pub const MAX_GENERATORS: usize = 16;

/// A base algebra extended by odd generators: the transgressive complex Ω_Ψ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransgressiveModel {
    base: Arc<FiniteCdga>,
    generators: GeneratingSet,
}

impl TransgressiveModel {
    pub fn new(base: Arc<FiniteCdga>, gens: Vec<OddGenerator>) -> Result<Self> {
        if gens.len() > MAX_GENERATORS {
            return Err(Error::ModelMismatch(format!("at most {MAX_GENERATORS} generators are supported")));
        }
        let mut seen = HashSet::new();
        for g in &gens {
            if !is_label(&g.label) {
                return Err(Error::InvalidLabel(g.label.clone()));
            }
            if !seen.insert(g.label.clone()) || base.index_of(&g.label).is_some() {
                return Err(Error::DuplicateLabel(g.label.clone()));
            }
            if g.degree % 2 == 0 {
                return Err(Error::Degree(format!("generator `{}` has even degree {}", g.label, g.degree)));
            }
            if let Some((i, _)) = g.transgression.terms().find(|&(i, _)| i >= base.dim()) {
                return Err(Error::ModelMismatch(format!("transgression of `{}` uses basis index {i}", g.label)));
            }
            if !base.is_homogeneous_of(&g.transgression, g.degree + 1) {
                return Err(Error::Degree(format!(
                    "transgression of `{}` must be homogeneous of degree {}, got {}",
                    g.label,
                    g.degree + 1,
                    base.render(&g.transgression)
                )));
            }
            if !base.is_closed(&g.transgression) {
                return Err(Error::NotClosed(format!("transgression of `{}`", g.label)));
            }
        }
        Ok(TransgressiveModel { base, generators: GeneratingSet { gens } })
    }

    pub fn base(&self) -> &FiniteCdga {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteCdga> {
        &self.base
    }

    pub fn generators(&self) -> &GeneratingSet {
        &self.generators
    }

    pub fn n_gens(&self) -> usize {
        self.generators.len()
    }

    pub fn gen(&self, i: usize) -> &OddGenerator {
        self.generators.get(i)
    }

    pub fn gen_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n_gens()) - 1) as u32
    }

    pub fn mask_degree(&self, mask: u32) -> u32 {
        bits(mask).map(|i| self.gen(i).degree).sum()
    }

    pub fn term_degree(&self, mask: u32, b: usize) -> u32 {
        self.mask_degree(mask) + self.base.degree(b)
    }

    /// Dimension of Ω_Ψ as a vector space: `2^N · dim(base)`.
    pub fn dim(&self) -> usize {
        (1usize << self.n_gens()) * self.base.dim()
    }

    pub fn index(&self, mask: u32, b: usize) -> usize {
        mask as usize * self.base.dim() + b
    }

    pub fn unindex(&self, i: usize) -> (u32, usize) {
        ((i / self.base.dim()) as u32, i % self.base.dim())
    }

    pub fn basis_element(&self, i: usize) -> TcElement {
        let (m, b) = self.unindex(i);
        TcElement::term(m, b, Scalar::one())
    }

    pub fn to_vector(&self, x: &TcElement) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        for (m, b, q) in x.flat_terms() {
            v[self.index(m, b)] = q.clone();
        }
        v
    }

    pub fn from_vector(&self, v: &[Scalar]) -> TcElement {
        let mut x = TcElement::zero();
        for (i, q) in v.iter().enumerate() {
            if !q.is_zero() {
                let (m, b) = self.unindex(i);
                x.add_term(m, b, q.clone());
            }
        }
        x
    }

    pub fn to_sparse(&self, x: &TcElement) -> std::collections::BTreeMap<usize, Scalar> {
        x.flat_terms().map(|(m, b, q)| (self.index(m, b), q.clone())).collect()
    }

    pub fn from_sparse(&self, v: &std::collections::BTreeMap<usize, Scalar>) -> TcElement {
        let mut x = TcElement::zero();
        for (&i, q) in v {
            let (m, b) = self.unindex(i);
            x.add_term(m, b, q.clone());
        }
        x
    }

    pub fn one(&self) -> TcElement {
        TcElement::term(0, self.base.unit(), Scalar::one())
    }

    pub fn generator(&self, i: usize) -> TcElement {
        TcElement::term(1 << i, self.base.unit(), Scalar::one())
    }

    pub fn from_base(&self, b: &BaseElement) -> TcElement {
        TcElement::monomial(0, b.clone())
    }

    /// The volume element σ_Ψ, the product of all generators in declared order.
    pub fn sigma(&self) -> TcElement {
        TcElement::term(self.full_mask(), self.base.unit(), Scalar::one())
    }

    pub fn contains(&self, x: &TcElement) -> bool {
        let full = self.full_mask();
        x.terms().all(|(m, b)| m & !full == 0 && b.terms().all(|(i, _)| i < self.base.dim()))
    }

    pub fn check_owned(&self, x: &TcElement, what: &str) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ModelMismatch(format!("{what} does not belong to this model")))
        }
    }

    /// Total degree, if `x` is nonzero and homogeneous.
    pub fn degree_of(&self, x: &TcElement) -> Option<u32> {
        let mut degs = x.flat_terms().map(|(m, b, _)| self.term_degree(m, b));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// `Some(true)` if every term is odd, `Some(false)` if every term is even,
    /// `None` for mixed parity. Zero counts as both; it reports `Some(false)`.
    pub fn parity_of(&self, x: &TcElement) -> Option<bool> {
        let mut par = x.flat_terms().map(|(m, b, _)| self.term_degree(m, b) % 2 == 1);
        let Some(first) = par.next() else { return Some(false) };
        par.all(|p| p == first).then_some(first)
    }

    pub fn is_odd(&self, x: &TcElement) -> bool {
        x.is_zero() || self.parity_of(x) == Some(true)
    }

    pub fn is_even(&self, x: &TcElement) -> bool {
        self.parity_of(x) == Some(false)
    }

    /// Graded-commutative product with Koszul signs.
    pub fn wedge(&self, x: &TcElement, y: &TcElement) -> TcElement {
        let mut out = TcElement::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                if i & j != 0 {
                    continue;
                }
                // ψ_I a ψ_J b = (-1)^{|a||J|} ψ_I ψ_J a b
                let a = self.base.koszul_twist(a, j.count_ones() % 2 == 1);
                let ab = self.base.mul(&a, b);
                out.add_coefficient(i | j, &ab, &scalar::sign(merge_sign(i, j)));
            }
        }
        out
    }

    /// Product of several elements, left to right.
    pub fn wedge_all<'a>(&self, xs: impl IntoIterator<Item = &'a TcElement>) -> TcElement {
        xs.into_iter().fold(self.one(), |acc, x| self.wedge(&acc, x))
    }

    /// The extended differential: dψ = c and Leibniz.
    pub fn d(&self, x: &TcElement) -> TcElement {
        let mut out = TcElement::zero();
        for (mask, a) in x.terms() {
            for (pos, i) in bits(mask).enumerate() {
                let c = &self.gen(i).transgression;
                if c.is_zero() {
                    continue;
                }
                let ca = self.base.mul(c, a);
                out.add_coefficient(mask & !(1 << i), &ca, &scalar::sign(pos % 2 == 1));
            }
            let da = self.base.d(a);
            out.add_coefficient(mask, &da, &scalar::sign(mask.count_ones() % 2 == 1));
        }
        out
    }

    /// Checks that `h` is an admissible twist: odd and closed.
    pub fn check_twist(&self, h: &TcElement) -> Result<()> {
        self.check_owned(h, "twist")?;
        if !self.is_odd(h) {
            return Err(Error::NotOdd("twist".into()));
        }
        if !self.d(h).is_zero() {
            return Err(Error::NotClosed("twist".into()));
        }
        Ok(())
    }

    /// d^H x = dx + H ∧ x.
    pub fn twisted_differential(&self, h: &TcElement, x: &TcElement) -> Result<TcElement> {
        self.check_twist(h)?;
        Ok(self.twisted_d_unchecked(h, x))
    }

    pub(crate) fn twisted_d_unchecked(&self, h: &TcElement, x: &TcElement) -> TcElement {
        self.d(x).add(&self.wedge(h, x))
    }

    /// e^F = Σ F^k / k!, for even F without a scalar part.
    pub fn exp_wedge(&self, f: &TcElement) -> Result<TcElement> {
        self.check_owned(f, "exponent")?;
        if !self.is_even(f) {
            return Err(Error::NotEven("exponent of exp_wedge".into()));
        }
        if !f.coefficient(0).coeff(self.base.unit()).is_zero() {
            return Err(Error::ScalarPart("exponent has a nonzero scalar component".into()));
        }
        let mut sum = self.one();
        let mut power = self.one();
        let mut k = 0;
        loop {
            power = self.wedge(&power, f);
            k += 1;
            if power.is_zero() {
                break;
            }
            sum.add_scaled(&power, &scalar::inv_factorial(k));
        }
        Ok(sum)
    }

    /// Linear map on Ω_Ψ as a sparse matrix, one column per basis element.
    pub fn operator_matrix(&self, f: impl Fn(&TcElement) -> TcElement + Sync + Send) -> SparseMatrix {
        let cols = exec::map_range(self.dim(), |i| self.to_sparse(&f(&self.basis_element(i))));
        SparseMatrix::from_columns(self.dim(), cols)
    }

    /// Matrix of `d` (or `d^H` when a twist is given).
    pub fn differential_matrix(&self, h: Option<&TcElement>) -> SparseMatrix {
        match h {
            Some(h) => self.operator_matrix(|x| self.twisted_d_unchecked(h, x)),
            None => self.operator_matrix(|x| self.d(x)),
        }
    }

    /// Substitutes generator images into `x`: `ψ_I ⊗ a ↦ img(i1)∧…∧img(ik)∧a`,
    /// evaluated in `target`, whose base must equal this model's base.
    pub fn substitute(&self, x: &TcElement, images: &[TcElement], target: &TransgressiveModel) -> TcElement {
        assert_eq!(images.len(), self.n_gens());
        let mut out = TcElement::zero();
        for (mask, a) in x.terms() {
            let mut prod = target.one();
            for i in bits(mask) {
                prod = target.wedge(&prod, &images[i]);
            }
            out.add_scaled(&target.wedge(&prod, &target.from_base(a)), &Scalar::one());
        }
        out
    }

    /// Same model with one generator's transgression replaced, for negative tests.
    pub fn with_transgression(&self, i: usize, c: BaseElement) -> Result<Self> {
        let mut gens = self.generators.gens.clone();
        gens[i].transgression = c;
        Self::new(self.base.clone(), gens)
    }

    /// The same generators over a base with a torus factor attached.
    pub fn over(&self, base: Arc<FiniteCdga>) -> Result<Self> {
        Self::new(base, self.generators.gens.clone())
    }
}

/// Set bit positions of `mask`, ascending.
pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(i)
    })
}

/// Model of the bundle of unitary k-frames of a rank-n Hermitian bundle with
/// Chern representatives `chern = (c_1, …, c_n)`: generators ψ_{2j−1} for
/// j = n−k+1..n with dψ_{2j−1} = c_j, labelled `psi{2j-1}`.
pub fn make_partial_frame_model(base: Arc<FiniteCdga>, chern: &[BaseElement], k: usize) -> Result<TransgressiveModel> {
    make_partial_frame_model_labeled(base, chern, k, "psi")
}

pub fn make_partial_frame_model_labeled(
    base: Arc<FiniteCdga>,
    chern: &[BaseElement],
    k: usize,
    prefix: &str,
) -> Result<TransgressiveModel> {
    let n = chern.len();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    for (j, c) in chern.iter().enumerate() {
        let j = j as u32 + 1;
        if !base.is_homogeneous_of(c, 2 * j) {
            return Err(Error::Degree(format!("Chern representative c_{j} must have degree {}", 2 * j)));
        }
        if !base.is_closed(c) {
            return Err(Error::NotClosed(format!("Chern representative c_{j}")));
        }
    }
    let gens = (n - k + 1..=n)
        .map(|j| OddGenerator::new(&format!("{prefix}{}", 2 * j - 1), 2 * j as u32 - 1, chern[j - 1].clone()))
        .collect();
    TransgressiveModel::new(base, gens)
}
