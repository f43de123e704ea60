use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{merge_sign, BaseElement, FiniteCdga};
use crate::linalg::SparseMatrix;
use crate::scalar::{self, Scalar};
use crate::transgressive::{bits, TransgressiveModel};

/// An element of End(∧⟨ψ_1..ψ_N⟩) ⊗ Ω(M), stored as a `2^N × 2^N` matrix
/// with base-algebra entries.
///
/// Entry `(I, J)` acts by `ψ_J ⊗ a ↦ ψ_I ⊗ (M_IJ · a)`. A Clifford word `w`
/// followed by multiplication by a base element `b` has entries
/// `(−1)^{|b||J|} w_IJ · b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    n: usize,
    entries: Vec<BaseElement>,
}

/// One normal-ordered word `ψ_A ∂_B` followed by a base basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordTerm {
    pub create: u32,
    pub annihilate: u32,
    pub base: usize,
    pub coef: Scalar,
}

/// Applies `∂_i` to `±ψ_J`.
fn annihilate_mask(i: usize, j: u32) -> Option<(u32, bool)> {
    let bit = 1u32 << i;
    (j & bit != 0).then(|| (j & !bit, merge_sign(bit, j & !bit)))
}

/// Applies `ψ_i ∧` to `±ψ_J`.
fn create_mask(i: usize, j: u32) -> Option<(u32, bool)> {
    let bit = 1u32 << i;
    (j & bit == 0).then(|| (j | bit, merge_sign(bit, j)))
}

/// `ψ_{a1}…ψ_{ak} ∂_{b1}…∂_{bl}` (ascending) applied to `ψ_J`.
fn word_on(create: u32, annihilate: u32, j: u32) -> Option<(u32, bool)> {
    let mut m = j;
    let mut odd = false;
    for i in bits(annihilate).collect::<Vec<_>>().into_iter().rev() {
        let (m2, s) = annihilate_mask(i, m)?;
        m = m2;
        odd ^= s;
    }
    for i in bits(create).collect::<Vec<_>>().into_iter().rev() {
        let (m2, s) = create_mask(i, m)?;
        m = m2;
        odd ^= s;
    }
    Some((m, odd))
}

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        CliffordElement { n, entries: vec![BaseElement::zero(); 1 << (2 * n)] }
    }

    pub fn identity(n: usize, base: &FiniteCdga) -> Self {
        Self::from_base(n, base, &base.one())
    }

    /// `ψ_i ∧`.
    pub fn create(n: usize, base: &FiniteCdga, i: usize) -> Self {
        Self::from_mask_map(n, base, |j| create_mask(i, j))
    }

    /// `∂_{ψ_i}`, the odd derivation with `∂_i ψ_j = δ_ij`.
    pub fn annihilate(n: usize, base: &FiniteCdga, i: usize) -> Self {
        Self::from_mask_map(n, base, |j| annihilate_mask(i, j))
    }

    /// The normal-ordered word `ψ_A ∂_B`.
    pub fn word(n: usize, base: &FiniteCdga, create: u32, annihilate: u32) -> Self {
        Self::from_mask_map(n, base, |j| word_on(create, annihilate, j))
    }

    /// Matrix unit `E_IJ` with entry `b`.
    pub fn unit_entry(n: usize, i: u32, j: u32, b: BaseElement) -> Self {
        let mut c = Self::zero(n);
        c.set(i, j, b);
        c
    }

    fn from_mask_map(n: usize, base: &FiniteCdga, f: impl Fn(u32) -> Option<(u32, bool)>) -> Self {
        let mut c = Self::zero(n);
        for j in 0..1u32 << n {
            if let Some((i, odd)) = f(j) {
                c.set(i, j, BaseElement::term(base.unit(), scalar::sign(odd)));
            }
        }
        c
    }

    /// Multiplication by a base element, `m_b`.
    pub fn from_base(n: usize, base: &FiniteCdga, b: &BaseElement) -> Self {
        let mut c = Self::zero(n);
        for j in 0..1u32 << n {
            c.set(j, j, base.koszul_twist(b, j.count_ones() % 2 == 1));
        }
        c
    }

    pub fn n_gens(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, i: u32, j: u32) -> &BaseElement {
        &self.entries[(i as usize) * self.size() + j as usize]
    }

    pub fn set(&mut self, i: u32, j: u32, b: BaseElement) {
        let s = self.size();
        self.entries[(i as usize) * s + j as usize] = b;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BaseElement::is_zero)
    }

    /// Nonzero entries as `(I, J, value)`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (u32, u32, &BaseElement)> + '_ {
        let s = self.size();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero())
            .map(move |(k, b)| ((k / s) as u32, (k % s) as u32, b))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        CliffordElement { n: self.n, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, q: &Scalar) -> Self {
        CliffordElement { n: self.n, entries: self.entries.iter().map(|a| a.scale(q)).collect() }
    }

    /// Operator composition `self ∘ other`.
    pub fn compose(&self, other: &Self, base: &FiniteCdga) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (i, j, a) in self.nonzero_entries() {
            for k in 0..other.size() as u32 {
                let b = other.entry(j, k);
                if !b.is_zero() {
                    let idx = i as usize * self.size() + k as usize;
                    out.entries[idx] = out.entries[idx].add(&base.mul(a, b));
                }
            }
        }
        out
    }

    /// `self ∘ m_b`.
    pub fn times_base(&self, base: &FiniteCdga, b: &BaseElement) -> Self {
        self.compose(&Self::from_base(self.n, base, b), base)
    }

    /// Splits into even and odd operator parts.
    pub fn parity_split(&self, base: &FiniteCdga) -> (Self, Self) {
        let (mut even, mut odd) = (Self::zero(self.n), Self::zero(self.n));
        for (i, j, a) in self.nonzero_entries() {
            let shift = (i.count_ones() + j.count_ones()) % 2 == 1;
            let (ev, od) = (base.even_part(a), base.odd_part(a));
            let (to_odd, to_even) = if shift { (ev, od) } else { (od, ev) };
            even.set(i, j, to_even);
            odd.set(i, j, to_odd);
        }
        (even, odd)
    }

    pub fn is_odd(&self, base: &FiniteCdga) -> bool {
        self.parity_split(base).0.is_zero()
    }

    pub fn is_even(&self, base: &FiniteCdga) -> bool {
        self.parity_split(base).1.is_zero()
    }

    /// The operator on Ω_Ψ as a sparse matrix in the model's basis.
    pub fn operator(&self, model: &TransgressiveModel) -> SparseMatrix {
        assert_eq!(self.n, model.n_gens(), "Clifford element and model disagree on N");
        let base = model.base();
        let mut cols = vec![BTreeMap::new(); model.dim()];
        for (i, j, m) in self.nonzero_entries() {
            for a in 0..base.dim() {
                let col = &mut cols[model.index(j, a)];
                for (k, q) in base.mul_basis_elem(m, a).terms() {
                    crate::linalg::add_entry(col, model.index(i, k), q.clone());
                }
            }
        }
        SparseMatrix::from_columns(model.dim(), cols)
    }

    /// Expansion in normal-ordered words `ψ_A ∂_B ⊗ b`, ordered by `|B|`,
    /// then `B`, `A` and `b`.
    pub fn words(&self, base: &FiniteCdga) -> Vec<WordTerm> {
        let s = self.size() as u32;
        let mut out = Vec::new();
        for b in 0..base.dim() {
            // scalar matrix of the coefficient of b, with the base sign undone
            let mut m: Vec<Scalar> = vec![Scalar::zero(); (s * s) as usize];
            for (i, j, a) in self.nonzero_entries() {
                let q = a.coeff(b);
                if !q.is_zero() {
                    let odd = base.is_odd(b) && j.count_ones() % 2 == 1;
                    m[(i * s + j) as usize] = if odd { -q } else { q };
                }
            }
            let mut js: Vec<u32> = (0..s).collect();
            js.sort_by_key(|j| (j.count_ones(), *j));
            for &j in &js {
                for i in 0..s {
                    let q = m[(i * s + j) as usize].clone();
                    if q.is_zero() {
                        continue;
                    }
                    let (_, odd) = word_on(i, j, j).expect("word acts on its own annihilation set");
                    let coef = if odd { -q } else { q };
                    for jj in 0..s {
                        if let Some((ii, o)) = word_on(i, j, jj) {
                            let v = &mut m[(ii * s + jj) as usize];
                            *v -= &coef * scalar::sign(o);
                        }
                    }
                    out.push(WordTerm { create: i, annihilate: j, base: b, coef });
                }
            }
        }
        out.sort_by_key(|w| (w.annihilate.count_ones(), w.annihilate, w.create, w.base));
        out
    }

    /// Inverse of [`words`](Self::words).
    pub fn from_words(n: usize, base: &FiniteCdga, words: &[WordTerm]) -> Self {
        let mut out = Self::zero(n);
        for w in words {
            let t = Self::word(n, base, w.create, w.annihilate).times_base(base, &BaseElement::term(w.base, w.coef.clone()));
            out = out.add(&t);
        }
        out
    }
}

impl FiniteCdga {
    /// `m · e_a` for a basis index `a`.
    pub(crate) fn mul_basis_elem(&self, m: &BaseElement, a: usize) -> BaseElement {
        let mut out = BaseElement::zero();
        for (i, q) in m.terms() {
            out.add_scaled(self.mul_basis(i, a), q);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn pt() -> FiniteCdga {
        FiniteCdga::point()
    }

    #[test]
    fn clifford_relations() {
        let b = pt();
        let n = 3;
        let id = CliffordElement::identity(n, &b);
        for i in 0..n {
            for j in 0..n {
                let (pi, pj) = (CliffordElement::create(n, &b, i), CliffordElement::create(n, &b, j));
                let (di, dj) = (CliffordElement::annihilate(n, &b, i), CliffordElement::annihilate(n, &b, j));
                assert!(pi.compose(&pj, &b).add(&pj.compose(&pi, &b)).is_zero());
                assert!(di.compose(&dj, &b).add(&dj.compose(&di, &b)).is_zero());
                let anti = pi.compose(&dj, &b).add(&dj.compose(&pi, &b));
                let want = if i == j { id.clone() } else { CliffordElement::zero(n) };
                assert_eq!(anti, want);
            }
        }
    }

    #[test]
    fn word_expansion_round_trip() {
        let b = pt();
        let n = 2;
        // ∂_1 ψ_1 = 1 − ψ_1 ∂_1
        let x = CliffordElement::annihilate(n, &b, 0).compose(&CliffordElement::create(n, &b, 0), &b);
        let w = x.words(&b);
        assert_eq!(w.len(), 2);
        assert!(w.contains(&WordTerm { create: 0, annihilate: 0, base: 0, coef: int(1) }));
        assert!(w.contains(&WordTerm { create: 1, annihilate: 1, base: 0, coef: int(-1) }));
        assert_eq!(CliffordElement::from_words(n, &b, &w), x);
        for i in 0..4u32 {
            for j in 0..4u32 {
                let e = CliffordElement::unit_entry(n, i, j, b.one());
                assert_eq!(CliffordElement::from_words(n, &b, &e.words(&b)), e);
            }
        }
    }

    #[test]
    fn parity_of_generators() {
        let b = pt();
        assert!(CliffordElement::create(2, &b, 1).is_odd(&b));
        assert!(CliffordElement::annihilate(2, &b, 0).is_odd(&b));
        assert!(CliffordElement::identity(2, &b).is_even(&b));
    }
}
