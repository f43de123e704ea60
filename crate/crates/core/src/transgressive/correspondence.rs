use std::sync::Arc;

use super::element::TcElement;
use super::model::{merge_sign, TransgressiveModel};
use crate::algebra::BaseElement;
use crate::error::{Error, Result};
use crate::scalar;

/// One of the two fibrations of a correspondence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    E,
    Ehat,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::E => Side::Ehat,
            Side::Ehat => Side::E,
        }
    }
}

/// The fibre product E ×_M Ê, modelled by the generators of E followed by
/// those of Ê over the shared base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    e: TransgressiveModel,
    ehat: TransgressiveModel,
    total: TransgressiveModel,
}

pub fn make_correspondence(e: &TransgressiveModel, ehat: &TransgressiveModel) -> Result<Correspondence> {
    if !Arc::ptr_eq(e.base_arc(), ehat.base_arc()) && e.base() != ehat.base() {
        return Err(Error::ModelMismatch("the two fibrations have different base algebras".into()));
    }
    let gens = e.generators().iter().chain(ehat.generators().iter()).cloned().collect();
    let total = TransgressiveModel::new(e.base_arc().clone(), gens)?;
    Ok(Correspondence { e: e.clone(), ehat: ehat.clone(), total })
}

impl Correspondence {
    pub fn model(&self) -> &TransgressiveModel {
        &self.total
    }

    pub fn e(&self) -> &TransgressiveModel {
        &self.e
    }

    pub fn ehat(&self) -> &TransgressiveModel {
        &self.ehat
    }

    pub fn side(&self, side: Side) -> &TransgressiveModel {
        match side {
            Side::E => &self.e,
            Side::Ehat => &self.ehat,
        }
    }

    /// Generator bits of one side inside the total model.
    pub fn side_mask(&self, side: Side) -> u32 {
        match side {
            Side::E => self.e.full_mask(),
            Side::Ehat => self.ehat.full_mask() << self.e.n_gens(),
        }
    }

    fn shift(&self, side: Side) -> u32 {
        match side {
            Side::E => 0,
            Side::Ehat => self.e.n_gens() as u32,
        }
    }

    /// Pullback `p^*` (side E) or `p̂^*` (side Ê) into the correspondence.
    pub fn pullback(&self, side: Side, x: &TcElement) -> Result<TcElement> {
        self.side(side).check_owned(x, "pullback argument")?;
        Ok(self.pullback_unchecked(side, x))
    }

    pub(crate) fn pullback_unchecked(&self, side: Side, x: &TcElement) -> TcElement {
        let s = self.shift(side);
        x.remap_masks(|m| m << s)
    }

    /// Integrates out the generators of `side`, landing in the other side's
    /// model: `p̂_*` for side E and `p_*` for side Ê.
    pub fn fiber_integrate(&self, side: Side, x: &TcElement) -> Result<TcElement> {
        self.total.check_owned(x, "fiber integration argument")?;
        Ok(self.fiber_integrate_unchecked(side, x))
    }

    pub(crate) fn fiber_integrate_unchecked(&self, side: Side, x: &TcElement) -> TcElement {
        fiber_integrate_mask(&self.total, x, self.side_mask(side))
    }

    /// Integrates out every generator: `π_* ∘ p_*`-type maps to the base.
    pub fn integrate_all(&self, x: &TcElement) -> BaseElement {
        fiber_integrate_mask(&self.total, x, self.total.full_mask()).coefficient(0)
    }

    /// The same correspondence with the roles of E and Ê exchanged.
    pub fn swapped(&self) -> Result<Correspondence> {
        make_correspondence(&self.ehat, &self.e)
    }

    /// Re-expresses an element of this correspondence in the swapped one.
    pub fn swap_element(&self, x: &TcElement) -> TcElement {
        let n = self.e.n_gens() as u32;
        let nh = self.ehat.n_gens() as u32;
        let lo = self.e.full_mask();
        let mut out = TcElement::zero();
        for (m, b) in x.terms() {
            let (a, c) = (m & lo, m >> n);
            // ψ_A ψ̂_C b = (-1)^{|A||C|} ψ̂_C ψ_A b
            let odd = a.count_ones() % 2 == 1 && c.count_ones() % 2 == 1;
            out.add_coefficient(c | (a << nh), b, &scalar::sign(odd));
        }
        out
    }
}

/// Right-extraction fibre integration over the generators in `s`.
///
/// A term `ψ_M ⊗ b` with `s ⊆ M` is rewritten as `ρ ∧ σ_s` and sent to `ρ`;
/// other terms vanish. Remaining generator bits are compressed so that the
/// result is indexed by the generators outside `s`, in order.
pub fn fiber_integrate_mask(model: &TransgressiveModel, x: &TcElement, s: u32) -> TcElement {
    let base = model.base();
    let s_odd = s.count_ones() % 2 == 1;
    let full = model.full_mask();
    let mut out = TcElement::zero();
    for (m, b) in x.terms() {
        if m & s != s {
            continue;
        }
        let r = m & !s;
        // ψ_M b = ±ψ_R ψ_S b = ±(-1)^{|S||b|} ψ_R b ψ_S
        let b = base.koszul_twist(b, s_odd);
        out.add_coefficient(compress(r, full & !s), &b, &scalar::sign(merge_sign(r, s)));
    }
    out
}

/// Packs the bits of `m` selected by `keep` into the low positions.
fn compress(m: u32, keep: u32) -> u32 {
    let mut out = 0;
    let mut pos = 0;
    let mut rest = keep;
    while rest != 0 {
        let i = rest.trailing_zeros();
        if m >> i & 1 == 1 {
            out |= 1 << pos;
        }
        pos += 1;
        rest &= rest - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CdgaBuilder, FiniteCdga};
    use crate::scalar::int;
    use crate::transgressive::OddGenerator;

    fn s4() -> Arc<FiniteCdga> {
        let mut b = CdgaBuilder::new();
        b.basis("1", 0);
        b.basis("u", 4);
        b.unit("1");
        Arc::new(b.build().unwrap())
    }

    fn hopf_pair() -> Correspondence {
        let base = s4();
        let u = BaseElement::basis(1);
        let e = TransgressiveModel::new(base.clone(), vec![OddGenerator::new("psi", 3, u.clone())]).unwrap();
        let eh = TransgressiveModel::new(base, vec![OddGenerator::new("phat", 3, u)]).unwrap();
        make_correspondence(&e, &eh).unwrap()
    }

    #[test]
    fn top_monomial_integrates_to_one() {
        let c = hopf_pair();
        let psi = c.pullback(Side::E, &c.e().generator(0)).unwrap();
        assert_eq!(c.fiber_integrate(Side::E, &psi).unwrap(), c.ehat().one());
        let phat_u = c.pullback(Side::Ehat, &TcElement::term(1, 1, int(1))).unwrap();
        assert!(c.fiber_integrate(Side::E, &phat_u).unwrap().is_zero());
    }

    #[test]
    fn total_integral_of_quadratic_kernel() {
        let c = hopf_pair();
        let f = TcElement::term(0b11, 0, int(5));
        assert_eq!(c.integrate_all(&f), BaseElement::term(0, int(5)));
    }

    #[test]
    fn integration_commutes_with_d() {
        let c = hopf_pair();
        let m = c.model();
        for i in 0..m.dim() {
            let x = m.basis_element(i);
            let lhs = c.fiber_integrate(Side::E, &m.d(&x)).unwrap();
            let rhs = c.ehat().d(&c.fiber_integrate(Side::E, &x).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compress_packs_bits() {
        assert_eq!(compress(0b1010, 0b1110), 0b101);
        assert_eq!(compress(0b0001, 0b0001), 1);
    }

    #[test]
    fn swap_round_trip() {
        let c = hopf_pair();
        let s = c.swapped().unwrap();
        let x = TcElement::term(0b11, 1, int(2));
        let y = c.swap_element(&x);
        assert_eq!(y, TcElement::term(0b11, 1, int(-2)));
        assert_eq!(s.swap_element(&y), x);
    }
}
