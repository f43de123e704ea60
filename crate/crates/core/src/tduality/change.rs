use num_traits::{One, Zero};
use rand::Rng;

use super::scenario::DualityScenario;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};
use crate::transgressive::{OddGenerator, Side, TcElement, TransgressiveModel};

/// New generators `ψ̃_j = Σ_k A_{jk} ψ_k + p_j`, with one invertible matrix
/// per generator degree and corrections `p_j` built from generators of
/// strictly lower degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorChange {
    /// `(degree, A)`, ascending by degree. Rows and columns follow the
    /// declaration order of the generators of that degree.
    pub blocks: Vec<(u32, Matrix)>,
    /// `p_j`, one per generator in declaration order.
    pub corrections: Vec<TcElement>,
}

/// A model re-presented by a changed generating set, with the conversion
/// isomorphisms to and from the original one.
#[derive(Clone, Debug)]
pub struct ChangedModel {
    pub old: TransgressiveModel,
    pub new: TransgressiveModel,
    /// Image of each new generator in the old model.
    to_old: Vec<TcElement>,
    /// Image of each old generator in the new model.
    to_new: Vec<TcElement>,
}

fn positions(model: &TransgressiveModel, degree: u32) -> Vec<usize> {
    (0..model.n_gens()).filter(|&i| model.gen(i).degree == degree).collect()
}

impl GeneratorChange {
    pub fn identity(model: &TransgressiveModel) -> Self {
        let blocks = model.generators().counts_per_degree().into_iter().map(|(d, n)| (d, Matrix::identity(n))).collect();
        GeneratorChange { blocks, corrections: vec![TcElement::zero(); model.n_gens()] }
    }

    /// `Π det(A)` over the degree blocks.
    pub fn determinant_product(&self) -> Scalar {
        self.blocks.iter().map(|(_, a)| a.determinant()).fold(Scalar::one(), |acc, d| acc * d)
    }

    /// Correction candidates `ψ_I ⊗ b` for generator `j`: nonempty `I` of
    /// strictly lower-degree generators, total degree `|ψ_j|`, with `d` of
    /// the combination purely basic. Returned as a basis of that space.
    pub fn admissible_corrections(model: &TransgressiveModel, j: usize) -> Vec<TcElement> {
        let deg = model.gen(j).degree;
        let lower: u32 = (0..model.n_gens()).filter(|&i| model.gen(i).degree < deg).map(|i| 1u32 << i).sum();
        let base = model.base();
        let mut cands = Vec::new();
        let mut mask = lower;
        while mask != 0 {
            let md = model.mask_degree(mask);
            if md <= deg {
                for b in base.basis_of_degree(deg - md) {
                    cands.push(TcElement::term(mask, b, Scalar::one()));
                }
            }
            mask = (mask - 1) & lower;
        }
        cands.sort();
        if cands.is_empty() {
            return cands;
        }
        let cols: Vec<Vec<Scalar>> = cands
            .iter()
            .map(|c| model.to_vector(&model.d(c).filter_masks(|m| m != 0)))
            .collect();
        Matrix::from_columns(model.dim(), cols)
            .kernel()
            .into_iter()
            .map(|v| {
                let mut x = TcElement::zero();
                for (q, c) in v.iter().zip(&cands) {
                    if !q.is_zero() {
                        x.add_scaled(c, q);
                    }
                }
                x
            })
            .collect()
    }

    /// A random change with small integer entries and random admissible
    /// corrections.
    pub fn random<R: Rng + ?Sized>(model: &TransgressiveModel, rng: &mut R) -> Self {
        let mut blocks = Vec::new();
        for (d, n) in model.generators().counts_per_degree() {
            loop {
                let rows = (0..n).map(|_| (0..n).map(|_| scalar::int(rng.gen_range(-2..=2))).collect()).collect();
                let a = Matrix::from_rows(rows);
                if !a.determinant().is_zero() {
                    blocks.push((d, a));
                    break;
                }
            }
        }
        let corrections = (0..model.n_gens())
            .map(|j| {
                let mut p = TcElement::zero();
                for v in Self::admissible_corrections(model, j) {
                    p.add_scaled(&v, &scalar::int(rng.gen_range(-2..=2)));
                }
                p
            })
            .collect();
        GeneratorChange { blocks, corrections }
    }

    /// New generator `j` written in the old generators.
    fn image_in_old(&self, model: &TransgressiveModel, j: usize) -> TcElement {
        let deg = model.gen(j).degree;
        let pos = positions(model, deg);
        let row = pos.iter().position(|&p| p == j).expect("generator in its block");
        let a = &self.blocks.iter().find(|(d, _)| *d == deg).expect("block").1;
        let mut x = self.corrections[j].clone();
        for (c, &k) in pos.iter().enumerate() {
            x.add_scaled(&model.generator(k), a.get(row, c));
        }
        x
    }

    fn validate(&self, model: &TransgressiveModel) -> Result<()> {
        let counts = model.generators().counts_per_degree();
        if self.blocks.len() != counts.len()
            || self.blocks.iter().zip(&counts).any(|((d, a), (dd, n))| d != dd || a.rows() != *n || a.cols() != *n)
        {
            return Err(Error::InvalidChange("one square block per generator degree is required".into()));
        }
        if let Some((d, _)) = self.blocks.iter().find(|(_, a)| a.determinant().is_zero()) {
            return Err(Error::InvalidChange(format!("the degree-{d} matrix is singular")));
        }
        if self.corrections.len() != model.n_gens() {
            return Err(Error::InvalidChange("one correction per generator is required".into()));
        }
        for (j, p) in self.corrections.iter().enumerate() {
            model.check_owned(p, "correction")?;
            let deg = model.gen(j).degree;
            for (m, b) in p.terms() {
                if m == 0 || crate::transgressive::bits(m).any(|i| model.gen(i).degree >= deg) {
                    return Err(Error::InvalidChange(format!(
                        "correction of `{}` must use only lower-degree generators",
                        model.gen(j).label
                    )));
                }
                if !model.base().is_homogeneous_of(b, deg.saturating_sub(model.mask_degree(m))) || model.mask_degree(m) > deg {
                    return Err(Error::InvalidChange(format!("correction of `{}` has the wrong degree", model.gen(j).label)));
                }
            }
        }
        Ok(())
    }
}

/// Applies a change of generating set, recomputing transgressions as `dψ̃`.
pub fn change_generating_set(model: &TransgressiveModel, g: &GeneratorChange) -> Result<ChangedModel> {
    g.validate(model)?;
    let n = model.n_gens();
    let to_old: Vec<TcElement> = (0..n).map(|j| g.image_in_old(model, j)).collect();
    let mut gens = Vec::with_capacity(n);
    for (j, x) in to_old.iter().enumerate() {
        let dx = model.d(x);
        if dx.terms().any(|(m, _)| m != 0) {
            return Err(Error::InvalidChange(format!(
                "d of the new generator `{}` is not basic",
                model.gen(j).label
            )));
        }
        let old = model.gen(j);
        gens.push(OddGenerator::new(&old.label, old.degree, dx.coefficient(0)));
    }
    let new = TransgressiveModel::new(model.base_arc().clone(), gens)?;

    // ψ_k = Σ_j A⁻¹_{kj} (ψ̃_j − p_j), resolved degree by degree.
    let mut to_new = vec![TcElement::zero(); n];
    for (deg, a) in &g.blocks {
        let inv = a.inverse().expect("validated invertible");
        let pos = positions(model, *deg);
        let shifted: Vec<TcElement> = pos
            .iter()
            .map(|&j| new.generator(j).sub(&model.substitute(&g.corrections[j], &to_new, &new)))
            .collect();
        for (r, &k) in pos.iter().enumerate() {
            let mut x = TcElement::zero();
            for (c, y) in shifted.iter().enumerate() {
                x.add_scaled(y, inv.get(r, c));
            }
            to_new[k] = x;
        }
    }
    Ok(ChangedModel { old: model.clone(), new, to_old, to_new })
}

impl ChangedModel {
    /// Re-expresses an element of the old model in the new generators.
    pub fn to_new(&self, x: &TcElement) -> TcElement {
        self.old.substitute(x, &self.to_new, &self.new)
    }

    /// Re-expresses an element of the new model in the old generators.
    pub fn to_old(&self, x: &TcElement) -> TcElement {
        self.new.substitute(x, &self.to_old, &self.old)
    }

    pub fn old_generator_images(&self) -> &[TcElement] {
        &self.to_new
    }

    /// Coefficient of `σ_Ψ` in `σ_Ψ̃` written in the old generators.
    pub fn sigma_coefficient(&self) -> Scalar {
        let s = self.to_old(&self.new.sigma());
        s.coefficient(self.old.full_mask()).coeff(self.old.base().unit())
    }
}

impl DualityScenario {
    /// The same scenario with one side's generating set changed; twists and
    /// kernel are re-expressed in the new generators.
    pub fn change_side(&self, side: Side, g: &GeneratorChange) -> Result<(DualityScenario, ChangedModel)> {
        let changed = change_generating_set(self.side(side), g)?;
        let twist = changed.to_new(self.twist(side));
        let (e_new, eh_new) = match side {
            Side::E => (changed.new.clone(), self.ehat().clone()),
            Side::Ehat => (self.e().clone(), changed.new.clone()),
        };
        let corr = crate::transgressive::make_correspondence(&e_new, &eh_new)?;
        let total = corr.model();
        let images: Vec<TcElement> = (0..self.e().n_gens())
            .map(|i| match side {
                Side::E => corr.pullback_unchecked(Side::E, &changed.old_generator_images()[i]),
                Side::Ehat => total.generator(i),
            })
            .chain((0..self.ehat().n_gens()).map(|i| match side {
                Side::E => total.generator(self.e().n_gens() + i),
                Side::Ehat => corr.pullback_unchecked(Side::Ehat, &changed.old_generator_images()[i]),
            }))
            .collect();
        let f = self.correspondence().model().substitute(self.f(), &images, total);
        let (h, hhat) = match side {
            Side::E => (twist, self.hhat().clone()),
            Side::Ehat => (self.h().clone(), twist),
        };
        let s = DualityScenario::from_correspondence(corr, h, hhat, f)?;
        Ok((s, changed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseElement, CdgaBuilder, FiniteCdga};
    use crate::scalar::int;
    use rand::SeedableRng;
    use std::sync::Arc;

    fn two_degree_model() -> TransgressiveModel {
        let mut b = CdgaBuilder::new();
        b.basis("1", 0);
        b.basis("x", 2);
        b.basis("z", 4);
        b.unit("1");
        let z = b.elem(&[(1, "z")]).unwrap();
        b.product("x", "x", z).unwrap();
        let base = Arc::new(b.build().unwrap());
        let gens = vec![
            OddGenerator::new("psi1", 1, BaseElement::zero()),
            OddGenerator::new("psi3", 3, BaseElement::basis(2)),
        ];
        TransgressiveModel::new(base, gens).unwrap()
    }

    #[test]
    fn identity_change_is_identity() {
        let m = two_degree_model();
        let c = change_generating_set(&m, &GeneratorChange::identity(&m)).unwrap();
        assert_eq!(c.new, m);
        assert_eq!(c.sigma_coefficient(), int(1));
    }

    #[test]
    fn swap_of_two_degree_one_generators_flips_sigma() {
        let base = Arc::new(FiniteCdga::point());
        let gens = (1..=2).map(|i| OddGenerator::new(&format!("p{i}"), 1, BaseElement::zero())).collect();
        let m = TransgressiveModel::new(base, gens).unwrap();
        let a = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let g = GeneratorChange { blocks: vec![(1, a)], corrections: vec![TcElement::zero(); 2] };
        let c = change_generating_set(&m, &g).unwrap();
        assert_eq!(c.sigma_coefficient(), int(-1));
    }

    #[test]
    fn lower_degree_correction_keeps_top_coefficient() {
        let m = two_degree_model();
        let basis = GeneratorChange::admissible_corrections(&m, 1);
        assert!(!basis.is_empty());
        let mut g = GeneratorChange::identity(&m);
        g.corrections[1] = basis[0].clone();
        let c = change_generating_set(&m, &g).unwrap();
        assert_eq!(c.sigma_coefficient(), int(1));
        let x = m.wedge(&m.generator(0), &m.generator(1));
        assert_eq!(c.to_old(&c.to_new(&x)), x);
    }

    #[test]
    fn conversions_are_inverse_chain_maps() {
        let m = two_degree_model();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let g = GeneratorChange::random(&m, &mut rng);
            let c = change_generating_set(&m, &g).unwrap();
            assert_eq!(c.sigma_coefficient(), g.determinant_product());
            for i in 0..m.dim() {
                let x = m.basis_element(i);
                let y = c.to_new(&x);
                assert_eq!(c.to_old(&y), x);
                assert_eq!(c.to_new(&m.d(&x)), c.new.d(&y));
            }
        }
    }

    #[test]
    fn singular_and_malformed_changes_are_rejected() {
        let m = two_degree_model();
        let mut g = GeneratorChange::identity(&m);
        g.blocks[0].1 = Matrix::zeros(1, 1);
        assert!(matches!(change_generating_set(&m, &g), Err(Error::InvalidChange(_))));
        let mut g = GeneratorChange::identity(&m);
        g.corrections[0] = m.generator(1);
        assert!(change_generating_set(&m, &g).is_err());
    }
}
