use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::Scalar;
use crate::transgressive::{basic_component, make_correspondence, Correspondence, Side, TcElement, TransgressiveModel};

/// Two fibrations over a common base with twists and a candidate kernel.
#[derive(Clone, Debug)]
pub struct DualityScenario {
    corr: Correspondence,
    h: TcElement,
    hhat: TcElement,
    f: TcElement,
    exp_f: OnceLock<TcElement>,
    tau: OnceLock<SparseMatrix>,
    tau_inv: OnceLock<Option<SparseMatrix>>,
}

impl PartialEq for DualityScenario {
    fn eq(&self, other: &Self) -> bool {
        self.corr == other.corr && self.h == other.h && self.hhat == other.hhat && self.f == other.f
    }
}

impl Eq for DualityScenario {}

/// Outcome of the gerbe trivialization check; `residual` is
/// `dF − p^*H + p̂^*Ĥ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerbeCheck {
    pub holds: bool,
    pub residual: TcElement,
}

/// One constant mixed coefficient `F_IJ` of `ψ_I ψ̂_J`, with masks in the
/// two sides' own indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTerm {
    pub e_mask: u32,
    pub ehat_mask: u32,
    pub coef: Scalar,
}

/// The basic-degree zero part of the kernel split by monomial support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelParts {
    pub f_e: TcElement,
    pub f_ehat: TcElement,
    pub mixed: Vec<MixedTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondegeneracyCheck {
    pub square: bool,
    pub invertible: bool,
    /// Rows indexed by Ê monomials, columns by E monomials.
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapCheck {
    pub holds: bool,
    /// Index of the first basis element of Ω_Ψ on which the identity fails.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub gerbe: GerbeCheck,
    pub nondegeneracy: NondegeneracyCheck,
}

impl Verdict {
    pub fn is_t_dual(&self) -> bool {
        self.gerbe.holds && self.nondegeneracy.invertible
    }
}

impl DualityScenario {
    pub fn new(
        e: TransgressiveModel,
        h: TcElement,
        ehat: TransgressiveModel,
        hhat: TcElement,
        f: TcElement,
    ) -> Result<Self> {
        let corr = make_correspondence(&e, &ehat)?;
        Self::from_correspondence(corr, h, hhat, f)
    }

    pub fn from_correspondence(corr: Correspondence, h: TcElement, hhat: TcElement, f: TcElement) -> Result<Self> {
        corr.e().check_twist(&h).map_err(|e| tag(e, "H"))?;
        corr.ehat().check_twist(&hhat).map_err(|e| tag(e, "Hhat"))?;
        let total = corr.model();
        total.check_owned(&f, "F")?;
        if !total.is_even(&f) {
            return Err(Error::NotEven("kernel F".into()));
        }
        if !f.coefficient(0).coeff(total.base().unit()).is_zero() {
            return Err(Error::ScalarPart("kernel F has a nonzero scalar component".into()));
        }
        Ok(DualityScenario {
            corr,
            h,
            hhat,
            f,
            exp_f: OnceLock::new(),
            tau: OnceLock::new(),
            tau_inv: OnceLock::new(),
        })
    }

    pub fn e(&self) -> &TransgressiveModel {
        self.corr.e()
    }

    pub fn ehat(&self) -> &TransgressiveModel {
        self.corr.ehat()
    }

    pub fn side(&self, side: Side) -> &TransgressiveModel {
        self.corr.side(side)
    }

    pub fn correspondence(&self) -> &Correspondence {
        &self.corr
    }

    pub fn h(&self) -> &TcElement {
        &self.h
    }

    pub fn hhat(&self) -> &TcElement {
        &self.hhat
    }

    pub fn twist(&self, side: Side) -> &TcElement {
        match side {
            Side::E => &self.h,
            Side::Ehat => &self.hhat,
        }
    }

    pub fn f(&self) -> &TcElement {
        &self.f
    }

    pub fn exp_f(&self) -> &TcElement {
        self.exp_f.get_or_init(|| self.corr.model().exp_wedge(&self.f).expect("kernel validated at construction"))
    }

    pub fn gerbe_residual(&self) -> TcElement {
        let total = self.corr.model();
        let mut r = total.d(&self.f);
        r.add_scaled(&self.corr.pullback_unchecked(Side::E, &self.h), &-Scalar::one());
        r.add_scaled(&self.corr.pullback_unchecked(Side::Ehat, &self.hhat), &Scalar::one());
        r
    }

    pub fn check_gerbe_trivialization(&self) -> GerbeCheck {
        let residual = self.gerbe_residual();
        GerbeCheck { holds: residual.is_zero(), residual }
    }

    /// Splits `F_0` into its pure-Ψ, pure-Ψ̂ and mixed parts. Fails if a
    /// mixed coefficient is not a constant.
    pub fn extract_kernel_parts(&self) -> Result<KernelParts> {
        let total = self.corr.model();
        let base = total.base();
        let f0 = basic_component(total, &self.f, 0);
        let n = self.e().n_gens() as u32;
        let lo = self.e().full_mask();
        let mut parts = KernelParts { f_e: TcElement::zero(), f_ehat: TcElement::zero(), mixed: Vec::new() };
        for (m, b) in f0.terms() {
            let (i, j) = (m & lo, m >> n);
            if j == 0 {
                parts.f_e.add_coefficient(i, b, &Scalar::one());
            } else if i == 0 {
                parts.f_ehat.add_coefficient(j, b, &Scalar::one());
            } else {
                let coef = base.coefficient_is_constant(b).ok_or_else(|| {
                    Error::Precondition(format!(
                        "mixed kernel coefficient {} is not constant",
                        base.render(b)
                    ))
                })?;
                parts.mixed.push(MixedTerm { e_mask: i, ehat_mask: j, coef });
            }
        }
        Ok(parts)
    }

    /// Mixed part of `F_0` as an element of the correspondence.
    pub fn mixed_kernel(&self) -> Result<TcElement> {
        let n = self.e().n_gens() as u32;
        let unit = self.corr.model().base().unit();
        let mut out = TcElement::zero();
        for t in self.extract_kernel_parts()?.mixed {
            out.add_term(t.e_mask | (t.ehat_mask << n), unit, t.coef);
        }
        Ok(out)
    }

    /// Matrix of `x ↦ p̂_*(e^{F_mixed} ∧ p^*x)` on constant monomials.
    pub fn check_nondegeneracy(&self) -> Result<NondegeneracyCheck> {
        let total = self.corr.model();
        let unit = total.base().unit();
        let exp = total.exp_wedge(&self.mixed_kernel()?)?;
        let cols = 1usize << self.e().n_gens();
        let rows = 1usize << self.ehat().n_gens();
        let columns = exec::map_range(cols, |i| {
            let x = TcElement::term(i as u32, unit, Scalar::one());
            let y = self.corr.fiber_integrate_unchecked(Side::E, &total.wedge(&exp, &self.corr.pullback_unchecked(Side::E, &x)));
            (0..rows).map(|j| y.coefficient(j as u32).coeff(unit)).collect()
        });
        let matrix = Matrix::from_columns(rows, columns);
        let square = rows == cols;
        let invertible = square && matrix.rank() == rows;
        Ok(NondegeneracyCheck { square, invertible, matrix })
    }

    /// Both conditions of the definition.
    pub fn check(&self) -> Result<Verdict> {
        let gerbe = self.check_gerbe_trivialization();
        let nondegeneracy = self.check_nondegeneracy()?;
        Ok(Verdict { gerbe, nondegeneracy })
    }

    /// `det(F_ij)` criterion for a purely quadratic mixed part.
    pub fn quadratic_shortcut(&self) -> Result<bool> {
        let parts = self.extract_kernel_parts()?;
        if parts.mixed.iter().any(|t| t.e_mask.count_ones() != 1 || t.ehat_mask.count_ones() != 1) {
            return Err(Error::NotApplicable("mixed part of the kernel is not quadratic".into()));
        }
        let (n, nh) = (self.e().n_gens(), self.ehat().n_gens());
        if n != nh {
            return Ok(false);
        }
        let mut m = Matrix::zeros(n, n);
        for t in parts.mixed {
            let (i, j) = (t.e_mask.trailing_zeros() as usize, t.ehat_mask.trailing_zeros() as usize);
            m.set(i, j, m.get(i, j) + t.coef);
        }
        Ok(!m.determinant().is_zero())
    }

    /// `τ_F(x) = p̂_*(e^F ∧ p^*x)`.
    pub fn tau(&self, x: &TcElement) -> Result<TcElement> {
        self.e().check_owned(x, "transform argument")?;
        Ok(self.tau_unchecked(x))
    }

    pub(crate) fn tau_unchecked(&self, x: &TcElement) -> TcElement {
        let total = self.corr.model();
        let y = total.wedge(self.exp_f(), &self.corr.pullback_unchecked(Side::E, x));
        self.corr.fiber_integrate_unchecked(Side::E, &y)
    }

    /// Matrix of τ_F from Ω_Ψ to Ω_Ψ̂, computed once.
    pub fn tau_matrix(&self) -> &SparseMatrix {
        self.tau.get_or_init(|| {
            let (e, eh) = (self.e(), self.ehat());
            let cols = exec::map_range(e.dim(), |i| eh.to_sparse(&self.tau_unchecked(&e.basis_element(i))));
            SparseMatrix::from_columns(eh.dim(), cols)
        })
    }

    /// Exact inverse of τ_F, computed once.
    pub fn tau_inverse(&self) -> Result<&SparseMatrix> {
        self.tau_inv
            .get_or_init(|| {
                let t = self.tau_matrix();
                if t.rows() != t.cols() {
                    return None;
                }
                t.to_dense().inverse().map(|m| SparseMatrix::from_dense(&m))
            })
            .as_ref()
            .ok_or(Error::NotInvertible)
    }

    pub fn tau_is_invertible(&self) -> bool {
        self.tau_inverse().is_ok()
    }

    /// `τ_F^{-1}` applied to an element of Ω_Ψ̂.
    pub fn tau_inverse_apply(&self, y: &TcElement) -> Result<TcElement> {
        self.ehat().check_owned(y, "inverse transform argument")?;
        let inv = self.tau_inverse()?;
        Ok(self.e().from_sparse(&inv.apply_sparse(&self.ehat().to_sparse(y))))
    }

    /// Checks `τ_F ∘ d^H = d^Ĥ ∘ τ_F` on the full basis of Ω_Ψ.
    pub fn verify_chain_map(&self) -> ChainMapCheck {
        let dh = self.e().differential_matrix(Some(&self.h));
        let dhh = self.ehat().differential_matrix(Some(&self.hhat));
        let t = self.tau_matrix();
        let witness = t.mul(&dh).first_difference(&dhh.mul(t));
        ChainMapCheck { holds: witness.is_none(), witness }
    }

    /// The scenario with E and Ê exchanged and kernel `−F`, so that the
    /// gerbe condition is preserved. Nothing else is asserted about it.
    pub fn swap(&self) -> Result<DualityScenario> {
        let corr = self.corr.swapped()?;
        let f = self.corr.swap_element(&self.f).neg();
        Self::from_correspondence(corr, self.hhat.clone(), self.h.clone(), f)
    }

    /// The same scenario over a larger base whose leading basis elements
    /// are those of the current base, such as a product with a torus.
    pub fn over_base(&self, base: std::sync::Arc<crate::algebra::FiniteCdga>) -> Result<Self> {
        let old = self.e().base();
        if base.dim() < old.dim() || base.labels()[..old.dim()] != *old.labels() {
            return Err(Error::ModelMismatch("new base does not extend the current one".into()));
        }
        Self::new(
            self.e().over(base.clone())?,
            self.h.clone(),
            self.ehat().over(base)?,
            self.hhat.clone(),
            self.f.clone(),
        )
    }

    /// Replaces one side's model and twist and the kernel, keeping the rest.
    pub fn with_side(&self, side: Side, model: TransgressiveModel, twist: TcElement, f: TcElement) -> Result<Self> {
        match side {
            Side::E => Self::new(model, twist, self.ehat().clone(), self.hhat.clone(), f),
            Side::Ehat => Self::new(self.e().clone(), self.h.clone(), model, twist, f),
        }
    }
}

fn tag(e: Error, what: &str) -> Error {
    match e {
        Error::NotOdd(_) => Error::NotOdd(format!("twist {what}")),
        Error::NotClosed(_) => Error::NotClosed(format!("twist {what}")),
        Error::ModelMismatch(_) => Error::ModelMismatch(format!("twist {what} does not belong to its model")),
        other => other,
    }
}
