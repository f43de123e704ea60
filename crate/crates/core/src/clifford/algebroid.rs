use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::element::{CliffordElement, WordTerm};
use crate::algebra::BaseElement;
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{add_entry, Matrix, SparseMatrix};
use crate::scalar::{self, Scalar};
use crate::scenario::{parse_sum, render_terms, Factor};
use crate::tduality::DualityScenario;
use crate::transgressive::{Side, TcElement, TransgressiveModel};

/// A section `X + ξ`: constant coefficients on the declared contractions
/// and an odd Clifford-valued form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordSection {
    pub vector: Vec<Scalar>,
    pub clifford: CliffordElement,
}

impl CliffordSection {
    pub fn zero(model: &TransgressiveModel) -> Self {
        CliffordSection {
            vector: vec![Scalar::zero(); model.base().contractions().len()],
            clifford: CliffordElement::zero(model.n_gens()),
        }
    }

    pub fn vector_field(model: &TransgressiveModel, k: usize) -> Self {
        let mut s = Self::zero(model);
        s.vector[k] = Scalar::one();
        s
    }

    pub fn from_clifford(model: &TransgressiveModel, c: CliffordElement) -> Self {
        CliffordSection { clifford: c, ..Self::zero(model) }
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(Zero::is_zero) && self.clifford.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        CliffordSection {
            vector: self.vector.iter().zip(&other.vector).map(|(a, b)| a + b).collect(),
            clifford: self.clifford.add(&other.clifford),
        }
    }

    pub fn scale(&self, q: &Scalar) -> Self {
        CliffordSection { vector: self.vector.iter().map(|a| a * q).collect(), clifford: self.clifford.scale(q) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    fn check(&self, model: &TransgressiveModel) -> Result<()> {
        let nc = model.base().contractions().len();
        if self.vector.len() != nc {
            return Err(Error::ModelMismatch(format!(
                "section has {} vector coefficients but the base declares {nc} contractions",
                self.vector.len()
            )));
        }
        if self.clifford.n_gens() != model.n_gens() {
            return Err(Error::ModelMismatch("Clifford part has the wrong number of generators".into()));
        }
        if !self.clifford.is_odd(model.base()) {
            return Err(Error::NotOdd("Clifford part of a section".into()));
        }
        Ok(())
    }

    /// The operator `ι_X + ξ·` on Ω_Ψ.
    pub fn operator(&self, model: &TransgressiveModel) -> Result<SparseMatrix> {
        self.check(model)?;
        let mut op = self.clifford.operator(model);
        for (k, q) in self.vector.iter().enumerate() {
            if !q.is_zero() {
                op = op.add_scaled(&contraction_operator(model, k), q);
            }
        }
        Ok(op)
    }

    /// Text form `X: 2 * iota1 ; C: 1 * psi[1]^dpsi[2] (x) theta1`.
    pub fn render(&self, model: &TransgressiveModel) -> String {
        let base = model.base();
        let x = render_terms(
            self.vector.iter().enumerate().map(|(k, q)| (q.clone(), None, base.contractions()[k].name.clone())),
        );
        let words = self.clifford.words(base);
        let c = render_terms(words.iter().map(|w| (w.coef.clone(), Some(word_text(w)), base.label(w.base).to_string())));
        format!("X: {x} ; C: {c}")
    }
}

fn word_text(w: &WordTerm) -> String {
    let mut f: Vec<String> = crate::transgressive::bits(w.create).map(|i| format!("psi[{}]", i + 1)).collect();
    f.extend(crate::transgressive::bits(w.annihilate).map(|i| format!("dpsi[{}]", i + 1)));
    f.join("^")
}

/// Parses a section. `line` locates the text for error messages.
pub fn parse_section(model: &TransgressiveModel, text: &str, line: usize) -> Result<CliffordSection> {
    let base = model.base();
    let mut s = CliffordSection::zero(model);
    let mut offset = 0;
    for part in text.split(';') {
        let trimmed = part.trim_start();
        let col = offset + part.len() - trimmed.len() + 1;
        offset += part.len() + 1;
        let (tag, body) = trimmed
            .split_once(':')
            .ok_or_else(|| Error::Parse { line, col, msg: "expected `X:` or `C:`".into() })?;
        let body_col = col + tag.len() + 1;
        match tag.trim() {
            "X" => {
                for t in parse_sum(body, line, body_col)? {
                    match t.factors.as_slice() {
                        [] if t.coef.is_zero() => {}
                        [Factor::Label(name)] => {
                            let k = base.contraction_index(name).ok_or_else(|| Error::UnknownLabel(name.clone()))?;
                            s.vector[k] += t.coef;
                        }
                        _ => return Err(Error::Parse { line, col: t.col, msg: "expected a contraction name".into() }),
                    }
                }
            }
            "C" => {
                for t in parse_sum(body, line, body_col)? {
                    s.clifford = s.clifford.add(&clifford_term(model, &t.factors, line, t.col)?.scale(&t.coef));
                }
            }
            other => {
                return Err(Error::Parse { line, col, msg: format!("unknown section part `{other}`") });
            }
        }
    }
    if !s.clifford.is_odd(base) {
        return Err(Error::NotOdd(format!("Clifford part of section `{}`", text.trim())));
    }
    Ok(s)
}

fn clifford_term(model: &TransgressiveModel, factors: &[Factor], line: usize, col: usize) -> Result<CliffordElement> {
    let base = model.base();
    let n = model.n_gens();
    let mut word = CliffordElement::identity(n, base);
    let mut coeff = None;
    for (pos, f) in factors.iter().enumerate() {
        match f {
            Factor::Indexed(name, idx) => {
                let i: usize = idx.parse().ok().filter(|&i| i >= 1 && i <= n).ok_or_else(|| Error::Parse {
                    line,
                    col,
                    msg: format!("generator index `{idx}` out of range 1..={n}"),
                })?;
                let g = match name.as_str() {
                    "psi" => CliffordElement::create(n, base, i - 1),
                    "dpsi" => CliffordElement::annihilate(n, base, i - 1),
                    _ => return Err(Error::Parse { line, col, msg: format!("unknown operator `{name}`") }),
                };
                word = word.compose(&g, base);
            }
            Factor::Label(l) if pos + 1 == factors.len() => {
                coeff = Some(BaseElement::basis(base.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))?));
            }
            _ => return Err(Error::Parse { line, col, msg: "a base label may only appear last".into() }),
        }
    }
    Ok(match coeff {
        Some(b) => word.times_base(base, &b),
        None => word,
    })
}

/// `ι_k` extended to Ω_Ψ by `ψ_J ⊗ a ↦ (−1)^{|J|} ψ_J ⊗ ι_k a`.
pub fn contraction_operator(model: &TransgressiveModel, k: usize) -> SparseMatrix {
    let base = model.base();
    let cols = exec::map_range(model.dim(), |c| {
        let (m, a) = model.unindex(c);
        let mut col = BTreeMap::new();
        let sign = scalar::sign(m.count_ones() % 2 == 1);
        for (b, q) in base.contract(k, &BaseElement::basis(a)).terms() {
            add_entry(&mut col, model.index(m, b), q * &sign);
        }
        col
    });
    SparseMatrix::from_columns(model.dim(), cols)
}

/// `d^H = d^V + d + H∧` with `d^V = Σ_i m_{c_i} ∘ ∂_{ψ_i}`, assembled from
/// its three pieces.
pub fn twisted_d_operator(model: &TransgressiveModel, h: &TcElement) -> Result<SparseMatrix> {
    model.check_twist(h)?;
    let base = model.base();
    let n = model.n_gens();
    let mut dv = CliffordElement::zero(n);
    for i in 0..n {
        let m = CliffordElement::from_base(n, base, &model.gen(i).transgression);
        dv = dv.add(&m.compose(&CliffordElement::annihilate(n, base, i), base));
    }
    let cols = exec::map_range(model.dim(), |c| {
        let (m, a) = model.unindex(c);
        let mut col = BTreeMap::new();
        let sign = scalar::sign(m.count_ones() % 2 == 1);
        for (b, q) in base.d_basis(a).terms() {
            add_entry(&mut col, model.index(m, b), q * &sign);
        }
        col
    });
    let d = SparseMatrix::from_columns(model.dim(), cols);
    let wedge_h = model.operator_matrix(|x| model.wedge(h, x));
    Ok(dv.operator(model).add(&d).add(&wedge_h))
}

/// Recovers the section whose action is `op`, or reports the residual.
pub fn decompose_operator(model: &TransgressiveModel, op: &SparseMatrix) -> Result<CliffordSection> {
    let iotas: Vec<SparseMatrix> = (0..model.base().contractions().len()).map(|k| contraction_operator(model, k)).collect();
    decompose_with(model, &iotas, op)
}

fn decompose_with(model: &TransgressiveModel, iotas: &[SparseMatrix], op: &SparseMatrix) -> Result<CliffordSection> {
    let base = model.base();
    if op.rows() != model.dim() || op.cols() != model.dim() {
        return Err(Error::ModelMismatch("operator has the wrong size".into()));
    }
    // contractions kill ψ_J ⊗ 1, so these columns see only the Clifford part
    let mut c = CliffordElement::zero(model.n_gens());
    for j in 0..1u32 << model.n_gens() {
        for (&r, q) in op.column(model.index(j, base.unit())) {
            let (i, b) = model.unindex(r);
            c.set(i, j, c.entry(i, j).add(&BaseElement::term(b, q.clone())));
        }
    }
    let residual = op.sub(&c.operator(model));
    let vector = solve_vector_part(iotas, &residual).ok_or_else(|| {
        let (col, row) = first_entry(&residual);
        Error::Decomposition(format!(
            "residual outside the span of the declared contractions (column {col}, row {row})"
        ))
    })?;
    if !c.is_odd(base) {
        return Err(Error::Decomposition("operator has an even Clifford component".into()));
    }
    Ok(CliffordSection { vector, clifford: c })
}

fn first_entry(m: &SparseMatrix) -> (usize, usize) {
    (0..m.cols()).find_map(|j| m.column(j).keys().next().map(|&i| (j, i))).unwrap_or((0, 0))
}

fn solve_vector_part(iotas: &[SparseMatrix], r: &SparseMatrix) -> Option<Vec<Scalar>> {
    let mut positions = BTreeSet::new();
    for m in iotas.iter().chain(std::iter::once(r)) {
        for j in 0..m.cols() {
            positions.extend(m.column(j).keys().map(|&i| (j, i)));
        }
    }
    if positions.is_empty() {
        return Some(vec![Scalar::zero(); iotas.len()]);
    }
    let pos: Vec<(usize, usize)> = positions.into_iter().collect();
    let cols: Vec<Vec<Scalar>> = iotas.iter().map(|m| pos.iter().map(|&(j, i)| m.get(i, j)).collect()).collect();
    let rhs: Vec<Scalar> = pos.iter().map(|&(j, i)| r.get(i, j)).collect();
    if iotas.is_empty() {
        return rhs.iter().all(Zero::is_zero).then(Vec::new);
    }
    Matrix::from_columns(pos.len(), cols).solve(&rhs)
}

/// The algebroid of a model with a fixed twist: caches `d^H` and the
/// contraction operators.
#[derive(Clone, Debug)]
pub struct Algebroid {
    model: TransgressiveModel,
    d: SparseMatrix,
    iotas: Vec<SparseMatrix>,
}

impl Algebroid {
    pub fn new(model: &TransgressiveModel, h: &TcElement) -> Result<Self> {
        let d = twisted_d_operator(model, h)?;
        let iotas = (0..model.base().contractions().len()).map(|k| contraction_operator(model, k)).collect();
        Ok(Algebroid { model: model.clone(), d, iotas })
    }

    pub fn model(&self) -> &TransgressiveModel {
        &self.model
    }

    pub fn twisted_d(&self) -> &SparseMatrix {
        &self.d
    }

    pub fn operator(&self, v: &CliffordSection) -> Result<SparseMatrix> {
        v.check(&self.model)?;
        let mut op = v.clifford.operator(&self.model);
        for (q, m) in v.vector.iter().zip(&self.iotas) {
            if !q.is_zero() {
                op = op.add_scaled(m, q);
            }
        }
        Ok(op)
    }

    pub fn decompose(&self, op: &SparseMatrix) -> Result<CliffordSection> {
        decompose_with(&self.model, &self.iotas, op)
    }

    /// The operator `{{v, d^H}, w}`.
    pub fn bracket_operator(&self, v: &SparseMatrix, w: &SparseMatrix) -> SparseMatrix {
        v.graded_commutator(true, &self.d, true).graded_commutator(false, w, true)
    }

    /// `⟦v, w⟧_H`.
    pub fn bracket(&self, v: &CliffordSection, w: &CliffordSection) -> Result<CliffordSection> {
        self.decompose(&self.bracket_operator(&self.operator(v)?, &self.operator(w)?))
    }

    /// `v · φ`.
    pub fn act(&self, v: &CliffordSection, phi: &TcElement) -> Result<TcElement> {
        self.model.check_owned(phi, "form acted on")?;
        let op = self.operator(v)?;
        Ok(self.model.from_sparse(&op.apply_sparse(&self.model.to_sparse(phi))))
    }
}

/// `v · φ` for a single section.
pub fn clifford_act(model: &TransgressiveModel, v: &CliffordSection, phi: &TcElement) -> Result<TcElement> {
    model.check_owned(phi, "form acted on")?;
    let op = v.operator(model)?;
    Ok(model.from_sparse(&op.apply_sparse(&model.to_sparse(phi))))
}

/// `⟦v, w⟧_H`, decomposed back into a section.
pub fn derived_bracket(model: &TransgressiveModel, h: &TcElement, v: &CliffordSection, w: &CliffordSection) -> Result<CliffordSection> {
    Algebroid::new(model, h)?.bracket(v, w)
}

/// Basis of sections: the contractions, then the odd matrix units
/// `E_IJ ⊗ b` ordered by `(I, J, b)`.
pub fn section_basis(model: &TransgressiveModel) -> Vec<CliffordSection> {
    let base = model.base();
    let n = model.n_gens();
    let mut out: Vec<CliffordSection> = (0..base.contractions().len()).map(|k| CliffordSection::vector_field(model, k)).collect();
    for i in 0..1u32 << n {
        for j in 0..1u32 << n {
            for b in 0..base.dim() {
                if ((i.count_ones() + j.count_ones()) % 2 == 1) != base.is_odd(b) {
                    out.push(CliffordSection::from_clifford(model, CliffordElement::unit_entry(n, i, j, BaseElement::basis(b))));
                }
            }
        }
    }
    out
}

/// `𝒯_F(v)`, characterized by `τ_F(v·φ) = 𝒯_F(v)·τ_F(φ)`: conjugates the
/// action of `v` by τ_F and decomposes the result over Ê.
pub fn tduality_section_map(s: &DualityScenario, v: &CliffordSection) -> Result<CliffordSection> {
    let op = v.operator(s.e())?;
    let t = s.tau_matrix();
    let inv = s.tau_inverse()?;
    decompose_operator(s.ehat(), &t.mul(&op).mul(inv))
}

/// Section map with cached operators on both sides, for repeated use.
#[derive(Clone, Debug)]
pub struct SectionMap<'a> {
    scenario: &'a DualityScenario,
    source: Algebroid,
    target: Algebroid,
}

impl<'a> SectionMap<'a> {
    pub fn new(s: &'a DualityScenario) -> Result<Self> {
        s.tau_inverse()?;
        Ok(SectionMap { scenario: s, source: Algebroid::new(s.e(), s.h())?, target: Algebroid::new(s.ehat(), s.hhat())? })
    }

    pub fn source(&self) -> &Algebroid {
        &self.source
    }

    pub fn target(&self) -> &Algebroid {
        &self.target
    }

    pub fn apply(&self, v: &CliffordSection) -> Result<CliffordSection> {
        let op = self.source.operator(v)?;
        let t = self.scenario.tau_matrix();
        let inv = self.scenario.tau_inverse()?;
        self.target.decompose(&t.mul(&op).mul(inv))
    }

    /// Checks `τ_F ∘ (v·) = (𝒯_F v·) ∘ τ_F` as a matrix identity.
    pub fn defining_property(&self, v: &CliffordSection) -> Result<bool> {
        let tv = self.apply(v)?;
        let t = self.scenario.tau_matrix();
        let lhs = t.mul(&self.source.operator(v)?);
        let rhs = self.target.operator(&tv)?.mul(t);
        Ok(lhs.first_difference(&rhs).is_none())
    }

    pub fn side(&self, side: Side) -> &Algebroid {
        match side {
            Side::E => &self.source,
            Side::Ehat => &self.target,
        }
    }
}

/// Ranks of the summands of the odd part of End(∧⟨ψ⟩) ⊗ Ω(M) ⊕ TM for a
/// single generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereAlgebroidRanks {
    pub vector_fields: usize,
    pub dpsi_even: usize,
    pub psi_even: usize,
    pub dpsi_psi_odd: usize,
    pub forms_odd: usize,
    /// Rank of TM plus the odd Clifford-valued forms, counted directly.
    pub total: usize,
    /// The summands span a direct sum equal to the whole.
    pub direct_sum: bool,
}

impl SphereAlgebroidRanks {
    pub fn summands(&self) -> [usize; 5] {
        [self.vector_fields, self.dpsi_even, self.psi_even, self.dpsi_psi_odd, self.forms_odd]
    }

    /// Rank without the `∂_ψψ ⊗ ∧^od` summand.
    pub fn without_dpsi_psi(&self) -> usize {
        self.total - self.dpsi_psi_odd
    }
}

pub fn sphere_algebroid_decomposition(model: &TransgressiveModel) -> Result<SphereAlgebroidRanks> {
    if model.n_gens() != 1 {
        return Err(Error::NotApplicable("the decomposition is defined for a single generator".into()));
    }
    let base = model.base();
    let n = 1;
    let even: Vec<usize> = (0..base.dim()).filter(|&b| !base.is_odd(b)).collect();
    let odd: Vec<usize> = (0..base.dim()).filter(|&b| base.is_odd(b)).collect();
    let dpsi = CliffordElement::annihilate(n, base, 0);
    let psi = CliffordElement::create(n, base, 0);
    let dpsi_psi = dpsi.compose(&psi, base);
    let one = CliffordElement::identity(n, base);
    let mut ops: Vec<Vec<SparseMatrix>> = vec![(0..base.contractions().len()).map(|k| contraction_operator(model, k)).collect()];
    for (w, set) in [(&dpsi, &even), (&psi, &even), (&dpsi_psi, &odd), (&one, &odd)] {
        ops.push(set.iter().map(|&b| w.times_base(base, &BaseElement::basis(b)).operator(model)).collect());
    }
    let flat = |m: &SparseMatrix| -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); m.rows() * m.cols()];
        for j in 0..m.cols() {
            for (&i, q) in m.column(j) {
                v[j * m.rows() + i] = q.clone();
            }
        }
        v
    };
    let dim = model.dim() * model.dim();
    let ranks: Vec<usize> = ops.iter().map(|g| crate::linalg::rank_of(&g.iter().map(flat).collect::<Vec<_>>(), dim)).collect();
    let all: Vec<Vec<Scalar>> = ops.iter().flatten().map(flat).collect();
    let span = crate::linalg::rank_of(&all, dim);
    let odd_units = section_basis(model).len();
    Ok(SphereAlgebroidRanks {
        vector_fields: ranks[0],
        dpsi_even: ranks[1],
        psi_even: ranks[2],
        dpsi_psi_odd: ranks[3],
        forms_odd: ranks[4],
        total: odd_units,
        direct_sum: span == ranks.iter().sum::<usize>() && span == odd_units,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{CdgaBuilder, FiniteCdga};
    use crate::scalar::int;
    use crate::transgressive::OddGenerator;

    fn s4_model() -> TransgressiveModel {
        let mut b = CdgaBuilder::new();
        b.basis("1", 0);
        b.basis("u", 4);
        b.unit("1");
        let base = Arc::new(b.build().unwrap());
        TransgressiveModel::new(base, vec![OddGenerator::new("psi", 3, BaseElement::basis(1))]).unwrap()
    }

    #[test]
    fn creation_and_annihilation_act() {
        let m = s4_model();
        let psi = parse_section(&m, "C: psi[1] (x) 1", 1).unwrap();
        let dpsi = parse_section(&m, "C: dpsi[1]", 1).unwrap();
        assert_eq!(clifford_act(&m, &psi, &m.one()).unwrap(), m.generator(0));
        assert_eq!(clifford_act(&m, &dpsi, &m.generator(0)).unwrap(), m.one());
        assert!(clifford_act(&m, &dpsi, &m.one()).unwrap().is_zero());
    }

    #[test]
    fn twisted_d_matches_model() {
        let m = s4_model();
        let h = TcElement::term(1, 1, int(-1));
        assert_eq!(twisted_d_operator(&m, &h).unwrap(), m.differential_matrix(Some(&h)));
    }

    #[test]
    fn decompose_round_trip_and_rejects_d() {
        let m = s4_model();
        for v in section_basis(&m) {
            assert_eq!(decompose_operator(&m, &v.operator(&m).unwrap()).unwrap(), v);
        }
        let d = twisted_d_operator(&m, &TcElement::zero()).unwrap();
        assert!(decompose_operator(&m, &d).is_ok());
        let mut b = CdgaBuilder::new();
        b.basis("1", 0);
        b.basis("w", 3);
        b.basis("z", 4);
        b.unit("1");
        let z = b.elem(&[(1, "z")]).unwrap();
        b.differential("w", z).unwrap();
        let m2 = TransgressiveModel::new(Arc::new(b.build().unwrap()), vec![]).unwrap();
        assert!(matches!(
            decompose_operator(&m2, &twisted_d_operator(&m2, &TcElement::zero()).unwrap()),
            Err(Error::Decomposition(_))
        ));
    }

    #[test]
    fn dpsi_dpsi_bracket_vanishes() {
        let m = s4_model();
        let d = parse_section(&m, "C: dpsi[1] (x) 1", 1).unwrap();
        assert!(derived_bracket(&m, &TcElement::zero(), &d, &d).unwrap().is_zero());
    }

    #[test]
    fn section_text_round_trip() {
        let m = s4_model();
        for v in section_basis(&m) {
            assert_eq!(parse_section(&m, &v.render(&m), 1).unwrap(), v);
        }
        assert!(parse_section(&m, "C: psi[2]", 3).is_err());
        assert!(parse_section(&m, "C: psi[1]^dpsi[1]", 3).is_err());
    }

    #[test]
    fn sphere_ranks_over_a_point() {
        let base = Arc::new(FiniteCdga::point());
        let m = TransgressiveModel::new(base, vec![OddGenerator::new("psi", 3, BaseElement::zero())]).unwrap();
        let r = sphere_algebroid_decomposition(&m).unwrap();
        assert_eq!(r.summands(), [0, 1, 1, 0, 0]);
        assert!(r.direct_sum);
    }
}
