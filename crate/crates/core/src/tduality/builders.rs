//! Constructive recipes producing T-dual pairs from bundle data.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::scenario::DualityScenario;
use crate::algebra::{BaseElement, FiniteCdga};
use crate::cohomology::is_exact_in_base;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::scenario::render_element;
use crate::transgressive::{
    fiber_integrate_mask, make_partial_frame_model, make_partial_frame_model_labeled, OddGenerator, TcElement,
    TransgressiveModel,
};

fn nonzero(lambda: &[Scalar]) -> Result<()> {
    if let Some(i) = lambda.iter().position(Zero::is_zero) {
        return Err(Error::Precondition(format!("multiplier at position {i} is zero")));
    }
    Ok(())
}

fn check_classes(base: &FiniteCdga, cs: &[BaseElement], first: usize, what: &str) -> Result<()> {
    for (i, c) in cs.iter().enumerate() {
        let j = (first + i) as u32;
        if !base.is_homogeneous_of(c, 2 * j) {
            return Err(Error::Degree(format!("{what}_{j} must have degree {}", 2 * j)));
        }
        if !base.is_closed(c) {
            return Err(Error::NotClosed(format!("{what}_{j}")));
        }
    }
    Ok(())
}

fn finish(s: DualityScenario) -> Result<DualityScenario> {
    let g = s.check_gerbe_trivialization();
    if !g.holds {
        let residual = render_element(s.correspondence().model(), &g.residual);
        return Err(Error::Residual { what: "gerbe trivialization of the constructed pair".into(), residual });
    }
    Ok(s)
}

/// Splits a twist in one-leg form `Σ_j ψ_j ∧ ε_j + h` into the leg
/// coefficients `ε_j` (one per generator) and the basic part `h`.
pub fn one_leg_parts(model: &TransgressiveModel, h: &TcElement) -> Result<(Vec<BaseElement>, BaseElement)> {
    model.check_owned(h, "twist")?;
    let rest = h.filter_masks(|m| m.count_ones() > 1);
    if !rest.is_zero() {
        return Err(Error::Residual {
            what: "twist is not in one-leg form".into(),
            residual: render_element(model, &rest),
        });
    }
    let legs = (0..model.n_gens()).map(|i| h.coefficient(1 << i)).collect();
    Ok((legs, h.coefficient(0)))
}

/// Dual of the bundle of unitary n-frames whose twist has one leg along the
/// fibre, with the dual a partial frame model of a rank n+k bundle. `k = 0`
/// gives the full-frame dual.
fn frame_dual(
    base: Arc<FiniteCdga>,
    chern: &[BaseElement],
    h: &TcElement,
    k: usize,
    lambda: &[Scalar],
) -> Result<DualityScenario> {
    let n = chern.len();
    if n == 0 {
        return Err(Error::Precondition("need at least one Chern representative".into()));
    }
    if lambda.len() != n {
        return Err(Error::Precondition(format!("expected {n} multipliers, got {}", lambda.len())));
    }
    nonzero(lambda)?;
    let e = make_partial_frame_model(base.clone(), chern, n)?;
    e.check_twist(h)?;
    let top = 2 * (n + k) as u32 + 1;
    if !h.is_zero() && e.degree_of(h) != Some(top) {
        return Err(Error::Degree(format!("twist must be homogeneous of degree {top}")));
    }
    let (legs, h0) = one_leg_parts(&e, h)?;
    // legs[j−1] is ε̂_{2(n+k−j+1)}
    for (idx, eps) in legs.iter().enumerate() {
        if !base.is_closed(eps) {
            return Err(Error::NotClosed(format!("leg coefficient of {}", e.gen(idx).label)));
        }
    }
    let mut gens = Vec::with_capacity(n);
    for i in 0..n {
        let eps = &legs[n - 1 - i];
        let deg = 2 * (k + i) as u32 + 1;
        gens.push(OddGenerator::new(&format!("phat{deg}"), deg, eps.scale(&lambda[i])));
    }
    let ehat = TransgressiveModel::new(base.clone(), gens)?;
    let unit = base.unit();
    let mut hhat = ehat.from_base(&h0);
    let mut f = TcElement::zero();
    for i in 0..n {
        let inv = lambda[i].recip();
        // E generator ψ_{2(n−i)−1} sits at index n−1−i
        hhat.add_coefficient(1 << i, &chern[n - 1 - i], &inv);
        f.add_term((1 << (n - 1 - i)) | (1 << (n + i)), unit, -inv);
    }
    finish(DualityScenario::new(e, h.clone(), ehat, hhat, f)?)
}

/// Full-frame dual of a rank-n bundle with twist
/// `H = Σ ε̂_{2(n−j+1)} ψ_{2j−1} + h`, given relative to
/// `make_partial_frame_model(base, chern, n)`. The dual has
/// `dψ̂_{2i−1} = λ_i ε̂_{2i}`.
pub fn construct_frame_dual_i(
    base: Arc<FiniteCdga>,
    chern: &[BaseElement],
    h: &TcElement,
    lambda: &[Scalar],
) -> Result<DualityScenario> {
    frame_dual(base, chern, h, 0, lambda)
}

/// Dual of the n-frame bundle as the partial frame bundle of n unitary
/// vectors in a rank n+k bundle. `extra_chern` holds the dual's first k
/// Chern representatives, which the construction leaves free.
pub fn construct_frame_dual_ii(
    base: Arc<FiniteCdga>,
    chern: &[BaseElement],
    h: &TcElement,
    k: usize,
    lambda: &[Scalar],
    extra_chern: &[BaseElement],
) -> Result<DualityScenario> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if extra_chern.len() != k {
        return Err(Error::Precondition(format!("expected {k} extra Chern representatives, got {}", extra_chern.len())));
    }
    check_classes(&base, extra_chern, 1, "extra Chern representative c")?;
    frame_dual(base, chern, h, k, lambda)
}

/// Pair of partial frame bundles from a form-level relation
/// `Σ_{i=0}^{n̂−k} λ_{k+i} c_{n−i} ĉ_{k+i} + dh = 0`; `lambda[i]` is
/// `λ_{k+i}`.
pub fn construct_from_relation(
    base: Arc<FiniteCdga>,
    chern: &[BaseElement],
    chern_hat: &[BaseElement],
    lambda: &[Scalar],
    k: usize,
    h: &BaseElement,
) -> Result<DualityScenario> {
    let (n, nh) = (chern.len(), chern_hat.len());
    if k == 0 || k > nh {
        return Err(Error::Precondition(format!("need 1 <= k <= {nh}, got {k}")));
    }
    if n + k <= nh {
        return Err(Error::Precondition(format!("need k > n̂ - n = {}", nh as i64 - n as i64)));
    }
    let m = nh - k + 1;
    if lambda.len() != m {
        return Err(Error::Precondition(format!("expected {m} multipliers, got {}", lambda.len())));
    }
    nonzero(lambda)?;
    let e = make_partial_frame_model(base.clone(), chern, m)?;
    let ehat = make_partial_frame_model_labeled(base.clone(), chern_hat, m, "phat")?;
    let mut rel = base.d(h);
    for (i, l) in lambda.iter().enumerate() {
        rel.add_scaled(&base.mul(&chern[n - 1 - i], &chern_hat[k - 1 + i]), l);
    }
    if !rel.is_zero() {
        return Err(Error::Residual { what: "quadratic relation".into(), residual: base.render(&rel) });
    }
    let unit = base.unit();
    let mut hh = e.from_base(h);
    let mut hhat = ehat.from_base(h);
    let mut f = TcElement::zero();
    for (i, l) in lambda.iter().enumerate() {
        // ψ_{2(n−i)−1} is E generator m−1−i; ψ̂_{2(k+i)−1} is Ê generator i
        hh.add_coefficient(1 << (m - 1 - i), &chern_hat[k - 1 + i], l);
        hhat.add_coefficient(1 << i, &chern[n - 1 - i], l);
        f.add_term((1 << (m - 1 - i)) | (1 << (m + i)), unit, -l.clone());
    }
    finish(DualityScenario::new(e, hh, ehat, hhat, f)?)
}

/// Partial k-frame bundles of two rank-n bundles with `c_j ĉ_j + dh_j = 0`
/// for `j = n−k+1..n`; `h_list[i]` is the primitive for `j = n−k+1+i`.
pub fn construct_multidegree_frame_dual(
    base: Arc<FiniteCdga>,
    chern: &[BaseElement],
    chern_hat: &[BaseElement],
    k: usize,
    h_list: &[BaseElement],
) -> Result<DualityScenario> {
    let n = chern.len();
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if chern_hat.len() != n {
        return Err(Error::Precondition("both bundles must have the same rank".into()));
    }
    if h_list.len() != k {
        return Err(Error::Precondition(format!("expected {k} primitives, got {}", h_list.len())));
    }
    let e = make_partial_frame_model(base.clone(), chern, k)?;
    let ehat = make_partial_frame_model_labeled(base.clone(), chern_hat, k, "phat")?;
    let unit = base.unit();
    let (mut hh, mut hhat, mut f) = (TcElement::zero(), TcElement::zero(), TcElement::zero());
    for (i, hj) in h_list.iter().enumerate() {
        let j = n - k + 1 + i;
        let rel = base.mul(&chern[j - 1], &chern_hat[j - 1]).add(&base.d(hj));
        if !rel.is_zero() {
            return Err(Error::Residual { what: format!("relation for j = {j}"), residual: base.render(&rel) });
        }
        hh.add_coefficient(1 << i, &chern_hat[j - 1], &Scalar::one());
        hh.add_coefficient(0, hj, &Scalar::one());
        hhat.add_coefficient(1 << i, &chern[j - 1], &Scalar::one());
        hhat.add_coefficient(0, hj, &Scalar::one());
        f.add_term((1 << i) | (1 << (k + i)), unit, -Scalar::one());
    }
    finish(DualityScenario::new(e, hh, ehat, hhat, f)?)
}

fn dual_label(label: &str) -> String {
    match label.strip_prefix("psi") {
        Some(rest) => format!("phat{rest}"),
        None => format!("{label}hat"),
    }
}

/// Sphere-bundle dual with prescribed Euler representative `ê` and dual
/// generator degree. Writes `H = H₀ + ψ H₁`, solves `H₁ = ê H' + dκ` with
/// `H'` closed and even, `κ` odd, and `H'` having a nonzero constant term.
/// Among solutions, free variables are set to zero; if that leaves the
/// constant term zero, the first kernel vector that fixes it is added.
pub fn construct_sphere_dual(
    e: &TransgressiveModel,
    h: &TcElement,
    euler_hat: &BaseElement,
    dual_degree: u32,
) -> Result<DualityScenario> {
    if e.n_gens() != 1 {
        return Err(Error::NotApplicable("sphere duals need a single-generator model".into()));
    }
    e.check_twist(h)?;
    if dual_degree.is_multiple_of(2) {
        return Err(Error::Degree(format!("dual generator degree {dual_degree} is even")));
    }
    let base = e.base_arc().clone();
    let ehat = TransgressiveModel::new(
        base.clone(),
        vec![OddGenerator::new(&dual_label(&e.gen(0).label), dual_degree, euler_hat.clone())],
    )?;
    let (h0, h1) = (h.coefficient(0), h.coefficient(1));
    let (hp, kappa) = solve_divisibility(&base, euler_hat, &h1)?;
    let unit = base.unit();
    let euler = &e.gen(0).transgression;
    let mut f = TcElement::monomial(0b11, hp.neg());
    f.add_coefficient(0b01, &kappa, &-Scalar::one());
    let mut hhat = TcElement::monomial(0, h0.add(&base.mul(euler, &kappa)));
    hhat.add_coefficient(1, &base.mul(euler, &hp), &Scalar::one());
    let s = finish(DualityScenario::new(e.clone(), h.clone(), ehat, hhat, f)?)?;
    let b0 = s.correspondence().integrate_all(s.f()).coeff(unit);
    if b0.is_zero() {
        return Err(Error::NoDual("constant part of the integrated kernel vanishes".into()));
    }
    Ok(s)
}

/// Finds `(H', κ)` with `ê H' + dκ = target`, `dH' = 0`, `H'` even with a
/// nonzero constant term and `κ` odd.
fn solve_divisibility(base: &FiniteCdga, euler: &BaseElement, target: &BaseElement) -> Result<(BaseElement, BaseElement)> {
    let dim = base.dim();
    let even: Vec<usize> = (0..dim).filter(|&i| !base.is_odd(i)).collect();
    let odd: Vec<usize> = (0..dim).filter(|&i| base.is_odd(i)).collect();
    let unit = base.unit();
    // rows: [ê·H' + dκ ; dH'], columns: even unknowns then odd unknowns
    let mut cols = Vec::with_capacity(dim);
    for &i in &even {
        let b = BaseElement::basis(i);
        let mut v = base.mul(euler, &b).to_vector(dim);
        v.extend(base.d(&b).to_vector(dim));
        cols.push(v);
    }
    for &i in &odd {
        let mut v = base.d_basis(i).to_vector(dim);
        v.extend(vec![Scalar::zero(); dim]);
        cols.push(v);
    }
    let a = Matrix::from_columns(2 * dim, cols);
    let mut rhs = target.to_vector(dim);
    rhs.extend(vec![Scalar::zero(); dim]);
    let no_dual = || Error::NoDual(format!("{} is not a multiple of the dual Euler class", base.render(target)));
    let mut x = a.solve(&rhs).ok_or_else(no_dual)?;
    let u = even.iter().position(|&i| i == unit).expect("unit is even");
    if x[u].is_zero() {
        let fix = a.kernel().into_iter().find(|v| !v[u].is_zero()).ok_or_else(no_dual)?;
        for (xi, fi) in x.iter_mut().zip(fix) {
            *xi += fi;
        }
    }
    let pick = |idx: &[usize], off: usize| BaseElement::from_terms(idx.iter().enumerate().map(|(c, &i)| (i, x[off + c].clone())));
    Ok((pick(&even, 0), pick(&odd, even.len())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereDegreeCheck {
    pub holds: bool,
    /// Every component of the integrated twist is exact.
    pub vacuous: bool,
    /// Lowest degree with a non-exact component of `π_*H`.
    pub lowest_degree: Option<u32>,
    pub expected_degree: u32,
}

/// Compares the lowest nonvanishing degree of `[π_*H]` with `|ψ̂| + 1`.
pub fn check_dual_sphere_degree(s: &DualityScenario) -> Result<SphereDegreeCheck> {
    if s.e().n_gens() != 1 || s.ehat().n_gens() != 1 {
        return Err(Error::NotApplicable("both sides must be single-generator models".into()));
    }
    let base = s.e().base();
    let pi_h = fiber_integrate_mask(s.e(), s.h(), 1).coefficient(0);
    let lowest_degree =
        (0..=base.max_degree()).find(|&k| !is_exact_in_base(base, &base.component(&pi_h, k)));
    let expected_degree = s.ehat().gen(0).degree + 1;
    Ok(SphereDegreeCheck {
        holds: lowest_degree.is_none_or(|k| k == expected_degree),
        vacuous: lowest_degree.is_none(),
        lowest_degree,
        expected_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CdgaBuilder;
    use crate::scalar::{frac, int};

    fn s2xs4() -> Arc<FiniteCdga> {
        let mut b = CdgaBuilder::new();
        b.basis("1", 0);
        b.basis("a", 2);
        b.basis("b", 4);
        b.basis("ab", 6);
        b.unit("1");
        let ab = b.elem(&[(1, "ab")]).unwrap();
        b.product("a", "b", ab).unwrap();
        Arc::new(b.build().unwrap())
    }

    fn s2xs2() -> Arc<FiniteCdga> {
        let mut b = CdgaBuilder::new();
        b.basis("1", 0);
        b.basis("x", 2);
        b.basis("y", 2);
        b.basis("xy", 4);
        b.unit("1");
        let xy = b.elem(&[(1, "xy")]).unwrap();
        b.product("x", "y", xy).unwrap();
        Arc::new(b.build().unwrap())
    }

    fn el(base: &FiniteCdga, label: &str) -> BaseElement {
        BaseElement::basis(base.index_of(label).unwrap())
    }

    #[test]
    fn frame_i_rank_two_diagonal_kernel() {
        let base = s2xs2();
        let (x, y, xy) = (el(&base, "x"), el(&base, "y"), el(&base, "xy"));
        let chern = vec![x, xy.clone()];
        let e = make_partial_frame_model(base.clone(), &chern, 2).unwrap();
        // H = ε̂₄ ψ₁ + ε̂₂ ψ₃ with ε̂₂ = y, ε̂₄ = xy
        let mut h = TcElement::monomial(0b01, xy);
        h.add_coefficient(0b10, &y, &Scalar::one());
        let s = construct_frame_dual_i(base, &chern, &h, &[int(2), int(-3)]).unwrap();
        assert!(s.check().unwrap().is_t_dual());
        assert!(s.verify_chain_map().holds);
        let mixed = s.extract_kernel_parts().unwrap().mixed;
        // −(1/λ₁) ψ₃ψ̂₁ and −(1/λ₂) ψ₁ψ̂₃
        assert!(mixed.iter().any(|t| t.e_mask == 0b10 && t.ehat_mask == 0b01 && t.coef == frac(-1, 2)));
        assert!(mixed.iter().any(|t| t.e_mask == 0b01 && t.ehat_mask == 0b10 && t.coef == frac(1, 3)));
        assert!(e.contains(s.h()));
    }

    #[test]
    fn frame_rejects_zero_multiplier_and_two_legs() {
        let base = s2xs2();
        let chern = vec![el(&base, "x"), el(&base, "xy")];
        let h = TcElement::monomial(0b01, el(&base, "xy"));
        let err = construct_frame_dual_i(base.clone(), &chern, &h, &[int(1), int(0)]).unwrap_err();
        assert!(err.is_precondition());
        let bad = TcElement::monomial(0b11, el(&base, "x"));
        assert!(construct_frame_dual_i(base, &chern, &bad, &[int(1), int(1)]).is_err());
    }

    #[test]
    fn frame_ii_partial_dual() {
        let base = s2xs4();
        let (a, b, ab) = (el(&base, "a"), el(&base, "b"), el(&base, "ab"));
        let chern = vec![a, b.clone()];
        // n = 2, k = 1: H = ε̂₆ψ₁ + ε̂₄ψ₃ of degree 7
        let mut h = TcElement::monomial(0b01, ab);
        h.add_coefficient(0b10, &b, &Scalar::one());
        let s = construct_frame_dual_ii(base.clone(), &chern, &h, 1, &[frac(1, 2), int(3)], &[BaseElement::zero()]).unwrap();
        assert!(s.check().unwrap().is_t_dual());
        assert_eq!(s.ehat().gen(0).label, "phat3");
        assert_eq!(s.ehat().gen(1).label, "phat5");
        assert!(s.verify_chain_map().holds);
    }

    #[test]
    fn relation_dual_with_primitive() {
        let mut bld = CdgaBuilder::new();
        bld.basis("1", 0);
        bld.basis("x", 2);
        bld.basis("y", 2);
        bld.basis("w", 3);
        bld.basis("z", 4);
        bld.unit("1");
        let z = bld.elem(&[(1, "z")]).unwrap();
        bld.product("x", "y", z.clone()).unwrap();
        bld.differential("w", z).unwrap();
        let base = Arc::new(bld.build().unwrap());
        let (x, y, w) = (el(&base, "x"), el(&base, "y"), el(&base, "w"));
        let s = construct_from_relation(base.clone(), std::slice::from_ref(&x), std::slice::from_ref(&y), &[int(1)], 1, &w.neg()).unwrap();
        assert!(s.check().unwrap().is_t_dual());
        let err = construct_from_relation(base.clone(), std::slice::from_ref(&x), std::slice::from_ref(&y), &[int(1)], 1, &BaseElement::zero());
        assert!(matches!(err, Err(Error::Residual { .. })));
        assert!(construct_from_relation(base, &[x], &[y], &[int(0)], 1, &w).unwrap_err().is_precondition());
    }

    #[test]
    fn multidegree_frame_rejects_k_zero() {
        let base = s2xs2();
        let c = vec![el(&base, "x"), BaseElement::zero()];
        assert!(construct_multidegree_frame_dual(base.clone(), &c, &c, 0, &[]).is_err());
        let s = construct_multidegree_frame_dual(base, &c, &c, 1, &[BaseElement::zero()]).unwrap();
        assert!(s.check().unwrap().is_t_dual());
    }

    #[test]
    fn sphere_dual_mixed_degree_kernel() {
        let base = s2xs4();
        let (a, b, ab) = (el(&base, "a"), el(&base, "b"), el(&base, "ab"));
        let e = TransgressiveModel::new(base.clone(), vec![OddGenerator::new("psi3", 3, BaseElement::zero())]).unwrap();
        let h = TcElement::monomial(1, a.add(&ab));
        let s = construct_sphere_dual(&e, &h, &a, 1).unwrap();
        assert_eq!(s.ehat().gen(0).label, "phat3");
        let one_plus_b = base.one().add(&b);
        assert_eq!(s.f(), &TcElement::monomial(0b11, one_plus_b.neg()));
        assert!(s.check().unwrap().is_t_dual());
        let c = check_dual_sphere_degree(&s).unwrap();
        assert!(c.holds && !c.vacuous);
        assert_eq!(c.lowest_degree, Some(2));
        // b is not a multiple of a
        let bad = TcElement::monomial(1, b);
        assert!(matches!(construct_sphere_dual(&e, &bad, &a, 1), Err(Error::NoDual(_))));
    }

    #[test]
    fn sphere_degree_vacuous_and_mismatch() {
        let base = s2xs4();
        let a = el(&base, "a");
        let e = TransgressiveModel::new(base.clone(), vec![OddGenerator::new("psi", 1, BaseElement::zero())]).unwrap();
        let s = construct_sphere_dual(&e, &TcElement::zero(), &BaseElement::zero(), 1).unwrap();
        let c = check_dual_sphere_degree(&s).unwrap();
        assert!(c.holds && c.vacuous);
        // ê = 0 in degree 4 but π_*H = a lives in degree 2
        let eh = TransgressiveModel::new(base.clone(), vec![OddGenerator::new("q", 3, BaseElement::zero())]).unwrap();
        let h = TcElement::monomial(1, a);
        let f = TcElement::zero();
        let hh = TcElement::zero();
        // the gerbe condition fails here; the degree check only reads H
        let s = DualityScenario::new(e, h, eh, hh, f).unwrap();
        let c = check_dual_sphere_degree(&s).unwrap();
        assert!(!c.holds);
        assert_eq!((c.lowest_degree, c.expected_degree), (Some(2), 4));
    }
}
