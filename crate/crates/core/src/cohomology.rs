//! Untwisted and twisted cohomology of transgressive complexes by direct
//! kernel and image computations, plus Gysin-type checks on the base.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::json;

use crate::algebra::{BaseElement, FiniteCdga};
use crate::error::Result;
use crate::exec;
use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::Scalar;
use crate::tduality::DualityScenario;
use crate::transgressive::{TcElement, TransgressiveModel};

/// Cohomology of one grade: its dimension and cocycle representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeCohomology {
    pub dim: usize,
    pub representatives: Vec<TcElement>,
}

/// Degree-graded cohomology, degrees `0..=top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub degrees: BTreeMap<u32, GradeCohomology>,
}

/// Parity-graded cohomology of a twisted differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCohomology {
    pub even: GradeCohomology,
    pub odd: GradeCohomology,
}

impl CohomologyTable {
    /// Dimensions from degree 0 to the top degree of the complex.
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.values().map(|g| g.dim).collect()
    }

    pub fn dim(&self, k: u32) -> usize {
        self.degrees.get(&k).map_or(0, |g| g.dim)
    }

    pub fn total(&self) -> usize {
        self.degrees.values().map(|g| g.dim).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|(k, g)| if k % 2 == 0 { g.dim as i64 } else { -(g.dim as i64) }).sum()
    }

    /// Collapses degrees to parity.
    pub fn parity_dims(&self) -> (usize, usize) {
        let even = self.degrees.iter().filter(|(k, _)| *k % 2 == 0).map(|(_, g)| g.dim).sum();
        (even, self.total() - even)
    }

    pub fn to_json(&self, model: &TransgressiveModel) -> serde_json::Value {
        let degrees: Vec<_> = self
            .degrees
            .iter()
            .map(|(k, g)| {
                json!({
                    "degree": k,
                    "dim": g.dim,
                    "representatives": g.representatives.iter().map(|r| render(model, r)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "graded": degrees })
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>4}", "degree", "dim")?;
        for (k, g) in &self.degrees {
            writeln!(f, "{k:>6}  {:>4}", g.dim)?;
        }
        Ok(())
    }
}

impl TwistedCohomology {
    pub fn dims(&self) -> (usize, usize) {
        (self.even.dim, self.odd.dim)
    }

    pub fn total(&self) -> usize {
        self.even.dim + self.odd.dim
    }

    pub fn to_json(&self, model: &TransgressiveModel) -> serde_json::Value {
        let reps = |g: &GradeCohomology| g.representatives.iter().map(|r| render(model, r)).collect::<Vec<_>>();
        json!({
            "even": { "dim": self.even.dim, "representatives": reps(&self.even) },
            "odd": { "dim": self.odd.dim, "representatives": reps(&self.odd) },
        })
    }
}

impl fmt::Display for TwistedCohomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>4}", "parity", "dim")?;
        writeln!(f, "{:>6}  {:>4}", "even", self.even.dim)?;
        writeln!(f, "{:>6}  {:>4}", "odd", self.odd.dim)
    }
}

fn render(model: &TransgressiveModel, x: &TcElement) -> String {
    crate::scenario::render_element(model, x)
}

/// Restriction of `d` to the block `src → tgt` as a dense matrix.
fn block(d: &SparseMatrix, src: &[usize], tgt: &[usize]) -> Matrix {
    let mut pos = vec![usize::MAX; d.rows()];
    for (r, &t) in tgt.iter().enumerate() {
        pos[t] = r;
    }
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (c, &s) in src.iter().enumerate() {
        for (&i, q) in d.column(s) {
            assert!(pos[i] != usize::MAX, "differential leaves its target grade");
            m.set(pos[i], c, q.clone());
        }
    }
    m
}

/// Cohomology of the grade `cur` given the incoming block `prev → cur` and
/// the outgoing block `cur → next`.
fn grade_cohomology(model: &TransgressiveModel, d: &SparseMatrix, prev: &[usize], cur: &[usize], next: &[usize]) -> GradeCohomology {
    let outgoing = block(d, cur, next);
    let incoming = block(d, prev, cur);
    let cocycles = outgoing.kernel();
    let n_in = incoming.cols();
    let mut cols: Vec<Vec<Scalar>> = (0..n_in).map(|j| incoming.column(j)).collect();
    cols.extend(cocycles.iter().cloned());
    let (_, pivots) = Matrix::from_columns(cur.len(), cols).rref();
    let representatives = pivots
        .iter()
        .filter(|&&p| p >= n_in)
        .map(|&p| {
            let v = &cocycles[p - n_in];
            let mut x = TcElement::zero();
            for (q, &i) in v.iter().zip(cur) {
                if !q.is_zero() {
                    let (m, b) = model.unindex(i);
                    x.add_term(m, b, q.clone());
                }
            }
            x
        })
        .collect::<Vec<_>>();
    GradeCohomology { dim: representatives.len(), representatives }
}

fn degree_blocks(model: &TransgressiveModel) -> Vec<Vec<usize>> {
    let top = (0..model.dim()).map(|i| {
        let (m, b) = model.unindex(i);
        model.term_degree(m, b)
    });
    let max = top.clone().max().unwrap_or(0) as usize;
    let mut blocks = vec![Vec::new(); max + 2];
    for (i, k) in top.enumerate() {
        blocks[k as usize].push(i);
    }
    blocks
}

/// Degree-graded cohomology of `(Ω_Ψ, d)`.
pub fn cohomology_dims(model: &TransgressiveModel) -> CohomologyTable {
    let d = model.differential_matrix(None);
    let blocks = degree_blocks(model);
    let top = blocks.len() - 2;
    let empty = Vec::new();
    let grades = exec::map_range(top + 1, |k| {
        let prev = if k == 0 { &empty } else { &blocks[k - 1] };
        grade_cohomology(model, &d, prev, &blocks[k], &blocks[k + 1])
    });
    CohomologyTable { degrees: grades.into_iter().enumerate().map(|(k, g)| (k as u32, g)).collect() }
}

fn parity_blocks(model: &TransgressiveModel) -> [Vec<usize>; 2] {
    let mut out = [Vec::new(), Vec::new()];
    for i in 0..model.dim() {
        let (m, b) = model.unindex(i);
        out[(model.term_degree(m, b) % 2) as usize].push(i);
    }
    out
}

/// Parity-graded cohomology of `(Ω_Ψ, d + H∧)`.
pub fn twisted_cohomology_dims(model: &TransgressiveModel, h: &TcElement) -> Result<TwistedCohomology> {
    model.check_twist(h)?;
    let d = model.differential_matrix(Some(h));
    let [even, odd] = parity_blocks(model);
    let (e, o) = rayon_pair(
        || grade_cohomology(model, &d, &odd, &even, &odd),
        || grade_cohomology(model, &d, &even, &odd, &even),
    );
    Ok(TwistedCohomology { even: e, odd: o })
}

fn rayon_pair<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    #[cfg(feature = "parallel")]
    if exec::is_parallel() {
        return rayon::join(a, b);
    }
    (a(), b())
}

fn base_model(base: &FiniteCdga) -> TransgressiveModel {
    TransgressiveModel::new(Arc::new(base.clone()), Vec::new()).expect("model without generators")
}

/// Cohomology of the base algebra, representatives as base elements.
pub fn base_cohomology(base: &FiniteCdga) -> BTreeMap<u32, Vec<BaseElement>> {
    cohomology_dims(&base_model(base))
        .degrees
        .into_iter()
        .map(|(k, g)| (k, g.representatives.iter().map(|r| r.coefficient(0)).collect()))
        .collect()
}

fn base_columns(base: &FiniteCdga, xs: &[BaseElement]) -> Vec<Vec<Scalar>> {
    xs.iter().map(|x| x.to_vector(base.dim())).collect()
}

fn base_boundaries(base: &FiniteCdga) -> Vec<BaseElement> {
    (0..base.dim()).map(|i| base.d_basis(i).clone()).filter(|b| !b.is_zero()).collect()
}

/// True when `x = dy` for some base element `y`.
pub fn is_exact_in_base(base: &FiniteCdga, x: &BaseElement) -> bool {
    let cols = base_columns(base, &base_boundaries(base));
    let n = base.dim();
    Matrix::from_columns(n, cols).solve(&x.to_vector(n)).is_some()
}

/// Dimension of `span(xs) + im d` modulo `im d` in the base.
pub fn class_rank(base: &FiniteCdga, xs: &[BaseElement]) -> usize {
    let b = base_boundaries(base);
    let with: Vec<BaseElement> = b.iter().chain(xs).cloned().collect();
    let n = base.dim();
    crate::linalg::rank_of(&base_columns(base, &with), n) - crate::linalg::rank_of(&base_columns(base, &b), n)
}

/// True when the two lists span the same subspace of base cohomology.
pub fn same_classes(base: &FiniteCdga, a: &[BaseElement], b: &[BaseElement]) -> bool {
    let both: Vec<BaseElement> = a.iter().chain(b).cloned().collect();
    let r = class_rank(base, &both);
    r == class_rank(base, a) && r == class_rank(base, b)
}

/// Classes of the base killed by the pullback to Ω_Ψ, as representatives.
pub fn pullback_kernel(model: &TransgressiveModel) -> Vec<BaseElement> {
    let base = model.base();
    let d = model.differential_matrix(None);
    let blocks = degree_blocks(model);
    let mut out = Vec::new();
    for (k, reps) in base_cohomology(base) {
        if reps.is_empty() {
            continue;
        }
        let k = k as usize;
        let cur = &blocks[k];
        let prev: &[usize] = if k == 0 { &[] } else { &blocks[k - 1] };
        let incoming = block(&d, prev, cur);
        let mut pos = BTreeMap::new();
        for (r, &i) in cur.iter().enumerate() {
            pos.insert(i, r);
        }
        // Solve incoming·y = Σ a_i rep_i: kernel of [incoming | −R].
        let mut cols: Vec<Vec<Scalar>> = (0..incoming.cols()).map(|j| incoming.column(j)).collect();
        for r in &reps {
            let mut v = vec![Scalar::zero(); cur.len()];
            for (b, q) in r.terms() {
                v[pos[&model.index(0, b)]] = -q.clone();
            }
            cols.push(v);
        }
        let kernel = Matrix::from_columns(cur.len(), cols).kernel();
        let n_in = incoming.cols();
        let combos: Vec<Vec<Scalar>> = kernel.into_iter().map(|v| v[n_in..].to_vec()).collect();
        if combos.is_empty() {
            continue;
        }
        let (red, pivots) = Matrix::from_rows(combos).rref();
        for r in 0..pivots.len() {
            let mut x = BaseElement::zero();
            for (q, rep) in red.row(r).iter().zip(&reps) {
                x.add_scaled(rep, q);
            }
            out.push(x);
        }
    }
    out
}

/// Classes `[e]·[x]` for all base classes `[x]`: the principal ideal
/// generated by `e`, as representatives.
pub fn principal_ideal(base: &FiniteCdga, e: &BaseElement) -> Vec<BaseElement> {
    base_cohomology(base)
        .into_values()
        .flatten()
        .map(|r| base.mul(e, &r))
        .filter(|x| !x.is_zero())
        .collect()
}

/// Result of comparing the twisted cohomology of the two sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComparison {
    pub e: TwistedCohomology,
    pub ehat: TwistedCohomology,
    pub dims_agree: bool,
    /// τ_F maps a cocycle basis of one side to cocycles spanning the other.
    pub tau_maps_cohomology: bool,
}

impl DualComparison {
    pub fn holds(&self) -> bool {
        self.dims_agree && self.tau_maps_cohomology
    }
}

pub fn compare_duals(s: &DualityScenario) -> Result<DualComparison> {
    let e = twisted_cohomology_dims(s.e(), s.h())?;
    let ehat = twisted_cohomology_dims(s.ehat(), s.hhat())?;
    let dims_agree = e.total() == ehat.total() && (e.dims() == ehat.dims() || e.dims() == (ehat.odd.dim, ehat.even.dim));
    let eh = s.ehat();
    let dhh = eh.differential_matrix(Some(s.hhat()));
    let images: Vec<TcElement> = e
        .even
        .representatives
        .iter()
        .chain(&e.odd.representatives)
        .map(|r| s.tau_unchecked(r))
        .collect();
    let closed = images.iter().all(|y| dhh.apply_sparse(&eh.to_sparse(y)).is_empty());
    let boundaries: Vec<Vec<Scalar>> = (0..eh.dim()).map(|j| dense(dhh.column(j), eh.dim())).collect();
    let with: Vec<Vec<Scalar>> = boundaries.iter().cloned().chain(images.iter().map(|y| eh.to_vector(y))).collect();
    let gained = crate::linalg::rank_of(&with, eh.dim()) - crate::linalg::rank_of(&boundaries, eh.dim());
    let tau_maps_cohomology = closed && gained == images.len() && gained == ehat.total();
    Ok(DualComparison { e, ehat, dims_agree, tau_maps_cohomology })
}

fn dense(col: &BTreeMap<usize, Scalar>, n: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    for (&i, q) in col {
        v[i] = q.clone();
    }
    v
}
