//! Brute-force reference computations, written against the mathematical
//! definitions rather than the library's bitmask arithmetic.
//!
//! Forms are sums of words in generator and base symbols. A word is
//! normalized by adjacent transpositions, each contributing the Koszul sign
//! of the two degrees, and base symbols are multiplied out at the end.

#![allow(dead_code)]

use num_traits::{One, Zero};
use tdual_core::{BaseElement, FiniteCdga, Scalar, TcElement, TransgressiveModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sym {
    Gen(usize),
    Base(usize),
}

pub type Words = Vec<(Scalar, Vec<Sym>)>;

pub struct Ctx<'a> {
    pub base: &'a FiniteCdga,
    pub gen_deg: Vec<u32>,
    pub trans: Vec<BaseElement>,
}

impl<'a> Ctx<'a> {
    pub fn of(model: &'a TransgressiveModel) -> Self {
        let n = model.n_gens();
        Ctx {
            base: model.base(),
            gen_deg: (0..n).map(|i| model.gen(i).degree).collect(),
            trans: (0..n).map(|i| model.gen(i).transgression.clone()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.gen_deg.len()
    }

    pub fn deg(&self, s: Sym) -> u32 {
        match s {
            Sym::Gen(i) => self.gen_deg[i],
            Sym::Base(b) => self.base.degree(b),
        }
    }

    fn word_deg(&self, w: &[Sym]) -> u32 {
        w.iter().map(|&s| self.deg(s)).sum()
    }

    /// Bubble sort by `key`; `None` when a generator appears twice.
    fn sort(&self, w: &mut [Sym], key: &dyn Fn(Sym) -> (u32, usize)) -> Option<bool> {
        let mut odd = false;
        let n = w.len();
        for pass in 0..n {
            for i in 0..n.saturating_sub(1 + pass) {
                if key(w[i]) > key(w[i + 1]) {
                    if self.deg(w[i]) % 2 == 1 && self.deg(w[i + 1]) % 2 == 1 {
                        odd = !odd;
                    }
                    w.swap(i, i + 1);
                }
            }
        }
        for pair in w.windows(2) {
            if let [Sym::Gen(a), Sym::Gen(b)] = pair {
                if a == b {
                    return None;
                }
            }
        }
        Some(odd)
    }

    fn base_product(&self, syms: &[Sym]) -> BaseElement {
        syms.iter().fold(self.base.one(), |acc, s| match s {
            Sym::Base(b) => self.base.mul(&acc, &BaseElement::basis(*b)),
            Sym::Gen(_) => unreachable!("generators are sorted first"),
        })
    }

    /// Normal form `ψ_I ∧ b` of a sum of words.
    pub fn normalize(&self, words: &Words) -> TcElement {
        let key = |s: Sym| match s {
            Sym::Gen(i) => (0, i),
            Sym::Base(_) => (1, 0),
        };
        let mut out = TcElement::zero();
        for (q, w) in words {
            let mut w = w.clone();
            let Some(odd) = self.sort(&mut w, &key) else { continue };
            let split = w.iter().take_while(|s| matches!(s, Sym::Gen(_))).count();
            let mask = w[..split].iter().fold(0u32, |m, s| match s {
                Sym::Gen(i) => m | 1 << i,
                Sym::Base(_) => m,
            });
            let b = self.base_product(&w[split..]);
            let q = if odd { -q.clone() } else { q.clone() };
            out.add_coefficient(mask, &b, &q);
        }
        out
    }

    pub fn words(&self, x: &TcElement) -> Words {
        self.shifted_words(x, 0)
    }

    /// Words of `x` with generator `i` renamed to `i + shift`.
    pub fn shifted_words(&self, x: &TcElement, shift: usize) -> Words {
        x.flat_terms()
            .map(|(mask, b, q)| {
                let mut w: Vec<Sym> = (0..32).filter(|i| mask >> i & 1 == 1).map(|i| Sym::Gen(i + shift)).collect();
                w.push(Sym::Base(b));
                (q.clone(), w)
            })
            .collect()
    }

    pub fn mul_words(x: &Words, y: &Words) -> Words {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for (p, u) in x {
            for (q, v) in y {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.push((p * q, w));
            }
        }
        out
    }

    pub fn wedge(&self, x: &TcElement, y: &TcElement) -> TcElement {
        self.normalize(&Self::mul_words(&self.words(x), &self.words(y)))
    }

    /// `Σ_k F^k / k!`.
    pub fn exp(&self, f: &TcElement) -> TcElement {
        let mut sum = TcElement::zero();
        let mut power = self.normalize(&vec![(Scalar::one(), vec![])]);
        let mut k = 0i64;
        while !power.is_zero() {
            sum = sum.add(&power);
            k += 1;
            power = self.wedge(&power, f).scale(&Scalar::new(1.into(), k.into()));
        }
        sum
    }

    fn expand(&self, b: &BaseElement) -> Words {
        b.terms().map(|(i, q)| (q.clone(), vec![Sym::Base(i)])).collect()
    }

    /// Leibniz rule on words.
    pub fn d(&self, x: &TcElement) -> TcElement {
        let mut out: Words = Vec::new();
        for (q, w) in self.words(x) {
            for i in 0..w.len() {
                let image = match w[i] {
                    Sym::Gen(g) => self.expand(&self.trans[g]),
                    Sym::Base(b) => self.expand(self.base.d_basis(b)),
                };
                let sign = self.word_deg(&w[..i]) % 2 == 1;
                for (p, v) in image {
                    let mut nw = w[..i].to_vec();
                    nw.extend(v);
                    nw.extend_from_slice(&w[i + 1..]);
                    let c = &q * p;
                    out.push((if sign { -c } else { c }, nw));
                }
            }
        }
        self.normalize(&out)
    }

    pub fn d_twisted(&self, h: &TcElement, x: &TcElement) -> TcElement {
        self.d(x).add(&self.wedge(h, x))
    }

    /// Right extraction of the generators in `fiber`: writes each word as
    /// `β ∧ ψ_{fiber}` with the fiber generators ascending at the right end
    /// and returns `β`, with the remaining generators renumbered by `rename`.
    pub fn integrate(&self, x: &Words, fiber: &[usize], rename: &dyn Fn(usize) -> usize) -> Words {
        let key = |s: Sym| match s {
            Sym::Gen(i) if fiber.contains(&i) => (2, i),
            Sym::Gen(i) => (0, i),
            Sym::Base(_) => (1, 0),
        };
        let mut out = Vec::new();
        for (q, w) in x {
            let mut w = w.clone();
            let Some(odd) = self.sort(&mut w, &key) else { continue };
            if w.len() < fiber.len() {
                continue;
            }
            let k = w.len() - fiber.len();
            if w[k..].iter().zip(fiber).any(|(s, &g)| *s != Sym::Gen(g)) {
                continue;
            }
            let rest = w[..k]
                .iter()
                .map(|s| match *s {
                    Sym::Gen(i) => Sym::Gen(rename(i)),
                    b => b,
                })
                .collect();
            out.push((if odd { -q.clone() } else { q.clone() }, rest));
        }
        out
    }
}

/// τ_F computed from scratch on a correspondence of `e` and `ehat`.
pub struct Tau<'a> {
    pub total: Ctx<'a>,
    pub target: Ctx<'a>,
    n: usize,
    exp_f: Words,
}

impl<'a> Tau<'a> {
    pub fn new(total: &'a TransgressiveModel, ehat: &'a TransgressiveModel, n: usize, f: &TcElement) -> Self {
        let total_ctx = Ctx::of(total);
        let exp = total_ctx.exp(f);
        let exp_f = total_ctx.words(&exp);
        Tau { total: total_ctx, target: Ctx::of(ehat), n, exp_f }
    }

    pub fn apply(&self, x: &TcElement) -> TcElement {
        let prod = Ctx::mul_words(&self.exp_f, &self.total.words(x));
        let fiber: Vec<usize> = (0..self.n).collect();
        let n = self.n;
        let rest = self.total.integrate(&prod, &fiber, &|i| i - n);
        self.target.normalize(&rest)
    }
}

/// Rank by Gaussian elimination on rows.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                let prow = m[r].clone();
                for (x, y) in m[i][c..].iter_mut().zip(&prow[c..]) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn determinant(rows: &[Vec<Scalar>]) -> Scalar {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let n = m.len();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Scalar::zero() };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= m[c][c].clone();
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            let prow = m[c].clone();
            for (x, y) in m[i][c..].iter_mut().zip(&prow[c..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Basis of Ω_Ψ as `(mask, base index)` pairs.
pub fn basis(model: &TransgressiveModel) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for mask in 0..1u32 << model.n_gens() {
        for b in 0..model.base().dim() {
            out.push((mask, b));
        }
    }
    out
}

pub fn basis_element(mask: u32, b: usize) -> TcElement {
    TcElement::term(mask, b, Scalar::one())
}

pub fn degree(model: &TransgressiveModel, mask: u32, b: usize) -> u32 {
    (0..model.n_gens()).filter(|i| mask >> i & 1 == 1).map(|i| model.gen(i).degree).sum::<u32>() + model.base().degree(b)
}

/// Coordinates of `x` against [`basis`].
pub fn coords(model: &TransgressiveModel, x: &TcElement) -> Vec<Scalar> {
    let dim = model.base().dim();
    let mut v = vec![Scalar::zero(); (1usize << model.n_gens()) * dim];
    for (mask, b, q) in x.flat_terms() {
        v[mask as usize * dim + b] += q.clone();
    }
    v
}

/// `dim ker − rank im` of a graded operator `op`, where `grade` assigns a
/// grade to each basis element and `prev(g)` is the grade mapped into `g`.
pub fn cohomology(
    model: &TransgressiveModel,
    op: &dyn Fn(&TcElement) -> TcElement,
    grade: &dyn Fn(u32, usize) -> u32,
    prev: &dyn Fn(u32) -> Option<u32>,
    grades: &[u32],
) -> Vec<usize> {
    let images: Vec<(u32, Vec<Scalar>)> =
        basis(model).into_iter().map(|(m, b)| (grade(m, b), coords(model, &op(&basis_element(m, b))))).collect();
    let of_grade = |g: u32| -> Vec<Vec<Scalar>> { images.iter().filter(|(k, _)| *k == g).map(|(_, v)| v.clone()).collect() };
    grades
        .iter()
        .map(|&g| {
            let rows = of_grade(g);
            let boundaries = prev(g).map_or(0, |p| rank(&of_grade(p)));
            rows.len() - rank(&rows) - boundaries
        })
        .collect()
}
