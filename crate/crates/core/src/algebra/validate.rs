use std::fmt;

use super::cdga::FiniteCdga;
use super::element::BaseElement;
use crate::linalg::Matrix;
use crate::scalar;

/// One failed axiom, with the basis elements witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnitDegree { unit: String, degree: u32 },
    ProductDegree { a: String, b: String },
    DifferentialDegree { a: String },
    ContractionDegree { contraction: String, a: String },
    UnitLaw { a: String },
    Commutativity { a: String, b: String },
    Associativity { a: String, b: String, c: String },
    Leibniz { a: String, b: String },
    DSquared { a: String },
    Connectivity { extra: Vec<String> },
    ContractionDerivation { contraction: String, a: String, b: String },
    ContractionSquare { contraction: String, a: String },
    ContractionsAnticommute { first: String, second: String, a: String },
    LieDerivation { contraction: String, a: String, b: String },
    DependentContractions,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            UnitDegree { unit, degree } => write!(f, "unit `{unit}` has degree {degree}, expected 0"),
            ProductDegree { a, b } => write!(f, "degree: product {a}*{b} is not of degree |{a}|+|{b}|"),
            DifferentialDegree { a } => write!(f, "degree: d({a}) is not of degree |{a}|+1"),
            ContractionDegree { contraction, a } => {
                write!(f, "degree: {contraction}({a}) is not of degree |{a}|-1")
            }
            UnitLaw { a } => write!(f, "unit law fails on {a}"),
            Commutativity { a, b } => write!(f, "graded commutativity fails on ({a}, {b})"),
            Associativity { a, b, c } => write!(f, "associativity fails on ({a}, {b}, {c})"),
            Leibniz { a, b } => write!(f, "Leibniz rule fails on ({a}, {b})"),
            DSquared { a } => write!(f, "d(d({a})) != 0"),
            Connectivity { extra } => {
                write!(f, "connectivity: degree-0 part is spanned by more than the unit ({})", extra.join(", "))
            }
            ContractionDerivation { contraction, a, b } => {
                write!(f, "{contraction} is not an odd derivation on ({a}, {b})")
            }
            ContractionSquare { contraction, a } => write!(f, "{contraction}∘{contraction} != 0 on {a}"),
            ContractionsAnticommute { first, second, a } => {
                write!(f, "{first} and {second} do not anticommute on {a}")
            }
            LieDerivation { contraction, a, b } => {
                write!(f, "Lie derivative d{contraction}+{contraction}d is not a derivation on ({a}, {b})")
            }
            DependentContractions => write!(f, "declared contractions are linearly dependent"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return writeln!(f, "valid: all axioms hold");
        }
        writeln!(f, "invalid: {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

pub(super) fn validate(a: &FiniteCdga) -> ValidationReport {
    let n = a.dim();
    let l = |i: usize| a.label(i).to_string();
    let mut out = Vec::new();

    if a.degree(a.unit()) != 0 {
        out.push(Violation::UnitDegree { unit: l(a.unit()), degree: a.degree(a.unit()) });
    }
    for i in 0..n {
        for j in 0..n {
            if !a.is_homogeneous_of(a.mul_basis(i, j), a.degree(i) + a.degree(j)) {
                out.push(Violation::ProductDegree { a: l(i), b: l(j) });
            }
        }
        if !a.is_homogeneous_of(a.d_basis(i), a.degree(i) + 1) {
            out.push(Violation::DifferentialDegree { a: l(i) });
        }
        for c in a.contractions() {
            let ok = match a.degree(i) {
                0 => c.images[i].is_zero(),
                k => a.is_homogeneous_of(&c.images[i], k - 1),
            };
            if !ok {
                out.push(Violation::ContractionDegree { contraction: c.name.clone(), a: l(i) });
            }
        }
    }

    let one = a.one();
    for i in 0..n {
        let e = BaseElement::basis(i);
        if a.mul(&one, &e) != e || a.mul(&e, &one) != e {
            out.push(Violation::UnitLaw { a: l(i) });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let odd = a.is_odd(i) && a.is_odd(j);
            if *a.mul_basis(i, j) != a.mul_basis(j, i).scale(&scalar::sign(odd)) {
                out.push(Violation::Commutativity { a: l(i), b: l(j) });
            }
        }
        let odd = a.is_odd(i);
        if odd && !a.mul_basis(i, i).is_zero() {
            out.push(Violation::Commutativity { a: l(i), b: l(i) });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = a.mul_basis(i, j);
            for k in 0..n {
                let left = a.mul(ij, &BaseElement::basis(k));
                let right = a.mul(&BaseElement::basis(i), a.mul_basis(j, k));
                if left != right {
                    out.push(Violation::Associativity { a: l(i), b: l(j), c: l(k) });
                }
            }
        }
    }

    let d = |x: &BaseElement| a.d(x);
    let derivation_fails = |op: &dyn Fn(&BaseElement) -> BaseElement, op_odd: bool, i: usize, j: usize| {
        let ei = BaseElement::basis(i);
        let ej = BaseElement::basis(j);
        let lhs = op(a.mul_basis(i, j));
        let mut rhs = a.mul(&op(&ei), &ej);
        let s = scalar::sign(op_odd && a.is_odd(i));
        rhs.add_scaled(&a.mul(&ei, &op(&ej)), &s);
        lhs != rhs
    };
    for i in 0..n {
        for j in 0..n {
            if derivation_fails(&d, true, i, j) {
                out.push(Violation::Leibniz { a: l(i), b: l(j) });
            }
        }
        if !a.d(a.d_basis(i)).is_zero() {
            out.push(Violation::DSquared { a: l(i) });
        }
    }

    let extra: Vec<String> = a.basis_of_degree(0).into_iter().filter(|&i| i != a.unit()).map(l).collect();
    if !extra.is_empty() {
        out.push(Violation::Connectivity { extra });
    }

    let cs = a.contractions();
    for (k, c) in cs.iter().enumerate() {
        let iota = |x: &BaseElement| a.contract(k, x);
        let lie = |x: &BaseElement| {
            let mut y = a.d(&a.contract(k, x));
            y.add_scaled(&a.contract(k, &a.d(x)), &scalar::one());
            y
        };
        for i in 0..n {
            for j in 0..n {
                if derivation_fails(&iota, true, i, j) {
                    out.push(Violation::ContractionDerivation { contraction: c.name.clone(), a: l(i), b: l(j) });
                }
                if derivation_fails(&lie, false, i, j) {
                    out.push(Violation::LieDerivation { contraction: c.name.clone(), a: l(i), b: l(j) });
                }
            }
            if !a.contract(k, &c.images[i]).is_zero() {
                out.push(Violation::ContractionSquare { contraction: c.name.clone(), a: l(i) });
            }
            for (m, other) in cs.iter().enumerate().skip(k + 1) {
                let mut s = a.contract(k, &other.images[i]);
                s.add_scaled(&a.contract(m, &c.images[i]), &scalar::one());
                if !s.is_zero() {
                    out.push(Violation::ContractionsAnticommute {
                        first: c.name.clone(),
                        second: other.name.clone(),
                        a: l(i),
                    });
                }
            }
        }
    }
    if !cs.is_empty() {
        let cols: Vec<Vec<_>> = cs
            .iter()
            .map(|c| c.images.iter().flat_map(|e| e.to_vector(n)).collect())
            .collect();
        if Matrix::from_columns(n * n, cols).rank() < cs.len() {
            out.push(Violation::DependentContractions);
        }
    }

    ValidationReport { violations: out }
}
