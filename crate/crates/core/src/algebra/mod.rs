//! Finite graded-commutative differential algebras standing in for Ω•(M).

mod cdga;
mod element;
mod validate;

pub use cdga::{CdgaBuilder, Contraction, FiniteCdga};
pub use element::BaseElement;
pub use validate::{ValidationReport, Violation};

pub(crate) use cdga::{is_label, merge_sign};
