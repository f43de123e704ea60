//! The Clifford algebra of V ⊕ V* realized as End(∧V*), sections of the
//! Clifford-Courant algebroid, derived brackets and the induced map 𝒯_F.

mod algebroid;
mod element;

pub use algebroid::{
    clifford_act, contraction_operator, decompose_operator, derived_bracket, parse_section, section_basis,
    sphere_algebroid_decomposition, tduality_section_map, twisted_d_operator, Algebroid, CliffordSection, SectionMap,
    SphereAlgebroidRanks,
};
pub use element::{CliffordElement, WordTerm};
