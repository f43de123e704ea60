//! Hirsch extensions Ω_Ψ = ∧⟨Ψ⟩ ⊗ Ω(M) of a finite base algebra by odd
//! generators, and the correspondence space of two such extensions.

mod correspondence;
mod element;
mod model;

pub use correspondence::{fiber_integrate_mask, make_correspondence, Correspondence, Side};
pub use element::TcElement;
pub(crate) use model::bits;
pub use model::{make_partial_frame_model, make_partial_frame_model_labeled, GeneratingSet, OddGenerator, TransgressiveModel};

/// The part of `x` whose base coefficients have degree `k`.
pub fn basic_component(model: &TransgressiveModel, x: &TcElement, k: u32) -> TcElement {
    let base = model.base();
    x.map_coefficients(|_, b| base.component(b, k))
}
