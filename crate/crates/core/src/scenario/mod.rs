//! Text formats: the expression grammar for forms and sections and the
//! scenario file format built on it.

mod expr;
mod file;

pub use expr::{parse_sum, render_terms, Factor, Term};
pub use file::{
    base_block, parse_base_element, parse_element, Assign, BaseBlock, BasisEntry, ContractionBlock, FibrationBlock, GeneratorEntry,
    LoadedScenario, Loc, NamedSection, ProductEntry, ScenarioFile,
};

use crate::transgressive::{bits, TcElement, TransgressiveModel};

/// Canonical text of an element: `q * g1^g2 (x) b` summed with `+`/`-`.
pub fn render_element(model: &TransgressiveModel, x: &TcElement) -> String {
    let base = model.base();
    render_terms(x.flat_terms().map(|(m, b, q)| {
        let gens: Vec<&str> = bits(m).map(|i| model.gen(i).label.as_str()).collect();
        (q.clone(), Some(gens.join("^")), base.label(b).to_string())
    }))
}
