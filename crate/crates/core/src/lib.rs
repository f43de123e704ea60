//! Exact computer algebra for odd transgressive fibrations.
//!
//! Total spaces are modelled by their transgressive complexes: a finite
//! graded-commutative differential algebra (the base) extended by odd
//! generators whose differentials are closed base elements. On top of that
//! model the crate checks and constructs T-dual pairs, computes twisted
//! cohomology, and realizes the Clifford-Courant algebroid with its derived
//! bracket and the induced T-duality map.
//!
//! All arithmetic is over exact rationals.

pub mod algebra;
pub mod clifford;
pub mod cohomology;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod linalg;
pub mod scalar;
pub mod scenario;
pub mod tduality;
pub mod transgressive;

pub use algebra::{BaseElement, CdgaBuilder, FiniteCdga, ValidationReport, Violation};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tduality::DualityScenario;
pub use transgressive::{Correspondence, OddGenerator, TcElement, TransgressiveModel};
