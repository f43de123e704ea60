//! T-duality of transgressive fibrations: the two defining conditions, the
//! transform τ_F, changes of generating set and constructive recipes.

mod builders;
mod change;
mod scenario;

pub use builders::{
    check_dual_sphere_degree, construct_frame_dual_i, construct_frame_dual_ii, construct_from_relation,
    construct_multidegree_frame_dual, construct_sphere_dual, one_leg_parts, SphereDegreeCheck,
};
pub use change::{change_generating_set, ChangedModel, GeneratorChange};
pub use scenario::{ChainMapCheck, DualityScenario, GerbeCheck, KernelParts, MixedTerm, NondegeneracyCheck, Verdict};
