//! Gap-preserving reductions between the reconfiguration problems, with
//! solution mappings in both directions.

pub mod gadget;
pub mod hvc;
pub mod labelcover;
pub mod setcover;

pub use gadget::{gadget_law_violation, CorruptedGadget, Gadget, GadgetKind, GadgetSpace, MonotoneGadget};
pub use hvc::{labelcover_to_hvc, labelcover_to_hvc_with, HvcReduction};
pub use labelcover::{lift_sequence, p2csp_to_labelcover, project, project_sequence, singleton_size_bound_holds};
pub use setcover::{labelcover_to_setcover, labelcover_to_setcover_with, Orientation, SetCoverReduction};
