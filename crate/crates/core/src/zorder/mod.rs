//! Orders over Z given by structure constants, their one- and two-sided
//! modules, Hom groups between them, and the trace-form checks.

mod checks;
mod hom;
mod module;
mod order;

pub use checks::{det_left_right_check, semisimplicity_check, trace_form, SemisimplicityReport};
pub use hom::{find_bimodule_isomorphism, hom_bimodule, hom_right, ModuleHom, RealHom};
pub use module::{dual_bimodule, Bimodule, RightModule};
pub use order::{validate_order, OrderElement, ZOrder};
