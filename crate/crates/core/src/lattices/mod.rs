//! Lattices glued from `D_n` components and their theta series, computed
//! from coset theta products, from the closed-form theorems, and by counting
//! lattice points.

pub mod audit;
pub mod cosets;
pub mod enumerate;
pub mod glue;
pub mod gram;
pub mod spec;
pub mod theorem;

use thiserror::Error;

use crate::modforms::ModformError;
use crate::qseries::SeriesError;
use crate::symexpand::SymError;

pub use audit::{niemeier_audit, specialization_audit, NiemeierRow, SpecializationRow};
pub use cosets::{coset_theta_component, theta_by_cosets};
pub use enumerate::theta_by_enumeration;
pub use glue::{glue_group, CosetLabel, GlueVector, Label};
pub use gram::{check_even_unimodular, UnimodularReport};
pub use spec::{LatticeFamily, LatticeSpec};
pub use theorem::{theta_by_theorem, theta_by_theorem_with, theorem_expr, RangeReading};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),
    #[error("enumeration of a rank-{rank} component up to q^{bound} would visit about {estimate} vectors")]
    BoundsTooLarge { rank: u32, bound: String, estimate: u128 },
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Modform(#[from] ModformError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
