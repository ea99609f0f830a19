//! Exact theta series of even unimodular lattices glued from `D_n` root
//! lattices, together with the `E4`/`Δ24` identities that describe them.

pub mod bivar;
pub mod combinatorics;
pub mod lattices;
pub mod modforms;
pub mod qseries;
pub mod symexpand;

pub use bivar::{BPoly, EDeltaForm};
pub use modforms::{ModformCache, ThetaKind};
pub use qseries::{QExp, QSeries};
