//! Kodaira fibre classification for elliptic surfaces over P^1 and
//! verification routines for maximal singular fibres on elliptic K3
//! surfaces.

pub mod field;
pub mod format;
pub mod lattice;
pub mod lift;
pub mod poly;
pub mod scan;
pub mod symbolic;
pub mod tate;
pub mod verify;
pub mod weierstrass;

pub use field::{Fe, Field, FieldElement, FieldError};
pub use poly::{Place, Ring, UniPoly, Valuation};
pub use tate::{classify_all, reduction_kind, tate_classify, FibreReport, GlobalReport, KodairaType, ReductionKind};
pub use weierstrass::{CoordChange, WeierstrassModel};
