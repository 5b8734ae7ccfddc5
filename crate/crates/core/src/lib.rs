//! Harmonic volumes of hyperelliptic curves.
//!
//! Everything is computed on the curve `C0 : w^2 = z^(2g+2) - 1`, whose branch
//! points are the (2g+2)-th roots of unity. Two independent routes produce the
//! `{0, 1/2}` table of the harmonic volume on the canonical basis of
//! `(H^{⊗3})'`:
//!
//! * the analytic route ([`periods`], [`iterated`], [`volume`]) evaluates
//!   closed-form periods and length-two iterated integrals along words in the
//!   half-loops `e_j`, cross-checked by the numerical [`quadrature`] oracle;
//! * the topological route ([`mod2`]) works over GF(2) with the action of the
//!   hyperelliptic mapping class group on mod-2 homology.

pub mod cli;
pub mod curve;
pub mod error;
pub mod iterated;
pub mod kernel;
pub mod mod2;
pub mod periods;
pub mod quadrature;
pub mod tensor;
pub mod tolerances;
pub mod verify;
pub mod volume;

pub use curve::{Genus, LoopSymbol, PathLetter, PathWord};
pub use error::{Error, Result};
pub use periods::{FormKind, FormRef};
pub use tensor::{BasisSymbol, TensorElement};
pub use volume::{Half, HalfValue};
