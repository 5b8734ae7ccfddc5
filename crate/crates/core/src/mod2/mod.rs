//! The mod-2 route: GF(2) linear algebra, the Arnol'd action of the
//! hyperelliptic mapping class group, invariant functionals and group
//! cohomology from a presentation.

pub mod action;
pub mod connecting;
pub mod functionals;
pub mod gf2;
pub mod presentation;
