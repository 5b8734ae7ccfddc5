//! The class `delta I |_H` in `H^1(Delta_g; H^*)` from the short exact
//! sequence `0 -> (H^{⊗3})' -> H^{⊗3} -> H^{⊕3} -> 0`.
//!
//! Extend the invariant functional on the span of `(H^{⊗3})'` to some `phi`
//! on the cube; `c(s) = s.phi - phi` vanishes on the span, hence factors
//! through `p` as a functional on `H^{⊕3}`, whose first summand is the
//! cocycle.

use crate::curve::Genus;
use crate::error::{Error, Result};
use crate::mod2::action::{all_generators, cube_index, f_pairing, kron3_apply};
use crate::mod2::functionals::{invariant_functionals, prime_span, ActingGroup, ModuleKind};
use crate::mod2::gf2::{F2Matrix, F2Vec};
use crate::mod2::presentation::{dual_homology_presentation, presentation_h1, Cocycle1};

/// `p mod 2` in f-coordinates as a `3n x n^3` matrix.
pub fn p_matrix_f(g: Genus) -> F2Matrix {
    let n = 2 * g.get();
    let j = f_pairing(g);
    let mut m = F2Matrix::zeros(3 * n, n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let col = cube_index(n, a, b, c);
                if j.get(a, b) {
                    m.set(c, col, true);
                }
                if j.get(b, c) {
                    m.set(n + a, col, true);
                }
                if j.get(c, a) {
                    m.set(2 * n + b, col, true);
                }
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct ConnectingClass {
    pub cocycle: Cocycle1,
    pub is_cocycle: bool,
    pub nonzero: bool,
    /// Whether the class equals the (unique) generator of `H^1`.
    pub equals_generator: bool,
    pub h1_dim: usize,
}

/// `delta` applied to the functional with cube extension `phi`.
pub fn connecting_class_of(g: Genus, phi: &F2Vec) -> Result<ConnectingClass> {
    let n = 2 * g.get();
    let span = prime_span(g)?;
    let p = p_matrix_f(g);
    let pt = p.transpose();
    let mut values = Vec::new();
    for m in all_generators(g) {
        // (s.phi)(v) = phi(s^-1 v), as a vector ((M^-1)^T)^{⊗3} phi.
        let inv_t = m
            .inverse()
            .ok_or_else(|| Error::Infeasible("singular generator".into()))?
            .transpose();
        let mut c = kron3_apply(&inv_t, phi);
        c.xor_assign(phi);
        if span.rows().iter().any(|v| c.dot(v)) {
            return Err(Error::Infeasible(
                "functional is not invariant on the span of (H^3)'".into(),
            ));
        }
        let chi = pt
            .solve(&c)
            .ok_or_else(|| Error::Infeasible("c(s) does not factor through p".into()))?;
        values.push(chi.slice(0, n));
    }
    let cocycle = Cocycle1 { values };
    let pres = dual_homology_presentation(g)?;
    let h1 = presentation_h1(&pres);
    let is_cocycle = pres.is_cocycle(&cocycle);
    let nonzero = !pres.is_coboundary(&cocycle);
    let equals_generator =
        h1.dim == 1 && nonzero && pres.is_coboundary(&cocycle.add(&h1.representatives[0]));
    Ok(ConnectingClass {
        cocycle,
        is_cocycle,
        nonzero,
        equals_generator,
        h1_dim: h1.dim,
    })
}

/// `delta I |_H` for the mod-2 harmonic volume.
pub fn connecting_class(g: Genus) -> Result<ConnectingClass> {
    let inv = invariant_functionals(g, ActingGroup::Hyperelliptic, ModuleKind::PrimeSpan)?;
    if inv.dim != 1 {
        return Err(Error::Infeasible(format!(
            "expected a unique invariant functional, found {}",
            inv.dim
        )));
    }
    connecting_class_of(g, &inv.basis[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mod2::functionals::psi_vector;

    #[test]
    fn harmonic_volume_class_generates() {
        let g = Genus::new(3).unwrap();
        let c = connecting_class(g).unwrap();
        assert!(c.is_cocycle);
        assert!(c.nonzero);
        assert!(c.equals_generator);
        assert_eq!(c.h1_dim, 1);
    }

    #[test]
    fn zero_functional_gives_zero_class() {
        let g = Genus::new(3).unwrap();
        let c = connecting_class_of(g, &F2Vec::zeros(216)).unwrap();
        assert!(c.is_cocycle);
        assert!(!c.nonzero);
    }

    #[test]
    fn extension_does_not_matter() {
        let g = Genus::new(3).unwrap();
        // psi is another extension of the same functional on the span.
        let a = connecting_class_of(g, &psi_vector(g)).unwrap();
        let b = connecting_class(g).unwrap();
        let pres = dual_homology_presentation(g).unwrap();
        assert!(pres.is_coboundary(&a.cocycle.add(&b.cocycle)));
        // Adding a functional that factors through p changes nothing either.
        let p = p_matrix_f(g);
        let mut zeta = F2Vec::zeros(18);
        zeta.set(4, true);
        zeta.set(13, true);
        let mut shifted = psi_vector(g);
        shifted.xor_assign(&p.transpose().mul_vec(&zeta));
        let c = connecting_class_of(g, &shifted).unwrap();
        assert!(pres.is_coboundary(&a.cocycle.add(&c.cocycle)));
    }

    #[test]
    fn non_invariant_functional_is_rejected() {
        let g = Genus::new(3).unwrap();
        let mut phi = F2Vec::zeros(216);
        phi.set(cube_index(6, 0, 1, 1), true);
        assert!(connecting_class_of(g, &phi).is_err());
    }
}
