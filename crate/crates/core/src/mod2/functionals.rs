//! Invariant GF(2) functionals on `H`, `H^{⊗3}` and the span of `(H^{⊗3})'`,
//! the functional `psi`, and the second, purely mod-2 evaluation of the
//! harmonic volume on the families of kind 1 and 2.

use rayon::prelude::*;

use crate::curve::Genus;
use crate::error::{Error, Result};
use crate::mod2::action::{
    all_generators, cube_index, kron3_apply, kron3_row_of_transpose, tensor_to_f_cube,
};
use crate::mod2::gf2::{Echelon, F2Matrix, F2Vec};
use crate::tensor::{enumerate_basis, family_a, CanonicalElement, CanonicalKind};
use crate::tolerances::MOD2_CUBE_MAX_GENUS;
use crate::volume::{Half, VolumeEngine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActingGroup {
    /// Stabiliser of `e'_0`: `sigma_2..sigma_{2g+1}`.
    Sym2gPlus1,
    /// All of `sigma_1..sigma_{2g+1}`.
    Sym2gPlus2,
    /// The hyperelliptic mapping class group. It acts on mod-2 homology
    /// through its surjection onto `S_{2g+2}`, so the generator matrices are
    /// those of `Sym2gPlus2`.
    Hyperelliptic,
}

impl ActingGroup {
    pub fn generators(self, g: Genus) -> Vec<F2Matrix> {
        let all = all_generators(g);
        match self {
            ActingGroup::Sym2gPlus1 => all[1..].to_vec(),
            _ => all,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ActingGroup::Sym2gPlus1 => "S_2g+1",
            ActingGroup::Sym2gPlus2 => "S_2g+2",
            ActingGroup::Hyperelliptic => "Delta_g",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    H,
    Cube,
    /// Row space of the mod-2 reductions of the basis `B` of `(H^{⊗3})'`.
    PrimeSpan,
}

impl ModuleKind {
    pub fn label(self) -> &'static str {
        match self {
            ModuleKind::H => "H",
            ModuleKind::Cube => "H^3",
            ModuleKind::PrimeSpan => "(H^3)'",
        }
    }
}

/// Invariant functionals: `dim` and a basis given as vectors on the ambient
/// space (`H` or the cube). For the prime span the basis vectors are
/// extensions to the cube, independent on the span.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub dim: usize,
    pub basis: Vec<F2Vec>,
}

fn check_cube_genus(g: Genus) -> Result<()> {
    if g.get() > MOD2_CUBE_MAX_GENUS {
        return Err(Error::Infeasible(format!(
            "cube-level GF(2) computations are limited to g <= {MOD2_CUBE_MAX_GENUS}"
        )));
    }
    Ok(())
}

pub fn invariant_functionals(
    g: Genus,
    group: ActingGroup,
    module: ModuleKind,
) -> Result<InvariantSpace> {
    let gens = group.generators(g);
    let n = 2 * g.get();
    match module {
        ModuleKind::H => {
            // phi ∘ M = phi  <=>  (M^T + I) phi = 0
            let mut rows = Vec::new();
            for m in &gens {
                rows.extend(
                    m.transpose()
                        .add(&F2Matrix::identity(n))
                        .rows()
                        .iter()
                        .cloned(),
                );
            }
            let basis = F2Matrix::from_rows(n, rows).nullspace();
            Ok(InvariantSpace {
                dim: basis.len(),
                basis,
            })
        }
        ModuleKind::Cube => {
            check_cube_genus(g)?;
            let dim = n * n * n;
            let mut e = Echelon::new(dim);
            for m in &gens {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let mut row = kron3_row_of_transpose(m, a, b, c);
                            row.flip(cube_index(n, a, b, c));
                            e.insert(row);
                        }
                    }
                }
            }
            let basis = F2Matrix::from_rows(dim, e.rows().to_vec()).nullspace();
            Ok(InvariantSpace {
                dim: basis.len(),
                basis,
            })
        }
        ModuleKind::PrimeSpan => {
            check_cube_genus(g)?;
            let span = prime_span(g)?;
            let dim = n * n * n;
            // Stability, then W = span{(M - 1) v}; invariants vanish on W.
            let mut w = Echelon::new(dim);
            for m in &gens {
                for v in span.rows() {
                    let mut image = kron3_apply(m, v);
                    if !span.contains(&image) {
                        return Err(Error::Infeasible(format!(
                            "the span of (H^3)' is not stable under {}",
                            group.label()
                        )));
                    }
                    image.xor_assign(v);
                    w.insert(image);
                }
            }
            let annihilator = F2Matrix::from_rows(dim, w.rows().to_vec()).nullspace();
            let mut restricted = Echelon::new(span.rank());
            let mut basis = Vec::new();
            for phi in annihilator {
                let r: Vec<bool> = span.rows().iter().map(|v| phi.dot(v)).collect();
                if restricted.insert(F2Vec::from_bits(&r)) {
                    basis.push(phi);
                }
            }
            let d = span.rank() - w.rank();
            if basis.len() != d {
                return Err(Error::Infeasible(format!(
                    "invariant count {} disagrees with dim V - dim W = {d}",
                    basis.len()
                )));
            }
            Ok(InvariantSpace { dim: d, basis })
        }
    }
}

/// The GF(2) span `V` of `(H^{⊗3})'` inside the f-cube.
pub fn prime_span(g: Genus) -> Result<Echelon> {
    check_cube_genus(g)?;
    let n = 2 * g.get();
    let basis = enumerate_basis(g)?;
    let vecs: Vec<F2Vec> = basis
        .basis
        .par_iter()
        .map(|b| tensor_to_f_cube(g, &b.tensor))
        .collect();
    let mut e = Echelon::new(n * n * n);
    for v in vecs {
        e.insert(v);
    }
    Ok(e)
}

/// `psi(f_i ⊗ f_j ⊗ f_k)` for `1 <= i, j, k <= 2g+1`: 1 exactly when two of
/// the three indices agree and the third differs.
pub fn psi_table(i: usize, j: usize, k: usize) -> bool {
    let distinct = i != j && j != k && k != i;
    let equal = i == j && j == k;
    !(distinct || equal)
}

/// `psi` on the cube over `f_1..f_{2g}`.
pub fn psi_vector(g: Genus) -> F2Vec {
    let n = 2 * g.get();
    let mut v = F2Vec::zeros(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if psi_table(a + 1, b + 1, c + 1) {
                    v.set(cube_index(n, a, b, c), true);
                }
            }
        }
    }
    v
}

pub fn psi_eval(g: Genus, t: &F2Vec) -> bool {
    psi_vector(g).dot(t)
}

/// The table vanishes whenever one slot runs over the relation
/// `f_1 + ... + f_{2g+1}`, so its multilinear extension is well defined
/// and agrees with the table on `f_{2g+1}`.
pub fn psi_well_defined(g: Genus) -> bool {
    let m = 2 * g.get() + 1;
    for u in 1..=m {
        for v in 1..=m {
            let s: [usize; 3] = [
                (1..=m).filter(|&r| psi_table(r, u, v)).count(),
                (1..=m).filter(|&r| psi_table(u, r, v)).count(),
                (1..=m).filter(|&r| psi_table(u, v, r)).count(),
            ];
            if s.iter().any(|c| c % 2 == 1) {
                return false;
            }
        }
    }
    true
}

pub fn psi_invariant_under(g: Genus, group: ActingGroup) -> bool {
    let psi = psi_vector(g);
    let n = 2 * g.get();
    group.generators(g).iter().all(|m| {
        // (psi ∘ M^{⊗3})(a,b,c) = psi · (col_a ⊗ col_b ⊗ col_c)
        (0..n * n * n).all(|idx| {
            let (a, b, c) = (idx / (n * n), idx / n % n, idx % n);
            psi.dot(&kron3_row_of_transpose(m, a, b, c)) == psi.get(idx)
        })
    })
}

#[derive(Clone, Debug)]
pub struct SecondProofRow {
    pub element: CanonicalElement,
    pub bit: bool,
}

/// `psi` on every kind-1 and kind-2 element of `A` after the substitution.
pub fn second_proof_table(g: Genus) -> Vec<SecondProofRow> {
    let psi = psi_vector(g);
    family_a(g)
        .into_iter()
        .filter(|e| matches!(e.kind, CanonicalKind::One | CanonicalKind::Two))
        .map(|element| {
            let bit = psi.dot(&tensor_to_f_cube(g, &element.tensor));
            SecondProofRow { element, bit }
        })
        .collect()
}

/// Compares `2 I mod 2` with `psi` on every element of `B`; returns the
/// number of elements checked and the number of disagreements.
pub fn analytic_matches_psi(g: Genus, engine: &VolumeEngine) -> Result<(usize, usize)> {
    let psi = psi_vector(g);
    let basis = enumerate_basis(g)?;
    let bad: Result<Vec<bool>> = basis
        .basis
        .par_iter()
        .map(|b| {
            let v = engine.volume(&b.tensor)?;
            Ok((v.value == Half::OneHalf) != psi.dot(&tensor_to_f_cube(g, &b.tensor)))
        })
        .collect();
    let bad = bad?;
    Ok((bad.len(), bad.iter().filter(|&&x| x).count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mod2::action::{f_vector, outer3};

    #[test]
    fn psi_examples() {
        let g = Genus::new(3).unwrap();
        let f = |i| f_vector(g, i);
        assert!(!psi_eval(g, &outer3(&f(1), &f(2), &f(3))));
        assert!(!psi_eval(g, &outer3(&f(1), &f(1), &f(1))));
        assert!(psi_eval(g, &outer3(&f(1), &f(1), &f(2))));
        // f_7 = sum of f_1..f_6 is handled by expansion.
        assert_eq!(
            psi_eval(g, &outer3(&f(7), &f(7), &f(2))),
            psi_table(7, 7, 2)
        );
        assert_eq!(
            psi_eval(g, &outer3(&f(7), &f(3), &f(2))),
            psi_table(7, 3, 2)
        );
    }

    #[test]
    fn psi_is_well_defined_and_invariant() {
        for gi in 3..=5 {
            let g = Genus::new(gi).unwrap();
            assert!(psi_well_defined(g));
            assert!(psi_invariant_under(g, ActingGroup::Sym2gPlus1));
            assert!(!psi_invariant_under(g, ActingGroup::Sym2gPlus2));
        }
    }

    #[test]
    fn invariant_dimensions_g3() {
        let g = Genus::new(3).unwrap();
        assert_eq!(
            invariant_functionals(g, ActingGroup::Sym2gPlus1, ModuleKind::H)
                .unwrap()
                .dim,
            0
        );
        let cube = invariant_functionals(g, ActingGroup::Sym2gPlus1, ModuleKind::Cube).unwrap();
        assert_eq!(cube.dim, 1);
        assert_eq!(cube.basis[0], psi_vector(g));
        assert_eq!(
            invariant_functionals(g, ActingGroup::Sym2gPlus2, ModuleKind::Cube)
                .unwrap()
                .dim,
            0
        );
        let prime =
            invariant_functionals(g, ActingGroup::Hyperelliptic, ModuleKind::PrimeSpan).unwrap();
        assert_eq!(prime.dim, 1);
    }

    #[test]
    fn second_proof_example() {
        let g = Genus::new(3).unwrap();
        use crate::tensor::{BasisSymbol as B, TensorElement};
        let t = TensorElement::from_terms(&[
            (1, [B::x(1), B::y(1), B::y(2)]),
            (1, [B::x(3), B::y(3), B::y(2)]),
        ]);
        assert!(psi_eval(g, &tensor_to_f_cube(g, &t)));
        for r in second_proof_table(g) {
            if r.element.kind == CanonicalKind::One {
                assert!(!r.bit);
            }
        }
    }

    #[test]
    fn cube_genus_limit() {
        let g = Genus::new(7).unwrap();
        assert!(invariant_functionals(g, ActingGroup::Sym2gPlus1, ModuleKind::Cube).is_err());
        assert_eq!(
            invariant_functionals(g, ActingGroup::Sym2gPlus1, ModuleKind::H)
                .unwrap()
                .dim,
            0
        );
    }
}
