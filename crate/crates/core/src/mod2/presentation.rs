//! First cohomology of a finitely presented group with coefficients in a
//! GF(2) module, from relators alone.
//!
//! A 1-cocycle is determined by its values on generators; the convention is
//! `c(gh) = c(g) + g c(h)`, so every relator `r` imposes the linear
//! condition `c(r) = 0`.

use crate::curve::Genus;
use crate::error::{Error, Result};
use crate::mod2::action::all_generators;
use crate::mod2::gf2::{Echelon, F2Matrix, F2Vec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenLetter {
    pub gen: usize,
    pub inverse: bool,
}

impl GenLetter {
    pub fn new(gen: usize) -> Self {
        GenLetter {
            gen,
            inverse: false,
        }
    }

    pub fn inv(gen: usize) -> Self {
        GenLetter { gen, inverse: true }
    }
}

pub type GroupWord = Vec<GenLetter>;

pub fn inverse_word(w: &[GenLetter]) -> GroupWord {
    w.iter()
        .rev()
        .map(|l| GenLetter {
            gen: l.gen,
            inverse: !l.inverse,
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Relator {
    pub name: String,
    pub word: GroupWord,
}

#[derive(Clone, Debug)]
pub struct GroupPresentationF2 {
    pub generators: usize,
    pub relators: Vec<Relator>,
    /// Left action of each generator on the module.
    pub action: Vec<F2Matrix>,
    inverses: Vec<F2Matrix>,
}

impl GroupPresentationF2 {
    pub fn new(generators: usize, relators: Vec<Relator>, action: Vec<F2Matrix>) -> Result<Self> {
        if action.len() != generators {
            return Err(Error::Infeasible(format!(
                "{} action matrices for {generators} generators",
                action.len()
            )));
        }
        let inverses = action
            .iter()
            .map(|m| {
                m.inverse()
                    .ok_or_else(|| Error::Infeasible("generator acts singularly".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = GroupPresentationF2 {
            generators,
            relators,
            action,
            inverses,
        };
        p.check_relators()?;
        Ok(p)
    }

    pub fn module_dim(&self) -> usize {
        self.action.first().map_or(0, |m| m.ncols())
    }

    fn letter_matrix(&self, l: GenLetter) -> &F2Matrix {
        if l.inverse {
            &self.inverses[l.gen]
        } else {
            &self.action[l.gen]
        }
    }

    pub fn word_action(&self, w: &[GenLetter]) -> F2Matrix {
        let d = self.module_dim();
        w.iter().fold(F2Matrix::identity(d), |acc, &l| {
            acc.mul(self.letter_matrix(l))
        })
    }

    pub fn check_relators(&self) -> Result<()> {
        for r in &self.relators {
            if !self.word_action(&r.word).is_identity() {
                return Err(Error::Infeasible(format!(
                    "relator {} does not act trivially",
                    r.name
                )));
            }
        }
        Ok(())
    }

    /// Coefficient matrices `A_s` with `c(w) = sum_s A_s c(s)`.
    pub fn cocycle_expansion(&self, w: &[GenLetter]) -> Vec<F2Matrix> {
        let d = self.module_dim();
        let mut coeff = vec![F2Matrix::zeros(d, d); self.generators];
        let mut prefix = F2Matrix::identity(d);
        for &l in w {
            // c(s^-1) = -s^-1 c(s)
            let term = if l.inverse {
                prefix.mul(&self.inverses[l.gen])
            } else {
                prefix.clone()
            };
            coeff[l.gen] = coeff[l.gen].add(&term);
            prefix = prefix.mul(self.letter_matrix(l));
        }
        coeff
    }

    /// Stacked unknowns `(c(s_1), ..., c(s_G))` as one vector.
    fn cocycle_system(&self) -> F2Matrix {
        let d = self.module_dim();
        let cols = self.generators * d;
        let mut rows = Vec::new();
        for r in &self.relators {
            let blocks = self.cocycle_expansion(&r.word);
            for i in 0..d {
                let mut row = F2Vec::zeros(cols);
                for (s, b) in blocks.iter().enumerate() {
                    for j in b.row(i).ones_iter() {
                        row.set(s * d + j, true);
                    }
                }
                rows.push(row);
            }
        }
        F2Matrix::from_rows(cols, rows)
    }

    fn coboundary(&self, v: &F2Vec) -> F2Vec {
        let d = self.module_dim();
        let mut out = F2Vec::zeros(self.generators * d);
        for (s, m) in self.action.iter().enumerate() {
            let mut x = m.mul_vec(v);
            x.xor_assign(v);
            for j in x.ones_iter() {
                out.set(s * d + j, true);
            }
        }
        out
    }

    pub fn is_cocycle(&self, c: &Cocycle1) -> bool {
        self.cocycle_system().mul_vec(&c.stacked()).is_zero()
    }

    /// Whether `c = s v - v` for a single `v` and every generator `s`.
    pub fn is_coboundary(&self, c: &Cocycle1) -> bool {
        let d = self.module_dim();
        let mut rows = Vec::new();
        for m in &self.action {
            rows.extend(m.add(&F2Matrix::identity(d)).rows().iter().cloned());
        }
        F2Matrix::from_rows(d, rows).solve(&c.stacked()).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle1 {
    pub values: Vec<F2Vec>,
}

impl Cocycle1 {
    pub fn stacked(&self) -> F2Vec {
        let d = self.values.first().map_or(0, |v| v.len());
        let mut out = F2Vec::zeros(self.values.len() * d);
        for (s, v) in self.values.iter().enumerate() {
            for j in v.ones_iter() {
                out.set(s * d + j, true);
            }
        }
        out
    }

    pub fn from_stacked(generators: usize, d: usize, v: &F2Vec) -> Self {
        Cocycle1 {
            values: (0..generators).map(|s| v.slice(s * d, d)).collect(),
        }
    }

    pub fn add(&self, other: &Cocycle1) -> Cocycle1 {
        Cocycle1 {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| {
                    let mut a = a.clone();
                    a.xor_assign(b);
                    a
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct H1Result {
    pub dim: usize,
    pub cocycles_dim: usize,
    pub coboundaries_dim: usize,
    /// Cocycles whose classes form a basis of `H^1`.
    pub representatives: Vec<Cocycle1>,
}

pub fn presentation_h1(p: &GroupPresentationF2) -> H1Result {
    let d = p.module_dim();
    if d == 0 {
        return H1Result {
            dim: 0,
            cocycles_dim: 0,
            coboundaries_dim: 0,
            representatives: Vec::new(),
        };
    }
    let z1 = p.cocycle_system().nullspace();
    let mut span = Echelon::new(p.generators * d);
    for j in 0..d {
        span.insert(p.coboundary(&F2Vec::unit(d, j)));
    }
    let b1 = span.rank();
    let mut representatives = Vec::new();
    for z in &z1 {
        if span.insert(z.clone()) {
            representatives.push(Cocycle1::from_stacked(p.generators, d, z));
        }
    }
    H1Result {
        dim: z1.len() - b1,
        cocycles_dim: z1.len(),
        coboundaries_dim: b1,
        representatives,
    }
}

/// `dim Hom(G, Z2) = generators - rank` of the exponent-sum matrix mod 2.
pub fn abelianization_dim_mod2(generators: usize, relators: &[Relator]) -> usize {
    let rows: Vec<F2Vec> = relators
        .iter()
        .map(|r| {
            let mut v = F2Vec::zeros(generators);
            for l in &r.word {
                v.flip(l.gen);
            }
            v
        })
        .collect();
    generators - F2Matrix::from_rows(generators, rows).rank()
}

fn word(gens: &[usize]) -> GroupWord {
    gens.iter().map(|&s| GenLetter::new(s)).collect()
}

fn power(w: &[GenLetter], k: usize) -> GroupWord {
    (0..k).flat_map(|_| w.iter().copied()).collect()
}

fn commutator_like(lhs: GroupWord, rhs: &[GenLetter]) -> GroupWord {
    let mut w = lhs;
    w.extend(inverse_word(rhs));
    w
}

/// Relators of the hyperelliptic mapping class group on generators
/// `sigma_1..sigma_{2g+1}` (0-based here): far commutation, braid
/// relations, `theta^(2g+2)`, `(theta kappa)^2` and
/// `sigma_1 theta kappa = theta kappa sigma_1`, with
/// `theta = sigma_1 ... sigma_{2g+1}`, `kappa = sigma_{2g+1} ... sigma_1`.
pub fn birman_hilden_relators(g: Genus) -> Vec<Relator> {
    let m = 2 * g.get() + 1;
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 2..m {
            out.push(Relator {
                name: format!("s{}s{}=s{}s{}", a + 1, b + 1, b + 1, a + 1),
                word: commutator_like(word(&[a, b]), &word(&[b, a])),
            });
        }
    }
    for a in 0..m - 1 {
        out.push(Relator {
            name: format!("braid {}", a + 1),
            word: commutator_like(word(&[a, a + 1, a]), &word(&[a + 1, a, a + 1])),
        });
    }
    let theta: Vec<usize> = (0..m).collect();
    let kappa: Vec<usize> = (0..m).rev().collect();
    let tk: GroupWord = word(&theta).into_iter().chain(word(&kappa)).collect();
    out.push(Relator {
        name: "theta^(2g+2)".into(),
        word: power(&word(&theta), m + 1),
    });
    out.push(Relator {
        name: "(theta kappa)^2".into(),
        word: power(&tk, 2),
    });
    let mut lhs = vec![GenLetter::new(0)];
    lhs.extend(tk.iter().copied());
    let mut rhs = tk.clone();
    rhs.push(GenLetter::new(0));
    out.push(Relator {
        name: "s1 (theta kappa) = (theta kappa) s1".into(),
        word: commutator_like(lhs, &rhs),
    });
    out
}

/// The presentation acting on `H^*` (dual coordinates over the f-basis) by
/// `phi -> phi ∘ rho(s)^-1`, i.e. the matrix `(rho(s)^-1)^T`.
pub fn dual_homology_presentation(g: Genus) -> Result<GroupPresentationF2> {
    let action = all_generators(g)
        .iter()
        .map(|m| {
            m.inverse()
                .map(|i| i.transpose())
                .ok_or_else(|| Error::Infeasible("singular generator".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    GroupPresentationF2::new(2 * g.get() + 1, birman_hilden_relators(g), action)
}

pub fn trivial_module_presentation(g: Genus) -> Result<GroupPresentationF2> {
    let m = 2 * g.get() + 1;
    GroupPresentationF2::new(m, birman_hilden_relators(g), vec![F2Matrix::identity(1); m])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_act_trivially() {
        for gi in 3..=6 {
            let g = Genus::new(gi).unwrap();
            assert!(dual_homology_presentation(g).is_ok());
        }
    }

    #[test]
    fn broken_action_is_rejected() {
        let g = Genus::new(3).unwrap();
        let mut action = all_generators(g);
        action.swap(0, 1);
        assert!(GroupPresentationF2::new(7, birman_hilden_relators(g), action).is_err());
    }

    #[test]
    fn h1_dual_homology_g3() {
        let g = Genus::new(3).unwrap();
        let p = dual_homology_presentation(g).unwrap();
        let h = presentation_h1(&p);
        assert_eq!(h.dim, 1);
        assert_eq!(h.representatives.len(), 1);
        assert!(p.is_cocycle(&h.representatives[0]));
        assert!(!p.is_coboundary(&h.representatives[0]));
    }

    #[test]
    fn trivial_module_matches_abelianization() {
        let g = Genus::new(3).unwrap();
        let p = trivial_module_presentation(g).unwrap();
        let h = presentation_h1(&p);
        assert_eq!(h.dim, abelianization_dim_mod2(7, &p.relators));
        assert_eq!(h.dim, 1);
    }

    #[test]
    fn zero_module() {
        let g = Genus::new(3).unwrap();
        let p =
            GroupPresentationF2::new(7, birman_hilden_relators(g), vec![F2Matrix::zeros(0, 0); 7])
                .unwrap();
        assert_eq!(presentation_h1(&p).dim, 0);
    }

    #[test]
    fn free_group_one_generator() {
        // Z acting trivially on Z2: H^1 = Z2.
        let p = GroupPresentationF2::new(1, vec![], vec![F2Matrix::identity(1)]).unwrap();
        assert_eq!(presentation_h1(&p).dim, 1);
        // Z/2 = <s | s^2> on Z2: H^1 = Z2 as well.
        let r = Relator {
            name: "s^2".into(),
            word: vec![GenLetter::new(0), GenLetter::new(0)],
        };
        let p = GroupPresentationF2::new(1, vec![r], vec![F2Matrix::identity(1)]).unwrap();
        assert_eq!(presentation_h1(&p).dim, 1);
    }
}
