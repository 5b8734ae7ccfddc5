//! Single integrals of the normalised holomorphic forms, the period matrices
//! and the real harmonic forms `alpha_i`, `beta_i`.
//!
//! `omega'_i = (N sqrt(-1) / (2 B(i/N, 1/2))) z^(i-1) dz / w` with `N = 2g+2`
//! integrates to exactly `zeta^(ij)` over `e_j`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::curve::{loop_word, Genus, LoopSymbol, PathLetter, PathWord};
use crate::error::{Error, Result};
use crate::kernel::{beta_half, zeta_pow};
use crate::tolerances::{PD_PIVOT, PERIOD_MATRIX, PERIOD_MATRIX_ROUTES};

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    OmegaPrime,
    OmegaPrimeConj,
    Alpha,
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormRef {
    pub kind: FormKind,
    pub index: usize,
}

impl FormRef {
    pub fn omega(index: usize) -> Self {
        FormRef {
            kind: FormKind::OmegaPrime,
            index,
        }
    }

    pub fn omega_conj(index: usize) -> Self {
        FormRef {
            kind: FormKind::OmegaPrimeConj,
            index,
        }
    }

    pub fn alpha(index: usize) -> Self {
        FormRef {
            kind: FormKind::Alpha,
            index,
        }
    }

    pub fn beta(index: usize) -> Self {
        FormRef {
            kind: FormKind::Beta,
            index,
        }
    }

    pub fn is_holomorphic_basis(self) -> bool {
        matches!(self.kind, FormKind::OmegaPrime | FormKind::OmegaPrimeConj)
    }

    /// Position in the ordered basis `omega'_1..g, conj omega'_1..g`.
    pub fn basis_position(self, g: Genus) -> Option<usize> {
        match self.kind {
            FormKind::OmegaPrime => Some(self.index - 1),
            FormKind::OmegaPrimeConj => Some(g.get() + self.index - 1),
            _ => None,
        }
    }

    pub fn basis(g: Genus) -> Vec<FormRef> {
        let g = g.get();
        (1..=g)
            .map(FormRef::omega)
            .chain((1..=g).map(FormRef::omega_conj))
            .collect()
    }

    pub fn check(self, g: Genus) -> Result<()> {
        g.check_form_index(self.index)
    }
}

impl fmt::Display for FormRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FormKind::OmegaPrime => write!(f, "w'{}", self.index),
            FormKind::OmegaPrimeConj => write!(f, "conj(w'{})", self.index),
            FormKind::Alpha => write!(f, "alpha{}", self.index),
            FormKind::Beta => write!(f, "beta{}", self.index),
        }
    }
}

/// The constant multiplying `z^(i-1) dz / w` in `omega'_i`.
pub fn omega_scale(g: Genus, i: usize) -> Result<C> {
    let b = beta_half(g, i)?;
    Ok(C::new(0.0, g.branch_count() as f64 / (2.0 * b)))
}

fn reject_harmonic(form: FormRef) -> Result<()> {
    match form.kind {
        FormKind::Alpha => Err(Error::UnsupportedForm("alpha")),
        FormKind::Beta => Err(Error::UnsupportedForm("beta")),
        _ => Ok(()),
    }
}

/// Integral of `omega'_i` or its conjugate over one letter.
pub fn segment_period(g: Genus, form: FormRef, letter: PathLetter) -> Result<C> {
    reject_harmonic(form)?;
    form.check(g)?;
    let base = zeta_pow(g, (form.index * letter.index) as i64) * letter.direction() as f64;
    Ok(match form.kind {
        FormKind::OmegaPrime => base,
        _ => base.conj(),
    })
}

pub fn word_period(g: Genus, form: FormRef, word: &PathWord) -> Result<C> {
    word.letters()
        .iter()
        .map(|&l| segment_period(g, form, l))
        .sum()
}

/// `int_{a_j} omega'_i = zeta^(i(2j-1)) (1 - zeta^i)` and
/// `int_{b_j} omega'_i = (zeta^(2ij) - 1)/(zeta^i + 1)`; conjugated for the
/// antiholomorphic forms.
pub fn loop_period_closed(g: Genus, form: FormRef, symbol: LoopSymbol) -> Result<C> {
    reject_harmonic(form)?;
    form.check(g)?;
    let i = form.index as i64;
    let v = match symbol {
        LoopSymbol::A(j) => {
            check_loop(g, j)?;
            let j = j as i64;
            zeta_pow(g, i * (2 * j - 1)) * (1.0 - zeta_pow(g, i))
        }
        LoopSymbol::B(j) => {
            check_loop(g, j)?;
            let j = j as i64;
            (zeta_pow(g, 2 * i * j) - 1.0) / (zeta_pow(g, i) + 1.0)
        }
    };
    Ok(match form.kind {
        FormKind::OmegaPrime => v,
        _ => v.conj(),
    })
}

fn check_loop(g: Genus, k: usize) -> Result<()> {
    if k == 0 || k > g.get() {
        return Err(Error::IndexOutOfRange {
            what: "loop",
            index: k as i64,
            max: g.get() as i64,
        });
    }
    Ok(())
}

/// `Omega_a`, `Omega_b` (rows: forms, columns: loops), their inverses and
/// the period matrix `Z = Omega_a^-1 Omega_b`.
#[derive(Clone, Debug)]
pub struct PeriodMatrices {
    pub genus: Genus,
    pub omega_a: DMatrix<C>,
    pub omega_b: DMatrix<C>,
    pub omega_a_inv: DMatrix<C>,
    pub omega_b_inv: DMatrix<C>,
    pub z: DMatrix<C>,
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn consistency(what: &str, error: f64, tolerance: f64) -> Result<()> {
    if error.is_finite() && error <= tolerance {
        Ok(())
    } else {
        Err(Error::Consistency {
            what: what.to_string(),
            error,
            tolerance,
        })
    }
}

impl PeriodMatrices {
    pub fn new(g: Genus) -> Result<Self> {
        let n = g.get();
        let fill = |f: &dyn Fn(usize) -> LoopSymbol| {
            DMatrix::from_fn(n, n, |r, c| {
                loop_period_closed(g, FormRef::omega(r + 1), f(c + 1)).expect("indices in range")
            })
        };
        let omega_a = fill(&LoopSymbol::A);
        let omega_b = fill(&LoopSymbol::B);
        let omega_a_inv = omega_a_inverse_closed(g);
        let omega_b_inv = omega_b_inverse_closed(g);

        let lu_a = omega_a
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Infeasible("Omega_a is singular".into()))?;
        let lu_b = omega_b
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Infeasible("Omega_b is singular".into()))?;
        consistency(
            "closed-form inverse of Omega_a",
            max_abs(&(&omega_a_inv - lu_a)),
            PERIOD_MATRIX,
        )?;
        consistency(
            "closed-form inverse of Omega_b",
            max_abs(&(&omega_b_inv - lu_b)),
            PERIOD_MATRIX,
        )?;

        let z = &omega_a_inv * &omega_b;
        consistency(
            "Schindler sum against Omega_a^-1 Omega_b",
            max_abs(&(&z - z_schindler(g))),
            PERIOD_MATRIX_ROUTES,
        )?;
        consistency(
            "cotangent form against Omega_a^-1 Omega_b",
            max_abs(&(&z - z_cotangent(g))),
            PERIOD_MATRIX_ROUTES,
        )?;
        Ok(PeriodMatrices {
            genus: g,
            omega_a,
            omega_b,
            omega_a_inv,
            omega_b_inv,
            z,
        })
    }

    pub fn symmetry_error(&self) -> f64 {
        max_abs(&(&self.z - self.z.transpose()))
    }

    pub fn real_part_max(&self) -> f64 {
        self.z.iter().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    /// Cholesky test on `Im Z`; returns the smallest pivot.
    pub fn im_z_min_pivot(&self) -> f64 {
        let n = self.genus.get();
        let a = DMatrix::from_fn(n, n, |r, c| 0.5 * (self.z[(r, c)].im + self.z[(c, r)].im));
        min_cholesky_pivot(&a)
    }

    pub fn im_z_positive_definite(&self) -> bool {
        self.im_z_min_pivot() > PD_PIVOT
    }
}

/// Smallest diagonal pivot of an LDL^T factorisation without pivoting;
/// negative or tiny means not positive definite.
pub fn min_cholesky_pivot(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    let mut d = vec![0.0; n];
    let mut min = f64::INFINITY;
    for j in 0..n {
        let mut dj = a[(j, j)];
        for k in 0..j {
            dj -= l[(j, k)] * l[(j, k)] * d[k];
        }
        d[j] = dj;
        min = min.min(dj);
        if dj <= 0.0 {
            return dj;
        }
        l[(j, j)] = 1.0;
        for i in j + 1..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)] * d[k];
            }
            l[(i, j)] = v / dj;
        }
    }
    min
}

pub fn omega_a_inverse_closed(g: Genus) -> DMatrix<C> {
    let n = g.get();
    let s = 1.0 / (n as f64 + 1.0);
    DMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        let zj = zeta_pow(g, j);
        zj * (zeta_pow(g, -2 * i * j) - 1.0) / (1.0 - zj) * s
    })
}

pub fn omega_b_inverse_closed(g: Genus) -> DMatrix<C> {
    let n = g.get();
    let s = 1.0 / (n as f64 + 1.0);
    DMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        zeta_pow(g, -2 * i * j) * (1.0 + zeta_pow(g, j)) * s
    })
}

pub fn z_schindler(g: Genus) -> DMatrix<C> {
    let n = g.get();
    let s = 1.0 / (n as f64 + 1.0);
    DMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        let sum: C = (1..=n as i64)
            .map(|k| {
                zeta_pow(g, k) * (zeta_pow(g, -2 * i * k) - 1.0) * (zeta_pow(g, 2 * k * j) - 1.0)
                    / (1.0 - zeta_pow(g, 2 * k))
            })
            .sum();
        sum * s
    })
}

/// The real form `Z_ij = (sqrt(-1)/(g+1)) sum_{nu=1}^{i} [h((2nu-1)/(g+1) pi)
/// + h((2(j-nu)+1)/(g+1) pi)]` with `h(x) = (1 + cos x)/sin x`.
pub fn z_cotangent(g: Genus) -> DMatrix<C> {
    let n = g.get();
    let m = n as f64 + 1.0;
    // (1 + cos x)/sin x = cot(x/2); the half-angle form has no 0/0 at x = pi,
    // which occurs for even g.
    let h = |odd: i64| {
        let half = odd as f64 * std::f64::consts::PI / (2.0 * m);
        half.cos() / half.sin()
    };
    DMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        let sum: f64 = (1..=i).map(|nu| h(2 * nu - 1) + h(2 * (j - nu) + 1)).sum();
        C::new(0.0, sum / m)
    })
}

/// Coefficients of `alpha_i = Re((Omega_b^-1 omega')_i)` and
/// `beta_i = -Re((Omega_a^-1 omega')_i)` over the basis
/// `omega'_1..g, conj omega'_1..g`.
#[derive(Clone, Debug)]
pub struct HarmonicCoefficients {
    pub genus: Genus,
    alpha: DMatrix<C>,
    beta: DMatrix<C>,
}

impl HarmonicCoefficients {
    pub fn new(p: &PeriodMatrices) -> Self {
        let n = p.genus.get();
        let build = |m: &DMatrix<C>, sign: f64| {
            DMatrix::from_fn(n, 2 * n, |r, c| {
                if c < n {
                    m[(r, c)] * (0.5 * sign)
                } else {
                    m[(r, c - n)].conj() * (0.5 * sign)
                }
            })
        };
        HarmonicCoefficients {
            genus: p.genus,
            alpha: build(&p.omega_b_inv, 1.0),
            beta: build(&p.omega_a_inv, -1.0),
        }
    }

    pub fn for_genus(g: Genus) -> Result<Self> {
        Ok(Self::new(&PeriodMatrices::new(g)?))
    }

    /// Coefficient vector of length 2g for any form.
    pub fn expand(&self, form: FormRef) -> Result<Vec<C>> {
        let g = self.genus;
        form.check(g)?;
        let n = g.get();
        let mut v = vec![C::new(0.0, 0.0); 2 * n];
        match form.kind {
            FormKind::OmegaPrime | FormKind::OmegaPrimeConj => {
                v[form.basis_position(g).unwrap()] = C::new(1.0, 0.0);
            }
            FormKind::Alpha => {
                v.copy_from_slice(self.alpha.row(form.index - 1).transpose().as_slice())
            }
            FormKind::Beta => {
                v.copy_from_slice(self.beta.row(form.index - 1).transpose().as_slice())
            }
        }
        Ok(v)
    }

    /// Integral of any form over a word, through the basis expansion.
    pub fn word_period(&self, form: FormRef, word: &PathWord) -> Result<C> {
        let g = self.genus;
        let c = self.expand(form)?;
        let mut total = C::new(0.0, 0.0);
        for (b, coeff) in FormRef::basis(g).into_iter().zip(c) {
            if coeff != C::new(0.0, 0.0) {
                total += coeff * word_period(g, b, word)?;
            }
        }
        Ok(total)
    }

    pub fn loop_period(&self, form: FormRef, symbol: LoopSymbol) -> Result<C> {
        self.word_period(form, &loop_word(self.genus, symbol)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{loop_words, relator_word};
    use crate::tolerances::{CLOSED_FORM, DUALITY_CLOSED, RELATOR_CLOSED};

    #[test]
    fn segment_periods_are_roots_of_unity() {
        let g = Genus::new(3).unwrap();
        let p = segment_period(g, FormRef::omega(2), PathLetter::plain(3)).unwrap();
        assert!((p - zeta_pow(g, 6)).norm() < 1e-15);
        let q = segment_period(g, FormRef::omega(2), PathLetter::involuted(3)).unwrap();
        assert!((p + q).norm() < 1e-15);
        let r = segment_period(g, FormRef::omega_conj(2), PathLetter::plain(3).inverse()).unwrap();
        assert!((r + p.conj()).norm() < 1e-15);
        assert_eq!(
            segment_period(g, FormRef::alpha(1), PathLetter::plain(0)),
            Err(Error::UnsupportedForm("alpha"))
        );
        assert!(segment_period(g, FormRef::omega(4), PathLetter::plain(0)).is_err());
    }

    #[test]
    fn closed_loop_periods_match_words() {
        for gi in 3..=12 {
            let g = Genus::new(gi).unwrap();
            for (sym, word) in loop_words(g) {
                for f in FormRef::basis(g) {
                    let a = word_period(g, f, &word).unwrap();
                    let b = loop_period_closed(g, f, sym).unwrap();
                    assert!((a - b).norm() < CLOSED_FORM, "g={gi} {sym} {f}");
                }
            }
        }
    }

    #[test]
    fn relator_periods_vanish() {
        for gi in 3..=12 {
            let g = Genus::new(gi).unwrap();
            for f in FormRef::basis(g) {
                assert!(word_period(g, f, &relator_word(g)).unwrap().norm() < RELATOR_CLOSED);
            }
        }
    }

    #[test]
    fn period_matrix_properties() {
        for gi in 3..=12 {
            let g = Genus::new(gi).unwrap();
            let p = PeriodMatrices::new(g).unwrap();
            assert!(p.symmetry_error() < PERIOD_MATRIX, "g={gi}");
            assert!(p.real_part_max() < PERIOD_MATRIX, "g={gi}");
            assert!(p.im_z_positive_definite(), "g={gi}");
        }
    }

    #[test]
    fn cotangent_form_g4() {
        let g = Genus::new(4).unwrap();
        assert!(max_abs(&(z_schindler(g) - z_cotangent(g))) < PERIOD_MATRIX_ROUTES);
    }

    #[test]
    fn pivot_detects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(min_cholesky_pivot(&m) < 0.0);
    }

    #[test]
    fn harmonic_duality() {
        for gi in 3..=12 {
            let g = Genus::new(gi).unwrap();
            let h = HarmonicCoefficients::for_genus(g).unwrap();
            for i in 1..=gi as usize {
                for j in 1..=gi as usize {
                    let d = if i == j { 1.0 } else { 0.0 };
                    let checks = [
                        (
                            h.loop_period(FormRef::alpha(i), LoopSymbol::A(j)).unwrap(),
                            0.0,
                        ),
                        (
                            h.loop_period(FormRef::alpha(i), LoopSymbol::B(j)).unwrap(),
                            d,
                        ),
                        (
                            h.loop_period(FormRef::beta(i), LoopSymbol::A(j)).unwrap(),
                            -d,
                        ),
                        (
                            h.loop_period(FormRef::beta(i), LoopSymbol::B(j)).unwrap(),
                            0.0,
                        ),
                    ];
                    for (v, want) in checks {
                        assert!((v - want).norm() < DUALITY_CLOSED, "g={gi} i={i} j={j}");
                    }
                }
            }
        }
    }
}
