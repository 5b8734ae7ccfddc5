//! Length-two iterated integrals `int_gamma f1 f2` (f1 integrated first).
//!
//! On a single letter every pair of holomorphic/antiholomorphic forms
//! integrates to half the product of the two periods; longer words follow
//! from the concatenation rule
//! `int_{pq} f1 f2 = int_p f1 f2 + int_q f1 f2 + int_p f1 * int_q f2`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::curve::{loop_word, Genus, LoopSymbol, Orientation, PathLetter, PathWord};
use crate::error::{Error, Result};
use crate::kernel::{t_u, zeta_pow};
use crate::periods::{segment_period, FormKind, FormRef, HarmonicCoefficients};

type C = Complex64;

/// `int_letter f1 f2` for `f1, f2` among `omega'` and its conjugate.
pub fn segment_iterated(g: Genus, f1: FormRef, f2: FormRef, letter: PathLetter) -> Result<C> {
    // int_{gamma^-1} f1 f2 = int_gamma f2 f1, and iota^* negates both forms,
    // so every letter reduces to e_j itself.
    let (first, second) = match letter.orientation {
        Orientation::Forward => (f1, f2),
        Orientation::Reverse => (f2, f1),
    };
    let e = PathLetter::plain(letter.index);
    Ok(0.5 * segment_period(g, first, e)? * segment_period(g, second, e)?)
}

/// `M[a][b] = int_word basis_a basis_b` over `omega'_1..g, conj omega'_1..g`.
pub fn basis_iterated_matrix(g: Genus, word: &PathWord) -> Result<DMatrix<C>> {
    let basis = FormRef::basis(g);
    let n = basis.len();
    let mut m = DMatrix::<C>::zeros(n, n);
    let mut acc = vec![C::new(0.0, 0.0); n];
    let mut p = vec![C::new(0.0, 0.0); n];
    for &letter in word.letters() {
        for (a, f) in basis.iter().enumerate() {
            p[a] = segment_period(g, *f, letter)?;
        }
        for a in 0..n {
            for b in 0..n {
                m[(a, b)] += segment_iterated(g, basis[a], basis[b], letter)? + acc[a] * p[b];
            }
        }
        for a in 0..n {
            acc[a] += p[a];
        }
    }
    Ok(m)
}

/// `c1^T M c2`.
pub fn bilinear(m: &DMatrix<C>, c1: &[C], c2: &[C]) -> C {
    let mut s = C::new(0.0, 0.0);
    for (a, x) in c1.iter().enumerate() {
        if *x == C::new(0.0, 0.0) {
            continue;
        }
        for (b, y) in c2.iter().enumerate() {
            s += x * m[(a, b)] * y;
        }
    }
    s
}

/// Iterated integral of any two forms over a word, through the basis
/// expansion of `alpha`/`beta`.
pub fn word_iterated(
    h: &HarmonicCoefficients,
    f1: FormRef,
    f2: FormRef,
    word: &PathWord,
) -> Result<C> {
    let m = basis_iterated_matrix(h.genus, word)?;
    Ok(bilinear(&m, &h.expand(f1)?, &h.expand(f2)?))
}

pub fn harmonic_pair_iterated(
    h: &HarmonicCoefficients,
    f1: FormRef,
    f2: FormRef,
    symbol: LoopSymbol,
) -> Result<C> {
    word_iterated(h, f1, f2, &loop_word(h.genus, symbol)?)
}

/// `int_{a_k} omega'_i omega'_j` and `int_{b_k} omega'_i omega'_j` with the
/// second form replaced by `zeta^j -> zeta^-j` for the conjugate case.
fn omega_pair(g: Genus, i: i64, j: i64, symbol: LoopSymbol) -> C {
    let z = |e: i64| zeta_pow(g, e);
    match symbol {
        LoopSymbol::A(k) => {
            let k = k as i64;
            0.5 * z((i + j) * (2 * k - 1)) * (1.0 - 2.0 * z(j) + z(i + j))
        }
        LoopSymbol::B(k) => {
            let k = k as i64;
            let mut s = C::new(0.0, 0.0);
            for l in 1..=k {
                s += 0.5 * z((i + j) * (2 * l - 2)) * (1.0 - 2.0 * z(i) + z(i + j));
            }
            for m in 1..=k {
                for l in 1..m {
                    s += (z(i) - 1.0) * (z(j) - 1.0) * z(i * (2 * m - 2) + j * (2 * l - 2));
                }
            }
            s
        }
    }
}

/// Closed form of `int_loop f1 f2` for `f1, f2` among `omega'` and its
/// conjugate.
pub fn loop_iterated_closed(g: Genus, f1: FormRef, f2: FormRef, symbol: LoopSymbol) -> Result<C> {
    f1.check(g)?;
    f2.check(g)?;
    let k = symbol.index();
    if k == 0 || k > g.get() {
        return Err(Error::IndexOutOfRange {
            what: "loop",
            index: k as i64,
            max: g.get() as i64,
        });
    }
    let (i, j) = (f1.index as i64, f2.index as i64);
    use FormKind::*;
    match (f1.kind, f2.kind) {
        (OmegaPrime, OmegaPrime) => Ok(omega_pair(g, i, j, symbol)),
        (OmegaPrime, OmegaPrimeConj) => Ok(omega_pair(g, i, -j, symbol)),
        (OmegaPrimeConj, OmegaPrime) => Ok(omega_pair(g, i, -j, symbol).conj()),
        (OmegaPrimeConj, OmegaPrimeConj) => Ok(omega_pair(g, i, j, symbol).conj()),
        (Alpha, _) | (_, Alpha) => Err(Error::UnsupportedForm("alpha")),
        _ => Err(Error::UnsupportedForm("beta")),
    }
}

/// The four displayed formulas for `int alpha_i alpha_j` and
/// `int beta_i beta_j` over `a_k`, `b_k`, written with the sums `t_u`.
pub fn harmonic_pair_closed(g: Genus, f1: FormRef, f2: FormRef, symbol: LoopSymbol) -> Result<f64> {
    f1.check(g)?;
    f2.check(g)?;
    let t = |u: i64| t_u(g, u).re;
    let (i, j) = (f1.index as i64, f2.index as i64);
    let d = 2.0 * (g.get() as f64 + 1.0).powi(2);
    use FormKind::*;
    match (f1.kind, f2.kind, symbol) {
        (Beta, Beta, LoopSymbol::A(k)) => {
            let k = k as i64;
            let s1: f64 = (1..=i).map(|u| t(2 * k - 2 * u)).sum();
            let s2: f64 = (1..=j).map(|u| t(2 * k - 2 * u + 2)).sum();
            Ok(((t(2 * k - 2 * j) - t(2 * k)) * s1 + (t(2 * k) - t(2 * k - 2 * i)) * s2) / d)
        }
        (Beta, Beta, LoopSymbol::B(_)) | (Alpha, Alpha, LoopSymbol::A(_)) => Ok(0.0),
        (Alpha, Alpha, LoopSymbol::B(k)) => {
            let k = k as i64;
            let mut s = 0.0;
            for u in 1..=k {
                s += t(2 * u - 2 * j) * t(2 * u - 2 * i)
                    - 2.0 * t(2 * u - 2 * j - 2) * t(2 * u - 2 * i)
                    + t(2 * u - 2 * j - 2) * t(2 * u - 2 * i - 2);
            }
            for v in 2..=k {
                s += 2.0
                    * (t(2 * v - 2 * i) - t(2 * v - 2 * i - 2))
                    * (t(2 * v - 2 * j - 2) - t(-2 * j));
            }
            Ok(s / d)
        }
        _ => Err(Error::UnsupportedForm("mixed or holomorphic pair")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::loop_words;
    use crate::tolerances::ENGINE_VS_FORMULA;

    #[test]
    fn engine_matches_loop_formulas() {
        for gi in 3..=8 {
            let g = Genus::new(gi).unwrap();
            for (sym, word) in loop_words(g) {
                let m = basis_iterated_matrix(g, &word).unwrap();
                let basis = FormRef::basis(g);
                for (a, f1) in basis.iter().enumerate() {
                    for (b, f2) in basis.iter().enumerate() {
                        let want = loop_iterated_closed(g, *f1, *f2, sym).unwrap();
                        assert!(
                            (m[(a, b)] - want).norm() < ENGINE_VS_FORMULA,
                            "g={gi} {sym} {f1} {f2}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn engine_matches_harmonic_formulas() {
        for gi in 3..=7 {
            let g = Genus::new(gi).unwrap();
            let h = HarmonicCoefficients::for_genus(g).unwrap();
            for sym in loop_words(g).keys() {
                for i in 1..=gi as usize {
                    for j in 1..=gi as usize {
                        for (f1, f2) in [
                            (FormRef::alpha(i), FormRef::alpha(j)),
                            (FormRef::beta(i), FormRef::beta(j)),
                        ] {
                            let e = harmonic_pair_iterated(&h, f1, f2, *sym).unwrap();
                            let c = harmonic_pair_closed(g, f1, f2, *sym).unwrap();
                            assert!(e.im.abs() < ENGINE_VS_FORMULA);
                            assert!(
                                (e.re - c).abs() < ENGINE_VS_FORMULA,
                                "g={gi} {sym} {f1} {f2}: {e} vs {c}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_a_formula_matches_display() {
        let g = Genus::new(5).unwrap();
        for k in 1..=5 {
            for i in 1..=5i64 {
                for j in 1..=5i64 {
                    let z = |e: i64| zeta_pow(g, e);
                    let want =
                        0.5 * z((i - j) * (2 * k as i64 - 1)) * (1.0 - 2.0 * z(-j) + z(i - j));
                    let got = loop_iterated_closed(
                        g,
                        FormRef::omega(i as usize),
                        FormRef::omega_conj(j as usize),
                        LoopSymbol::A(k),
                    )
                    .unwrap();
                    assert!((got - want).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rejects_unsupported() {
        let g = Genus::new(3).unwrap();
        assert!(segment_iterated(
            g,
            FormRef::alpha(1),
            FormRef::omega(1),
            PathLetter::plain(0)
        )
        .is_err());
        assert!(
            harmonic_pair_closed(g, FormRef::alpha(1), FormRef::beta(1), LoopSymbol::A(1)).is_err()
        );
        assert!(
            loop_iterated_closed(g, FormRef::omega(1), FormRef::omega(1), LoopSymbol::B(4))
                .is_err()
        );
    }
}
